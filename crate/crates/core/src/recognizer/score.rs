use std::collections::{BTreeMap, HashMap, HashSet};

use super::RecognizeError;
use crate::pddl::ActionLabel;
use crate::Scalar;

/// Distance assigned to an action that no execution of a goal contains.
pub fn miss_distance<F: Scalar>() -> F {
    F::lit(5.0).exp()
}

/// Mean number of actions remaining after each action, per goal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceTable<F> {
    distances: BTreeMap<ActionLabel, F>,
}

impl<F: Scalar> DistanceTable<F> {
    /// A table in which every action misses.
    pub fn empty() -> Self {
        DistanceTable {
            distances: BTreeMap::new(),
        }
    }

    pub fn get(&self, a: &ActionLabel) -> F {
        self.distances.get(a).copied().unwrap_or_else(miss_distance)
    }

    pub fn contains(&self, a: &ActionLabel) -> bool {
        self.distances.contains_key(a)
    }

    pub fn len(&self) -> usize {
        self.distances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.distances.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ActionLabel, F)> {
        self.distances.iter().map(|(a, d)| (a, *d))
    }
}

/// For every action occurring in `executions`, the mean over all its
/// occurrences of the number of actions left until the end of that
/// execution.
pub fn average_distances<F: Scalar>(executions: &[Vec<ActionLabel>]) -> DistanceTable<F> {
    let mut acc: BTreeMap<&ActionLabel, (usize, usize)> = BTreeMap::new();
    for e in executions {
        for (i, a) in e.iter().enumerate() {
            let slot = acc.entry(a).or_default();
            slot.0 += e.len() - 1 - i;
            slot.1 += 1;
        }
    }
    DistanceTable {
        distances: acc
            .into_iter()
            .map(|(a, (sum, n))| (a.clone(), F::lit(sum as f64) / F::lit(n as f64)))
            .collect(),
    }
}

/// Pairs `(a, b)` such that `a` occurs strictly before `b` in some execution.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OrderRelation {
    pairs: HashSet<(ActionLabel, ActionLabel)>,
}

impl OrderRelation {
    pub fn from_executions(executions: &[Vec<ActionLabel>]) -> Self {
        let mut pairs = HashSet::new();
        for e in executions {
            let mut first: HashMap<&ActionLabel, usize> = HashMap::new();
            let mut last: HashMap<&ActionLabel, usize> = HashMap::new();
            for (i, a) in e.iter().enumerate() {
                first.entry(a).or_insert(i);
                last.insert(a, i);
            }
            for (a, &fa) in &first {
                for (b, &lb) in &last {
                    if fa < lb {
                        pairs.insert(((*a).clone(), (*b).clone()));
                    }
                }
            }
        }
        OrderRelation { pairs }
    }

    pub fn contains(&self, before: &ActionLabel, after: &ActionLabel) -> bool {
        self.pairs.contains(&(before.clone(), after.clone()))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// 1 when `prev` exists and never precedes `curr` in any execution.
pub fn penalty(prev: Option<&ActionLabel>, curr: &ActionLabel, order: &OrderRelation) -> u8 {
    match prev {
        Some(p) if !order.contains(p, curr) => 1,
        _ => 0,
    }
}

/// Distances and order relation of one goal hypothesis.
#[derive(Debug, Clone, PartialEq)]
pub struct GoalEvidence<F> {
    pub distances: DistanceTable<F>,
    pub order: OrderRelation,
}

impl<F: Scalar> GoalEvidence<F> {
    pub fn from_executions(executions: &[Vec<ActionLabel>]) -> Self {
        GoalEvidence {
            distances: average_distances(executions),
            order: OrderRelation::from_executions(executions),
        }
    }

    /// Evidence of a goal without executions: every action misses.
    pub fn unsolvable() -> Self {
        GoalEvidence {
            distances: DistanceTable::empty(),
            order: OrderRelation::default(),
        }
    }
}

/// `e^p * d(curr, goal) / sum of d(curr, g)` over every hypothesis `g`,
/// the goal itself included; 0 when all distances are 0.
pub fn estimated_score<F: Scalar>(
    goal: usize,
    prev: Option<&ActionLabel>,
    curr: &ActionLabel,
    evidence: &[GoalEvidence<F>],
) -> F {
    let denom = evidence
        .iter()
        .fold(F::zero(), |acc, g| acc + g.distances.get(curr));
    if denom == F::zero() {
        return F::zero();
    }
    let g = &evidence[goal];
    let p = F::lit(f64::from(penalty(prev, curr, &g.order)));
    p.exp() * g.distances.get(curr) / denom
}

/// Per-observation scores and penalties of one goal.
pub fn observation_scores<F: Scalar>(
    goal: usize,
    observations: &[ActionLabel],
    evidence: &[GoalEvidence<F>],
) -> (Vec<F>, Vec<bool>) {
    observations
        .iter()
        .enumerate()
        .map(|(i, o)| {
            let prev = i.checked_sub(1).map(|j| &observations[j]);
            (
                estimated_score(goal, prev, o, evidence),
                penalty(prev, o, &evidence[goal].order) == 1,
            )
        })
        .unzip()
}

/// Mean estimated score over the observations.
pub fn average_estimated_score<F: Scalar>(
    goal: usize,
    observations: &[ActionLabel],
    evidence: &[GoalEvidence<F>],
) -> Result<F, RecognizeError> {
    if observations.is_empty() {
        return Err(RecognizeError::EmptyObservations);
    }
    let (scores, _) = observation_scores(goal, observations, evidence);
    Ok(mean(&scores))
}

pub(crate) fn mean<F: Scalar>(xs: &[F]) -> F {
    xs.iter().fold(F::zero(), |a, &b| a + b) / F::lit(xs.len() as f64)
}

/// `1 / (1 + E)`.
pub fn likelihood<F: Scalar>(score: F) -> F {
    (F::one() + score).recip()
}

/// Normalizes `likelihood * prior`; falls back to the normalized priors
/// when every product vanishes.
pub fn normalize<F: Scalar>(likelihoods: &[F], priors: &[F]) -> Vec<F> {
    let joint: Vec<F> = likelihoods
        .iter()
        .zip(priors)
        .map(|(&l, &p)| l * p)
        .collect();
    let total = joint.iter().fold(F::zero(), |a, &b| a + b);
    if total > F::zero() {
        joint.into_iter().map(|j| j / total).collect()
    } else {
        let total = priors.iter().fold(F::zero(), |a, &b| a + b);
        priors.iter().map(|&p| p / total).collect()
    }
}

/// Indices holding the maximum value, up to a few ulps.
pub fn argmax<F: Scalar>(values: &[F]) -> Vec<usize> {
    let Some(max) = values.iter().copied().reduce(F::max) else {
        return Vec::new();
    };
    let tol = max.abs() * F::epsilon() * F::lit(8.0);
    (0..values.len())
        .filter(|&i| max - values[i] <= tol)
        .collect()
}
