use std::collections::{BTreeMap, BTreeSet};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::instances::BundledDomain;
use super::templates::{instantiate_template, sample_observations, Family};
use super::{DatasetError, LEVELS};
use crate::logic::{holds_as, Atom, Formula};
use crate::pddl::{ActionLabel, ProblemModel};
use crate::recognizer::{plan_hypothesis, Hypothesis, RecognizeError, RecognizeOptions};

#[derive(Debug, Clone, PartialEq)]
pub struct GenerateOptions {
    pub hypotheses: usize,
    /// Instance/hypothesis draws per problem before giving up.
    pub budget: usize,
    /// Reject hypothesis sets where every execution of one goal also
    /// satisfies another.
    pub non_subsumed: bool,
    pub recognize: RecognizeOptions,
}

impl Default for GenerateOptions {
    fn default() -> Self {
        GenerateOptions {
            hypotheses: 4,
            budget: 300,
            non_subsumed: true,
            recognize: RecognizeOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedProblem {
    pub name: String,
    pub domain: BundledDomain,
    pub family: Family,
    pub problem: ProblemModel,
    pub hypotheses: Vec<Hypothesis>,
    pub true_goal: String,
    /// The execution observations were sampled from.
    pub execution: Vec<ActionLabel>,
    pub observations: BTreeMap<u32, Vec<ActionLabel>>,
    /// Policy executions of every hypothesis, in hypothesis order.
    pub executions: Vec<Vec<Vec<ActionLabel>>>,
    pub seed: u64,
}

/// Slot fillers for `n` hypotheses: pairs and triples come with their
/// order-swapped counterpart.
fn draw_slots(
    family: Family,
    facts: &[Atom],
    n: usize,
    rng: &mut impl Rng,
) -> Option<Vec<Vec<Formula>>> {
    let atom = |a: &Atom| Formula::Atom(a.clone());
    let distinct = |k: usize, rng: &mut dyn rand::RngCore| -> Option<Vec<Formula>> {
        (facts.len() >= k).then(|| {
            sample(rng, facts.len(), k)
                .into_iter()
                .map(|i| atom(&facts[i]))
                .collect()
        })
    };
    let mut out: Vec<Vec<Formula>> = Vec::new();
    let mut tries = 0;
    while out.len() < n {
        tries += 1;
        if tries > 50 * n {
            return None;
        }
        let group: Vec<Vec<Formula>> = match family {
            Family::Conjunctive | Family::Eventually => {
                vec![distinct(rng.gen_range(1..=2), rng)?]
            }
            Family::OrderedEventually | Family::Once => {
                let s = distinct(2, rng)?;
                vec![s.clone(), vec![s[1].clone(), s[0].clone()]]
            }
            // literal slots `p U q` / `q U p` make one side hold at the
            // initial state, so the pair orders two facts instead
            Family::Until => {
                let s = distinct(2, rng)?;
                vec![
                    vec![Formula::not(s[1].clone()), s[0].clone()],
                    vec![Formula::not(s[0].clone()), s[1].clone()],
                ]
            }
            Family::Since => {
                let s = distinct(3, rng)?;
                vec![s.clone(), vec![s[2].clone(), s[1].clone(), s[0].clone()]]
            }
        };
        for g in group {
            if out.len() < n && !out.contains(&g) {
                out.push(g);
            }
        }
    }
    Some(out)
}

fn rejected(e: RecognizeError) -> Result<(), RecognizeError> {
    match e {
        RecognizeError::Planner { .. } => Ok(()),
        e => Err(e),
    }
}

/// Generates one problem from its own seed.
pub fn generate_problem(
    domain: BundledDomain,
    family: Family,
    name: &str,
    seed: u64,
    opts: &GenerateOptions,
) -> Result<GeneratedProblem, DatasetError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = domain.domain();
    'attempt: for _ in 0..opts.budget {
        let inst = domain.instance(&mut rng, name);
        let Some(slots) = draw_slots(family, &inst.facts, opts.hypotheses, &mut rng) else {
            continue;
        };
        let hypotheses = slots
            .iter()
            .enumerate()
            .map(|(i, s)| {
                Ok(Hypothesis {
                    id: format!("g{i}"),
                    dialect: family.dialect(),
                    formula: instantiate_template(family, s)?,
                })
            })
            .collect::<Result<Vec<_>, DatasetError>>()?;
        let atoms: BTreeSet<Atom> = hypotheses.iter().flat_map(|h| h.formula.atoms()).collect();
        let mut planned = Vec::new();
        for h in &hypotheses {
            match plan_hypothesis(&d, &inst.problem, h, &opts.recognize, Some(&atoms)) {
                Ok(Some(g)) if g.executions.iter().all(|e| !e.is_empty()) => planned.push(g),
                Ok(_) => continue 'attempt,
                Err(e) => {
                    rejected(e)?;
                    continue 'attempt;
                }
            }
        }
        if opts.non_subsumed {
            for (i, g) in planned.iter().enumerate() {
                for (j, h) in hypotheses.iter().enumerate() {
                    let covered = g.traces.iter().all(|t| {
                        holds_as(&h.formula, h.dialect, t).expect("hypotheses match their dialect")
                    });
                    if i != j && covered {
                        continue 'attempt;
                    }
                }
            }
        }
        let truth = rng.gen_range(0..hypotheses.len());
        let runs = &planned[truth].executions;
        let execution = runs[rng.gen_range(0..runs.len())].clone();
        let observations = LEVELS
            .iter()
            .map(|&l| (l, sample_observations(&execution, l, rng.gen())))
            .collect();
        return Ok(GeneratedProblem {
            name: name.to_string(),
            domain,
            family,
            problem: inst.problem,
            true_goal: hypotheses[truth].id.clone(),
            hypotheses,
            execution,
            observations,
            executions: planned.into_iter().map(|g| g.executions).collect(),
            seed,
        });
    }
    Err(DatasetError::BudgetExhausted {
        domain: domain.name().to_string(),
        family,
        name: name.to_string(),
    })
}

/// `count` problems; problem `i` draws from stream `i` of `seed`, so the
/// result does not depend on the thread count.
pub fn generate_dataset(
    domain: BundledDomain,
    family: Family,
    count: usize,
    seed: u64,
    opts: &GenerateOptions,
) -> Result<Vec<GeneratedProblem>, DatasetError> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            r.set_stream(i as u64);
            let name = format!("{}-{}-{i:03}", domain.name(), family.name());
            generate_problem(domain, family, &name, r.gen(), opts)
        })
        .collect()
}
