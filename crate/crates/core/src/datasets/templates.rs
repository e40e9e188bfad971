use std::fmt;
use std::ops::RangeInclusive;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::DatasetError;
use crate::logic::{Dialect, Formula};
use crate::pddl::ActionLabel;

/// Goal shapes used to build hypothesis sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `p1 & p2`, reached at the last state.
    Conjunctive,
    /// `F(p1 & p2)`.
    Eventually,
    /// `F(p1 & X(F(p2)))`.
    OrderedEventually,
    /// `p1 U p2`.
    Until,
    /// `p1 & O(p2)`.
    Once,
    /// `p1 & (!p2 S p3)`.
    Since,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Conjunctive,
        Family::Eventually,
        Family::OrderedEventually,
        Family::Until,
        Family::Once,
        Family::Since,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Conjunctive => "conjunctive",
            Family::Eventually => "eventually",
            Family::OrderedEventually => "ordered-eventually",
            Family::Until => "until",
            Family::Once => "once",
            Family::Since => "since",
        }
    }

    pub fn dialect(self) -> Dialect {
        match self {
            Family::Eventually | Family::OrderedEventually | Family::Until => Dialect::Ltlf,
            Family::Conjunctive | Family::Once | Family::Since => Dialect::Ppltl,
        }
    }

    pub fn slots(self) -> RangeInclusive<usize> {
        match self {
            Family::Conjunctive | Family::Eventually | Family::Once => 1..=2,
            Family::OrderedEventually | Family::Until => 2..=2,
            Family::Since => 3..=3,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown goal family `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoalTemplate {
    pub family: Family,
    pub slots: Vec<Formula>,
}

impl GoalTemplate {
    pub fn instantiate(&self) -> Result<Formula, DatasetError> {
        instantiate_template(self.family, &self.slots)
    }
}

pub fn instantiate_template(family: Family, slots: &[Formula]) -> Result<Formula, DatasetError> {
    if !family.slots().contains(&slots.len()) {
        return Err(DatasetError::Arity {
            family,
            expected: family.slots(),
            found: slots.len(),
        });
    }
    let s = |i: usize| slots[i].clone();
    Ok(match family {
        Family::Conjunctive => Formula::and_all(slots.to_vec()),
        Family::Eventually => Formula::eventually(Formula::and_all(slots.to_vec())),
        Family::OrderedEventually => {
            Formula::eventually(Formula::and(s(0), Formula::next(Formula::eventually(s(1)))))
        }
        Family::Until => Formula::until(s(0), s(1)),
        Family::Once if slots.len() == 1 => Formula::once(s(0)),
        Family::Once => Formula::and(s(0), Formula::once(s(1))),
        Family::Since => Formula::and(s(0), Formula::since(Formula::not(s(1)), s(2))),
    })
}

/// Number of observations kept at `level` percent: half-up rounding,
/// at least one.
pub fn observation_count(len: usize, level: u32) -> usize {
    ((len * level as usize + 50) / 100).clamp(1, len.max(1))
}

/// Order-preserving random subsequence of `execution` holding `level`
/// percent of its actions.
pub fn sample_observations(execution: &[ActionLabel], level: u32, seed: u64) -> Vec<ActionLabel> {
    if execution.is_empty() || level >= 100 {
        return execution.to_vec();
    }
    let k = observation_count(execution.len(), level);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx = sample(&mut rng, execution.len(), k).into_vec();
    idx.sort_unstable();
    idx.into_iter().map(|i| execution[i].clone()).collect()
}
