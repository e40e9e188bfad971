//! Strong-cyclic and strong FOND planning, policy validation and
//! enumeration of policy executions.

mod executions;
mod exhaustive;
mod heuristic;
mod prp;
mod validate;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::logic::Atom;
use crate::pddl::{ActionId, ActionLabel, FondModel, PddlError, State};

pub use executions::{enumerate_executions, EnumerateOptions, Execution, ExecutionSet};
pub use heuristic::HAdd;
pub use validate::validate;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlannerError {
    #[error("more than {cap} executions")]
    TooManyExecutions { cap: usize },
    #[error("policy entry {index}: {source}")]
    BadPolicyEntry { index: usize, source: PddlError },
    #[error("policy entry {index}: unknown action {action}")]
    UnknownAction { index: usize, action: String },
    #[error("malformed policy JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolutionKind {
    StrongCyclic,
    Strong,
}

impl std::str::FromStr for SolutionKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "strong-cyclic" => Ok(SolutionKind::StrongCyclic),
            "strong" => Ok(SolutionKind::Strong),
            other => Err(format!("unknown planning mode `{other}`")),
        }
    }
}

/// Search budgets of the planner.
#[derive(Debug, Clone, PartialEq)]
pub struct PlannerOptions {
    /// Restarts of determinize-plan-repair before falling back.
    pub max_restarts: usize,
    /// Node expansions allowed per weak-plan search.
    pub search_node_limit: usize,
    /// Reachable states explored by the exhaustive solvers.
    pub state_limit: usize,
}

impl Default for PlannerOptions {
    fn default() -> Self {
        PlannerOptions {
            max_restarts: 2_000,
            search_node_limit: 200_000,
            state_limit: 2_000_000,
        }
    }
}

/// Partial map from non-goal states to actions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Policy {
    map: BTreeMap<State, ActionId>,
}

impl Policy {
    pub fn new() -> Self {
        Policy::default()
    }

    pub fn get(&self, s: &State) -> Option<ActionId> {
        self.map.get(s).copied()
    }

    pub fn insert(&mut self, s: State, a: ActionId) {
        self.map.insert(s, a);
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&State, ActionId)> {
        self.map.iter().map(|(s, a)| (s, *a))
    }

    /// Keeps only the entries reachable from the initial state.
    pub fn restrict_to_reachable(&self, m: &FondModel) -> Policy {
        let mut out = Policy::new();
        let mut stack = vec![m.init().clone()];
        while let Some(s) = stack.pop() {
            if m.is_goal(&s) || out.map.contains_key(&s) {
                continue;
            }
            if let Some(a) = self.get(&s) {
                out.insert(s.clone(), a);
                stack.extend(m.successors(&s, a));
            }
        }
        out
    }

    pub fn to_records(&self, m: &FondModel) -> Vec<PolicyRecord> {
        self.map
            .iter()
            .map(|(s, a)| PolicyRecord {
                state: m.state_atoms(s).iter().map(Atom::to_pddl).collect(),
                action: m.action(*a).label(),
            })
            .collect()
    }

    pub fn to_json(&self, m: &FondModel) -> String {
        serde_json::to_string_pretty(&self.to_records(m)).expect("policy records serialize")
    }

    pub fn from_records(m: &FondModel, records: &[PolicyRecord]) -> Result<Policy, PlannerError> {
        let mut p = Policy::new();
        for (index, r) in records.iter().enumerate() {
            let atoms = r
                .state
                .iter()
                .map(|s| parse_ground_atom(s))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| PlannerError::Json(format!("entry {index}: {e}")))?;
            let state = m
                .state_from_atoms(&atoms)
                .map_err(|source| PlannerError::BadPolicyEntry { index, source })?;
            let a = m
                .find_action(&r.action)
                .ok_or_else(|| PlannerError::UnknownAction {
                    index,
                    action: r.action.to_string(),
                })?;
            p.insert(state, a);
        }
        Ok(p)
    }

    pub fn from_json(m: &FondModel, text: &str) -> Result<Policy, PlannerError> {
        let records: Vec<PolicyRecord> =
            serde_json::from_str(text).map_err(|e| PlannerError::Json(e.to_string()))?;
        Policy::from_records(m, &records)
    }
}

/// One policy entry in the external JSON format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolicyRecord {
    /// Sorted ground atoms, e.g. `(vAt 11)`.
    pub state: Vec<String>,
    pub action: ActionLabel,
}

/// Parses `(pred a b)` (or `pred a b`) into a ground atom.
pub fn parse_ground_atom(s: &str) -> Result<Atom, String> {
    let label: ActionLabel = s.parse()?;
    Ok(Atom::ground(label.name, &label.args))
}

/// Strong-cyclic policy, or `None` when none exists.
pub fn solve_strong_cyclic(m: &FondModel) -> Option<Policy> {
    solve_strong_cyclic_with(m, &PlannerOptions::default())
}

pub fn solve_strong_cyclic_with(m: &FondModel, opts: &PlannerOptions) -> Option<Policy> {
    match prp::determinize_plan_repair(m, opts) {
        prp::Outcome::Solved(p) => Some(p),
        prp::Outcome::Unsolvable => None,
        prp::Outcome::Incomplete => {
            log::info!("determinize-plan-repair gave up; running exhaustive search");
            exhaustive::strong_cyclic(m, opts.state_limit)
        }
    }
}

/// Acyclic policy that reaches the goal under every outcome, or `None`.
pub fn solve_strong(m: &FondModel) -> Option<Policy> {
    solve_strong_with(m, &PlannerOptions::default())
}

pub fn solve_strong_with(m: &FondModel, opts: &PlannerOptions) -> Option<Policy> {
    exhaustive::strong(m, opts.state_limit)
}

pub fn solve(m: &FondModel, kind: SolutionKind) -> Option<Policy> {
    match kind {
        SolutionKind::StrongCyclic => solve_strong_cyclic(m),
        SolutionKind::Strong => solve_strong(m),
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn policy_json_round_trip() {
        let m = triangle_with_goal("(vAt 22)");
        let p = solve_strong_cyclic(&m).unwrap();
        let text = p.to_json(&m);
        assert!(text.contains("\"(move 11 21)\""), "{text}");
        assert_eq!(Policy::from_json(&m, &text).unwrap(), p);
        assert!(Policy::from_json(&m, "[{\"state\": [], \"action\": \"(fly a b)\"}]").is_err());
    }

    #[test]
    fn goal_true_initially_gives_empty_policy() {
        let m = triangle_with_goal("(vAt 11)");
        assert_eq!(solve_strong_cyclic(&m), Some(Policy::new()));
        assert_eq!(solve_strong(&m), Some(Policy::new()));
    }

    #[test]
    fn unreachable_goal_is_unsolvable() {
        let m = triangle_with_goal("(vAt 12)");
        assert_eq!(solve_strong_cyclic(&m), None);
        assert_eq!(solve_strong(&m), None);
    }
}
