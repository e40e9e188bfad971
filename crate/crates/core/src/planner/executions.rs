use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{PlannerError, Policy};
use crate::pddl::{ActionId, ActionLabel, FondModel, State};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerateOptions {
    /// Extra visits a state may receive on one path.
    pub loop_bound: usize,
    /// Maximum number of distinct executions.
    pub cap: usize,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            loop_bound: 1,
            cap: 100_000,
        }
    }
}

/// A policy-consistent path from the initial state to a goal state;
/// `states` has one more entry than `actions`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Execution {
    pub states: Vec<State>,
    pub actions: Vec<ActionId>,
}

impl Execution {
    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn labels(&self, m: &FondModel) -> Vec<ActionLabel> {
        self.actions.iter().map(|&a| m.action(a).label()).collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExecutionSet {
    pub executions: Vec<Execution>,
}

impl ExecutionSet {
    pub fn len(&self) -> usize {
        self.executions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.executions.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Execution> {
        self.executions.iter()
    }

    pub fn labels(&self, m: &FondModel) -> Vec<Vec<ActionLabel>> {
        self.executions.iter().map(|e| e.labels(m)).collect()
    }
}

struct Walker<'a> {
    m: &'a FondModel,
    policy: &'a Policy,
    opts: EnumerateOptions,
    visits: HashMap<State, usize>,
    states: Vec<State>,
    actions: Vec<ActionId>,
    seen: HashSet<Vec<ActionId>>,
    out: Vec<Execution>,
    steps: usize,
}

impl Walker<'_> {
    fn walk(&mut self, s: State) -> Result<(), PlannerError> {
        self.steps += 1;
        if self.steps > self.opts.cap.saturating_mul(64) {
            return Err(PlannerError::TooManyExecutions { cap: self.opts.cap });
        }
        let count = self.visits.entry(s.clone()).or_insert(0);
        if *count > self.opts.loop_bound {
            return Ok(());
        }
        *count += 1;
        self.states.push(s.clone());
        if self.m.is_goal(&s) {
            if self.seen.insert(self.actions.clone()) {
                if self.out.len() == self.opts.cap {
                    return Err(PlannerError::TooManyExecutions { cap: self.opts.cap });
                }
                self.out.push(Execution {
                    states: self.states.clone(),
                    actions: self.actions.clone(),
                });
            }
        } else if let Some(a) = self.policy.get(&s).filter(|&a| self.m.is_applicable(&s, a)) {
            self.actions.push(a);
            for t in self.m.successors(&s, a) {
                self.walk(t)?;
            }
            self.actions.pop();
        }
        self.states.pop();
        *self.visits.get_mut(&s).unwrap() -= 1;
        Ok(())
    }
}

/// Depth-first enumeration of the policy graph from the initial state.
///
/// A state may occur at most `1 + loop_bound` times on one path, so every
/// cycle is traversed at most `loop_bound` times. Executions with the same
/// action sequence are reported once, sorted lexicographically by action id.
pub fn enumerate_executions(
    m: &FondModel,
    policy: &Policy,
    opts: EnumerateOptions,
) -> Result<ExecutionSet, PlannerError> {
    let mut w = Walker {
        m,
        policy,
        opts,
        visits: HashMap::new(),
        states: Vec::new(),
        actions: Vec::new(),
        seen: HashSet::new(),
        out: Vec::new(),
        steps: 0,
    };
    w.walk(m.init().clone())?;
    let mut executions = w.out;
    executions.sort_by(|a, b| a.actions.cmp(&b.actions));
    Ok(ExecutionSet { executions })
}
