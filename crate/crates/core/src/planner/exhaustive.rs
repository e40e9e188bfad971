use std::collections::HashMap;

use super::Policy;
use crate::pddl::{ActionId, FondModel, State};

/// Explicit reachable graph: per state, applicable actions with successor
/// indices. Goal states are not expanded.
pub(crate) struct StateGraph {
    pub states: Vec<State>,
    pub goal: Vec<bool>,
    pub edges: Vec<Vec<(ActionId, Vec<usize>)>>,
}

impl StateGraph {
    pub fn build(m: &FondModel, limit: usize) -> Option<StateGraph> {
        let mut index: HashMap<State, usize> = HashMap::new();
        let mut g = StateGraph {
            states: vec![m.init().clone()],
            goal: Vec::new(),
            edges: Vec::new(),
        };
        index.insert(m.init().clone(), 0);
        let mut i = 0;
        while i < g.states.len() {
            let s = g.states[i].clone();
            let is_goal = m.is_goal(&s);
            g.goal.push(is_goal);
            let mut out = Vec::new();
            if !is_goal {
                for a in m.applicable(&s) {
                    let succ = m
                        .successors(&s, a)
                        .into_iter()
                        .map(|t| {
                            let n = g.states.len();
                            *index.entry(t.clone()).or_insert_with(|| {
                                g.states.push(t);
                                n
                            })
                        })
                        .collect();
                    out.push((a, succ));
                }
            }
            g.edges.push(out);
            if g.states.len() > limit {
                log::warn!("reachable state space exceeds {limit} states");
                return None;
            }
            i += 1;
        }
        Some(g)
    }
}

/// Greatest fixpoint of "can reach the goal using only actions that stay
/// inside the set". Each state picks an action with a successor strictly
/// closer to the goal, preferring smaller worst-case distance, then the
/// smaller action id.
pub(crate) fn strong_cyclic(m: &FondModel, limit: usize) -> Option<Policy> {
    let g = StateGraph::build(m, limit)?;
    let n = g.states.len();
    let mut alive = vec![true; n];
    let dist = loop {
        let dist = distances(&g, &alive, false);
        let next: Vec<bool> = dist.iter().map(|d| d.is_some()).collect();
        if next == alive {
            break dist;
        }
        alive = next;
    };
    dist[0]?;
    let mut policy = Policy::new();
    for s in 0..n {
        let Some(ds) = dist[s] else { continue };
        if g.goal[s] {
            continue;
        }
        let best = g.edges[s]
            .iter()
            .filter(|(_, succ)| {
                succ.iter().all(|&t| alive[t]) && succ.iter().any(|&t| dist[t] < Some(ds))
            })
            .min_by_key(|(a, succ)| (succ.iter().map(|&t| dist[t].unwrap()).max(), *a));
        let (a, _) = best.expect("alive state has a progressing action");
        policy.insert(g.states[s].clone(), *a);
    }
    Some(policy.restrict_to_reachable(m))
}

/// Backward induction: a state is solved at layer k+1 when some action
/// has all successors solved at layers <= k.
pub(crate) fn strong(m: &FondModel, limit: usize) -> Option<Policy> {
    let g = StateGraph::build(m, limit)?;
    let alive = vec![true; g.states.len()];
    let dist = distances(&g, &alive, true);
    dist[0]?;
    let mut policy = Policy::new();
    for s in 0..g.states.len() {
        let Some(ds) = dist[s] else { continue };
        if g.goal[s] {
            continue;
        }
        let (a, _) = g.edges[s]
            .iter()
            .filter(|(_, succ)| succ.iter().all(|&t| dist[t].is_some_and(|d| d < ds)))
            .min_by_key(|(a, _)| *a)
            .expect("solved state has a layered action");
        policy.insert(g.states[s].clone(), *a);
    }
    Some(policy.restrict_to_reachable(m))
}

/// Layered distances to the goal within `alive`. With `all` an action
/// counts once every successor is solved (strong); otherwise once any is
/// and all successors are alive (weak distance inside the fixpoint).
fn distances(g: &StateGraph, alive: &[bool], all: bool) -> Vec<Option<u32>> {
    let n = g.states.len();
    let mut dist: Vec<Option<u32>> = (0..n)
        .map(|s| (alive[s] && g.goal[s]).then_some(0))
        .collect();
    let mut layer = 0;
    loop {
        layer += 1;
        let mut added = Vec::new();
        for s in 0..n {
            if dist[s].is_some() || !alive[s] {
                continue;
            }
            let ok = g.edges[s].iter().any(|(_, succ)| {
                if all {
                    succ.iter().all(|&t| dist[t].is_some())
                } else {
                    succ.iter().all(|&t| alive[t]) && succ.iter().any(|&t| dist[t].is_some())
                }
            });
            if ok {
                added.push(s);
            }
        }
        if added.is_empty() {
            break;
        }
        for s in added {
            dist[s] = Some(layer);
        }
    }
    dist
}
