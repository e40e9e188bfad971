use std::collections::HashMap;

use super::{Policy, SolutionKind};
use crate::pddl::FondModel;

/// AND-OR check of the policy graph from the initial state.
///
/// Every reachable non-goal state needs an applicable policy action, and
/// the goal must stay reachable from every reachable state. For
/// [`SolutionKind::Strong`] the graph must also be acyclic.
pub fn validate(m: &FondModel, policy: &Policy, kind: SolutionKind) -> bool {
    let mut index = HashMap::from([(m.init().clone(), 0usize)]);
    let mut states = vec![m.init().clone()];
    let mut succ: Vec<Vec<usize>> = Vec::new();
    let mut goal: Vec<bool> = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let s = states[i].clone();
        let is_goal = m.is_goal(&s);
        goal.push(is_goal);
        let mut out = Vec::new();
        if !is_goal {
            let Some(a) = policy.get(&s) else {
                return false;
            };
            if !m.is_applicable(&s, a) {
                return false;
            }
            for t in m.successors(&s, a) {
                let n = states.len();
                let j = *index.entry(t.clone()).or_insert_with(|| {
                    states.push(t);
                    n
                });
                out.push(j);
            }
        }
        succ.push(out);
        i += 1;
    }
    let n = states.len();

    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (s, out) in succ.iter().enumerate() {
        for &t in out {
            pred[t].push(s);
        }
    }
    let mut reaches = goal.clone();
    let mut stack: Vec<usize> = (0..n).filter(|&s| goal[s]).collect();
    while let Some(t) = stack.pop() {
        for &s in &pred[t] {
            if !reaches[s] {
                reaches[s] = true;
                stack.push(s);
            }
        }
    }
    if !reaches.iter().all(|&r| r) {
        return false;
    }
    match kind {
        SolutionKind::StrongCyclic => true,
        SolutionKind::Strong => is_acyclic(&succ),
    }
}

fn is_acyclic(succ: &[Vec<usize>]) -> bool {
    // 0 = new, 1 = on stack, 2 = done
    let mut color = vec![0u8; succ.len()];
    for root in 0..succ.len() {
        if color[root] != 0 {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        color[root] = 1;
        while let Some(&mut (s, ref mut k)) = stack.last_mut() {
            if *k < succ[s].len() {
                let t = succ[s][*k];
                *k += 1;
                match color[t] {
                    0 => {
                        color[t] = 1;
                        stack.push((t, 0));
                    }
                    1 => return false,
                    _ => {}
                }
            } else {
                color[s] = 2;
                stack.pop();
            }
        }
    }
    true
}
