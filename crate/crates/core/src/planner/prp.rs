use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet, VecDeque};

use super::heuristic::HAdd;
use super::{PlannerOptions, Policy};
use crate::pddl::{ActionId, FondModel, State};

pub(crate) enum Outcome {
    Solved(Policy),
    Unsolvable,
    Incomplete,
}

enum Search {
    Found(Vec<(State, ActionId)>),
    DeadEnd,
    Budget,
}

struct Planner<'m> {
    model: &'m FondModel,
    h: HAdd<'m>,
    h_cache: HashMap<State, Option<u32>>,
    dead: HashSet<State>,
    opts: &'m PlannerOptions,
}

impl<'m> Planner<'m> {
    fn heuristic(&mut self, s: &State) -> Option<u32> {
        if let Some(v) = self.h_cache.get(s) {
            return *v;
        }
        let v = self.h.eval(s);
        if v.is_none() {
            self.dead.insert(s.clone());
        }
        self.h_cache.insert(s.clone(), v);
        v
    }

    /// A* on the all-outcomes determinization from `start` to a goal state
    /// or a state the policy already handles. Actions with an outcome in a
    /// known dead end are excluded.
    fn weak_plan(&mut self, start: &State, policy: &HashMap<State, ActionId>) -> Search {
        struct Node {
            state: State,
            parent: usize,
            action: ActionId,
        }
        let m = self.model;
        let Some(h0) = self.heuristic(start) else {
            return Search::DeadEnd;
        };
        let mut nodes: Vec<Node> = vec![Node {
            state: start.clone(),
            parent: usize::MAX,
            action: 0,
        }];
        let mut best_g: HashMap<State, u32> = HashMap::from([(start.clone(), 0)]);
        let mut open: BinaryHeap<Reverse<(u32, u32, usize, u32)>> = BinaryHeap::new();
        open.push(Reverse((h0, h0, 0, 0)));
        let mut expansions = 0usize;
        while let Some(Reverse((_, _, idx, g))) = open.pop() {
            let s = nodes[idx].state.clone();
            if best_g.get(&s).is_some_and(|&b| b < g) {
                continue;
            }
            let reached = idx != 0 && (m.is_goal(&s) || policy.contains_key(&s));
            if reached || (idx == 0 && m.is_goal(&s)) {
                let mut path = Vec::new();
                let mut cur = idx;
                while cur != 0 {
                    let n = &nodes[cur];
                    path.push((nodes[n.parent].state.clone(), n.action));
                    cur = n.parent;
                }
                path.reverse();
                return Search::Found(path);
            }
            expansions += 1;
            if expansions > self.opts.search_node_limit {
                return Search::Budget;
            }
            for a in m.applicable(&s) {
                let succ = m.successors(&s, a);
                if succ.iter().any(|t| self.dead.contains(t)) {
                    continue;
                }
                for t in succ {
                    let g2 = g + 1;
                    if best_g.get(&t).is_some_and(|&b| b <= g2) {
                        continue;
                    }
                    let h = if m.is_goal(&t) || policy.contains_key(&t) {
                        0
                    } else {
                        match self.heuristic(&t) {
                            Some(h) => h,
                            None => continue,
                        }
                    };
                    best_g.insert(t.clone(), g2);
                    nodes.push(Node {
                        state: t,
                        parent: idx,
                        action: a,
                    });
                    open.push(Reverse((g2 + h, h, nodes.len() - 1, g2)));
                }
            }
        }
        Search::DeadEnd
    }
}

/// Iterative determinize-plan-repair. Every policy-reachable state without
/// an action receives a weak plan into the goal or the existing policy;
/// when some state has none it becomes a known dead end and planning
/// restarts, now avoiding actions that can lead there.
pub(crate) fn determinize_plan_repair(m: &FondModel, opts: &PlannerOptions) -> Outcome {
    let mut planner = Planner {
        model: m,
        h: HAdd::new(m),
        h_cache: HashMap::new(),
        dead: HashSet::new(),
        opts,
    };
    let s0 = m.init().clone();
    for _ in 0..=opts.max_restarts {
        let mut policy: HashMap<State, ActionId> = HashMap::new();
        let mut queue: VecDeque<State> = VecDeque::from([s0.clone()]);
        let mut seen: HashSet<State> = HashSet::from([s0.clone()]);
        let mut failed: Option<State> = None;
        while let Some(s) = queue.pop_front() {
            if m.is_goal(&s) {
                continue;
            }
            if !policy.contains_key(&s) {
                match planner.weak_plan(&s, &policy) {
                    Search::Found(steps) => {
                        for (st, a) in steps {
                            policy.entry(st).or_insert(a);
                        }
                    }
                    Search::DeadEnd => {
                        failed = Some(s);
                        break;
                    }
                    Search::Budget => return Outcome::Incomplete,
                }
            }
            let a = policy[&s];
            for t in m.successors(&s, a) {
                if seen.insert(t.clone()) {
                    queue.push_back(t);
                }
            }
        }
        match failed {
            None => {
                let mut p = Policy::new();
                for (s, a) in policy {
                    p.insert(s, a);
                }
                return Outcome::Solved(p.restrict_to_reachable(m));
            }
            Some(s) if s == s0 => return Outcome::Unsolvable,
            Some(s) => {
                planner.dead.insert(s);
            }
        }
    }
    Outcome::Incomplete
}
