use crate::pddl::{FondModel, GroundCondition, State};

const INF: u32 = u32::MAX;

/// Additive heuristic over the delete relaxation of the all-outcomes
/// determinization. Negative literals count as free.
pub struct HAdd<'m> {
    model: &'m FondModel,
    cost: Vec<u32>,
}

fn cond_cost(c: &GroundCondition, cost: &[u32]) -> u32 {
    match c {
        GroundCondition::True => 0,
        GroundCondition::False => INF,
        GroundCondition::Lit(f, true) => cost[*f as usize],
        GroundCondition::Lit(_, false) => 0,
        GroundCondition::And(cs) => cs
            .iter()
            .try_fold(0u32, |acc, c| {
                let x = cond_cost(c, cost);
                (x != INF).then(|| acc.saturating_add(x).min(INF - 1))
            })
            .unwrap_or(INF),
        GroundCondition::Or(cs) => cs.iter().map(|c| cond_cost(c, cost)).min().unwrap_or(INF),
    }
}

impl<'m> HAdd<'m> {
    pub fn new(model: &'m FondModel) -> Self {
        HAdd {
            model,
            cost: vec![INF; model.fluents().len()],
        }
    }

    /// Estimated cost of the model goal from `s`; `None` if unreachable
    /// even in the relaxation.
    pub fn eval(&mut self, s: &State) -> Option<u32> {
        let goal = self.model.goal().clone();
        self.eval_condition(s, &goal)
    }

    pub fn eval_condition(&mut self, s: &State, goal: &GroundCondition) -> Option<u32> {
        self.cost.iter_mut().for_each(|c| *c = INF);
        for &f in s.ids() {
            self.cost[f as usize] = 0;
        }
        loop {
            let mut changed = false;
            for a in self.model.actions() {
                let pc = cond_cost(&a.precondition, &self.cost);
                if pc == INF {
                    continue;
                }
                let base = pc.saturating_add(1).min(INF - 1);
                for o in &a.outcomes {
                    for &f in &o.add {
                        if base < self.cost[f as usize] {
                            self.cost[f as usize] = base;
                            changed = true;
                        }
                    }
                    for ce in &o.conditional {
                        if ce.add.is_empty() {
                            continue;
                        }
                        let cc = cond_cost(&ce.condition, &self.cost);
                        if cc == INF {
                            continue;
                        }
                        let v = base.saturating_add(cc).min(INF - 1);
                        for &f in &ce.add {
                            if v < self.cost[f as usize] {
                                self.cost[f as usize] = v;
                                changed = true;
                            }
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let h = cond_cost(goal, &self.cost);
        (h != INF).then_some(h)
    }
}
