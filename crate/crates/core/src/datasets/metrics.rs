use serde::Serialize;

use crate::recognizer::StepRanking;
use crate::Scalar;

/// Result of one recognition problem: hypothesis count, the true goal and
/// the argmax set, as hypothesis indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub hypotheses: usize,
    pub true_goal: usize,
    pub argmax: Vec<usize>,
}

/// Confusion counts over hypotheses, "recognized" meaning "in the argmax set".
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

impl Confusion {
    pub fn from_outcomes(outcomes: &[Outcome]) -> Confusion {
        let mut c = Confusion::default();
        for o in outcomes {
            let hit = o.argmax.contains(&o.true_goal);
            let false_pos = o.argmax.iter().filter(|&&g| g != o.true_goal).count();
            if hit {
                c.tp += 1;
            } else {
                c.fn_ += 1;
            }
            c.fp += false_pos;
            c.tn += o.hypotheses - 1 - false_pos;
        }
        c
    }

    pub fn rates<F: Scalar>(&self) -> MetricRates<F> {
        let mut flags = Vec::new();
        let mut ratio = |num: usize, den: usize, name: &'static str| {
            if den == 0 {
                flags.push(name);
                F::zero()
            } else {
                F::lit(num as f64) / F::lit(den as f64)
            }
        };
        let tpr = ratio(self.tp, self.tp + self.fn_, "tpr");
        let fpr = ratio(self.fp, self.fp + self.tn, "fpr");
        let precision = ratio(self.tp, self.tp + self.fp, "precision");
        let f1 = if precision + tpr > F::zero() {
            F::lit(2.0) * precision * tpr / (precision + tpr)
        } else {
            flags.push("f1");
            F::zero()
        };
        MetricRates {
            tpr,
            fpr,
            fnr: F::one() - tpr,
            f1,
            flags,
        }
    }
}

/// Rates with the names of those whose denominator was zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricRates<F> {
    pub tpr: F,
    pub fpr: F,
    pub fnr: F,
    pub f1: F,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<&'static str>,
}

pub fn metric_rates<F: Scalar>(outcomes: &[Outcome]) -> MetricRates<F> {
    Confusion::from_outcomes(outcomes).rates()
}

/// Fraction of steps at which `true_goal` alone has the top posterior.
pub fn ranked_first<F>(steps: &[StepRanking<F>], true_goal: &str) -> f64 {
    if steps.is_empty() {
        return 0.0;
    }
    let hits = steps
        .iter()
        .filter(|s| s.top.len() == 1 && s.top[0] == true_goal)
        .count();
    hits as f64 / steps.len() as f64
}
