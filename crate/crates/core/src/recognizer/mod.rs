//! Goal recognition over temporally extended goal hypotheses.
//!
//! Each hypothesis is compiled into a FOND problem, solved, and its policy
//! executions are summarized into a distance table and an order relation.
//! Observations are then scored against every hypothesis and turned into
//! likelihoods and posteriors.

mod score;

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use score::{
    argmax, average_distances, average_estimated_score, estimated_score, likelihood, miss_distance,
    normalize, observation_scores, penalty, DistanceTable, GoalEvidence, OrderRelation,
};

use crate::automata::DEFAULT_STATE_CAP;
use crate::compiler::{compile_with, CompileError, CompileOptions};
use crate::logic::{parse_formula, Atom, Dialect, Formula, LogicError, Trace};
use crate::pddl::{
    ground, parse_domain, parse_problem, ActionLabel, DomainModel, PddlError, ProblemModel,
};
use crate::planner::{
    enumerate_executions, solve_strong_cyclic_with, solve_strong_with, EnumerateOptions,
    PlannerError, PlannerOptions, SolutionKind,
};
use crate::Scalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RecognizeError {
    #[error("goal `{id}`: {source}")]
    Formula { id: String, source: LogicError },
    #[error("goal `{id}`: {source}")]
    Compile { id: String, source: CompileError },
    #[error("goal `{id}`: {source}")]
    Planner { id: String, source: PlannerError },
    #[error(transparent)]
    Pddl(#[from] PddlError),
    #[error("the observation sequence is empty")]
    EmptyObservations,
    #[error("observation {index} `{action}`: {reason}")]
    InvalidObservation {
        index: usize,
        action: String,
        reason: String,
    },
    #[error("no goal hypotheses")]
    NoHypotheses,
    #[error("duplicate goal id `{0}`")]
    DuplicateGoal(String),
    #[error("true goal `{0}` is not among the hypotheses")]
    UnknownGoal(String),
    #[error("priors: {0}")]
    BadPriors(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {message}")]
    Json { path: String, message: String },
}

impl RecognizeError {
    pub(crate) fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        RecognizeError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hypothesis {
    pub id: String,
    pub dialect: Dialect,
    pub formula: Formula,
}

impl Hypothesis {
    pub fn parse(id: &str, dialect: Dialect, text: &str) -> Result<Self, RecognizeError> {
        let formula = parse_formula(text, dialect).map_err(|source| RecognizeError::Formula {
            id: id.to_string(),
            source,
        })?;
        Ok(Hypothesis {
            id: id.to_string(),
            dialect,
            formula,
        })
    }
}

/// Hypothesis as written in problem files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisSpec {
    pub id: String,
    pub dialect: Dialect,
    pub formula: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecognitionProblem {
    pub domain: DomainModel,
    /// Supplies the initial state and objects; its goal is ignored.
    pub problem: ProblemModel,
    pub hypotheses: Vec<Hypothesis>,
    pub true_goal: Option<String>,
    pub observations: Vec<ActionLabel>,
    /// Defaults to uniform.
    pub priors: Option<Vec<f64>>,
    /// Stripped executions to use instead of planning, per goal id.
    pub reference_executions: BTreeMap<String, Vec<Vec<ActionLabel>>>,
}

/// On-disk form of a recognition problem. Paths are relative to the file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecognitionFile {
    pub domain_file: PathBuf,
    pub problem_file: PathBuf,
    pub hypotheses: Vec<HypothesisSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub true_goal: Option<String>,
    pub observations: Vec<ActionLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub priors: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub executions: BTreeMap<String, Vec<Vec<ActionLabel>>>,
}

pub(crate) fn read_text(path: &Path) -> Result<String, RecognizeError> {
    std::fs::read_to_string(path).map_err(|e| RecognizeError::io(path, e))
}

pub fn load_pddl(
    domain_path: &Path,
    problem_path: &Path,
) -> Result<(DomainModel, ProblemModel), RecognizeError> {
    let domain = parse_domain(&read_text(domain_path)?)?;
    let problem = parse_problem(&read_text(problem_path)?)?;
    Ok((domain, problem))
}

impl RecognitionProblem {
    pub fn new(
        domain: DomainModel,
        problem: ProblemModel,
        hypotheses: Vec<Hypothesis>,
        observations: Vec<ActionLabel>,
    ) -> Self {
        RecognitionProblem {
            domain,
            problem,
            hypotheses,
            true_goal: None,
            observations,
            priors: None,
            reference_executions: BTreeMap::new(),
        }
    }

    pub fn load(path: &Path) -> Result<Self, RecognizeError> {
        let text = read_text(path)?;
        let file: RecognitionFile =
            serde_json::from_str(&text).map_err(|e| RecognizeError::Json {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_file(file, base)
    }

    pub fn from_file(file: RecognitionFile, base: &Path) -> Result<Self, RecognizeError> {
        let (domain, problem) = load_pddl(
            &base.join(&file.domain_file),
            &base.join(&file.problem_file),
        )?;
        let hypotheses = file
            .hypotheses
            .iter()
            .map(|h| Hypothesis::parse(&h.id, h.dialect, &h.formula))
            .collect::<Result<Vec<_>, _>>()?;
        let p = RecognitionProblem {
            domain,
            problem,
            hypotheses,
            true_goal: file.true_goal,
            observations: file.observations,
            priors: file.priors,
            reference_executions: file.executions,
        };
        p.check()?;
        Ok(p)
    }

    /// Structural checks on goals, priors and observations.
    pub fn check(&self) -> Result<(), RecognizeError> {
        if self.hypotheses.is_empty() {
            return Err(RecognizeError::NoHypotheses);
        }
        let mut ids = BTreeSet::new();
        for h in &self.hypotheses {
            if !ids.insert(h.id.as_str()) {
                return Err(RecognizeError::DuplicateGoal(h.id.clone()));
            }
        }
        for id in self
            .true_goal
            .iter()
            .chain(self.reference_executions.keys())
        {
            if !ids.contains(id.as_str()) {
                return Err(RecognizeError::UnknownGoal(id.clone()));
            }
        }
        if let Some(p) = &self.priors {
            if p.len() != self.hypotheses.len() {
                return Err(RecognizeError::BadPriors(format!(
                    "{} priors for {} goals",
                    p.len(),
                    self.hypotheses.len()
                )));
            }
            if p.iter().any(|x| !x.is_finite() || *x < 0.0) || p.iter().sum::<f64>() <= 0.0 {
                return Err(RecognizeError::BadPriors(
                    "priors must be non-negative with a positive sum".into(),
                ));
            }
        }
        check_observations(&self.domain, &self.problem, &self.observations)
    }

    pub fn true_goal_index(&self) -> Option<usize> {
        let t = self.true_goal.as_ref()?;
        self.hypotheses.iter().position(|h| &h.id == t)
    }
}

/// Observations must name domain actions with the right arity over known
/// objects.
pub fn check_observations(
    d: &DomainModel,
    p: &ProblemModel,
    observations: &[ActionLabel],
) -> Result<(), RecognizeError> {
    for (index, o) in observations.iter().enumerate() {
        let fail = |reason: String| RecognizeError::InvalidObservation {
            index,
            action: o.to_string(),
            reason,
        };
        let a = d
            .action(&o.name)
            .ok_or_else(|| fail("unknown action".into()))?;
        if a.params.len() != o.args.len() {
            return Err(fail(format!(
                "expected {} arguments, found {}",
                a.params.len(),
                o.args.len()
            )));
        }
        for arg in &o.args {
            if !d.constants.iter().chain(&p.objects).any(|x| &x.name == arg) {
                return Err(fail(format!("unknown object `{arg}`")));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecognizeOptions {
    pub state_cap: usize,
    pub kind: SolutionKind,
    pub planner: PlannerOptions,
    pub enumerate: EnumerateOptions,
}

impl Default for RecognizeOptions {
    fn default() -> Self {
        RecognizeOptions {
            state_cap: DEFAULT_STATE_CAP,
            kind: SolutionKind::StrongCyclic,
            planner: PlannerOptions::default(),
            enumerate: EnumerateOptions::default(),
        }
    }
}

/// What the recognizer knows about one hypothesis.
#[derive(Debug, Clone, PartialEq)]
pub struct GoalModel<F> {
    pub id: String,
    pub solvable: bool,
    /// Domain-action sequences of the policy's executions.
    pub executions: Vec<Vec<ActionLabel>>,
    pub evidence: GoalEvidence<F>,
}

/// Policy executions of one hypothesis.
#[derive(Debug, Clone, PartialEq)]
pub struct PlannedGoal {
    /// Domain-action sequences, `trans` steps removed.
    pub executions: Vec<Vec<ActionLabel>>,
    /// Induced traces projected on the requested atoms, when asked for.
    pub traces: Vec<Trace>,
}

/// Compiles, solves and enumerates one hypothesis; `None` when no policy
/// exists. With `trace_atoms`, the induced trace of every execution is
/// projected on the formula's atoms plus these.
pub fn plan_hypothesis(
    d: &DomainModel,
    p: &ProblemModel,
    h: &Hypothesis,
    opts: &RecognizeOptions,
    trace_atoms: Option<&BTreeSet<Atom>>,
) -> Result<Option<PlannedGoal>, RecognizeError> {
    let compile_err = |source| RecognizeError::Compile {
        id: h.id.clone(),
        source,
    };
    let copts = CompileOptions {
        state_cap: opts.state_cap,
        ..CompileOptions::default()
    };
    let cp = compile_with(d, p, &h.formula, h.dialect, &copts).map_err(compile_err)?;
    let m = ground(&cp.domain, &cp.problem)?;
    let policy = match opts.kind {
        SolutionKind::StrongCyclic => solve_strong_cyclic_with(&m, &opts.planner),
        SolutionKind::Strong => solve_strong_with(&m, &opts.planner),
    };
    let Some(policy) = policy else {
        return Ok(None);
    };
    let execs = enumerate_executions(&m, &policy, opts.enumerate).map_err(|source| {
        RecognizeError::Planner {
            id: h.id.clone(),
            source,
        }
    })?;
    let executions = execs
        .iter()
        .map(|e| cp.strip(&e.labels(&m)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(compile_err)?;
    let traces = match trace_atoms {
        None => Vec::new(),
        Some(extra) => {
            let atoms: BTreeSet<Atom> = cp
                .formula
                .atoms()
                .into_iter()
                .chain(extra.iter().cloned())
                .collect();
            execs
                .iter()
                .map(|e| cp.project_trace(&m, e, &atoms))
                .collect()
        }
    };
    Ok(Some(PlannedGoal { executions, traces }))
}

/// Builds the goal model from reference executions or by planning.
pub fn build_goal_model<F: Scalar>(
    t: &RecognitionProblem,
    h: &Hypothesis,
    opts: &RecognizeOptions,
) -> Result<GoalModel<F>, RecognizeError> {
    let (solvable, executions) = match t.reference_executions.get(&h.id) {
        Some(execs) => (!execs.is_empty(), execs.clone()),
        None => match plan_hypothesis(&t.domain, &t.problem, h, opts, None)? {
            Some(g) => (true, g.executions),
            None => {
                log::warn!("goal `{}` has no {:?} policy", h.id, opts.kind);
                (false, Vec::new())
            }
        },
    };
    Ok(GoalModel::new(&h.id, solvable, executions))
}

impl<F: Scalar> GoalModel<F> {
    pub fn new(id: &str, solvable: bool, executions: Vec<Vec<ActionLabel>>) -> Self {
        let evidence = if solvable {
            GoalEvidence::from_executions(&executions)
        } else {
            GoalEvidence::unsolvable()
        };
        GoalModel {
            id: id.to_string(),
            solvable,
            executions,
            evidence,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GoalPosterior<F> {
    pub id: String,
    pub likelihood: F,
    pub prior: F,
    pub posterior: F,
    /// Average estimated score.
    pub score: F,
    pub scores: Vec<F>,
    pub penalties: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Posterior<F> {
    pub goals: Vec<GoalPosterior<F>>,
    /// Ids of the goals with maximum posterior.
    pub argmax: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl<F: Scalar> Posterior<F> {
    pub fn goal(&self, id: &str) -> Option<&GoalPosterior<F>> {
        self.goals.iter().find(|g| g.id == id)
    }

    /// Goal ids by decreasing posterior; ties keep hypothesis order.
    pub fn ranking(&self) -> Vec<&str> {
        let mut idx: Vec<usize> = (0..self.goals.len()).collect();
        idx.sort_by(|&a, &b| {
            self.goals[b]
                .posterior
                .partial_cmp(&self.goals[a].posterior)
                .expect("posteriors are finite")
        });
        idx.into_iter().map(|i| self.goals[i].id.as_str()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankEntry<F> {
    pub id: String,
    pub posterior: F,
}

/// Ranking after observing the first `step` observations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepRanking<F> {
    pub step: usize,
    pub observation: ActionLabel,
    pub ranking: Vec<RankEntry<F>>,
    pub top: Vec<String>,
}

/// Goal models built once and reused across observation sequences.
#[derive(Debug, Clone)]
pub struct Recognizer<F> {
    goals: Vec<GoalModel<F>>,
    evidence: Vec<GoalEvidence<F>>,
    priors: Vec<F>,
}

impl<F: Scalar> Recognizer<F> {
    /// Builds every goal model in parallel on the current rayon pool.
    pub fn new(t: &RecognitionProblem, opts: &RecognizeOptions) -> Result<Self, RecognizeError> {
        if t.hypotheses.is_empty() {
            return Err(RecognizeError::NoHypotheses);
        }
        let goals = t
            .hypotheses
            .par_iter()
            .map(|h| build_goal_model(t, h, opts))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_goals(goals, t.priors.as_deref()))
    }

    pub fn from_goals(goals: Vec<GoalModel<F>>, priors: Option<&[f64]>) -> Self {
        let n = goals.len();
        let priors = match priors {
            Some(p) => {
                let total: f64 = p.iter().sum();
                p.iter().map(|x| F::lit(x / total)).collect()
            }
            None => vec![F::lit(1.0) / F::lit(n as f64); n],
        };
        Recognizer {
            evidence: goals.iter().map(|g| g.evidence.clone()).collect(),
            goals,
            priors,
        }
    }

    pub fn goals(&self) -> &[GoalModel<F>] {
        &self.goals
    }

    pub fn evidence(&self) -> &[GoalEvidence<F>] {
        &self.evidence
    }

    pub fn warnings(&self) -> Vec<String> {
        self.goals
            .iter()
            .filter(|g| !g.solvable)
            .map(|g| format!("goal `{}` is unsolvable; scored with miss distances", g.id))
            .collect()
    }

    pub fn offline(&self, observations: &[ActionLabel]) -> Result<Posterior<F>, RecognizeError> {
        if observations.is_empty() {
            return Err(RecognizeError::EmptyObservations);
        }
        let per_goal: Vec<(Vec<F>, Vec<bool>)> = (0..self.goals.len())
            .map(|i| observation_scores(i, observations, &self.evidence))
            .collect();
        let scores: Vec<F> = per_goal.iter().map(|(s, _)| score::mean(s)).collect();
        let likelihoods: Vec<F> = scores.iter().map(|&e| likelihood(e)).collect();
        let posteriors = normalize(&likelihoods, &self.priors);
        let best = argmax(&posteriors);
        let goals = per_goal
            .into_iter()
            .enumerate()
            .map(|(i, (s, p))| GoalPosterior {
                id: self.goals[i].id.clone(),
                likelihood: likelihoods[i],
                prior: self.priors[i],
                posterior: posteriors[i],
                score: scores[i],
                scores: s,
                penalties: p,
            })
            .collect();
        Ok(Posterior {
            goals,
            argmax: best.into_iter().map(|i| self.goals[i].id.clone()).collect(),
            warnings: self.warnings(),
        })
    }

    /// One ranking per observation prefix.
    pub fn online(
        &self,
        observations: &[ActionLabel],
    ) -> Result<Vec<StepRanking<F>>, RecognizeError> {
        if observations.is_empty() {
            return Err(RecognizeError::EmptyObservations);
        }
        (1..=observations.len())
            .map(|k| {
                let post = self.offline(&observations[..k])?;
                let ranking = post
                    .ranking()
                    .into_iter()
                    .map(|id| RankEntry {
                        id: id.to_string(),
                        posterior: post.goal(id).expect("ranked goal exists").posterior,
                    })
                    .collect();
                Ok(StepRanking {
                    step: k,
                    observation: observations[k - 1].clone(),
                    ranking,
                    top: post.argmax,
                })
            })
            .collect()
    }
}

pub fn recognize_offline<F: Scalar>(
    t: &RecognitionProblem,
    opts: &RecognizeOptions,
) -> Result<Posterior<F>, RecognizeError> {
    t.check()?;
    if t.observations.is_empty() {
        return Err(RecognizeError::EmptyObservations);
    }
    Recognizer::new(t, opts)?.offline(&t.observations)
}

pub fn recognize_online<F: Scalar>(
    t: &RecognitionProblem,
    opts: &RecognizeOptions,
) -> Result<Vec<StepRanking<F>>, RecognizeError> {
    t.check()?;
    if t.observations.is_empty() {
        return Err(RecognizeError::EmptyObservations);
    }
    Recognizer::new(t, opts)?.online(&t.observations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const DOMAIN: &str = include_str!("../../domains/triangle-tireworld.pddl");
    const PROBLEM: &str = include_str!("../../domains/triangle-tireworld-example.pddl");

    fn l(s: &str) -> ActionLabel {
        s.parse().unwrap()
    }

    fn worked_example() -> RecognitionProblem {
        let hyps = [
            ("phi0", "F(vAt(51))"),
            ("phi1", "F(vAt(33))"),
            ("phi2", "F(vAt(15))"),
        ]
        .iter()
        .map(|(id, f)| Hypothesis::parse(id, Dialect::Ltlf, f).unwrap())
        .collect();
        let mut t = RecognitionProblem::new(
            parse_domain(DOMAIN).unwrap(),
            parse_problem(PROBLEM).unwrap(),
            hyps,
            vec![l("(move 11 21)"), l("(changetire 22)")],
        );
        t.true_goal = Some("phi1".into());
        t
    }

    #[test]
    fn planned_tables_match_the_worked_example() {
        let t = worked_example();
        let r: Recognizer<f64> = Recognizer::new(&t, &RecognizeOptions::default()).unwrap();
        let sizes: Vec<usize> = r.goals().iter().map(|g| g.executions.len()).collect();
        assert_eq!(sizes, vec![8, 8, 16]);
        let d1 = &r.goals()[1].evidence.distances;
        for (a, v) in [
            ("(move 11 21)", 4.5),
            ("(changetire 21)", 4.0),
            ("(move 21 22)", 3.0),
            ("(changetire 22)", 2.5),
            ("(move 22 23)", 1.5),
            ("(changetire 23)", 1.0),
            ("(move 23 33)", 0.0),
        ] {
            assert_relative_eq!(d1.get(&l(a)), v);
        }
        let d2 = &r.goals()[2].evidence.distances;
        assert_relative_eq!(d2.get(&l("(move 11 21)")), 6.0);
        assert_relative_eq!(d2.get(&l("(changetire 24)")), 1.0);
        assert_relative_eq!(d2.get(&l("(move 23 24)")), 1.5);
    }

    #[test]
    fn worked_example_ranks_the_intended_goal_first() {
        let t = worked_example();
        let p: Posterior<f64> = recognize_offline(&t, &RecognizeOptions::default()).unwrap();
        assert_eq!(p.argmax, vec!["phi1"]);
        assert_eq!(p.ranking(), vec!["phi1", "phi2", "phi0"]);
        let miss = 5f64.exp();
        let e0 = (4.5 / 15.0 + 1f64.exp() * miss / (miss + 6.5)) / 2.0;
        let e1 = (4.5 / 15.0 + 2.5 / (miss + 6.5)) / 2.0;
        assert_relative_eq!(p.goals[0].score, e0, epsilon = 1e-12);
        assert_relative_eq!(p.goals[1].score, e1, epsilon = 1e-12);
        assert_eq!(p.goals[0].penalties, vec![false, true]);
        let total: f64 = p.goals.iter().map(|g| g.posterior).sum();
        assert_relative_eq!(total, 1.0, epsilon = 1e-12);
        let p32: Posterior<f32> = recognize_offline(&t, &RecognizeOptions::default()).unwrap();
        assert_eq!(p32.argmax, vec!["phi1"]);
    }

    #[test]
    fn unsolvable_goal_is_kept_with_misses() {
        let mut t = worked_example();
        t.hypotheses
            .push(Hypothesis::parse("stuck", Dialect::Ltlf, "F(vAt(51)) & F(vAt(15))").unwrap());
        let p: Posterior<f64> = recognize_offline(&t, &RecognizeOptions::default()).unwrap();
        assert_eq!(p.goals.len(), 4);
        assert_eq!(p.warnings.len(), 1);
        assert_eq!(p.argmax, vec!["phi1"]);
    }

    #[test]
    fn all_miss_observations_give_uniform_posterior() {
        let mut t = worked_example();
        t.observations = vec![l("(changetire 12)"), l("(move 13 14)")];
        let p: Posterior<f64> = recognize_offline(&t, &RecognizeOptions::default()).unwrap();
        for g in &p.goals {
            assert_relative_eq!(g.posterior, 1.0 / 3.0, epsilon = 1e-12);
        }
        assert_eq!(p.argmax.len(), 3);
    }

    #[test]
    fn input_errors() {
        let mut t = worked_example();
        t.observations.clear();
        assert_eq!(
            recognize_offline::<f64>(&t, &RecognizeOptions::default()),
            Err(RecognizeError::EmptyObservations)
        );
        t.observations = vec![l("(fly 11 21)")];
        assert!(matches!(
            t.check(),
            Err(RecognizeError::InvalidObservation { index: 0, .. })
        ));
        t.observations = vec![l("(move 11 99)")];
        assert!(matches!(
            t.check(),
            Err(RecognizeError::InvalidObservation { .. })
        ));
        t.observations = vec![l("(move 11 21)")];
        t.true_goal = Some("nope".into());
        assert_eq!(t.check(), Err(RecognizeError::UnknownGoal("nope".into())));
        t.true_goal = None;
        t.priors = Some(vec![1.0]);
        assert!(matches!(t.check(), Err(RecognizeError::BadPriors(_))));
    }

    #[test]
    fn prior_scaling_is_absorbed() {
        let mut t = worked_example();
        let r: Recognizer<f64> = Recognizer::new(&t, &RecognizeOptions::default()).unwrap();
        t.priors = Some(vec![2.0, 1.0, 1.0]);
        let a = Recognizer::<f64>::from_goals(r.goals().to_vec(), t.priors.as_deref());
        let b = Recognizer::<f64>::from_goals(r.goals().to_vec(), Some(&[20.0, 10.0, 10.0]));
        let pa = a.offline(&t.observations).unwrap();
        let pb = b.offline(&t.observations).unwrap();
        for (x, y) in pa.goals.iter().zip(&pb.goals) {
            assert_relative_eq!(x.posterior, y.posterior, epsilon = 1e-12);
        }
    }

    #[test]
    fn online_reuses_models() {
        let t = worked_example();
        let r: Recognizer<f64> = Recognizer::new(&t, &RecognizeOptions::default()).unwrap();
        let steps = r.online(&t.observations).unwrap();
        assert_eq!(steps.len(), 2);
        let first = r.offline(&t.observations[..1]).unwrap();
        assert_eq!(steps[0].top, first.argmax);
        assert_eq!(steps[1].top, vec!["phi1"]);
        assert_eq!(steps, r.online(&t.observations).unwrap());
    }
}
