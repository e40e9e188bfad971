use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generate::GeneratedProblem;
use super::metrics::{metric_rates, Outcome};
use super::DatasetError;
use crate::pddl::{print_problem, ActionLabel};
use crate::recognizer::{
    load_pddl, GoalModel, Hypothesis, HypothesisSpec, RecognitionProblem, RecognizeOptions,
    Recognizer,
};
use crate::Scalar;

/// One problem of a dataset file. Paths are relative to the file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetEntry {
    pub domain_file: PathBuf,
    pub problem_file: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    pub hypotheses: Vec<HypothesisSpec>,
    pub true_goal: String,
    /// Observation sequences keyed by observability percentage.
    pub observations: BTreeMap<u32, Vec<ActionLabel>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub problems: Vec<DatasetEntry>,
}

impl DatasetFile {
    pub fn load(path: &Path) -> Result<Self, DatasetError> {
        let text = std::fs::read_to_string(path).map_err(|e| DatasetError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| DatasetError::Json {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }
}

/// Writes domain files, problem files and `dataset.json` under `dir`;
/// returns the path of `dataset.json`.
pub fn write_dataset(
    dir: &Path,
    problems: &[GeneratedProblem],
    seed: Option<u64>,
) -> Result<PathBuf, DatasetError> {
    let write = |rel: &Path, text: &str| -> Result<(), DatasetError> {
        let path = dir.join(rel);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(|e| DatasetError::io(parent, e))?;
        }
        std::fs::write(&path, text).map_err(|e| DatasetError::io(&path, e))
    };
    let mut entries = Vec::new();
    for p in problems {
        let domain_file = PathBuf::from("domains").join(p.domain.file_name());
        write(&domain_file, p.domain.text())?;
        let problem_file = PathBuf::from("problems").join(format!("{}.pddl", p.name));
        write(&problem_file, &print_problem(&p.problem))?;
        entries.push(DatasetEntry {
            domain_file,
            problem_file,
            domain: Some(p.domain.name().to_string()),
            family: Some(p.family.name().to_string()),
            hypotheses: p
                .hypotheses
                .iter()
                .map(|h| HypothesisSpec {
                    id: h.id.clone(),
                    dialect: h.dialect,
                    formula: h.formula.to_string(),
                })
                .collect(),
            true_goal: p.true_goal.clone(),
            observations: p.observations.clone(),
            seed: Some(p.seed),
        });
    }
    let file = DatasetFile {
        seed,
        problems: entries,
    };
    let json = serde_json::to_string_pretty(&file).expect("dataset serializes");
    let path = PathBuf::from("dataset.json");
    write(&path, &json)?;
    Ok(dir.join(path))
}

/// A dataset problem ready for recognition.
#[derive(Debug, Clone)]
pub struct EvalProblem {
    pub domain: String,
    pub family: String,
    pub recognition: RecognitionProblem,
    pub observations: BTreeMap<u32, Vec<ActionLabel>>,
    /// Executions to reuse instead of planning again.
    pub executions: Option<Vec<Vec<Vec<ActionLabel>>>>,
}

impl EvalProblem {
    pub fn from_generated(p: &GeneratedProblem) -> Self {
        let mut recognition = RecognitionProblem::new(
            p.domain.domain(),
            p.problem.clone(),
            p.hypotheses.clone(),
            p.execution.clone(),
        );
        recognition.true_goal = Some(p.true_goal.clone());
        EvalProblem {
            domain: p.domain.name().to_string(),
            family: p.family.name().to_string(),
            recognition,
            observations: p.observations.clone(),
            executions: Some(p.executions.clone()),
        }
    }

    pub fn from_entry(e: &DatasetEntry, base: &Path) -> Result<Self, DatasetError> {
        let (domain, problem) = load_pddl(&base.join(&e.domain_file), &base.join(&e.problem_file))?;
        let hypotheses = e
            .hypotheses
            .iter()
            .map(|h| Hypothesis::parse(&h.id, h.dialect, &h.formula))
            .collect::<Result<Vec<_>, _>>()?;
        let mut recognition = RecognitionProblem::new(
            domain,
            problem,
            hypotheses,
            e.observations
                .values()
                .next_back()
                .cloned()
                .unwrap_or_default(),
        );
        recognition.true_goal = Some(e.true_goal.clone());
        recognition.check()?;
        for obs in e.observations.values() {
            crate::recognizer::check_observations(&recognition.domain, &recognition.problem, obs)?;
        }
        Ok(EvalProblem {
            domain: e
                .domain
                .clone()
                .unwrap_or_else(|| recognition.domain.name.clone()),
            family: e.family.clone().unwrap_or_else(|| "-".into()),
            recognition,
            observations: e.observations.clone(),
            executions: None,
        })
    }
}

pub fn load_dataset(path: &Path) -> Result<Vec<EvalProblem>, DatasetError> {
    let file = DatasetFile::load(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    file.problems
        .iter()
        .map(|e| EvalProblem::from_entry(e, base))
        .collect()
}

/// Aggregates for one observability level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelRow<F> {
    pub level: u32,
    pub problems: usize,
    /// Mean number of hypotheses.
    pub goals: F,
    /// Mean number of observations.
    pub observations: F,
    pub tpr: F,
    pub fpr: F,
    pub fnr: F,
    pub f1: F,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<&'static str>,
    /// Mean recognition seconds per problem; kept out of JSON output.
    #[serde(skip)]
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupReport<F> {
    pub domain: String,
    pub family: String,
    pub rows: Vec<LevelRow<F>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport<F> {
    pub groups: Vec<GroupReport<F>>,
    pub overall: Vec<LevelRow<F>>,
}

struct Scored {
    level: u32,
    outcome: Outcome,
    observations: usize,
    seconds: f64,
}

fn score_problem<F: Scalar>(
    p: &EvalProblem,
    opts: &RecognizeOptions,
) -> Result<Vec<Scored>, DatasetError> {
    let t = &p.recognition;
    let start = Instant::now();
    let rec: Recognizer<F> = match &p.executions {
        Some(runs) => Recognizer::from_goals(
            t.hypotheses
                .iter()
                .zip(runs)
                .map(|(h, e)| GoalModel::new(&h.id, !e.is_empty(), e.clone()))
                .collect(),
            t.priors.as_deref(),
        ),
        None => Recognizer::new(t, opts)?,
    };
    let setup = start.elapsed().as_secs_f64();
    let truth = t
        .true_goal_index()
        .expect("dataset problems name their true goal");
    p.observations
        .iter()
        .map(|(&level, obs)| {
            let start = Instant::now();
            let post = rec.offline(obs)?;
            let argmax = post
                .argmax
                .iter()
                .map(|id| t.hypotheses.iter().position(|h| &h.id == id).unwrap())
                .collect();
            Ok(Scored {
                level,
                outcome: Outcome {
                    hypotheses: t.hypotheses.len(),
                    true_goal: truth,
                    argmax,
                },
                observations: obs.len(),
                seconds: setup + start.elapsed().as_secs_f64(),
            })
        })
        .collect()
}

fn rows<F: Scalar>(scored: &[&Scored]) -> Vec<LevelRow<F>> {
    let mut by_level: BTreeMap<u32, Vec<&Scored>> = BTreeMap::new();
    for s in scored {
        by_level.entry(s.level).or_default().push(s);
    }
    by_level
        .into_iter()
        .map(|(level, v)| {
            let n = v.len() as f64;
            let outcomes: Vec<Outcome> = v.iter().map(|s| s.outcome.clone()).collect();
            let r = metric_rates::<F>(&outcomes);
            LevelRow {
                level,
                problems: v.len(),
                goals: F::lit(v.iter().map(|s| s.outcome.hypotheses).sum::<usize>() as f64 / n),
                observations: F::lit(v.iter().map(|s| s.observations).sum::<usize>() as f64 / n),
                tpr: r.tpr,
                fpr: r.fpr,
                fnr: r.fnr,
                f1: r.f1,
                flags: r.flags,
                seconds: v.iter().map(|s| s.seconds).sum::<f64>() / n,
            }
        })
        .collect()
}

/// Recognizes every problem at every observability level it carries and
/// aggregates the metrics per (domain, family) and overall.
pub fn evaluate<F: Scalar>(
    problems: &[EvalProblem],
    opts: &RecognizeOptions,
) -> Result<EvalReport<F>, DatasetError> {
    let scored: Vec<Vec<Scored>> = problems
        .par_iter()
        .map(|p| score_problem::<F>(p, opts))
        .collect::<Result<_, _>>()?;
    let mut groups: BTreeMap<(&str, &str), Vec<&Scored>> = BTreeMap::new();
    for (p, s) in problems.iter().zip(&scored) {
        groups
            .entry((p.domain.as_str(), p.family.as_str()))
            .or_default()
            .extend(s.iter());
    }
    let all: Vec<&Scored> = scored.iter().flatten().collect();
    Ok(EvalReport {
        groups: groups
            .into_iter()
            .map(|((d, f), s)| GroupReport {
                domain: d.to_string(),
                family: f.to_string(),
                rows: rows(&s),
            })
            .collect(),
        overall: rows(&all),
    })
}

impl<F: Scalar> EvalReport<F> {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn group(&self, domain: &str, family: &str) -> Option<&GroupReport<F>> {
        self.groups
            .iter()
            .find(|g| g.domain == domain && g.family == family)
    }

    /// Aligned text table, one block per group and one row per level.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let header = format!(
            "{:<36} {:>5} {:>6} {:>7} {:>9} {:>6} {:>6} {:>6} {:>6}",
            "Domain / goals", "Obs%", "|G|", "|Obs|", "Time(s)", "TPR", "FPR", "FNR", "F1"
        );
        writeln!(out, "{header}").unwrap();
        writeln!(out, "{}", "-".repeat(header.len())).unwrap();
        let block = |out: &mut String, title: &str, rows: &[LevelRow<F>]| {
            for (i, r) in rows.iter().enumerate() {
                let label = if i == 0 { title } else { "" };
                writeln!(
                    out,
                    "{:<36} {:>5} {:>6.2} {:>7.2} {:>9.4} {:>6.3} {:>6.3} {:>6.3} {:>6.3}",
                    label,
                    r.level,
                    r.goals.to_f64().unwrap_or(f64::NAN),
                    r.observations.to_f64().unwrap_or(f64::NAN),
                    r.seconds,
                    r.tpr.to_f64().unwrap_or(f64::NAN),
                    r.fpr.to_f64().unwrap_or(f64::NAN),
                    r.fnr.to_f64().unwrap_or(f64::NAN),
                    r.f1.to_f64().unwrap_or(f64::NAN),
                )
                .unwrap();
            }
        };
        for g in &self.groups {
            block(&mut out, &format!("{} / {}", g.domain, g.family), &g.rows);
        }
        writeln!(out, "{}", "-".repeat(header.len())).unwrap();
        block(&mut out, "all", &self.overall);
        out
    }
}
