use std::path::{Path, PathBuf};

use fondgr::compiler::{compile_with, CompileOptions};
use fondgr::datasets::{
    evaluate, generate_dataset, load_dataset, ranked_first, write_dataset, EvalProblem, EvalReport,
    GenerateOptions, LEVELS,
};
use fondgr::logic::{parse_formula, Dialect};
use fondgr::pddl::{ground, parse_domain, parse_problem};
use fondgr::planner::{solve, EnumerateOptions, SolutionKind};
use fondgr::recognizer::{
    Posterior, RecognitionProblem, RecognizeOptions, Recognizer, StepRanking,
};
use fondgr::Scalar;
use serde::Serialize;

use crate::failure::{Failure, EXIT_INPUT, EXIT_UNSOLVABLE};
use crate::{
    Cli, Command, CompileArgs, EvalArgs, GenerateArgs, PlanArgs, Precision, RecognizeArgs,
};

pub fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Compile(a) => compile(cli, a),
        Command::Plan(a) => plan(cli, a),
        Command::Recognize(a) => recognize(cli, a),
        Command::Eval(a) => eval(cli, a),
        Command::Generate(a) => generate(cli, a),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Failure::io(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| Failure::io(path, e))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(p) => write(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json(v: &impl Serialize) -> String {
    serde_json::to_string_pretty(v).expect("outputs serialize")
}

fn compile(cli: &Cli, a: &CompileArgs) -> Result<(), Failure> {
    let dialect: Dialect = a.dialect.into();
    let formula = parse_formula(&a.goal, dialect)?;
    let d = parse_domain(&read(&a.domain)?)?;
    let p = parse_problem(&read(&a.problem)?)?;
    let opts = CompileOptions {
        state_cap: cli.state_cap,
        lifted: !a.ground,
    };
    let c = compile_with(&d, &p, &formula, dialect, &opts)?;
    let domain_out = a.out_dir.join("domain.pddl");
    let problem_out = a.out_dir.join("problem.pddl");
    write(&domain_out, &c.domain_text())?;
    write(&problem_out, &c.problem_text())?;
    eprintln!(
        "automaton: {} states; wrote {} and {}",
        c.dfa.num_states(),
        domain_out.display(),
        problem_out.display()
    );
    Ok(())
}

fn plan(cli: &Cli, a: &PlanArgs) -> Result<(), Failure> {
    let mut d = parse_domain(&read(&a.domain)?)?;
    let mut p = parse_problem(&read(&a.problem)?)?;
    if let Some(goal) = &a.goal.goal {
        let dialect: Dialect = a.goal.dialect.into();
        let formula = parse_formula(goal, dialect)?;
        let opts = CompileOptions {
            state_cap: cli.state_cap,
            ..CompileOptions::default()
        };
        let c = compile_with(&d, &p, &formula, dialect, &opts)?;
        d = c.domain;
        p = c.problem;
    }
    let m = ground(&d, &p)?;
    let kind: SolutionKind = a.mode.into();
    let policy = solve(&m, kind).ok_or_else(|| {
        Failure::new(
            EXIT_UNSOLVABLE,
            format!("no {} policy exists for {}", mode_name(kind), p.name),
        )
    })?;
    emit(a.out.as_deref(), &policy.to_json(&m))
}

fn mode_name(kind: SolutionKind) -> &'static str {
    match kind {
        SolutionKind::StrongCyclic => "strong-cyclic",
        SolutionKind::Strong => "strong",
    }
}

fn recognize_options(cli: &Cli, kind: SolutionKind, loop_bound: usize) -> RecognizeOptions {
    RecognizeOptions {
        state_cap: cli.state_cap,
        kind,
        enumerate: EnumerateOptions {
            loop_bound,
            ..EnumerateOptions::default()
        },
        ..RecognizeOptions::default()
    }
}

#[derive(Serialize)]
struct OfflineResult<'a, F> {
    mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    true_goal: Option<&'a str>,
    ranking: Vec<&'a str>,
    #[serde(flatten)]
    posterior: &'a Posterior<F>,
}

#[derive(Serialize)]
struct OnlineResult<'a, F> {
    mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    true_goal: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ranked_first: Option<f64>,
    steps: &'a [StepRanking<F>],
    #[serde(skip_serializing_if = "Vec::is_empty")]
    warnings: Vec<String>,
}

fn recognize_as<F: Scalar>(
    t: &RecognitionProblem,
    online: bool,
    opts: &RecognizeOptions,
) -> Result<String, Failure> {
    let rec = Recognizer::<F>::new(t, opts)?;
    let truth = t.true_goal.as_deref();
    if online {
        let steps = rec.online(&t.observations)?;
        Ok(to_json(&OnlineResult {
            mode: "online",
            true_goal: truth,
            ranked_first: truth.map(|g| ranked_first(&steps, g)),
            steps: &steps,
            warnings: rec.warnings(),
        }))
    } else {
        let post = rec.offline(&t.observations)?;
        Ok(to_json(&OfflineResult {
            mode: "offline",
            true_goal: truth,
            ranking: post.ranking(),
            posterior: &post,
        }))
    }
}

fn recognize(cli: &Cli, a: &RecognizeArgs) -> Result<(), Failure> {
    let t = RecognitionProblem::load(&a.problem)?;
    if t.observations.is_empty() {
        return Err(fondgr::recognizer::RecognizeError::EmptyObservations.into());
    }
    let opts = recognize_options(cli, a.mode.into(), a.loop_bound);
    let json = match a.precision {
        Precision::F64 => recognize_as::<f64>(&t, a.online, &opts)?,
        Precision::F32 => recognize_as::<f32>(&t, a.online, &opts)?,
    };
    emit(a.out.as_deref(), &json)
}

#[derive(Serialize)]
struct Metrics<'a, F> {
    dataset: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    problems: usize,
    #[serde(flatten)]
    report: &'a EvalReport<F>,
}

fn eval_as<F: Scalar>(
    a: &EvalArgs,
    problems: &[EvalProblem],
    opts: &RecognizeOptions,
) -> Result<(String, String), Failure> {
    let report = evaluate::<F>(problems, opts)?;
    let name = a
        .dataset
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let metrics = to_json(&Metrics {
        dataset: name,
        seed: a.seed,
        problems: problems.len(),
        report: &report,
    });
    Ok((metrics, report.table()))
}

fn eval(cli: &Cli, a: &EvalArgs) -> Result<(), Failure> {
    let mut problems = load_dataset(&a.dataset)?;
    if let Some(levels) = &a.levels {
        if let Some(bad) = levels.iter().find(|l| !LEVELS.contains(l)) {
            return Err(Failure::new(
                EXIT_INPUT,
                format!("observability level {bad} is not one of {LEVELS:?}"),
            ));
        }
        for p in &mut problems {
            p.observations.retain(|l, _| levels.contains(l));
        }
    }
    let opts = recognize_options(cli, a.mode.into(), a.loop_bound);
    let (metrics, table) = match a.precision {
        Precision::F64 => eval_as::<f64>(a, &problems, &opts)?,
        Precision::F32 => eval_as::<f32>(a, &problems, &opts)?,
    };
    let dir: PathBuf = match &a.out_dir {
        Some(d) => d.clone(),
        None => a
            .dataset
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_default(),
    };
    emit(Some(&dir.join("metrics.json")), &metrics)?;
    emit(Some(&dir.join("table.txt")), &table)?;
    print!("{table}");
    Ok(())
}

fn generate(cli: &Cli, a: &GenerateArgs) -> Result<(), Failure> {
    let opts = GenerateOptions {
        hypotheses: a.hypotheses,
        budget: a.budget,
        recognize: recognize_options(cli, SolutionKind::StrongCyclic, 1),
        ..GenerateOptions::default()
    };
    let mut all = Vec::new();
    for &domain in &a.domain {
        for &family in &a.family {
            all.extend(generate_dataset(domain, family, a.count, a.seed, &opts)?);
        }
    }
    let path = write_dataset(&a.out_dir, &all, Some(a.seed))?;
    eprintln!("wrote {} problems to {}", all.len(), path.display());
    Ok(())
}
