//! Acceptance criteria, one test each. Every test prints a single
//! `PASS` / `FAIL` line; run with `--nocapture` to see them.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use fondgr::automata::{
    compile_to_dfa, compile_to_dfa_as, ground_pdfa, lift_to_pdfa, minimize, Dfa, DfaOptions,
    ObjectMapping,
};
use fondgr::compiler::compile;
use fondgr::datasets::{
    evaluate, generate_dataset, generate_problem, metric_rates, BundledDomain, Confusion,
    EvalProblem, Family, GenerateOptions, GeneratedProblem, LevelRow, Outcome,
};
use fondgr::logic::{holds_as, Atom, Dialect, Formula, Term, Trace};
use fondgr::pddl::{ground, parse_domain, parse_problem, ActionLabel, FondModel, State};
use fondgr::planner::{
    enumerate_executions, solve, validate, EnumerateOptions, Policy, SolutionKind,
};
use fondgr::recognizer::{average_distances, GoalModel, RecognitionProblem, Recognizer};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

fn report(id: u32, name: &str, ok: bool, detail: &str) {
    println!(
        "{} [{id:>2}] {name}: {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {id} ({name}) failed: {detail}");
}

fn core_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core")
}

fn label(s: &str) -> ActionLabel {
    s.parse().unwrap()
}

fn labels(v: &[&str]) -> Vec<ActionLabel> {
    v.iter().map(|s| label(s)).collect()
}

// ---------------------------------------------------------------- 1

/// Leaves sit at `depth` 0, so the result has at most `depth + 1` levels.
fn random_formula(rng: &mut ChaCha8Rng, depth: usize, dialect: Dialect) -> Formula {
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..10) {
            0 => Formula::True,
            1 => Formula::False,
            k => Formula::prop(["p", "q", "r"][k % 3]),
        };
    }
    let sub = |rng: &mut ChaCha8Rng| random_formula(rng, depth - 1, dialect);
    let op = rng.gen_range(0..7);
    match (op, dialect) {
        (0, _) => Formula::not(sub(rng)),
        (1, _) => Formula::and(sub(rng), sub(rng)),
        (2, _) => Formula::or(sub(rng), sub(rng)),
        (3, Dialect::Ltlf) => Formula::next(sub(rng)),
        (4, Dialect::Ltlf) => Formula::until(sub(rng), sub(rng)),
        (5, Dialect::Ltlf) => match rng.gen_range(0..3) {
            0 => Formula::eventually(sub(rng)),
            1 => Formula::always(sub(rng)),
            _ => Formula::weak_next(sub(rng)),
        },
        (_, Dialect::Ltlf) => Formula::until(sub(rng), sub(rng)),
        (3, Dialect::Ppltl) => Formula::before(sub(rng)),
        (4, Dialect::Ppltl) => Formula::since(sub(rng), sub(rng)),
        (5, Dialect::Ppltl) => match rng.gen_range(0..2) {
            0 => Formula::once(sub(rng)),
            _ => Formula::historically(sub(rng)),
        },
        (_, Dialect::Ppltl) => Formula::since(sub(rng), sub(rng)),
    }
}

fn all_traces(max_len: usize) -> Vec<Trace> {
    let atoms = ["p", "q", "r"];
    let mut out = Vec::new();
    for len in 1..=max_len {
        for code in 0..(8usize.pow(len as u32)) {
            let steps = (0..len)
                .map(|i| {
                    let letter = (code >> (3 * i)) & 7;
                    atoms
                        .iter()
                        .enumerate()
                        .filter(|(b, _)| letter >> b & 1 == 1)
                        .map(|(_, a)| Atom::prop(*a))
                        .collect::<BTreeSet<_>>()
                })
                .collect();
            out.push(Trace::new(steps).unwrap());
        }
    }
    out
}

#[test]
fn criterion_01_semantics_match_automata() {
    let start = Instant::now();
    let traces = all_traces(5);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let formulas: Vec<(Formula, Dialect)> = (0..600)
        .map(|i| {
            let dialect = if i % 2 == 0 {
                Dialect::Ltlf
            } else {
                Dialect::Ppltl
            };
            (random_formula(&mut rng, 3, dialect), dialect)
        })
        .collect();
    assert!(formulas
        .iter()
        .all(|(f, _)| f.depth() <= 4 && f.atoms().len() <= 3));
    let mismatches: Vec<String> = formulas
        .par_iter()
        .filter_map(|(f, dialect)| {
            let dfa = compile_to_dfa_as(
                f,
                *dialect,
                DfaOptions {
                    minimize: true,
                    ..DfaOptions::default()
                },
            )
            .unwrap();
            traces
                .iter()
                .find(|t| dfa.accepts(t) != holds_as(f, *dialect, t).unwrap())
                .map(|t| format!("{f} on {t:?}"))
        })
        .collect();
    let secs = start.elapsed().as_secs_f64();
    report(
        1,
        "semantics/automata equivalence",
        mismatches.is_empty() && secs < 60.0,
        &format!(
            "{} formulas x {} traces, {} mismatches, {secs:.1}s{}",
            formulas.len(),
            traces.len(),
            mismatches.len(),
            mismatches
                .first()
                .map(|m| format!(" (first: {m})"))
                .unwrap_or_default()
        ),
    );
}

// ---------------------------------------------------------------- 2

/// Target of `d` from `q` on the letter where `atom` has value `value`.
fn target(d: &Dfa, q: usize, atom: &Atom, value: bool) -> usize {
    d.step_with(q, &|a| a == atom && value)
}

fn eventually_shape(d: &Dfa, atom: &Atom) -> bool {
    let q0 = d.initial();
    let q1 = target(d, q0, atom, true);
    d.num_states() == 2
        && d.accepting_states() == vec![q1]
        && q0 != q1
        && target(d, q0, atom, false) == q0
        && target(d, q1, atom, false) == q1
        && d.states()[q1].transitions.len() == 1
        && d.states()[q0].transitions.len() == 2
}

#[test]
fn criterion_02_eventually_automaton_and_lifting() {
    let f = Formula::eventually(Formula::Atom(Atom::ground("vAt", &["51"])));
    let d = minimize(&compile_to_dfa(&f).unwrap());
    let ground_ok = eventually_shape(&d, &Atom::ground("vAt", &["51"]));
    let p = lift_to_pdfa(&d, &ObjectMapping::fresh(&["51".to_string()])).unwrap();
    let x = Atom::new("vAt", vec![Term::Variable("x".into())]);
    let lifted_ok = eventually_shape(p.automaton(), &x)
        && p.automaton().alphabet() == [x.clone()]
        && p.state_name(0) == "q0(x)";
    let back = ground_pdfa(&p, &BTreeMap::from([("x".to_string(), "51".to_string())])).unwrap();
    let round_trip = back == d;
    report(
        2,
        "eventually automaton and its lifting",
        ground_ok && lifted_ok && round_trip,
        &format!(
            "ground 2-state shape {ground_ok}, lifted over x {lifted_ok}, regrounded equal {round_trip}"
        ),
    );
}

// ---------------------------------------------------------------- 3

/// Values of `atoms` in the initial state and after every automaton move.
fn projected_trace(
    m: &FondModel,
    states: &[State],
    actions: &[ActionLabel],
    trans: &str,
    atoms: &BTreeSet<Atom>,
) -> Trace {
    let project = |s: &State| -> BTreeSet<Atom> {
        atoms
            .iter()
            .filter(|a| m.atom_holds(s, a))
            .cloned()
            .collect()
    };
    let mut steps = vec![project(&states[0])];
    for (i, a) in actions.iter().enumerate() {
        if a.name == trans {
            steps.push(project(&states[i + 1]));
        }
    }
    Trace::new(steps).unwrap()
}

fn generated(domain: BundledDomain, family: Family, seed: u64) -> GeneratedProblem {
    let name = format!("{}-{}-{seed}", domain.name(), family.name());
    generate_problem(domain, family, &name, seed, &GenerateOptions::default()).unwrap()
}

#[test]
fn criterion_03_policies_satisfy_their_goals() {
    let start = Instant::now();
    let domains = [
        BundledDomain::Blocksworld,
        BundledDomain::Logistics,
        BundledDomain::Zenotravel,
    ];
    let cases: Vec<(BundledDomain, Family)> = Family::ALL
        .iter()
        .flat_map(|&f| domains.iter().map(move |&d| (d, f)))
        .collect();
    let results: Vec<(usize, usize, Vec<String>, BTreeSet<Family>)> = cases
        .par_iter()
        .enumerate()
        .map(|(i, &(domain, family))| {
            let g = generated(domain, family, 300 + i as u64);
            let d = domain.domain();
            let mut instances = 0;
            let mut executions = 0;
            let mut failures = Vec::new();
            for h in &g.hypotheses {
                let cp = compile(&d, &g.problem, &h.formula, h.dialect).unwrap();
                let m = ground(&cp.domain, &cp.problem).unwrap();
                let Some(policy) = solve(&m, SolutionKind::StrongCyclic) else {
                    failures.push(format!("{}: {} unsolved", g.name, h.formula));
                    continue;
                };
                instances += 1;
                if !validate(&m, &policy, SolutionKind::StrongCyclic) {
                    failures.push(format!("{}: {} invalid policy", g.name, h.formula));
                }
                let runs = enumerate_executions(&m, &policy, EnumerateOptions::default()).unwrap();
                let atoms = h.formula.atoms();
                for e in runs.iter() {
                    executions += 1;
                    let acts = e.labels(&m);
                    let t = projected_trace(&m, &e.states, &acts, &cp.names.trans, &atoms);
                    if !holds_as(&h.formula, h.dialect, &t).unwrap() {
                        failures.push(format!("{}: {} violated", g.name, h.formula));
                    }
                }
            }
            (instances, executions, failures, BTreeSet::from([family]))
        })
        .collect();
    let instances: usize = results.iter().map(|r| r.0).sum();
    let executions: usize = results.iter().map(|r| r.1).sum();
    let failures: Vec<&String> = results.iter().flat_map(|r| &r.2).collect();
    let families: BTreeSet<Family> = results.iter().flat_map(|r| r.3.clone()).collect();
    let secs = start.elapsed().as_secs_f64();
    report(
        3,
        "compiled policies satisfy their goals",
        failures.is_empty() && instances >= 20 && families.len() == 6 && secs < 300.0,
        &format!(
            "{instances} instances over {} families, {executions} executions checked, {} failures, {secs:.1}s{}",
            families.len(),
            failures.len(),
            failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default()
        ),
    );
}

// ---------------------------------------------------------------- 4

#[test]
fn criterion_04_running_example_executions_and_distances() {
    let d = parse_domain(include_str!("../../core/domains/triangle-tireworld.pddl")).unwrap();
    let p = parse_problem(include_str!(
        "../../core/domains/triangle-tireworld-example.pddl"
    ))
    .unwrap();
    let m = ground(&d, &p).unwrap();
    let policy = solve(&m, SolutionKind::StrongCyclic).unwrap();
    let runs = enumerate_executions(&m, &policy, EnumerateOptions::default())
        .unwrap()
        .labels(&m);
    let expected = vec![
        labels(&["(move 11 21)", "(move 21 22)"]),
        labels(&["(move 11 21)", "(changetire 21)", "(move 21 22)"]),
    ];
    let dist = average_distances::<f64>(&runs);
    let want = [
        ("(move 11 21)", 1.5),
        ("(changetire 21)", 1.0),
        ("(move 21 22)", 0.0),
    ];
    let dist_ok = want
        .iter()
        .all(|(a, v)| (dist.get(&label(a)) - v).abs() <= 1e-9);
    report(
        4,
        "running example executions and distances",
        runs == expected && dist_ok,
        &format!(
            "executions {:?}, d = {:?}",
            runs.iter()
                .map(|e| e
                    .iter()
                    .map(|a| a.to_string())
                    .collect::<Vec<_>>()
                    .join(" "))
                .collect::<Vec<_>>(),
            want.iter()
                .map(|(a, _)| dist.get(&label(a)))
                .collect::<Vec<_>>()
        ),
    );
}

// ---------------------------------------------------------------- 5

/// Direct transcription of the scoring formulas.
fn oracle_posteriors(
    executions: &[Vec<Vec<ActionLabel>>],
    obs: &[ActionLabel],
) -> (Vec<f64>, Vec<f64>) {
    let miss = 5f64.exp();
    let dist = |g: usize, a: &ActionLabel| -> f64 {
        let rem: Vec<f64> = executions[g]
            .iter()
            .filter_map(|e| {
                e.iter()
                    .position(|x| x == a)
                    .map(|i| (e.len() - 1 - i) as f64)
            })
            .collect();
        if rem.is_empty() {
            miss
        } else {
            rem.iter().sum::<f64>() / rem.len() as f64
        }
    };
    let ordered = |g: usize, a: &ActionLabel, b: &ActionLabel| -> bool {
        executions[g]
            .iter()
            .any(|e| (0..e.len()).any(|i| e[i] == *a && (i + 1..e.len()).any(|j| e[j] == *b)))
    };
    let n = executions.len();
    let scores: Vec<f64> = (0..n)
        .map(|g| {
            let total: f64 = obs
                .iter()
                .enumerate()
                .map(|(k, o)| {
                    let denom: f64 = (0..n).map(|h| dist(h, o)).sum();
                    let pen = k > 0 && !ordered(g, &obs[k - 1], o);
                    let factor = if pen { 1f64.exp() } else { 1.0 };
                    factor * dist(g, o) / denom
                })
                .sum();
            total / obs.len() as f64
        })
        .collect();
    let like: Vec<f64> = scores.iter().map(|e| 1.0 / (1.0 + e)).collect();
    let z: f64 = like.iter().sum();
    (scores, like.iter().map(|l| l / z).collect())
}

#[test]
fn criterion_05_worked_example_ranking() {
    let path = core_dir().join("tests/fixtures/worked-example.json");
    let t = RecognitionProblem::load(&path).unwrap();
    let ids: Vec<&str> = t.hypotheses.iter().map(|h| h.id.as_str()).collect();
    let runs: Vec<Vec<Vec<ActionLabel>>> = ids
        .iter()
        .map(|id| t.reference_executions[*id].clone())
        .collect();
    let d1 = average_distances::<f64>(&runs[1]);
    let table = [
        ("(move 11 21)", 4.5),
        ("(changetire 21)", 4.0),
        ("(move 21 22)", 3.0),
        ("(changetire 22)", 2.5),
        ("(move 22 23)", 1.5),
        ("(changetire 23)", 1.0),
        ("(move 23 33)", 0.0),
    ];
    let tables_ok = runs.iter().map(Vec::len).collect::<Vec<_>>() == [8, 8, 16]
        && table.iter().all(|(a, v)| d1.get(&label(a)) == *v)
        && average_distances::<f64>(&runs[2]).get(&label("(move 11 21)")) == 6.0;
    let rec: Recognizer<f64> = Recognizer::new(&t, &Default::default()).unwrap();
    let post = rec.offline(&t.observations).unwrap();
    let ranking = post.ranking();
    let strict = post.goals[1].posterior > post.goals[0].posterior
        && post.goals[1].posterior > post.goals[2].posterior;
    let (scores, posteriors) = oracle_posteriors(&runs, &t.observations);
    let agree = post.goals.iter().enumerate().all(|(i, g)| {
        (g.score - scores[i]).abs() <= 1e-9 && (g.posterior - posteriors[i]).abs() <= 1e-9
    });
    report(
        5,
        "worked example ranking",
        tables_ok && strict && post.argmax == ["phi1"] && agree,
        &format!(
            "reference tables {tables_ok}, ranking {ranking:?}, posteriors {:?}, oracle agrees {agree}",
            post.goals.iter().map(|g| format!("{:.4}", g.posterior)).collect::<Vec<_>>()
        ),
    );
}

// ---------------------------------------------------------------- 6

fn models(g: &GeneratedProblem) -> Vec<GoalModel<f64>> {
    g.hypotheses
        .iter()
        .zip(&g.executions)
        .map(|(h, e)| GoalModel::new(&h.id, true, e.clone()))
        .collect()
}

#[test]
fn criterion_06_intended_goal_has_lowest_score_under_full_observation() {
    let domains = [
        BundledDomain::Blocksworld,
        BundledDomain::Logistics,
        BundledDomain::Zenotravel,
    ];
    let cases: Vec<(BundledDomain, Family)> = Family::ALL
        .iter()
        .flat_map(|&f| domains.iter().map(move |&d| (d, f)))
        .collect();
    let problems: Vec<GeneratedProblem> = cases
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, &(d, f))| (0..2).map(move |k| generated(d, f, 600 + 2 * i as u64 + k)))
        .collect();
    let mut violations = Vec::new();
    for g in &problems {
        let rec = Recognizer::from_goals(models(g), None);
        let post = rec.offline(&g.execution).unwrap();
        let truth = post.goal(&g.true_goal).unwrap().score;
        for other in &post.goals {
            if other.score < truth {
                violations.push(format!(
                    "{}: E({})={:.4} < E({})={truth:.4}",
                    g.name, other.id, other.score, g.true_goal
                ));
            }
        }
    }
    report(
        6,
        "intended goal scores lowest under full observation",
        violations.is_empty() && problems.len() >= 20,
        &format!(
            "{} problems, {} violations{}",
            problems.len(),
            violations.len(),
            if violations.is_empty() {
                String::new()
            } else {
                format!(": {}", violations.join("; "))
            }
        ),
    );
}

// ---------------------------------------------------------------- 7

fn mean_tpr(rows: &[&LevelRow<f64>], level: u32) -> f64 {
    let v: Vec<f64> = rows
        .iter()
        .filter(|r| r.level == level)
        .map(|r| r.tpr)
        .collect();
    v.iter().sum::<f64>() / v.len() as f64
}

#[test]
fn criterion_07_trend_on_mini_dataset() {
    let start = Instant::now();
    let domains = [BundledDomain::Blocksworld, BundledDomain::Logistics];
    let families = [Family::Eventually, Family::OrderedEventually, Family::Once];
    let mut problems = Vec::new();
    for d in domains {
        for f in families {
            let ps = generate_dataset(d, f, 10, 77, &GenerateOptions::default()).unwrap();
            problems.extend(ps.iter().map(EvalProblem::from_generated));
        }
    }
    let report_ = evaluate::<f64>(&problems, &Default::default()).unwrap();
    let rows: Vec<&LevelRow<f64>> = report_.groups.iter().flat_map(|g| &g.rows).collect();
    let (t10, t100) = (mean_tpr(&rows, 10), mean_tpr(&rows, 100));
    let ev: Vec<&LevelRow<f64>> = report_
        .groups
        .iter()
        .filter(|g| g.family == "eventually")
        .flat_map(|g| &g.rows)
        .collect();
    let ev100 = mean_tpr(&ev, 100);
    let secs = start.elapsed().as_secs_f64();
    report(
        7,
        "observability trend on a mini-dataset",
        problems.len() == 60 && t100 >= t10 && ev100 >= 0.8 && secs < 900.0,
        &format!(
            "{} problems, mean TPR 10% {t10:.3}, 100% {t100:.3}, eventually at 100% {ev100:.3}, {secs:.1}s",
            problems.len()
        ),
    );
}

// ---------------------------------------------------------------- 8

#[test]
fn criterion_08_metric_arithmetic() {
    let o = |h: usize, t: usize, a: &[usize]| Outcome {
        hypotheses: h,
        true_goal: t,
        argmax: a.to_vec(),
    };
    // outcomes, hand-counted (tp, fp, tn, fn), hand-computed (tpr, fpr, f1)
    type Fixture = (Vec<Outcome>, (usize, usize, usize, usize), (f64, f64, f64));
    let fixtures: Vec<Fixture> = vec![
        (vec![o(4, 0, &[0])], (1, 0, 3, 0), (1.0, 0.0, 1.0)),
        (vec![o(4, 0, &[1])], (0, 1, 2, 1), (0.0, 1.0 / 3.0, 0.0)),
        (
            vec![o(4, 0, &[0, 1])],
            (1, 1, 2, 0),
            (1.0, 1.0 / 3.0, 2.0 / 3.0),
        ),
        (vec![o(3, 2, &[0, 1, 2])], (1, 2, 0, 0), (1.0, 1.0, 0.5)),
        (
            vec![o(4, 0, &[0]), o(4, 1, &[1]), o(4, 2, &[2]), o(4, 3, &[0])],
            (3, 1, 11, 1),
            (0.75, 1.0 / 12.0, 0.75),
        ),
        (
            vec![o(2, 0, &[0]), o(2, 1, &[0])],
            (1, 1, 1, 1),
            (0.5, 0.5, 0.5),
        ),
        (
            vec![o(5, 4, &[4]), o(5, 4, &[3, 4]), o(5, 0, &[1, 2])],
            (2, 3, 9, 1),
            (2.0 / 3.0, 0.25, 0.5),
        ),
        (
            vec![o(3, 0, &[1]), o(3, 1, &[2]), o(3, 2, &[0])],
            (0, 3, 3, 3),
            (0.0, 0.5, 0.0),
        ),
        (
            vec![o(6, 5, &[5]), o(6, 5, &[5]), o(6, 5, &[5])],
            (3, 0, 15, 0),
            (1.0, 0.0, 1.0),
        ),
        (
            vec![o(4, 1, &[0, 1, 2, 3]), o(4, 2, &[2])],
            (2, 3, 3, 0),
            (1.0, 0.5, 4.0 / 7.0),
        ),
    ];
    let mut bad = Vec::new();
    for (i, (outcomes, counts, (tpr, fpr, f1))) in fixtures.iter().enumerate() {
        let c = Confusion::from_outcomes(outcomes);
        let r = metric_rates::<f64>(outcomes);
        let ok = (c.tp, c.fp, c.tn, c.fn_) == *counts
            && (r.tpr - tpr).abs() <= 1e-12
            && (r.fpr - fpr).abs() <= 1e-12
            && (r.f1 - f1).abs() <= 1e-12
            && r.fnr == 1.0 - r.tpr
            && (0.0..=1.0).contains(&r.f1);
        if !ok {
            bad.push(format!("fixture {i}: {c:?} {r:?}"));
        }
    }
    report(
        8,
        "metric arithmetic",
        bad.is_empty(),
        &format!(
            "{} fixtures, {} disagreements {:?}",
            fixtures.len(),
            bad.len(),
            bad
        ),
    );
}

// ---------------------------------------------------------------- 9

/// Successor sets per state and applicable action.
type Edges = Vec<Vec<Vec<usize>>>;

/// Reachable states of the whole model, or `None` beyond `limit`.
fn state_space(m: &FondModel, limit: usize) -> Option<(Vec<State>, Edges)> {
    let mut index = HashMap::from([(m.init().clone(), 0usize)]);
    let mut states = vec![m.init().clone()];
    let mut edges: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let s = states[i].clone();
        let mut out = vec![Vec::new(); m.num_actions()];
        if !m.is_goal(&s) {
            for a in m.applicable(&s) {
                for t in m.successors(&s, a) {
                    let j = *index.entry(t.clone()).or_insert_with(|| {
                        states.push(t);
                        queue.push_back(states.len() - 1);
                        states.len() - 1
                    });
                    out[a as usize].push(j);
                }
            }
        }
        if edges.len() <= i {
            edges.resize(i + 1, Vec::new());
        }
        edges[i] = out;
        if states.len() > limit {
            return None;
        }
    }
    Some((states, edges))
}

/// States with a strong-cyclic (or strong) solution, by fixpoint iteration.
fn winning(m: &FondModel, states: &[State], edges: &[Vec<Vec<usize>>], strong: bool) -> Vec<bool> {
    let n = states.len();
    let goal: Vec<bool> = states.iter().map(|s| m.is_goal(s)).collect();
    if strong {
        let mut win = goal.clone();
        loop {
            let next: Vec<bool> = (0..n)
                .map(|i| {
                    win[i]
                        || edges[i]
                            .iter()
                            .any(|o| !o.is_empty() && o.iter().all(|&j| win[j]))
                })
                .collect();
            if next == win {
                return win;
            }
            win = next;
        }
    }
    let mut alive = vec![true; n];
    loop {
        // backward reachability of the goal through actions staying alive
        let mut reach = goal.clone();
        loop {
            let next: Vec<bool> = (0..n)
                .map(|i| {
                    reach[i]
                        || (alive[i]
                            && edges[i].iter().any(|o| {
                                !o.is_empty()
                                    && o.iter().all(|&j| alive[j])
                                    && o.iter().any(|&j| reach[j])
                            }))
                })
                .collect();
            if next == reach {
                break;
            }
            reach = next;
        }
        let next: Vec<bool> = (0..n).map(|i| alive[i] && reach[i]).collect();
        if next == alive {
            return alive;
        }
        alive = next;
    }
}

/// Closed, goal-reaching (and for strong, acyclic) policy graph from init.
fn policy_ok(m: &FondModel, policy: &Policy, strong: bool) -> bool {
    let mut index: HashMap<State, usize> = HashMap::from([(m.init().clone(), 0)]);
    let mut states = vec![m.init().clone()];
    let mut succ: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let s = states[i].clone();
        let mut out = Vec::new();
        if !m.is_goal(&s) {
            let Some(a) = policy.get(&s) else {
                return false;
            };
            if !m.is_applicable(&s, a) {
                return false;
            }
            for t in m.successors(&s, a) {
                let n = states.len();
                let j = *index.entry(t.clone()).or_insert(n);
                if j == n {
                    states.push(t);
                }
                out.push(j);
            }
        }
        succ.push(out);
        i += 1;
    }
    let n = states.len();
    let mut reach: Vec<bool> = states.iter().map(|s| m.is_goal(s)).collect();
    loop {
        let next: Vec<bool> = (0..n)
            .map(|i| reach[i] || succ[i].iter().any(|&j| reach[j]))
            .collect();
        if next == reach {
            break;
        }
        reach = next;
    }
    if !reach.iter().all(|&r| r) {
        return false;
    }
    if strong {
        // Kahn's algorithm on the policy graph
        let mut indeg = vec![0usize; n];
        for out in &succ {
            for &j in out {
                indeg[j] += 1;
            }
        }
        let mut queue: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut seen = 0;
        while let Some(i) = queue.pop() {
            seen += 1;
            for &j in &succ[i] {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    queue.push(j);
                }
            }
        }
        return seen == n;
    }
    true
}

#[test]
fn criterion_09_planner_soundness() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut models = Vec::new();
    for d in BundledDomain::ALL {
        let dm = d.domain();
        for k in 0..3 {
            let inst = d.instance(&mut rng, &format!("{}-{k}", d.name()));
            let facts: Vec<&Atom> = inst.facts.iter().take(6).collect();
            for goal in facts {
                let mut p = inst.problem.clone();
                p.goal = fondgr::pddl::Condition::Atom(goal.clone());
                models.push((
                    format!("{} {goal}", inst.problem.name),
                    ground(&dm, &p).unwrap(),
                ));
            }
        }
    }
    let results: Vec<Result<(usize, usize), String>> = models
        .par_iter()
        .map(|(name, m)| {
            let Some((states, edges)) = state_space(m, 2_000) else {
                return Ok((0, 0));
            };
            let mut checked = 0;
            for (kind, strong) in [
                (SolutionKind::StrongCyclic, false),
                (SolutionKind::Strong, true),
            ] {
                let win = winning(m, &states, &edges, strong)[0];
                match solve(m, kind) {
                    Some(p) => {
                        if !validate(m, &p, kind) || !policy_ok(m, &p, strong) || !win {
                            return Err(format!("{name}: bad {kind:?} policy"));
                        }
                        checked += 1;
                    }
                    None if win => return Err(format!("{name}: {kind:?} policy missed")),
                    None => {}
                }
            }
            Ok((1, checked))
        })
        .collect();
    let errors: Vec<&String> = results.iter().filter_map(|r| r.as_ref().err()).collect();
    let instances: usize = results
        .iter()
        .filter_map(|r| r.as_ref().ok())
        .map(|r| r.0)
        .sum();
    let policies: usize = results
        .iter()
        .filter_map(|r| r.as_ref().ok())
        .map(|r| r.1)
        .sum();
    let domains: HashSet<&str> = models
        .iter()
        .map(|(n, _)| n.split('-').next().unwrap())
        .collect();
    report(
        9,
        "planner soundness against an AND-OR oracle",
        errors.is_empty() && instances > 0 && policies > 0,
        &format!(
            "{instances} instances from {} domains within 2000 states, {policies} policies checked, {} errors{}",
            domains.len(),
            errors.len(),
            errors.first().map(|e| format!(" (first: {e})")).unwrap_or_default()
        ),
    );
}

// ---------------------------------------------------------------- 10

fn fondgr(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_fondgr"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn criterion_10_eval_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    let data = |k: usize| root.join(format!("data{k}"));
    let mut ok = true;
    for k in 0..2 {
        let out = fondgr(&[
            "generate",
            "--domain",
            "tidyup,zenotravel",
            "--family",
            "eventually,until",
            "--count",
            "3",
            "--seed",
            "11",
            "--out-dir",
            data(k).to_str().unwrap(),
        ]);
        ok &= out.status.success();
    }
    let read = |p: PathBuf| std::fs::read(p).unwrap_or_default();
    let same_data = read(data(0).join("dataset.json")) == read(data(1).join("dataset.json"));
    let mut metrics = Vec::new();
    for (k, jobs) in [(0, "1"), (1, "4")] {
        let out_dir = root.join(format!("eval{k}"));
        let out = fondgr(&[
            "--jobs",
            jobs,
            "eval",
            data(0).join("dataset.json").to_str().unwrap(),
            "--seed",
            "11",
            "--out-dir",
            out_dir.to_str().unwrap(),
        ]);
        ok &= out.status.success();
        metrics.push(read(out_dir.join("metrics.json")));
    }
    let same = !metrics[0].is_empty() && metrics[0] == metrics[1];
    report(
        10,
        "eval determinism",
        ok && same_data && same,
        &format!(
            "datasets identical {same_data}, metrics.json identical {same} ({} bytes)",
            metrics[0].len()
        ),
    );
}
