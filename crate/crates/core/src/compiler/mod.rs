//! Compiles a temporally extended goal into a FOND planning problem.
//!
//! The goal automaton is lifted over its objects of interest and fused into
//! the domain: one predicate per automaton state, a `turnDomain` flag that
//! alternates domain moves with automaton moves, and a single parameterized
//! `trans` action that advances the automaton with conditional effects.

use std::collections::BTreeSet;

use crate::automata::{
    compile_to_dfa_as, lift_to_pdfa, minimize, AutomataError, Dfa, DfaOptions, ObjectMapping, Pdfa,
    StateId, DEFAULT_STATE_CAP,
};
use crate::logic::{holds_as, Atom, Dialect, Formula, Term, Trace};
use crate::pddl::{
    print_domain, print_problem, ActionLabel, ActionSchema, Condition, DomainModel, Effect,
    FondModel, PddlError, PredicateSchema, ProblemModel, TypedName,
};
use crate::planner::{
    enumerate_executions, validate, EnumerateOptions, Execution, PlannerError, Policy, SolutionKind,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CompileError {
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error(transparent)]
    Pddl(#[from] PddlError),
    #[error(transparent)]
    Planner(#[from] PlannerError),
    #[error("formula atom {0} does not match any predicate of the domain")]
    UnmatchedAtom(String),
    #[error("formula atom {atom} mentions unknown object `{object}`")]
    UnknownObject { atom: String, object: String },
    #[error("formula atom {0} must be ground")]
    NonGroundAtom(String),
    #[error("two consecutive domain actions at position {index}")]
    MalformedAlternation { index: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompileOptions {
    pub state_cap: usize,
    /// Lift the automaton over its objects; `false` emits ground state
    /// fluents and a parameterless `trans`.
    pub lifted: bool,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            state_cap: DEFAULT_STATE_CAP,
            lifted: true,
        }
    }
}

/// Names introduced by the compilation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompiledNames {
    pub turn: String,
    pub trans: String,
    pub state_prefix: String,
}

#[derive(Debug, Clone)]
pub struct CompiledProblem {
    pub domain: DomainModel,
    pub problem: ProblemModel,
    pub formula: Formula,
    pub dialect: Dialect,
    /// Minimal ground automaton of the formula.
    pub dfa: Dfa,
    pub pdfa: Pdfa,
    pub names: CompiledNames,
    /// Automaton state after reading the initial state.
    pub initial_state: StateId,
}

impl CompiledProblem {
    pub fn state_predicate(&self, q: StateId) -> String {
        format!("{}{q}", self.names.state_prefix)
    }

    pub fn objects_of_interest(&self) -> Vec<String> {
        self.pdfa.mapping().objects()
    }

    pub fn state_atom(&self, q: StateId) -> Atom {
        Atom::ground(self.state_predicate(q), &self.objects_of_interest())
    }

    pub fn is_trans(&self, a: &ActionLabel) -> bool {
        a.name == self.names.trans
    }

    pub fn domain_text(&self) -> String {
        print_domain(&self.domain)
    }

    pub fn problem_text(&self) -> String {
        print_problem(&self.problem)
    }

    /// Domain-action labels of a compiled execution.
    pub fn strip(&self, execution: &[ActionLabel]) -> Result<Vec<ActionLabel>, CompileError> {
        strip(execution, &self.names.trans)
    }

    /// States of `e` at which the domain has the turn, i.e. the initial
    /// state and every state after a `trans`, restricted to the formula's
    /// atoms.
    pub fn induced_trace(&self, m: &FondModel, e: &Execution) -> Trace {
        self.project_trace(m, e, &self.formula.atoms())
    }

    /// Like [`Self::induced_trace`], over an explicit atom set.
    pub fn project_trace(&self, m: &FondModel, e: &Execution, atoms: &BTreeSet<Atom>) -> Trace {
        let turn = Atom::prop(&self.names.turn);
        let steps: Vec<BTreeSet<Atom>> = e
            .states
            .iter()
            .filter(|s| m.atom_holds(s, &turn))
            .map(|s| {
                atoms
                    .iter()
                    .filter(|a| m.atom_holds(s, a))
                    .cloned()
                    .collect()
            })
            .collect();
        Trace::new(steps).expect("executions start at the initial state")
    }
}

/// Removes `trans` steps; fails on two consecutive domain actions.
pub fn strip(execution: &[ActionLabel], trans: &str) -> Result<Vec<ActionLabel>, CompileError> {
    let mut out = Vec::new();
    let mut prev_domain = false;
    for (index, a) in execution.iter().enumerate() {
        if a.name == trans {
            prev_domain = false;
        } else {
            if prev_domain {
                return Err(CompileError::MalformedAlternation { index });
            }
            prev_domain = true;
            out.push(a.clone());
        }
    }
    Ok(out)
}

/// Rewrites flat atoms such as `vAt_51` into `vAt(51)` and checks every
/// atom against the domain's predicates and the problem's objects.
pub fn resolve_atoms(
    d: &DomainModel,
    p: &ProblemModel,
    f: &Formula,
) -> Result<Formula, CompileError> {
    let objects: BTreeSet<&str> = d
        .constants
        .iter()
        .chain(&p.objects)
        .map(|o| o.name.as_str())
        .collect();
    let mut err = None;
    let resolved = f.map_atoms(&mut |a| match resolve_atom(d, &objects, a) {
        Ok(r) => r,
        Err(e) => {
            err.get_or_insert(e);
            a.clone()
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(resolved),
    }
}

fn resolve_atom(d: &DomainModel, objects: &BTreeSet<&str>, a: &Atom) -> Result<Atom, CompileError> {
    if !a.is_ground() {
        return Err(CompileError::NonGroundAtom(a.to_string()));
    }
    let check = |cand: &Atom| -> Result<bool, CompileError> {
        match d.predicate(&cand.name) {
            Some(pr) if pr.params.len() == cand.args.len() => {
                for t in &cand.args {
                    if !objects.contains(t.name()) {
                        return Err(CompileError::UnknownObject {
                            atom: cand.to_string(),
                            object: t.name().to_string(),
                        });
                    }
                }
                Ok(true)
            }
            _ => Ok(false),
        }
    };
    if check(a)? {
        return Ok(a.clone());
    }
    if a.args.is_empty() {
        let pieces: Vec<&str> = a.name.split('_').collect();
        for k in 1..pieces.len() {
            let cand = Atom::ground(pieces[..k].join("_"), &pieces[k..]);
            if let Ok(true) = check(&cand) {
                return Ok(cand);
            }
        }
    }
    Err(CompileError::UnmatchedAtom(a.to_string()))
}

fn fresh_name(base: &str, taken: impl Fn(&str) -> bool) -> String {
    let mut name = base.to_string();
    while taken(&name) {
        name.push('_');
    }
    name
}

pub fn compile(
    d: &DomainModel,
    p: &ProblemModel,
    f: &Formula,
    dialect: Dialect,
) -> Result<CompiledProblem, CompileError> {
    compile_with(d, p, f, dialect, &CompileOptions::default())
}

pub fn compile_with(
    d: &DomainModel,
    p: &ProblemModel,
    f: &Formula,
    dialect: Dialect,
    opts: &CompileOptions,
) -> Result<CompiledProblem, CompileError> {
    let formula = resolve_atoms(d, p, f)?;
    let dfa = minimize(&compile_to_dfa_as(
        &formula,
        dialect,
        DfaOptions {
            state_cap: opts.state_cap,
            minimize: false,
        },
    )?);
    let interest = formula.objects();
    let pdfa = if opts.lifted {
        lift_to_pdfa(&dfa, &ObjectMapping::fresh(&interest))?
    } else {
        Pdfa::unlifted(&dfa)
    };

    let pred_taken = |n: &str| d.predicate(n).is_some();
    let names = CompiledNames {
        turn: fresh_name("turnDomain", pred_taken),
        trans: fresh_name("trans", |n| d.action(n).is_some()),
        state_prefix: fresh_name("q", |prefix| {
            d.predicates.iter().any(|pr| {
                pr.name.strip_prefix(prefix).is_some_and(|rest| {
                    !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit())
                })
            })
        }),
    };
    let turn = Atom::prop(&names.turn);
    let n_states = pdfa.automaton().num_states();
    let state_name = |q: StateId| format!("{}{q}", names.state_prefix);

    let type_of = |o: &str| {
        d.constants
            .iter()
            .chain(&p.objects)
            .find(|x| x.name == o)
            .map_or("object".to_string(), |x| x.ty.clone())
    };
    let params: Vec<TypedName> = pdfa
        .mapping()
        .pairs()
        .iter()
        .map(|(o, v)| TypedName::new(v.clone(), type_of(o)))
        .collect();
    let var_terms: Vec<Term> = params
        .iter()
        .map(|t| Term::Variable(t.name.clone()))
        .collect();
    let lifted_state = |q: StateId| Atom::new(state_name(q), var_terms.clone());

    let mut domain = d.clone();
    for r in [
        ":negative-preconditions",
        ":disjunctive-preconditions",
        ":conditional-effects",
    ] {
        if !domain.requirements.iter().any(|x| x == r) {
            domain.requirements.push(r.to_string());
        }
    }
    for q in 0..n_states {
        domain.predicates.push(PredicateSchema {
            name: state_name(q),
            params: params.clone(),
        });
    }
    domain.predicates.push(PredicateSchema {
        name: names.turn.clone(),
        params: Vec::new(),
    });
    for a in &mut domain.actions {
        let mut pre = vec![Condition::Atom(turn.clone())];
        match &a.precondition {
            Condition::And(cs) => pre.extend(cs.iter().cloned()),
            c => pre.push(c.clone()),
        }
        a.precondition = Condition::And(pre);
        a.effect = match &a.effect {
            Effect::And(es) => {
                let mut es = es.clone();
                es.push(Effect::Delete(turn.clone()));
                Effect::And(es)
            }
            e => Effect::And(vec![e.clone(), Effect::Delete(turn.clone())]),
        };
    }

    let aut = pdfa.automaton();
    let mut whens = Vec::new();
    for target in 0..n_states {
        let mut disjuncts = Vec::new();
        for (src, st) in aut.states().iter().enumerate() {
            for (g, t) in &st.transitions {
                if *t != target {
                    continue;
                }
                for clause in g.to_dnf() {
                    let mut lits = vec![Condition::Atom(lifted_state(src))];
                    lits.extend(clause.into_iter().map(|(at, pos)| {
                        if pos {
                            Condition::Atom(at)
                        } else {
                            Condition::negate(Condition::Atom(at))
                        }
                    }));
                    disjuncts.push(if lits.len() == 1 {
                        lits.pop().unwrap()
                    } else {
                        Condition::And(lits)
                    });
                }
            }
        }
        if disjuncts.is_empty() {
            continue;
        }
        let cond = if disjuncts.len() == 1 {
            disjuncts.pop().unwrap()
        } else {
            Condition::Or(disjuncts)
        };
        let mut eff = vec![Effect::Add(lifted_state(target))];
        eff.extend(
            (0..n_states)
                .filter(|&q| q != target)
                .map(|q| Effect::Delete(lifted_state(q))),
        );
        eff.push(Effect::Add(turn.clone()));
        whens.push(Effect::When(cond, Box::new(Effect::And(eff))));
    }
    let mut trans_pre = vec![Condition::negate(Condition::Atom(turn.clone()))];
    if !params.is_empty() {
        trans_pre.push(Condition::Or(
            (0..n_states)
                .map(|q| Condition::Atom(lifted_state(q)))
                .collect(),
        ));
    }
    domain.actions.push(ActionSchema {
        name: names.trans.clone(),
        params: params.clone(),
        precondition: if trans_pre.len() == 1 {
            trans_pre.pop().unwrap()
        } else {
            Condition::And(trans_pre)
        },
        effect: Effect::And(whens),
    });

    let init_facts: BTreeSet<&Atom> = p.init.iter().collect();
    let initial_state = dfa.step_with(dfa.initial(), &|a| init_facts.contains(a));
    let ground_state = |q: StateId| Atom::ground(state_name(q), &pdfa.mapping().objects());
    let mut problem = p.clone();
    problem.init.push(ground_state(initial_state));
    problem.init.push(turn.clone());
    let accepting: Vec<Condition> = dfa
        .accepting_states()
        .into_iter()
        .map(|q| Condition::Atom(ground_state(q)))
        .collect();
    let reach = if accepting.len() == 1 {
        accepting.into_iter().next().unwrap()
    } else {
        Condition::Or(accepting)
    };
    problem.goal = Condition::And(vec![reach, Condition::Atom(turn)]);

    Ok(CompiledProblem {
        domain,
        problem,
        formula,
        dialect,
        dfa,
        pdfa,
        names,
        initial_state,
    })
}

/// Model-checks every execution of a compiled-problem policy against the
/// formula. A policy that is not strong-cyclic yields `false`.
pub fn check_policy_satisfies(
    cp: &CompiledProblem,
    m: &FondModel,
    policy: &Policy,
    opts: EnumerateOptions,
) -> Result<bool, CompileError> {
    if !validate(m, policy, SolutionKind::StrongCyclic) {
        return Ok(false);
    }
    let execs = enumerate_executions(m, policy, opts)?;
    for e in execs.iter() {
        cp.strip(&e.labels(m))?;
        let trace = cp.induced_trace(m, e);
        if !holds_as(&cp.formula, cp.dialect, &trace).expect("dialect checked at compile time") {
            return Ok(false);
        }
    }
    Ok(true)
}
