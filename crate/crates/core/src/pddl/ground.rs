use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{
    substitute, ActionLabel, Condition, DomainModel, Effect, PddlError, ProblemModel, TypedName,
};
use crate::logic::{Atom, Term};

pub type FluentId = u32;
pub type ActionId = u32;

/// Sorted set of the fluents that are true.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct State(Vec<FluentId>);

impl State {
    pub fn from_ids(mut ids: Vec<FluentId>) -> State {
        ids.sort_unstable();
        ids.dedup();
        State(ids)
    }

    pub fn contains(&self, f: FluentId) -> bool {
        self.0.binary_search(&f).is_ok()
    }

    pub fn ids(&self) -> &[FluentId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroundCondition {
    True,
    False,
    /// Fluent with its required truth value.
    Lit(FluentId, bool),
    And(Vec<GroundCondition>),
    Or(Vec<GroundCondition>),
}

impl GroundCondition {
    pub fn holds(&self, s: &State) -> bool {
        match self {
            GroundCondition::True => true,
            GroundCondition::False => false,
            GroundCondition::Lit(f, v) => s.contains(*f) == *v,
            GroundCondition::And(cs) => cs.iter().all(|c| c.holds(s)),
            GroundCondition::Or(cs) => cs.iter().any(|c| c.holds(s)),
        }
    }

    /// Literals of a conjunction of literals; `None` for other shapes.
    pub fn as_literals(&self) -> Option<Vec<(FluentId, bool)>> {
        match self {
            GroundCondition::True => Some(Vec::new()),
            GroundCondition::Lit(f, v) => Some(vec![(*f, *v)]),
            GroundCondition::And(cs) => {
                let mut out = Vec::new();
                for c in cs {
                    out.extend(c.as_literals()?);
                }
                Some(out)
            }
            _ => None,
        }
    }

    pub fn visit_literals(&self, f: &mut impl FnMut(FluentId, bool)) {
        match self {
            GroundCondition::True | GroundCondition::False => {}
            GroundCondition::Lit(x, v) => f(*x, *v),
            GroundCondition::And(cs) | GroundCondition::Or(cs) => {
                cs.iter().for_each(|c| c.visit_literals(f))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionalEffect {
    pub condition: GroundCondition,
    pub add: Vec<FluentId>,
    pub del: Vec<FluentId>,
}

/// One effect alternative of a ground action.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub add: Vec<FluentId>,
    pub del: Vec<FluentId>,
    pub conditional: Vec<ConditionalEffect>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundAction {
    pub name: String,
    pub args: Vec<String>,
    pub precondition: GroundCondition,
    /// Alternatives in source order; exactly one for deterministic actions.
    pub outcomes: Vec<Outcome>,
}

impl GroundAction {
    pub fn label(&self) -> ActionLabel {
        ActionLabel {
            name: self.name.clone(),
            args: self.args.clone(),
        }
    }

    pub fn is_deterministic(&self) -> bool {
        self.outcomes.len() == 1
    }
}

/// Explicit FOND model: fluent universe, ground actions, initial state and
/// goal. Immutable once built.
#[derive(Debug, Clone)]
pub struct FondModel {
    fluents: Vec<Atom>,
    fluent_index: HashMap<Atom, FluentId>,
    static_facts: BTreeSet<Atom>,
    objects: Vec<TypedName>,
    actions: Vec<GroundAction>,
    action_index: HashMap<ActionLabel, ActionId>,
    init: State,
    goal: GroundCondition,
}

impl FondModel {
    pub fn fluents(&self) -> &[Atom] {
        &self.fluents
    }

    pub fn fluent(&self, f: FluentId) -> &Atom {
        &self.fluents[f as usize]
    }

    pub fn fluent_id(&self, a: &Atom) -> Option<FluentId> {
        self.fluent_index.get(a).copied()
    }

    /// True static facts (predicates no action changes).
    pub fn static_facts(&self) -> &BTreeSet<Atom> {
        &self.static_facts
    }

    pub fn objects(&self) -> &[TypedName] {
        &self.objects
    }

    pub fn actions(&self) -> &[GroundAction] {
        &self.actions
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn action(&self, a: ActionId) -> &GroundAction {
        &self.actions[a as usize]
    }

    pub fn find_action(&self, label: &ActionLabel) -> Option<ActionId> {
        self.action_index.get(label).copied()
    }

    pub fn init(&self) -> &State {
        &self.init
    }

    pub fn goal(&self) -> &GroundCondition {
        &self.goal
    }

    /// Same model with a different goal condition.
    pub fn with_goal(&self, goal: GroundCondition) -> FondModel {
        FondModel {
            goal,
            ..self.clone()
        }
    }

    pub fn is_goal(&self, s: &State) -> bool {
        self.goal.holds(s)
    }

    pub fn is_applicable(&self, s: &State, a: ActionId) -> bool {
        self.actions[a as usize].precondition.holds(s)
    }

    pub fn applicable(&self, s: &State) -> Vec<ActionId> {
        (0..self.actions.len() as ActionId)
            .filter(|&a| self.is_applicable(s, a))
            .collect()
    }

    /// Truth of a ground atom in `s`, static facts included.
    pub fn atom_holds(&self, s: &State, a: &Atom) -> bool {
        match self.fluent_id(a) {
            Some(f) => s.contains(f),
            None => self.static_facts.contains(a),
        }
    }

    pub fn state_atoms(&self, s: &State) -> Vec<Atom> {
        s.ids().iter().map(|&f| self.fluent(f).clone()).collect()
    }

    /// State holding exactly the given fluents; static facts are ignored.
    pub fn state_from_atoms<'a>(
        &self,
        atoms: impl IntoIterator<Item = &'a Atom>,
    ) -> Result<State, PddlError> {
        let mut ids = Vec::new();
        for a in atoms {
            match self.fluent_id(a) {
                Some(f) => ids.push(f),
                None if self.static_facts.contains(a) => {}
                None => return Err(PddlError::UnknownObject(a.to_pddl())),
            }
        }
        Ok(State::from_ids(ids))
    }

    /// Successor set of an applicable action.
    pub fn apply(&self, s: &State, a: ActionId) -> Result<Vec<State>, PddlError> {
        let act = self
            .actions
            .get(a as usize)
            .ok_or_else(|| PddlError::UnknownAction(a.to_string()))?;
        if !act.precondition.holds(s) {
            return Err(PddlError::Inapplicable(act.label().to_string()));
        }
        Ok(self.successors(s, a))
    }

    /// Like [`FondModel::apply`] without the applicability check.
    pub fn successors(&self, s: &State, a: ActionId) -> Vec<State> {
        let act = &self.actions[a as usize];
        let mut out: Vec<State> = Vec::with_capacity(act.outcomes.len());
        for o in &act.outcomes {
            let mut del: Vec<FluentId> = o.del.clone();
            let mut add: Vec<FluentId> = o.add.clone();
            for ce in &o.conditional {
                if ce.condition.holds(s) {
                    del.extend(&ce.del);
                    add.extend(&ce.add);
                }
            }
            let mut ids: Vec<FluentId> = s
                .ids()
                .iter()
                .copied()
                .filter(|f| !del.contains(f))
                .collect();
            ids.extend(add);
            let next = State::from_ids(ids);
            if !out.contains(&next) {
                out.push(next);
            }
        }
        out
    }
}

/// Atom-level condition in negation normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum ACond {
    True,
    False,
    Lit(Atom, bool),
    And(Vec<ACond>),
    Or(Vec<ACond>),
}

impl ACond {
    fn and(items: Vec<ACond>) -> ACond {
        let mut out = Vec::new();
        for c in items {
            match c {
                ACond::True => {}
                ACond::False => return ACond::False,
                ACond::And(cs) => out.extend(cs),
                c => {
                    if !out.contains(&c) {
                        out.push(c)
                    }
                }
            }
        }
        match out.len() {
            0 => ACond::True,
            1 => out.pop().unwrap(),
            _ => ACond::And(out),
        }
    }

    fn or(items: Vec<ACond>) -> ACond {
        let mut out = Vec::new();
        for c in items {
            match c {
                ACond::False => {}
                ACond::True => return ACond::True,
                ACond::Or(cs) => out.extend(cs),
                c => {
                    if !out.contains(&c) {
                        out.push(c)
                    }
                }
            }
        }
        match out.len() {
            0 => ACond::False,
            1 => out.pop().unwrap(),
            _ => ACond::Or(out),
        }
    }

    fn negate(self) -> ACond {
        match self {
            ACond::True => ACond::False,
            ACond::False => ACond::True,
            ACond::Lit(a, v) => ACond::Lit(a, !v),
            ACond::And(cs) => ACond::or(cs.into_iter().map(ACond::negate).collect()),
            ACond::Or(cs) => ACond::and(cs.into_iter().map(ACond::negate).collect()),
        }
    }

    fn resimplify(&self, known: &impl Fn(&Atom) -> Option<bool>) -> ACond {
        match self {
            ACond::Lit(a, v) => match known(a) {
                Some(t) => {
                    if t == *v {
                        ACond::True
                    } else {
                        ACond::False
                    }
                }
                None => ACond::Lit(a.clone(), *v),
            },
            ACond::And(cs) => ACond::and(cs.iter().map(|c| c.resimplify(known)).collect()),
            ACond::Or(cs) => ACond::or(cs.iter().map(|c| c.resimplify(known)).collect()),
            c => c.clone(),
        }
    }

    /// Satisfiable in the delete relaxation given the reached atoms.
    fn relaxed(&self, reached: &HashSet<Atom>) -> bool {
        match self {
            ACond::True => true,
            ACond::False => false,
            ACond::Lit(a, true) => reached.contains(a),
            ACond::Lit(_, false) => true,
            ACond::And(cs) => cs.iter().all(|c| c.relaxed(reached)),
            ACond::Or(cs) => cs.iter().any(|c| c.relaxed(reached)),
        }
    }

    fn visit(&self, f: &mut impl FnMut(&Atom)) {
        match self {
            ACond::Lit(a, _) => f(a),
            ACond::And(cs) | ACond::Or(cs) => cs.iter().for_each(|c| c.visit(f)),
            _ => {}
        }
    }

    fn to_ground(&self, ids: &HashMap<Atom, FluentId>) -> GroundCondition {
        match self {
            ACond::True => GroundCondition::True,
            ACond::False => GroundCondition::False,
            ACond::Lit(a, v) => GroundCondition::Lit(ids[a], *v),
            ACond::And(cs) => GroundCondition::And(cs.iter().map(|c| c.to_ground(ids)).collect()),
            ACond::Or(cs) => GroundCondition::Or(cs.iter().map(|c| c.to_ground(ids)).collect()),
        }
    }
}

fn ground_condition(
    c: &Condition,
    bind: &impl Fn(&Atom) -> Atom,
    known: &impl Fn(&Atom) -> Option<bool>,
) -> ACond {
    match c {
        Condition::Atom(a) => ACond::Lit(bind(a), true).resimplify(known),
        Condition::Not(c) => ground_condition(c, bind, known).negate(),
        Condition::And(cs) => ACond::and(
            cs.iter()
                .map(|c| ground_condition(c, bind, known))
                .collect(),
        ),
        Condition::Or(cs) => ACond::or(
            cs.iter()
                .map(|c| ground_condition(c, bind, known))
                .collect(),
        ),
    }
}

/// A literal effect guarded by the conjunction of its enclosing `when`s.
#[derive(Clone)]
struct EffectItem<'a> {
    guards: Vec<&'a Condition>,
    atom: &'a Atom,
    add: bool,
}

/// Expands an effect tree into its alternatives: `oneof` branches are
/// concatenated, `and` takes the cross product of its children.
fn alternatives<'a>(e: &'a Effect, guards: &[&'a Condition]) -> Vec<Vec<EffectItem<'a>>> {
    match e {
        Effect::Add(a) | Effect::Delete(a) => vec![vec![EffectItem {
            guards: guards.to_vec(),
            atom: a,
            add: matches!(e, Effect::Add(_)),
        }]],
        Effect::And(es) => {
            let mut acc: Vec<Vec<EffectItem>> = vec![Vec::new()];
            for child in es {
                let alts = alternatives(child, guards);
                let mut next = Vec::with_capacity(acc.len() * alts.len());
                for prefix in &acc {
                    for alt in &alts {
                        let mut v = prefix.clone();
                        v.extend(alt.iter().cloned());
                        next.push(v);
                    }
                }
                acc = next;
            }
            acc
        }
        Effect::OneOf(es) => es.iter().flat_map(|c| alternatives(c, guards)).collect(),
        Effect::When(c, inner) => {
            let mut g = guards.to_vec();
            g.push(c);
            alternatives(inner, &g)
        }
    }
}

struct Instance {
    schema: usize,
    args: Vec<String>,
    pre: ACond,
    /// Per alternative: (guard, atom, is_add).
    alts: Vec<Vec<(ACond, Atom, bool)>>,
}

fn check_ground_atom(
    d: &DomainModel,
    a: &Atom,
    object_type: &HashMap<&str, &str>,
) -> Result<(), PddlError> {
    let p = d
        .predicate(&a.name)
        .ok_or_else(|| PddlError::UndeclaredPredicate(a.name.clone()))?;
    if p.params.len() != a.args.len() {
        return Err(PddlError::ArityMismatch {
            predicate: a.name.clone(),
            expected: p.params.len(),
            found: a.args.len(),
        });
    }
    for (t, param) in a.args.iter().zip(&p.params) {
        let o = t.name();
        let ty = object_type
            .get(o)
            .ok_or_else(|| PddlError::UnknownObject(o.to_string()))?;
        if !d.is_subtype(ty, &param.ty) {
            return Err(PddlError::TypeMismatch {
                atom: a.to_pddl(),
                object: o.to_string(),
                expected: param.ty.clone(),
            });
        }
    }
    Ok(())
}

/// Instantiates every action schema over the typed objects of `p`.
///
/// Static predicates (never changed by an action) are evaluated away,
/// instantiations whose precondition is unreachable in the delete
/// relaxation are dropped, and fluents are numbered in sorted atom order.
/// Actions keep schema order, then lexicographic argument order by object
/// declaration.
pub fn ground(d: &DomainModel, p: &ProblemModel) -> Result<FondModel, PddlError> {
    if !p.domain.eq_ignore_ascii_case(&d.name) {
        return Err(PddlError::DomainMismatch {
            expected: d.name.clone(),
            found: p.domain.clone(),
        });
    }
    let mut objects: Vec<TypedName> = Vec::new();
    for o in d.constants.iter().chain(&p.objects) {
        if !d.is_type(&o.ty) {
            return Err(PddlError::UnknownType(o.ty.clone()));
        }
        if !objects.iter().any(|x| x.name == o.name) {
            objects.push(o.clone());
        }
    }
    let object_type: HashMap<&str, &str> = objects
        .iter()
        .map(|o| (o.name.as_str(), o.ty.as_str()))
        .collect();
    for a in &p.init {
        check_ground_atom(d, a, &object_type)?;
    }
    let mut goal_err = None;
    p.goal.visit_atoms(&mut |a| {
        if goal_err.is_none() {
            goal_err = check_ground_atom(d, a, &object_type).err();
        }
    });
    if let Some(e) = goal_err {
        return Err(e);
    }

    let mut fluent_preds: HashSet<String> = HashSet::new();
    for a in &d.actions {
        a.effect.visit_changed(&mut |at| {
            fluent_preds.insert(at.name.clone());
        });
    }
    let is_fluent = |a: &Atom| fluent_preds.contains(&a.name);
    let static_facts: BTreeSet<Atom> = p.init.iter().filter(|a| !is_fluent(a)).cloned().collect();
    let static_known = |a: &Atom| {
        if is_fluent(a) {
            None
        } else {
            Some(static_facts.contains(a))
        }
    };

    let mut instances: Vec<Instance> = Vec::new();
    for (si, schema) in d.actions.iter().enumerate() {
        let candidates: Vec<Vec<&str>> = schema
            .params
            .iter()
            .map(|prm| {
                objects
                    .iter()
                    .filter(|o| d.is_subtype(&o.ty, &prm.ty))
                    .map(|o| o.name.as_str())
                    .collect()
            })
            .collect();
        let conjuncts: Vec<&Condition> = match &schema.precondition {
            Condition::And(cs) => cs.iter().collect(),
            c => vec![c],
        };
        // a conjunct is checked as soon as its last parameter is bound
        let mut checks: Vec<Vec<&Condition>> = vec![Vec::new(); schema.params.len() + 1];
        for c in &conjuncts {
            let mut last = 0;
            c.visit_atoms(&mut |a| {
                for t in &a.args {
                    if let Term::Variable(v) = t {
                        if let Some(i) = schema.params.iter().position(|p| &p.name == v) {
                            last = last.max(i + 1);
                        }
                    }
                }
            });
            checks[last].push(c);
        }
        let alts = alternatives(&schema.effect, &[]);

        let mut binding: Vec<&str> = Vec::with_capacity(schema.params.len());
        enumerate(
            &candidates,
            &mut binding,
            &mut |b: &[&str]| {
                let lookup = |v: &str| {
                    schema
                        .params
                        .iter()
                        .position(|p| p.name == v)
                        .and_then(|i| b.get(i))
                        .map(|s| s.to_string())
                };
                let bind = |a: &Atom| substitute(a, &lookup);
                checks[b.len()]
                    .iter()
                    .all(|c| ground_condition(c, &bind, &static_known) != ACond::False)
            },
            &mut |b: &[&str]| {
                let lookup = |v: &str| {
                    schema
                        .params
                        .iter()
                        .position(|p| p.name == v)
                        .map(|i| b[i].to_string())
                };
                let bind = |a: &Atom| substitute(a, &lookup);
                let pre = ground_condition(&schema.precondition, &bind, &static_known);
                if pre == ACond::False {
                    return;
                }
                let galts = alts
                    .iter()
                    .map(|alt| {
                        alt.iter()
                            .filter_map(|it| {
                                let guard = ACond::and(
                                    it.guards
                                        .iter()
                                        .map(|g| ground_condition(g, &bind, &static_known))
                                        .collect(),
                                );
                                (guard != ACond::False).then(|| (guard, bind(it.atom), it.add))
                            })
                            .collect()
                    })
                    .collect();
                instances.push(Instance {
                    schema: si,
                    args: b.iter().map(|s| s.to_string()).collect(),
                    pre,
                    alts: galts,
                });
            },
        );
    }

    // delete-relaxed reachability
    let mut reached: HashSet<Atom> = p.init.iter().filter(|a| is_fluent(a)).cloned().collect();
    let mut fired = vec![false; instances.len()];
    loop {
        let mut changed = false;
        for (i, inst) in instances.iter().enumerate() {
            if !fired[i] && inst.pre.relaxed(&reached) {
                fired[i] = true;
                changed = true;
            }
            if fired[i] {
                for alt in &inst.alts {
                    for (g, a, add) in alt {
                        if *add && !reached.contains(a) && g.relaxed(&reached) {
                            reached.insert(a.clone());
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
    let reach_known = |a: &Atom| (!reached.contains(a)).then_some(false);

    let mut kept: Vec<Instance> = Vec::new();
    for (inst, f) in instances.into_iter().zip(fired) {
        if !f {
            continue;
        }
        let pre = inst.pre.resimplify(&reach_known);
        if pre == ACond::False {
            continue;
        }
        let alts = inst
            .alts
            .into_iter()
            .map(|alt| {
                alt.into_iter()
                    .filter_map(|(g, a, add)| {
                        let g = g.resimplify(&reach_known);
                        let useful = g != ACond::False && (add || reached.contains(&a));
                        useful.then_some((g, a, add))
                    })
                    .collect()
            })
            .collect();
        kept.push(Instance { pre, alts, ..inst });
    }
    let goal =
        ground_condition(&p.goal, &|a: &Atom| a.clone(), &static_known).resimplify(&reach_known);

    let mut universe: BTreeSet<Atom> = reached.iter().cloned().collect();
    for inst in &kept {
        inst.pre.visit(&mut |a| {
            universe.insert(a.clone());
        });
        for alt in &inst.alts {
            for (g, a, _) in alt {
                g.visit(&mut |x| {
                    universe.insert(x.clone());
                });
                universe.insert(a.clone());
            }
        }
    }
    goal.visit(&mut |a| {
        universe.insert(a.clone());
    });
    let fluents: Vec<Atom> = universe.into_iter().collect();
    let fluent_index: HashMap<Atom, FluentId> = fluents
        .iter()
        .enumerate()
        .map(|(i, a)| (a.clone(), i as FluentId))
        .collect();

    let actions: Vec<GroundAction> = kept
        .iter()
        .map(|inst| GroundAction {
            name: d.actions[inst.schema].name.clone(),
            args: inst.args.clone(),
            precondition: inst.pre.to_ground(&fluent_index),
            outcomes: inst
                .alts
                .iter()
                .map(|alt| build_outcome(alt, &fluent_index))
                .collect(),
        })
        .collect();
    let action_index = actions
        .iter()
        .enumerate()
        .map(|(i, a)| (a.label(), i as ActionId))
        .collect();
    let init = State::from_ids(
        p.init
            .iter()
            .filter(|a| is_fluent(a))
            .map(|a| fluent_index[a])
            .collect(),
    );
    Ok(FondModel {
        goal: goal.to_ground(&fluent_index),
        fluents,
        fluent_index,
        static_facts,
        objects,
        actions,
        action_index,
        init,
    })
}

fn build_outcome(alt: &[(ACond, Atom, bool)], ids: &HashMap<Atom, FluentId>) -> Outcome {
    let mut o = Outcome::default();
    for (g, a, add) in alt {
        let f = ids[a];
        if *g == ACond::True {
            if *add {
                o.add.push(f);
            } else {
                o.del.push(f);
            }
            continue;
        }
        let cond = g.to_ground(ids);
        let idx = match o.conditional.iter().position(|c| c.condition == cond) {
            Some(i) => i,
            None => {
                o.conditional.push(ConditionalEffect {
                    condition: cond,
                    add: Vec::new(),
                    del: Vec::new(),
                });
                o.conditional.len() - 1
            }
        };
        if *add {
            o.conditional[idx].add.push(f);
        } else {
            o.conditional[idx].del.push(f);
        }
    }
    o
}

/// Depth-first enumeration of argument tuples; `partial` prunes prefixes.
fn enumerate<'a>(
    candidates: &[Vec<&'a str>],
    binding: &mut Vec<&'a str>,
    partial: &mut impl FnMut(&[&'a str]) -> bool,
    full: &mut impl FnMut(&[&'a str]),
) {
    if !partial(binding) {
        return;
    }
    if binding.len() == candidates.len() {
        full(binding);
        return;
    }
    for &o in &candidates[binding.len()] {
        binding.push(o);
        enumerate(candidates, binding, partial, full);
        binding.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pddl::{parse_domain, parse_problem};

    const DOMAIN: &str = "(define (domain toy)
  (:requirements :typing :non-deterministic :conditional-effects)
  (:types cell)
  (:predicates (at ?c - cell) (adj ?a ?b - cell) (lit) (broken))
  (:action step
    :parameters (?a ?b - cell)
    :precondition (and (at ?a) (adj ?a ?b) (not (broken)))
    :effect (oneof (and (at ?b) (not (at ?a))) (and (at ?b) (not (at ?a)) (broken))))
  (:action fix
    :parameters ()
    :precondition (broken)
    :effect (and (not (broken)) (when (lit) (not (lit)))))
  (:action light
    :parameters (?a - cell)
    :precondition (at ?a)
    :effect (and (lit) (not (lit)) (when (broken) (at ?a)))))";

    fn model(init: &str) -> FondModel {
        let d = parse_domain(DOMAIN).unwrap();
        let p = parse_problem(&format!(
            "(define (problem t) (:domain toy) (:objects c1 c2 c3 - cell)
             (:init (adj c1 c2) (adj c2 c3) {init}) (:goal (at c3)))"
        ))
        .unwrap();
        ground(&d, &p).unwrap()
    }

    #[test]
    fn static_pruning_and_order() {
        let m = model("(at c1)");
        let labels: Vec<String> = m.actions().iter().map(|a| a.label().to_string()).collect();
        assert_eq!(
            labels,
            vec![
                "(step c1 c2)",
                "(step c2 c3)",
                "(fix)",
                "(light c1)",
                "(light c2)",
                "(light c3)"
            ]
        );
        assert!(m.fluent_id(&Atom::ground("adj", &["c1", "c2"])).is_none());
        assert!(m.atom_holds(m.init(), &Atom::ground("adj", &["c1", "c2"])));
        let mut sorted = m.fluents().to_vec();
        sorted.sort();
        assert_eq!(sorted, m.fluents());
    }

    #[test]
    fn nondeterministic_step_has_two_successors() {
        let m = model("(at c1)");
        let a = m
            .find_action(&ActionLabel::new("step", &["c1", "c2"]))
            .unwrap();
        assert_eq!(m.action(a).outcomes.len(), 2);
        let succ = m.apply(m.init(), a).unwrap();
        let as_atoms: Vec<Vec<String>> = succ
            .iter()
            .map(|s| m.state_atoms(s).iter().map(|a| a.to_pddl()).collect())
            .collect();
        assert_eq!(as_atoms, vec![vec!["(at c2)"], vec!["(at c2)", "(broken)"]]);
        let b = m
            .find_action(&ActionLabel::new("step", &["c2", "c3"]))
            .unwrap();
        assert!(matches!(
            m.apply(m.init(), b),
            Err(PddlError::Inapplicable(_))
        ));
    }

    #[test]
    fn add_after_delete_and_conditional_effects() {
        let m = model("(at c1)");
        let light = m.find_action(&ActionLabel::new("light", &["c1"])).unwrap();
        let s = &m.apply(m.init(), light).unwrap()[0];
        assert!(m.atom_holds(s, &Atom::prop("lit")));
        let fix = m
            .find_action(&ActionLabel::new("fix", &[] as &[&str]))
            .unwrap();
        let broken = m
            .state_from_atoms(&[Atom::ground("at", &["c2"]), Atom::prop("broken")])
            .unwrap();
        let next = m.apply(&broken, fix).unwrap();
        assert_eq!(next.len(), 1);
        assert_eq!(m.state_atoms(&next[0]), vec![Atom::ground("at", &["c2"])]);
        // when-conditions false: only unconditional effects apply
        let lit = m
            .state_from_atoms(&[
                Atom::ground("at", &["c2"]),
                Atom::prop("lit"),
                Atom::prop("broken"),
            ])
            .unwrap();
        let next = m.apply(&lit, fix).unwrap();
        assert_eq!(m.state_atoms(&next[0]), vec![Atom::ground("at", &["c2"])]);
    }

    #[test]
    fn unreachable_actions_are_omitted() {
        let m = model("");
        assert_eq!(m.num_actions(), 0);
        assert_eq!(*m.goal(), GroundCondition::False);
    }

    #[test]
    fn type_errors() {
        let d = parse_domain(DOMAIN).unwrap();
        let p = parse_problem(
            "(define (problem t) (:domain toy) (:objects c1 - cell x - object)
             (:init (at x)) (:goal (at c1)))",
        )
        .unwrap();
        assert!(matches!(
            ground(&d, &p),
            Err(PddlError::TypeMismatch { .. })
        ));
        let p = parse_problem(
            "(define (problem t) (:domain toy) (:objects c1 - cell) (:init (at c9)) (:goal (at c1)))",
        )
        .unwrap();
        assert_eq!(
            ground(&d, &p).unwrap_err(),
            PddlError::UnknownObject("c9".into())
        );
    }

    #[test]
    fn grounding_is_deterministic() {
        let a = model("(at c1)");
        let b = model("(at c1)");
        assert_eq!(a.fluents(), b.fluents());
        assert_eq!(a.actions(), b.actions());
    }
}
