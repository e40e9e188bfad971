//! A PDDL subset with nondeterministic (`oneof`) and conditional (`when`)
//! effects: parsing, printing and grounding into an explicit FOND model.

mod ground;
mod parse;
mod print;
mod sexpr;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::logic::{Atom, Term};

pub use ground::{
    ground, ActionId, ConditionalEffect, FluentId, FondModel, GroundAction, GroundCondition,
    Outcome, State,
};
pub use parse::{parse_domain, parse_problem};
pub use print::{print_domain, print_problem};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PddlError {
    #[error("{line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("{line}:{col}: unsupported PDDL construct `{construct}`")]
    Unsupported {
        construct: String,
        line: usize,
        col: usize,
    },
    #[error("predicate `{0}` is not declared")]
    UndeclaredPredicate(String),
    #[error("`{predicate}` expects {expected} arguments, found {found}")]
    ArityMismatch {
        predicate: String,
        expected: usize,
        found: usize,
    },
    #[error("type `{0}` is not declared")]
    UnknownType(String),
    #[error("object `{0}` is not declared")]
    UnknownObject(String),
    #[error("variable `?{variable}` is not a parameter of `{action}`")]
    UnboundVariable { action: String, variable: String },
    #[error("type mismatch in {atom}: `{object}` is not of type `{expected}`")]
    TypeMismatch {
        atom: String,
        object: String,
        expected: String,
    },
    #[error("problem is for domain `{found}`, not `{expected}`")]
    DomainMismatch { expected: String, found: String },
    #[error("action {0} is not applicable")]
    Inapplicable(String),
    #[error("unknown action {0}")]
    UnknownAction(String),
}

/// A name with its declared type (`object` when untyped).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TypedName {
    pub name: String,
    pub ty: String,
}

impl TypedName {
    pub fn new(name: impl Into<String>, ty: impl Into<String>) -> Self {
        TypedName {
            name: name.into(),
            ty: ty.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateSchema {
    pub name: String,
    pub params: Vec<TypedName>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Condition {
    Atom(Atom),
    Not(Box<Condition>),
    And(Vec<Condition>),
    Or(Vec<Condition>),
}

impl Condition {
    pub fn truth() -> Condition {
        Condition::And(Vec::new())
    }

    pub fn negate(c: Condition) -> Condition {
        Condition::Not(Box::new(c))
    }

    pub fn visit_atoms(&self, f: &mut impl FnMut(&Atom)) {
        match self {
            Condition::Atom(a) => f(a),
            Condition::Not(c) => c.visit_atoms(f),
            Condition::And(cs) | Condition::Or(cs) => cs.iter().for_each(|c| c.visit_atoms(f)),
        }
    }

    pub fn map_atoms(&self, f: &mut impl FnMut(&Atom) -> Atom) -> Condition {
        match self {
            Condition::Atom(a) => Condition::Atom(f(a)),
            Condition::Not(c) => Condition::negate(c.map_atoms(f)),
            Condition::And(cs) => Condition::And(cs.iter().map(|c| c.map_atoms(f)).collect()),
            Condition::Or(cs) => Condition::Or(cs.iter().map(|c| c.map_atoms(f)).collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Effect {
    Add(Atom),
    Delete(Atom),
    And(Vec<Effect>),
    OneOf(Vec<Effect>),
    When(Condition, Box<Effect>),
}

impl Effect {
    pub fn visit_atoms(&self, f: &mut impl FnMut(&Atom)) {
        match self {
            Effect::Add(a) | Effect::Delete(a) => f(a),
            Effect::And(es) | Effect::OneOf(es) => es.iter().for_each(|e| e.visit_atoms(f)),
            Effect::When(c, e) => {
                c.visit_atoms(f);
                e.visit_atoms(f);
            }
        }
    }

    /// Atoms that the effect may add or delete (not `when` conditions).
    pub fn visit_changed(&self, f: &mut impl FnMut(&Atom)) {
        match self {
            Effect::Add(a) | Effect::Delete(a) => f(a),
            Effect::And(es) | Effect::OneOf(es) => es.iter().for_each(|e| e.visit_changed(f)),
            Effect::When(_, e) => e.visit_changed(f),
        }
    }

    pub fn is_deterministic(&self) -> bool {
        match self {
            Effect::Add(_) | Effect::Delete(_) => true,
            Effect::OneOf(_) => false,
            Effect::And(es) => es.iter().all(Effect::is_deterministic),
            Effect::When(_, e) => e.is_deterministic(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionSchema {
    pub name: String,
    pub params: Vec<TypedName>,
    pub precondition: Condition,
    pub effect: Effect,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainModel {
    pub name: String,
    pub requirements: Vec<String>,
    /// Declared types with their parent type.
    pub types: Vec<TypedName>,
    pub constants: Vec<TypedName>,
    pub predicates: Vec<PredicateSchema>,
    pub actions: Vec<ActionSchema>,
}

impl DomainModel {
    pub fn predicate(&self, name: &str) -> Option<&PredicateSchema> {
        self.predicates.iter().find(|p| p.name == name)
    }

    pub fn action(&self, name: &str) -> Option<&ActionSchema> {
        self.actions.iter().find(|a| a.name == name)
    }

    pub fn is_type(&self, ty: &str) -> bool {
        ty == "object" || self.types.iter().any(|t| t.name == ty)
    }

    /// Whether `ty` equals `ancestor` or inherits from it.
    pub fn is_subtype(&self, ty: &str, ancestor: &str) -> bool {
        let mut cur = ty;
        for _ in 0..=self.types.len() {
            if cur == ancestor || ancestor == "object" {
                return true;
            }
            match self.types.iter().find(|t| t.name == cur) {
                Some(t) if t.ty != cur => cur = &t.ty,
                _ => return false,
            }
        }
        false
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemModel {
    pub name: String,
    pub domain: String,
    pub objects: Vec<TypedName>,
    pub init: Vec<Atom>,
    /// Whether `:init` was written as a single `(and ...)`.
    pub init_conjunction: bool,
    pub goal: Condition,
}

/// A ground action reference such as `(move 11 21)`. Serialized as that
/// string.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActionLabel {
    pub name: String,
    pub args: Vec<String>,
}

impl ActionLabel {
    pub fn new<S: AsRef<str>>(name: impl Into<String>, args: &[S]) -> Self {
        ActionLabel {
            name: name.into(),
            args: args.iter().map(|a| a.as_ref().to_string()).collect(),
        }
    }
}

impl fmt::Display for ActionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.name)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        f.write_str(")")
    }
}

impl std::str::FromStr for ActionLabel {
    type Err = String;

    /// Accepts `(move 11 21)`, `move 11 21` and `move(11,21)`.
    fn from_str(s: &str) -> Result<Self, String> {
        let cleaned: String = s
            .chars()
            .map(|c| if matches!(c, '(' | ')' | ',') { ' ' } else { c })
            .collect();
        let mut words = cleaned.split_whitespace();
        let name = words
            .next()
            .ok_or_else(|| format!("empty action `{s}`"))?
            .to_string();
        Ok(ActionLabel {
            name,
            args: words.map(str::to_string).collect(),
        })
    }
}

impl Serialize for ActionLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ActionLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub(crate) fn substitute(a: &Atom, binding: &impl Fn(&str) -> Option<String>) -> Atom {
    Atom {
        name: a.name.clone(),
        args: a
            .args
            .iter()
            .map(|t| match t {
                Term::Variable(v) => Term::Object(binding(v).unwrap_or_else(|| v.clone())),
                o => o.clone(),
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn action_labels_parse_in_several_forms() {
        let want = ActionLabel::new("move", &["11", "21"]);
        for s in [
            "(move 11 21)",
            "move 11 21",
            "move(11,21)",
            " ( move  11 21 ) ",
        ] {
            assert_eq!(s.parse::<ActionLabel>().unwrap(), want);
        }
        assert_eq!(want.to_string(), "(move 11 21)");
        let json = serde_json::to_string(&want).unwrap();
        assert_eq!(json, "\"(move 11 21)\"");
        assert_eq!(serde_json::from_str::<ActionLabel>(&json).unwrap(), want);
        assert!("".parse::<ActionLabel>().is_err());
    }
}
