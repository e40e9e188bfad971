//! LTLf and PPLTL formulas over finite traces.

mod parse;
mod semantics;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use parse::parse_formula;
pub use semantics::{evaluate_positions, holds, holds_as, holds_at};

/// Which temporal fragment a formula text is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dialect {
    Ltlf,
    Ppltl,
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dialect::Ltlf => f.write_str("ltlf"),
            Dialect::Ppltl => f.write_str("ppltl"),
        }
    }
}

impl std::str::FromStr for Dialect {
    type Err = LogicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ltlf" => Ok(Dialect::Ltlf),
            "ppltl" | "pltlf" | "pltl" => Ok(Dialect::Ppltl),
            other => Err(LogicError::UnknownDialect(other.to_string())),
        }
    }
}

/// Temporal direction of a formula. Purely propositional formulas have none.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tense {
    Future,
    Past,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LogicError {
    #[error("syntax error at offset {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("formula mixes future and past temporal operators")]
    MixedTense,
    #[error("{dialect} formula uses a {found} operator")]
    WrongDialect {
        dialect: Dialect,
        found: &'static str,
    },
    #[error("traces must contain at least one step")]
    EmptyTrace,
    #[error("position {index} is out of range for a trace of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("unknown dialect `{0}`")]
    UnknownDialect(String),
}

/// An argument of an atom: either a problem object or a (PDFA) variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Term {
    Object(String),
    Variable(String),
}

impl Term {
    pub fn name(&self) -> &str {
        match self {
            Term::Object(s) | Term::Variable(s) => s,
        }
    }

    pub fn is_variable(&self) -> bool {
        matches!(self, Term::Variable(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Object(s) => f.write_str(s),
            Term::Variable(s) => write!(f, "?{s}"),
        }
    }
}

/// A proposition: a predicate name applied to zero or more terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Atom {
    pub name: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(name: impl Into<String>, args: Vec<Term>) -> Self {
        Atom {
            name: name.into(),
            args,
        }
    }

    /// A zero-argument atom.
    pub fn prop(name: impl Into<String>) -> Self {
        Atom::new(name, Vec::new())
    }

    /// An atom whose arguments are all objects.
    pub fn ground<S: AsRef<str>>(name: impl Into<String>, args: &[S]) -> Self {
        Atom::new(
            name,
            args.iter()
                .map(|a| Term::Object(a.as_ref().to_string()))
                .collect(),
        )
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(|t| !t.is_variable())
    }

    /// PDDL-style rendering, e.g. `(vAt 51)`.
    pub fn to_pddl(&self) -> String {
        let mut out = format!("({}", self.name);
        for a in &self.args {
            out.push(' ');
            out.push_str(&a.to_string());
        }
        out.push(')');
        out
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Temporal formula AST. Abbreviations are kept as their own node kinds;
/// [`Formula::desugar`] rewrites them into the core operators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    WeakNext(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Eventually(Box<Formula>),
    Always(Box<Formula>),
    Before(Box<Formula>),
    Since(Box<Formula>, Box<Formula>),
    Once(Box<Formula>),
    Historically(Box<Formula>),
}

impl Formula {
    pub fn atom(a: Atom) -> Self {
        Formula::Atom(a)
    }

    pub fn prop(name: &str) -> Self {
        Formula::Atom(Atom::prop(name))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn next(f: Formula) -> Self {
        Formula::Next(Box::new(f))
    }

    pub fn weak_next(f: Formula) -> Self {
        Formula::WeakNext(Box::new(f))
    }

    pub fn until(a: Formula, b: Formula) -> Self {
        Formula::Until(Box::new(a), Box::new(b))
    }

    pub fn eventually(f: Formula) -> Self {
        Formula::Eventually(Box::new(f))
    }

    pub fn always(f: Formula) -> Self {
        Formula::Always(Box::new(f))
    }

    pub fn before(f: Formula) -> Self {
        Formula::Before(Box::new(f))
    }

    pub fn since(a: Formula, b: Formula) -> Self {
        Formula::Since(Box::new(a), Box::new(b))
    }

    pub fn once(f: Formula) -> Self {
        Formula::Once(Box::new(f))
    }

    pub fn historically(f: Formula) -> Self {
        Formula::Historically(Box::new(f))
    }

    /// Conjunction of a non-empty list, left-nested.
    pub fn and_all(mut items: Vec<Formula>) -> Formula {
        match items.len() {
            0 => Formula::True,
            1 => items.pop().unwrap(),
            _ => {
                let first = items.remove(0);
                items.into_iter().fold(first, Formula::and)
            }
        }
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => vec![],
            Formula::Not(a)
            | Formula::Next(a)
            | Formula::WeakNext(a)
            | Formula::Eventually(a)
            | Formula::Always(a)
            | Formula::Before(a)
            | Formula::Once(a)
            | Formula::Historically(a) => vec![a],
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Until(a, b)
            | Formula::Since(a, b) => {
                vec![a, b]
            }
        }
    }

    fn own_tense(&self) -> Option<Tense> {
        match self {
            Formula::Next(_)
            | Formula::WeakNext(_)
            | Formula::Until(..)
            | Formula::Eventually(_)
            | Formula::Always(_) => Some(Tense::Future),
            Formula::Before(_)
            | Formula::Since(..)
            | Formula::Once(_)
            | Formula::Historically(_) => Some(Tense::Past),
            _ => None,
        }
    }

    /// The tense of the formula, `Ok(None)` when it has no temporal operator.
    pub fn tense(&self) -> Result<Option<Tense>, LogicError> {
        let mut found = self.own_tense();
        for c in self.children() {
            match (found, c.tense()?) {
                (_, None) => {}
                (None, t) => found = t,
                (Some(a), Some(b)) if a == b => {}
                _ => return Err(LogicError::MixedTense),
            }
        }
        Ok(found)
    }

    /// Checks that the formula only uses operators of `dialect`.
    pub fn check_dialect(&self, dialect: Dialect) -> Result<(), LogicError> {
        match (self.tense()?, dialect) {
            (Some(Tense::Past), Dialect::Ltlf) => Err(LogicError::WrongDialect {
                dialect,
                found: "past",
            }),
            (Some(Tense::Future), Dialect::Ppltl) => Err(LogicError::WrongDialect {
                dialect,
                found: "future",
            }),
            _ => Ok(()),
        }
    }

    /// Rewrites abbreviations into the core operators: `{atom, not, and,
    /// next, until}` for future formulas, `{atom, not, and, before, since}`
    /// for past ones. `or`, `true` and `false` are expressed through them.
    pub fn desugar(&self) -> Formula {
        use Formula as F;
        match self {
            F::True => F::True,
            F::False => F::False,
            F::Atom(a) => F::Atom(a.clone()),
            F::Not(a) => F::not(a.desugar()),
            F::And(a, b) => F::and(a.desugar(), b.desugar()),
            F::Or(a, b) => F::not(F::and(F::not(a.desugar()), F::not(b.desugar()))),
            F::Next(a) => F::next(a.desugar()),
            F::WeakNext(a) => F::not(F::next(F::not(a.desugar()))),
            F::Until(a, b) => F::until(a.desugar(), b.desugar()),
            F::Eventually(a) => F::until(F::True, a.desugar()),
            F::Always(a) => F::not(F::until(F::True, F::not(a.desugar()))),
            F::Before(a) => F::before(a.desugar()),
            F::Since(a, b) => F::since(a.desugar(), b.desugar()),
            F::Once(a) => F::since(F::True, a.desugar()),
            F::Historically(a) => F::not(F::since(F::True, F::not(a.desugar()))),
        }
    }

    /// All atoms occurring in the formula, sorted and deduplicated.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        if let Formula::Atom(a) = self {
            out.insert(a.clone());
        }
        for c in self.children() {
            c.collect_atoms(out);
        }
    }

    /// Object constants occurring as atom arguments, in first-occurrence order.
    pub fn objects(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        self.visit_atoms(&mut |a| {
            for t in &a.args {
                if let Term::Object(o) = t {
                    if !out.contains(o) {
                        out.push(o.clone());
                    }
                }
            }
        });
        out
    }

    pub fn visit_atoms(&self, f: &mut impl FnMut(&Atom)) {
        if let Formula::Atom(a) = self {
            f(a);
        }
        for c in self.children() {
            c.visit_atoms(f);
        }
    }

    /// Applies `f` to every atom, rebuilding the formula.
    pub fn map_atoms(&self, f: &mut impl FnMut(&Atom) -> Atom) -> Formula {
        use Formula as F;
        match self {
            F::True => F::True,
            F::False => F::False,
            F::Atom(a) => F::Atom(f(a)),
            F::Not(a) => F::not(a.map_atoms(f)),
            F::And(a, b) => F::and(a.map_atoms(f), b.map_atoms(f)),
            F::Or(a, b) => F::or(a.map_atoms(f), b.map_atoms(f)),
            F::Next(a) => F::next(a.map_atoms(f)),
            F::WeakNext(a) => F::weak_next(a.map_atoms(f)),
            F::Until(a, b) => F::until(a.map_atoms(f), b.map_atoms(f)),
            F::Eventually(a) => F::eventually(a.map_atoms(f)),
            F::Always(a) => F::always(a.map_atoms(f)),
            F::Before(a) => F::before(a.map_atoms(f)),
            F::Since(a, b) => F::since(a.map_atoms(f), b.map_atoms(f)),
            F::Once(a) => F::once(a.map_atoms(f)),
            F::Historically(a) => F::historically(a.map_atoms(f)),
        }
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Or(..) => 1,
            Formula::And(..) => 2,
            Formula::Until(..) | Formula::Since(..) => 3,
            _ => 4,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, c: &Formula, min: u8) -> fmt::Result {
            if c.precedence() < min {
                write!(f, "({c})")
            } else {
                write!(f, "{c}")
            }
        }
        fn unary(f: &mut fmt::Formatter<'_>, op: &str, c: &Formula) -> fmt::Result {
            f.write_str(op)?;
            if c.precedence() < 4 || op.chars().all(|ch| ch.is_ascii_uppercase()) {
                write!(f, "({c})")
            } else {
                write!(f, "{c}")
            }
        }
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(a) => unary(f, "!", a),
            Formula::And(a, b) => {
                child(f, a, 2)?;
                f.write_str(" & ")?;
                child(f, b, 3)
            }
            Formula::Or(a, b) => {
                child(f, a, 1)?;
                f.write_str(" | ")?;
                child(f, b, 2)
            }
            Formula::Until(a, b) | Formula::Since(a, b) => {
                let op = if matches!(self, Formula::Until(..)) {
                    "U"
                } else {
                    "S"
                };
                child(f, a, 4)?;
                write!(f, " {op} ")?;
                child(f, b, 3)
            }
            Formula::Next(a) => unary(f, "X", a),
            Formula::WeakNext(a) => unary(f, "WX", a),
            Formula::Eventually(a) => unary(f, "F", a),
            Formula::Always(a) => unary(f, "G", a),
            Formula::Before(a) => unary(f, "Y", a),
            Formula::Once(a) => unary(f, "O", a),
            Formula::Historically(a) => unary(f, "H", a),
        }
    }
}

/// A finite, non-empty sequence of propositional interpretations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Trace {
    steps: Vec<BTreeSet<Atom>>,
}

impl Trace {
    pub fn new(steps: Vec<BTreeSet<Atom>>) -> Result<Self, LogicError> {
        if steps.is_empty() {
            return Err(LogicError::EmptyTrace);
        }
        Ok(Trace { steps })
    }

    /// Convenience constructor from lists of zero-argument atom names.
    pub fn from_props(steps: &[&[&str]]) -> Result<Self, LogicError> {
        Trace::new(
            steps
                .iter()
                .map(|s| s.iter().map(|n| Atom::prop(*n)).collect())
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[BTreeSet<Atom>] {
        &self.steps
    }

    pub fn step(&self, i: usize) -> &BTreeSet<Atom> {
        &self.steps[i]
    }
}
