//! Deterministic finite automata for LTLf/PPLTL formulas.
//!
//! Automata read one propositional interpretation per step and are only
//! meaningful on non-empty traces: whether the initial state accepts (the
//! empty trace) is left free, and minimization picks whichever choice gives
//! fewer states.

mod build;
mod guard;
mod minimize;
mod pdfa;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::logic::{Atom, Trace};

pub use build::{compile_to_dfa, compile_to_dfa_as, DfaOptions, DEFAULT_STATE_CAP};
pub use guard::Guard;
pub use minimize::minimize;
pub use pdfa::{ground_pdfa, lift_to_pdfa, ObjectMapping, Pdfa};

pub type StateId = usize;

/// Largest alphabet for which letters are enumerated explicitly.
pub const MAX_ALPHABET: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AutomataError {
    #[error("automaton exceeds the state budget of {cap} states")]
    StateBudgetExceeded { cap: usize },
    #[error("alphabet of {size} atoms exceeds the supported maximum of {MAX_ALPHABET}")]
    AlphabetTooLarge { size: usize },
    #[error(transparent)]
    Logic(#[from] crate::logic::LogicError),
    #[error("object `{0}` has no variable in the mapping")]
    UnmappedObject(String),
    #[error("variable `{0}` is not bound")]
    UnboundVariable(String),
    #[error("state {state} has no unique transition on letter {letter:#b}")]
    NotDeterministic { state: StateId, letter: u32 },
    #[error("mapping is not injective on `{0}`")]
    NotInjective(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DfaState {
    pub accepting: bool,
    /// Mutually exclusive, exhaustive guards, ordered by target.
    pub transitions: Vec<(Guard, StateId)>,
}

/// Explicit-state DFA whose edges carry propositional guards over `alphabet`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dfa {
    alphabet: Vec<Atom>,
    states: Vec<DfaState>,
    initial: StateId,
}

/// Dense transition table over letters (bitmasks of the alphabet).
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct LetterTable {
    pub alphabet: Vec<Atom>,
    pub initial: usize,
    pub accepting: Vec<bool>,
    pub delta: Vec<Vec<usize>>,
}

impl LetterTable {
    pub fn num_letters(&self) -> usize {
        1 << self.alphabet.len()
    }

    pub fn into_dfa(self) -> Dfa {
        let n_letters = self.num_letters();
        let states = self
            .delta
            .iter()
            .zip(&self.accepting)
            .map(|(row, &accepting)| {
                let mut targets: Vec<usize> = row.clone();
                targets.sort_unstable();
                targets.dedup();
                let transitions = targets
                    .into_iter()
                    .map(|t| {
                        let letters: Vec<u32> = (0..n_letters as u32)
                            .filter(|&l| row[l as usize] == t)
                            .collect();
                        (Guard::from_letters(&self.alphabet, &letters), t)
                    })
                    .collect();
                DfaState {
                    accepting,
                    transitions,
                }
            })
            .collect();
        Dfa {
            alphabet: self.alphabet,
            states,
            initial: self.initial,
        }
    }
}

impl Dfa {
    /// Assembles an automaton from parts, checking determinism and totality.
    pub fn from_parts(
        alphabet: Vec<Atom>,
        states: Vec<DfaState>,
        initial: StateId,
    ) -> Result<Dfa, AutomataError> {
        if alphabet.len() > MAX_ALPHABET {
            return Err(AutomataError::AlphabetTooLarge {
                size: alphabet.len(),
            });
        }
        let d = Dfa {
            alphabet,
            states,
            initial,
        };
        d.to_table()?;
        Ok(d)
    }

    pub fn alphabet(&self) -> &[Atom] {
        &self.alphabet
    }

    pub fn states(&self) -> &[DfaState] {
        &self.states
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.states[q].accepting
    }

    pub fn accepting_states(&self) -> Vec<StateId> {
        (0..self.states.len())
            .filter(|&q| self.states[q].accepting)
            .collect()
    }

    /// Successor of `q` under the letter described by `holds`.
    pub fn step_with(&self, q: StateId, holds: &impl Fn(&Atom) -> bool) -> StateId {
        self.states[q]
            .transitions
            .iter()
            .find(|(g, _)| g.eval(holds))
            .map(|(_, t)| *t)
            .expect("transition guards are exhaustive")
    }

    pub fn step(&self, q: StateId, letter: &BTreeSet<Atom>) -> StateId {
        self.step_with(q, &|a| letter.contains(a))
    }

    /// State reached after consuming every step of `trace`.
    pub fn run(&self, trace: &Trace) -> StateId {
        trace
            .steps()
            .iter()
            .fold(self.initial, |q, step| self.step(q, step))
    }

    pub fn accepts(&self, trace: &Trace) -> bool {
        self.is_accepting(self.run(trace))
    }

    /// Dense table; fails if some letter enables zero or several guards.
    pub(crate) fn to_table(&self) -> Result<LetterTable, AutomataError> {
        let k = self.alphabet.len();
        if k > MAX_ALPHABET {
            return Err(AutomataError::AlphabetTooLarge { size: k });
        }
        let n_letters = 1usize << k;
        let mut delta = Vec::with_capacity(self.states.len());
        for (qi, s) in self.states.iter().enumerate() {
            let mut row = Vec::with_capacity(n_letters);
            for l in 0..n_letters {
                let holds = |a: &Atom| {
                    self.alphabet
                        .iter()
                        .position(|b| b == a)
                        .is_some_and(|i| l & (1 << i) != 0)
                };
                let enabled: Vec<usize> = s
                    .transitions
                    .iter()
                    .filter(|(g, _)| g.eval(&holds))
                    .map(|(_, t)| *t)
                    .collect();
                if enabled.len() != 1 || enabled[0] >= self.states.len() {
                    return Err(AutomataError::NotDeterministic {
                        state: qi,
                        letter: l as u32,
                    });
                }
                row.push(enabled[0]);
            }
            delta.push(row);
        }
        Ok(LetterTable {
            alphabet: self.alphabet.clone(),
            initial: self.initial,
            accepting: self.states.iter().map(|s| s.accepting).collect(),
            delta,
        })
    }

    /// True iff every letter enables exactly one guard in every state.
    pub fn is_deterministic_and_total(&self) -> bool {
        self.to_table().is_ok()
    }

    /// Applies `f` to every atom of the alphabet and guards.
    pub fn map_atoms(&self, f: &mut impl FnMut(&Atom) -> Atom) -> Dfa {
        let mut alphabet: Vec<Atom> = self.alphabet.iter().map(&mut *f).collect();
        alphabet.sort();
        alphabet.dedup();
        Dfa {
            alphabet,
            states: self
                .states
                .iter()
                .map(|s| DfaState {
                    accepting: s.accepting,
                    transitions: s
                        .transitions
                        .iter()
                        .map(|(g, t)| (g.map_atoms(f), *t))
                        .collect(),
                })
                .collect(),
            initial: self.initial,
        }
    }

    /// GraphViz rendering for debugging.
    pub fn to_dot(&self) -> String {
        self.to_dot_with(|q| format!("q{q}"))
    }

    pub(crate) fn to_dot_with(&self, name: impl Fn(StateId) -> String) -> String {
        let mut out = String::from("digraph dfa {\n  rankdir=LR;\n  init [shape=point];\n");
        for (q, s) in self.states.iter().enumerate() {
            let shape = if s.accepting {
                "doublecircle"
            } else {
                "circle"
            };
            let _ = writeln!(out, "  {q} [label=\"{}\", shape={shape}];", name(q));
        }
        let _ = writeln!(out, "  init -> {};", self.initial);
        for (q, s) in self.states.iter().enumerate() {
            for (g, t) in &s.transitions {
                let _ = writeln!(out, "  {q} -> {t} [label=\"{g}\"];");
            }
        }
        out.push_str("}\n");
        out
    }
}
