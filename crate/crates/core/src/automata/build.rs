//! Direct DFA construction.
//!
//! Future formulas: formula progression. A state is a positive Boolean
//! combination (kept in reduced DNF) of obligations `X psi` / `WX psi` on the
//! rest of the trace; reading a letter progresses every obligation, and a
//! state accepts when some clause holds only weak obligations.
//!
//! Past formulas: a state is the truth vector of all subformulas at the last
//! position read, which determines the vector at the next position.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use super::{AutomataError, Dfa, LetterTable, MAX_ALPHABET};
use crate::logic::{Atom, Dialect, Formula, Tense};

pub const DEFAULT_STATE_CAP: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DfaOptions {
    pub state_cap: usize,
    pub minimize: bool,
}

impl Default for DfaOptions {
    fn default() -> Self {
        DfaOptions {
            state_cap: DEFAULT_STATE_CAP,
            minimize: false,
        }
    }
}

/// Compiles `f` with default options, reading propositional formulas as LTLf.
pub fn compile_to_dfa(f: &Formula) -> Result<Dfa, AutomataError> {
    let dialect = match f.tense()? {
        Some(Tense::Past) => Dialect::Ppltl,
        _ => Dialect::Ltlf,
    };
    compile_to_dfa_as(f, dialect, DfaOptions::default())
}

/// Compiles `f` in the given dialect. The result is trimmed, total and
/// deterministic; with `opts.minimize` it is also minimal.
pub fn compile_to_dfa_as(
    f: &Formula,
    dialect: Dialect,
    opts: DfaOptions,
) -> Result<Dfa, AutomataError> {
    f.check_dialect(dialect)?;
    let alphabet: Vec<Atom> = f.atoms().into_iter().collect();
    if alphabet.len() > MAX_ALPHABET {
        return Err(AutomataError::AlphabetTooLarge {
            size: alphabet.len(),
        });
    }
    let table = match dialect {
        Dialect::Ltlf => future_table(f, alphabet, opts.state_cap)?,
        Dialect::Ppltl => past_table(f, alphabet, opts.state_cap)?,
    };
    let table = if opts.minimize {
        super::minimize::minimize_table(&table)
    } else {
        table
    };
    Ok(table.into_dfa())
}

/// Breadth-first exploration of an implicitly given automaton.
fn explore<K: Clone + Eq + Hash>(
    alphabet: Vec<Atom>,
    init: K,
    cap: usize,
    mut step: impl FnMut(&K, u32) -> K,
    accept: impl Fn(&K) -> bool,
) -> Result<LetterTable, AutomataError> {
    let n_letters = 1u32 << alphabet.len();
    let mut index: HashMap<K, usize> = HashMap::new();
    let mut keys: Vec<K> = Vec::new();
    let mut delta: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::new();
    index.insert(init.clone(), 0);
    keys.push(init);
    queue.push_back(0usize);
    while let Some(q) = queue.pop_front() {
        let mut row = Vec::with_capacity(n_letters as usize);
        for l in 0..n_letters {
            let next = step(&keys[q], l);
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    let id = keys.len();
                    if id >= cap {
                        return Err(AutomataError::StateBudgetExceeded { cap });
                    }
                    index.insert(next.clone(), id);
                    keys.push(next);
                    queue.push_back(id);
                    id
                }
            };
            row.push(id);
        }
        if delta.len() <= q {
            delta.resize(q + 1, Vec::new());
        }
        delta[q] = row;
    }
    Ok(LetterTable {
        alphabet,
        initial: 0,
        accepting: keys.iter().map(accept).collect(),
        delta,
    })
}

// ---------------------------------------------------------------------------
// future fragment

type NodeId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Nnf {
    True,
    False,
    Lit(usize, bool),
    And(NodeId, NodeId),
    Or(NodeId, NodeId),
    Next(NodeId),
    WeakNext(NodeId),
    Until(NodeId, NodeId),
    Release(NodeId, NodeId),
}

/// `(strong, node)`: `X node` when strong, `WX node` otherwise.
type Obligation = (bool, NodeId);
type Clause = Vec<Obligation>;
/// Sorted, subsumption-reduced disjunction of clauses.
type Dnf = Vec<Clause>;

#[derive(Default)]
struct Arena {
    nodes: Vec<Nnf>,
    index: HashMap<Nnf, NodeId>,
    prog_cache: HashMap<(NodeId, u32), Dnf>,
}

impl Arena {
    fn intern(&mut self, n: Nnf) -> NodeId {
        if let Some(&id) = self.index.get(&n) {
            return id;
        }
        let id = self.nodes.len() as NodeId;
        self.nodes.push(n);
        self.index.insert(n, id);
        id
    }

    fn build(&mut self, f: &Formula, positive: bool, alphabet: &[Atom]) -> NodeId {
        use Formula as F;
        let n = match (f, positive) {
            (F::True, true) | (F::False, false) => Nnf::True,
            (F::True, false) | (F::False, true) => Nnf::False,
            (F::Atom(a), p) => Nnf::Lit(alphabet.binary_search(a).expect("atom in alphabet"), p),
            (F::Not(a), p) => return self.build(a, !p, alphabet),
            (F::And(a, b), true) | (F::Or(a, b), false) => Nnf::And(
                self.build(a, positive, alphabet),
                self.build(b, positive, alphabet),
            ),
            (F::Or(a, b), true) | (F::And(a, b), false) => Nnf::Or(
                self.build(a, positive, alphabet),
                self.build(b, positive, alphabet),
            ),
            (F::Next(a), true) | (F::WeakNext(a), false) => {
                Nnf::Next(self.build(a, positive, alphabet))
            }
            (F::WeakNext(a), true) | (F::Next(a), false) => {
                Nnf::WeakNext(self.build(a, positive, alphabet))
            }
            (F::Until(a, b), true) => {
                Nnf::Until(self.build(a, true, alphabet), self.build(b, true, alphabet))
            }
            (F::Until(a, b), false) => Nnf::Release(
                self.build(a, false, alphabet),
                self.build(b, false, alphabet),
            ),
            (F::Eventually(a), true) | (F::Always(a), false) => {
                let t = self.intern(Nnf::True);
                Nnf::Until(t, self.build(a, positive, alphabet))
            }
            (F::Always(a), true) | (F::Eventually(a), false) => {
                let ff = self.intern(Nnf::False);
                Nnf::Release(ff, self.build(a, positive, alphabet))
            }
            (F::Before(_) | F::Since(..) | F::Once(_) | F::Historically(_), _) => {
                unreachable!("dialect checked before construction")
            }
        };
        self.intern(n)
    }

    /// Obligations on the suffix after reading `letter` in a position where
    /// `node` must hold.
    fn progress(&mut self, node: NodeId, letter: u32) -> Dnf {
        if let Some(d) = self.prog_cache.get(&(node, letter)) {
            return d.clone();
        }
        let d = match self.nodes[node as usize] {
            Nnf::True => vec![vec![]],
            Nnf::False => vec![],
            Nnf::Lit(i, p) => {
                if (letter & (1 << i) != 0) == p {
                    vec![vec![]]
                } else {
                    vec![]
                }
            }
            Nnf::And(a, b) => {
                let (x, y) = (self.progress(a, letter), self.progress(b, letter));
                dnf_and(&x, &y)
            }
            Nnf::Or(a, b) => {
                let (x, y) = (self.progress(a, letter), self.progress(b, letter));
                dnf_or(x, y)
            }
            Nnf::Next(a) => vec![vec![(true, a)]],
            Nnf::WeakNext(a) => vec![vec![(false, a)]],
            Nnf::Until(a, b) => {
                let pb = self.progress(b, letter);
                let pa = self.progress(a, letter);
                dnf_or(pb, dnf_and(&pa, &vec![vec![(true, node)]]))
            }
            Nnf::Release(a, b) => {
                let pb = self.progress(b, letter);
                let pa = self.progress(a, letter);
                dnf_and(&pb, &dnf_or(pa, vec![vec![(false, node)]]))
            }
        };
        self.prog_cache.insert((node, letter), d.clone());
        d
    }

    fn step(&mut self, state: &Dnf, letter: u32) -> Dnf {
        let mut out: Dnf = Vec::new();
        for clause in state {
            let mut acc: Dnf = vec![vec![]];
            for &(_, node) in clause {
                let p = self.progress(node, letter);
                acc = dnf_and(&acc, &p);
                if acc.is_empty() {
                    break;
                }
            }
            out = dnf_or(out, acc);
        }
        out
    }
}

fn clause_implies(a: &Clause, b: &Clause) -> bool {
    // every obligation of b is implied by one of a
    b.iter()
        .all(|&(sb, nb)| a.iter().any(|&(sa, na)| na == nb && (sa || !sb)))
}

fn normalize_clause(mut c: Clause) -> Clause {
    c.sort_unstable();
    c.dedup();
    // X n makes WX n redundant
    let strong: Vec<NodeId> = c.iter().filter(|o| o.0).map(|o| o.1).collect();
    c.retain(|&(s, n)| s || !strong.contains(&n));
    c
}

fn reduce(mut d: Dnf) -> Dnf {
    d.sort();
    d.dedup();
    let mut keep = vec![true; d.len()];
    for i in 0..d.len() {
        for j in 0..d.len() {
            if i != j && keep[j] && clause_implies(&d[i], &d[j]) {
                // d[i] is at least as strong as d[j]
                if !clause_implies(&d[j], &d[i]) || j < i {
                    keep[i] = false;
                    break;
                }
            }
        }
    }
    d.into_iter()
        .zip(keep)
        .filter_map(|(c, k)| k.then_some(c))
        .collect()
}

fn dnf_or(mut a: Dnf, b: Dnf) -> Dnf {
    a.extend(b);
    reduce(a)
}

fn dnf_and(a: &Dnf, b: &Dnf) -> Dnf {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            let mut c = x.clone();
            c.extend_from_slice(y);
            out.push(normalize_clause(c));
        }
    }
    reduce(out)
}

fn future_table(
    f: &Formula,
    alphabet: Vec<Atom>,
    cap: usize,
) -> Result<LetterTable, AutomataError> {
    let mut arena = Arena::default();
    let root = arena.build(f, true, &alphabet);
    let init: Dnf = vec![vec![(true, root)]];
    let accept = |d: &Dnf| d.iter().any(|c| c.iter().all(|o| !o.0));
    let mut step = |s: &Dnf, l: u32| arena.step(s, l);
    explore(alphabet.clone(), init, cap, &mut step, accept)
}

// ---------------------------------------------------------------------------
// past fragment

#[derive(Debug, Clone, Copy)]
enum PastNode {
    Const(bool),
    Lit(usize),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Before(usize),
    Since(usize, usize),
}

fn past_nodes(f: &Formula, alphabet: &[Atom], out: &mut Vec<PastNode>) -> usize {
    use Formula as F;
    let node = match f {
        F::True => PastNode::Const(true),
        F::False => PastNode::Const(false),
        F::Atom(a) => PastNode::Lit(alphabet.binary_search(a).expect("atom in alphabet")),
        F::Not(a) => PastNode::Not(past_nodes(a, alphabet, out)),
        F::And(a, b) => {
            let x = past_nodes(a, alphabet, out);
            PastNode::And(x, past_nodes(b, alphabet, out))
        }
        F::Or(a, b) => {
            let x = past_nodes(a, alphabet, out);
            PastNode::Or(x, past_nodes(b, alphabet, out))
        }
        F::Before(a) => PastNode::Before(past_nodes(a, alphabet, out)),
        F::Since(a, b) => {
            let x = past_nodes(a, alphabet, out);
            PastNode::Since(x, past_nodes(b, alphabet, out))
        }
        F::Once(a) => {
            let t = {
                out.push(PastNode::Const(true));
                out.len() - 1
            };
            PastNode::Since(t, past_nodes(a, alphabet, out))
        }
        F::Historically(a) => {
            // H a = !(true S !a)
            out.push(PastNode::Const(true));
            let t = out.len() - 1;
            let inner = past_nodes(a, alphabet, out);
            out.push(PastNode::Not(inner));
            let neg = out.len() - 1;
            out.push(PastNode::Since(t, neg));
            PastNode::Not(out.len() - 1)
        }
        F::Next(_) | F::WeakNext(_) | F::Until(..) | F::Eventually(_) | F::Always(_) => {
            unreachable!("dialect checked before construction")
        }
    };
    out.push(node);
    out.len() - 1
}

fn past_table(f: &Formula, alphabet: Vec<Atom>, cap: usize) -> Result<LetterTable, AutomataError> {
    let mut nodes = Vec::new();
    let root = past_nodes(f, &alphabet, &mut nodes);
    // None: nothing read yet
    let init: Option<Vec<bool>> = None;
    let step = |prev: &Option<Vec<bool>>, l: u32| {
        let mut cur = vec![false; nodes.len()];
        for (i, n) in nodes.iter().enumerate() {
            cur[i] = match *n {
                PastNode::Const(b) => b,
                PastNode::Lit(k) => l & (1 << k) != 0,
                PastNode::Not(a) => !cur[a],
                PastNode::And(a, b) => cur[a] && cur[b],
                PastNode::Or(a, b) => cur[a] || cur[b],
                PastNode::Before(a) => prev.as_ref().is_some_and(|p| p[a]),
                PastNode::Since(a, b) => cur[b] || (cur[a] && prev.as_ref().is_some_and(|p| p[i])),
            };
        }
        Some(cur)
    };
    let accept = |s: &Option<Vec<bool>>| s.as_ref().is_some_and(|v| v[root]);
    explore(alphabet, init, cap, step, accept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{holds_as, parse_formula, Trace};
    use std::collections::BTreeSet;

    fn all_traces(alphabet: &[Atom], max_len: usize) -> Vec<Trace> {
        let mut out = Vec::new();
        let mut frontier: Vec<Vec<BTreeSet<Atom>>> = vec![vec![]];
        let n = 1u32 << alphabet.len();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for prefix in &frontier {
                for l in 0..n {
                    let mut t = prefix.clone();
                    t.push(
                        alphabet
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| l & (1 << i) != 0)
                            .map(|(_, a)| a.clone())
                            .collect(),
                    );
                    out.push(Trace::new(t.clone()).unwrap());
                    next.push(t);
                }
            }
            frontier = next;
        }
        out
    }

    fn check(text: &str, dialect: Dialect) {
        let f = parse_formula(text, dialect).unwrap();
        for minimize in [false, true] {
            let d = compile_to_dfa_as(
                &f,
                dialect,
                DfaOptions {
                    minimize,
                    ..Default::default()
                },
            )
            .unwrap();
            assert!(d.is_deterministic_and_total());
            let alphabet: Vec<Atom> = f.atoms().into_iter().collect();
            for t in all_traces(&alphabet, 5) {
                assert_eq!(
                    d.accepts(&t),
                    holds_as(&f, dialect, &t).unwrap(),
                    "{text} on {t:?}"
                );
            }
        }
    }

    #[test]
    fn eventually_has_two_states() {
        let d = compile_to_dfa(&parse_formula("F(vAt(51))", Dialect::Ltlf).unwrap()).unwrap();
        assert_eq!(d.num_states(), 2);
        assert_eq!(d.accepting_states(), vec![1]);
    }

    #[test]
    fn true_is_one_accepting_state_after_minimization() {
        let d = compile_to_dfa_as(
            &Formula::True,
            Dialect::Ltlf,
            DfaOptions {
                minimize: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(d.num_states(), 1);
        assert!(d.is_accepting(0));
        assert_eq!(
            d.states()[0].transitions,
            vec![(super::super::Guard::True, 0)]
        );
    }

    #[test]
    fn future_formulas_match_semantics() {
        for f in [
            "a U b",
            "G(a -> b)".replace("a -> b", "!a | b").as_str(),
            "X(a) & WX(b)",
            "F(a & X(F(b)))",
            "G(F(a))",
            "!(a U (b & X c))",
            "a U (b U c)",
            "WX(false)",
        ] {
            check(f, Dialect::Ltlf);
        }
    }

    #[test]
    fn past_formulas_match_semantics() {
        for f in [
            "a & O(b)",
            "a & (!b S c)",
            "H(a | Y(b))",
            "Y(Y(a))",
            "O(a & Y(O(b)))",
            "b",
        ] {
            check(f, Dialect::Ppltl);
        }
    }

    #[test]
    fn state_budget_is_enforced() {
        let f = parse_formula("F(a & X(X(X(X(b)))))", Dialect::Ltlf).unwrap();
        let r = compile_to_dfa_as(
            &f,
            Dialect::Ltlf,
            DfaOptions {
                state_cap: 3,
                minimize: false,
            },
        );
        assert_eq!(r, Err(AutomataError::StateBudgetExceeded { cap: 3 }));
    }
}
