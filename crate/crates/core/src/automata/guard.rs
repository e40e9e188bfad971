use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::logic::Atom;

/// Propositional transition label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Guard {
    True,
    False,
    Atom(Atom),
    Not(Box<Guard>),
    And(Vec<Guard>),
    Or(Vec<Guard>),
}

impl Guard {
    pub fn eval(&self, holds: &impl Fn(&Atom) -> bool) -> bool {
        match self {
            Guard::True => true,
            Guard::False => false,
            Guard::Atom(a) => holds(a),
            Guard::Not(g) => !g.eval(holds),
            Guard::And(gs) => gs.iter().all(|g| g.eval(holds)),
            Guard::Or(gs) => gs.iter().any(|g| g.eval(holds)),
        }
    }

    pub fn eval_set(&self, letter: &BTreeSet<Atom>) -> bool {
        self.eval(&|a| letter.contains(a))
    }

    pub fn map_atoms(&self, f: &mut impl FnMut(&Atom) -> Atom) -> Guard {
        match self {
            Guard::True => Guard::True,
            Guard::False => Guard::False,
            Guard::Atom(a) => Guard::Atom(f(a)),
            Guard::Not(g) => Guard::Not(Box::new(g.map_atoms(f))),
            Guard::And(gs) => Guard::And(gs.iter().map(|g| g.map_atoms(f)).collect()),
            Guard::Or(gs) => Guard::Or(gs.iter().map(|g| g.map_atoms(f)).collect()),
        }
    }

    pub fn visit_atoms(&self, f: &mut impl FnMut(&Atom)) {
        match self {
            Guard::True | Guard::False => {}
            Guard::Atom(a) => f(a),
            Guard::Not(g) => g.visit_atoms(f),
            Guard::And(gs) | Guard::Or(gs) => gs.iter().for_each(|g| g.visit_atoms(f)),
        }
    }

    /// Disjunctive normal form as a list of cubes of `(atom, polarity)`.
    /// An empty list is `false`; a list holding an empty cube is `true`.
    pub fn to_dnf(&self) -> Vec<Vec<(Atom, bool)>> {
        self.dnf(true)
    }

    fn dnf(&self, positive: bool) -> Vec<Vec<(Atom, bool)>> {
        match (self, positive) {
            (Guard::True, true) | (Guard::False, false) => vec![vec![]],
            (Guard::True, false) | (Guard::False, true) => vec![],
            (Guard::Atom(a), p) => vec![vec![(a.clone(), p)]],
            (Guard::Not(g), p) => g.dnf(!p),
            (Guard::Or(gs), true) | (Guard::And(gs), false) => {
                gs.iter().flat_map(|g| g.dnf(positive)).collect()
            }
            (Guard::And(gs), true) | (Guard::Or(gs), false) => {
                let mut acc: Vec<Vec<(Atom, bool)>> = vec![vec![]];
                for g in gs {
                    let part = g.dnf(positive);
                    let mut next = Vec::new();
                    for c in &acc {
                        for d in &part {
                            let mut merged = c.clone();
                            let mut ok = true;
                            for lit in d {
                                if merged.iter().any(|(a, p)| *a == lit.0 && *p != lit.1) {
                                    ok = false;
                                    break;
                                }
                                if !merged.contains(lit) {
                                    merged.push(lit.clone());
                                }
                            }
                            if ok {
                                next.push(merged);
                            }
                        }
                    }
                    acc = next;
                }
                acc
            }
        }
    }

    /// Builds a minimal-ish DNF guard from the set of letters it must accept.
    /// Letters are bitmasks over `alphabet`.
    pub(crate) fn from_letters(alphabet: &[Atom], letters: &[u32]) -> Guard {
        let k = alphabet.len();
        let total = 1usize << k;
        if letters.is_empty() {
            return Guard::False;
        }
        if letters.len() == total {
            return Guard::True;
        }
        let cubes = prime_cover(k, letters);
        let mut terms: Vec<Guard> = cubes
            .into_iter()
            .map(|cube| {
                let mut lits: Vec<Guard> = (0..k)
                    .filter(|i| cube.care & (1 << i) != 0)
                    .map(|i| {
                        let a = Guard::Atom(alphabet[i].clone());
                        if cube.value & (1 << i) != 0 {
                            a
                        } else {
                            Guard::Not(Box::new(a))
                        }
                    })
                    .collect();
                if lits.len() == 1 {
                    lits.pop().unwrap()
                } else {
                    Guard::And(lits)
                }
            })
            .collect();
        if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            Guard::Or(terms)
        }
    }
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Guard::True => f.write_str("true"),
            Guard::False => f.write_str("false"),
            Guard::Atom(a) => write!(f, "{a}"),
            Guard::Not(g) => match **g {
                Guard::Atom(_) | Guard::True | Guard::False => write!(f, "!{g}"),
                _ => write!(f, "!({g})"),
            },
            Guard::And(gs) | Guard::Or(gs) => {
                let sep = if matches!(self, Guard::And(_)) {
                    " & "
                } else {
                    " | "
                };
                for (i, g) in gs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(sep)?;
                    }
                    match g {
                        Guard::And(_) | Guard::Or(_) => write!(f, "({g})")?,
                        _ => write!(f, "{g}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

/// A product term: variables with a `care` bit must equal the `value` bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Cube {
    care: u32,
    value: u32,
}

impl Cube {
    fn covers(&self, letter: u32) -> bool {
        letter & self.care == self.value
    }
}

/// Quine-McCluskey prime implicants followed by essential + greedy cover.
fn prime_cover(k: usize, letters: &[u32]) -> Vec<Cube> {
    use std::collections::HashSet;
    let full = if k == 32 { u32::MAX } else { (1u32 << k) - 1 };
    let mut current: HashSet<Cube> = letters
        .iter()
        .map(|&l| Cube {
            care: full,
            value: l,
        })
        .collect();
    let mut primes: Vec<Cube> = Vec::new();
    while !current.is_empty() {
        let mut merged_into: HashSet<Cube> = HashSet::new();
        let mut used: HashSet<Cube> = HashSet::new();
        let items: Vec<Cube> = current.iter().copied().collect();
        for c in &items {
            let mut bit = c.care;
            while bit != 0 {
                let b = bit & bit.wrapping_neg();
                bit &= bit - 1;
                let partner = Cube {
                    care: c.care,
                    value: c.value ^ b,
                };
                if current.contains(&partner) {
                    used.insert(*c);
                    merged_into.insert(Cube {
                        care: c.care & !b,
                        value: c.value & !b,
                    });
                }
            }
        }
        primes.extend(items.into_iter().filter(|c| !used.contains(c)));
        current = merged_into;
    }
    primes.sort();
    primes.dedup();

    let mut uncovered: Vec<u32> = letters.to_vec();
    uncovered.sort_unstable();
    let mut chosen: Vec<Cube> = Vec::new();
    // essential primes first
    for &l in letters {
        let covering: Vec<&Cube> = primes.iter().filter(|p| p.covers(l)).collect();
        if covering.len() == 1 && !chosen.contains(covering[0]) {
            chosen.push(*covering[0]);
        }
    }
    uncovered.retain(|&l| !chosen.iter().any(|c| c.covers(l)));
    while !uncovered.is_empty() {
        let best = primes
            .iter()
            .filter(|p| !chosen.contains(p))
            .max_by_key(|p| {
                (
                    uncovered.iter().filter(|&&l| p.covers(l)).count(),
                    std::cmp::Reverse(p.care.count_ones()),
                    std::cmp::Reverse(**p),
                )
            })
            .copied()
            .expect("primes cover every minterm");
        chosen.push(best);
        uncovered.retain(|&l| !best.covers(l));
    }
    // order: fewer literals first, then by bits
    chosen.sort_by_key(|c| (c.care.count_ones(), c.care, c.value));
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atoms(n: usize) -> Vec<Atom> {
        (0..n).map(|i| Atom::prop(format!("p{i}"))).collect()
    }

    fn letter_set(alphabet: &[Atom], l: u32) -> BTreeSet<Atom> {
        alphabet
            .iter()
            .enumerate()
            .filter(|(i, _)| l & (1 << i) != 0)
            .map(|(_, a)| a.clone())
            .collect()
    }

    #[test]
    fn single_literal_guards() {
        let al = atoms(1);
        assert_eq!(Guard::from_letters(&al, &[1]), Guard::Atom(al[0].clone()));
        assert_eq!(
            Guard::from_letters(&al, &[0]),
            Guard::Not(Box::new(Guard::Atom(al[0].clone())))
        );
        assert_eq!(Guard::from_letters(&al, &[0, 1]), Guard::True);
        assert_eq!(Guard::from_letters(&al, &[]), Guard::False);
    }

    #[test]
    fn cover_is_exact_for_every_subset_of_three_vars() {
        let al = atoms(3);
        for set in 0u32..256 {
            let letters: Vec<u32> = (0..8).filter(|l| set & (1 << l) != 0).collect();
            let g = Guard::from_letters(&al, &letters);
            for l in 0..8u32 {
                assert_eq!(
                    g.eval_set(&letter_set(&al, l)),
                    letters.contains(&l),
                    "set {set:#b} letter {l}"
                );
            }
        }
    }

    #[test]
    fn dnf_matches_eval() {
        let al = atoms(3);
        let g = Guard::Not(Box::new(Guard::And(vec![
            Guard::Or(vec![Guard::Atom(al[0].clone()), Guard::Atom(al[1].clone())]),
            Guard::Not(Box::new(Guard::Atom(al[2].clone()))),
        ])));
        let dnf = g.to_dnf();
        for l in 0..8u32 {
            let s = letter_set(&al, l);
            let via_dnf = dnf
                .iter()
                .any(|cube| cube.iter().all(|(a, p)| s.contains(a) == *p));
            assert_eq!(via_dnf, g.eval_set(&s));
        }
    }
}
