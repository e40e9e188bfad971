use std::collections::VecDeque;

use super::{Dfa, LetterTable};

/// Minimal automaton with the same language on non-empty traces.
pub fn minimize(d: &Dfa) -> Dfa {
    let table = d
        .to_table()
        .expect("Dfa values are deterministic and total");
    minimize_table(&table).into_dfa()
}

/// Minimizes over non-empty words. The initial state is split off into a
/// fresh copy without incoming edges, both acceptance choices for that copy
/// are minimized, and the smaller result wins.
pub(crate) fn minimize_table(t: &LetterTable) -> LetterTable {
    let n = t.delta.len();
    let mut split = t.clone();
    split.delta.push(t.delta[t.initial].clone());
    split.accepting.push(t.accepting[t.initial]);
    split.initial = n;

    let mut best: Option<LetterTable> = None;
    for acc in [t.accepting[t.initial], !t.accepting[t.initial]] {
        let mut candidate = split.clone();
        candidate.accepting[n] = acc;
        let m = hopcroft(&trim(&candidate));
        if best.as_ref().is_none_or(|b| m.delta.len() < b.delta.len()) {
            best = Some(m);
        }
    }
    best.unwrap()
}

/// Drops unreachable states and renumbers breadth-first from the initial
/// state, visiting letters in increasing order.
pub(crate) fn trim(t: &LetterTable) -> LetterTable {
    let n = t.delta.len();
    let mut order = vec![usize::MAX; n];
    let mut seen = Vec::new();
    let mut q = VecDeque::from([t.initial]);
    order[t.initial] = 0;
    seen.push(t.initial);
    while let Some(s) = q.pop_front() {
        for &nx in &t.delta[s] {
            if order[nx] == usize::MAX {
                order[nx] = seen.len();
                seen.push(nx);
                q.push_back(nx);
            }
        }
    }
    LetterTable {
        alphabet: t.alphabet.clone(),
        initial: 0,
        accepting: seen.iter().map(|&s| t.accepting[s]).collect(),
        delta: seen
            .iter()
            .map(|&s| t.delta[s].iter().map(|&x| order[x]).collect())
            .collect(),
    }
}

/// Hopcroft partition refinement on a trimmed table.
fn hopcroft(t: &LetterTable) -> LetterTable {
    let n = t.delta.len();
    let n_letters = t.num_letters();

    // inverse transitions per letter
    let mut inverse: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); n]; n_letters];
    for (s, row) in t.delta.iter().enumerate() {
        for (l, &x) in row.iter().enumerate() {
            inverse[l][x].push(s);
        }
    }

    let mut block_of = vec![0usize; n];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let acc: Vec<usize> = (0..n).filter(|&s| t.accepting[s]).collect();
    let rej: Vec<usize> = (0..n).filter(|&s| !t.accepting[s]).collect();
    for part in [acc, rej] {
        if !part.is_empty() {
            for &s in &part {
                block_of[s] = blocks.len();
            }
            blocks.push(part);
        }
    }

    let mut work: VecDeque<usize> = VecDeque::new();
    let mut in_work = vec![false; blocks.len()];
    if blocks.len() == 2 {
        let smaller = if blocks[0].len() <= blocks[1].len() {
            0
        } else {
            1
        };
        work.push_back(smaller);
        in_work[smaller] = true;
    }

    let mut mark = vec![false; n];
    while let Some(splitter) = work.pop_front() {
        in_work[splitter] = false;
        let members = blocks[splitter].clone();
        for inv in &inverse {
            // X = states moving into the splitter on this letter
            let mut touched: Vec<usize> = Vec::new();
            for &target in &members {
                for &src in &inv[target] {
                    if !mark[src] {
                        mark[src] = true;
                        touched.push(src);
                    }
                }
            }
            if touched.is_empty() {
                continue;
            }
            let mut affected: Vec<usize> = touched.iter().map(|&s| block_of[s]).collect();
            affected.sort_unstable();
            affected.dedup();
            for b in affected {
                let (inside, outside): (Vec<usize>, Vec<usize>) =
                    blocks[b].iter().partition(|&&s| mark[s]);
                if outside.is_empty() {
                    continue;
                }
                let new_id = blocks.len();
                let (keep, moved) = if inside.len() <= outside.len() {
                    (outside, inside)
                } else {
                    (inside, outside)
                };
                for &s in &moved {
                    block_of[s] = new_id;
                }
                blocks[b] = keep;
                blocks.push(moved);
                in_work.push(false);
                if in_work[b] {
                    work.push_back(new_id);
                    in_work[new_id] = true;
                } else {
                    let smaller = if blocks[b].len() <= blocks[new_id].len() {
                        b
                    } else {
                        new_id
                    };
                    work.push_back(smaller);
                    in_work[smaller] = true;
                }
            }
            for s in touched {
                mark[s] = false;
            }
        }
    }

    let quotient = LetterTable {
        alphabet: t.alphabet.clone(),
        initial: block_of[t.initial],
        accepting: blocks.iter().map(|b| t.accepting[b[0]]).collect(),
        delta: blocks
            .iter()
            .map(|b| t.delta[b[0]].iter().map(|&x| block_of[x]).collect())
            .collect(),
    };
    trim(&quotient)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{DfaState, Guard};
    use crate::logic::Atom;
    use rand::{Rng, SeedableRng};

    fn table(accepting: Vec<bool>, delta: Vec<Vec<usize>>, k: usize) -> LetterTable {
        LetterTable {
            alphabet: (0..k).map(|i| Atom::prop(format!("p{i}"))).collect(),
            initial: 0,
            accepting,
            delta,
        }
    }

    fn accepts(t: &LetterTable, word: &[usize]) -> bool {
        t.accepting[word.iter().fold(t.initial, |q, &l| t.delta[q][l])]
    }

    fn words(n_letters: usize, max_len: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut frontier = vec![vec![]];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for l in 0..n_letters {
                    let mut w2: Vec<usize> = w.clone();
                    w2.push(l);
                    out.push(w2.clone());
                    next.push(w2);
                }
            }
            frontier = next;
        }
        out
    }

    #[test]
    fn bisimilar_sinks_merge() {
        // 0 --a--> 1, 0 --!a--> 2, both 1 and 2 accepting sinks
        let t = table(
            vec![false, true, true],
            vec![vec![2, 1], vec![1, 1], vec![2, 2]],
            1,
        );
        let m = minimize_table(&t);
        assert_eq!(m.delta.len(), 1, "{m:?}");
        // every non-empty word is accepted, so a single accepting sink suffices
        assert!(m.accepting[0]);
    }

    #[test]
    fn idempotent() {
        let t = table(
            vec![false, false, true, true],
            vec![vec![1, 2], vec![0, 3], vec![3, 2], vec![2, 3]],
            1,
        );
        let m = minimize_table(&t);
        assert_eq!(minimize_table(&m).delta.len(), m.delta.len());
    }

    #[test]
    fn random_tables_keep_their_language() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = 6;
            let k = 1;
            let delta: Vec<Vec<usize>> = (0..n)
                .map(|_| (0..(1 << k)).map(|_| rng.gen_range(0..n)).collect())
                .collect();
            let accepting: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
            let t = table(accepting, delta, k);
            let m = minimize_table(&t);
            assert!(m.delta.len() <= trim(&t).delta.len() + 1);
            for w in words(1 << k, 6) {
                assert_eq!(accepts(&t, &w), accepts(&m, &w), "{t:?} vs {m:?} on {w:?}");
            }
        }
    }

    #[test]
    fn minimal_state_count_matches_brute_force_classes() {
        // Brute-force Myhill-Nerode: states are distinguished iff some
        // suffix of length <= n separates them.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let n = 5;
            let delta: Vec<Vec<usize>> = (0..n)
                .map(|_| (0..2).map(|_| rng.gen_range(0..n)).collect())
                .collect();
            let accepting: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
            let t = trim(&table(accepting, delta, 1));
            let m = hopcroft(&t);
            let suffixes: Vec<Vec<usize>> = std::iter::once(vec![])
                .chain(words(2, t.delta.len()))
                .collect();
            let sig = |s: usize| -> Vec<bool> {
                suffixes
                    .iter()
                    .map(|w| t.accepting[w.iter().fold(s, |q, &l| t.delta[q][l])])
                    .collect()
            };
            let mut classes: Vec<Vec<bool>> = (0..t.delta.len()).map(sig).collect();
            classes.sort();
            classes.dedup();
            assert_eq!(m.delta.len(), classes.len());
        }
    }

    #[test]
    fn minimize_on_dfa_values() {
        let a = Atom::prop("a");
        let na = Guard::Not(Box::new(Guard::Atom(a.clone())));
        let states = vec![
            DfaState {
                accepting: false,
                transitions: vec![(na.clone(), 0), (Guard::Atom(a.clone()), 1)],
            },
            DfaState {
                accepting: true,
                transitions: vec![(na, 2), (Guard::Atom(a.clone()), 1)],
            },
            DfaState {
                accepting: true,
                transitions: vec![(Guard::True, 2)],
            },
        ];
        let d = Dfa::from_parts(vec![a], states, 0).unwrap();
        let m = minimize(&d);
        assert_eq!(m.num_states(), 2);
        assert_eq!(minimize(&m), m);
    }
}
