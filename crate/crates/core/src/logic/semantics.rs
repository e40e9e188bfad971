use super::{Dialect, Formula, LogicError, Tense, Trace};

/// Truth value of `f` at every position of `t`, computed bottom-up.
pub fn evaluate_positions(f: &Formula, t: &Trace) -> Vec<bool> {
    let n = t.len();
    match f {
        Formula::True => vec![true; n],
        Formula::False => vec![false; n],
        Formula::Atom(a) => t.steps().iter().map(|s| s.contains(a)).collect(),
        Formula::Not(a) => evaluate_positions(a, t).into_iter().map(|v| !v).collect(),
        Formula::And(a, b) => zip(
            evaluate_positions(a, t),
            evaluate_positions(b, t),
            |x, y| x && y,
        ),
        Formula::Or(a, b) => zip(
            evaluate_positions(a, t),
            evaluate_positions(b, t),
            |x, y| x || y,
        ),
        Formula::Next(a) => {
            let v = evaluate_positions(a, t);
            (0..n).map(|i| i + 1 < n && v[i + 1]).collect()
        }
        Formula::WeakNext(a) => {
            let v = evaluate_positions(a, t);
            (0..n).map(|i| i + 1 >= n || v[i + 1]).collect()
        }
        Formula::Until(a, b) => {
            let (va, vb) = (evaluate_positions(a, t), evaluate_positions(b, t));
            let mut out = vec![false; n];
            let mut later = false;
            for i in (0..n).rev() {
                later = vb[i] || (va[i] && later);
                out[i] = later;
            }
            out
        }
        Formula::Eventually(a) => {
            let v = evaluate_positions(a, t);
            let mut out = vec![false; n];
            let mut later = false;
            for i in (0..n).rev() {
                later = later || v[i];
                out[i] = later;
            }
            out
        }
        Formula::Always(a) => {
            let v = evaluate_positions(a, t);
            let mut out = vec![false; n];
            let mut later = true;
            for i in (0..n).rev() {
                later = later && v[i];
                out[i] = later;
            }
            out
        }
        Formula::Before(a) => {
            let v = evaluate_positions(a, t);
            (0..n).map(|i| i >= 1 && v[i - 1]).collect()
        }
        Formula::Since(a, b) => {
            let (va, vb) = (evaluate_positions(a, t), evaluate_positions(b, t));
            let mut out = vec![false; n];
            let mut earlier = false;
            for i in 0..n {
                earlier = vb[i] || (va[i] && earlier);
                out[i] = earlier;
            }
            out
        }
        Formula::Once(a) => {
            let v = evaluate_positions(a, t);
            let mut earlier = false;
            v.into_iter()
                .map(|x| {
                    earlier = earlier || x;
                    earlier
                })
                .collect()
        }
        Formula::Historically(a) => {
            let v = evaluate_positions(a, t);
            let mut earlier = true;
            v.into_iter()
                .map(|x| {
                    earlier = earlier && x;
                    earlier
                })
                .collect()
        }
    }
}

fn zip(a: Vec<bool>, b: Vec<bool>, op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
}

/// `t, i |= f`.
pub fn holds_at(f: &Formula, t: &Trace, i: usize) -> Result<bool, LogicError> {
    if i >= t.len() {
        return Err(LogicError::IndexOutOfRange {
            index: i,
            len: t.len(),
        });
    }
    Ok(evaluate_positions(f, t)[i])
}

/// `t |= f`: future formulas at the first position, past formulas at the last.
/// Purely propositional formulas are read as LTLf; use [`holds_as`] to pick.
pub fn holds(f: &Formula, t: &Trace) -> Result<bool, LogicError> {
    let dialect = match f.tense()? {
        Some(Tense::Past) => Dialect::Ppltl,
        _ => Dialect::Ltlf,
    };
    holds_as(f, dialect, t)
}

/// Like [`holds`] with an explicit dialect deciding the evaluation point.
pub fn holds_as(f: &Formula, dialect: Dialect, t: &Trace) -> Result<bool, LogicError> {
    f.check_dialect(dialect)?;
    if t.is_empty() {
        return Err(LogicError::EmptyTrace);
    }
    let v = evaluate_positions(f, t);
    Ok(match dialect {
        Dialect::Ltlf => v[0],
        Dialect::Ppltl => v[t.len() - 1],
    })
}
