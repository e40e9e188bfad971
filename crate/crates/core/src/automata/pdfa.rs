use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{AutomataError, Dfa, StateId};
use crate::logic::{Atom, Term};

/// Injective correspondence between objects of interest and free variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectMapping {
    pairs: Vec<(String, String)>,
}

impl ObjectMapping {
    pub fn new(pairs: Vec<(String, String)>) -> Result<Self, AutomataError> {
        for (i, (o, v)) in pairs.iter().enumerate() {
            for (o2, v2) in &pairs[..i] {
                if o == o2 {
                    return Err(AutomataError::NotInjective(o.clone()));
                }
                if v == v2 {
                    return Err(AutomataError::NotInjective(v.clone()));
                }
            }
        }
        Ok(ObjectMapping { pairs })
    }

    /// Fresh variables `x`, `y`, `z`, `w`, then `v4`, `v5`, ... in order.
    pub fn fresh(objects: &[String]) -> Self {
        let pairs = objects
            .iter()
            .enumerate()
            .map(|(i, o)| {
                let v = match i {
                    0 => "x".to_string(),
                    1 => "y".to_string(),
                    2 => "z".to_string(),
                    3 => "w".to_string(),
                    _ => format!("v{i}"),
                };
                (o.clone(), v)
            })
            .collect();
        ObjectMapping { pairs }
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(String, String)] {
        &self.pairs
    }

    pub fn variable_of(&self, object: &str) -> Option<&str> {
        self.pairs
            .iter()
            .find(|(o, _)| o == object)
            .map(|(_, v)| v.as_str())
    }

    pub fn variables(&self) -> Vec<String> {
        self.pairs.iter().map(|(_, v)| v.clone()).collect()
    }

    pub fn objects(&self) -> Vec<String> {
        self.pairs.iter().map(|(o, _)| o.clone()).collect()
    }

    /// Variable -> object binding that undoes the lifting.
    pub fn inverse(&self) -> BTreeMap<String, String> {
        self.pairs
            .iter()
            .map(|(o, v)| (v.clone(), o.clone()))
            .collect()
    }
}

/// Parametric DFA: a [`Dfa`] over variable atoms whose states are
/// parameterized by the mapping's variables, e.g. `q0(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pdfa {
    dfa: Dfa,
    mapping: ObjectMapping,
}

impl Pdfa {
    /// The lifted automaton; its atoms carry variable terms.
    pub fn automaton(&self) -> &Dfa {
        &self.dfa
    }

    pub fn mapping(&self) -> &ObjectMapping {
        &self.mapping
    }

    pub fn parameters(&self) -> Vec<String> {
        self.mapping.variables()
    }

    pub fn state_name(&self, q: StateId) -> String {
        let params = self.parameters();
        if params.is_empty() {
            format!("q{q}")
        } else {
            format!("q{q}({})", params.join(","))
        }
    }

    pub fn to_dot(&self) -> String {
        self.dfa.to_dot_with(|q| self.state_name(q))
    }

    /// Wraps a ground automaton without lifting any object.
    pub fn unlifted(d: &Dfa) -> Pdfa {
        Pdfa {
            dfa: d.clone(),
            mapping: ObjectMapping { pairs: Vec::new() },
        }
    }
}

/// Replaces every object of interest by its variable.
pub fn lift_to_pdfa(d: &Dfa, m: &ObjectMapping) -> Result<Pdfa, AutomataError> {
    for a in d.alphabet() {
        for t in &a.args {
            if let Term::Object(o) = t {
                if m.variable_of(o).is_none() {
                    return Err(AutomataError::UnmappedObject(o.clone()));
                }
            }
        }
    }
    let lifted = d.map_atoms(&mut |a: &Atom| Atom {
        name: a.name.clone(),
        args: a
            .args
            .iter()
            .map(|t| match t {
                Term::Object(o) => Term::Variable(m.variable_of(o).unwrap().to_string()),
                v => v.clone(),
            })
            .collect(),
    });
    Ok(Pdfa {
        dfa: lifted,
        mapping: m.clone(),
    })
}

/// Substitutes objects for the variables of `p`.
pub fn ground_pdfa(p: &Pdfa, binding: &BTreeMap<String, String>) -> Result<Dfa, AutomataError> {
    let mut seen: Vec<&str> = Vec::new();
    for (_, v) in p.mapping.pairs() {
        let o = binding
            .get(v)
            .ok_or_else(|| AutomataError::UnboundVariable(v.clone()))?;
        if seen.contains(&o.as_str()) {
            return Err(AutomataError::NotInjective(o.clone()));
        }
        seen.push(o);
    }
    for a in p.dfa.alphabet() {
        for t in &a.args {
            if let Term::Variable(v) = t {
                if !binding.contains_key(v) {
                    return Err(AutomataError::UnboundVariable(v.clone()));
                }
            }
        }
    }
    Ok(p.dfa.map_atoms(&mut |a: &Atom| Atom {
        name: a.name.clone(),
        args: a
            .args
            .iter()
            .map(|t| match t {
                Term::Variable(v) => Term::Object(binding[v].clone()),
                o => o.clone(),
            })
            .collect(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{compile_to_dfa, Guard};
    use crate::logic::{parse_formula, Dialect};

    fn dfa(s: &str) -> Dfa {
        compile_to_dfa(&parse_formula(s, Dialect::Ltlf).unwrap()).unwrap()
    }

    #[test]
    fn lifting_eventually_vat() {
        let d = dfa("F(vAt(51))");
        let m = ObjectMapping::fresh(&["51".to_string()]);
        let p = lift_to_pdfa(&d, &m).unwrap();
        assert_eq!(p.state_name(0), "q0(x)");
        assert_eq!(p.state_name(1), "q1(x)");
        let vx = Atom::new("vAt", vec![Term::Variable("x".into())]);
        assert_eq!(
            p.automaton().states()[0].transitions,
            vec![
                (Guard::Not(Box::new(Guard::Atom(vx.clone()))), 0),
                (Guard::Atom(vx), 1)
            ]
        );
        assert_eq!(ground_pdfa(&p, &m.inverse()).unwrap(), d);
    }

    #[test]
    fn empty_mapping_is_identity() {
        let d = dfa("F(a) & G(!b)");
        let p = lift_to_pdfa(&d, &ObjectMapping::fresh(&[])).unwrap();
        assert_eq!(p.automaton(), &d);
    }

    #[test]
    fn distinct_bindings_differ_only_in_args() {
        let d = dfa("F(on(a,b))");
        let m = ObjectMapping::fresh(&["a".to_string(), "b".to_string()]);
        let p = lift_to_pdfa(&d, &m).unwrap();
        let b1: BTreeMap<_, _> = [
            ("x".to_string(), "c".to_string()),
            ("y".to_string(), "d".to_string()),
        ]
        .into();
        let g = ground_pdfa(&p, &b1).unwrap();
        assert_eq!(g.num_states(), d.num_states());
        assert_eq!(g.alphabet(), &[Atom::ground("on", &["c", "d"])]);
        assert_eq!(g.accepting_states(), d.accepting_states());
    }

    #[test]
    fn errors() {
        let d = dfa("F(vAt(51))");
        assert_eq!(
            lift_to_pdfa(&d, &ObjectMapping::fresh(&[])),
            Err(AutomataError::UnmappedObject("51".into()))
        );
        let p = lift_to_pdfa(&d, &ObjectMapping::fresh(&["51".to_string()])).unwrap();
        assert_eq!(
            ground_pdfa(&p, &BTreeMap::new()),
            Err(AutomataError::UnboundVariable("x".into()))
        );
        assert!(
            ObjectMapping::new(vec![("a".into(), "x".into()), ("b".into(), "x".into())]).is_err()
        );
    }
}
