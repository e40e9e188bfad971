use super::sexpr::{read, SExpr};
use super::{
    ActionSchema, Condition, DomainModel, Effect, PddlError, PredicateSchema, ProblemModel,
    TypedName,
};
use crate::logic::{Atom, Term};

const SUPPORTED_REQUIREMENTS: &[&str] = &[
    ":strips",
    ":typing",
    ":negative-preconditions",
    ":disjunctive-preconditions",
    ":conditional-effects",
    ":non-deterministic",
    ":equality",
    ":adl",
];

fn expect_list<'a>(e: &'a SExpr, what: &str) -> Result<&'a [SExpr], PddlError> {
    e.list().ok_or_else(|| e.error(format!("expected {what}")))
}

fn expect_word<'a>(e: &'a SExpr, what: &str) -> Result<&'a str, PddlError> {
    e.word().ok_or_else(|| e.error(format!("expected {what}")))
}

/// Checks `(define (KIND NAME) ...)` and returns NAME and the sections.
fn definition<'a>(e: &'a SExpr, kind: &str) -> Result<(String, &'a [SExpr]), PddlError> {
    let items = expect_list(e, "`(define ...)`")?;
    if items.is_empty() || e.head().as_deref() != Some("define") {
        return Err(e.error("expected `(define ...)`"));
    }
    let header = items
        .get(1)
        .ok_or_else(|| e.error(format!("expected `({kind} NAME)`")))?;
    let h = expect_list(header, &format!("`({kind} NAME)`"))?;
    if header.head().as_deref() != Some(kind) || h.len() != 2 {
        return Err(header.error(format!("expected `({kind} NAME)`")));
    }
    let name = expect_word(&h[1], "a name")?.to_string();
    Ok((name, &items[2..]))
}

/// `a b - t c` style lists. Names may carry a leading `?` when `vars`.
fn typed_list(items: &[SExpr], vars: bool) -> Result<Vec<TypedName>, PddlError> {
    let mut out = Vec::new();
    let mut pending: Vec<String> = Vec::new();
    let mut i = 0;
    while i < items.len() {
        let it = &items[i];
        let w = match it {
            SExpr::Word { text, .. } => text.as_str(),
            SExpr::List { .. } => return Err(it.error("expected a name")),
        };
        if w == "-" {
            let ty_expr = items
                .get(i + 1)
                .ok_or_else(|| it.error("expected a type after `-`"))?;
            if ty_expr.head().as_deref() == Some("either") {
                return Err(ty_expr.unsupported("either"));
            }
            let ty = expect_word(ty_expr, "a type name")?;
            if pending.is_empty() {
                return Err(it.error("`-` without preceding names"));
            }
            out.extend(pending.drain(..).map(|n| TypedName::new(n, ty)));
            i += 2;
            continue;
        }
        let name = match (vars, w.strip_prefix('?')) {
            (true, Some(v)) if !v.is_empty() => v,
            (true, _) => return Err(it.error(format!("expected a variable, found `{w}`"))),
            (false, Some(_)) => return Err(it.error(format!("unexpected variable `{w}`"))),
            (false, None) => w,
        };
        pending.push(name.to_string());
        i += 1;
    }
    out.extend(pending.into_iter().map(|n| TypedName::new(n, "object")));
    Ok(out)
}

fn term(e: &SExpr) -> Result<Term, PddlError> {
    let w = expect_word(e, "a term")?;
    Ok(match w.strip_prefix('?') {
        Some(v) if !v.is_empty() => Term::Variable(v.to_string()),
        Some(_) => return Err(e.error("empty variable name")),
        None => Term::Object(w.to_string()),
    })
}

fn atom(e: &SExpr) -> Result<Atom, PddlError> {
    let items = expect_list(e, "an atom")?;
    let name = expect_word(
        items.first().ok_or_else(|| e.error("empty atom"))?,
        "a predicate name",
    )?;
    if name == "=" {
        return Err(e.unsupported("="));
    }
    if name.starts_with(':') || name.starts_with('?') {
        return Err(e.error(format!("`{name}` is not a predicate name")));
    }
    Ok(Atom::new(
        name,
        items[1..].iter().map(term).collect::<Result<_, _>>()?,
    ))
}

fn condition(e: &SExpr) -> Result<Condition, PddlError> {
    let items = expect_list(e, "a condition")?;
    if items.is_empty() {
        return Ok(Condition::truth());
    }
    match e.head().as_deref() {
        Some("and") => Ok(Condition::And(
            items[1..].iter().map(condition).collect::<Result<_, _>>()?,
        )),
        Some("or") => Ok(Condition::Or(
            items[1..].iter().map(condition).collect::<Result<_, _>>()?,
        )),
        Some("not") => {
            if items.len() != 2 {
                return Err(e.error("`not` takes exactly one argument"));
            }
            Ok(Condition::negate(condition(&items[1])?))
        }
        Some(k @ ("imply" | "exists" | "forall" | "preference")) => Err(e.unsupported(k)),
        _ => Ok(Condition::Atom(atom(e)?)),
    }
}

#[derive(Clone, Copy, PartialEq)]
enum EffectContext {
    Top,
    InOneOf,
    InWhen,
}

fn effect(e: &SExpr, ctx: EffectContext) -> Result<Effect, PddlError> {
    let items = expect_list(e, "an effect")?;
    if items.is_empty() {
        return Ok(Effect::And(Vec::new()));
    }
    match e.head().as_deref() {
        Some("and") => Ok(Effect::And(
            items[1..]
                .iter()
                .map(|x| effect(x, ctx))
                .collect::<Result<_, _>>()?,
        )),
        Some("oneof") => {
            match ctx {
                EffectContext::Top => {}
                EffectContext::InOneOf => return Err(e.unsupported("oneof nested in oneof")),
                EffectContext::InWhen => return Err(e.unsupported("oneof inside when")),
            }
            if items.len() < 2 {
                return Err(e.error("`oneof` needs at least one alternative"));
            }
            Ok(Effect::OneOf(
                items[1..]
                    .iter()
                    .map(|x| effect(x, EffectContext::InOneOf))
                    .collect::<Result<_, _>>()?,
            ))
        }
        Some("when") => {
            if items.len() != 3 {
                return Err(e.error("`when` takes a condition and an effect"));
            }
            Ok(Effect::When(
                condition(&items[1])?,
                Box::new(effect(&items[2], EffectContext::InWhen)?),
            ))
        }
        Some("not") => {
            if items.len() != 2 {
                return Err(e.error("`not` takes exactly one argument"));
            }
            Ok(Effect::Delete(atom(&items[1])?))
        }
        Some(
            k @ ("forall" | "increase" | "decrease" | "assign" | "scale-up" | "scale-down"
            | "probabilistic"),
        ) => Err(e.unsupported(k)),
        _ => Ok(Effect::Add(atom(e)?)),
    }
}

fn action(e: &SExpr, items: &[SExpr]) -> Result<ActionSchema, PddlError> {
    let name = expect_word(
        items
            .get(1)
            .ok_or_else(|| e.error("expected an action name"))?,
        "an action name",
    )?
    .to_string();
    let mut params = Vec::new();
    let mut precondition = Condition::truth();
    let mut eff = Effect::And(Vec::new());
    let mut i = 2;
    while i < items.len() {
        let key = &items[i];
        let k = expect_word(key, "an action keyword")?.to_ascii_lowercase();
        let value = items
            .get(i + 1)
            .ok_or_else(|| key.error(format!("missing value for `{k}`")))?;
        match k.as_str() {
            ":parameters" => params = typed_list(expect_list(value, "a parameter list")?, true)?,
            ":precondition" => precondition = condition(value)?,
            ":effect" => eff = effect(value, EffectContext::Top)?,
            ":observe" | ":duration" | ":condition" => return Err(key.unsupported(k)),
            _ => return Err(key.error(format!("unknown action keyword `{k}`"))),
        }
        i += 2;
    }
    Ok(ActionSchema {
        name,
        params,
        precondition,
        effect: eff,
    })
}

/// Parses a domain definition.
pub fn parse_domain(text: &str) -> Result<DomainModel, PddlError> {
    let root = read(text)?;
    let (name, sections) = definition(&root, "domain")?;
    let mut d = DomainModel {
        name,
        requirements: Vec::new(),
        types: Vec::new(),
        constants: Vec::new(),
        predicates: Vec::new(),
        actions: Vec::new(),
    };
    for s in sections {
        let items = expect_list(s, "a domain section")?;
        let head = s
            .head()
            .ok_or_else(|| s.error("expected a section keyword"))?;
        match head.as_str() {
            ":requirements" => {
                for r in &items[1..] {
                    let w = expect_word(r, "a requirement")?.to_ascii_lowercase();
                    if !SUPPORTED_REQUIREMENTS.contains(&w.as_str()) {
                        return Err(r.unsupported(w));
                    }
                    d.requirements.push(w);
                }
            }
            ":types" => d.types.extend(typed_list(&items[1..], false)?),
            ":constants" => d.constants.extend(typed_list(&items[1..], false)?),
            ":predicates" => {
                for p in &items[1..] {
                    let pl = expect_list(p, "a predicate declaration")?;
                    let pname = expect_word(
                        pl.first().ok_or_else(|| p.error("empty predicate"))?,
                        "a predicate name",
                    )?;
                    d.predicates.push(PredicateSchema {
                        name: pname.to_string(),
                        params: typed_list(&pl[1..], true)?,
                    });
                }
            }
            ":action" => d.actions.push(action(s, items)?),
            other => return Err(s.unsupported(other)),
        }
    }
    validate_domain(&d)?;
    Ok(d)
}

fn validate_domain(d: &DomainModel) -> Result<(), PddlError> {
    for t in &d.types {
        if !d.is_type(&t.ty) {
            return Err(PddlError::UnknownType(t.ty.clone()));
        }
    }
    let typed_names = d
        .constants
        .iter()
        .chain(d.predicates.iter().flat_map(|p| p.params.iter()))
        .chain(d.actions.iter().flat_map(|a| a.params.iter()));
    for tn in typed_names {
        if !d.is_type(&tn.ty) {
            return Err(PddlError::UnknownType(tn.ty.clone()));
        }
    }
    for a in &d.actions {
        let mut err = None;
        let mut check = |at: &Atom| {
            if err.is_some() {
                return;
            }
            err = check_atom(d, at, &|v| a.params.iter().any(|p| p.name == v), &a.name).err();
        };
        a.precondition.visit_atoms(&mut check);
        a.effect.visit_atoms(&mut check);
        if let Some(e) = err {
            return Err(e);
        }
    }
    Ok(())
}

fn check_atom(
    d: &DomainModel,
    a: &Atom,
    is_param: &dyn Fn(&str) -> bool,
    action: &str,
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
    for t in &a.args {
        match t {
            Term::Variable(v) if !is_param(v) => {
                return Err(PddlError::UnboundVariable {
                    action: action.to_string(),
                    variable: v.clone(),
                })
            }
            Term::Object(o) if !d.constants.iter().any(|c| &c.name == o) => {
                return Err(PddlError::UnknownObject(o.clone()))
            }
            _ => {}
        }
    }
    Ok(())
}

/// Parses a problem definition.
pub fn parse_problem(text: &str) -> Result<ProblemModel, PddlError> {
    let root = read(text)?;
    let (name, sections) = definition(&root, "problem")?;
    let mut p = ProblemModel {
        name,
        domain: String::new(),
        objects: Vec::new(),
        init: Vec::new(),
        init_conjunction: false,
        goal: Condition::truth(),
    };
    let mut have_domain = false;
    for s in sections {
        let items = expect_list(s, "a problem section")?;
        let head = s
            .head()
            .ok_or_else(|| s.error("expected a section keyword"))?;
        match head.as_str() {
            ":domain" => {
                if items.len() != 2 {
                    return Err(s.error("expected `(:domain NAME)`"));
                }
                p.domain = expect_word(&items[1], "a domain name")?.to_string();
                have_domain = true;
            }
            ":requirements" => {}
            ":objects" => p.objects.extend(typed_list(&items[1..], false)?),
            ":init" => {
                let facts: &[SExpr] =
                    if items.len() == 2 && items[1].head().as_deref() == Some("and") {
                        p.init_conjunction = true;
                        &items[1].list().unwrap()[1..]
                    } else {
                        &items[1..]
                    };
                for f in facts {
                    if matches!(f.head().as_deref(), Some("not" | "and" | "oneof" | "=")) {
                        return Err(f.unsupported(f.head().unwrap()));
                    }
                    let a = atom(f)?;
                    if !a.is_ground() {
                        return Err(f.error("initial facts must be ground"));
                    }
                    if !p.init.contains(&a) {
                        p.init.push(a);
                    }
                }
            }
            ":goal" => {
                if items.len() != 2 {
                    return Err(s.error("expected `(:goal CONDITION)`"));
                }
                let g = condition(&items[1])?;
                let mut ground = true;
                g.visit_atoms(&mut |a| ground &= a.is_ground());
                if !ground {
                    return Err(items[1].error("goal must be ground"));
                }
                p.goal = g;
            }
            other => return Err(s.unsupported(other)),
        }
    }
    if !have_domain {
        return Err(root.error("missing `(:domain NAME)`"));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TINY: &str = "(define (domain tiny)
  (:requirements :typing :non-deterministic)
  (:types location)
  (:predicates (at ?l - location) (flat))
  (:action go
    :parameters (?a ?b - location)
    :precondition (and (at ?a) (not (flat)))
    :effect (oneof (and (at ?b) (not (at ?a))) (and (at ?b) (not (at ?a)) (flat)))))";

    #[test]
    fn parses_a_small_domain() {
        let d = parse_domain(TINY).unwrap();
        assert_eq!(d.name, "tiny");
        assert_eq!(d.types, vec![TypedName::new("location", "object")]);
        assert_eq!(d.predicates[1].params, vec![]);
        let go = &d.actions[0];
        assert_eq!(
            go.params,
            vec![
                TypedName::new("a", "location"),
                TypedName::new("b", "location")
            ]
        );
        assert!(matches!(&go.effect, Effect::OneOf(v) if v.len() == 2));
    }

    #[test]
    fn unsupported_constructs_are_named() {
        let e = parse_domain("(define (domain d) (:requirements :durative-actions))").unwrap_err();
        assert_eq!(
            e,
            PddlError::Unsupported {
                construct: ":durative-actions".into(),
                line: 1,
                col: 35
            }
        );
        let e = parse_domain("(define (domain d) (:functions (f)))").unwrap_err();
        assert!(matches!(e, PddlError::Unsupported { construct, .. } if construct == ":functions"));
        let src = TINY.replace("(not (flat))", "(forall (?x - location) (at ?x))");
        assert!(matches!(
            parse_domain(&src),
            Err(PddlError::Unsupported { construct, .. }) if construct == "forall"
        ));
    }

    #[test]
    fn oneof_placement_is_checked() {
        let src = TINY.replace(
            ":effect (oneof",
            ":effect (when (flat) (oneof (flat) (flat))) :dummy (oneof",
        );
        assert!(matches!(
            parse_domain(&src),
            Err(PddlError::Unsupported { construct, .. }) if construct == "oneof inside when"
        ));
        let nested = TINY.replace("(oneof (and", "(oneof (oneof (flat)) (and");
        assert!(parse_domain(&nested).is_err());
        let empty = TINY.replace(
            "(oneof (and (at ?b) (not (at ?a))) (and (at ?b) (not (at ?a)) (flat)))",
            "(oneof)",
        );
        assert!(matches!(
            parse_domain(&empty),
            Err(PddlError::Syntax { .. })
        ));
    }

    #[test]
    fn undeclared_names_are_rejected() {
        let src = TINY.replace("(and (at ?a)", "(and (on ?a)");
        assert_eq!(
            parse_domain(&src),
            Err(PddlError::UndeclaredPredicate("on".into()))
        );
        let src = TINY.replace("(and (at ?a)", "(and (at ?c)");
        assert!(matches!(
            parse_domain(&src),
            Err(PddlError::UnboundVariable { .. })
        ));
        let src = TINY.replace("(and (at ?a)", "(and (at ?a ?b)");
        assert!(matches!(
            parse_domain(&src),
            Err(PddlError::ArityMismatch {
                expected: 1,
                found: 2,
                ..
            })
        ));
    }

    #[test]
    fn syntax_errors_report_line_and_column() {
        let src = "(define (domain d)\n  (:predicates (p))\n  (:action a :parameters (x)))";
        match parse_domain(src) {
            Err(PddlError::Syntax { line, col, .. }) => assert_eq!((line, col), (3, 27)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn problem_init_forms() {
        let flat = parse_problem(
            "(define (problem p) (:domain tiny) (:objects l1 l2 - location)
             (:init (at l1) (at l1)) (:goal (at l2)))",
        )
        .unwrap();
        assert!(!flat.init_conjunction);
        assert_eq!(flat.init, vec![Atom::ground("at", &["l1"])]);
        let conj = parse_problem(
            "(define (problem p) (:domain tiny) (:objects l1 l2 - location)
             (:init (and (at l1))) (:goal (and (at l2) (not (flat)))))",
        )
        .unwrap();
        assert!(conj.init_conjunction);
        assert_eq!(conj.init, flat.init);
        assert!(parse_problem("(define (problem p) (:init))").is_err());
        assert!(parse_problem("(define (problem p) (:domain tiny) (:goal (at ?x)))").is_err());
    }
}
