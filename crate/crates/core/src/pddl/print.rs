use super::{Condition, DomainModel, Effect, ProblemModel, TypedName};
use crate::logic::Atom;

const WIDTH: usize = 80;

/// Layout tree: a leaf word or a parenthesized list.
enum Doc {
    Word(String),
    List(Vec<Doc>),
}

impl Doc {
    fn list(head: &str, rest: Vec<Doc>) -> Doc {
        let mut items = vec![Doc::Word(head.to_string())];
        items.extend(rest);
        Doc::List(items)
    }

    fn flat(&self) -> String {
        match self {
            Doc::Word(w) => w.clone(),
            Doc::List(items) => {
                let inner: Vec<String> = items.iter().map(Doc::flat).collect();
                format!("({})", inner.join(" "))
            }
        }
    }

    /// Prints flat when it fits, otherwise one child per line after the head.
    fn render(&self, indent: usize, out: &mut String) {
        let flat = self.flat();
        let items = match self {
            Doc::List(items) if indent + flat.len() > WIDTH && items.len() > 1 => items,
            _ => {
                out.push_str(&flat);
                return;
            }
        };
        out.push('(');
        items[0].render(indent + 1, out);
        for it in &items[1..] {
            out.push('\n');
            out.push_str(&" ".repeat(indent + 2));
            it.render(indent + 2, out);
        }
        out.push(')');
    }
}

fn atom_doc(a: &Atom) -> Doc {
    Doc::Word(a.to_pddl())
}

fn condition_doc(c: &Condition) -> Doc {
    match c {
        Condition::Atom(a) => atom_doc(a),
        Condition::Not(c) => Doc::list("not", vec![condition_doc(c)]),
        Condition::And(cs) => Doc::list("and", cs.iter().map(condition_doc).collect()),
        Condition::Or(cs) => Doc::list("or", cs.iter().map(condition_doc).collect()),
    }
}

fn effect_doc(e: &Effect) -> Doc {
    match e {
        Effect::Add(a) => atom_doc(a),
        Effect::Delete(a) => Doc::list("not", vec![atom_doc(a)]),
        Effect::And(es) => Doc::list("and", es.iter().map(effect_doc).collect()),
        Effect::OneOf(es) => Doc::list("oneof", es.iter().map(effect_doc).collect()),
        Effect::When(c, e) => Doc::list("when", vec![condition_doc(c), effect_doc(e)]),
    }
}

/// `?a ?b - t ?c - u`, grouping consecutive names of the same type.
fn typed_list(items: &[TypedName], prefix: &str) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < items.len() {
        let ty = &items[i].ty;
        let mut j = i;
        while j < items.len() && &items[j].ty == ty {
            parts.push(format!("{prefix}{}", items[j].name));
            j += 1;
        }
        if ty != "object" {
            parts.push(format!("- {ty}"));
        }
        i = j;
    }
    parts.join(" ")
}

fn section(out: &mut String, key: &str, body: &str) {
    out.push_str("  (");
    out.push_str(key);
    if !body.is_empty() {
        out.push(' ');
        out.push_str(body);
    }
    out.push_str(")\n");
}

pub fn print_domain(d: &DomainModel) -> String {
    let mut out = format!("(define (domain {})\n", d.name);
    if !d.requirements.is_empty() {
        section(&mut out, ":requirements", &d.requirements.join(" "));
    }
    if !d.types.is_empty() {
        section(&mut out, ":types", &typed_list(&d.types, ""));
    }
    if !d.constants.is_empty() {
        section(&mut out, ":constants", &typed_list(&d.constants, ""));
    }
    out.push_str("  (:predicates");
    for p in &d.predicates {
        out.push_str("\n    (");
        out.push_str(&p.name);
        if !p.params.is_empty() {
            out.push(' ');
            out.push_str(&typed_list(&p.params, "?"));
        }
        out.push(')');
    }
    out.push_str(")\n");
    for a in &d.actions {
        out.push_str(&format!("  (:action {}\n", a.name));
        out.push_str(&format!(
            "    :parameters ({})\n",
            typed_list(&a.params, "?")
        ));
        out.push_str("    :precondition ");
        condition_doc(&a.precondition).render(18, &mut out);
        out.push_str("\n    :effect ");
        effect_doc(&a.effect).render(12, &mut out);
        out.push_str(")\n");
    }
    out.push_str(")\n");
    out
}

pub fn print_problem(p: &ProblemModel) -> String {
    let mut out = format!("(define (problem {})\n", p.name);
    section(&mut out, ":domain", &p.domain);
    if !p.objects.is_empty() {
        section(&mut out, ":objects", &typed_list(&p.objects, ""));
    }
    let facts: Vec<String> = p.init.iter().map(Atom::to_pddl).collect();
    if p.init_conjunction {
        section(&mut out, ":init", &format!("(and {})", facts.join(" ")));
    } else {
        section(&mut out, ":init", &facts.join(" "));
    }
    out.push_str("  (:goal ");
    condition_doc(&p.goal).render(10, &mut out);
    out.push_str(")\n)\n");
    out
}
