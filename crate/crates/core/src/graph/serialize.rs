use std::fmt::Write;

use super::{Graph, Iri, Literal, Term};
use crate::ns;

/// Serialize `g` as Turtle.
///
/// Output is deterministic: prefixes sorted by label, one block per subject
/// with subjects, predicates and objects in sorted order (`a` first), blank nodes as
/// `_:label`, LF line endings and a trailing newline.
pub fn serialize_turtle(g: &Graph) -> String {
    let mut out = String::new();
    for (label, namespace) in g.prefixes() {
        let _ = writeln!(out, "@prefix {label}: <{namespace}> .");
    }

    let mut current_subject: Option<&Term> = None;
    let mut current_predicate: Option<&Iri> = None;
    for t in ordered(g) {
        if current_subject != Some(t.subject()) {
            if current_subject.is_some() {
                out.push_str(" .\n");
            }
            if !out.is_empty() {
                out.push('\n');
            }
            out.push_str(&term(g, t.subject()));
            out.push(' ');
            out.push_str(&predicate(g, t.predicate()));
            out.push(' ');
            current_subject = Some(t.subject());
            current_predicate = Some(t.predicate());
        } else if current_predicate != Some(t.predicate()) {
            out.push_str(" ;\n    ");
            out.push_str(&predicate(g, t.predicate()));
            out.push(' ');
            current_predicate = Some(t.predicate());
        } else {
            out.push_str(",\n        ");
        }
        out.push_str(&term(g, t.object()));
    }
    if current_subject.is_some() {
        out.push_str(" .\n");
    }
    out
}

/// Triples grouped by subject, with `rdf:type` leading each group.
fn ordered(g: &Graph) -> Vec<&super::Triple> {
    let mut all: Vec<_> = g.iter().collect();
    all.sort_by(|a, b| {
        let key = |t: &super::Triple| t.predicate().as_str() != ns::RDF_TYPE;
        a.subject().cmp(b.subject()).then(key(a).cmp(&key(b))).then(a.cmp(b))
    });
    all
}

fn predicate(g: &Graph, p: &Iri) -> String {
    if p.as_str() == ns::RDF_TYPE {
        "a".to_string()
    } else {
        iri(g, p)
    }
}

fn term(g: &Graph, t: &Term) -> String {
    match t {
        Term::Iri(i) => iri(g, i),
        Term::BlankNode(label) => format!("_:{label}"),
        Term::Literal(l) => literal(g, l),
    }
}

fn iri(g: &Graph, value: &Iri) -> String {
    let best = g
        .prefixes()
        .iter()
        .filter(|(_, ns)| value.as_str().starts_with(ns.as_str()))
        .map(|(label, ns)| (label, &value.as_str()[ns.as_str().len()..]))
        .filter(|(_, local)| is_safe_local(local))
        // Longest namespace wins; ties go to the smaller label.
        .min_by_key(|(label, local)| (local.len(), label.as_str()));
    match best {
        Some((label, local)) => format!("{label}:{local}"),
        None => format!("<{value}>"),
    }
}

/// Local names written unescaped. Anything else falls back to `<...>`.
fn is_safe_local(local: &str) -> bool {
    let mut chars = local.chars();
    match chars.next() {
        None => true,
        Some(c) if c.is_ascii_alphanumeric() || c == '_' => {
            chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        }
        Some(_) => false,
    }
}

fn literal(g: &Graph, l: &Literal) -> String {
    let mut out = String::with_capacity(l.lexical().len() + 2);
    out.push('"');
    for c in l.lexical().chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if c.is_control() => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    if let Some(tag) = l.language() {
        out.push('@');
        out.push_str(tag);
    } else if l.datatype().as_str() != ns::XSD_STRING {
        out.push_str("^^");
        out.push_str(&iri(g, l.datatype()));
    }
    out
}
