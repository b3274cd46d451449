use std::collections::{BTreeSet, HashMap};
#[cfg(test)]
use std::collections::BTreeMap;

use thiserror::Error;

use super::{Graph, Term, Triple};

/// Blank-node cap for the bijection search.
pub const MAX_BLANK_NODES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("graph has {count} blank nodes; isomorphism is only checked up to {MAX_BLANK_NODES}")]
pub struct IsomorphismError {
    pub count: usize,
}

/// True iff some bijection between blank-node labels makes the triple sets
/// equal. Ground graphs compare as sets.
pub fn isomorphic(a: &Graph, b: &Graph) -> Result<bool, IsomorphismError> {
    let a_blanks: Vec<&str> = a.blank_nodes().into_iter().collect();
    let b_blanks: Vec<&str> = b.blank_nodes().into_iter().collect();
    for count in [a_blanks.len(), b_blanks.len()] {
        if count > MAX_BLANK_NODES {
            return Err(IsomorphismError { count });
        }
    }
    if a.len() != b.len() || a_blanks.len() != b_blanks.len() {
        return Ok(false);
    }
    if a_blanks.is_empty() {
        return Ok(a.triples == b.triples);
    }

    // Ground triples must agree exactly.
    let ground = |g: &Graph| -> BTreeSet<Triple> {
        g.iter()
            .filter(|t| !t.subject().is_blank() && !t.object().is_blank())
            .cloned()
            .collect()
    };
    if ground(a) != ground(b) {
        return Ok(false);
    }

    let a_sig = signatures(a);
    let b_sig = signatures(b);
    let candidates: Vec<Vec<&str>> = a_blanks
        .iter()
        .map(|x| {
            b_blanks
                .iter()
                .copied()
                .filter(|y| a_sig.get(x) == b_sig.get(y))
                .collect()
        })
        .collect();
    if candidates.iter().any(Vec::is_empty) {
        return Ok(false);
    }

    let mut search = Search {
        a,
        b,
        a_blanks: &a_blanks,
        candidates: &candidates,
        mapping: HashMap::new(),
        used: BTreeSet::new(),
    };
    Ok(search.run(0))
}

type Edges = Vec<(u8, String, Option<Term>)>;

/// Per blank node, a sorted multiset of (position, predicate, ground neighbour)
/// edges with blank neighbours erased. Bijections must preserve it.
fn signatures(g: &Graph) -> HashMap<&str, Edges> {
    let mut out: HashMap<&str, Edges> = HashMap::new();
    for t in g.iter() {
        let erase = |term: &Term| (!term.is_blank()).then(|| term.clone());
        if let Term::BlankNode(s) = t.subject() {
            out.entry(s)
                .or_default()
                .push((0, t.predicate().to_string(), erase(t.object())));
        }
        if let Term::BlankNode(o) = t.object() {
            out.entry(o)
                .or_default()
                .push((1, t.predicate().to_string(), erase(t.subject())));
        }
    }
    for edges in out.values_mut() {
        edges.sort();
    }
    out
}

struct Search<'a> {
    a: &'a Graph,
    b: &'a Graph,
    a_blanks: &'a [&'a str],
    candidates: &'a [Vec<&'a str>],
    mapping: HashMap<&'a str, &'a str>,
    used: BTreeSet<&'a str>,
}

impl<'a> Search<'a> {
    fn run(&mut self, depth: usize) -> bool {
        if depth == self.a_blanks.len() {
            return self.consistent();
        }
        let node = self.a_blanks[depth];
        for &target in &self.candidates[depth] {
            if self.used.contains(target) {
                continue;
            }
            self.mapping.insert(node, target);
            self.used.insert(target);
            if self.consistent() && self.run(depth + 1) {
                return true;
            }
            self.mapping.remove(node);
            self.used.remove(target);
        }
        false
    }

    /// Every triple of `a` whose blank nodes are all mapped must exist in `b`.
    fn consistent(&self) -> bool {
        let map = |term: &Term| -> Option<Term> {
            match term {
                Term::BlankNode(label) => self
                    .mapping
                    .get(label.as_str())
                    .map(|m| Term::BlankNode((*m).to_string())),
                other => Some(other.clone()),
            }
        };
        self.a.iter().all(|t| {
            match (map(t.subject()), map(t.object())) {
                (Some(s), Some(o)) => {
                    let mapped = Triple::new(s, t.predicate().clone(), o).expect("subject kind preserved");
                    self.b.contains(&mapped)
                }
                _ => true,
            }
        })
    }
}

#[cfg(test)]
pub(crate) fn relabel(g: &Graph, mapping: &BTreeMap<String, String>) -> Graph {
    let map = |term: &Term| match term {
        Term::BlankNode(l) => Term::BlankNode(mapping.get(l).cloned().unwrap_or_else(|| l.clone())),
        other => other.clone(),
    };
    let mut out = Graph::empty();
    for (label, ns) in g.prefixes() {
        out.set_prefix(label, ns.clone());
    }
    for t in g.iter() {
        out.insert(Triple::new(map(t.subject()), t.predicate().clone(), map(t.object())).expect("subject kind preserved"));
    }
    out
}
