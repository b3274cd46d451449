//! Minimal RDF data model.
//!
//! A [`Graph`] is a set of [`Triple`]s plus a prefix map. Graph values are
//! plain data: build them once, then share them freely between readers.

mod iso;
mod serialize;
mod turtle;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ns;
use crate::Timestamp;

pub use iso::{isomorphic, IsomorphismError, MAX_BLANK_NODES};
pub use serialize::serialize_turtle;
pub use turtle::{parse_turtle, TurtleError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid IRI {value:?}: {reason}")]
pub struct InvalidIri {
    pub value: String,
    pub reason: &'static str,
}

/// An absolute IRI.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Iri(String);

impl Iri {
    pub fn new(value: impl Into<String>) -> Result<Self, InvalidIri> {
        let value = value.into();
        let fail = |reason| InvalidIri {
            value: value.clone(),
            reason,
        };
        if value.is_empty() {
            return Err(fail("empty"));
        }
        if value
            .chars()
            .any(|c| c.is_whitespace() || c == '<' || c == '>' || c == '"' || c.is_control())
        {
            return Err(fail("contains whitespace, quotes or angle brackets"));
        }
        let Some((scheme, _)) = value.split_once(':') else {
            return Err(fail("missing scheme"));
        };
        let mut chars = scheme.chars();
        let scheme_ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic())
            && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'));
        if !scheme_ok {
            return Err(fail("malformed scheme"));
        }
        Ok(Iri(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The part after the last `#` or `/`.
    pub fn local_name(&self) -> &str {
        let cut = self.0.rfind(['#', '/']).map(|i| i + 1).unwrap_or(0);
        &self.0[cut..]
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<String> for Iri {
    type Error = InvalidIri;
    fn try_from(value: String) -> Result<Self, Self::Error> {
        Iri::new(value)
    }
}

impl From<Iri> for String {
    fn from(iri: Iri) -> Self {
        iri.0
    }
}

impl AsRef<str> for Iri {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Build an IRI from a string known to be valid, e.g. a namespace constant
/// joined with a local name.
///
/// Panics on invalid input; only use with static or already validated data.
pub(crate) fn iri(value: impl Into<String>) -> Iri {
    Iri::new(value).expect("static IRI")
}

/// RDF term. Variant order defines the sort order used by the serializer.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(Iri),
    BlankNode(String),
    Literal(Literal),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    lexical: String,
    datatype: Iri,
    language: Option<String>,
}

impl Literal {
    /// Plain `xsd:string` literal.
    pub fn string(lexical: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: iri(ns::XSD_STRING),
            language: None,
        }
    }

    /// Typed literal. A literal typed `rdf:langString` without a tag is
    /// stored as `xsd:string`.
    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Self {
        let datatype = if datatype.as_str() == ns::RDF_LANG_STRING {
            iri(ns::XSD_STRING)
        } else {
            datatype
        };
        Literal {
            lexical: lexical.into(),
            datatype,
            language: None,
        }
    }

    /// Language-tagged literal; the tag is normalized to lower case.
    pub fn lang(lexical: impl Into<String>, tag: &str) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: iri(ns::RDF_LANG_STRING),
            language: Some(tag.to_ascii_lowercase()),
        }
    }

    pub fn boolean(value: bool) -> Self {
        Literal::typed(value.to_string(), iri(ns::XSD_BOOLEAN))
    }

    pub fn date_time(t: &Timestamp) -> Self {
        Literal::typed(crate::format_timestamp(t), iri(ns::XSD_DATE_TIME))
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> &Iri {
        &self.datatype
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }

    pub fn as_bool(&self) -> Option<bool> {
        if self.datatype.as_str() != ns::XSD_BOOLEAN {
            return None;
        }
        match self.lexical.as_str() {
            "true" | "1" => Some(true),
            "false" | "0" => Some(false),
            _ => None,
        }
    }

    pub fn as_timestamp(&self) -> Option<Timestamp> {
        if self.datatype.as_str() != ns::XSD_DATE_TIME {
            return None;
        }
        crate::parse_timestamp(&self.lexical)
    }
}

impl Term {
    pub fn iri(value: &Iri) -> Self {
        Term::Iri(value.clone())
    }

    pub fn blank(label: impl Into<String>) -> Self {
        Term::BlankNode(label.into())
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(i) => Some(i),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(l) => Some(l),
            _ => None,
        }
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::BlankNode(_))
    }
}

impl From<Iri> for Term {
    fn from(value: Iri) -> Self {
        Term::Iri(value)
    }
}

impl From<Literal> for Term {
    fn from(value: Literal) -> Self {
        Term::Literal(value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("a literal cannot be the subject of a triple")]
pub struct LiteralSubject;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    subject: Term,
    predicate: Iri,
    object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Iri, object: Term) -> Result<Self, LiteralSubject> {
        if matches!(subject, Term::Literal(_)) {
            return Err(LiteralSubject);
        }
        Ok(Triple {
            subject,
            predicate,
            object,
        })
    }

    pub fn subject(&self) -> &Term {
        &self.subject
    }

    pub fn predicate(&self) -> &Iri {
        &self.predicate
    }

    pub fn object(&self) -> &Term {
        &self.object
    }
}

/// A set of triples with a prefix map.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    triples: BTreeSet<Triple>,
    prefixes: BTreeMap<String, Iri>,
}

impl Graph {
    /// Empty graph carrying the default prefix table.
    pub fn new() -> Self {
        let mut g = Graph::empty();
        for (label, namespace) in ns::DEFAULT_PREFIXES {
            g.set_prefix(label, iri(*namespace));
        }
        g
    }

    /// Empty graph with no prefixes.
    pub fn empty() -> Self {
        Graph::default()
    }

    /// Bind `label` to `namespace`, replacing any previous binding.
    pub fn set_prefix(&mut self, label: &str, namespace: Iri) {
        self.prefixes.insert(label.to_string(), namespace);
    }

    pub fn prefixes(&self) -> &BTreeMap<String, Iri> {
        &self.prefixes
    }

    /// Returns false when the triple was already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        self.triples.insert(triple)
    }

    /// Insert `(subject, predicate, object)`; the subject must not be a literal.
    pub fn add(&mut self, subject: &Term, predicate: &Iri, object: impl Into<Term>) {
        let triple = Triple::new(subject.clone(), predicate.clone(), object.into())
            .expect("builders never use literal subjects");
        self.triples.insert(triple);
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Triples in sorted order.
    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(triple)
    }

    /// Merge all triples (and missing prefixes) of `other` into `self`.
    pub fn extend_from(&mut self, other: &Graph) {
        for t in other.iter() {
            self.triples.insert(t.clone());
        }
        for (label, namespace) in &other.prefixes {
            self.prefixes
                .entry(label.clone())
                .or_insert_with(|| namespace.clone());
        }
    }

    /// All triples matching every bound position, in sorted order.
    pub fn matching(&self, s: Option<&Term>, p: Option<&Iri>, o: Option<&Term>) -> Vec<&Triple> {
        self.triples
            .iter()
            .filter(|t| s.is_none_or(|s| t.subject() == s))
            .filter(|t| p.is_none_or(|p| t.predicate() == p))
            .filter(|t| o.is_none_or(|o| t.object() == o))
            .collect()
    }

    /// Objects of `(s, p, ?)`.
    pub fn objects<'a>(&'a self, s: &Term, p: &Iri) -> Vec<&'a Term> {
        self.matching(Some(s), Some(p), None)
            .into_iter()
            .map(Triple::object)
            .collect()
    }

    /// Subjects of `(?, p, o)`.
    pub fn subjects<'a>(&'a self, p: &Iri, o: &Term) -> Vec<&'a Term> {
        self.matching(None, Some(p), Some(o))
            .into_iter()
            .map(Triple::subject)
            .collect()
    }

    /// Subjects typed with `class`.
    pub fn instances_of<'a>(&'a self, class: &Iri) -> Vec<&'a Term> {
        self.subjects(&iri(ns::RDF_TYPE), &Term::iri(class))
    }

    pub fn blank_nodes(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        for t in &self.triples {
            for term in [t.subject(), t.object()] {
                if let Term::BlankNode(label) = term {
                    out.insert(label.as_str());
                }
            }
        }
        out
    }
}

/// Free-function form of [`Graph::matching`] returning owned triples.
pub fn match_triples(g: &Graph, s: Option<&Term>, p: Option<&Iri>, o: Option<&Term>) -> Vec<Triple> {
    g.matching(s, p, o).into_iter().cloned().collect()
}
