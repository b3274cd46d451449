//! Rights, legal bases, the rights-per-legal-basis table and the
//! justification taxonomy.
//!
//! All of it is data: a [`VocabDataset`] is loaded from a Turtle document
//! (the bundled seed by default, see [`VocabDataset::seed`]).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{self, iri, Graph, Iri, Literal, Term, TurtleError};
use crate::ns;

/// The bundled seed document.
pub const SEED_TURTLE: &str = include_str!("../data/vocab-seed.ttl");

/// Articles a right may be registered under.
pub const RIGHT_ARTICLES: [&str; 11] = [
    "A13", "A14", "A15", "A16", "A17", "A18", "A19", "A20", "A21", "A22", "A7-3",
];

/// Articles whose rights can be exercised by a subject-initiated request.
const REQUESTABLE_ARTICLES: [&str; 9] = ["A15", "A16", "A17", "A18", "A19", "A20", "A21", "A22", "A7-3"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VocabError {
    #[error("vocabulary declares no rights")]
    NoRights,
    #[error("{from} references undeclared {kind} {to}")]
    DanglingReference { from: Iri, to: Iri, kind: &'static str },
    #[error("duplicate declaration: {0}")]
    Duplicate(String),
    #[error("malformed vocabulary entry {subject}: {detail}")]
    Malformed { subject: String, detail: String },
    #[error("unknown legal basis {0}")]
    UnknownLegalBasis(String),
    #[error(transparent)]
    Turtle(#[from] TurtleError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Right {
    pub iri: Iri,
    pub label: String,
    /// Article code such as `A15` or `A7-3`.
    pub gdpr_article: String,
    pub exercisable_by_request: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LegalBasis {
    pub iri: Iri,
    pub label: String,
    /// Clause code such as `A6-1-a`.
    pub gdpr_clause: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum JustificationCategory {
    Fulfilment,
    NonFulfilment,
    Delay,
    Exercise,
}

impl JustificationCategory {
    pub const ALL: [JustificationCategory; 4] = [
        JustificationCategory::Fulfilment,
        JustificationCategory::NonFulfilment,
        JustificationCategory::Delay,
        JustificationCategory::Exercise,
    ];

    /// The taxonomy concept members point at with `skos:broader`.
    pub fn concept(self) -> Iri {
        iri(ns::justifications(match self {
            JustificationCategory::Fulfilment => "FulfilmentJustification",
            JustificationCategory::NonFulfilment => "NonFulfilmentJustification",
            JustificationCategory::Delay => "DelayJustification",
            JustificationCategory::Exercise => "ExerciseJustification",
        }))
    }

    pub fn from_concept(concept: &Iri) -> Option<Self> {
        Self::ALL.into_iter().find(|c| &c.concept() == concept)
    }
}

impl fmt::Display for JustificationCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl std::str::FromStr for JustificationCategory {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown justification category {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Justification {
    pub iri: Iri,
    pub label: String,
    pub category: JustificationCategory,
}

/// Validated vocabulary. Immutable once loaded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VocabDataset {
    rights: BTreeMap<Iri, Right>,
    legal_bases: BTreeMap<Iri, LegalBasis>,
    table: BTreeMap<Iri, BTreeSet<Iri>>,
    justifications: BTreeMap<Iri, Justification>,
}

impl VocabDataset {
    /// Load the bundled seed document.
    pub fn seed() -> Self {
        Self::from_turtle(SEED_TURTLE).expect("bundled vocabulary seed is valid")
    }

    pub fn from_turtle(text: &str) -> Result<Self, VocabError> {
        load_vocab_dataset(&graph::parse_turtle(text)?)
    }

    pub fn rights(&self) -> impl Iterator<Item = &Right> {
        self.rights.values()
    }

    pub fn right(&self, iri: &Iri) -> Option<&Right> {
        self.rights.get(iri)
    }

    pub fn right_by_article(&self, article: &str) -> Option<&Right> {
        self.rights.values().find(|r| r.gdpr_article == article)
    }

    pub fn legal_bases(&self) -> impl Iterator<Item = &LegalBasis> {
        self.legal_bases.values()
    }

    pub fn legal_basis(&self, iri: &Iri) -> Option<&LegalBasis> {
        self.legal_bases.get(iri)
    }

    /// Resolve a legal basis given as a clause code (`A6-1-a`), a CURIE
    /// (`eu-gdpr:A6-1-a`) or a full IRI.
    pub fn resolve_legal_basis(&self, key: &str) -> Result<&LegalBasis, VocabError> {
        let key = key.trim();
        let by_iri = ns::expand_curie(key)
            .and_then(|full| Iri::new(full).ok())
            .and_then(|i| self.legal_bases.get(&i))
            .or_else(|| Iri::new(key).ok().and_then(|i| self.legal_bases.get(&i)));
        by_iri
            .or_else(|| self.legal_bases.values().find(|b| b.gdpr_clause == key))
            .ok_or_else(|| VocabError::UnknownLegalBasis(key.to_string()))
    }

    /// Rights applicable when processing under `basis`.
    pub fn applicable_rights(&self, basis: &Iri) -> Result<&BTreeSet<Iri>, VocabError> {
        self.table
            .get(basis)
            .ok_or_else(|| VocabError::UnknownLegalBasis(basis.to_string()))
    }

    pub fn justifications(&self) -> impl Iterator<Item = &Justification> {
        self.justifications.values()
    }

    pub fn justification(&self, iri: &Iri) -> Option<&Justification> {
        self.justifications.get(iri)
    }

    /// Look a justification up by its local name, e.g. `RequestExcessive`.
    pub fn justification_named(&self, local: &str) -> Option<&Justification> {
        self.justifications.get(&iri(ns::justifications(local)))
    }

    /// Resolve a justification given as local name, CURIE or IRI.
    pub fn resolve_justification(&self, key: &str) -> Option<&Justification> {
        let key = key.trim();
        ns::expand_curie(key)
            .and_then(|full| Iri::new(full).ok())
            .and_then(|i| self.justifications.get(&i))
            .or_else(|| Iri::new(key).ok().and_then(|i| self.justifications.get(&i)))
            .or_else(|| self.justification_named(key))
    }

    pub fn justifications_for(&self, category: JustificationCategory) -> Vec<&Justification> {
        self.justifications
            .values()
            .filter(|j| j.category == category)
            .collect()
    }
}

fn single_literal<'a>(g: &'a Graph, subject: &Term, predicate: &str) -> Result<Option<&'a Literal>, VocabError> {
    let objects = g.objects(subject, &iri(predicate));
    match objects.as_slice() {
        [] => Ok(None),
        [Term::Literal(l)] => Ok(Some(l)),
        [_] => Err(VocabError::Malformed {
            subject: term_label(subject),
            detail: format!("<{predicate}> must be a literal"),
        }),
        _ => Err(VocabError::Duplicate(format!("{} has several <{predicate}> values", term_label(subject)))),
    }
}

fn term_label(t: &Term) -> String {
    match t {
        Term::Iri(i) => i.to_string(),
        Term::BlankNode(b) => format!("_:{b}"),
        Term::Literal(l) => format!("{:?}", l.lexical()),
    }
}

fn subject_iri(t: &Term) -> Result<Iri, VocabError> {
    t.as_iri().cloned().ok_or_else(|| VocabError::Malformed {
        subject: term_label(t),
        detail: "vocabulary entries must be IRIs".into(),
    })
}

fn title(g: &Graph, subject: &Term, fallback: &str) -> Result<String, VocabError> {
    Ok(single_literal(g, subject, &ns::dct("title"))?
        .map(|l| l.lexical().to_string())
        .unwrap_or_else(|| fallback.to_string()))
}

/// Build a validated dataset from a vocabulary graph. Triples the loader
/// does not know about are ignored.
pub fn load_vocab_dataset(document: &Graph) -> Result<VocabDataset, VocabError> {
    let mut rights = BTreeMap::new();
    let mut articles = BTreeSet::new();
    for subject in document.instances_of(&iri(ns::dpv("DataSubjectRight"))) {
        let right_iri = subject_iri(subject)?;
        let article = right_iri.local_name().to_string();
        if !RIGHT_ARTICLES.contains(&article.as_str()) {
            return Err(VocabError::Malformed {
                subject: right_iri.to_string(),
                detail: format!("{article} is not a registered GDPR right article"),
            });
        }
        if !articles.insert(article.clone()) {
            return Err(VocabError::Duplicate(format!("right article {article}")));
        }
        let exercisable = single_literal(document, subject, &ns::gr("exercisableByRequest"))?
            .and_then(Literal::as_bool)
            .ok_or_else(|| VocabError::Malformed {
                subject: right_iri.to_string(),
                detail: "missing boolean gr:exercisableByRequest".into(),
            })?;
        if exercisable != REQUESTABLE_ARTICLES.contains(&article.as_str()) {
            return Err(VocabError::Malformed {
                subject: right_iri.to_string(),
                detail: format!("exercisableByRequest={exercisable} contradicts {article}"),
            });
        }
        let label = title(document, subject, &article)?;
        rights.insert(
            right_iri.clone(),
            Right {
                iri: right_iri,
                label,
                gdpr_article: article,
                exercisable_by_request: exercisable,
            },
        );
    }
    if rights.is_empty() {
        return Err(VocabError::NoRights);
    }

    let mut legal_bases = BTreeMap::new();
    let mut table = BTreeMap::new();
    let applicable = iri(ns::gr("applicableRight"));
    for subject in document.instances_of(&iri(ns::dpv("LegalBasis"))) {
        let basis_iri = subject_iri(subject)?;
        if rights.contains_key(&basis_iri) {
            return Err(VocabError::Duplicate(format!("{basis_iri} is both a right and a legal basis")));
        }
        let clause = basis_iri.local_name().to_string();
        if !is_art6_clause(&clause) {
            return Err(VocabError::Malformed {
                subject: basis_iri.to_string(),
                detail: format!("{clause} is not an Art. 6(1) clause"),
            });
        }
        let mut entry = BTreeSet::new();
        for object in document.objects(subject, &applicable) {
            let right = subject_iri(object)?;
            if !rights.contains_key(&right) {
                return Err(VocabError::DanglingReference {
                    from: basis_iri.clone(),
                    to: right,
                    kind: "right",
                });
            }
            entry.insert(right);
        }
        let label = title(document, subject, &clause)?;
        table.insert(basis_iri.clone(), entry);
        legal_bases.insert(
            basis_iri.clone(),
            LegalBasis {
                iri: basis_iri,
                label,
                gdpr_clause: clause,
            },
        );
    }
    // Table entries on anything that is not a declared legal basis.
    for t in document.matching(None, Some(&applicable), None) {
        let from = subject_iri(t.subject())?;
        if !legal_bases.contains_key(&from) {
            return Err(VocabError::DanglingReference {
                to: from.clone(),
                from,
                kind: "legal basis",
            });
        }
    }

    let mut justifications = BTreeMap::new();
    let broader = iri(ns::skos("broader"));
    for subject in document.instances_of(&iri(ns::dpv("Justification"))) {
        let j_iri = subject_iri(subject)?;
        if !j_iri.as_str().starts_with(ns::JUSTIFICATIONS) {
            return Err(VocabError::Malformed {
                subject: j_iri.to_string(),
                detail: "justifications must live in the justifications namespace".into(),
            });
        }
        if rights.contains_key(&j_iri) || legal_bases.contains_key(&j_iri) {
            return Err(VocabError::Duplicate(j_iri.to_string()));
        }
        let categories: Vec<JustificationCategory> = document
            .objects(subject, &broader)
            .into_iter()
            .filter_map(Term::as_iri)
            .filter_map(JustificationCategory::from_concept)
            .collect();
        let category = match categories.as_slice() {
            [c] => *c,
            [] => {
                return Err(VocabError::Malformed {
                    subject: j_iri.to_string(),
                    detail: "not in the fulfilment, non-fulfilment, delay or exercise category".into(),
                })
            }
            _ => {
                return Err(VocabError::Malformed {
                    subject: j_iri.to_string(),
                    detail: "belongs to more than one category".into(),
                })
            }
        };
        let label = title(document, subject, j_iri.local_name())?;
        justifications.insert(
            j_iri.clone(),
            Justification {
                iri: j_iri,
                label,
                category,
            },
        );
    }

    Ok(VocabDataset {
        rights,
        legal_bases,
        table,
        justifications,
    })
}

fn is_art6_clause(clause: &str) -> bool {
    clause
        .strip_prefix("A6-1-")
        .is_some_and(|letter| matches!(letter, "a" | "b" | "c" | "d" | "e" | "f"))
}

/// Export the dataset back to a vocabulary graph (inverse of
/// [`load_vocab_dataset`] up to ignored triples).
pub fn export_vocab_dataset(ds: &VocabDataset) -> Graph {
    let mut g = Graph::new();
    g.set_prefix("skos", iri(ns::SKOS));
    let rdf_type = iri(ns::RDF_TYPE);
    let title = iri(ns::dct("title"));
    for r in ds.rights() {
        let s = Term::iri(&r.iri);
        g.add(&s, &rdf_type, iri(ns::dpv("DataSubjectRight")));
        g.add(&s, &title, Literal::string(&r.label));
        g.add(&s, &iri(ns::gr("exercisableByRequest")), Literal::boolean(r.exercisable_by_request));
    }
    for b in ds.legal_bases() {
        let s = Term::iri(&b.iri);
        g.add(&s, &rdf_type, iri(ns::dpv("LegalBasis")));
        g.add(&s, &title, Literal::string(&b.label));
        for r in &ds.table[&b.iri] {
            g.add(&s, &iri(ns::gr("applicableRight")), r.clone());
        }
    }
    for j in ds.justifications() {
        let s = Term::iri(&j.iri);
        g.add(&s, &rdf_type, iri(ns::dpv("Justification")));
        g.add(&s, &title, Literal::string(&j.label));
        g.add(&s, &iri(ns::skos("broader")), j.category.concept());
    }
    g
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProcessError {
    #[error("process declares fewer rights than its legal basis grants: missing {missing:?}")]
    MissingApplicableRights { missing: Vec<Iri> },
    #[error(transparent)]
    Vocab(#[from] VocabError),
    #[error("malformed process description: {0}")]
    Shape(String),
}

/// A `dpv:Process` description declaring which rights apply to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessSpec {
    pub iri: Iri,
    pub purposes: BTreeSet<Iri>,
    pub personal_data_categories: BTreeSet<Iri>,
    pub legal_basis: Iri,
    pub controller: Iri,
    pub applicable_rights: BTreeSet<Iri>,
    /// Extra rights per jurisdiction (e.g. fundamental rights).
    pub scopes: BTreeMap<Iri, BTreeSet<Iri>>,
}

impl ProcessSpec {
    /// New process whose applicable rights are exactly those the table
    /// grants for `legal_basis`.
    pub fn new(iri: Iri, legal_basis: Iri, controller: Iri, ds: &VocabDataset) -> Result<Self, ProcessError> {
        let applicable_rights = ds.applicable_rights(&legal_basis)?.clone();
        Ok(ProcessSpec {
            iri,
            purposes: BTreeSet::new(),
            personal_data_categories: BTreeSet::new(),
            legal_basis,
            controller,
            applicable_rights,
            scopes: BTreeMap::new(),
        })
    }

    /// Checks `applicable_rights ⊇ applicable_rights(legal_basis)`.
    pub fn validate(&self, ds: &VocabDataset) -> Result<(), ProcessError> {
        let required = ds.applicable_rights(&self.legal_basis)?;
        let missing: Vec<Iri> = required.difference(&self.applicable_rights).cloned().collect();
        if missing.is_empty() {
            Ok(())
        } else {
            Err(ProcessError::MissingApplicableRights { missing })
        }
    }

    /// Applicable rights, plus the rights scoped to `jurisdiction` if given.
    pub fn applicable_rights_for(&self, jurisdiction: Option<&Iri>) -> BTreeSet<Iri> {
        let mut out = self.applicable_rights.clone();
        if let Some(scoped) = jurisdiction.and_then(|j| self.scopes.get(j)) {
            out.extend(scoped.iter().cloned());
        }
        out
    }

    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::new();
        let s = Term::iri(&self.iri);
        g.add(&s, &iri(ns::RDF_TYPE), iri(ns::dpv("Process")));
        for p in &self.purposes {
            g.add(&s, &iri(ns::dpv("hasPurpose")), p.clone());
        }
        for pd in &self.personal_data_categories {
            g.add(&s, &iri(ns::dpv("hasPersonalData")), pd.clone());
        }
        g.add(&s, &iri(ns::dpv("hasLegalBasis")), self.legal_basis.clone());
        g.add(&s, &iri(ns::dpv("hasDataController")), self.controller.clone());
        for r in &self.applicable_rights {
            g.add(&s, &iri(ns::dpv("hasRight")), r.clone());
        }
        for (i, (jurisdiction, rights)) in self.scopes.iter().enumerate() {
            let scope = Term::blank(format!("scope{i}"));
            g.add(&s, &iri(ns::dpv("hasScope")), scope.clone());
            g.add(&scope, &iri(ns::dpv("hasJurisdiction")), jurisdiction.clone());
            for r in rights {
                g.add(&scope, &iri(ns::dpv("hasRight")), r.clone());
            }
        }
        g
    }

    /// Read every `dpv:Process` in `g`.
    pub fn all_from_graph(g: &Graph) -> Result<Vec<ProcessSpec>, ProcessError> {
        g.instances_of(&iri(ns::dpv("Process")))
            .into_iter()
            .map(|s| Self::from_node(g, s))
            .collect()
    }

    fn from_node(g: &Graph, s: &Term) -> Result<ProcessSpec, ProcessError> {
        let shape = |m: &str| ProcessError::Shape(format!("{}: {m}", term_label(s)));
        let iris = |node: &Term, p: &str| -> Result<BTreeSet<Iri>, ProcessError> {
            g.objects(node, &iri(ns::dpv(p)))
                .into_iter()
                .map(|o| o.as_iri().cloned().ok_or_else(|| shape(&format!("dpv:{p} must be an IRI"))))
                .collect()
        };
        let one = |p: &str| -> Result<Iri, ProcessError> {
            let set = iris(s, p)?;
            if set.len() != 1 {
                return Err(shape(&format!("expected exactly one dpv:{p}")));
            }
            Ok(set.into_iter().next().expect("len checked"))
        };
        let mut scopes = BTreeMap::new();
        for scope in g.objects(s, &iri(ns::dpv("hasScope"))) {
            let jurisdictions = iris(scope, "hasJurisdiction")?;
            let [jurisdiction] = jurisdictions.into_iter().collect::<Vec<_>>().try_into().map_err(|_| {
                shape("each scope needs exactly one dpv:hasJurisdiction")
            })?;
            scopes
                .entry(jurisdiction)
                .or_insert_with(BTreeSet::new)
                .extend(iris(scope, "hasRight")?);
        }
        Ok(ProcessSpec {
            iri: subject_iri(s)?,
            purposes: iris(s, "hasPurpose")?,
            personal_data_categories: iris(s, "hasPersonalData")?,
            legal_basis: one("hasLegalBasis")?,
            controller: one("hasDataController")?,
            applicable_rights: iris(s, "hasRight")?,
            scopes,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gdpr(local: &str) -> Iri {
        iri(ns::eu_gdpr(local))
    }

    #[test]
    fn seed_counts() {
        let ds = VocabDataset::seed();
        assert_eq!(ds.rights().count(), 11);
        assert_eq!(ds.legal_bases().count(), 6);
        assert!(ds.justifications().count() >= 12);
    }

    #[test]
    fn only_a13_and_a14_are_duties() {
        let ds = VocabDataset::seed();
        let duties: Vec<_> = ds
            .rights()
            .filter(|r| !r.exercisable_by_request)
            .map(|r| r.gdpr_article.as_str())
            .collect();
        assert_eq!(duties, vec!["A13", "A14"]);
    }

    #[test]
    fn consent_rights() {
        let ds = VocabDataset::seed();
        let set = ds.applicable_rights(&gdpr("A6-1-a")).unwrap();
        assert!(set.contains(&gdpr("A20")));
        assert!(set.contains(&gdpr("A7-3")));
        assert!(set.contains(&gdpr("A15")));
    }

    #[test]
    fn unknown_basis() {
        let ds = VocabDataset::seed();
        assert!(matches!(
            ds.applicable_rights(&iri("https://ex.org/basis")),
            Err(VocabError::UnknownLegalBasis(_))
        ));
        assert!(ds.resolve_legal_basis("A6-1-z").is_err());
        assert_eq!(ds.resolve_legal_basis("A6-1-f").unwrap().iri, gdpr("A6-1-f"));
        assert_eq!(ds.resolve_legal_basis("eu-gdpr:A6-1-b").unwrap().iri, gdpr("A6-1-b"));
        assert_eq!(ds.resolve_legal_basis(&ns::eu_gdpr("A6-1-c")).unwrap().iri, gdpr("A6-1-c"));
    }

    #[test]
    fn lookup_is_pure() {
        let ds = VocabDataset::seed();
        let before = ds.clone();
        let a = ds.applicable_rights(&gdpr("A6-1-b")).unwrap().clone();
        let b = ds.applicable_rights(&gdpr("A6-1-b")).unwrap().clone();
        assert_eq!(a, b);
        assert_eq!(ds, before);
    }

    #[test]
    fn justification_categories() {
        let ds = VocabDataset::seed();
        let names = |c| -> Vec<String> {
            ds.justifications_for(c)
                .into_iter()
                .map(|j| j.iri.local_name().to_string())
                .collect()
        };
        let non = names(JustificationCategory::NonFulfilment);
        assert!(non.contains(&"IdentityUnverifiable".to_string()));
        assert!(non.contains(&"RequestExcessive".to_string()));
        assert!(names(JustificationCategory::Delay).contains(&"AdditionalInformationRequired".to_string()));
        for j in ds.justifications() {
            assert!(j.iri.as_str().starts_with(ns::JUSTIFICATIONS));
        }
        assert_eq!(ds.resolve_justification("justifications:RequestComplex").unwrap().category, JustificationCategory::Delay);
        assert_eq!(ds.resolve_justification("RequestComplex").unwrap().category, JustificationCategory::Delay);
    }

    #[test]
    fn category_without_members_is_empty() {
        let doc = "@prefix dpv: <https://w3id.org/dpv#> .\n\
                   @prefix gr: <https://gdpr-rights.example/ns#> .\n\
                   @prefix eu-gdpr: <https://w3id.org/dpv/legal/eu/gdpr#> .\n\
                   eu-gdpr:A15 a dpv:DataSubjectRight ; gr:exercisableByRequest true .";
        let ds = VocabDataset::from_turtle(doc).unwrap();
        assert!(ds.justifications_for(JustificationCategory::Exercise).is_empty());
    }

    #[test]
    fn empty_graph_is_rejected() {
        assert_eq!(load_vocab_dataset(&Graph::empty()), Err(VocabError::NoRights));
    }

    #[test]
    fn dangling_table_entry() {
        let doc = "@prefix dpv: <https://w3id.org/dpv#> .\n\
                   @prefix gr: <https://gdpr-rights.example/ns#> .\n\
                   @prefix eu-gdpr: <https://w3id.org/dpv/legal/eu/gdpr#> .\n\
                   eu-gdpr:A15 a dpv:DataSubjectRight ; gr:exercisableByRequest true .\n\
                   eu-gdpr:A6-1-a a dpv:LegalBasis ; gr:applicableRight eu-gdpr:A15, eu-gdpr:A20 .";
        assert!(matches!(
            VocabDataset::from_turtle(doc),
            Err(VocabError::DanglingReference { .. })
        ));
    }

    #[test]
    fn rejects_contradicting_exercisable_flag_and_foreign_category() {
        let base = "@prefix dpv: <https://w3id.org/dpv#> .\n\
                    @prefix gr: <https://gdpr-rights.example/ns#> .\n\
                    @prefix skos: <http://www.w3.org/2004/02/skos/core#> .\n\
                    @prefix justifications: <https://w3id.org/dpv/justifications#> .\n\
                    @prefix eu-gdpr: <https://w3id.org/dpv/legal/eu/gdpr#> .\n";
        let doc = format!("{base}eu-gdpr:A13 a dpv:DataSubjectRight ; gr:exercisableByRequest true .");
        assert!(matches!(VocabDataset::from_turtle(&doc), Err(VocabError::Malformed { .. })));
        let doc = format!(
            "{base}eu-gdpr:A15 a dpv:DataSubjectRight ; gr:exercisableByRequest true .\n\
             justifications:X a dpv:Justification ; skos:broader justifications:BreachJustification ."
        );
        assert!(matches!(VocabDataset::from_turtle(&doc), Err(VocabError::Malformed { .. })));
    }

    #[test]
    fn export_round_trip() {
        let ds = VocabDataset::seed();
        let again = load_vocab_dataset(&export_vocab_dataset(&ds)).unwrap();
        assert_eq!(ds, again);
    }

    #[test]
    fn process_spec_scopes() {
        let ds = VocabDataset::seed();
        let eu = iri("https://w3id.org/dpv/loc#EU");
        let charter = iri("https://ex.org/eu-charter#A8");
        let mut p = ProcessSpec::new(iri("https://ctrl.example/process/1"), gdpr("A6-1-f"), iri("https://ctrl.example"), &ds).unwrap();
        assert_eq!(p.applicable_rights_for(None), ds.applicable_rights(&gdpr("A6-1-f")).unwrap().clone());
        p.scopes.insert(eu.clone(), BTreeSet::from([charter.clone()]));
        assert!(p.applicable_rights_for(Some(&eu)).contains(&charter));
        assert_eq!(p.applicable_rights_for(Some(&iri("https://ex.org/nowhere"))), p.applicable_rights);
        p.validate(&ds).unwrap();
        p.applicable_rights.remove(&gdpr("A15"));
        assert!(matches!(p.validate(&ds), Err(ProcessError::MissingApplicableRights { .. })));
    }

    #[test]
    fn process_spec_graph_round_trip() {
        let ds = VocabDataset::seed();
        let mut p = ProcessSpec::new(iri("https://ctrl.example/process/1"), gdpr("A6-1-a"), iri("https://ctrl.example"), &ds).unwrap();
        p.purposes.insert(iri(ns::dpv("ServiceProvision")));
        p.personal_data_categories.insert(iri("https://w3id.org/dpv/pd#EmailAddress"));
        p.scopes.insert(iri("https://w3id.org/dpv/loc#EU"), BTreeSet::from([iri("https://ex.org/eu-charter#A8")]));
        let text = graph::serialize_turtle(&p.to_graph());
        let back = ProcessSpec::all_from_graph(&graph::parse_turtle(&text).unwrap()).unwrap();
        assert_eq!(back, vec![p]);
    }
}
