//! Right-exercise records.
//!
//! A record groups every activity carried out for one data subject's
//! requests with one controller. Activities form a series ordered by a
//! `prev` chain, with `first`/`last` pointers on the record, and carry
//! provenance links to the entities involved and the artifacts (notices,
//! data copies) they produced. Records are append-only.

use std::collections::BTreeSet;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::graph::{iri, Graph, Iri, Literal, Term};
use crate::lifecycle::{RequestId, RequestStatus};
pub use crate::ShapeViolation;
use crate::{mint_iri, ns, Timestamp};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecordError {
    #[error("activity at {at} is earlier than the latest activity at {latest}")]
    OutOfOrderTimestamp { at: Timestamp, latest: Timestamp },
    #[error("request {0} is not covered by this record")]
    UnknownRequest(RequestId),
    #[error("activity {0} has no associated entity")]
    MissingAssociation(Iri),
    #[error("activity {0} is already in the series")]
    DuplicateActivity(Iri),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RightExerciseActivity {
    pub id: Iri,
    pub request_id: RequestId,
    pub at: Timestamp,
    pub status_after: RequestStatus,
    pub associated_entities: BTreeSet<Iri>,
    pub generated_artifacts: BTreeSet<Iri>,
    /// Set by [`RightExerciseRecord::append`].
    pub prev: Option<Iri>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RightExerciseRecord {
    pub id: Iri,
    pub data_subject: Iri,
    pub request_ids: BTreeSet<RequestId>,
    series: Vec<RightExerciseActivity>,
}

/// Stable, filesystem-safe key for a data subject.
pub fn subject_key(subject: &Iri) -> String {
    let digest = Sha256::digest(subject.as_str().as_bytes());
    digest[..16].iter().map(|b| format!("{b:02x}")).collect()
}

impl RightExerciseRecord {
    pub fn new(id: Iri, data_subject: Iri) -> Self {
        RightExerciseRecord {
            id,
            data_subject,
            request_ids: BTreeSet::new(),
            series: Vec::new(),
        }
    }

    /// The record for `subject` in `controller`'s namespace.
    pub fn for_subject(controller: &Iri, subject: Iri) -> Self {
        let id = mint_iri(controller, &["records", &subject_key(&subject)]);
        Self::new(id, subject)
    }

    /// Cover another request of the same data subject.
    pub fn with_request(mut self, request: RequestId) -> Self {
        self.request_ids.insert(request);
        self
    }

    pub fn series(&self) -> &[RightExerciseActivity] {
        &self.series
    }

    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    pub fn first(&self) -> Option<&Iri> {
        self.series.first().map(|a| &a.id)
    }

    pub fn last(&self) -> Option<&Iri> {
        self.series.last().map(|a| &a.id)
    }

    /// IRI for the next activity appended to this record.
    pub fn next_activity_id(&self) -> Iri {
        mint_iri(&self.id, &["activities", &(self.series.len() + 1).to_string()])
    }

    /// Append `activity`, linking it to the current last activity.
    pub fn append(&self, mut activity: RightExerciseActivity) -> Result<RightExerciseRecord, RecordError> {
        if !self.request_ids.contains(&activity.request_id) {
            return Err(RecordError::UnknownRequest(activity.request_id));
        }
        if activity.associated_entities.is_empty() {
            return Err(RecordError::MissingAssociation(activity.id));
        }
        if self.series.iter().any(|a| a.id == activity.id) {
            return Err(RecordError::DuplicateActivity(activity.id));
        }
        if let Some(latest) = self.series.last() {
            if activity.at < latest.at {
                return Err(RecordError::OutOfOrderTimestamp {
                    at: activity.at,
                    latest: latest.at,
                });
            }
        }
        activity.prev = self.last().cloned();
        let mut next = self.clone();
        next.series.push(activity);
        Ok(next)
    }

    /// Most recent activity.
    pub fn latest_activity(&self) -> Option<&RightExerciseActivity> {
        self.series.last()
    }

    /// Most recent activity of one request.
    pub fn latest_activity_for(&self, request: &RequestId) -> Option<&RightExerciseActivity> {
        self.series.iter().rev().find(|a| &a.request_id == request)
    }

    /// Activities reached by following `prev` from the last one.
    pub fn walk_back(&self) -> Vec<&RightExerciseActivity> {
        let mut out = Vec::with_capacity(self.series.len());
        let mut cursor = self.series.last();
        while let Some(a) = cursor {
            out.push(a);
            cursor = a.prev.as_ref().and_then(|p| self.series.iter().find(|x| &x.id == p));
            if out.len() > self.series.len() {
                break;
            }
        }
        out
    }
}

/// Free-function form of [`RightExerciseRecord::append`].
pub fn append_activity(
    rec: &RightExerciseRecord,
    activity: RightExerciseActivity,
) -> Result<RightExerciseRecord, RecordError> {
    rec.append(activity)
}

pub fn latest_activity(rec: &RightExerciseRecord) -> Option<&RightExerciseActivity> {
    rec.latest_activity()
}

/// Export as a DCAT catalog / dataset series with PROV links.
pub fn export_record(rec: &RightExerciseRecord) -> Graph {
    let mut g = Graph::new();
    let r = Term::iri(&rec.id);
    let rdf_type = iri(ns::RDF_TYPE);
    g.add(&r, &rdf_type, iri(ns::dpv("RightExerciseRecord")));
    g.add(&r, &rdf_type, iri(ns::dcat("Catalog")));
    g.add(&r, &rdf_type, iri(ns::dcat("DatasetSeries")));
    g.add(&r, &iri(ns::dpv("hasDataSubject")), rec.data_subject.clone());
    for req in &rec.request_ids {
        g.add(&r, &iri(ns::gr("coversRequest")), Literal::string(req.as_str()));
    }
    if let (Some(first), Some(last)) = (rec.first(), rec.last()) {
        g.add(&r, &iri(ns::dcat("first")), first.clone());
        g.add(&r, &iri(ns::dcat("last")), last.clone());
    }
    for a in &rec.series {
        let s = Term::iri(&a.id);
        g.add(&s, &rdf_type, iri(ns::dpv("RightExerciseActivity")));
        g.add(&s, &rdf_type, iri(ns::dcat("Resource")));
        g.add(&s, &iri(ns::dcat("inSeries")), rec.id.clone());
        g.add(&s, &iri(ns::dct("issued")), Literal::date_time(&a.at));
        g.add(&s, &iri(ns::dpv("hasStatus")), a.status_after.concept());
        g.add(&s, &iri(ns::gr("forRequest")), Literal::string(a.request_id.as_str()));
        for e in &a.associated_entities {
            g.add(&s, &iri(ns::prov("wasAssociatedWith")), e.clone());
        }
        for art in &a.generated_artifacts {
            g.add(&s, &iri(ns::prov("generated")), art.clone());
        }
        if let Some(prev) = &a.prev {
            g.add(&s, &iri(ns::dcat("prev")), prev.clone());
        }
    }
    g
}

fn shape<T>(msg: impl Into<String>) -> Result<T, ShapeViolation> {
    Err(ShapeViolation(msg.into()))
}

fn iri_objects(g: &Graph, s: &Term, p: &Iri) -> Result<Vec<Iri>, ShapeViolation> {
    g.objects(s, p)
        .into_iter()
        .map(|o| {
            o.as_iri()
                .cloned()
                .ok_or_else(|| ShapeViolation(format!("{p} of {s:?} must be an IRI")))
        })
        .collect()
}

fn at_most_one<T>(mut values: Vec<T>, what: &str) -> Result<Option<T>, ShapeViolation> {
    match values.len() {
        0 => Ok(None),
        1 => Ok(values.pop()),
        n => shape(format!("{n} {what} triples, expected at most one")),
    }
}

fn exactly_one<T>(values: Vec<T>, what: &str) -> Result<T, ShapeViolation> {
    at_most_one(values, what)?.ok_or_else(|| ShapeViolation(format!("missing {what}")))
}

fn single_literal(g: &Graph, s: &Term, p: &Iri, what: &str) -> Result<Literal, ShapeViolation> {
    let values: Vec<Literal> = g.objects(s, p).into_iter().filter_map(|o| o.as_literal().cloned()).collect();
    exactly_one(values, what)
}

/// Rebuild a record from its exported graph, checking the series shape.
pub fn import_record(g: &Graph) -> Result<RightExerciseRecord, ShapeViolation> {
    let records = g.instances_of(&iri(ns::dpv("RightExerciseRecord")));
    let record_node = match records.as_slice() {
        [one] => (*one).clone(),
        [] => return shape("no dpv:RightExerciseRecord"),
        _ => return shape("more than one dpv:RightExerciseRecord"),
    };
    let Some(record_iri) = record_node.as_iri().cloned() else {
        return shape("record must be an IRI");
    };
    let data_subject = exactly_one(iri_objects(g, &record_node, &iri(ns::dpv("hasDataSubject")))?, "dpv:hasDataSubject")?;
    let request_ids: BTreeSet<RequestId> = g
        .objects(&record_node, &iri(ns::gr("coversRequest")))
        .into_iter()
        .filter_map(Term::as_literal)
        .map(|l| RequestId(l.lexical().to_string()))
        .collect();

    let members: BTreeSet<Iri> = g
        .subjects(&iri(ns::dcat("inSeries")), &record_node)
        .into_iter()
        .map(|t| t.as_iri().cloned().ok_or_else(|| ShapeViolation("activities must be IRIs".into())))
        .collect::<Result<_, _>>()?;
    let first = at_most_one(iri_objects(g, &record_node, &iri(ns::dcat("first")))?, "dcat:first")?;
    let last = at_most_one(iri_objects(g, &record_node, &iri(ns::dcat("last")))?, "dcat:last")?;

    let mut record = RightExerciseRecord {
        id: record_iri,
        data_subject,
        request_ids,
        series: Vec::new(),
    };
    let (first, last) = match (first, last) {
        (None, None) if members.is_empty() => return Ok(record),
        (Some(f), Some(l)) => (f, l),
        _ => return shape("dcat:first and dcat:last must both be present for a non-empty series"),
    };

    // Walk prev links from last back to first.
    let mut chain = Vec::new();
    let mut seen = BTreeSet::new();
    let mut cursor = Some(last);
    while let Some(node) = cursor {
        if !seen.insert(node.clone()) {
            return shape(format!("dcat:prev cycle through {node}"));
        }
        if !members.contains(&node) {
            return shape(format!("{node} is linked but not in the series"));
        }
        let subject = Term::iri(&node);
        cursor = at_most_one(iri_objects(g, &subject, &iri(ns::dcat("prev")))?, "dcat:prev")?;
        chain.push(node);
    }
    if chain.last() != Some(&first) {
        return shape("dcat:prev chain from dcat:last does not end at dcat:first");
    }
    if chain.len() != members.len() {
        return shape(format!(
            "prev chain visits {} of {} activities",
            chain.len(),
            members.len()
        ));
    }
    chain.reverse();

    for (i, id) in chain.iter().enumerate() {
        let s = Term::iri(id);
        let at = single_literal(g, &s, &iri(ns::dct("issued")), "dct:issued")?
            .as_timestamp()
            .ok_or_else(|| ShapeViolation(format!("{id}: dct:issued is not an xsd:dateTime")))?;
        let status_iri = exactly_one(iri_objects(g, &s, &iri(ns::dpv("hasStatus")))?, "dpv:hasStatus")?;
        let status_after = RequestStatus::from_concept(&status_iri)
            .ok_or_else(|| ShapeViolation(format!("{id}: unknown status {status_iri}")))?;
        let request_id = RequestId(single_literal(g, &s, &iri(ns::gr("forRequest")), "gr:forRequest")?.lexical().to_string());
        if !record.request_ids.contains(&request_id) {
            return shape(format!("{id}: request {request_id} not covered by the record"));
        }
        let associated_entities: BTreeSet<Iri> = iri_objects(g, &s, &iri(ns::prov("wasAssociatedWith")))?.into_iter().collect();
        if associated_entities.is_empty() {
            return shape(format!("{id}: missing prov:wasAssociatedWith"));
        }
        let generated_artifacts = iri_objects(g, &s, &iri(ns::prov("generated")))?.into_iter().collect();
        if let Some(prev) = record.series.last() {
            if at < prev.at {
                return shape(format!("{id}: timestamp earlier than its predecessor"));
            }
        }
        record.series.push(RightExerciseActivity {
            id: id.clone(),
            request_id,
            at,
            status_after,
            associated_entities,
            generated_artifacts,
            prev: (i > 0).then(|| chain[i - 1].clone()),
        });
    }
    Ok(record)
}
