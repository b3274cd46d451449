//! Typed notices: where and how to exercise a right, status updates on a
//! request, fulfilment and non-fulfilment notices, and the GDPR-specific
//! collection, access-request and recipient notices.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{iri, Graph, Iri, Literal, Term};
use crate::lifecycle::{RequestStatus, RightsRequest};
use crate::vocab::VocabDataset;
use crate::{mint_iri, ns, Timestamp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NoticeKind {
    RightExerciseNotice,
    RightFulfilmentNotice,
    RightNonFulfilmentNotice,
    DirectDataCollectionNotice,
    IndirectDataCollectionNotice,
    SubjectAccessRequestNotice,
    RecipientNotice,
}

impl NoticeKind {
    pub const ALL: [NoticeKind; 7] = [
        NoticeKind::RightExerciseNotice,
        NoticeKind::RightFulfilmentNotice,
        NoticeKind::RightNonFulfilmentNotice,
        NoticeKind::DirectDataCollectionNotice,
        NoticeKind::IndirectDataCollectionNotice,
        NoticeKind::SubjectAccessRequestNotice,
        NoticeKind::RecipientNotice,
    ];

    /// Class IRI the notice is typed with.
    pub fn concept(self) -> Iri {
        match self {
            NoticeKind::RightExerciseNotice
            | NoticeKind::RightFulfilmentNotice
            | NoticeKind::RightNonFulfilmentNotice => iri(ns::dpv(&self.to_string())),
            _ => iri(ns::eu_gdpr(&self.to_string())),
        }
    }

    pub fn from_concept(concept: &Iri) -> Option<Self> {
        Self::ALL.into_iter().find(|k| &k.concept() == concept)
    }
}

impl fmt::Display for NoticeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NoticeError {
    #[error("unknown right {0}")]
    UnknownRight(Iri),
    #[error("{kind} notice is missing {field}")]
    MissingField { kind: NoticeKind, field: &'static str },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Notice {
    pub id: Iri,
    pub kind: NoticeKind,
    pub controller: Iri,
    pub implementing_entity: Iri,
    pub recipient: Option<Iri>,
    /// Parties notified of a rectification, erasure or restriction
    /// (recipient notices only).
    pub notified_recipients: BTreeSet<Iri>,
    pub issued: Timestamp,
    pub status: Option<RequestStatus>,
    pub justification: Option<Iri>,
    pub right: Option<Iri>,
    pub exercise_point: Option<Iri>,
    pub required_info_process: Option<Iri>,
    pub attached_duty: Option<Iri>,
}

impl Notice {
    /// Fresh notice id in the controller's namespace.
    pub fn mint_id(controller: &Iri) -> Iri {
        mint_iri(controller, &["notices", &uuid::Uuid::new_v4().to_string()])
    }

    /// Start a notice with the fields every kind needs.
    pub fn builder(id: Iri, kind: NoticeKind, controller: Iri, implementing_entity: Iri, issued: Timestamp) -> NoticeBuilder {
        NoticeBuilder(Notice {
            id,
            kind,
            controller,
            implementing_entity,
            recipient: None,
            notified_recipients: BTreeSet::new(),
            issued,
            status: None,
            justification: None,
            right: None,
            exercise_point: None,
            required_info_process: None,
            attached_duty: None,
        })
    }

    /// Kind-specific invariants.
    pub fn check(&self) -> Result<(), NoticeError> {
        let missing = |field| Err(NoticeError::MissingField { kind: self.kind, field });
        match self.kind {
            NoticeKind::RightNonFulfilmentNotice if self.justification.is_none() => missing("justification"),
            NoticeKind::RightExerciseNotice if self.right.is_none() => missing("right"),
            NoticeKind::RightExerciseNotice if self.exercise_point.is_none() => missing("exercise point"),
            NoticeKind::RecipientNotice if self.notified_recipients.is_empty() => missing("notified recipients"),
            _ => Ok(()),
        }
    }
}

pub struct NoticeBuilder(Notice);

impl NoticeBuilder {
    pub fn recipient(mut self, recipient: Iri) -> Self {
        self.0.recipient = Some(recipient);
        self
    }

    pub fn notified_recipient(mut self, recipient: Iri) -> Self {
        self.0.notified_recipients.insert(recipient);
        self
    }

    pub fn status(mut self, status: RequestStatus) -> Self {
        self.0.status = Some(status);
        self
    }

    pub fn justification(mut self, justification: Option<Iri>) -> Self {
        self.0.justification = justification;
        self
    }

    pub fn right(mut self, right: Iri) -> Self {
        self.0.right = Some(right);
        self
    }

    pub fn exercise_point(mut self, point: Iri) -> Self {
        self.0.exercise_point = Some(point);
        self
    }

    pub fn required_info_process(mut self, process: Iri) -> Self {
        self.0.required_info_process = Some(process);
        self
    }

    pub fn attached_duty(mut self, policy: Iri) -> Self {
        self.0.attached_duty = Some(policy);
        self
    }

    pub fn build(self) -> Result<Notice, NoticeError> {
        self.0.check()?;
        Ok(self.0)
    }
}

/// Notice telling data subjects where to exercise `right` and which process
/// describes the information they need to supply.
pub fn build_exercise_notice(
    right: &Iri,
    exercise_point: Iri,
    required_info: Iri,
    controller: Iri,
    implementer: Iri,
    at: Timestamp,
    ds: &VocabDataset,
) -> Result<Notice, NoticeError> {
    if ds.right(right).is_none() {
        return Err(NoticeError::UnknownRight(right.clone()));
    }
    let id = Notice::mint_id(&controller);
    Notice::builder(id, NoticeKind::RightExerciseNotice, controller, implementer, at)
        .right(right.clone())
        .exercise_point(exercise_point)
        .required_info_process(required_info)
        .build()
}

/// Status update for `r`, with a freshly minted id.
pub fn build_status_notice(r: &RightsRequest, at: Timestamp) -> Notice {
    build_status_notice_with_id(r, at, Notice::mint_id(r.controller()))
}

/// Status update for `r`. The kind follows the status: fulfilment and
/// non-fulfilment notices for the terminal states, an exercise notice
/// (pointing at the request itself) otherwise. The justification of the
/// latest history entry is carried over.
pub fn build_status_notice_with_id(r: &RightsRequest, at: Timestamp, id: Iri) -> Notice {
    let kind = match r.status() {
        RequestStatus::Fulfilled => NoticeKind::RightFulfilmentNotice,
        RequestStatus::Rejected => NoticeKind::RightNonFulfilmentNotice,
        _ => NoticeKind::RightExerciseNotice,
    };
    let mut builder = Notice::builder(id, kind, r.controller().clone(), r.controller().clone(), at)
        .recipient(r.data_subject().clone())
        .status(r.status())
        .right(r.right().clone())
        .justification(r.last_event().justification.clone());
    if kind == NoticeKind::RightExerciseNotice {
        builder = builder.exercise_point(r.iri());
    }
    builder
        .build()
        .expect("lifecycle guarantees a justification on rejection")
}

/// Export a notice as a graph.
pub fn export_notice(n: &Notice) -> Graph {
    let mut g = Graph::new();
    let s = Term::iri(&n.id);
    let p = |local: &str| iri(ns::dpv(local));
    g.add(&s, &iri(ns::RDF_TYPE), n.kind.concept());
    g.add(&s, &p("hasDataController"), n.controller.clone());
    g.add(&s, &p("isImplementedByEntity"), n.implementing_entity.clone());
    g.add(&s, &iri(ns::dct("issued")), Literal::date_time(&n.issued));
    if let Some(r) = &n.recipient {
        g.add(&s, &p("hasRecipient"), r.clone());
    }
    for r in &n.notified_recipients {
        g.add(&s, &iri(ns::gr("notifiedRecipient")), r.clone());
    }
    if let Some(status) = n.status {
        g.add(&s, &p("hasStatus"), status.concept());
    }
    if let Some(j) = &n.justification {
        g.add(&s, &p("hasJustification"), j.clone());
    }
    if let Some(r) = &n.right {
        g.add(&s, &p("hasRight"), r.clone());
    }
    if let Some(point) = &n.exercise_point {
        g.add(&s, &p("isExercisedAt"), point.clone());
    }
    if let Some(process) = &n.required_info_process {
        g.add(&s, &p("hasProcess"), process.clone());
    }
    if let Some(policy) = &n.attached_duty {
        g.add(&s, &iri(ns::odrl("hasPolicy")), policy.clone());
    }
    g
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ViolationKind {
    UnknownKind,
    AmbiguousKind,
    MissingController,
    MissingImplementingEntity,
    MissingIssued,
    MissingJustification,
    MissingRight,
    MissingExercisePoint,
    MissingNotifiedRecipients,
    DanglingRight,
    UnknownJustification,
    UnknownStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub notice: String,
    pub kind: ViolationKind,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub notices_checked: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

fn looks_like_notice(g: &Graph, subject: &Term) -> bool {
    let issued = iri(ns::dct("issued"));
    !g.objects(subject, &issued).is_empty()
        || g.objects(subject, &iri(ns::RDF_TYPE))
            .into_iter()
            .filter_map(Term::as_iri)
            .any(|c| NoticeKind::from_concept(c).is_some() || c.local_name().ends_with("Notice"))
}

/// Check every notice in `g` against the structural rules. Problems are
/// reported, never raised.
pub fn validate_notice(g: &Graph, ds: &VocabDataset) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut subjects: BTreeSet<&Term> = BTreeSet::new();
    for t in g.iter() {
        subjects.insert(t.subject());
    }
    let p = |local: &str| iri(ns::dpv(local));
    for subject in subjects.into_iter().filter(|s| looks_like_notice(g, s)) {
        report.notices_checked += 1;
        let name = match subject {
            Term::Iri(i) => i.to_string(),
            other => format!("{other:?}"),
        };
        let mut flag = |kind, detail: String| {
            report.violations.push(Violation {
                notice: name.clone(),
                kind,
                detail,
            })
        };
        let has = |pred: &Iri| !g.objects(subject, pred).is_empty();

        let kinds: Vec<NoticeKind> = g
            .objects(subject, &iri(ns::RDF_TYPE))
            .into_iter()
            .filter_map(Term::as_iri)
            .filter_map(NoticeKind::from_concept)
            .collect();
        let kind = match kinds.as_slice() {
            [k] => Some(*k),
            [] => {
                flag(ViolationKind::UnknownKind, "not typed with a known notice kind".into());
                None
            }
            _ => {
                flag(ViolationKind::AmbiguousKind, format!("typed with several notice kinds: {kinds:?}"));
                None
            }
        };
        if !has(&p("hasDataController")) {
            flag(ViolationKind::MissingController, "no dpv:hasDataController".into());
        }
        if !has(&p("isImplementedByEntity")) {
            flag(ViolationKind::MissingImplementingEntity, "no dpv:isImplementedByEntity".into());
        }
        let issued_ok = g
            .objects(subject, &iri(ns::dct("issued")))
            .into_iter()
            .any(|o| o.as_literal().and_then(Literal::as_timestamp).is_some());
        if !issued_ok {
            flag(ViolationKind::MissingIssued, "no xsd:dateTime dct:issued".into());
        }
        match kind {
            Some(NoticeKind::RightNonFulfilmentNotice) if !has(&p("hasJustification")) => {
                flag(ViolationKind::MissingJustification, "non-fulfilment without justification".into())
            }
            Some(NoticeKind::RightExerciseNotice) => {
                if !has(&p("hasRight")) {
                    flag(ViolationKind::MissingRight, "exercise notice without dpv:hasRight".into());
                }
                if !has(&p("isExercisedAt")) {
                    flag(ViolationKind::MissingExercisePoint, "exercise notice without dpv:isExercisedAt".into());
                }
            }
            Some(NoticeKind::RecipientNotice) if !has(&iri(ns::gr("notifiedRecipient"))) => flag(
                ViolationKind::MissingNotifiedRecipients,
                "recipient notice lists no notified recipients".into(),
            ),
            _ => {}
        }
        for right in g.objects(subject, &p("hasRight")) {
            if right.as_iri().and_then(|r| ds.right(r)).is_none() {
                flag(ViolationKind::DanglingRight, format!("{right:?} is not a registered right"));
            }
        }
        for j in g.objects(subject, &p("hasJustification")) {
            if j.as_iri().and_then(|j| ds.justification(j)).is_none() {
                flag(ViolationKind::UnknownJustification, format!("{j:?} is not a known justification"));
            }
        }
        for s in g.objects(subject, &p("hasStatus")) {
            if s.as_iri().and_then(RequestStatus::from_concept).is_none() {
                flag(ViolationKind::UnknownStatus, format!("{s:?} is not a request status"));
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{parse_turtle, serialize_turtle};
    use crate::lifecycle::{submit_request, LifecycleEvent};
    use chrono::{TimeZone, Utc};

    fn who(s: &str) -> Iri {
        iri(format!("https://ctrl.example/{s}"))
    }

    fn at(day: u32) -> Timestamp {
        Utc.with_ymd_and_hms(2024, 3, day, 10, 0, 0).unwrap()
    }

    #[test]
    fn exercise_notice() {
        let ds = VocabDataset::seed();
        let n = build_exercise_notice(
            &iri(ns::eu_gdpr("A15")),
            iri("https://ctrl.example/rights"),
            who("info-process"),
            who("ctrl"),
            who("ctrl"),
            at(1),
            &ds,
        )
        .unwrap();
        assert_eq!(n.kind, NoticeKind::RightExerciseNotice);
        assert!(n.id.as_str().starts_with("https://ctrl.example/ctrl/notices/"));
        let report = validate_notice(&export_notice(&n), &ds);
        assert!(report.is_valid(), "{report:?}");

        let err = build_exercise_notice(&who("nope"), who("x"), who("p"), who("ctrl"), who("ctrl"), at(1), &ds);
        assert_eq!(err, Err(NoticeError::UnknownRight(who("nope"))));
    }

    #[test]
    fn exercise_notice_requires_point() {
        let err = Notice::builder(who("n1"), NoticeKind::RightExerciseNotice, who("ctrl"), who("ctrl"), at(1))
            .right(iri(ns::eu_gdpr("A15")))
            .build();
        assert_eq!(
            err,
            Err(NoticeError::MissingField { kind: NoticeKind::RightExerciseNotice, field: "exercise point" })
        );
    }

    #[test]
    fn status_notices_follow_request() {
        let ds = VocabDataset::seed();
        let r = submit_request(who("alice"), who("ctrl"), iri(ns::eu_gdpr("A15")), at(1), &ds, &[]).unwrap();
        let acked = r.apply(LifecycleEvent::Acknowledge, at(2), who("ctrl"), None).unwrap();

        let more_info = ds.justification_named("AdditionalInformationRequired").unwrap();
        let waiting = acked.apply(LifecycleEvent::RequireAction, at(3), who("ctrl"), Some(more_info)).unwrap();
        let n = build_status_notice(&waiting, at(3));
        assert_eq!(n.kind, NoticeKind::RightExerciseNotice);
        assert_eq!(n.status, Some(RequestStatus::RequiresAction));
        assert_eq!(n.justification.as_ref(), Some(&more_info.iri));

        let excessive = ds.justification_named("RequestExcessive").unwrap();
        let rejected = acked.apply(LifecycleEvent::Reject, at(3), who("ctrl"), Some(excessive)).unwrap();
        let n = build_status_notice(&rejected, at(3));
        assert_eq!(n.kind, NoticeKind::RightNonFulfilmentNotice);
        assert_eq!(n.justification.as_ref(), Some(&excessive.iri));
        assert!(validate_notice(&export_notice(&n), &ds).is_valid());

        let fulfilled = acked
            .verify_identity(true, at(3), who("ctrl"), &ds)
            .unwrap()
            .apply(LifecycleEvent::Accept, at(4), who("ctrl"), None)
            .unwrap()
            .apply(LifecycleEvent::Fulfil, at(5), who("ctrl"), None)
            .unwrap();
        let n = build_status_notice(&fulfilled, at(5));
        assert_eq!(n.kind, NoticeKind::RightFulfilmentNotice);
        assert_eq!(n.justification, None);
        assert!(validate_notice(&export_notice(&n), &ds).is_valid());
    }

    #[test]
    fn minimal_fulfilment_notice_has_six_triples() {
        let n = Notice::builder(who("n1"), NoticeKind::RightFulfilmentNotice, who("ctrl"), who("dpo"), at(1))
            .recipient(who("alice"))
            .status(RequestStatus::Fulfilled)
            .build()
            .unwrap();
        let g = export_notice(&n);
        assert_eq!(g.len(), 6);
        let expected = "\
<https://ctrl.example/n1> a dpv:RightFulfilmentNotice ;
    dct:issued \"2024-03-01T10:00:00Z\"^^xsd:dateTime ;
    dpv:hasDataController <https://ctrl.example/ctrl> ;
    dpv:hasRecipient <https://ctrl.example/alice> ;
    dpv:hasStatus dpv:RequestFulfilled ;
    dpv:isImplementedByEntity <https://ctrl.example/dpo> .
";
        let text = serialize_turtle(&g);
        assert!(text.ends_with(expected), "{text}");
    }

    #[test]
    fn attached_duty_links_policy() {
        let n = Notice::builder(who("n2"), NoticeKind::SubjectAccessRequestNotice, who("ctrl"), who("ctrl"), at(1))
            .recipient(who("alice"))
            .attached_duty(who("policies/payment-terms"))
            .build()
            .unwrap();
        let g = export_notice(&n);
        let links = g.matching(Some(&Term::iri(&n.id)), Some(&iri(ns::odrl("hasPolicy"))), None);
        assert_eq!(links.len(), 1);
        assert_eq!(links[0].object(), &Term::iri(&who("policies/payment-terms")));
    }

    #[test]
    fn recipient_notice_needs_recipients() {
        let base = || Notice::builder(who("n3"), NoticeKind::RecipientNotice, who("ctrl"), who("ctrl"), at(1));
        assert!(base().build().is_err());
        let n = base().notified_recipient(who("processor-a")).notified_recipient(who("processor-b")).build().unwrap();
        let g = export_notice(&n);
        assert_eq!(g.matching(None, Some(&iri(ns::gr("notifiedRecipient"))), None).len(), 2);
    }

    #[test]
    fn validation_findings() {
        let ds = VocabDataset::seed();
        let prefixes = "@prefix dpv: <https://w3id.org/dpv#> .\n\
                        @prefix dct: <http://purl.org/dc/terms/> .\n\
                        @prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n\
                        @prefix ex: <https://ex.org/> .\n";
        let common = "dpv:hasDataController ex:ctrl ; dpv:isImplementedByEntity ex:ctrl ; \
                      dct:issued \"2024-03-01T10:00:00Z\"^^xsd:dateTime ; dpv:hasRecipient ex:alice";

        let doc = format!("{prefixes}ex:n a dpv:RightNonFulfilmentNotice ; {common} ; dpv:hasStatus dpv:RequestRejected .");
        let report = validate_notice(&parse_turtle(&doc).unwrap(), &ds);
        assert_eq!(report.violations.len(), 1, "{report:?}");
        assert_eq!(report.violations[0].kind, ViolationKind::MissingJustification);

        let doc = format!("{prefixes}ex:n a dpv:MadeUpNotice ; {common} .");
        let report = validate_notice(&parse_turtle(&doc).unwrap(), &ds);
        assert_eq!(report.violations.len(), 1, "{report:?}");
        assert_eq!(report.violations[0].kind, ViolationKind::UnknownKind);

        let doc = format!("{prefixes}ex:n a dpv:RightFulfilmentNotice ; dpv:hasRight ex:A99 ; dct:issued \"x\" .");
        let kinds: Vec<_> = validate_notice(&parse_turtle(&doc).unwrap(), &ds)
            .violations
            .into_iter()
            .map(|v| v.kind)
            .collect();
        assert_eq!(
            kinds,
            vec![
                ViolationKind::MissingController,
                ViolationKind::MissingImplementingEntity,
                ViolationKind::MissingIssued,
                ViolationKind::DanglingRight
            ]
        );
    }
}
