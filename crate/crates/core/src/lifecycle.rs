//! Rights-request lifecycle: the status state machine, statutory deadlines,
//! the one-off extension, and breach detection.
//!
//! A request starts in [`RequestStatus::Initiated`] with a deadline one
//! calendar month after submission. The controller acknowledges it, verifies
//! the requester's identity, and then accepts (and later fulfils) or rejects
//! it, possibly asking the requester for more information along the way.
//! A single extension moves the deadline to three months after submission.
//! Once the deadline has passed without a terminal decision the request is in
//! breach.

use std::fmt;

use chrono::Months;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{iri, Iri};
use crate::vocab::{Justification, JustificationCategory, ProcessSpec, VocabDataset};
use crate::{ns, Timestamp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RequestStatus {
    Initiated,
    Acknowledged,
    RequiresAction,
    ActionDelayed,
    Accepted,
    Rejected,
    Fulfilled,
}

impl RequestStatus {
    pub const ALL: [RequestStatus; 7] = [
        RequestStatus::Initiated,
        RequestStatus::Acknowledged,
        RequestStatus::RequiresAction,
        RequestStatus::ActionDelayed,
        RequestStatus::Accepted,
        RequestStatus::Rejected,
        RequestStatus::Fulfilled,
    ];

    pub fn is_terminal(self) -> bool {
        matches!(self, RequestStatus::Rejected | RequestStatus::Fulfilled)
    }

    /// DPV request-status concept, e.g. `dpv:RequestAccepted`.
    pub fn concept(self) -> Iri {
        iri(ns::dpv(&format!("Request{self}")))
    }

    pub fn from_concept(concept: &Iri) -> Option<Self> {
        Self::ALL.into_iter().find(|s| &s.concept() == concept)
    }

    /// Events the transition table accepts from this status.
    pub fn legal_events(self) -> Vec<LifecycleEvent> {
        LifecycleEvent::ALL
            .into_iter()
            .filter(|e| transition(self, *e).is_ok())
            .collect()
    }
}

impl fmt::Display for RequestStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl std::str::FromStr for RequestStatus {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|st| st.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown request status {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LifecycleEvent {
    Acknowledge,
    Accept,
    Reject,
    RequireAction,
    ActionResponse,
    DelayAction,
    Fulfil,
}

impl LifecycleEvent {
    pub const ALL: [LifecycleEvent; 7] = [
        LifecycleEvent::Acknowledge,
        LifecycleEvent::Accept,
        LifecycleEvent::Reject,
        LifecycleEvent::RequireAction,
        LifecycleEvent::ActionResponse,
        LifecycleEvent::DelayAction,
        LifecycleEvent::Fulfil,
    ];

    /// Kebab-case name used on the wire (`require-action`).
    pub fn name(self) -> &'static str {
        match self {
            LifecycleEvent::Acknowledge => "acknowledge",
            LifecycleEvent::Accept => "accept",
            LifecycleEvent::Reject => "reject",
            LifecycleEvent::RequireAction => "require-action",
            LifecycleEvent::ActionResponse => "action-response",
            LifecycleEvent::DelayAction => "delay-action",
            LifecycleEvent::Fulfil => "fulfil",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.name() == name)
    }

    /// Categories a justification must belong to for this event, and whether
    /// one is mandatory.
    fn justification_rule(self) -> Option<&'static [JustificationCategory]> {
        use JustificationCategory::*;
        match self {
            LifecycleEvent::Reject => Some(&[NonFulfilment]),
            LifecycleEvent::RequireAction | LifecycleEvent::DelayAction => Some(&[Delay, Exercise]),
            _ => None,
        }
    }
}

impl fmt::Display for LifecycleEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LifecycleError {
    #[error("event {event} is not allowed in status {from}")]
    InvalidTransition { from: RequestStatus, event: LifecycleEvent },
    #[error("identity of the data subject has not been verified")]
    IdentityNotVerified,
    #[error("right {0} is a controller duty and cannot be requested")]
    RightNotExercisable(Iri),
    #[error("right {0} does not apply to the controller's processing")]
    RightNotApplicable(Iri),
    #[error("unknown right {0}")]
    UnknownRight(Iri),
    #[error("the deadline extension has already been applied")]
    ExtensionAlreadyApplied,
    #[error("request is in terminal status {0}")]
    TerminalState(RequestStatus),
    #[error("event {event} requires a justification")]
    MissingJustification { event: String },
    #[error("justification {justification} is {found}, expected one of {expected:?}")]
    WrongJustificationCategory {
        justification: Iri,
        found: JustificationCategory,
        expected: Vec<JustificationCategory>,
    },
    #[error("unknown justification {0}")]
    UnknownJustification(String),
    #[error("timestamp {at} is not after the previous history entry ({previous})")]
    NonMonotonicTimestamp { at: Timestamp, previous: Timestamp },
}

/// The transition table.
pub fn transition(current: RequestStatus, event: LifecycleEvent) -> Result<RequestStatus, LifecycleError> {
    use LifecycleEvent::*;
    use RequestStatus::*;
    let next = match (current, event) {
        (Initiated, Acknowledge) => Acknowledged,
        (Acknowledged, Accept) => Accepted,
        (Acknowledged, Reject) => Rejected,
        (Acknowledged, RequireAction) => RequiresAction,
        (RequiresAction, ActionResponse) => Acknowledged,
        (RequiresAction, DelayAction) => ActionDelayed,
        (ActionDelayed, ActionResponse) => Acknowledged,
        (Accepted, Fulfil) => Fulfilled,
        (Accepted, Reject) => Rejected,
        (from, event) => return Err(LifecycleError::InvalidTransition { from, event }),
    };
    Ok(next)
}

/// Calendar-month addition: same day of month, clamped to the last day of
/// the target month (Jan 31 + 1 month = Feb 28/29). Time of day is kept.
pub fn add_calendar_months(t: Timestamp, months: u32) -> Timestamp {
    t.checked_add_months(Months::new(months))
        .expect("deadline arithmetic stays within chrono's range")
}

/// Opaque request identifier.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RequestId(pub String);

impl RequestId {
    pub fn generate() -> Self {
        RequestId(uuid::Uuid::new_v4().to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for RequestId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// What produced a history entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HistoryKind {
    Submitted,
    Transition(LifecycleEvent),
    IdentityVerified,
    ExtensionApplied,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionEvent {
    pub kind: HistoryKind,
    pub from_status: RequestStatus,
    pub to_status: RequestStatus,
    pub at: Timestamp,
    pub actor: Iri,
    pub justification: Option<Iri>,
    pub notice_id: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BreachReport {
    pub request_id: RequestId,
    pub deadline: Timestamp,
    pub detected_at: Timestamp,
    pub status_at_detection: RequestStatus,
}

/// One data subject's exercise of one right against one controller.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RightsRequest {
    id: RequestId,
    data_subject: Iri,
    controller: Iri,
    right: Iri,
    submitted_at: Timestamp,
    status: RequestStatus,
    identity_verified: bool,
    deadline: Timestamp,
    extension_applied: bool,
    history: Vec<TransitionEvent>,
}

/// Open a new request (see [`RightsRequest::submit_with_id`]).
pub fn submit_request(
    data_subject: Iri,
    controller: Iri,
    right: Iri,
    at: Timestamp,
    ds: &VocabDataset,
    processes: &[ProcessSpec],
) -> Result<RightsRequest, LifecycleError> {
    RightsRequest::submit_with_id(RequestId::generate(), data_subject, controller, right, at, ds, processes)
}

impl RightsRequest {
    /// Open a request in `Initiated` with a one-month deadline.
    ///
    /// When `processes` contains processes of `controller`, the right must be
    /// applicable to at least one of them.
    pub fn submit_with_id(
        id: RequestId,
        data_subject: Iri,
        controller: Iri,
        right: Iri,
        at: Timestamp,
        ds: &VocabDataset,
        processes: &[ProcessSpec],
    ) -> Result<RightsRequest, LifecycleError> {
        let Some(registered) = ds.right(&right) else {
            return Err(LifecycleError::UnknownRight(right));
        };
        if !registered.exercisable_by_request {
            return Err(LifecycleError::RightNotExercisable(right));
        }
        let mut declared = processes.iter().filter(|p| p.controller == controller).peekable();
        if declared.peek().is_some() && !declared.any(|p| p.applicable_rights.contains(&right)) {
            return Err(LifecycleError::RightNotApplicable(right));
        }
        Ok(RightsRequest {
            id,
            history: vec![TransitionEvent {
                kind: HistoryKind::Submitted,
                from_status: RequestStatus::Initiated,
                to_status: RequestStatus::Initiated,
                at,
                actor: data_subject.clone(),
                justification: None,
                notice_id: None,
            }],
            data_subject,
            controller,
            right,
            submitted_at: at,
            status: RequestStatus::Initiated,
            identity_verified: false,
            deadline: add_calendar_months(at, 1),
            extension_applied: false,
        })
    }

    pub fn id(&self) -> &RequestId {
        &self.id
    }

    pub fn data_subject(&self) -> &Iri {
        &self.data_subject
    }

    pub fn controller(&self) -> &Iri {
        &self.controller
    }

    pub fn right(&self) -> &Iri {
        &self.right
    }

    pub fn submitted_at(&self) -> Timestamp {
        self.submitted_at
    }

    pub fn status(&self) -> RequestStatus {
        self.status
    }

    pub fn identity_verified(&self) -> bool {
        self.identity_verified
    }

    pub fn deadline(&self) -> Timestamp {
        self.deadline
    }

    pub fn extension_applied(&self) -> bool {
        self.extension_applied
    }

    pub fn history(&self) -> &[TransitionEvent] {
        &self.history
    }

    pub fn last_event(&self) -> &TransitionEvent {
        self.history.last().expect("history always holds the submission")
    }

    /// Controller-namespace IRI of this request.
    pub fn iri(&self) -> Iri {
        crate::mint_iri(&self.controller, &["requests", self.id.as_str()])
    }

    fn check_time(&self, at: Timestamp) -> Result<(), LifecycleError> {
        let previous = self.last_event().at;
        if at <= previous {
            return Err(LifecycleError::NonMonotonicTimestamp { at, previous });
        }
        Ok(())
    }

    fn push(&self, event: TransitionEvent) -> RightsRequest {
        let mut next = self.clone();
        next.status = event.to_status;
        next.history.push(event);
        next
    }

    /// Apply a lifecycle event, returning the updated request.
    pub fn apply(
        &self,
        event: LifecycleEvent,
        at: Timestamp,
        actor: Iri,
        justification: Option<&Justification>,
    ) -> Result<RightsRequest, LifecycleError> {
        let to = transition(self.status, event)?;
        if event == LifecycleEvent::Accept && !self.identity_verified {
            return Err(LifecycleError::IdentityNotVerified);
        }
        if let Some(expected) = event.justification_rule() {
            let Some(j) = justification else {
                return Err(LifecycleError::MissingJustification {
                    event: event.name().to_string(),
                });
            };
            if !expected.contains(&j.category) {
                return Err(LifecycleError::WrongJustificationCategory {
                    justification: j.iri.clone(),
                    found: j.category,
                    expected: expected.to_vec(),
                });
            }
        }
        self.check_time(at)?;
        Ok(self.push(TransitionEvent {
            kind: HistoryKind::Transition(event),
            from_status: self.status,
            to_status: to,
            at,
            actor,
            justification: justification.map(|j| j.iri.clone()),
            notice_id: None,
        }))
    }

    /// Grant the one-off extension: deadline becomes submission + 3 months.
    pub fn apply_extension(
        &self,
        justification: &Justification,
        at: Timestamp,
        actor: Iri,
    ) -> Result<RightsRequest, LifecycleError> {
        if self.status.is_terminal() {
            return Err(LifecycleError::TerminalState(self.status));
        }
        if self.extension_applied {
            return Err(LifecycleError::ExtensionAlreadyApplied);
        }
        if justification.category != JustificationCategory::Delay {
            return Err(LifecycleError::WrongJustificationCategory {
                justification: justification.iri.clone(),
                found: justification.category,
                expected: vec![JustificationCategory::Delay],
            });
        }
        self.check_time(at)?;
        let mut next = self.push(TransitionEvent {
            kind: HistoryKind::ExtensionApplied,
            from_status: self.status,
            to_status: self.status,
            at,
            actor,
            justification: Some(justification.iri.clone()),
            notice_id: None,
        });
        next.extension_applied = true;
        next.deadline = add_calendar_months(self.submitted_at, 3);
        Ok(next)
    }

    /// Record the outcome of an identity check. A failed check moves the
    /// request to `RequiresAction` with `IdentityVerificationRequired`.
    pub fn verify_identity(
        &self,
        outcome: bool,
        at: Timestamp,
        actor: Iri,
        ds: &VocabDataset,
    ) -> Result<RightsRequest, LifecycleError> {
        if self.status != RequestStatus::Acknowledged {
            return Err(LifecycleError::InvalidTransition {
                from: self.status,
                event: LifecycleEvent::RequireAction,
            });
        }
        if !outcome {
            let j = ds
                .justification_named("IdentityVerificationRequired")
                .ok_or_else(|| LifecycleError::UnknownJustification("IdentityVerificationRequired".into()))?;
            return self.apply(LifecycleEvent::RequireAction, at, actor, Some(j));
        }
        self.check_time(at)?;
        let mut next = self.push(TransitionEvent {
            kind: HistoryKind::IdentityVerified,
            from_status: self.status,
            to_status: self.status,
            at,
            actor,
            justification: None,
            notice_id: None,
        });
        next.identity_verified = true;
        Ok(next)
    }

    /// Attach a notice id to the latest history entry.
    pub fn with_last_notice(mut self, notice_id: impl Into<String>) -> RightsRequest {
        if let Some(last) = self.history.last_mut() {
            last.notice_id = Some(notice_id.into());
        }
        self
    }

    /// A report iff `now` is strictly after the deadline and the request has
    /// not reached a terminal status.
    pub fn check_breach(&self, now: Timestamp) -> Option<BreachReport> {
        (now > self.deadline && !self.status.is_terminal()).then(|| BreachReport {
            request_id: self.id.clone(),
            deadline: self.deadline,
            detected_at: now,
            status_at_detection: self.status,
        })
    }
}

/// Replay a history through [`transition`], returning the final status.
pub fn replay_status(history: &[TransitionEvent]) -> Result<RequestStatus, LifecycleError> {
    let mut status = RequestStatus::Initiated;
    for entry in history {
        if let HistoryKind::Transition(event) = entry.kind {
            status = transition(status, event)?;
        }
    }
    Ok(status)
}
