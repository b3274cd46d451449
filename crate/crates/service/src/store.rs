//! Request store: requests, policies, records and notices rebuilt from the
//! journal.
//!
//! A mutation is planned against the current state without touching it,
//! written to the journal, and only then committed. Replay runs the same
//! planning code on journaled entries, so a restarted store is identical to
//! the one that wrote the journal.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use anyhow::Context;
use rights_core::graph::{parse_turtle, serialize_turtle, Graph, Iri, TurtleError};
use rights_core::lifecycle::{LifecycleError, LifecycleEvent, RequestId, RequestStatus, RightsRequest};
use rights_core::notices::{build_status_notice_with_id, export_notice, Notice};
use rights_core::policy::{
    evaluate_policy, export_policy, import_policy, template_rights, ActionEvent, RequestPolicy, RuleKind, Verdict,
};
use rights_core::records::{export_record, subject_key, RightExerciseActivity, RightExerciseRecord};
use rights_core::vocab::{ProcessSpec, VocabDataset};
use rights_core::{format_timestamp, parse_timestamp, Timestamp};
use thiserror::Error;

use crate::clock::Clock;
use crate::config::{ClockMode, ServiceConfig};
use crate::journal::{Journal, JournalEntry};

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{0}")]
    NotFound(String),
    #[error("{message}")]
    BadRequest {
        message: String,
        line: Option<usize>,
        column: Option<usize>,
    },
    #[error("{0}")]
    Conflict(String),
    #[error("{0}")]
    Unprocessable(String),
    #[error(transparent)]
    Internal(#[from] anyhow::Error),
}

impl StoreError {
    fn bad(message: impl Into<String>) -> Self {
        StoreError::BadRequest {
            message: message.into(),
            line: None,
            column: None,
        }
    }
}

impl From<TurtleError> for StoreError {
    fn from(e: TurtleError) -> Self {
        let (line, column) = e.position();
        StoreError::BadRequest {
            message: e.to_string(),
            line: Some(line),
            column: Some(column),
        }
    }
}

impl From<LifecycleError> for StoreError {
    fn from(e: LifecycleError) -> Self {
        match e {
            LifecycleError::InvalidTransition { .. }
            | LifecycleError::IdentityNotVerified
            | LifecycleError::ExtensionAlreadyApplied
            | LifecycleError::TerminalState(_)
            | LifecycleError::NonMonotonicTimestamp { .. } => StoreError::Conflict(e.to_string()),
            LifecycleError::RightNotExercisable(_)
            | LifecycleError::RightNotApplicable(_)
            | LifecycleError::UnknownRight(_)
            | LifecycleError::MissingJustification { .. }
            | LifecycleError::WrongJustificationCategory { .. }
            | LifecycleError::UnknownJustification(_) => StoreError::Unprocessable(e.to_string()),
        }
    }
}

/// Controller decisions exposed as `POST /requests/{id}/{action}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Action {
    Acknowledge,
    VerifyIdentity,
    Accept,
    Reject,
    RequireAction,
    ActionResponse,
    DelayAction,
    Extend,
    Fulfil,
}

impl Action {
    pub const ALL: [Action; 9] = [
        Action::Acknowledge,
        Action::VerifyIdentity,
        Action::Accept,
        Action::Reject,
        Action::RequireAction,
        Action::ActionResponse,
        Action::DelayAction,
        Action::Extend,
        Action::Fulfil,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Action::VerifyIdentity => "verify-identity",
            Action::Extend => "extend",
            other => other.event().expect("lifecycle action").name(),
        }
    }

    pub fn from_name(name: &str) -> Option<Action> {
        Self::ALL.into_iter().find(|a| a.name() == name)
    }

    /// Lifecycle event applied directly by this action.
    pub fn event(self) -> Option<LifecycleEvent> {
        Some(match self {
            Action::Acknowledge => LifecycleEvent::Acknowledge,
            Action::Accept => LifecycleEvent::Accept,
            Action::Reject => LifecycleEvent::Reject,
            Action::RequireAction => LifecycleEvent::RequireAction,
            Action::ActionResponse => LifecycleEvent::ActionResponse,
            Action::DelayAction => LifecycleEvent::DelayAction,
            Action::Fulfil => LifecycleEvent::Fulfil,
            Action::VerifyIdentity | Action::Extend => return None,
        })
    }
}

/// Actions the lifecycle would accept for `r` right now.
pub fn allowed_actions(r: &RightsRequest) -> Vec<Action> {
    let legal = r.status().legal_events();
    Action::ALL
        .into_iter()
        .filter(|a| match a {
            Action::VerifyIdentity => r.status() == RequestStatus::Acknowledged && !r.identity_verified(),
            Action::Extend => !r.status().is_terminal() && !r.extension_applied(),
            Action::Accept => legal.contains(&LifecycleEvent::Accept) && r.identity_verified(),
            other => legal.contains(&other.event().expect("lifecycle action")),
        })
        .collect()
}

#[derive(Debug, Clone, Default)]
pub struct DecisionInput {
    pub justification: Option<String>,
    pub outcome: Option<bool>,
}

/// Everything one mutation changes.
struct Change {
    entry: JournalEntry,
    at: Timestamp,
    request: RightsRequest,
    policy: RequestPolicy,
    record_key: String,
    record: RightExerciseRecord,
    notice: Notice,
    events: Vec<ActionEvent>,
}

pub struct Store {
    controller: Iri,
    vocab: VocabDataset,
    processes: Vec<ProcessSpec>,
    data_dir: PathBuf,
    journal: Journal,
    clock: Clock,
    requests: BTreeMap<RequestId, RightsRequest>,
    policies: BTreeMap<RequestId, RequestPolicy>,
    records: BTreeMap<String, RightExerciseRecord>,
    notices: BTreeMap<String, Notice>,
    events: BTreeMap<RequestId, Vec<ActionEvent>>,
}

fn ts(s: &str) -> anyhow::Result<Timestamp> {
    parse_timestamp(s).ok_or_else(|| anyhow::anyhow!("bad journal timestamp {s:?}"))
}

fn iri(s: &str) -> anyhow::Result<Iri> {
    Iri::new(s).map_err(|e| anyhow::anyhow!("{e}"))
}

/// Key notices are stored and served under: the last IRI segment.
pub fn notice_key(id: &Iri) -> &str {
    id.local_name()
}

impl Store {
    /// Open the data directory and replay the journal.
    pub fn open(config: &ServiceConfig) -> anyhow::Result<Store> {
        let controller = config.controller()?;
        let vocab = match &config.vocab_path {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading vocabulary {}", p.display()))?;
                VocabDataset::from_turtle(&text).with_context(|| format!("loading vocabulary {}", p.display()))?
            }
            None => VocabDataset::seed(),
        };
        let processes = match &config.processes_path {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading processes {}", p.display()))?;
                let processes = ProcessSpec::all_from_graph(&parse_turtle(&text)?)?;
                for process in &processes {
                    process.validate(&vocab)?;
                }
                processes
            }
            None => Vec::new(),
        };
        let clock = match config.clock_mode {
            ClockMode::System => Clock::system(),
            ClockMode::Fixed => {
                let start = config
                    .fixed_start()?
                    .ok_or_else(|| anyhow::anyhow!("clock_mode = \"fixed\" needs fixed_start"))?;
                Clock::fixed(start, config.fixed_step_seconds)
            }
        };
        let data_dir = config.data_directory.clone();
        for sub in ["records", "notices", "policies"] {
            std::fs::create_dir_all(data_dir.join(sub)).with_context(|| format!("creating {}", data_dir.join(sub).display()))?;
        }
        let (journal, entries) = Journal::open(&data_dir.join("journal.log"))?;
        let mut store = Store {
            controller,
            vocab,
            processes,
            data_dir,
            journal,
            clock,
            requests: BTreeMap::new(),
            policies: BTreeMap::new(),
            records: BTreeMap::new(),
            notices: BTreeMap::new(),
            events: BTreeMap::new(),
        };
        let count = entries.len();
        for (n, entry) in entries.into_iter().enumerate() {
            store.replay(entry).with_context(|| format!("replaying journal entry {}", n + 1))?;
        }
        store.write_all_caches();
        tracing::info!(entries = count, requests = store.requests.len(), "journal replayed");
        Ok(store)
    }

    fn replay(&mut self, entry: JournalEntry) -> Result<(), StoreError> {
        match &entry {
            JournalEntry::Clock { at } => {
                let t = ts(at)?;
                self.clock.set(t);
                self.clock.observe(t);
                Ok(())
            }
            _ => {
                let change = self.plan(entry)?;
                self.commit(change, false);
                Ok(())
            }
        }
    }

    pub fn controller(&self) -> &Iri {
        &self.controller
    }

    pub fn vocab(&self) -> &VocabDataset {
        &self.vocab
    }

    pub fn now(&self) -> Timestamp {
        self.clock.now()
    }

    pub fn data_dir(&self) -> &Path {
        &self.data_dir
    }

    pub fn journal_path(&self) -> &Path {
        self.journal.path()
    }

    /// Accept a data subject's policy document and open a request.
    pub fn submit(&mut self, body: &str, agent: Option<Iri>) -> Result<(RequestId, Notice), StoreError> {
        let g = parse_turtle(body)?;
        let policy = import_policy(&g).map_err(|e| StoreError::bad(e.to_string()))?;
        let at = self.clock.next();
        let entry = JournalEntry::Submit {
            at: format_timestamp(&at),
            request_id: RequestId::generate().0,
            actor: agent.unwrap_or(policy.assigner).to_string(),
            notice_id: Notice::mint_id(&self.controller).to_string(),
            policy: body.to_string(),
        };
        let change = self.plan(entry)?;
        let (id, notice) = (change.request.id().clone(), change.notice.clone());
        self.persist_and_commit(change)?;
        Ok((id, notice))
    }

    /// Apply a controller decision.
    pub fn decide(
        &mut self,
        id: &RequestId,
        action: Action,
        input: DecisionInput,
        agent: Option<Iri>,
    ) -> Result<Notice, StoreError> {
        if !self.requests.contains_key(id) {
            return Err(StoreError::NotFound(format!("no request {id}")));
        }
        let at = self.clock.next();
        let entry = JournalEntry::Decision {
            at: format_timestamp(&at),
            request_id: id.0.clone(),
            action: action.name().to_string(),
            actor: agent.unwrap_or_else(|| self.controller.clone()).to_string(),
            justification: input.justification,
            outcome: input.outcome,
            notice_id: Notice::mint_id(&self.controller).to_string(),
        };
        let change = self.plan(entry)?;
        let notice = change.notice.clone();
        self.persist_and_commit(change)?;
        Ok(notice)
    }

    /// Move the fixed clock forward.
    pub fn set_clock(&mut self, t: Timestamp) -> Result<(), StoreError> {
        if !self.clock.is_fixed() {
            return Err(StoreError::Conflict("the clock can only be set in fixed mode".into()));
        }
        if t < self.clock.now() {
            return Err(StoreError::Conflict(format!(
                "clock cannot move backwards from {}",
                format_timestamp(&self.clock.now())
            )));
        }
        self.journal.append(&JournalEntry::Clock { at: format_timestamp(&t) })?;
        self.clock.set(t);
        Ok(())
    }

    fn persist_and_commit(&mut self, change: Change) -> Result<(), StoreError> {
        self.journal.append(&change.entry)?;
        self.commit(change, true);
        Ok(())
    }

    fn plan(&self, entry: JournalEntry) -> Result<Change, StoreError> {
        match &entry {
            JournalEntry::Submit {
                at,
                request_id,
                actor,
                notice_id,
                policy,
            } => {
                let at = ts(at)?;
                let actor = iri(actor)?;
                let notice_id = iri(notice_id)?;
                let policy = import_policy(&parse_turtle(policy)?).map_err(|e| StoreError::bad(e.to_string()))?;
                if policy.assignee != self.controller {
                    return Err(StoreError::Unprocessable(format!(
                        "policy is addressed to {}, not to this controller ({})",
                        policy.assignee, self.controller
                    )));
                }
                let request = RightsRequest::submit_with_id(
                    RequestId(request_id.clone()),
                    policy.assigner.clone(),
                    self.controller.clone(),
                    policy.right.clone(),
                    at,
                    &self.vocab,
                    &self.processes,
                )?;
                if !template_rights().contains(&policy.right) {
                    return Err(StoreError::Unprocessable(format!(
                        "right {} cannot be requested as a policy",
                        policy.right
                    )));
                }
                if self.requests.contains_key(request.id()) {
                    return Err(StoreError::Conflict(format!("request {} already exists", request.id())));
                }
                let request = request.with_last_notice(notice_id.to_string());
                let policy = policy.with_deadline(request.deadline());
                let notice = build_status_notice_with_id(&request, at, notice_id);
                let generated = BTreeSet::from([notice.id.clone(), policy.id.clone()]);
                self.finish(entry, at, request, policy, notice, BTreeSet::from([actor]), generated, Vec::new())
            }
            JournalEntry::Decision {
                at,
                request_id,
                action,
                actor,
                justification,
                outcome,
                notice_id,
            } => {
                let at = ts(at)?;
                let actor = iri(actor)?;
                let notice_id = iri(notice_id)?;
                let id = RequestId(request_id.clone());
                let current = self
                    .requests
                    .get(&id)
                    .ok_or_else(|| StoreError::NotFound(format!("no request {id}")))?;
                let action = Action::from_name(action).ok_or_else(|| StoreError::bad(format!("unknown action {action:?}")))?;
                let justification = match justification {
                    None => None,
                    Some(key) => Some(
                        self.vocab
                            .resolve_justification(key)
                            .ok_or_else(|| StoreError::Unprocessable(format!("unknown justification {key:?}")))?,
                    ),
                };
                let mut policy = self.policies[&id].clone();
                let request = match action {
                    Action::VerifyIdentity => current.verify_identity(outcome.unwrap_or(true), at, actor.clone(), &self.vocab)?,
                    Action::Extend => {
                        let j = justification.ok_or_else(|| {
                            StoreError::Unprocessable("extend requires a Delay justification".into())
                        })?;
                        let r = current.apply_extension(j, at, actor.clone())?;
                        policy = policy.with_deadline(r.deadline());
                        r
                    }
                    other => current.apply(other.event().expect("lifecycle action"), at, actor.clone(), justification)?,
                };
                let request = request.with_last_notice(notice_id.to_string());
                let notice = build_status_notice_with_id(&request, at, notice_id);
                let events = if action == Action::Fulfil {
                    policy
                        .rules()
                        .iter()
                        .filter(|r| r.kind == RuleKind::Obligation)
                        .map(|r| ActionEvent {
                            actor: r.assignee.clone(),
                            action: r.action.clone(),
                            target: r.target.clone(),
                            at,
                        })
                        .collect()
                } else {
                    Vec::new()
                };
                let associated = BTreeSet::from([actor, self.controller.clone()]);
                let generated = BTreeSet::from([notice.id.clone()]);
                self.finish(entry, at, request, policy, notice, associated, generated, events)
            }
            JournalEntry::Clock { .. } => Err(StoreError::Internal(anyhow::anyhow!("clock entries are not planned"))),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn finish(
        &self,
        entry: JournalEntry,
        at: Timestamp,
        request: RightsRequest,
        policy: RequestPolicy,
        notice: Notice,
        associated_entities: BTreeSet<Iri>,
        generated_artifacts: BTreeSet<Iri>,
        events: Vec<ActionEvent>,
    ) -> Result<Change, StoreError> {
        let subject = request.data_subject().clone();
        let record_key = subject_key(&subject);
        let record = self
            .records
            .get(&record_key)
            .cloned()
            .unwrap_or_else(|| RightExerciseRecord::for_subject(&self.controller, subject))
            .with_request(request.id().clone());
        let activity = RightExerciseActivity {
            id: record.next_activity_id(),
            request_id: request.id().clone(),
            at,
            status_after: request.status(),
            associated_entities,
            generated_artifacts,
            prev: None,
        };
        let record = record.append(activity).map_err(|e| StoreError::Conflict(e.to_string()))?;
        Ok(Change {
            entry,
            at,
            request,
            policy,
            record_key,
            record,
            notice,
            events,
        })
    }

    fn commit(&mut self, change: Change, write_caches: bool) {
        let id = change.request.id().clone();
        self.clock.observe(change.at);
        self.events.entry(id.clone()).or_default().extend(change.events);
        let notice_key = notice_key(&change.notice.id).to_string();
        if write_caches {
            self.write_cache("records", &change.record_key, &export_record(&change.record));
            self.write_cache("notices", &notice_key, &export_notice(&change.notice));
            self.write_cache("policies", id.as_str(), &export_policy(&change.policy));
        }
        self.notices.insert(notice_key, change.notice);
        self.records.insert(change.record_key, change.record);
        self.policies.insert(id.clone(), change.policy);
        self.requests.insert(id, change.request);
    }

    fn write_all_caches(&self) {
        for (key, r) in &self.records {
            self.write_cache("records", key, &export_record(r));
        }
        for (key, n) in &self.notices {
            self.write_cache("notices", key, &export_notice(n));
        }
        for (id, p) in &self.policies {
            self.write_cache("policies", id.as_str(), &export_policy(p));
        }
    }

    /// Caches are rebuildable from the journal, so failures only warn.
    fn write_cache(&self, dir: &str, key: &str, g: &Graph) {
        let path = self.data_dir.join(dir).join(format!("{key}.ttl"));
        let tmp = path.with_extension("ttl.tmp");
        let result = std::fs::write(&tmp, serialize_turtle(g)).and_then(|_| std::fs::rename(&tmp, &path));
        if let Err(e) = result {
            tracing::warn!(path = %path.display(), error = %e, "cache write failed");
        }
    }

    pub fn request(&self, id: &RequestId) -> Result<&RightsRequest, StoreError> {
        self.requests.get(id).ok_or_else(|| StoreError::NotFound(format!("no request {id}")))
    }

    /// Requests in submission order, optionally filtered by status.
    pub fn requests(&self, status: Option<RequestStatus>) -> Vec<&RightsRequest> {
        let mut out: Vec<&RightsRequest> = self
            .requests
            .values()
            .filter(|r| status.is_none_or(|s| r.status() == s))
            .collect();
        out.sort_by(|a, b| a.submitted_at().cmp(&b.submitted_at()).then(a.id().cmp(b.id())));
        out
    }

    pub fn policy(&self, id: &RequestId) -> Result<&RequestPolicy, StoreError> {
        self.policies.get(id).ok_or_else(|| StoreError::NotFound(format!("no request {id}")))
    }

    /// Action events derived from the journal for one request.
    pub fn events(&self, id: &RequestId) -> Result<&[ActionEvent], StoreError> {
        self.request(id)?;
        Ok(self.events.get(id).map(Vec::as_slice).unwrap_or(&[]))
    }

    pub fn policy_verdict(&self, id: &RequestId) -> Result<Verdict, StoreError> {
        Ok(evaluate_policy(self.policy(id)?, self.events(id)?, self.now()))
    }

    /// Record by subject key, or by the subject IRI itself.
    pub fn record(&self, key_or_subject: &str) -> Result<&RightExerciseRecord, StoreError> {
        let key = match Iri::new(key_or_subject) {
            Ok(subject) => subject_key(&subject),
            Err(_) => key_or_subject.to_string(),
        };
        self.records
            .get(&key)
            .ok_or_else(|| StoreError::NotFound(format!("no record {key_or_subject}")))
    }

    pub fn notice(&self, key: &str) -> Result<&Notice, StoreError> {
        self.notices.get(key).ok_or_else(|| StoreError::NotFound(format!("no notice {key}")))
    }
}
