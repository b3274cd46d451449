//! Rights requests as deontic policies.
//!
//! A [`RequestPolicy`] instantiates one right as ODRL-style rules addressed
//! by the data subject (assigner) to the controller (assignee). The
//! evaluator judges each rule against a log of [`ActionEvent`]s:
//!
//! - Obligation: fulfilled by a matching event at or before the deadline,
//!   violated once `now` passes the deadline without one.
//! - Prohibition: violated by any matching event, otherwise active.
//! - Permission: fulfilled once exercised, otherwise active.
//!
//! Matching is exact on actor (the assignee), action and target. Events
//! stamped after `now` are not yet visible and are ignored.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{iri, Graph, Iri, Literal, Term};
use crate::{format_timestamp, mint_iri, ns, parse_timestamp, ShapeViolation, Timestamp};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolicyError {
    #[error("right {0} has no request policy template")]
    RightNotExercisable(Iri),
    #[error(transparent)]
    Shape(#[from] ShapeViolation),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RuleKind {
    Permission,
    Prohibition,
    Obligation,
}

impl RuleKind {
    pub const ALL: [RuleKind; 3] = [RuleKind::Permission, RuleKind::Prohibition, RuleKind::Obligation];

    /// ODRL property linking a policy to rules of this kind.
    pub fn property(self) -> Iri {
        iri(ns::odrl(match self {
            RuleKind::Permission => "permission",
            RuleKind::Prohibition => "prohibition",
            RuleKind::Obligation => "obligation",
        }))
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Active,
    Fulfilled,
    Violated,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Active" => Ok(Verdict::Active),
            "Fulfilled" => Ok(Verdict::Fulfilled),
            "Violated" => Ok(Verdict::Violated),
            other => Err(format!("unknown verdict {other:?}")),
        }
    }
}

/// Action IRI in the engine namespace, e.g. `action("erase")`.
pub fn action(name: &str) -> Iri {
    iri(ns::gr(name))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub kind: RuleKind,
    pub action: Iri,
    pub target: Iri,
    pub assigner: Iri,
    pub assignee: Iri,
    pub deadline: Option<Timestamp>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ActionEvent {
    pub actor: Iri,
    pub action: Iri,
    pub target: Iri,
    pub at: Timestamp,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RequestPolicy {
    pub id: Iri,
    pub right: Iri,
    pub assigner: Iri,
    pub assignee: Iri,
    /// Kept sorted so export/import round-trips exactly.
    rules: Vec<Rule>,
}

impl RequestPolicy {
    pub fn new(id: Iri, right: Iri, assigner: Iri, assignee: Iri, mut rules: Vec<Rule>) -> Result<Self, ShapeViolation> {
        rules.sort();
        rules.dedup();
        let p = RequestPolicy {
            id,
            right,
            assigner,
            assignee,
            rules,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn with_id(mut self, id: Iri) -> Self {
        self.id = id;
        self
    }

    /// Replace every obligation deadline.
    pub fn with_deadline(mut self, deadline: Timestamp) -> Self {
        for r in &mut self.rules {
            if r.kind == RuleKind::Obligation {
                r.deadline = Some(deadline);
            }
        }
        self.rules.sort();
        self
    }

    pub fn validate(&self) -> Result<(), ShapeViolation> {
        if self.rules.is_empty() {
            return Err(ShapeViolation(format!("policy {} has no rules", self.id)));
        }
        for r in &self.rules {
            if r.assigner != self.assigner || r.assignee != self.assignee {
                return Err(ShapeViolation(format!(
                    "{} rule {} does not reference the policy's assigner and assignee",
                    r.kind, r.action
                )));
            }
            if r.kind == RuleKind::Obligation && r.deadline.is_none() {
                return Err(ShapeViolation(format!("obligation {} has no deadline", r.action)));
            }
        }
        Ok(())
    }
}

/// Template rules per right article: (kind, action).
const TEMPLATES: &[(&str, &[(RuleKind, &str)])] = &[
    ("A15", &[(RuleKind::Obligation, "provide-copy")]),
    ("A16", &[(RuleKind::Obligation, "rectify")]),
    ("A17", &[(RuleKind::Obligation, "erase")]),
    (
        "A18",
        &[
            (RuleKind::Obligation, "restrict"),
            (RuleKind::Prohibition, "process-beyond-storage"),
        ],
    ),
    ("A20", &[(RuleKind::Obligation, "port")]),
    ("A21", &[(RuleKind::Obligation, "stop-processing")]),
    ("A22", &[(RuleKind::Prohibition, "solely-automated-decision")]),
    ("A7-3", &[(RuleKind::Obligation, "cease-consent-based-processing")]),
];

/// Rights that have a request template, as `eu-gdpr:` IRIs.
pub fn template_rights() -> Vec<Iri> {
    TEMPLATES.iter().map(|(a, _)| iri(ns::eu_gdpr(a))).collect()
}

/// Generic request policy for `right`.
pub fn instantiate_right_policy(
    right: &Iri,
    subject: &Iri,
    controller: &Iri,
    data_target: &Iri,
    deadline: Timestamp,
) -> Result<RequestPolicy, PolicyError> {
    let article = right
        .as_str()
        .strip_prefix(ns::EU_GDPR)
        .ok_or_else(|| PolicyError::RightNotExercisable(right.clone()))?;
    let (_, template) = TEMPLATES
        .iter()
        .find(|(a, _)| *a == article)
        .ok_or_else(|| PolicyError::RightNotExercisable(right.clone()))?;
    let rules = template
        .iter()
        .map(|&(kind, name)| Rule {
            kind,
            action: action(name),
            target: data_target.clone(),
            assigner: subject.clone(),
            assignee: controller.clone(),
            deadline: (kind == RuleKind::Obligation).then_some(deadline),
        })
        .collect();
    let id = mint_iri(controller, &["policies", &uuid::Uuid::new_v4().to_string()]);
    Ok(RequestPolicy::new(id, right.clone(), subject.clone(), controller.clone(), rules)?)
}

fn matches(rule: &Rule, e: &ActionEvent) -> bool {
    e.actor == rule.assignee && e.action == rule.action && e.target == rule.target
}

pub fn evaluate_rule(rule: &Rule, log: &[ActionEvent], now: Timestamp) -> Verdict {
    let mut seen = log.iter().filter(|e| e.at <= now && matches(rule, e));
    match rule.kind {
        RuleKind::Obligation => match rule.deadline {
            Some(deadline) => {
                if seen.any(|e| e.at <= deadline) {
                    Verdict::Fulfilled
                } else if now > deadline {
                    Verdict::Violated
                } else {
                    Verdict::Active
                }
            }
            None if seen.next().is_some() => Verdict::Fulfilled,
            None => Verdict::Active,
        },
        RuleKind::Prohibition if seen.next().is_some() => Verdict::Violated,
        RuleKind::Prohibition => Verdict::Active,
        RuleKind::Permission if seen.next().is_some() => Verdict::Fulfilled,
        RuleKind::Permission => Verdict::Active,
    }
}

/// Per-rule verdicts, in rule order.
pub fn evaluate_rules(p: &RequestPolicy, log: &[ActionEvent], now: Timestamp) -> Vec<(Rule, Verdict)> {
    p.rules.iter().map(|r| (r.clone(), evaluate_rule(r, log, now))).collect()
}

pub fn evaluate_policy(p: &RequestPolicy, log: &[ActionEvent], now: Timestamp) -> Verdict {
    fold_verdicts(p.rules.iter().map(|r| (r.kind, evaluate_rule(r, log, now))))
}

/// Violated if any rule is; else Active if any obligation is; else Fulfilled.
pub fn fold_verdicts(verdicts: impl IntoIterator<Item = (RuleKind, Verdict)>) -> Verdict {
    let mut active = false;
    for (kind, v) in verdicts {
        match v {
            Verdict::Violated => return Verdict::Violated,
            Verdict::Active if kind == RuleKind::Obligation => active = true,
            _ => {}
        }
    }
    if active {
        Verdict::Active
    } else {
        Verdict::Fulfilled
    }
}

pub fn export_policy(p: &RequestPolicy) -> Graph {
    let mut g = Graph::new();
    let node = Term::iri(&p.id);
    let odrl = |local: &str| iri(ns::odrl(local));
    g.add(&node, &iri(ns::RDF_TYPE), odrl("Request"));
    g.add(&node, &iri(ns::dpv("hasRight")), p.right.clone());
    g.add(&node, &odrl("assigner"), p.assigner.clone());
    g.add(&node, &odrl("assignee"), p.assignee.clone());
    for (i, r) in p.rules.iter().enumerate() {
        let rule = Term::blank(format!("rule{i}"));
        g.add(&node, &r.kind.property(), rule.clone());
        g.add(&rule, &odrl("action"), r.action.clone());
        g.add(&rule, &odrl("target"), r.target.clone());
        g.add(&rule, &odrl("assigner"), r.assigner.clone());
        g.add(&rule, &odrl("assignee"), r.assignee.clone());
        if let Some(deadline) = &r.deadline {
            let c = Term::blank(format!("deadline{i}"));
            g.add(&rule, &odrl("constraint"), c.clone());
            g.add(&c, &odrl("leftOperand"), odrl("dateTime"));
            g.add(&c, &odrl("operator"), odrl("lteq"));
            g.add(&c, &odrl("rightOperand"), Literal::date_time(deadline));
        }
    }
    g
}

fn one_iri(g: &Graph, s: &Term, p: &Iri, what: &str) -> Result<Iri, ShapeViolation> {
    match g.objects(s, p).as_slice() {
        [Term::Iri(i)] => Ok(i.clone()),
        [] => Err(ShapeViolation(format!("missing {what}"))),
        [_] => Err(ShapeViolation(format!("{what} must be an IRI"))),
        _ => Err(ShapeViolation(format!("more than one {what}"))),
    }
}

fn optional_iri(g: &Graph, s: &Term, p: &Iri, what: &str) -> Result<Option<Iri>, ShapeViolation> {
    if g.objects(s, p).is_empty() {
        Ok(None)
    } else {
        one_iri(g, s, p, what).map(Some)
    }
}

fn deadline_constraint(g: &Graph, c: &Term) -> Result<Timestamp, ShapeViolation> {
    let left = one_iri(g, c, &iri(ns::odrl("leftOperand")), "odrl:leftOperand")?;
    let op = one_iri(g, c, &iri(ns::odrl("operator")), "odrl:operator")?;
    if left.as_str() != ns::odrl("dateTime") || op.as_str() != ns::odrl("lteq") {
        return Err(ShapeViolation(format!(
            "only odrl:dateTime odrl:lteq constraints are supported, found {left} {op}"
        )));
    }
    match g.objects(c, &iri(ns::odrl("rightOperand"))).as_slice() {
        [Term::Literal(l)] => l
            .as_timestamp()
            .ok_or_else(|| ShapeViolation(format!("deadline {:?} is not an xsd:dateTime", l.lexical()))),
        _ => Err(ShapeViolation("constraint needs exactly one literal odrl:rightOperand".into())),
    }
}

/// Read the single `odrl:Request` in `g`.
///
/// Rule-level assigner/assignee default to the policy's and must agree with
/// them when given.
pub fn import_policy(g: &Graph) -> Result<RequestPolicy, ShapeViolation> {
    let odrl = |local: &str| iri(ns::odrl(local));
    let node = match g.instances_of(&odrl("Request")).as_slice() {
        [one] => (*one).clone(),
        [] => return Err(ShapeViolation("no odrl:Request".into())),
        _ => return Err(ShapeViolation("more than one odrl:Request".into())),
    };
    let Some(id) = node.as_iri().cloned() else {
        return Err(ShapeViolation("the request policy must be named by an IRI".into()));
    };
    let right = one_iri(g, &node, &iri(ns::dpv("hasRight")), "dpv:hasRight")?;
    let assigner = one_iri(g, &node, &odrl("assigner"), "odrl:assigner")?;
    let assignee = one_iri(g, &node, &odrl("assignee"), "odrl:assignee")?;

    let mut rules = Vec::new();
    for kind in RuleKind::ALL {
        for rule_node in g.objects(&node, &kind.property()) {
            let action = one_iri(g, rule_node, &odrl("action"), "odrl:action")?;
            let target = one_iri(g, rule_node, &odrl("target"), "odrl:target")?;
            let rule_assigner = optional_iri(g, rule_node, &odrl("assigner"), "odrl:assigner")?.unwrap_or(assigner.clone());
            let rule_assignee = optional_iri(g, rule_node, &odrl("assignee"), "odrl:assignee")?.unwrap_or(assignee.clone());
            let constraints = g.objects(rule_node, &odrl("constraint"));
            let deadline = match constraints.as_slice() {
                [] => None,
                [c] => Some(deadline_constraint(g, c)?),
                _ => return Err(ShapeViolation(format!("{action}: more than one constraint"))),
            };
            rules.push(Rule {
                kind,
                action,
                target,
                assigner: rule_assigner,
                assignee: rule_assignee,
                deadline,
            });
        }
    }
    RequestPolicy::new(id, right, assigner, assignee, rules)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("event log line {line}: {message}")]
pub struct EventLogError {
    pub line: usize,
    pub message: String,
}

fn log_term(token: &str) -> Result<Iri, String> {
    let value = if let Some(inner) = token.strip_prefix('<').and_then(|t| t.strip_suffix('>')) {
        inner.to_string()
    } else if token.contains("://") {
        token.to_string()
    } else {
        ns::expand_curie(token).ok_or_else(|| format!("unknown prefix in {token:?}"))?
    };
    Iri::new(value).map_err(|e| e.to_string())
}

/// Parse a line-delimited event log: `actor action target timestamp` per
/// line, whitespace separated. Terms are `<iri>`, bare absolute IRIs or
/// default-prefix names. Blank lines and `#` comments are skipped.
pub fn parse_event_log(text: &str) -> Result<Vec<ActionEvent>, EventLogError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| EventLogError { line: i + 1, message };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [actor, act, target, at] = fields.as_slice() else {
            return Err(err(format!("expected 4 fields, found {}", fields.len())));
        };
        out.push(ActionEvent {
            actor: log_term(actor).map_err(err)?,
            action: log_term(act).map_err(err)?,
            target: log_term(target).map_err(err)?,
            at: parse_timestamp(at).ok_or_else(|| err(format!("bad timestamp {at:?}")))?,
        });
    }
    Ok(out)
}

pub fn format_event_log(events: &[ActionEvent]) -> String {
    events
        .iter()
        .map(|e| format!("<{}> <{}> <{}> {}\n", e.actor, e.action, e.target, format_timestamp(&e.at)))
        .collect()
}

/// Distinct actions named by a policy's rules.
pub fn policy_actions(p: &RequestPolicy) -> BTreeSet<&Iri> {
    p.rules.iter().map(|r| &r.action).collect()
}
