//! Hand-computed oracles and reusable checks for the lifecycle and the
//! policy evaluator.
#![allow(dead_code)]

use chrono::{Duration, TimeZone, Utc};
use proptest::prelude::*;
use rights_core::graph::Iri;
use rights_core::lifecycle::{submit_request, transition, LifecycleError, LifecycleEvent, RequestStatus, RightsRequest};
use rights_core::notices::{build_status_notice, NoticeKind};
use rights_core::policy::{action, evaluate_rule, ActionEvent, Rule, RuleKind, Verdict};
use rights_core::vocab::{JustificationCategory, VocabDataset};
use rights_core::{ns, Timestamp};

pub fn at(y: i32, mo: u32, d: u32, h: u32, mi: u32, s: u32) -> Timestamp {
    Utc.with_ymd_and_hms(y, mo, d, h, mi, s).unwrap()
}

fn who(x: &str) -> Iri {
    Iri::new(format!("https://oracle.example/{x}")).unwrap()
}

fn a15() -> Iri {
    Iri::new(ns::eu_gdpr("A15")).unwrap()
}

// Lifecycle

pub const LEGAL_TRANSITIONS: [(RequestStatus, LifecycleEvent, RequestStatus); 9] = {
    use LifecycleEvent::*;
    use RequestStatus::*;
    [
        (Initiated, Acknowledge, Acknowledged),
        (Acknowledged, Accept, Accepted),
        (Acknowledged, Reject, Rejected),
        (Acknowledged, RequireAction, RequiresAction),
        (RequiresAction, ActionResponse, Acknowledged),
        (RequiresAction, DelayAction, ActionDelayed),
        (ActionDelayed, ActionResponse, Acknowledged),
        (Accepted, Fulfil, Fulfilled),
        (Accepted, Reject, Rejected),
    ]
};

/// Every status x event pair against the table. Returns the number of
/// legal transitions found.
pub fn check_transition_closure() -> Result<usize, String> {
    let mut legal = 0;
    for s in RequestStatus::ALL {
        for e in LifecycleEvent::ALL {
            let want = LEGAL_TRANSITIONS.iter().find(|(f, ev, _)| *f == s && *ev == e).map(|t| t.2);
            match (transition(s, e), want) {
                (Ok(got), Some(w)) if got == w => legal += 1,
                (Err(LifecycleError::InvalidTransition { from, event }), None) if (from, event) == (s, e) => {}
                (other, w) => return Err(format!("{s} --{e}--> {other:?}, expected {w:?}")),
            }
        }
        if s.is_terminal() && !s.legal_events().is_empty() {
            return Err(format!("terminal {s} admits events"));
        }
    }
    if legal != 9 {
        return Err(format!("{legal} legal transitions"));
    }
    Ok(legal)
}

type Ymdhms = (i32, u32, u32, u32, u32, u32);

/// (submitted, one-month deadline) pairs, computed by hand.
pub const ONE_MONTH: [(Ymdhms, Ymdhms); 12] = [
    ((2024, 1, 15, 10, 0, 0), (2024, 2, 15, 10, 0, 0)),
    ((2024, 1, 31, 9, 30, 0), (2024, 2, 29, 9, 30, 0)),
    ((2023, 1, 31, 12, 0, 0), (2023, 2, 28, 12, 0, 0)),
    ((2024, 3, 31, 0, 0, 0), (2024, 4, 30, 0, 0, 0)),
    ((2024, 12, 31, 23, 59, 59), (2025, 1, 31, 23, 59, 59)),
    ((2024, 2, 29, 8, 0, 0), (2024, 3, 29, 8, 0, 0)),
    ((2024, 5, 31, 17, 45, 0), (2024, 6, 30, 17, 45, 0)),
    ((2024, 8, 31, 6, 0, 0), (2024, 9, 30, 6, 0, 0)),
    ((2024, 10, 31, 11, 11, 11), (2024, 11, 30, 11, 11, 11)),
    ((2024, 1, 1, 0, 0, 0), (2024, 2, 1, 0, 0, 0)),
    ((2100, 1, 31, 12, 0, 0), (2100, 2, 28, 12, 0, 0)),
    ((2000, 1, 31, 12, 0, 0), (2000, 2, 29, 12, 0, 0)),
];

/// (submitted, deadline after the two-month extension).
pub const EXTENDED: [(Ymdhms, Ymdhms); 8] = [
    ((2024, 1, 15, 10, 0, 0), (2024, 4, 15, 10, 0, 0)),
    ((2024, 1, 31, 9, 30, 0), (2024, 4, 30, 9, 30, 0)),
    ((2023, 11, 30, 12, 0, 0), (2024, 2, 29, 12, 0, 0)),
    ((2023, 11, 29, 12, 0, 0), (2024, 2, 29, 12, 0, 0)),
    ((2022, 11, 30, 12, 0, 0), (2023, 2, 28, 12, 0, 0)),
    ((2024, 12, 31, 23, 0, 0), (2025, 3, 31, 23, 0, 0)),
    ((2024, 10, 31, 8, 0, 0), (2025, 1, 31, 8, 0, 0)),
    ((2024, 5, 31, 8, 0, 0), (2024, 8, 31, 8, 0, 0)),
];

pub fn ts(t: Ymdhms) -> Timestamp {
    at(t.0, t.1, t.2, t.3, t.4, t.5)
}

/// Both calendar tables against submit/extend. Returns the number of
/// entries checked.
pub fn check_calendar() -> Result<usize, String> {
    let ds = VocabDataset::seed();
    let submit = |t| submit_request(who("alice"), who("ctrl"), a15(), t, &ds, &[]).map_err(|e| e.to_string());
    for (submitted, deadline) in ONE_MONTH {
        let r = submit(ts(submitted))?;
        if r.deadline() != ts(deadline) {
            return Err(format!("submitted {submitted:?}: deadline {} != {deadline:?}", r.deadline()));
        }
    }
    let complex = ds.justification_named("RequestComplex").ok_or("RequestComplex missing")?;
    for (submitted, deadline) in EXTENDED {
        let r = submit(ts(submitted))?;
        let ext = r
            .apply_extension(complex, ts(submitted) + Duration::days(1), who("ctrl"))
            .map_err(|e| e.to_string())?;
        if ext.deadline() != ts(deadline) {
            return Err(format!("extended {submitted:?}: deadline {} != {deadline:?}", ext.deadline()));
        }
    }
    Ok(ONE_MONTH.len() + EXTENDED.len())
}

pub fn check_breach_boundary() -> Result<(), String> {
    let ds = VocabDataset::seed();
    let r = submit_request(who("alice"), who("ctrl"), a15(), at(2024, 1, 31, 9, 30, 0), &ds, &[]).map_err(|e| e.to_string())?;
    if r.check_breach(r.deadline()).is_some() {
        return Err("breach reported at the deadline".into());
    }
    if r.check_breach(r.deadline() + Duration::seconds(1)).is_none() {
        return Err("no breach one second after the deadline".into());
    }
    Ok(())
}

/// One step of a random walk: which move to try and which justification
/// index to use if one is needed.
fn step(r: &RightsRequest, ds: &VocabDataset, choice: usize, pick: usize, now: Timestamp) -> Option<RightsRequest> {
    let ctrl = who("ctrl");
    let pick_from = |cat: JustificationCategory| {
        let all = ds.justifications_for(cat);
        all[pick % all.len()]
    };
    let mut moves: Vec<Box<dyn Fn() -> Result<RightsRequest, LifecycleError>>> = Vec::new();
    for e in r.status().legal_events() {
        let j = match e {
            LifecycleEvent::Reject => Some(pick_from(JustificationCategory::NonFulfilment)),
            LifecycleEvent::RequireAction | LifecycleEvent::DelayAction => Some(pick_from(if pick.is_multiple_of(2) {
                JustificationCategory::Delay
            } else {
                JustificationCategory::Exercise
            })),
            _ => None,
        };
        let ctrl = ctrl.clone();
        moves.push(Box::new(move || r.apply(e, now, ctrl.clone(), j)));
    }
    if r.status() == RequestStatus::Acknowledged && !r.identity_verified() {
        for ok in [true, false] {
            let ctrl = ctrl.clone();
            moves.push(Box::new(move || r.verify_identity(ok, now, ctrl.clone(), ds)));
        }
    }
    if !r.status().is_terminal() && !r.extension_applied() {
        let j = pick_from(JustificationCategory::Delay);
        let ctrl = ctrl.clone();
        moves.push(Box::new(move || r.apply_extension(j, now, ctrl.clone())));
    }
    if moves.is_empty() {
        return None;
    }
    match moves[choice % moves.len()]() {
        Ok(next) => Some(next),
        // Accept before verification is the only legal-event refusal.
        Err(LifecycleError::IdentityNotVerified) => Some(r.clone()),
        Err(e) => panic!("valid move refused: {e}"),
    }
}

pub fn walk_choices() -> impl Strategy<Value = Vec<(usize, usize)>> {
    proptest::collection::vec((0usize..16, 0usize..64), 1..24)
}

/// Drive a request through `choices`; any rejection must carry a
/// NonFulfilment justification that reappears on the notice. Returns
/// whether the walk ended in Rejected.
pub fn check_rejection_justified(choices: Vec<(usize, usize)>) -> Result<bool, TestCaseError> {
    let ds = VocabDataset::seed();
    let mut now = at(2024, 3, 1, 9, 0, 0);
    let mut r = submit_request(who("alice"), who("ctrl"), a15(), now, &ds, &[]).unwrap();
    for (choice, pick) in choices {
        now += Duration::minutes(5);
        match step(&r, &ds, choice, pick, now) {
            Some(next) => r = next,
            None => break,
        }
    }
    if r.status() == RequestStatus::Rejected {
        let j = r.last_event().justification.clone().expect("rejection without justification");
        prop_assert_eq!(ds.justification(&j).unwrap().category, JustificationCategory::NonFulfilment);
        let notice = build_status_notice(&r, now + Duration::seconds(1));
        prop_assert_eq!(notice.kind, NoticeKind::RightNonFulfilmentNotice);
        prop_assert_eq!(notice.justification, Some(j));
    }
    for e in r.history() {
        if e.to_status == RequestStatus::Rejected {
            prop_assert!(e.justification.is_some());
        }
    }
    Ok(r.status() == RequestStatus::Rejected)
}

// Policy evaluator

pub fn deadline() -> Timestamp {
    Utc.with_ymd_and_hms(2024, 6, 1, 12, 0, 0).unwrap()
}

pub fn time_points() -> [Timestamp; 3] {
    [deadline() - Duration::hours(1), deadline(), deadline() + Duration::hours(1)]
}

pub fn party(x: &str) -> Iri {
    who(x)
}

pub fn rule(kind: RuleKind) -> Rule {
    Rule {
        kind,
        action: action("erase"),
        target: who("data-0"),
        assigner: who("subject"),
        assignee: who("controller"),
        deadline: Some(deadline()),
    }
}

/// All 12 events over {erase, port} x {data-0, data-1} x time points.
pub fn alphabet() -> Vec<ActionEvent> {
    let mut out = Vec::new();
    for a in ["erase", "port"] {
        for t in ["data-0", "data-1"] {
            for at in time_points() {
                out.push(ActionEvent {
                    actor: who("controller"),
                    action: action(a),
                    target: who(t),
                    at,
                });
            }
        }
    }
    out
}

pub fn all_logs(max_len: usize) -> Vec<Vec<ActionEvent>> {
    let sigma = alphabet();
    let mut logs = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for log in &layer {
            for e in &sigma {
                let mut l: Vec<ActionEvent> = log.clone();
                l.push(e.clone());
                next.push(l);
            }
        }
        logs.extend(next.iter().cloned());
        layer = next;
    }
    logs
}

/// Verdict read straight off the rule definitions, phrased over the set of
/// times at which the rule's action was observed.
pub fn oracle(kind: RuleKind, log: &[ActionEvent], now: Timestamp) -> Verdict {
    let hits: Vec<Timestamp> = log
        .iter()
        .filter(|e| e.action == action("erase") && e.target == who("data-0") && e.actor == who("controller"))
        .map(|e| e.at)
        .filter(|&at| at <= now)
        .collect();
    let earliest = hits.iter().min().copied();
    match kind {
        RuleKind::Obligation => match earliest {
            Some(t) if t <= deadline() => Verdict::Fulfilled,
            _ if now > deadline() => Verdict::Violated,
            _ => Verdict::Active,
        },
        RuleKind::Prohibition => {
            if earliest.is_some() {
                Verdict::Violated
            } else {
                Verdict::Active
            }
        }
        RuleKind::Permission => {
            if earliest.is_some() {
                Verdict::Fulfilled
            } else {
                Verdict::Active
            }
        }
    }
}

/// Every kind x log (length <= 3) x time point. Returns the case count.
pub fn check_evaluator_oracle() -> Result<usize, String> {
    let mut cases = 0;
    for kind in RuleKind::ALL {
        let r = rule(kind);
        for log in &all_logs(3) {
            for now in time_points() {
                let (got, want) = (evaluate_rule(&r, log, now), oracle(kind, log, now));
                if got != want {
                    return Err(format!("{kind} {log:?} now={now}: {got} != {want}"));
                }
                cases += 1;
            }
        }
    }
    Ok(cases)
}

pub fn arb_event() -> impl Strategy<Value = ActionEvent> {
    (0usize..2, 0usize..2, 0usize..2, -3i64..4).prop_map(|(actor, act, target, hours)| ActionEvent {
        actor: who(["controller", "processor"][actor]),
        action: action(["erase", "port"][act]),
        target: who(["data-0", "data-1"][target]),
        at: deadline() + Duration::hours(hours),
    })
}

pub fn log_extension() -> impl Strategy<Value = (Vec<ActionEvent>, Vec<ActionEvent>, i64)> {
    (
        proptest::collection::vec(arb_event(), 0..6),
        proptest::collection::vec(arb_event(), 1..4),
        -3i64..5,
    )
}

/// A Fulfilled rule stays settled when more events are appended.
pub fn check_extension_monotone(log: &[ActionEvent], extra: &[ActionEvent], now_h: i64) -> Result<(), TestCaseError> {
    let now = deadline() + Duration::hours(now_h);
    let extended: Vec<ActionEvent> = log.iter().chain(extra.iter()).cloned().collect();
    for kind in RuleKind::ALL {
        for r in [rule(kind), Rule { action: action("port"), ..rule(kind) }] {
            let before = evaluate_rule(&r, log, now);
            let after = evaluate_rule(&r, &extended, now);
            if before == Verdict::Fulfilled {
                prop_assert_ne!(after, Verdict::Active);
                if kind == RuleKind::Obligation {
                    prop_assert_ne!(after, Verdict::Violated);
                }
            }
        }
    }
    Ok(())
}
