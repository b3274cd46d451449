//! Golden graph corpus shared by the Turtle round-trip tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use chrono::{Duration, TimeZone, Utc};
use rights_core::graph::{parse_turtle, Graph, Iri};
use rights_core::lifecycle::{LifecycleEvent, RequestId, RequestStatus, RightsRequest};
use rights_core::notices::{build_status_notice_with_id, export_notice, Notice, NoticeKind};
use rights_core::policy::{export_policy, instantiate_right_policy, template_rights};
use rights_core::records::{export_record, RightExerciseActivity, RightExerciseRecord};
use rights_core::vocab::{export_vocab_dataset, VocabDataset, SEED_TURTLE};
use rights_core::{mint_iri, ns};

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/golden")
}

fn iri(s: &str) -> Iri {
    Iri::new(s).unwrap()
}

/// Named graphs: hand-authored fixtures, the seed, every policy template,
/// notices of every kind, lifecycle status notices and records.
pub fn golden_corpus() -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    let mut files: Vec<PathBuf> = std::fs::read_dir(fixture_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "ttl"))
        .collect();
    files.sort();
    for path in files {
        let text = std::fs::read_to_string(&path).unwrap();
        let g = parse_turtle(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        out.push((path.file_name().unwrap().to_string_lossy().into_owned(), g));
    }

    out.push(("vocab-seed".into(), parse_turtle(SEED_TURTLE).unwrap()));
    let ds = VocabDataset::seed();
    out.push(("vocab-export".into(), export_vocab_dataset(&ds)));

    let ctrl = iri("https://acme.example/");
    let alice = iri("https://people.example/alice");
    let t0 = Utc.with_ymd_and_hms(2024, 3, 1, 9, 0, 0).unwrap();
    for right in template_rights() {
        let p = instantiate_right_policy(&right, &alice, &ctrl, &iri("https://acme.example/data/alice"), t0 + Duration::days(31))
            .unwrap()
            .with_id(mint_iri(&ctrl, &["policies", right.local_name()]));
        out.push((format!("policy-{}", right.local_name()), export_policy(&p)));
    }

    for (i, kind) in NoticeKind::ALL.into_iter().enumerate() {
        let mut b = Notice::builder(
            mint_iri(&ctrl, &["notices", &format!("kind-{i}")]),
            kind,
            ctrl.clone(),
            iri("https://acme.example/dpo"),
            t0 + Duration::minutes(i as i64),
        )
        .recipient(alice.clone())
        .right(iri(&ns::eu_gdpr("A15")))
        .exercise_point(iri("https://acme.example/rights"))
        .required_info_process(iri("https://acme.example/processes/accounts"));
        b = match kind {
            NoticeKind::RightNonFulfilmentNotice => b
                .status(RequestStatus::Rejected)
                .justification(Some(iri(&ns::justifications("RequestExcessive")))),
            NoticeKind::RecipientNotice => b
                .notified_recipient(iri("https://partner-one.example/"))
                .notified_recipient(iri("https://partner-two.example/")),
            NoticeKind::SubjectAccessRequestNotice => b.attached_duty(iri("https://acme.example/policies/payment-terms")),
            _ => b,
        };
        out.push((format!("notice-{kind}"), export_notice(&b.build().unwrap())));
    }

    let mut r = RightsRequest::submit_with_id(RequestId("req-1".into()), alice.clone(), ctrl.clone(), iri(&ns::eu_gdpr("A15")), t0, &ds, &[])
        .unwrap();
    let steps: [(&str, i64); 4] = [("acknowledge", 1), ("verify", 2), ("accept", 3), ("fulfil", 4)];
    let mut record = RightExerciseRecord::for_subject(&ctrl, alice.clone()).with_request(RequestId("req-1".into()));
    for (name, h) in steps {
        let at = t0 + Duration::hours(h);
        r = match name {
            "verify" => r.verify_identity(true, at, ctrl.clone(), &ds).unwrap(),
            other => r.apply(LifecycleEvent::from_name(other).unwrap(), at, ctrl.clone(), None).unwrap(),
        };
        let notice_id = mint_iri(&ctrl, &["notices", &format!("status-{h}")]);
        out.push((format!("status-notice-{name}"), export_notice(&build_status_notice_with_id(&r, at, notice_id.clone()))));
        record = record
            .append(RightExerciseActivity {
                id: record.next_activity_id(),
                request_id: RequestId("req-1".into()),
                at,
                status_after: r.status(),
                associated_entities: BTreeSet::from([ctrl.clone()]),
                generated_artifacts: BTreeSet::from([notice_id]),
                prev: None,
            })
            .unwrap();
        out.push((format!("record-{}", record.len()), export_record(&record)));
    }
    out.push((
        "record-empty".into(),
        export_record(&RightExerciseRecord::for_subject(&ctrl, iri("https://people.example/bob"))),
    ));
    out
}
