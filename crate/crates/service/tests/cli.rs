mod common;

use std::process::Command;

use common::fixture;

fn rights(args: &[&str]) -> (bool, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_rights")).args(args).env("RIGHTS_LOG", "warn").output().unwrap();
    (
        out.status.success(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn golden(name: &str) -> String {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures/golden")
        .join(name)
        .display()
        .to_string()
}

#[test]
fn validate_accepts_each_document_kind() {
    for (file, prefix) in [
        (golden("policy-a18-restriction.ttl"), "policy "),
        (golden("record-two-activities.ttl"), "record "),
        (golden("notice-erasure-fulfilled.ttl"), "1 notice(s): ok"),
        (fixture("policy-a15.ttl").display().to_string(), "policy "),
    ] {
        let (ok, out, err) = rights(&["validate", &file]);
        assert!(ok, "{file}: {err}");
        assert!(out.starts_with(prefix), "{file}: {out}");
    }
}

#[test]
fn validate_reports_failures() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.ttl");
    std::fs::write(
        &bad,
        "@prefix dpv: <https://w3id.org/dpv#> .\n<https://acme.example/notices/1> a dpv:RightFulfilmentNotice .\n",
    )
    .unwrap();
    let (ok, _, err) = rights(&["validate", bad.to_str().unwrap()]);
    assert!(!ok);
    assert!(err.contains("violation"), "{err}");

    std::fs::write(&bad, "<https://a.example/s> <https://a.example/p> .").unwrap();
    let (ok, _, err) = rights(&["validate", bad.to_str().unwrap()]);
    assert!(!ok);
    assert!(err.contains(" at 1:"), "{err}");
}

#[test]
fn evaluate_prints_rule_and_policy_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("events.log");
    std::fs::write(
        &log,
        "<https://acme.example/> gr:provide-copy <https://acme.example/data/alice> 2024-03-20T10:00:00Z\n",
    )
    .unwrap();
    let policy = golden("policy-a15-request.ttl");
    let (ok, out, err) = rights(&["evaluate", "--policy", &policy, "--log", log.to_str().unwrap(), "--now", "2024-05-01T00:00:00Z"]);
    assert!(ok, "{err}");
    assert!(out.ends_with("policy https://acme.example/policies/alice-access: Fulfilled\n"), "{out}");

    std::fs::write(&log, "").unwrap();
    let (ok, out, _) = rights(&["evaluate", "--policy", &policy, "--log", log.to_str().unwrap(), "--now", "2024-05-01T00:00:00Z"]);
    assert!(ok);
    assert!(out.ends_with(": Violated\n"), "{out}");

    let (ok, _, err) = rights(&["evaluate", "--policy", &policy, "--log", log.to_str().unwrap(), "--now", "yesterday"]);
    assert!(!ok);
    assert!(err.contains("--now"), "{err}");
}

#[test]
fn rights_lists_applicable_articles() {
    let (ok, out, _) = rights(&["rights", "--legal-basis", "https://w3id.org/dpv/legal/eu/gdpr#A6-1-b"]);
    assert!(ok);
    assert!(out.lines().any(|l| l.starts_with("A20\t")), "{out}");
    let (ok, _, _) = rights(&["rights", "--legal-basis", "A99"]);
    assert!(!ok);
}

#[test]
fn serve_rejects_a_bad_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("rights.toml");
    std::fs::write(&config, "controller_iri = \"https://acme.example/\"\nclock_mode = \"fixed\"\n").unwrap();
    let (ok, _, err) = rights(&["serve", "--config", config.to_str().unwrap()]);
    assert!(!ok);
    assert!(err.contains("fixed_start"), "{err}");
}
