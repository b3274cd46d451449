//! Offline subcommands: shape validation, policy evaluation and rights
//! lookup. Each returns the text to print, or an error message.

use std::path::Path;

use anyhow::{bail, Context};
use rights_core::graph::{parse_turtle, Iri};
use rights_core::notices::validate_notice;
use rights_core::policy::{evaluate_policy, evaluate_rules, import_policy, parse_event_log};
use rights_core::records::import_record;
use rights_core::vocab::VocabDataset;
use rights_core::{ns, parse_timestamp};

pub fn load_vocab(path: Option<&Path>) -> anyhow::Result<VocabDataset> {
    match path {
        None => Ok(VocabDataset::seed()),
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Ok(VocabDataset::from_turtle(&text)?)
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Shape-check a policy, record or notice document.
pub fn validate(path: &Path, ds: &VocabDataset) -> anyhow::Result<String> {
    let g = parse_turtle(&read(path)?).with_context(|| path.display().to_string())?;
    let is_a = |class: String| !g.instances_of(&Iri::new(class).expect("namespace IRI")).is_empty();
    if is_a(ns::odrl("Request")) {
        let p = import_policy(&g)?;
        return Ok(format!("policy {}: ok, {} rule(s) for {}\n", p.id, p.rules().len(), p.right));
    }
    if is_a(ns::dpv("RightExerciseRecord")) {
        let r = import_record(&g)?;
        return Ok(format!("record {}: ok, {} activities\n", r.id, r.len()));
    }
    let report = validate_notice(&g, ds);
    if report.notices_checked == 0 {
        bail!("{}: no policy, record or notice found", path.display());
    }
    if !report.is_valid() {
        let lines: Vec<String> = report
            .violations
            .iter()
            .map(|v| format!("{}: {:?}: {}", v.notice, v.kind, v.detail))
            .collect();
        bail!("{} violation(s)\n{}", lines.len(), lines.join("\n"));
    }
    Ok(format!("{} notice(s): ok\n", report.notices_checked))
}

/// Per-rule verdicts followed by the policy verdict.
pub fn evaluate(policy: &Path, log: &Path, now: &str) -> anyhow::Result<String> {
    let p = import_policy(&parse_turtle(&read(policy)?)?)?;
    let events = parse_event_log(&read(log)?)?;
    let now = parse_timestamp(now).ok_or_else(|| anyhow::anyhow!("--now: not an RFC 3339 timestamp: {now:?}"))?;
    let mut out = String::new();
    for (rule, verdict) in evaluate_rules(&p, &events, now) {
        out.push_str(&format!("{} {} {}: {verdict}\n", rule.kind, rule.action, rule.target));
    }
    out.push_str(&format!("policy {}: {}\n", p.id, evaluate_policy(&p, &events, now)));
    Ok(out)
}

/// Rights applicable under a legal basis (clause, prefixed name or IRI).
pub fn rights(legal_basis: &str, ds: &VocabDataset) -> anyhow::Result<String> {
    let basis = ds.resolve_legal_basis(legal_basis)?;
    let mut out = format!("{} ({})\n", basis.iri, basis.gdpr_clause);
    for iri in ds.applicable_rights(&basis.iri)? {
        let r = ds.right(iri).expect("table references registered rights");
        out.push_str(&format!("{}\t{}\t{}\n", r.gdpr_article, r.iri, r.label));
    }
    Ok(out)
}
