//! The acceptance gate: the identity suites at full bounds, the twisted
//! Poisson oracle and the determinism and exit-code contract of the binary.
//! Each criterion prints one PASS/FAIL line with its case count and time.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use deformkit::suite::{
    deform_suite, formality_suite, hochschild_suite, lemma_suite, linfty_suite, schouten_suite,
    twisted_oracle_suite, DeformConfig, HochschildConfig, LemmaConfig, LinftyConfig, SchoutenConfig, SuiteReport,
};
use deformkit_cli::verify::CORPUS;

struct Outcome {
    id: u32,
    title: &'static str,
    passed: bool,
    cases: u64,
    elapsed: Duration,
    budget: Duration,
    detail: String,
}

fn suite_criterion(id: u32, title: &'static str, budget_secs: u64, run: impl FnOnce() -> SuiteReport) -> Outcome {
    let start = Instant::now();
    let report = run();
    let elapsed = start.elapsed();
    let failed: Vec<String> = report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{} ({})", c.name, c.detail.as_deref().unwrap_or("")))
        .collect();
    Outcome {
        id,
        title,
        passed: failed.is_empty(),
        cases: report.cases(),
        elapsed,
        budget: Duration::from_secs(budget_secs),
        detail: if failed.is_empty() {
            format!("{} checks", report.checks.len())
        } else {
            format!("failed: {}", failed.join("; "))
        },
    }
}

fn binary(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deformkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("deformkit-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn cli_criterion() -> Outcome {
    let start = Instant::now();
    let mut problems = Vec::new();

    let first = binary(&["verify", "--suite", "all"]);
    let second = binary(&["verify", "--suite", "all"]);
    if first.status.code() != Some(0) {
        problems.push(format!("verify exited {:?}", first.status.code()));
    }
    if first.stdout != second.stdout {
        problems.push("verify output differs between runs".into());
    }
    let text = String::from_utf8_lossy(&first.stdout);
    let cases: u64 = serde_json::from_str::<serde_json::Value>(&text)
        .ok()
        .and_then(|v| {
            v["suites"]
                .as_array()
                .map(|s| s.iter().filter_map(|r| r["cases"].as_u64()).sum())
        })
        .unwrap_or(0);

    let malformed = scratch("malformed.json", "{\n  \"format_version\": \"1\",\n  \"context\": [\"x\"\n");
    let out = binary(&["d", malformed.to_str().unwrap()]);
    let stderr = String::from_utf8_lossy(&out.stderr);
    if out.status.code() != Some(2) || !stderr.contains("malformed.json:4:") {
        problems.push(format!("malformed document: exit {:?}, stderr {stderr:?}", out.status.code()));
    }

    let (_, fixture) = CORPUS.iter().find(|(n, _)| *n == "twisted-r4.json").unwrap();
    let problem: serde_json::Value = serde_json::from_str(fixture).unwrap();
    let h = scratch("h.json", &problem["payload"]["inputs"][0].to_string());
    let pi = scratch("pi.json", &problem["payload"]["inputs"][1].to_string());
    let out = binary(&["twisted-check", h.to_str().unwrap(), pi.to_str().unwrap()]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap_or_default();
    if out.status.code() != Some(1) || report["twisted_poisson"] != serde_json::Value::Bool(false) {
        problems.push(format!("twisted-check fixture: exit {:?}", out.status.code()));
    }
    let _ = std::fs::remove_dir_all(h.parent().unwrap());

    Outcome {
        id: 8,
        title: "CLI determinism and exit codes",
        passed: problems.is_empty(),
        cases,
        elapsed: start.elapsed(),
        budget: Duration::from_secs(600),
        detail: if problems.is_empty() {
            format!("{} bytes identical over two runs", first.stdout.len())
        } else {
            problems.join("; ")
        },
    }
}

#[test]
fn acceptance() {
    let gate = Instant::now();
    let outcomes = vec![
        suite_criterion(1, "Schouten suite", 60, || schouten_suite(SchoutenConfig::default())),
        suite_criterion(2, "Lemma suite", 300, || lemma_suite(&LemmaConfig::default())),
        suite_criterion(3, "L-infinity relation dichotomy", 120, || linfty_suite(LinftyConfig::default())),
        suite_criterion(4, "Hochschild suite", 300, || hochschild_suite(HochschildConfig::default())),
        suite_criterion(5, "Formality shadow", 300, || formality_suite(&HochschildConfig::default())),
        suite_criterion(6, "Deformation suite", 300, || deform_suite(DeformConfig::default())),
        suite_criterion(7, "Twisted Poisson oracle", 10, twisted_oracle_suite),
        cli_criterion(),
    ];
    let total = gate.elapsed();

    // Written to the raw handle so the lines survive output capture.
    let mut err = std::io::stderr();
    let mut all = true;
    for o in &outcomes {
        let ok = o.passed && o.elapsed <= o.budget;
        all &= ok;
        writeln!(
            err,
            "criterion {} {}: {} ({} cases, {:.1} s of {} s; {})",
            o.id,
            o.title,
            if ok { "PASS" } else { "FAIL" },
            o.cases,
            o.elapsed.as_secs_f64(),
            o.budget.as_secs(),
            o.detail
        )
        .unwrap();
    }
    let in_budget = total <= Duration::from_secs(600);
    writeln!(
        err,
        "gate total: {:.1} s of 600 s: {}",
        total.as_secs_f64(),
        if in_budget { "PASS" } else { "FAIL" }
    )
    .unwrap();
    assert!(all && in_budget, "acceptance criteria failed");
}
