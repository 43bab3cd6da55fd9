//! Corpus replay and the identity suites behind `verify`.

use clap::{Parser, ValueEnum};
use deformkit::hochschild::PrimitiveBounds;
use deformkit::suite::{
    deform_suite, formality_suite, hochschild_suite, lemma_suite, linfty_suite, schouten_suite,
    twisted_oracle_suite, DeformConfig, HochschildConfig, LemmaConfig, LinftyConfig, SchoutenConfig, SuiteReport,
};
use serde_json::{json, Value};

use crate::commands::{run, Cli, CliError, Command, Inputs};
use crate::format::{self, Document, Payload, RawProblem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Schouten,
    Lemma,
    Linfty,
    Hochschild,
    Deform,
    All,
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub suite: Suite,
    pub bounds_degree: Option<u32>,
    pub bounds_order: Option<u32>,
}

macro_rules! corpus {
    ($($file:literal),* $(,)?) => {
        &[$(($file, include_str!(concat!("../corpus/", $file)))),*]
    };
}

/// The shipped problems, in replay order.
pub const CORPUS: &[(&str, &str)] = corpus![
    "poly-mul.json",
    "poly-derive.json",
    "schouten-vector-fields.json",
    "schouten-function.json",
    "wedge.json",
    "d-one-form.json",
    "contract.json",
    "ia-bivector.json",
    "phi-eval-r3.json",
    "lemma-check.json",
    "linfty-closed.json",
    "linfty-non-closed.json",
    "twisted-r3.json",
    "twisted-r4.json",
    "mc-defect-r4.json",
    "hoch-delta-identity.json",
    "hoch-gb.json",
    "hoch-cup.json",
    "hoch-ia.json",
    "hkr-bivector.json",
    "primitive-hkr-bivector.json",
    "primitive-delta.json",
    "mc-solve-flat.json",
    "mc-solve-r4-linear.json",
    "mc-solve-r4-constant.json",
    "defect-series-r4.json",
    "gauge-flat.json",
    "gauge-equiv-scaled.json",
];

struct CorpusInputs<'a> {
    problem: &'a RawProblem,
    source: &'a str,
}

impl Inputs for CorpusInputs<'_> {
    fn load(&self, name: &str) -> Result<Document, CliError> {
        let idx = name
            .strip_prefix('@')
            .and_then(|k| k.parse::<usize>().ok())
            .filter(|&k| k < self.problem.inputs.len())
            .ok_or_else(|| CliError::Usage(format!("{}: no input `{name}`", self.source)))?;
        Ok(format::decode(
            &self.problem.inputs[idx],
            &format!("{}: inputs[{idx}]", self.source),
        )?)
    }
}

/// Every field of `expected` is present in `actual` with a matching value.
/// Arrays match as multisets of equal length, so term order is free.
pub fn subset_match(expected: &Value, actual: &Value) -> bool {
    match (expected, actual) {
        (Value::Object(e), Value::Object(a)) => e
            .iter()
            .all(|(k, v)| a.get(k).is_some_and(|av| subset_match(v, av))),
        (Value::Array(e), Value::Array(a)) => {
            if e.len() != a.len() {
                return false;
            }
            let mut used = vec![false; a.len()];
            e.iter().all(|x| {
                let hit = (0..a.len()).find(|&i| !used[i] && subset_match(x, &a[i]));
                hit.map(|i| used[i] = true).is_some()
            })
        }
        _ => expected == actual,
    }
}

/// Replays one problem; `Err` carries the reason it did not re-derive.
pub fn replay(source: &str, text: &str) -> Result<(), String> {
    let doc = format::parse_document(text, source).map_err(|e| e.to_string())?;
    let Payload::Problem(problem) = doc.payload else {
        return Err(format!("{source}: not a problem document"));
    };
    let argv = std::iter::once("deformkit".to_string())
        .chain(problem.args.iter().cloned())
        .chain(["--emit".to_string(), "json".to_string()]);
    let cli = Cli::try_parse_from(argv).map_err(|e| format!("{source}: {}", e.kind()))?;
    if matches!(cli.command, Command::Verify { .. }) {
        return Err(format!("{source}: problems cannot nest verify"));
    }
    let inputs = CorpusInputs {
        problem: &problem,
        source,
    };
    let (exit, stdout) = match run(&cli, &inputs) {
        Ok(out) => (out.exit, out.stdout),
        Err(e) => (2, e.to_string()),
    };
    if exit != problem.expected_exit {
        return Err(format!("exit {exit}, expected {}", problem.expected_exit));
    }
    if let Some(expected) = &problem.expected {
        let actual: Value = serde_json::from_str(&stdout).map_err(|e| format!("output is not JSON: {e}"))?;
        if !subset_match(expected, &actual) {
            return Err(format!("output differs from expected: {}", actual));
        }
    }
    Ok(())
}

fn suites(opts: &VerifyOptions) -> Vec<SuiteReport> {
    let deg = opts.bounds_degree;
    let want = |s: Suite| opts.suite == Suite::All || opts.suite == s;
    let merge = |mut a: SuiteReport, b: SuiteReport| {
        a.checks.extend(b.checks);
        a
    };
    let mut out = Vec::new();
    if want(Suite::Schouten) {
        out.push(schouten_suite(SchoutenConfig {
            max_nvars: 3,
            poly_degree: deg.unwrap_or(2),
            mv_degree: 3,
        }));
    }
    if want(Suite::Lemma) {
        out.push(lemma_suite(&LemmaConfig {
            nvars: vec![2, 3],
            form_poly_degree: deg.unwrap_or(2),
            ..LemmaConfig::default()
        }));
    }
    if want(Suite::Linfty) {
        out.push(merge(linfty_suite(LinftyConfig::default()), twisted_oracle_suite()));
    }
    if want(Suite::Hochschild) {
        let cfg = HochschildConfig {
            nvars: 2,
            bounds: PrimitiveBounds {
                poly_degree: deg.unwrap_or(2),
                op_order: opts.bounds_order.unwrap_or(2),
            },
            ..HochschildConfig::default()
        };
        out.push(merge(hochschild_suite(cfg), formality_suite(&cfg)));
    }
    if want(Suite::Deform) {
        out.push(deform_suite(DeformConfig::default()));
    }
    out
}

/// Runs the corpus and the selected suites. Returns the JSON report, the
/// overall verdict and a line-per-check text rendering.
pub fn run_verify(opts: &VerifyOptions) -> (Value, bool, String) {
    let mut passed = true;
    let mut text = String::new();
    let mut corpus = Vec::new();
    for (name, body) in CORPUS {
        let r = replay(name, body);
        passed &= r.is_ok();
        text.push_str(&format!("{} corpus/{name}\n", verdict(r.is_ok())));
        let mut entry = json!({"problem": name, "passed": r.is_ok()});
        if let Err(why) = r {
            text.push_str(&format!("    {why}\n"));
            entry["detail"] = json!(why);
        }
        corpus.push(entry);
    }
    let mut reports = Vec::new();
    for s in suites(opts) {
        passed &= s.passed();
        let checks: Vec<Value> = s
            .checks
            .iter()
            .map(|c| {
                text.push_str(&format!("{} {}/{} ({} cases)\n", verdict(c.passed), s.suite, c.name, c.cases));
                json!({"check": c.name, "passed": c.passed, "cases": c.cases, "detail": c.detail})
            })
            .collect();
        reports.push(json!({"suite": s.suite, "passed": s.passed(), "cases": s.cases(), "checks": checks}));
    }
    text.push_str(&format!("{}\n", if passed { "verify: all passed" } else { "verify: FAILED" }));
    (
        json!({"report": "verify", "passed": passed, "corpus": corpus, "suites": reports}),
        passed,
        text,
    )
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_replays() {
        for (name, body) in CORPUS {
            if let Err(why) = replay(name, body) {
                panic!("{name}: {why}");
            }
        }
    }

    #[test]
    fn altered_expectations_are_caught() {
        let (name, body) = CORPUS.iter().find(|(n, _)| *n == "mc-defect-r4.json").unwrap();
        assert!(replay(name, &body.replace("\"-6\"", "\"6\"")).is_err());
        assert!(replay(name, &body.replace("\"expected_exit\": 0", "\"expected_exit\": 1")).is_err());
    }

    #[test]
    fn subset_matching() {
        let actual = json!({"a": 1, "b": {"c": [1, 2], "d": "x"}});
        assert!(subset_match(&json!({"b": {"c": [1, 2]}}), &actual));
        assert!(!subset_match(&json!({"b": {"c": [1]}}), &actual));
        assert!(!subset_match(&json!({"e": 1}), &actual));
        assert!(subset_match(&json!({"b": {"c": [2, 1]}}), &actual));
    }
}
