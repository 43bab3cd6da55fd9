use std::io::Write;
use std::process::{Command, Output, Stdio};

use deformkit::{Monomial, PolyVector, Polynomial, Rational, VarContext};
use deformkit_cli::format::{parse_document, to_json, Document, Payload};
use proptest::prelude::*;

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_deformkit"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn doc(names: &[&str], payload: Payload) -> Document {
    Document {
        context: VarContext::new(names.iter().copied()).unwrap(),
        payload,
    }
}

fn write_temp(name: &str, d: &Document) -> String {
    let dir = std::env::temp_dir().join(format!("deformkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, to_json(d)).unwrap();
    path.to_string_lossy().into_owned()
}

fn vector_field(n: usize, dir: usize, coeff_var: usize) -> PolyVector {
    PolyVector::frame(n, &[dir]).unwrap().mul_poly(&Polynomial::var(n, coeff_var)).unwrap()
}

#[test]
fn schouten_reads_stdin_and_files() {
    let a = doc(&["x", "y"], Payload::Multivector(vector_field(2, 1, 0)));
    let b = write_temp("b.json", &doc(&["x", "y"], Payload::Multivector(vector_field(2, 0, 1))));
    let out = run(&["schouten", "-", &b], &to_json(&a));
    assert_eq!(out.status.code(), Some(0));
    let got = parse_document(&String::from_utf8(out.stdout).unwrap(), "stdout").unwrap();
    let Payload::Multivector(v) = got.payload else { panic!("not a multivector") };
    let expected = vector_field(2, 0, 0).sub(&vector_field(2, 1, 1)).unwrap();
    assert_eq!(v, expected);

    let text = run(&["schouten", "-", &b, "--emit", "text"], &to_json(&a));
    assert_eq!(String::from_utf8(text.stdout).unwrap(), format!("{}\n", expected.display_with(Some(&got.context))));
}

#[test]
fn usage_and_context_errors_exit_two() {
    assert_eq!(run(&["schouten"], "").status.code(), Some(2));
    let a = write_temp("ctx-a.json", &doc(&["x", "y"], Payload::Multivector(vector_field(2, 0, 0))));
    let b = write_temp("ctx-b.json", &doc(&["u", "v"], Payload::Multivector(vector_field(2, 0, 0))));
    let out = run(&["schouten", &a, &b], "");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("context"));
}

#[test]
fn scale_accepts_negative_fractions() {
    let p = doc(&["x"], Payload::Polynomial(Polynomial::var(1, 0)));
    let out = run(&["poly", "scale", "-", "--by", "-3/4"], &to_json(&p));
    let got = parse_document(&String::from_utf8(out.stdout).unwrap(), "stdout").unwrap();
    let Payload::Polynomial(q) = got.payload else { panic!("not a polynomial") };
    assert_eq!(q, Polynomial::var(1, 0).scale(&Rational::new(-3, 4)));
}

#[test]
fn verify_single_suite_text() {
    let out = run(&["verify", "--suite", "deform", "--emit", "text"], "");
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS deform/R4 obstructed with constant terms"));
    assert!(!text.contains("schouten/"));
    assert!(text.ends_with("verify: all passed\n"));
}

proptest! {
    #[test]
    fn documents_round_trip(terms in prop::collection::vec((prop::collection::vec(0u16..3, 3), -5i64..5, 1i64..4), 0..6)) {
        let p = Polynomial::from_terms(3, terms.iter().map(|(e, a, b)| (Monomial::from_exps(e), Rational::new(*a, *b))).collect());
        let d = doc(&["x", "y", "z"], Payload::Polynomial(p.clone()));
        let text = to_json(&d);
        let back = parse_document(&text, "t").unwrap();
        prop_assert_eq!(to_json(&back), text);
        let Payload::Polynomial(q) = back.payload else { panic!("not a polynomial") };
        prop_assert_eq!(q, p);
    }
}
