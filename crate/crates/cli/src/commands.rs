//! Command-line surface and dispatch.

use std::io::Read;

use clap::{Parser, Subcommand, ValueEnum};
use deformkit::chevalley::{
    cochain_bracket, cochain_differential, cochain_equal_on_basis, phi, structure_cochain, vanishes_on_basis,
    BasisBounds, Cochain,
};
use deformkit::deform::{
    defect_series, gauge_equivalent, gauge_flow, mc_solve, ArtinSeries, GaugeParam, SolveStatus,
};
use deformkit::hochschild::{
    brace, cup, delta_primitive, gerstenhaber, hkr, hoch_delta, i_func_hoch, MultiDiffOp, PrimitiveBounds,
    PrimitiveOutcome,
};
use deformkit::twisted::{linfty_relations_check, make_twisted, LinftyBounds};
use deformkit::{DiffForm, PolyVector, Polynomial, Rational, VarContext};
use serde_json::{json, Value};
use thiserror::Error;

use crate::format::{self, encode_payload, CochainSpec, Document, FormatError, Payload};
use crate::verify::{run_verify, Suite, VerifyOptions};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{source_name}: {message}")]
    Io { source_name: String, message: String },
    #[error("{source_name}: expected a {expected} document, found {found}")]
    WrongKind {
        source_name: String,
        expected: &'static str,
        found: &'static str,
    },
    #[error("{0}")]
    Math(#[from] deformkit::Error),
    #[error("{0}")]
    Usage(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "deformkit", version, about = "Exact graded deformation calculus on polynomial multivector fields")]
pub struct Cli {
    /// Rendering of reports and documents on stdout.
    #[arg(long, value_enum, default_value_t = Emit::Json, global = true)]
    pub emit: Emit,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
    Scale,
    Derive,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Polynomial arithmetic.
    Poly {
        #[arg(value_enum)]
        op: PolyOp,
        a: String,
        b: Option<String>,
        /// Scalar for `scale`, as `p` or `p/q`.
        #[arg(long, allow_hyphen_values = true)]
        by: Option<String>,
        /// Variable name for `derive`.
        #[arg(long)]
        var: Option<String>,
    },
    /// Wedge product of two multivectors or two forms.
    Wedge { a: String, b: String },
    /// Schouten bracket of two multivectors.
    Schouten { a: String, b: String },
    /// Exterior derivative of a form.
    D { form: String },
    /// Contraction of a one-form into a multivector.
    Contract { form: String, multivector: String },
    /// `i_a π = [a, π]` for a function `a`.
    Ia { function: String, multivector: String },
    /// Evaluates `Φ(ω)` or the structure cochain on multivectors.
    PhiEval { cochain: String, args: Vec<String> },
    /// Checks `∂Φ(α) = Φ(dα)` for each form and `[Φ(α), Φ(β)] = 0` for a pair.
    LemmaCheck {
        #[arg(num_args = 1..=2, required = true)]
        forms: Vec<String>,
        #[arg(long, default_value_t = 2)]
        bounds_degree: u32,
    },
    /// Checks the L∞ relations of `m` and `Φ(H)`; `H` need not be closed.
    LinftyCheck { h: String },
    /// The trivector `[π,π] - Φ(H)(π,π,π)`.
    McDefect { h: String, pi: String },
    /// Whether `π` is an `H`-twisted Poisson structure.
    TwistedCheck { h: String, pi: String },
    /// Hochschild cochain operations.
    Hoch {
        #[command(subcommand)]
        op: HochCommand,
    },
    /// Extends `π_1` to a formal solution mod `t^{N+1}`.
    McSolve {
        h: String,
        pi1: String,
        #[arg(long, default_value_t = 2)]
        truncation: usize,
        #[arg(long, default_value_t = 1)]
        bounds_degree: u32,
    },
    /// Applies the gauge flow of `ξ` to `γ`.
    Gauge { h: String, gamma: String, xi: String },
    /// Searches for `ξ` with `gauge(γ1, ξ) = γ2`.
    GaugeEquiv {
        h: String,
        gamma1: String,
        gamma2: String,
        #[arg(long, default_value_t = 2)]
        bounds_degree: u32,
    },
    /// The defect of a series order by order.
    DefectSeries { h: String, pi: String },
    /// Replays the shipped corpus and runs the identity suites.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Coefficient degree of basis elements.
        #[arg(long)]
        bounds_degree: Option<u32>,
        /// Operator order of basis cochains.
        #[arg(long)]
        bounds_order: Option<u32>,
    },
}

#[derive(Debug, Subcommand)]
pub enum HochCommand {
    /// Hochschild differential.
    Delta { d: String },
    /// Gerstenhaber bracket.
    Gb { d: String, e: String },
    /// Cup product.
    Cup { d: String, e: String },
    /// Brace `D{E_1, …, E_m}`.
    Brace { d: String, args: Vec<String> },
    /// `i_a D`.
    Ia { function: String, d: String },
    /// Antisymmetrization of a multivector.
    Hkr { multivector: String },
    /// A cochain `ξ` with `δξ = T`, if one exists within bounds.
    Primitive {
        t: String,
        #[arg(long, default_value_t = 2)]
        bounds_degree: u32,
        #[arg(long, default_value_t = 2)]
        bounds_order: u32,
    },
}

/// Resolves input names to documents.
pub trait Inputs {
    fn load(&self, name: &str) -> Result<Document, CliError>;
}

/// Reads files, or stdin for `-`.
pub struct FileInputs;

impl Inputs for FileInputs {
    fn load(&self, name: &str) -> Result<Document, CliError> {
        let text = if name == "-" {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io {
                source_name: "<stdin>".into(),
                message: e.to_string(),
            })?;
            s
        } else {
            std::fs::read_to_string(name).map_err(|e| CliError::Io {
                source_name: name.into(),
                message: e.to_string(),
            })?
        };
        Ok(format::parse_document(&text, if name == "-" { "<stdin>" } else { name })?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub exit: i32,
}

enum Produced {
    Doc(Document),
    Report { value: Value, passed: bool, text: Option<String> },
}

struct Session<'a> {
    inputs: &'a dyn Inputs,
    context: Option<(VarContext, String)>,
}

impl Session<'_> {
    fn load(&mut self, name: &str) -> Result<Document, CliError> {
        let doc = self.inputs.load(name)?;
        match &self.context {
            None => self.context = Some((doc.context.clone(), name.to_string())),
            Some((ctx, first)) if *ctx != doc.context => {
                return Err(CliError::Usage(format!(
                    "{name}: context [{}] differs from [{}] in {first}",
                    doc.context.names().join(", "),
                    ctx.names().join(", ")
                )))
            }
            Some(_) => {}
        }
        Ok(doc)
    }

    fn ctx(&self) -> VarContext {
        self.context.as_ref().map(|c| c.0.clone()).unwrap_or_else(|| VarContext::numbered(0))
    }

    fn poly(&mut self, name: &str) -> Result<Polynomial, CliError> {
        match self.load(name)?.payload {
            Payload::Polynomial(p) => Ok(p),
            other => Err(wrong(name, "polynomial", &other)),
        }
    }

    /// Multivector, or a polynomial read as a function.
    fn mv(&mut self, name: &str) -> Result<PolyVector, CliError> {
        match self.load(name)?.payload {
            Payload::Multivector(v) => Ok(v),
            Payload::Polynomial(p) => Ok(PolyVector::function(p)),
            other => Err(wrong(name, "multivector", &other)),
        }
    }

    /// Form, or a polynomial read as a 0-form.
    fn form(&mut self, name: &str) -> Result<DiffForm, CliError> {
        match self.load(name)?.payload {
            Payload::Form(w) => Ok(w),
            Payload::Polynomial(p) => Ok(DiffForm::function(p)),
            other => Err(wrong(name, "form", &other)),
        }
    }

    fn op(&mut self, name: &str) -> Result<MultiDiffOp, CliError> {
        match self.load(name)?.payload {
            Payload::MultiDiffOp(d) => Ok(d),
            Payload::Polynomial(p) => Ok(MultiDiffOp::function(&p)),
            other => Err(wrong(name, "multidiffop", &other)),
        }
    }

    fn series(&mut self, name: &str) -> Result<ArtinSeries, CliError> {
        match self.load(name)?.payload {
            Payload::Series(s) => Ok(s),
            other => Err(wrong(name, "artin-series", &other)),
        }
    }

    fn doc(&self, payload: Payload) -> Produced {
        Produced::Doc(Document {
            context: self.ctx(),
            payload,
        })
    }
}

fn wrong(name: &str, expected: &'static str, found: &Payload) -> CliError {
    CliError::WrongKind {
        source_name: name.to_string(),
        expected,
        found: found.kind(),
    }
}

fn payload_json(p: Payload) -> Value {
    serde_json::to_value(encode_payload(&p)).expect("payloads serialize")
}

fn mv_json(v: &PolyVector) -> Value {
    payload_json(Payload::Multivector(v.clone()))
}

fn witness_json(args: &[PolyVector]) -> Value {
    Value::Array(args.iter().map(mv_json).collect())
}

fn report(value: Value, passed: bool) -> Produced {
    Produced::Report {
        value,
        passed,
        text: None,
    }
}

fn twist(h: &DiffForm) -> Result<Cochain, CliError> {
    if h.is_zero() {
        return Ok(Cochain::zero(h.nvars(), 3, 1));
    }
    Ok(phi(h)?)
}

/// Runs a parsed command line against `inputs`.
pub fn run(cli: &Cli, inputs: &dyn Inputs) -> Result<Output, CliError> {
    let mut s = Session { inputs, context: None };
    let produced = dispatch(&cli.command, &mut s)?;
    Ok(render(produced, cli.emit))
}

fn dispatch(cmd: &Command, s: &mut Session<'_>) -> Result<Produced, CliError> {
    Ok(match cmd {
        Command::Poly { op, a, b, by, var } => {
            let pa = s.poly(a)?;
            let need_b = |b: &Option<String>| b.clone().ok_or_else(|| CliError::Usage(format!("`poly {op:?}` needs two inputs").to_lowercase()));
            let out = match op {
                PolyOp::Add => pa.add(&s.poly(&need_b(b)?)?)?,
                PolyOp::Sub => pa.sub(&s.poly(&need_b(b)?)?)?,
                PolyOp::Mul => pa.mul(&s.poly(&need_b(b)?)?)?,
                PolyOp::Scale => {
                    let q = by.as_deref().ok_or_else(|| CliError::Usage("`poly scale` needs --by".into()))?;
                    let q: Rational = q.parse().map_err(|e: deformkit::ParseError| CliError::Usage(format!("--by: {}", e.message)))?;
                    pa.scale(&q)
                }
                PolyOp::Derive => {
                    let v = var.as_deref().ok_or_else(|| CliError::Usage("`poly derive` needs --var".into()))?;
                    let i = s.ctx().index_of(v).ok_or_else(|| CliError::Usage(format!("--var: unknown variable `{v}`")))?;
                    pa.derive(i)?
                }
            };
            s.doc(Payload::Polynomial(out))
        }
        Command::Wedge { a, b } => {
            let da = s.load(a)?;
            match da.payload {
                Payload::Form(w) => {
                    let w2 = s.form(b)?;
                    s.doc(Payload::Form(w.wedge(&w2)?))
                }
                Payload::Multivector(v) => {
                    let v2 = s.mv(b)?;
                    s.doc(Payload::Multivector(v.wedge(&v2)?))
                }
                Payload::Polynomial(p) => {
                    let v2 = s.mv(b)?;
                    s.doc(Payload::Multivector(PolyVector::function(p).wedge(&v2)?))
                }
                other => return Err(wrong(a, "multivector or form", &other)),
            }
        }
        Command::Schouten { a, b } => {
            let (va, vb) = (s.mv(a)?, s.mv(b)?);
            s.doc(Payload::Multivector(va.schouten(&vb)?))
        }
        Command::D { form } => {
            let w = s.form(form)?;
            s.doc(Payload::Form(w.d()))
        }
        Command::Contract { form, multivector } => {
            let (w, v) = (s.form(form)?, s.mv(multivector)?);
            s.doc(Payload::Multivector(v.contract(&w)?))
        }
        Command::Ia { function, multivector } => {
            let (a, v) = (s.poly(function)?, s.mv(multivector)?);
            s.doc(Payload::Multivector(v.i_func(&a)?))
        }
        Command::PhiEval { cochain, args } => {
            let c = match s.load(cochain)?.payload {
                Payload::Form(w) => phi(&w)?,
                Payload::Polynomial(p) => phi(&DiffForm::function(p))?,
                Payload::CochainSpec(CochainSpec::Phi(w)) => phi(&w)?,
                Payload::CochainSpec(CochainSpec::Structure) => structure_cochain(s.ctx().len()),
                other => return Err(wrong(cochain, "form or cochain-spec", &other)),
            };
            let vals = args.iter().map(|a| s.mv(a)).collect::<Result<Vec<_>, _>>()?;
            s.doc(Payload::Multivector(c.eval(&vals)?))
        }
        Command::LemmaCheck { forms, bounds_degree } => lemma_check(s, forms, *bounds_degree)?,
        Command::LinftyCheck { h } => {
            let h = s.form(h)?;
            let n = h.nvars();
            let closed = h.d().is_zero();
            let r = linfty_relations_check(&structure_cochain(n), &twist(&h)?, LinftyBounds::for_context(3))?;
            let relations: Vec<Value> = r
                .relations
                .iter()
                .map(|rel| {
                    json!({
                        "relation": rel.name,
                        "passed": rel.passed,
                        "tuples": rel.tuples_checked,
                        "witness": rel.witness.as_ref().map(|(args, v)| json!({"args": witness_json(args), "value": mv_json(v)})),
                    })
                })
                .collect();
            report(json!({"report": "linfty-check", "closed": closed, "passed": r.passed(), "relations": relations}), r.passed())
        }
        Command::McDefect { h, pi } => {
            let (h, p) = (s.form(h)?, s.mv(pi)?);
            s.doc(Payload::Multivector(make_twisted(&h)?.mc_defect(&p)?))
        }
        Command::TwistedCheck { h, pi } => {
            let (h, p) = (s.form(h)?, s.mv(pi)?);
            let st = make_twisted(&h)?;
            let defect = st.mc_defect(&p)?;
            let ok = defect.is_zero();
            report(
                json!({
                    "report": "twisted-check",
                    "twisted_poisson": ok,
                    "bracket": mv_json(&p.schouten(&p)?),
                    "phi_h": mv_json(&st.phi_h(&p, &p, &p)?),
                    "defect": mv_json(&defect),
                }),
                ok,
            )
        }
        Command::Hoch { op } => hoch(s, op)?,
        Command::McSolve {
            h,
            pi1,
            truncation,
            bounds_degree,
        } => {
            let (h, p) = (s.form(h)?, s.mv(pi1)?);
            let st = make_twisted(&h)?;
            let r = mc_solve(&st, &p, *truncation, *bounds_degree)?;
            let mut value = json!({
                "report": "mc-solve",
                "bounds_degree": r.poly_degree,
                "residual_terms": r.residual_terms,
                "solution": payload_json(Payload::Series(r.solution.clone())),
            });
            match &r.status {
                SolveStatus::Solved => value["status"] = json!("solved"),
                SolveStatus::Obstructed { order, residual } => {
                    value["status"] = json!("obstructed");
                    value["order"] = json!(order);
                    value["residual"] = mv_json(residual);
                }
            }
            report(value, r.is_solved())
        }
        Command::Gauge { h, gamma, xi } => {
            let (h, g, x) = (s.form(h)?, s.series(gamma)?, s.series(xi)?);
            let st = make_twisted(&h)?;
            s.doc(Payload::Series(gauge_flow(&st, &g, &GaugeParam::new(x)?)?))
        }
        Command::GaugeEquiv {
            h,
            gamma1,
            gamma2,
            bounds_degree,
        } => {
            let (h, g1, g2) = (s.form(h)?, s.series(gamma1)?, s.series(gamma2)?);
            let st = make_twisted(&h)?;
            let r = gauge_equivalent(&st, &g1, &g2, *bounds_degree)?;
            let mut value = json!({"report": "gauge-equiv", "equivalent": r.equivalent, "bounds_degree": bounds_degree});
            if let Some(w) = &r.witness {
                value["witness"] = payload_json(Payload::Series(w.series().clone()));
            }
            if let Some((order, residual)) = &r.failure {
                value["failed_order"] = json!(order);
                value["residual"] = mv_json(residual);
            }
            report(value, r.equivalent)
        }
        Command::DefectSeries { h, pi } => {
            let (h, p) = (s.form(h)?, s.series(pi)?);
            let st = make_twisted(&h)?;
            let d = defect_series(&st, &p)?;
            let orders: Vec<Value> = d
                .iter()
                .enumerate()
                .map(|(i, v)| json!({"order": i + 1, "terms": v.num_terms(), "value": mv_json(v)}))
                .collect();
            let vanishes = d.iter().all(|v| v.is_zero());
            report(json!({"report": "defect-series", "vanishes": vanishes, "orders": orders}), true)
        }
        Command::Verify {
            suite,
            bounds_degree,
            bounds_order,
        } => {
            let opts = VerifyOptions {
                suite: *suite,
                bounds_degree: *bounds_degree,
                bounds_order: *bounds_order,
            };
            let (value, passed, text) = run_verify(&opts);
            Produced::Report {
                value,
                passed,
                text: Some(text),
            }
        }
    })
}

fn lemma_check(s: &mut Session<'_>, forms: &[String], degree: u32) -> Result<Produced, CliError> {
    let ws = forms.iter().map(|f| s.form(f)).collect::<Result<Vec<_>, _>>()?;
    let mut passed = true;
    let mut checks = Vec::new();
    for w in &ws {
        if w.degree().is_none() && !w.is_zero() {
            return Err(deformkit::Error::WrongDegree {
                expected: 0,
                found: "mixed".into(),
            }
            .into());
        }
        if w.is_zero() {
            continue;
        }
        let k = w.degree().unwrap_or(0);
        let lhs = cochain_differential(&phi(w)?)?;
        let dw = w.d();
        let rhs = if dw.is_zero() {
            Cochain::zero(w.nvars(), k + 1, k as i64 - 1)
        } else {
            phi(&dw)?
        };
        let r = cochain_equal_on_basis(&lhs, &rhs, BasisBounds::new(degree, 3).with_total_poly_degree(1).unordered())?;
        passed &= r.equal;
        checks.push(json!({
            "check": "d intertwines",
            "passed": r.equal,
            "tuples": r.tuples_checked,
            "witness": r.witness.map(|(args, a, b)| json!({"args": witness_json(&args), "lhs": mv_json(&a), "rhs": mv_json(&b)})),
        }));
    }
    if let [a, b] = ws.as_slice() {
        if !(a.is_zero() || b.is_zero() || a.degree() == Some(0) && b.degree() == Some(0)) {
            let c = cochain_bracket(&phi(a)?, &phi(b)?)?;
            let r = vanishes_on_basis(&c, BasisBounds::new(0, 3).unordered());
            passed &= r.equal;
            checks.push(json!({
                "check": "bracket vanishes",
                "passed": r.equal,
                "tuples": r.tuples_checked,
                "witness": r.witness.map(|(args, a, _)| json!({"args": witness_json(&args), "value": mv_json(&a)})),
            }));
        }
    }
    Ok(report(json!({"report": "lemma-check", "passed": passed, "checks": checks}), passed))
}

fn hoch(s: &mut Session<'_>, op: &HochCommand) -> Result<Produced, CliError> {
    Ok(match op {
        HochCommand::Delta { d } => {
            let d = s.op(d)?;
            s.doc(Payload::MultiDiffOp(hoch_delta(&d)))
        }
        HochCommand::Gb { d, e } => {
            let (d, e) = (s.op(d)?, s.op(e)?);
            s.doc(Payload::MultiDiffOp(gerstenhaber(&d, &e)?))
        }
        HochCommand::Cup { d, e } => {
            let (d, e) = (s.op(d)?, s.op(e)?);
            s.doc(Payload::MultiDiffOp(cup(&d, &e)?))
        }
        HochCommand::Brace { d, args } => {
            let d = s.op(d)?;
            let es = args.iter().map(|a| s.op(a)).collect::<Result<Vec<_>, _>>()?;
            s.doc(Payload::MultiDiffOp(brace(&d, &es)?))
        }
        HochCommand::Ia { function, d } => {
            let (a, d) = (s.poly(function)?, s.op(d)?);
            s.doc(Payload::MultiDiffOp(i_func_hoch(&a, &d)?))
        }
        HochCommand::Hkr { multivector } => {
            let v = s.mv(multivector)?;
            s.doc(Payload::MultiDiffOp(hkr(&v)?))
        }
        HochCommand::Primitive {
            t,
            bounds_degree,
            bounds_order,
        } => {
            let t = s.op(t)?;
            let bounds = PrimitiveBounds {
                poly_degree: *bounds_degree,
                op_order: *bounds_order,
            };
            match delta_primitive(&t, bounds) {
                PrimitiveOutcome::Found(x) => report(
                    json!({"report": "primitive", "found": true, "primitive": payload_json(Payload::MultiDiffOp(x))}),
                    true,
                ),
                PrimitiveOutcome::NotFound {
                    residual,
                    rank,
                    unknowns,
                } => report(
                    json!({
                        "report": "primitive",
                        "found": false,
                        "rank": rank,
                        "unknowns": unknowns,
                        "residual": payload_json(Payload::MultiDiffOp(residual)),
                    }),
                    false,
                ),
            }
        }
    })
}

fn render(p: Produced, emit: Emit) -> Output {
    match p {
        Produced::Doc(doc) => {
            let stdout = match emit {
                Emit::Json => format::to_json(&doc),
                Emit::Text => format!("{}\n", display(&doc)),
            };
            Output { stdout, exit: 0 }
        }
        Produced::Report { value, passed, text } => {
            let stdout = match emit {
                Emit::Json => {
                    let mut s = serde_json::to_string_pretty(&value).expect("reports serialize");
                    s.push('\n');
                    s
                }
                Emit::Text => text.unwrap_or_else(|| text_report(&value)),
            };
            Output {
                stdout,
                exit: if passed { 0 } else { 1 },
            }
        }
    }
}

fn display(doc: &Document) -> String {
    let ctx = Some(&doc.context);
    match &doc.payload {
        Payload::Polynomial(p) => p.display_with(ctx),
        Payload::Multivector(v) => v.display_with(ctx),
        Payload::Form(w) => w.display_with(ctx),
        Payload::CochainSpec(CochainSpec::Structure) => "m".into(),
        Payload::CochainSpec(CochainSpec::Phi(w)) => format!("phi({})", w.display_with(ctx)),
        Payload::MultiDiffOp(d) => d.display_with(ctx),
        Payload::Series(series) => {
            let parts: Vec<String> = series
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| format!("t^{}: {}", i + 1, c.display_with(ctx)))
                .collect();
            if parts.is_empty() {
                "0".into()
            } else {
                parts.join("\n")
            }
        }
        Payload::Problem(p) => format!("problem {}", p.name),
    }
}

/// `key: value` lines, nested values as compact JSON.
fn text_report(v: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(map) = v {
        for (k, val) in map {
            let rendered = match val {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{k}: {rendered}\n"));
        }
    } else {
        out.push_str(&format!("{v}\n"));
    }
    out
}
