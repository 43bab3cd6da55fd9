//! JSON exchange documents.
//!
//! Every document carries a format version, the variable names of its
//! context and one payload. Rationals are strings `"p"` or `"p/q"`,
//! monomials are exponent arrays, frames and coframes are strictly
//! increasing 0-based variable indices. Serialization lists terms in the
//! library's canonical order, so canonical documents round-trip byte for
//! byte.

use deformkit::deform::{ArtinRing, ArtinSeries};
use deformkit::hochschild::MultiDiffOp;
use deformkit::{DiffForm, Frame, Monomial, PolyVector, Polynomial, Rational, VarContext};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{source_name}:{line}:{column}: {message}")]
    Syntax {
        source_name: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{source_name}: at {path}: {message}")]
    Schema {
        source_name: String,
        path: String,
        message: String,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RawDocument {
    pub format_version: String,
    pub context: Vec<String>,
    pub payload: RawPayload,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RawTerm {
    pub coeff: String,
    pub exps: Vec<u16>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RawFrameTerm {
    pub frame: Vec<usize>,
    pub poly: Vec<RawTerm>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RawCoframeTerm {
    pub coframe: Vec<usize>,
    pub poly: Vec<RawTerm>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RawOpTerm {
    pub poly: Vec<RawTerm>,
    pub orders: Vec<Vec<u16>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RawOrder {
    pub order: usize,
    pub terms: Vec<RawFrameTerm>,
}

/// A stored invocation with its expected outcome.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RawProblem {
    pub name: String,
    /// Command line after the program name; `@k` refers to `inputs[k]`.
    pub args: Vec<String>,
    pub inputs: Vec<RawDocument>,
    pub expected_exit: i32,
    /// Every field given here must match the command's JSON output.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<serde_json::Value>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RawPayload {
    Polynomial { terms: Vec<RawTerm> },
    Multivector { terms: Vec<RawFrameTerm> },
    Form { terms: Vec<RawCoframeTerm> },
    /// `op` is `"m"` for the structure cochain or `"phi"` with a form.
    CochainSpec {
        op: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        form: Option<Vec<RawCoframeTerm>>,
    },
    Multidiffop { arity: usize, terms: Vec<RawOpTerm> },
    ArtinSeries { truncation: usize, coeffs: Vec<RawOrder> },
    Problem(Box<RawProblem>),
}

#[derive(Clone, Debug)]
pub enum CochainSpec {
    Structure,
    Phi(DiffForm),
}

#[derive(Clone, Debug)]
pub enum Payload {
    Polynomial(Polynomial),
    Multivector(PolyVector),
    Form(DiffForm),
    CochainSpec(CochainSpec),
    MultiDiffOp(MultiDiffOp),
    Series(ArtinSeries),
    Problem(Box<RawProblem>),
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::Polynomial(_) => "polynomial",
            Payload::Multivector(_) => "multivector",
            Payload::Form(_) => "form",
            Payload::CochainSpec(_) => "cochain-spec",
            Payload::MultiDiffOp(_) => "multidiffop",
            Payload::Series(_) => "artin-series",
            Payload::Problem(_) => "problem",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Document {
    pub context: VarContext,
    pub payload: Payload,
}

/// Tracks the JSON path of the value being validated.
struct Decoder<'a> {
    source_name: &'a str,
    nvars: usize,
}

impl Decoder<'_> {
    fn err(&self, path: &str, message: impl Into<String>) -> FormatError {
        FormatError::Schema {
            source_name: self.source_name.to_string(),
            path: path.to_string(),
            message: message.into(),
        }
    }

    fn monomial(&self, path: &str, exps: &[u16]) -> Result<Monomial, FormatError> {
        if exps.len() != self.nvars {
            return Err(self.err(
                path,
                format!("expected {} exponents, found {}", self.nvars, exps.len()),
            ));
        }
        Ok(Monomial::from_exps(exps))
    }

    fn poly(&self, path: &str, terms: &[RawTerm]) -> Result<Polynomial, FormatError> {
        let mut out = Vec::with_capacity(terms.len());
        for (i, t) in terms.iter().enumerate() {
            let p = format!("{path}[{i}]");
            let c: Rational = t
                .coeff
                .parse()
                .map_err(|e: deformkit::ParseError| self.err(&format!("{p}.coeff"), e.message))?;
            out.push((self.monomial(&format!("{p}.exps"), &t.exps)?, c));
        }
        Ok(Polynomial::from_terms(self.nvars, out))
    }

    fn frame(&self, path: &str, idx: &[usize]) -> Result<Frame, FormatError> {
        Frame::from_indices(idx, self.nvars).map_err(|e| self.err(path, e.to_string()))
    }

    fn multivector(&self, path: &str, terms: &[RawFrameTerm]) -> Result<PolyVector, FormatError> {
        let mut comps = Vec::with_capacity(terms.len());
        for (i, t) in terms.iter().enumerate() {
            let p = format!("{path}[{i}]");
            comps.push((
                self.frame(&format!("{p}.frame"), &t.frame)?,
                self.poly(&format!("{p}.poly"), &t.poly)?,
            ));
        }
        PolyVector::from_components(self.nvars, comps).map_err(|e| self.err(path, e.to_string()))
    }

    fn form(&self, path: &str, terms: &[RawCoframeTerm]) -> Result<DiffForm, FormatError> {
        let mut comps = Vec::with_capacity(terms.len());
        for (i, t) in terms.iter().enumerate() {
            let p = format!("{path}[{i}]");
            comps.push((
                self.frame(&format!("{p}.coframe"), &t.coframe)?,
                self.poly(&format!("{p}.poly"), &t.poly)?,
            ));
        }
        DiffForm::from_components(self.nvars, comps).map_err(|e| self.err(path, e.to_string()))
    }

    fn payload(&self, raw: &RawPayload) -> Result<Payload, FormatError> {
        let path = "payload.terms";
        Ok(match raw {
            RawPayload::Polynomial { terms } => Payload::Polynomial(self.poly(path, terms)?),
            RawPayload::Multivector { terms } => Payload::Multivector(self.multivector(path, terms)?),
            RawPayload::Form { terms } => Payload::Form(self.form(path, terms)?),
            RawPayload::CochainSpec { op, form } => match (op.as_str(), form) {
                ("m", None) => Payload::CochainSpec(CochainSpec::Structure),
                ("phi", Some(f)) => Payload::CochainSpec(CochainSpec::Phi(self.form("payload.form", f)?)),
                ("phi", None) => return Err(self.err("payload.form", "`phi` needs a form")),
                ("m", Some(_)) => return Err(self.err("payload.form", "`m` takes no form")),
                _ => return Err(self.err("payload.op", format!("unknown cochain `{op}`, expected `m` or `phi`"))),
            },
            RawPayload::Multidiffop { arity, terms } => {
                let mut comps = Vec::with_capacity(terms.len());
                for (i, t) in terms.iter().enumerate() {
                    let p = format!("{path}[{i}]");
                    if t.orders.len() != *arity {
                        return Err(self.err(
                            &format!("{p}.orders"),
                            format!("expected {arity} orders, found {}", t.orders.len()),
                        ));
                    }
                    let mut orders = Vec::with_capacity(t.orders.len());
                    for (j, o) in t.orders.iter().enumerate() {
                        orders.push(self.monomial(&format!("{p}.orders[{j}]"), o)?);
                    }
                    comps.push((self.poly(&format!("{p}.poly"), &t.poly)?, orders));
                }
                Payload::MultiDiffOp(
                    MultiDiffOp::from_components(self.nvars, *arity, comps).map_err(|e| self.err(path, e.to_string()))?,
                )
            }
            RawPayload::ArtinSeries { truncation, coeffs } => {
                let ring = ArtinRing::new(*truncation).map_err(|e| self.err("payload.truncation", e.to_string()))?;
                let mut values = vec![PolyVector::zero(self.nvars); *truncation];
                let mut seen = vec![false; *truncation];
                for (i, c) in coeffs.iter().enumerate() {
                    let p = format!("payload.coeffs[{i}]");
                    if c.order == 0 || c.order > *truncation {
                        return Err(self.err(
                            &format!("{p}.order"),
                            format!("order must lie in 1..={truncation}, found {}", c.order),
                        ));
                    }
                    if seen[c.order - 1] {
                        return Err(self.err(&format!("{p}.order"), format!("order {} given twice", c.order)));
                    }
                    seen[c.order - 1] = true;
                    values[c.order - 1] = self.multivector(&format!("{p}.terms"), &c.terms)?;
                }
                Payload::Series(ArtinSeries::new(ring, self.nvars, values).map_err(|e| self.err("payload", e.to_string()))?)
            }
            RawPayload::Problem(p) => Payload::Problem(p.clone()),
        })
    }
}

/// Parses and validates a document; `source_name` labels error messages.
pub fn parse_document(text: &str, source_name: &str) -> Result<Document, FormatError> {
    let raw: RawDocument = serde_json::from_str(text).map_err(|e| FormatError::Syntax {
        source_name: source_name.to_string(),
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })?;
    decode(&raw, source_name)
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

pub fn decode(raw: &RawDocument, source_name: &str) -> Result<Document, FormatError> {
    let schema = |path: &str, message: String| FormatError::Schema {
        source_name: source_name.to_string(),
        path: path.to_string(),
        message,
    };
    if raw.format_version != FORMAT_VERSION {
        return Err(schema(
            "format_version",
            format!("unsupported format version `{}`, expected `{FORMAT_VERSION}`", raw.format_version),
        ));
    }
    let context = VarContext::new(raw.context.iter().cloned()).map_err(|e| schema("context", e.to_string()))?;
    let dec = Decoder {
        source_name,
        nvars: context.len(),
    };
    let payload = dec.payload(&raw.payload)?;
    Ok(Document { context, payload })
}

fn raw_poly(p: &Polynomial) -> Vec<RawTerm> {
    p.terms()
        .iter()
        .map(|(m, c)| RawTerm {
            coeff: c.to_string(),
            exps: m.exps().to_vec(),
        })
        .collect()
}

fn raw_multivector(v: &PolyVector) -> Vec<RawFrameTerm> {
    v.components()
        .into_iter()
        .map(|(f, p)| RawFrameTerm {
            frame: f.indices(),
            poly: raw_poly(&p),
        })
        .collect()
}

fn raw_form(w: &DiffForm) -> Vec<RawCoframeTerm> {
    w.components()
        .into_iter()
        .map(|(f, p)| RawCoframeTerm {
            coframe: f.indices(),
            poly: raw_poly(&p),
        })
        .collect()
}

pub fn encode_payload(p: &Payload) -> RawPayload {
    match p {
        Payload::Polynomial(p) => RawPayload::Polynomial { terms: raw_poly(p) },
        Payload::Multivector(v) => RawPayload::Multivector {
            terms: raw_multivector(v),
        },
        Payload::Form(w) => RawPayload::Form { terms: raw_form(w) },
        Payload::CochainSpec(CochainSpec::Structure) => RawPayload::CochainSpec {
            op: "m".into(),
            form: None,
        },
        Payload::CochainSpec(CochainSpec::Phi(w)) => RawPayload::CochainSpec {
            op: "phi".into(),
            form: Some(raw_form(w)),
        },
        Payload::MultiDiffOp(d) => RawPayload::Multidiffop {
            arity: d.arity(),
            terms: d
                .components()
                .into_iter()
                .map(|(orders, p)| RawOpTerm {
                    poly: raw_poly(&p),
                    orders: orders.iter().map(|o| o.exps().to_vec()).collect(),
                })
                .collect(),
        },
        Payload::Series(s) => RawPayload::ArtinSeries {
            truncation: s.truncation(),
            coeffs: s
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| RawOrder {
                    order: i + 1,
                    terms: raw_multivector(c),
                })
                .collect(),
        },
        Payload::Problem(p) => RawPayload::Problem(p.clone()),
    }
}

pub fn encode(doc: &Document) -> RawDocument {
    RawDocument {
        format_version: FORMAT_VERSION.to_string(),
        context: doc.context.names().to_vec(),
        payload: encode_payload(&doc.payload),
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_json(doc: &Document) -> String {
    let mut s = serde_json::to_string_pretty(&encode(doc)).expect("documents serialize");
    s.push('\n');
    s
}
