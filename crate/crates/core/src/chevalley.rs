//! Chevalley cochains on `V•(A)[1]` represented as evaluators.
//!
//! A cochain of arity `k` and degree `d` is a multilinear map on homogeneous
//! multivectors, graded-symmetric for the rule "swapping `π_i` and `π_j`
//! costs `(-1)^{|π_i||π_j|}`", sending `(π_1, …, π_k)` to a multivector of
//! degree `Σ|π_i| - 2k + 2 + d`. The structure cochain `m` has degree 1 and
//! `Φ(ω)` has degree `deg ω - 2`.
//!
//! Cochains are not stored symbolically; identities between them are checked
//! by evaluation on finite sets of basis tuples (see [`BasisBounds`]).

use std::fmt;
use std::sync::Arc;


use crate::error::{Error, Result};
use crate::ext::Frame;
use crate::form::DiffForm;
use crate::multivector::{contract_coordinate, multivector_basis, PolyVector};
use crate::poly::Polynomial;
use crate::rational::Rational;
use crate::sign::{koszul_sign_unchecked, permutations, unshuffles};

type Evaluator = dyn Fn(&[PolyVector]) -> PolyVector + Send + Sync;

/// A graded-symmetric multilinear map on multivector fields.
#[derive(Clone)]
pub struct Cochain {
    nvars: usize,
    arity: usize,
    degree: i64,
    label: Arc<str>,
    eval: Arc<Evaluator>,
}

impl fmt::Debug for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Cochain")
            .field("label", &self.label)
            .field("arity", &self.arity)
            .field("degree", &self.degree)
            .field("nvars", &self.nvars)
            .finish()
    }
}

fn shifted_degrees(args: &[PolyVector]) -> Vec<i64> {
    args.iter()
        .map(|a| a.degree().expect("homogeneous argument") as i64)
        .collect()
}

impl Cochain {
    /// Wraps a raw evaluator. `eval` only ever receives homogeneous,
    /// nonzero arguments of the right arity.
    pub fn from_fn(
        nvars: usize,
        arity: usize,
        degree: i64,
        label: impl Into<String>,
        eval: impl Fn(&[PolyVector]) -> PolyVector + Send + Sync + 'static,
    ) -> Cochain {
        Cochain {
            nvars,
            arity,
            degree,
            label: Arc::from(label.into()),
            eval: Arc::new(eval),
        }
    }

    pub fn zero(nvars: usize, arity: usize, degree: i64) -> Cochain {
        Cochain::from_fn(nvars, arity, degree, "0", move |_| PolyVector::zero(nvars))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Output multivector degree on homogeneous inputs of the given degrees.
    pub fn output_degree(&self, input_degrees: &[usize]) -> i64 {
        input_degrees.iter().sum::<usize>() as i64 - 2 * self.arity as i64 + 2 + self.degree
    }

    /// Evaluates on arbitrary arguments, expanding multilinearly over
    /// homogeneous components.
    pub fn eval(&self, args: &[PolyVector]) -> Result<PolyVector> {
        if args.len() != self.arity {
            return Err(Error::LengthMismatch {
                expected: self.arity,
                got: args.len(),
            });
        }
        for a in args {
            if a.nvars() != self.nvars {
                return Err(Error::ContextMismatch {
                    left: self.nvars,
                    right: a.nvars(),
                });
            }
        }
        let parts: Vec<Vec<PolyVector>> = args
            .iter()
            .map(|a| a.homogeneous_parts().into_iter().map(|(_, p)| p).collect())
            .collect();
        let mut total = PolyVector::zero(self.nvars);
        let mut idx = vec![0usize; args.len()];
        if parts.iter().any(|p| p.is_empty()) {
            return Ok(total);
        }
        loop {
            let tuple: Vec<PolyVector> = idx.iter().zip(&parts).map(|(&i, p)| p[i].clone()).collect();
            total = total.add_unchecked(&self.eval_homogeneous(&tuple));
            // odometer
            let mut pos = 0;
            loop {
                if pos == idx.len() {
                    return Ok(total);
                }
                idx[pos] += 1;
                if idx[pos] < parts[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    /// Evaluation on homogeneous arguments; zero arguments short-circuit.
    pub fn eval_homogeneous(&self, args: &[PolyVector]) -> PolyVector {
        debug_assert_eq!(args.len(), self.arity);
        if args.iter().any(|a| a.is_zero()) {
            return PolyVector::zero(self.nvars);
        }
        (self.eval)(args)
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        self.combine(other, true)
    }

    fn combine(&self, other: &Cochain, subtract: bool) -> Result<Cochain> {
        if self.arity != other.arity {
            return Err(Error::LengthMismatch {
                expected: self.arity,
                got: other.arity,
            });
        }
        if self.nvars != other.nvars {
            return Err(Error::ContextMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        let (a, b) = (self.clone(), other.clone());
        let label = format!("({} {} {})", a.label, if subtract { "-" } else { "+" }, b.label);
        Ok(Cochain::from_fn(self.nvars, self.arity, self.degree, label, move |args| {
            let x = a.eval_homogeneous(args);
            let y = b.eval_homogeneous(args);
            if subtract {
                x.sub_unchecked(&y)
            } else {
                x.add_unchecked(&y)
            }
        }))
    }

    pub fn scale(&self, s: &Rational) -> Cochain {
        let a = self.clone();
        let s = s.clone();
        Cochain::from_fn(
            self.nvars,
            self.arity,
            self.degree,
            format!("{}*{}", s, self.label),
            move |args| a.eval_homogeneous(args).scale(&s),
        )
    }
}

/// The structure cochain `m(π, ρ) = (-1)^{|π|-1} [π, ρ]`.
pub fn structure_cochain(nvars: usize) -> Cochain {
    Cochain::from_fn(nvars, 2, 1, "m", |args| {
        let b = args[0].schouten_unchecked(&args[1]);
        let p = args[0].degree().expect("homogeneous") as i64;
        if (p - 1).rem_euclid(2) == 1 {
            b.neg()
        } else {
            b
        }
    })
}

/// `Φ ∘ Ψ`: insert `Ψ` into the first slot of `Φ`, summing over unshuffles
/// `I ⊔ J` of the arguments with the Koszul sign of `(π_I, π_J)`.
pub fn cochain_compose(outer: &Cochain, inner: &Cochain) -> Result<Cochain> {
    if outer.nvars != inner.nvars {
        return Err(Error::ContextMismatch {
            left: outer.nvars,
            right: inner.nvars,
        });
    }
    let nvars = outer.nvars;
    let label = format!("({} o {})", outer.label, inner.label);
    let degree = outer.degree + inner.degree;
    if outer.arity == 0 {
        // Nothing to insert into.
        let arity = inner.arity.saturating_sub(1);
        return Ok(Cochain::from_fn(nvars, arity, degree, label, move |_| PolyVector::zero(nvars)));
    }
    let arity = inner.arity + outer.arity - 1;
    let shuffles = unshuffles(arity, inner.arity);
    let (outer, inner) = (outer.clone(), inner.clone());
    Ok(Cochain::from_fn(nvars, arity, degree, label, move |args| {
        let degs = shifted_degrees(args);
        let mut raw = Vec::new();
        let mut inner_args = Vec::with_capacity(inner.arity);
        let mut outer_args = Vec::with_capacity(outer.arity);
        for perm in &shuffles {
            inner_args.clear();
            inner_args.extend(perm[..inner.arity].iter().map(|&i| args[i].clone()));
            let v = inner.eval_homogeneous(&inner_args);
            if v.is_zero() {
                continue;
            }
            outer_args.clear();
            outer_args.push(v);
            outer_args.extend(perm[inner.arity..].iter().map(|&i| args[i].clone()));
            let w = outer.eval_homogeneous(&outer_args);
            if w.is_zero() {
                continue;
            }
            let s = koszul_sign_unchecked(&degs, perm);
            for (k, c) in w.raw_terms() {
                raw.push((k.clone(), if s < 0 { -c } else { c.clone() }));
            }
        }
        PolyVector::from_raw(nvars, raw)
    }))
}

/// `[Φ, Ψ] = Φ∘Ψ - (-1)^{|Φ||Ψ|} Ψ∘Φ`.
pub fn cochain_bracket(a: &Cochain, b: &Cochain) -> Result<Cochain> {
    let ab = cochain_compose(a, b)?;
    let ba = cochain_compose(b, a)?;
    let bracket = if (a.degree * b.degree).rem_euclid(2) == 1 {
        ab.add(&ba)?
    } else {
        ab.sub(&ba)?
    };
    let label = format!("[{}, {}]", a.label, b.label);
    let inner = bracket.clone();
    Ok(Cochain::from_fn(
        bracket.nvars,
        bracket.arity,
        bracket.degree,
        label,
        move |args| inner.eval_homogeneous(args),
    ))
}

/// `∂Φ = [m, Φ]`.
pub fn cochain_differential(c: &Cochain) -> Result<Cochain> {
    let m = structure_cochain(c.nvars);
    let d = cochain_bracket(&m, c)?;
    let label = format!("d{}", c.label);
    let inner = d.clone();
    Ok(Cochain::from_fn(d.nvars, d.arity, d.degree, label, move |args| {
        inner.eval_homogeneous(args)
    }))
}

/// Sign prefactor of `Φ(ω)`. [`phi`] uses [`PhiConvention::Symmetrized`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhiConvention {
    /// `Σ_σ χ(σ) (-1)^{e(π_σ)} ⟨α_1,π_σ(1)⟩ ∧ … ∧ ⟨α_k,π_σ(k)⟩` with
    /// `e(π) = Σ_{j<k} (k-j)|π_j|` and `χ` the Koszul sign of the reordering.
    Symmetrized,
    /// As `Symmetrized` but with exponent `Σ_{j<k} (k-j)(|π_j|-1)`.
    SymmetrizedShifted,
    /// Plain permutation sign with the prefactor `Σ_{j<k}(k-j)(|π_j|-1)`
    /// computed once from the unpermuted arguments.
    Literal,
}

fn prefactor_exponent(conv: PhiConvention, degs_in_order: &[i64]) -> i64 {
    let k = degs_in_order.len() as i64;
    let shift = match conv {
        PhiConvention::Symmetrized => 0,
        PhiConvention::SymmetrizedShifted | PhiConvention::Literal => 1,
    };
    degs_in_order
        .iter()
        .enumerate()
        .take(degs_in_order.len().saturating_sub(1))
        .map(|(j, d)| (k - (j as i64 + 1)) * (d - shift))
        .sum()
}

/// `Φ(ω)` for a homogeneous form `ω` of degree `k`, a cochain of arity `k`
/// and degree `k - 2`. For `k = 0`, `Φ(f) = f` as an arity-0 cochain.
pub fn phi(omega: &DiffForm) -> Result<Cochain> {
    phi_with(omega, PhiConvention::Symmetrized)
}

pub fn phi_with(omega: &DiffForm, conv: PhiConvention) -> Result<Cochain> {
    let nvars = omega.nvars();
    let k = match omega.degree() {
        Some(k) => k,
        None => {
            return Err(Error::WrongDegree {
                expected: omega.component(0).degree().unwrap_or(0),
                found: "mixed".into(),
            })
        }
    };
    let label = format!("Phi({})", omega.display_with(None));
    if k == 0 {
        let f = PolyVector::function(omega.coefficient(Frame::EMPTY));
        return Ok(Cochain::from_fn(nvars, 0, -2, label, move |_| f.clone()));
    }
    let comps: Vec<(Vec<usize>, Polynomial)> = omega
        .components()
        .into_iter()
        .map(|(f, p)| (f.indices(), p))
        .collect();
    let perms = permutations(k);
    Ok(Cochain::from_fn(nvars, k, k as i64 - 2, label, move |args| {
        let degs = shifted_degrees(args);
        let mut total = PolyVector::zero(nvars);
        for (coframe, coeff) in &comps {
            // table[i][j] = ⟨dx_{c_i}, π_j⟩
            let table: Vec<Vec<PolyVector>> = coframe
                .iter()
                .map(|&c| args.iter().map(|p| contract_coordinate(c, p)).collect())
                .collect();
            let literal_sign = prefactor_exponent(conv, &degs);
            let mut raw = Vec::new();
            'perm: for perm in &perms {
                let mut acc = table[0][perm[0]].clone();
                if acc.is_zero() {
                    continue;
                }
                for i in 1..k {
                    let next = &table[i][perm[i]];
                    if next.is_zero() {
                        continue 'perm;
                    }
                    acc = acc.wedge_unchecked(next);
                    if acc.is_zero() {
                        continue 'perm;
                    }
                }
                let exponent = match conv {
                    PhiConvention::Literal => {
                        literal_sign + (crate::sign::permutation_sign(perm) < 0) as i64
                    }
                    _ => {
                        let permuted: Vec<i64> = perm.iter().map(|&i| degs[i]).collect();
                        prefactor_exponent(conv, &permuted)
                            + (koszul_sign_unchecked(&degs, perm) < 0) as i64
                    }
                };
                let negative = exponent.rem_euclid(2) == 1;
                for (key, c) in acc.raw_terms() {
                    raw.push((key.clone(), if negative { -c } else { c.clone() }));
                }
            }
            let value = PolyVector::from_raw(nvars, raw);
            if !value.is_zero() {
                total = total.add_unchecked(&value.mul_poly(coeff).expect("same context"));
            }
        }
        total
    }))
}

/// Bounds for basis-tuple enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisBounds {
    /// Maximum coefficient degree of each basis multivector.
    pub poly_degree: u32,
    /// Maximum multivector degree of each basis element.
    pub mv_degree: usize,
    /// Optional cap on the sum of coefficient degrees across a tuple.
    pub total_poly_degree: Option<u32>,
    /// Visit only non-decreasing index tuples. Sufficient for graded-symmetric
    /// cochains, whose values on permuted tuples differ by a sign.
    pub unordered: bool,
}

impl Default for BasisBounds {
    fn default() -> Self {
        BasisBounds {
            poly_degree: 2,
            mv_degree: 3,
            total_poly_degree: None,
            unordered: false,
        }
    }
}

impl BasisBounds {
    pub fn new(poly_degree: u32, mv_degree: usize) -> Self {
        BasisBounds {
            poly_degree,
            mv_degree,
            total_poly_degree: None,
            unordered: false,
        }
    }

    pub fn with_total_poly_degree(mut self, total: u32) -> Self {
        self.total_poly_degree = Some(total);
        self
    }

    pub fn unordered(mut self) -> Self {
        self.unordered = true;
        self
    }
}

/// Calls `f` on every ordered tuple of basis multivectors within `bounds`;
/// stops early when `f` returns `false`. Returns the number of tuples visited.
pub fn for_each_basis_tuple(
    nvars: usize,
    arity: usize,
    bounds: BasisBounds,
    mut f: impl FnMut(&[PolyVector]) -> bool,
) -> u64 {
    let basis = multivector_basis(nvars, bounds.poly_degree, bounds.mv_degree);
    let poly_deg: Vec<u32> = basis
        .iter()
        .map(|b| b.max_coeff_degree().unwrap_or(0))
        .collect();
    let cap = bounds.total_poly_degree.unwrap_or(u32::MAX);
    let mut tuple: Vec<PolyVector> = Vec::with_capacity(arity);
    struct Walk<'a> {
        basis: &'a [PolyVector],
        poly_deg: &'a [u32],
        arity: usize,
        unordered: bool,
        count: u64,
    }
    fn rec(
        w: &mut Walk<'_>,
        start: usize,
        budget: u32,
        tuple: &mut Vec<PolyVector>,
        f: &mut dyn FnMut(&[PolyVector]) -> bool,
    ) -> bool {
        if tuple.len() == w.arity {
            w.count += 1;
            return f(tuple);
        }
        for i in start..w.basis.len() {
            let d = w.poly_deg[i];
            if d > budget {
                continue;
            }
            tuple.push(w.basis[i].clone());
            let next = if w.unordered { i } else { 0 };
            let go_on = rec(w, next, budget - d, tuple, f);
            tuple.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
    let mut walk = Walk {
        basis: &basis,
        poly_deg: &poly_deg,
        arity,
        unordered: bounds.unordered,
        count: 0,
    };
    rec(&mut walk, 0, cap, &mut tuple, &mut f);
    walk.count
}

/// Outcome of an evaluation-based equality check.
#[derive(Clone, Debug)]
pub struct EqualityReport {
    pub equal: bool,
    pub tuples_checked: u64,
    /// On failure: the tuple and the two differing values.
    pub witness: Option<(Vec<PolyVector>, PolyVector, PolyVector)>,
}

/// Compares two cochains on every basis tuple within `bounds`.
pub fn cochain_equal_on_basis(a: &Cochain, b: &Cochain, bounds: BasisBounds) -> Result<EqualityReport> {
    if a.arity != b.arity {
        return Err(Error::LengthMismatch {
            expected: a.arity,
            got: b.arity,
        });
    }
    if a.nvars != b.nvars {
        return Err(Error::ContextMismatch {
            left: a.nvars,
            right: b.nvars,
        });
    }
    let mut witness = None;
    let checked = for_each_basis_tuple(a.nvars, a.arity, bounds, |tuple| {
        let x = a.eval_homogeneous(tuple);
        let y = b.eval_homogeneous(tuple);
        if x != y {
            witness = Some((tuple.to_vec(), x, y));
            return false;
        }
        true
    });
    Ok(EqualityReport {
        equal: witness.is_none(),
        tuples_checked: checked,
        witness,
    })
}

/// Checks that `c` vanishes on every basis tuple within `bounds`.
pub fn vanishes_on_basis(c: &Cochain, bounds: BasisBounds) -> EqualityReport {
    let zero = Cochain::zero(c.nvars, c.arity, c.degree);
    cochain_equal_on_basis(c, &zero, bounds).expect("same shape")
}

/// Checks graded symmetry under adjacent transpositions on every basis tuple.
/// On failure returns the offending tuple and transposition index.
pub fn symmetry_defect(c: &Cochain, bounds: BasisBounds) -> Option<(Vec<PolyVector>, usize)> {
    if c.arity < 2 {
        return None;
    }
    let mut found = None;
    for_each_basis_tuple(c.nvars, c.arity, bounds, |tuple| {
        let base = c.eval_homogeneous(tuple);
        for i in 0..tuple.len() - 1 {
            let mut swapped = tuple.to_vec();
            swapped.swap(i, i + 1);
            let di = tuple[i].degree().unwrap_or(0) as i64;
            let dj = tuple[i + 1].degree().unwrap_or(0) as i64;
            let expected = if (di * dj) % 2 == 1 { base.neg() } else { base.clone() };
            if c.eval_homogeneous(&swapped) != expected {
                found = Some((tuple.to_vec(), i));
                return false;
            }
        }
        true
    });
    found
}

/// `Φ(ω)` evaluated directly, for callers that do not need the cochain.
pub fn phi_eval(omega: &DiffForm, args: &[PolyVector]) -> Result<PolyVector> {
    phi(omega)?.eval(args)
}
