//! Multivector fields `V•(A)`: polynomial combinations of `∂_{i_1} ∧ … ∧ ∂_{i_k}`.
//!
//! The Schouten bracket is computed term by term from the coordinate
//! expansion
//!
//! ```text
//! [f ∂_I, g ∂_J] = Σ_p (-1)^{k-p} f ∂_{a_p}(g) ∂_{I∖a_p} ∧ ∂_J
//!                + Σ_q (-1)^q   ∂_{b_q}(f) g ∂_I ∧ ∂_{J∖b_q}
//! ```
//!
//! with `I = (a_1 < … < a_k)`, `J = (b_1 < … < b_l)` and 1-based positions
//! `p`, `q`. Brackets of coordinate vector fields vanish, so the mixed
//! `[X_i, Y_j]` sum of the general formula does not appear.

use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::ext::{ExtTerms, Frame, Key};
use crate::form::DiffForm;
use crate::poly::{Monomial, Polynomial, VarContext};
use crate::rational::Rational;

/// A multivector field with polynomial coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyVector(pub(crate) ExtTerms);

impl PolyVector {
    pub fn zero(nvars: usize) -> Self {
        PolyVector(ExtTerms::zero(nvars))
    }

    /// The function `p` viewed as an element of `V⁰`.
    pub fn function(p: Polynomial) -> Self {
        let nvars = p.nvars();
        PolyVector(ExtTerms::from_components(nvars, vec![(Frame::EMPTY, p)]))
    }

    /// `coeff · x^mono · ∂_frame`.
    pub fn basis(frame: Frame, mono: Monomial, coeff: Rational) -> Self {
        PolyVector(ExtTerms::basis(frame, mono, coeff))
    }

    /// `∂_{i_1} ∧ … ∧ ∂_{i_k}` with constant coefficient 1.
    pub fn frame(nvars: usize, indices: &[usize]) -> Result<Self> {
        let f = Frame::from_indices(indices, nvars)?;
        Ok(PolyVector::basis(f, Monomial::one(nvars), Rational::one()))
    }

    pub fn from_components(nvars: usize, comps: Vec<(Frame, Polynomial)>) -> Result<Self> {
        for (f, p) in &comps {
            if p.nvars() != nvars {
                return Err(Error::ContextMismatch {
                    left: nvars,
                    right: p.nvars(),
                });
            }
            if f.bits() >> nvars != 0 {
                return Err(Error::IndexOutOfRange {
                    index: 31 - f.bits().leading_zeros() as usize,
                    nvars,
                });
            }
        }
        Ok(PolyVector(ExtTerms::from_components(nvars, comps)))
    }

    pub fn nvars(&self) -> usize {
        self.0.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `Some(k)` when homogeneous of degree `k` (zero counts as degree 0).
    pub fn degree(&self) -> Option<usize> {
        self.0.homogeneous_degree()
    }

    pub fn component(&self, k: usize) -> PolyVector {
        PolyVector(self.0.component(k))
    }

    pub fn homogeneous_parts(&self) -> Vec<(usize, PolyVector)> {
        self.0
            .homogeneous_parts()
            .into_iter()
            .map(|(k, t)| (k, PolyVector(t)))
            .collect()
    }

    /// `(frame, coefficient)` pairs in canonical order.
    pub fn components(&self) -> Vec<(Frame, Polynomial)> {
        self.0.components()
    }

    pub fn coefficient(&self, frame: Frame) -> Polynomial {
        self.0.coefficient(frame)
    }

    pub fn num_terms(&self) -> usize {
        self.0.len()
    }

    pub fn max_coeff_degree(&self) -> Option<u32> {
        self.0.max_coeff_degree()
    }

    pub(crate) fn raw_terms(&self) -> &[(Key, Rational)] {
        &self.0.terms
    }

    pub(crate) fn from_raw(nvars: usize, raw: Vec<(Key, Rational)>) -> Self {
        PolyVector(ExtTerms::from_raw(nvars, raw))
    }

    pub fn add(&self, other: &PolyVector) -> Result<PolyVector> {
        self.0.check_ctx(&other.0)?;
        Ok(PolyVector(self.0.add(&other.0)))
    }

    pub fn sub(&self, other: &PolyVector) -> Result<PolyVector> {
        self.0.check_ctx(&other.0)?;
        Ok(PolyVector(self.0.sub(&other.0)))
    }

    pub(crate) fn add_unchecked(&self, other: &PolyVector) -> PolyVector {
        PolyVector(self.0.add(&other.0))
    }

    pub(crate) fn sub_unchecked(&self, other: &PolyVector) -> PolyVector {
        PolyVector(self.0.sub(&other.0))
    }

    pub fn neg(&self) -> PolyVector {
        PolyVector(self.0.neg())
    }

    pub fn scale(&self, s: &Rational) -> PolyVector {
        PolyVector(self.0.scale(s))
    }

    pub fn mul_poly(&self, p: &Polynomial) -> Result<PolyVector> {
        if p.nvars() != self.nvars() {
            return Err(Error::ContextMismatch {
                left: self.nvars(),
                right: p.nvars(),
            });
        }
        Ok(PolyVector(self.0.mul_poly(p)))
    }

    /// Graded-commutative product; degrees add.
    pub fn wedge(&self, other: &PolyVector) -> Result<PolyVector> {
        self.0.check_ctx(&other.0)?;
        Ok(self.wedge_unchecked(other))
    }

    pub(crate) fn wedge_unchecked(&self, other: &PolyVector) -> PolyVector {
        PolyVector(self.0.wedge(&other.0))
    }

    /// Schouten–Nijenhuis bracket, extended bilinearly to inhomogeneous
    /// arguments. Homogeneous degrees satisfy `|[a,b]| = |a| + |b| - 1`.
    pub fn schouten(&self, other: &PolyVector) -> Result<PolyVector> {
        self.0.check_ctx(&other.0)?;
        Ok(self.schouten_unchecked(other))
    }

    pub(crate) fn schouten_unchecked(&self, other: &PolyVector) -> PolyVector {
        let mut raw = Vec::new();
        for ((fi, mi), ci) in self.raw_terms() {
            for ((fj, mj), cj) in other.raw_terms() {
                schouten_terms(*fi, mi, ci, *fj, mj, cj, &mut raw);
            }
        }
        PolyVector::from_raw(self.nvars(), raw)
    }

    /// `i_a(π) = [a, π]`: the adjoint action of a function, lowering degree
    /// by one. On vector fields `i_a(X) = -X(a)`.
    pub fn i_func(&self, a: &Polynomial) -> Result<PolyVector> {
        if a.nvars() != self.nvars() {
            return Err(Error::ContextMismatch {
                left: self.nvars(),
                right: a.nvars(),
            });
        }
        Ok(PolyVector::function(a.clone()).schouten_unchecked(self))
    }

    /// Left contraction `⟨α, π⟩` with a 1-form:
    /// `⟨α, X_1 ∧ … ∧ X_k⟩ = Σ_i (-1)^{i-1} α(X_i) X_1 ∧ … X̂_i … ∧ X_k`.
    pub fn contract(&self, alpha: &DiffForm) -> Result<PolyVector> {
        if alpha.nvars() != self.nvars() {
            return Err(Error::ContextMismatch {
                left: alpha.nvars(),
                right: self.nvars(),
            });
        }
        match alpha.degree() {
            Some(1) => {}
            Some(_) if alpha.is_zero() => return Ok(PolyVector::zero(self.nvars())),
            other => {
                return Err(Error::WrongDegree {
                    expected: 1,
                    found: other.map_or_else(|| "mixed".to_string(), |d| d.to_string()),
                })
            }
        }
        Ok(contract_one_form(alpha, self))
    }

    pub fn display_with(&self, ctx: Option<&VarContext>) -> String {
        let sym = |i: usize| match ctx.and_then(|c| c.names().get(i)) {
            Some(n) => format!("d_{n}"),
            None => format!("d_x{}", i + 1),
        };
        self.0.display(ctx, &sym)
    }
}

impl fmt::Debug for PolyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(None))
    }
}

impl fmt::Display for PolyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(None))
    }
}

#[inline]
fn push_signed(raw: &mut Vec<(Key, Rational)>, key: Key, c: Rational, negative: bool) {
    raw.push((key, if negative { -c } else { c }));
}

/// Schouten bracket of `ci x^mi ∂_fi` with `cj x^mj ∂_fj`, appended to `raw`.
pub(crate) fn schouten_terms(
    fi: Frame,
    mi: &Monomial,
    ci: &Rational,
    fj: Frame,
    mj: &Monomial,
    cj: &Rational,
    raw: &mut Vec<(Key, Rational)>,
) {
    let k = fi.len() as u32;
    let coeff = ci * cj;
    // Σ_p (-1)^{k-p} f X_p(g) X_1..X̂_p..X_k Y
    for (p0, a) in fi.indices().into_iter().enumerate() {
        let Some((e, dg)) = mj.derive(a) else { continue };
        let Some((s, frame)) = fi.without(a).wedge(fj) else {
            continue;
        };
        let negative = ((k - (p0 as u32 + 1)) & 1 == 1) ^ (s < 0);
        let c = &coeff * &Rational::from_integer(e as i64);
        push_signed(raw, (frame, mi.mul(&dg)), c, negative);
    }
    // Σ_q (-1)^q Y_q(f) g X Y_1..Ŷ_q..Y_l
    for (q0, b) in fj.indices().into_iter().enumerate() {
        let Some((e, df)) = mi.derive(b) else { continue };
        let Some((s, frame)) = fi.wedge(fj.without(b)) else {
            continue;
        };
        let negative = (((q0 as u32) + 1) & 1 == 1) ^ (s < 0);
        let c = &coeff * &Rational::from_integer(e as i64);
        push_signed(raw, (frame, df.mul(mj)), c, negative);
    }
}

/// `⟨α, π⟩` for a homogeneous 1-form `α` (no degree check).
pub(crate) fn contract_one_form(alpha: &DiffForm, pi: &PolyVector) -> PolyVector {
    let mut raw = Vec::new();
    for ((cf, am), ac) in alpha.raw_terms() {
        let c = cf.bits().trailing_zeros() as usize;
        for ((f, m), pc) in pi.raw_terms() {
            if !f.contains(c) {
                continue;
            }
            let negative = f.rank_below(c) & 1 == 1;
            push_signed(&mut raw, (f.without(c), m.mul(am)), ac * pc, negative);
        }
    }
    PolyVector::from_raw(pi.nvars(), raw)
}

/// `⟨dx_c, π⟩` for a single coordinate covector.
pub(crate) fn contract_coordinate(c: usize, pi: &PolyVector) -> PolyVector {
    let mut raw = Vec::new();
    for ((f, m), pc) in pi.raw_terms() {
        if !f.contains(c) {
            continue;
        }
        let negative = f.rank_below(c) & 1 == 1;
        push_signed(&mut raw, (f.without(c), m.clone()), pc.clone(), negative);
    }
    // Removing the same generator from distinct frames keeps keys distinct
    // and ordered within each length, so no merge is required beyond a sort.
    PolyVector::from_raw(pi.nvars(), raw)
}

/// All basis multivectors `x^m ∂_F` with `|F| <= max_mv_degree` and
/// `deg m <= max_poly_degree`, frames outermost in canonical order.
pub fn multivector_basis(nvars: usize, max_poly_degree: u32, max_mv_degree: usize) -> Vec<PolyVector> {
    let monos = Monomial::all_up_to(nvars, max_poly_degree);
    let mut out = Vec::new();
    for f in Frame::all_up_to(nvars, max_mv_degree) {
        for m in &monos {
            out.push(PolyVector::basis(f, m.clone(), Rational::one()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx2() -> usize {
        2
    }

    fn dx(n: usize, i: usize) -> PolyVector {
        PolyVector::frame(n, &[i]).unwrap()
    }

    fn fun(_n: usize, exps: &[u16]) -> PolyVector {
        PolyVector::function(Polynomial::monomial(Monomial::from_exps(exps), Rational::one()))
    }

    fn mono_field(exps: &[u16], indices: &[usize]) -> PolyVector {
        let n = exps.len();
        PolyVector::basis(
            Frame::from_indices(indices, n).unwrap(),
            Monomial::from_exps(exps),
            Rational::one(),
        )
    }

    #[test]
    fn wedge_examples() {
        let n = ctx2();
        assert!(dx(n, 0).wedge(&dx(n, 0)).unwrap().is_zero());
        let xy = dx(n, 0).wedge(&dx(n, 1)).unwrap();
        let yx = dx(n, 1).wedge(&dx(n, 0)).unwrap();
        assert_eq!(yx, xy.neg());
        // (x ∂_x) ∧ (y ∂_y) = xy ∂_x∧∂_y
        let lhs = mono_field(&[1, 0], &[0]).wedge(&mono_field(&[0, 1], &[1])).unwrap();
        assert_eq!(lhs, mono_field(&[1, 1], &[0, 1]));
    }

    #[test]
    fn schouten_examples() {
        let n = ctx2();
        // [∂_x, x²] = 2x
        let b = dx(n, 0).schouten(&fun(n, &[2, 0])).unwrap();
        assert_eq!(b, fun(n, &[1, 0]).scale(&Rational::from_integer(2)));
        // [x∂_y, y∂_x] = x∂_x − y∂_y
        let b = mono_field(&[1, 0], &[1]).schouten(&mono_field(&[0, 1], &[0])).unwrap();
        let expected = mono_field(&[1, 0], &[0]).sub(&mono_field(&[0, 1], &[1])).unwrap();
        assert_eq!(b, expected);
        // [∂_x∧∂_y, ∂_x∧∂_y] = 0
        let p = PolyVector::frame(n, &[0, 1]).unwrap();
        assert!(p.schouten(&p).unwrap().is_zero());
    }

    #[test]
    fn i_func_examples() {
        let n = 2;
        let x = Polynomial::var(n, 0);
        assert!(fun(n, &[1, 1]).i_func(&x).unwrap().is_zero());
        assert!(dx(n, 1).i_func(&x).unwrap().is_zero());
        let p = PolyVector::frame(n, &[0, 1]).unwrap();
        assert_eq!(p.i_func(&x).unwrap(), dx(n, 1).neg());
        // [x, ∂_x] = -∂_x(x)
        assert_eq!(
            dx(n, 0).i_func(&x).unwrap(),
            PolyVector::function(Polynomial::constant(n, Rational::from_integer(-1)))
        );
    }

    #[test]
    fn degenerate_context_has_only_constants() {
        let c = PolyVector::function(Polynomial::constant(0, Rational::from_integer(3)));
        assert_eq!(c.degree(), Some(0));
        assert!(c.schouten(&c).unwrap().is_zero());
        assert_eq!(multivector_basis(0, 2, 3).len(), 1);
    }

    #[test]
    fn context_mismatch() {
        assert!(matches!(
            dx(2, 0).schouten(&dx(3, 0)),
            Err(Error::ContextMismatch { .. })
        ));
    }
}
