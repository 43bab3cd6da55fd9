//! Differential forms with polynomial coefficients and the de Rham differential.

use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::ext::{ExtTerms, Frame, Key};
use crate::poly::{Monomial, Polynomial, VarContext};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DiffForm(pub(crate) ExtTerms);

impl DiffForm {
    pub fn zero(nvars: usize) -> Self {
        DiffForm(ExtTerms::zero(nvars))
    }

    pub fn function(p: Polynomial) -> Self {
        let nvars = p.nvars();
        DiffForm(ExtTerms::from_components(nvars, vec![(Frame::EMPTY, p)]))
    }

    pub fn basis(coframe: Frame, mono: Monomial, coeff: Rational) -> Self {
        DiffForm(ExtTerms::basis(coframe, mono, coeff))
    }

    /// `dx_{i_1} ∧ … ∧ dx_{i_k}`.
    pub fn coframe(nvars: usize, indices: &[usize]) -> Result<Self> {
        let f = Frame::from_indices(indices, nvars)?;
        Ok(DiffForm::basis(f, Monomial::one(nvars), Rational::one()))
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
        Ok(DiffForm(ExtTerms::from_components(nvars, comps)))
    }

    pub fn nvars(&self) -> usize {
        self.0.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.homogeneous_degree()
    }

    pub fn component(&self, k: usize) -> DiffForm {
        DiffForm(self.0.component(k))
    }

    pub fn components(&self) -> Vec<(Frame, Polynomial)> {
        self.0.components()
    }

    pub fn coefficient(&self, coframe: Frame) -> Polynomial {
        self.0.coefficient(coframe)
    }

    pub(crate) fn raw_terms(&self) -> &[(Key, Rational)] {
        &self.0.terms
    }

    pub fn add(&self, other: &DiffForm) -> Result<DiffForm> {
        self.0.check_ctx(&other.0)?;
        Ok(DiffForm(self.0.add(&other.0)))
    }

    pub fn sub(&self, other: &DiffForm) -> Result<DiffForm> {
        self.0.check_ctx(&other.0)?;
        Ok(DiffForm(self.0.sub(&other.0)))
    }

    pub fn neg(&self) -> DiffForm {
        DiffForm(self.0.neg())
    }

    pub fn scale(&self, s: &Rational) -> DiffForm {
        DiffForm(self.0.scale(s))
    }

    pub fn wedge(&self, other: &DiffForm) -> Result<DiffForm> {
        self.0.check_ctx(&other.0)?;
        Ok(DiffForm(self.0.wedge(&other.0)))
    }

    /// Exterior derivative `d(h dx_I) = Σ_i ∂_i h dx_i ∧ dx_I`.
    pub fn d(&self) -> DiffForm {
        let mut raw = Vec::new();
        for ((f, m), c) in self.raw_terms() {
            for i in 0..self.nvars() {
                if f.contains(i) {
                    continue;
                }
                let Some((e, dm)) = m.derive(i) else { continue };
                let (s, frame) = Frame::single(i).wedge(*f).expect("disjoint");
                let v = c * &Rational::from_integer(e as i64);
                raw.push(((frame, dm), if s < 0 { -v } else { v }));
            }
        }
        DiffForm(ExtTerms::from_raw(self.nvars(), raw))
    }

    pub fn display_with(&self, ctx: Option<&VarContext>) -> String {
        let sym = |i: usize| match ctx.and_then(|c| c.names().get(i)) {
            Some(n) => format!("d{n}"),
            None => format!("dx{}", i + 1),
        };
        self.0.display(ctx, &sym)
    }
}

impl fmt::Debug for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(None))
    }
}

impl fmt::Display for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(None))
    }
}

/// All basis forms `x^m dx_C` with `|C| <= max_form_degree`, `deg m <= max_poly_degree`.
pub fn form_basis(nvars: usize, max_poly_degree: u32, max_form_degree: usize) -> Vec<DiffForm> {
    let monos = Monomial::all_up_to(nvars, max_poly_degree);
    let mut out = Vec::new();
    for f in Frame::all_up_to(nvars, max_form_degree) {
        for m in &monos {
            out.push(DiffForm::basis(f, m.clone(), Rational::one()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multivector::PolyVector;
    use num_traits::Zero;

    fn mono_form(exps: &[u16], indices: &[usize]) -> DiffForm {
        DiffForm::basis(
            Frame::from_indices(indices, exps.len()).unwrap(),
            Monomial::from_exps(exps),
            Rational::one(),
        )
    }

    #[test]
    fn d_examples() {
        // d(x dy) = dx ∧ dy
        assert_eq!(mono_form(&[1, 0], &[1]).d(), mono_form(&[0, 0], &[0, 1]));
        // d(d(x²y dz)) = 0
        let w = mono_form(&[2, 1, 0], &[2]);
        assert!(!w.d().is_zero());
        assert!(w.d().d().is_zero());
        // d(constant) = 0
        let c = DiffForm::function(Polynomial::constant(3, Rational::from_integer(5)));
        assert!(c.d().is_zero());
    }

    #[test]
    fn d_squared_vanishes_on_basis() {
        for w in form_basis(3, 3, 3) {
            assert!(w.d().d().is_zero(), "{w:?}");
        }
    }

    #[test]
    fn d_is_graded_derivation() {
        let basis = form_basis(3, 2, 2);
        for a in &basis {
            for b in basis.iter().step_by(3) {
                let k = a.degree().unwrap() as i64;
                let lhs = a.wedge(b).unwrap().d();
                let rhs = a
                    .d()
                    .wedge(b)
                    .unwrap()
                    .add(&a.wedge(&b.d()).unwrap().scale(&Rational::sign_power(k)))
                    .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn contraction_examples() {
        let n = 3;
        let dx = DiffForm::coframe(n, &[0]).unwrap();
        let dz = DiffForm::coframe(n, &[2]).unwrap();
        let px = PolyVector::frame(n, &[0]).unwrap();
        let pxy = PolyVector::frame(n, &[0, 1]).unwrap();
        assert_eq!(
            px.contract(&dx).unwrap(),
            PolyVector::function(Polynomial::one(n))
        );
        assert!(pxy.contract(&dz).unwrap().is_zero());
        assert_eq!(pxy.contract(&dx).unwrap(), PolyVector::frame(n, &[1]).unwrap());
        let two = DiffForm::coframe(n, &[0, 1]).unwrap();
        assert!(matches!(
            pxy.contract(&two),
            Err(Error::WrongDegree { expected: 1, .. })
        ));
        assert_eq!(Rational::zero(), Rational::zero());
    }
}
