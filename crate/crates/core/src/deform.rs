//! Formal deformations over `Q[t]/t^{N+1}`: defect series, order-by-order
//! Maurer–Cartan solving and the gauge flow.
//!
//! With `l2 = m` and `l3 = 3Φ(H)` the Maurer–Cartan curvature of a bivector
//! series is `-1/2 ([π,π] - Φ(H)(π,π,π))`. A vector-field series `ξ` acts by
//! integrating `dγ/ds = -([ξ,γ] + 3/2 Φ(H)(ξ,γ,γ))` from `s = 0` to `s = 1`;
//! nilpotence of `t` makes every order a polynomial in `s`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ext::Key;
use crate::linalg::ColumnSpace;
use crate::multivector::{multivector_basis, PolyVector};
use crate::rational::Rational;
use crate::twisted::{check_bivector, TwistedStructure};

/// `Q[t]/t^{N+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArtinRing {
    truncation: usize,
}

impl ArtinRing {
    pub fn new(truncation: usize) -> Result<ArtinRing> {
        if truncation == 0 {
            return Err(Error::InvalidContext("truncation must be at least 1".into()));
        }
        Ok(ArtinRing { truncation })
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }
}

/// `Σ_{k=1}^{N} t^k c_k`; no constant term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArtinSeries {
    ring: ArtinRing,
    nvars: usize,
    coeffs: Vec<PolyVector>,
}

impl ArtinSeries {
    pub fn zero(ring: ArtinRing, nvars: usize) -> ArtinSeries {
        ArtinSeries {
            ring,
            nvars,
            coeffs: vec![PolyVector::zero(nvars); ring.truncation],
        }
    }

    /// `coeffs[k-1]` is the coefficient of `t^k`; missing orders are zero,
    /// extra orders are rejected.
    pub fn new(ring: ArtinRing, nvars: usize, coeffs: Vec<PolyVector>) -> Result<ArtinSeries> {
        if coeffs.len() > ring.truncation {
            return Err(Error::TruncationMismatch {
                left: ring.truncation,
                right: coeffs.len(),
            });
        }
        if let Some(c) = coeffs.iter().find(|c| c.nvars() != nvars) {
            return Err(Error::ContextMismatch {
                left: nvars,
                right: c.nvars(),
            });
        }
        let mut s = ArtinSeries::zero(ring, nvars);
        for (i, c) in coeffs.into_iter().enumerate() {
            s.coeffs[i] = c;
        }
        Ok(s)
    }

    pub fn ring(&self) -> ArtinRing {
        self.ring
    }

    pub fn truncation(&self) -> usize {
        self.ring.truncation
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Coefficient of `t^k`, `1 <= k <= N`; zero outside that range.
    pub fn coeff(&self, k: usize) -> PolyVector {
        if k == 0 || k > self.ring.truncation {
            return PolyVector::zero(self.nvars);
        }
        self.coeffs[k - 1].clone()
    }

    pub fn coeffs(&self) -> &[PolyVector] {
        &self.coeffs
    }

    fn check_degree(&self, expected: usize) -> Result<()> {
        for c in &self.coeffs {
            if !c.is_zero() && c.degree() != Some(expected) {
                return Err(Error::WrongDegree {
                    expected,
                    found: c.degree().map_or_else(|| "mixed".into(), |d| d.to_string()),
                });
            }
        }
        Ok(())
    }
}

/// A vector-field series acting by gauge transformations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeParam(ArtinSeries);

impl GaugeParam {
    pub fn new(series: ArtinSeries) -> Result<GaugeParam> {
        series.check_degree(1)?;
        Ok(GaugeParam(series))
    }

    pub fn zero(ring: ArtinRing, nvars: usize) -> GaugeParam {
        GaugeParam(ArtinSeries::zero(ring, nvars))
    }

    pub fn series(&self) -> &ArtinSeries {
        &self.0
    }
}

fn check_structure(s: &TwistedStructure, nvars: usize) -> Result<()> {
    if s.nvars() != nvars {
        return Err(Error::ContextMismatch {
            left: s.nvars(),
            right: nvars,
        });
    }
    Ok(())
}

/// Order-`k` part of `[π,π] - Φ(H)(π,π,π)` using only coefficients with
/// index in `1..=max_index`.
fn defect_at(s: &TwistedStructure, coeff: &dyn Fn(usize) -> PolyVector, k: usize, max_index: usize) -> PolyVector {
    let n = s.nvars();
    let mut raw: Vec<(Key, Rational)> = Vec::new();
    for i in 1..k {
        let j = k - i;
        if i > max_index || j > max_index {
            continue;
        }
        let (a, b) = (coeff(i), coeff(j));
        if a.is_zero() || b.is_zero() {
            continue;
        }
        raw.extend(a.schouten_unchecked(&b).raw_terms().iter().cloned());
    }
    for i in 1..k {
        for j in 1..k - i {
            let l = k - i - j;
            if i > max_index || j > max_index || l > max_index {
                continue;
            }
            let v = s.l3().eval_homogeneous(&[coeff(i), coeff(j), coeff(l)]);
            raw.extend(v.raw_terms().iter().map(|(key, c)| (key.clone(), -c)));
        }
    }
    PolyVector::from_raw(n, raw)
}

/// The defect `[π,π] - Φ(H)(π,π,π)` order by order; entry `k-1` is the
/// coefficient of `t^k` for `k = 1..=N`.
pub fn defect_series(s: &TwistedStructure, pi: &ArtinSeries) -> Result<Vec<PolyVector>> {
    check_structure(s, pi.nvars)?;
    pi.check_degree(2)?;
    let n_max = pi.truncation();
    let coeff = |k: usize| pi.coeff(k);
    Ok((1..=n_max).map(|k| defect_at(s, &coeff, k, n_max)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Solved,
    /// The equation at `order` has no solution within bounds given the
    /// lower-order choices; `residual` is its unreachable part.
    Obstructed { order: usize, residual: PolyVector },
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub status: SolveStatus,
    /// The series found so far; complete when solved.
    pub solution: ArtinSeries,
    /// Coefficient degree bound of the unknowns.
    pub poly_degree: u32,
    /// Term count of each order of the final defect series.
    pub residual_terms: Vec<usize>,
}

impl SolveReport {
    pub fn is_solved(&self) -> bool {
        self.status == SolveStatus::Solved
    }
}

/// Extends `π_1` to a formal solution mod `t^{N+1}`.
///
/// For `N >= 2` the order-2 equation `[π_1, π_1] = 0` is checked first.
/// Then for `k = 2..=N` the unknown `π_k` is chosen from bivectors of
/// coefficient degree `<= poly_degree` so that the order-`(k+1)` equation
/// `2[π_1, π_k] + (known lower-order terms) = 0` holds. Lower orders are
/// never revisited.
pub fn mc_solve(s: &TwistedStructure, pi1: &PolyVector, truncation: usize, poly_degree: u32) -> Result<SolveReport> {
    check_bivector(pi1)?;
    check_structure(s, pi1.nvars())?;
    let ring = ArtinRing::new(truncation)?;
    let n = pi1.nvars();
    let mut coeffs = vec![PolyVector::zero(n); truncation];
    coeffs[0] = pi1.clone();
    let finish = |coeffs: Vec<PolyVector>, status: SolveStatus| -> Result<SolveReport> {
        let solution = ArtinSeries::new(ring, n, coeffs)?;
        let residual_terms = defect_series(s, &solution)?.iter().map(|d| d.num_terms()).collect();
        Ok(SolveReport {
            status,
            solution,
            poly_degree,
            residual_terms,
        })
    };
    if truncation >= 2 {
        let order2 = pi1.schouten_unchecked(pi1);
        if !order2.is_zero() {
            return finish(coeffs, SolveStatus::Obstructed { order: 2, residual: order2 });
        }
    }
    let unknowns: Vec<PolyVector> = multivector_basis(n, poly_degree, 2)
        .into_iter()
        .filter(|b| b.degree() == Some(2))
        .collect();
    let two = Rational::from_integer(2);
    let space = ColumnSpace::from_columns(
        unknowns
            .iter()
            .map(|b| pi1.schouten_unchecked(b).scale(&two).raw_terms().to_vec()),
    );
    for k in 2..=truncation {
        let known = {
            let c = &coeffs;
            let coeff = |i: usize| if i >= 1 && i <= c.len() { c[i - 1].clone() } else { PolyVector::zero(n) };
            defect_at(s, &coeff, k + 1, k - 1)
        };
        let target = known.neg();
        match space.solve(target.raw_terms()) {
            Ok(x) => {
                let mut raw = Vec::new();
                for (b, c) in unknowns.iter().zip(&x) {
                    if !c.is_zero() {
                        raw.extend(b.raw_terms().iter().map(|(key, v)| (key.clone(), v * c)));
                    }
                }
                coeffs[k - 1] = PolyVector::from_raw(n, raw);
            }
            Err(rem) => {
                let residual = PolyVector::from_raw(n, rem);
                return finish(coeffs, SolveStatus::Obstructed { order: k + 1, residual });
            }
        }
    }
    let report = finish(coeffs, SolveStatus::Solved)?;
    debug_assert!(report.residual_terms.iter().all(|&t| t == 0));
    Ok(report)
}

/// Polynomial in `s` with multivector coefficients, `Σ_p s^p v_p`.
type SPoly = Vec<PolyVector>;

fn s_add(a: &mut SPoly, b: &SPoly, n: usize) {
    if a.len() < b.len() {
        a.resize(b.len(), PolyVector::zero(n));
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x = x.add_unchecked(y);
    }
}

fn s_eval_one(a: &SPoly, n: usize) -> PolyVector {
    a.iter().fold(PolyVector::zero(n), |acc, v| acc.add_unchecked(v))
}

/// Integrates `dγ/ds = -([ξ,γ] + 3/2 Φ(H)(ξ,γ,γ))` from `s = 0` to `1`.
pub fn gauge_flow(s: &TwistedStructure, gamma: &ArtinSeries, xi: &GaugeParam) -> Result<ArtinSeries> {
    let xi = &xi.0;
    if gamma.truncation() != xi.truncation() {
        return Err(Error::TruncationMismatch {
            left: gamma.truncation(),
            right: xi.truncation(),
        });
    }
    if gamma.nvars != xi.nvars {
        return Err(Error::ContextMismatch {
            left: gamma.nvars,
            right: xi.nvars,
        });
    }
    check_structure(s, gamma.nvars)?;
    let n = gamma.nvars;
    let big_n = gamma.truncation();
    let three_halves = Rational::new(3, 2);
    // flows[k-1] = γ_k(s)
    let mut flows: Vec<SPoly> = Vec::with_capacity(big_n);
    for k in 1..=big_n {
        // right-hand side at order k only involves γ_j with j < k
        let mut rhs: SPoly = Vec::new();
        for i in 1..k {
            let x = xi.coeff(i);
            if x.is_zero() {
                continue;
            }
            let g = &flows[k - i - 1];
            let term: SPoly = g.iter().map(|v| x.schouten_unchecked(v)).collect();
            s_add(&mut rhs, &term, n);
        }
        for i in 1..k {
            let x = xi.coeff(i);
            if x.is_zero() {
                continue;
            }
            for j in 1..k - i {
                let l = k - i - j;
                let (gj, gl) = (&flows[j - 1], &flows[l - 1]);
                let mut term: SPoly = vec![PolyVector::zero(n); gj.len() + gl.len()];
                for (p, a) in gj.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (q, b) in gl.iter().enumerate() {
                        if b.is_zero() {
                            continue;
                        }
                        let v = s.l3().eval_homogeneous(&[x.clone(), a.clone(), b.clone()]);
                        term[p + q] = term[p + q].add_unchecked(&v.scale(&three_halves));
                    }
                }
                s_add(&mut rhs, &term, n);
            }
        }
        // γ_k(s) = γ_k(0) - ∫_0^s rhs
        let mut g: SPoly = vec![gamma.coeff(k)];
        for (p, v) in rhs.iter().enumerate() {
            let w = v.scale(&-Rational::new(1, p as i64 + 1));
            g.push(w);
        }
        flows.push(g);
    }
    let coeffs = flows.iter().map(|g| s_eval_one(g, n)).collect();
    ArtinSeries::new(gamma.ring, n, coeffs)
}

#[derive(Clone, Debug)]
pub struct GaugeSearch {
    pub equivalent: bool,
    /// On success, `ξ` with `gauge_flow(γ1, ξ) = γ2`.
    pub witness: Option<GaugeParam>,
    /// On failure, the first order that could not be matched and the
    /// unreachable part of the difference there.
    pub failure: Option<(usize, PolyVector)>,
}

/// Greedy order-by-order search for `ξ` with coefficient degree
/// `<= poly_degree` and `gauge_flow(γ1, ξ) = γ2`. The `t^1` coefficient is
/// gauge invariant; at order `k >= 2` the unknown `ξ_{k-1}` enters linearly
/// through `-[ξ_{k-1}, γ1_1]`. A negative answer is relative to the bounds.
pub fn gauge_equivalent(
    s: &TwistedStructure,
    gamma1: &ArtinSeries,
    gamma2: &ArtinSeries,
    poly_degree: u32,
) -> Result<GaugeSearch> {
    if gamma1.truncation() != gamma2.truncation() {
        return Err(Error::TruncationMismatch {
            left: gamma1.truncation(),
            right: gamma2.truncation(),
        });
    }
    for g in [gamma1, gamma2] {
        if let Some(order) = defect_series(s, g)?.iter().position(|d| !d.is_zero()) {
            return Err(Error::NotMaurerCartan { order: order + 1 });
        }
    }
    let n = gamma1.nvars;
    let ring = gamma1.ring;
    let big_n = ring.truncation;
    let fail = |order: usize, residual: PolyVector| GaugeSearch {
        equivalent: false,
        witness: None,
        failure: Some((order, residual)),
    };
    let diff1 = gamma2.coeff(1).sub_unchecked(&gamma1.coeff(1));
    if !diff1.is_zero() {
        return Ok(fail(1, diff1));
    }
    let unknowns: Vec<PolyVector> = multivector_basis(n, poly_degree, 1)
        .into_iter()
        .filter(|b| b.degree() == Some(1))
        .collect();
    let g1 = gamma1.coeff(1);
    let space = ColumnSpace::from_columns(unknowns.iter().map(|b| b.schouten_unchecked(&g1).neg().raw_terms().to_vec()));
    let mut xi = vec![PolyVector::zero(n); big_n];
    for k in 2..=big_n {
        let current = gauge_flow(s, gamma1, &GaugeParam(ArtinSeries::new(ring, n, xi.clone())?))?;
        let target = gamma2.coeff(k).sub_unchecked(&current.coeff(k));
        match space.solve(target.raw_terms()) {
            Ok(x) => {
                let mut raw = Vec::new();
                for (b, c) in unknowns.iter().zip(&x) {
                    if !c.is_zero() {
                        raw.extend(b.raw_terms().iter().map(|(key, v)| (key.clone(), v * c)));
                    }
                }
                xi[k - 2] = PolyVector::from_raw(n, raw);
            }
            Err(rem) => return Ok(fail(k, PolyVector::from_raw(n, rem))),
        }
    }
    let witness = GaugeParam(ArtinSeries::new(ring, n, xi)?);
    let image = gauge_flow(s, gamma1, &witness)?;
    debug_assert_eq!(&image, gamma2);
    if &image != gamma2 {
        let k = (1..=big_n).find(|&k| image.coeff(k) != gamma2.coeff(k)).unwrap_or(1);
        return Ok(fail(k, gamma2.coeff(k).sub_unchecked(&image.coeff(k))));
    }
    Ok(GaugeSearch {
        equivalent: true,
        witness: Some(witness),
        failure: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::DiffForm;
    use crate::poly::Polynomial;
    use crate::twisted::make_twisted;

    fn biv(n: usize, i: usize, j: usize) -> PolyVector {
        PolyVector::frame(n, &[i, j]).unwrap()
    }

    fn r4() -> (TwistedStructure, PolyVector) {
        let s = make_twisted(&DiffForm::coframe(4, &[0, 1, 2]).unwrap()).unwrap();
        (s, biv(4, 0, 1).add(&biv(4, 2, 3)).unwrap())
    }

    #[test]
    fn untwisted_constant_poisson_solves_trivially() {
        let s = TwistedStructure::untwisted(2);
        let r = mc_solve(&s, &biv(2, 0, 1), 4, 2).unwrap();
        assert!(r.is_solved());
        assert!(r.solution.coeffs()[1..].iter().all(|c| c.is_zero()));
        assert_eq!(r.residual_terms, vec![0; 4]);
    }

    #[test]
    fn r4_defect_series() {
        let (s, pi) = r4();
        let series = ArtinSeries::new(ArtinRing::new(3).unwrap(), 4, vec![pi.clone()]).unwrap();
        let d = defect_series(&s, &series).unwrap();
        assert!(d[0].is_zero() && d[1].is_zero());
        assert_eq!(d[2], s.phi_h(&pi, &pi, &pi).unwrap().neg());
        assert!(!d[2].is_zero());
    }

    #[test]
    fn r4_solves_with_linear_terms_only() {
        let (s, pi) = r4();
        let r = mc_solve(&s, &pi, 2, 1).unwrap();
        assert!(r.is_solved());
        let pi2 = r.solution.coeff(2);
        let lhs = pi.schouten(&pi2).unwrap().scale(&Rational::from_integer(2));
        assert_eq!(lhs, s.phi_h(&pi, &pi, &pi).unwrap());
        match mc_solve(&s, &pi, 2, 0).unwrap().status {
            SolveStatus::Obstructed { order, residual } => {
                assert_eq!(order, 3);
                assert!(!residual.is_zero());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn truncation_one_always_solves() {
        let s = TwistedStructure::untwisted(3);
        let pi = biv(3, 1, 2).mul_poly(&Polynomial::var(3, 1)).unwrap().add(&biv(3, 0, 1)).unwrap();
        assert!(!pi.schouten(&pi).unwrap().is_zero());
        assert!(mc_solve(&s, &pi, 1, 0).unwrap().is_solved());
        assert!(matches!(
            mc_solve(&s, &pi, 2, 0).unwrap().status,
            SolveStatus::Obstructed { order: 2, .. }
        ));
    }

    #[test]
    fn gauge_flow_examples() {
        let n = 2;
        let s = TwistedStructure::untwisted(n);
        let ring = ArtinRing::new(3).unwrap();
        let gamma = ArtinSeries::new(ring, n, vec![biv(n, 0, 1)]).unwrap();
        assert_eq!(gauge_flow(&s, &gamma, &GaugeParam::zero(ring, n)).unwrap(), gamma);
        let xdx = PolyVector::frame(n, &[0]).unwrap().mul_poly(&Polynomial::var(n, 0)).unwrap();
        let xi = GaugeParam::new(ArtinSeries::new(ring, n, vec![xdx.clone()]).unwrap()).unwrap();
        let out = gauge_flow(&s, &gamma, &xi).unwrap();
        assert_eq!(out.coeff(1), biv(n, 0, 1));
        assert_eq!(out.coeff(2), xdx.schouten(&biv(n, 0, 1)).unwrap().neg());
        let zero = ArtinSeries::zero(ring, n);
        assert_eq!(gauge_flow(&s, &zero, &xi).unwrap(), zero);
    }

    #[test]
    fn gauge_equivalence_examples() {
        let n = 2;
        let s = TwistedStructure::untwisted(n);
        let ring = ArtinRing::new(3).unwrap();
        let g1 = ArtinSeries::new(ring, n, vec![biv(n, 0, 1)]).unwrap();
        let r = gauge_equivalent(&s, &g1, &g1, 1).unwrap();
        assert!(r.equivalent);
        assert!(r.witness.unwrap().series().coeffs().iter().all(|c| c.is_zero()));
        // the t^1 coefficient is invariant
        let g2 = ArtinSeries::new(ring, n, vec![biv(n, 0, 1).scale(&Rational::from_integer(2))]).unwrap();
        let r = gauge_equivalent(&s, &g1, &g2, 2).unwrap();
        assert!(!r.equivalent);
        assert_eq!(r.failure.unwrap().0, 1);
        // round trip
        let v = PolyVector::frame(n, &[1]).unwrap().mul_poly(&Polynomial::var(n, 0)).unwrap();
        let xi = GaugeParam::new(ArtinSeries::new(ring, n, vec![v.clone(), v.scale(&Rational::new(1, 3))]).unwrap()).unwrap();
        let g3 = gauge_flow(&s, &g1, &xi).unwrap();
        let r = gauge_equivalent(&s, &g1, &g3, 1).unwrap();
        assert!(r.equivalent);
        assert_eq!(gauge_flow(&s, &g1, r.witness.as_ref().unwrap()).unwrap(), g3);
    }

    #[test]
    fn gauge_flow_preserves_twisted_solutions() {
        let (s, pi) = r4();
        let r = mc_solve(&s, &pi, 3, 2).unwrap();
        assert!(r.is_solved(), "{:?}", r.status);
        let ring = r.solution.ring();
        let v1 = PolyVector::frame(4, &[2]).unwrap().mul_poly(&Polynomial::var(4, 0)).unwrap();
        let v2 = PolyVector::frame(4, &[0]).unwrap().mul_poly(&Polynomial::var(4, 3)).unwrap();
        let xi = GaugeParam::new(ArtinSeries::new(ring, 4, vec![v1, v2]).unwrap()).unwrap();
        let out = gauge_flow(&s, &r.solution, &xi).unwrap();
        assert!(defect_series(&s, &out).unwrap().iter().all(|d| d.is_zero()));
        assert_ne!(out, r.solution);
    }
}
