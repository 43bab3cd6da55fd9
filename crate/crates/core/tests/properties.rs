//! Randomized algebraic invariants over small sparse inputs.

use deformkit::chevalley::{cochain_differential, phi};
use deformkit::deform::{defect_series, gauge_flow, mc_solve, ArtinRing, ArtinSeries, GaugeParam};
use deformkit::hochschild::{cup, gerstenhaber, hoch_delta, MultiDiffOp};
use deformkit::sign::{permutation_sign, subsets};
use deformkit::twisted::{make_twisted, TwistedStructure};
use deformkit::{DiffForm, Frame, Monomial, PolyVector, Polynomial, Rational};
use proptest::prelude::*;

const N: usize = 3;

fn rational() -> impl Strategy<Value = Rational> {
    (-4i64..=4, 1i64..=3).prop_map(|(p, q)| Rational::new(p, q))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |r| *r != Rational::from_integer(0))
}

fn monomial(n: usize, max_exp: u16) -> impl Strategy<Value = Monomial> {
    prop::collection::vec(0..=max_exp, n).prop_map(|e| Monomial::from_exps(&e))
}

fn poly(n: usize, max_exp: u16) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((monomial(n, max_exp), rational()), 0..4).prop_map(move |t| Polynomial::from_terms(n, t))
}

/// Terms on frames of exactly `k` indices.
fn frame_terms(n: usize, k: usize, max_exp: u16) -> impl Strategy<Value = Vec<(Frame, Polynomial)>> {
    let frames = subsets(n, k);
    prop::collection::vec((0..frames.len(), poly(n, max_exp)), 0..3).prop_map(move |t| {
        t.into_iter()
            .map(|(i, p)| (Frame::from_indices(&frames[i], n).unwrap(), p))
            .collect()
    })
}

/// A homogeneous multivector together with its degree.
fn multivector(n: usize, max_deg: usize, max_exp: u16) -> impl Strategy<Value = (usize, PolyVector)> {
    (0..=max_deg).prop_flat_map(move |k| {
        frame_terms(n, k, max_exp).prop_map(move |t| (k, PolyVector::from_components(n, t).unwrap()))
    })
}

fn form(n: usize, max_deg: usize, max_exp: u16) -> impl Strategy<Value = (usize, DiffForm)> {
    (0..=max_deg).prop_flat_map(move |k| {
        frame_terms(n, k, max_exp).prop_map(move |t| (k, DiffForm::from_components(n, t).unwrap()))
    })
}

/// Two-variable cochains of arity ≤ 2 with operator order ≤ 1 per slot.
fn cochain() -> impl Strategy<Value = MultiDiffOp> {
    (0usize..=2).prop_flat_map(|arity| {
        prop::collection::vec(
            (monomial(2, 1), prop::collection::vec(monomial(2, 1), arity), rational()),
            0..3,
        )
        .prop_map(move |terms| {
            terms.into_iter().fold(MultiDiffOp::zero(2, arity), |acc, (m, o, c)| {
                acc.add(&MultiDiffOp::basis(m, &o, c)).unwrap()
            })
        })
    })
}

fn sgn(e: usize) -> Rational {
    Rational::sign_power(e as i64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_field_laws(a in rational(), b in rational(), c in nonzero_rational()) {
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a / &c) * &c, a.clone());
        prop_assert_eq!(a.to_string().parse::<Rational>().unwrap(), a.clone());
        prop_assert!(a.denom() > 0.into());
    }

    #[test]
    fn polynomial_ring_laws(p in poly(N, 2), q in poly(N, 2), r in poly(N, 2)) {
        prop_assert_eq!(p.mul(&q).unwrap(), q.mul(&p).unwrap());
        prop_assert_eq!(
            p.mul(&q.add(&r).unwrap()).unwrap(),
            p.mul(&q).unwrap().add(&p.mul(&r).unwrap()).unwrap()
        );
        prop_assert!(p.terms().iter().all(|(_, c)| *c != Rational::from_integer(0)));
    }

    #[test]
    fn derivative_is_a_derivation(p in poly(N, 2), q in poly(N, 2), i in 0..N) {
        let lhs = p.mul(&q).unwrap().derive(i).unwrap();
        let rhs = p.derive(i).unwrap().mul(&q).unwrap().add(&p.mul(&q.derive(i).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn permutation_sign_is_multiplicative(s in Just((0..4).collect::<Vec<usize>>()).prop_shuffle(),
                                          t in Just((0..4).collect::<Vec<usize>>()).prop_shuffle()) {
        let st: Vec<usize> = t.iter().map(|&i| s[i]).collect();
        prop_assert_eq!(permutation_sign(&st), permutation_sign(&s) * permutation_sign(&t));
    }

    #[test]
    fn wedge_is_graded_commutative((i, a) in multivector(N, 3, 1), (j, b) in multivector(N, 3, 1)) {
        prop_assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap().scale(&sgn(i * j)));
    }

    #[test]
    fn schouten_is_graded_antisymmetric((i, a) in multivector(N, 3, 2), (j, b) in multivector(N, 3, 2)) {
        let sign = -sgn((i + 1) * (j + 1));
        prop_assert_eq!(a.schouten(&b).unwrap(), b.schouten(&a).unwrap().scale(&sign));
    }

    #[test]
    fn schouten_jacobi((i, a) in multivector(N, 2, 1), (j, b) in multivector(N, 2, 1), (k, c) in multivector(N, 2, 1)) {
        let term = |x: &PolyVector, y: &PolyVector, z: &PolyVector, dx: usize, dz: usize| {
            x.schouten(&y.schouten(z).unwrap()).unwrap().scale(&sgn((dx + 1) * (dz + 1)))
        };
        let total = term(&a, &b, &c, i, k)
            .add(&term(&b, &c, &a, j, i)).unwrap()
            .add(&term(&c, &a, &b, k, j)).unwrap();
        prop_assert!(total.is_zero(), "{}", total);
    }

    #[test]
    fn schouten_derives_wedge((i, a) in multivector(N, 2, 1), (j, b) in multivector(N, 2, 1), (_, c) in multivector(N, 2, 1)) {
        let lhs = a.schouten(&b.wedge(&c).unwrap()).unwrap();
        let rhs = a.schouten(&b).unwrap().wedge(&c).unwrap()
            .add(&b.wedge(&a.schouten(&c).unwrap()).unwrap().scale(&sgn((i + 1) * j))).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn exterior_derivative_squares_to_zero((_, w) in form(N, 3, 2)) {
        prop_assert!(w.d().d().is_zero());
    }

    #[test]
    fn exterior_derivative_is_graded_derivation((i, a) in form(N, 2, 2), (_, b) in form(N, 2, 2)) {
        let lhs = a.wedge(&b).unwrap().d();
        let rhs = a.d().wedge(&b).unwrap().add(&a.wedge(&b.d()).unwrap().scale(&sgn(i))).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn phi_intertwines_differentials(
        (k, w) in form(N, 2, 1).prop_filter("nonzero of positive degree", |(k, w)| *k > 0 && !w.is_zero()),
        args in prop::collection::vec(multivector(N, 2, 1), 3),
    ) {
        let args: Vec<PolyVector> = args.into_iter().take(k + 1).map(|(_, a)| a).collect();
        let lhs = cochain_differential(&phi(&w).unwrap()).unwrap().eval(&args).unwrap();
        let dw = w.d();
        let rhs = if dw.is_zero() { PolyVector::zero(N) } else { phi(&dw).unwrap().eval(&args).unwrap() };
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bivectors_in_two_variables_are_poisson((_, p) in multivector(2, 2, 2).prop_filter("bivector", |(k, _)| *k == 2)) {
        prop_assert!(TwistedStructure::untwisted(2).mc_defect(&p).unwrap().is_zero());
    }

    #[test]
    fn hochschild_differential_squares_to_zero(d in cochain()) {
        prop_assert!(hoch_delta(&hoch_delta(&d)).is_zero());
    }

    #[test]
    fn hochschild_differential_is_bracket_with_multiplication(d in cochain()) {
        let via_bracket = gerstenhaber(&MultiDiffOp::multiplication(2), &d).unwrap();
        prop_assert!(hoch_delta(&d).sub(&via_bracket).unwrap().is_zero());
    }

    #[test]
    fn gerstenhaber_is_graded_antisymmetric(d in cochain(), e in cochain()) {
        let (k, l) = (d.arity(), e.arity());
        let swapped = gerstenhaber(&e, &d).unwrap().scale(&sgn((k + 1) * (l + 1)));
        prop_assert!(gerstenhaber(&d, &e).unwrap().add(&swapped).unwrap().is_zero());
    }

    #[test]
    fn delta_derives_cup(d in cochain(), e in cochain()) {
        let lhs = hoch_delta(&cup(&d, &e).unwrap());
        let rhs = cup(&hoch_delta(&d), &e).unwrap()
            .add(&cup(&d, &hoch_delta(&e)).unwrap().scale(&sgn(d.arity()))).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().is_zero());
    }

    #[test]
    fn solved_series_have_vanishing_defect(
        h in rational(),
        coeffs in prop::collection::vec(rational(), 6),
    ) {
        let n = 4;
        let s = make_twisted(&DiffForm::coframe(n, &[0, 1, 2]).unwrap().scale(&h)).unwrap();
        let comps: Vec<(Frame, Polynomial)> = subsets(n, 2).iter().zip(&coeffs)
            .map(|(f, c)| (Frame::from_indices(f, n).unwrap(), Polynomial::constant(n, c.clone())))
            .collect();
        let pi = PolyVector::from_components(n, comps).unwrap();
        let r = mc_solve(&s, &pi, 2, 1).unwrap();
        if r.is_solved() {
            prop_assert!(defect_series(&s, &r.solution).unwrap().iter().all(|d| d.is_zero()));
        }
    }

    #[test]
    fn zero_gauge_is_identity((_, p) in multivector(N, 2, 1).prop_filter("bivector", |(k, _)| *k == 2)) {
        let ring = ArtinRing::new(3).unwrap();
        let s = make_twisted(&DiffForm::coframe(N, &[0, 1, 2]).unwrap()).unwrap();
        let gamma = ArtinSeries::new(ring, N, vec![p.clone(), p]).unwrap();
        prop_assert_eq!(gauge_flow(&s, &gamma, &GaugeParam::zero(ring, N)).unwrap(), gamma);
    }
}
