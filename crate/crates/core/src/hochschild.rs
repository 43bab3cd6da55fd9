//! Multidifferential Hochschild cochains on a polynomial algebra.
//!
//! A cochain of arity `k` is a finite sum of terms
//! `c x^m ∂^{o_1}(a_1) ⋯ ∂^{o_k}(a_k)` with multi-indices `o_i`. Signs:
//!
//! * braces `D{E_1,…,E_m}` carry `(-1)^{Σ_j (l_j - 1) r_j}`, where `E_j` has
//!   arity `l_j` and `r_j` arguments follow its block;
//! * `[D, E] = D{E} - (-1)^{(k-1)(l-1)} E{D}`;
//! * `δD = [μ, D]`;
//! * `hkr(i_a π) = -i_a(hkr π)` with `i_a π = [a, π]` on multivectors.

use std::fmt;

use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::linalg::{ColumnSpace, SparseVec};
use crate::multivector::PolyVector;
use crate::poly::{normalize_terms, Monomial, Polynomial, VarContext};
use crate::rational::Rational;
use crate::sign::{permutation_sign, permutations, subsets};

pub type Orders = SmallVec<[Monomial; 4]>;
/// `(orders, coefficient monomial)`.
pub type OpKey = (Orders, Monomial);

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiDiffOp {
    nvars: usize,
    arity: usize,
    terms: Vec<(OpKey, Rational)>,
}

fn factorial(n: u32) -> Rational {
    Rational::from_integer((1..=n as i64).product::<i64>().max(1))
}

/// All ways of writing `o = q_0 + … + q_{parts-1}` with the multinomial
/// weight `Π_v o_v! / Π_{j,v} q_{j,v}!`.
fn splits(o: &Monomial, parts: usize) -> Vec<(Rational, Vec<Monomial>)> {
    let n = o.nvars();
    let mut out: Vec<(Rational, Vec<Vec<u16>>)> = vec![(Rational::one(), vec![vec![0; n]; parts])];
    for (v, &e) in o.exps().iter().enumerate() {
        if e == 0 {
            continue;
        }
        // compositions of e into `parts` nonnegative pieces
        let mut comps: Vec<Vec<u16>> = Vec::new();
        let mut cur = vec![0u16; parts];
        fn rec(rest: u16, i: usize, cur: &mut Vec<u16>, comps: &mut Vec<Vec<u16>>) {
            if i + 1 == cur.len() {
                cur[i] = rest;
                comps.push(cur.clone());
                return;
            }
            for x in 0..=rest {
                cur[i] = x;
                rec(rest - x, i + 1, cur, comps);
            }
        }
        rec(e, 0, &mut cur, &mut comps);
        let mut next = Vec::with_capacity(out.len() * comps.len());
        for (w, qs) in &out {
            for comp in &comps {
                let mut weight = w * &factorial(e as u32);
                let mut qs = qs.clone();
                for (j, &x) in comp.iter().enumerate() {
                    weight = &weight / &factorial(x as u32);
                    qs[j][v] = x;
                }
                next.push((weight, qs));
            }
        }
        out = next;
    }
    out.into_iter()
        .map(|(w, qs)| (w, qs.iter().map(|q| Monomial::from_exps(q)).collect()))
        .collect()
}

/// `∂^o (x^m ∂^{p_1}(a_1) ⋯ ∂^{p_l}(a_l))` as a list of
/// `(weight, new monomial, new orders)`.
fn derive_product(o: &Monomial, m: &Monomial, orders: &[Monomial]) -> Vec<(Rational, Monomial, Orders)> {
    let mut out = Vec::new();
    for (w, qs) in splits(o, orders.len() + 1) {
        let Some((c, dm)) = m.derive_multi(&qs[0]) else {
            continue;
        };
        let new_orders: Orders = orders.iter().zip(&qs[1..]).map(|(p, q)| p.mul(q)).collect();
        out.push((&w * &c, dm, new_orders));
    }
    out
}

impl MultiDiffOp {
    pub fn zero(nvars: usize, arity: usize) -> Self {
        MultiDiffOp {
            nvars,
            arity,
            terms: Vec::new(),
        }
    }

    pub(crate) fn from_raw(nvars: usize, arity: usize, raw: Vec<(OpKey, Rational)>) -> Self {
        MultiDiffOp {
            nvars,
            arity,
            terms: normalize_terms(raw),
        }
    }

    /// The 0-cochain `f`.
    pub fn function(f: &Polynomial) -> Self {
        let raw = f
            .terms()
            .iter()
            .map(|(m, c)| ((Orders::new(), m.clone()), c.clone()))
            .collect();
        MultiDiffOp::from_raw(f.nvars(), 0, raw)
    }

    /// `c x^mono ∂^{o_1} ⊗ … ⊗ ∂^{o_k}`.
    pub fn basis(mono: Monomial, orders: &[Monomial], c: Rational) -> Self {
        let nvars = mono.nvars();
        MultiDiffOp::from_raw(nvars, orders.len(), vec![((orders.iter().cloned().collect(), mono), c)])
    }

    /// Validated construction from `(coefficient, orders)` pairs.
    pub fn from_components(nvars: usize, arity: usize, comps: Vec<(Polynomial, Vec<Monomial>)>) -> Result<Self> {
        let mut raw = Vec::new();
        for (p, orders) in comps {
            if p.nvars() != nvars {
                return Err(Error::ContextMismatch {
                    left: nvars,
                    right: p.nvars(),
                });
            }
            if orders.len() != arity {
                return Err(Error::LengthMismatch {
                    expected: arity,
                    got: orders.len(),
                });
            }
            if let Some(o) = orders.iter().find(|o| o.nvars() != nvars) {
                return Err(Error::ContextMismatch {
                    left: nvars,
                    right: o.nvars(),
                });
            }
            let key: Orders = orders.into_iter().collect();
            for (m, c) in p.into_terms() {
                raw.push(((key.clone(), m), c));
            }
        }
        Ok(MultiDiffOp::from_raw(nvars, arity, raw))
    }

    pub fn identity(nvars: usize) -> Self {
        MultiDiffOp::basis(Monomial::one(nvars), &[Monomial::one(nvars)], Rational::one())
    }

    /// The product `μ(a, b) = ab`.
    pub fn multiplication(nvars: usize) -> Self {
        let one = Monomial::one(nvars);
        MultiDiffOp::basis(one.clone(), &[one.clone(), one], Rational::one())
    }

    /// The 1-cochain `∂_i`.
    pub fn partial(nvars: usize, i: usize) -> Result<Self> {
        if i >= nvars {
            return Err(Error::IndexOutOfRange { index: i, nvars });
        }
        Ok(MultiDiffOp::basis(Monomial::one(nvars), &[Monomial::var(nvars, i)], Rational::one()))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(OpKey, Rational)] {
        &self.terms
    }

    /// Terms grouped by order tuple, in canonical order.
    pub fn components(&self) -> Vec<(Vec<Monomial>, Polynomial)> {
        let mut out: Vec<(Orders, Vec<(Monomial, Rational)>)> = Vec::new();
        for ((o, m), c) in &self.terms {
            match out.last_mut() {
                Some((lo, v)) if lo == o => v.push((m.clone(), c.clone())),
                _ => out.push((o.clone(), vec![(m.clone(), c.clone())])),
            }
        }
        out.into_iter()
            .map(|(o, v)| (o.to_vec(), Polynomial::from_terms(self.nvars, v)))
            .collect()
    }

    /// Largest `|o_i|` over all slots and terms.
    pub fn max_order(&self) -> u32 {
        self.terms
            .iter()
            .flat_map(|((o, _), _)| o.iter().map(|m| m.degree()))
            .max()
            .unwrap_or(0)
    }

    pub fn max_coeff_degree(&self) -> u32 {
        self.terms.iter().map(|((_, m), _)| m.degree()).max().unwrap_or(0)
    }

    fn check_ctx(&self, other: &MultiDiffOp) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::ContextMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    fn check_same_shape(&self, other: &MultiDiffOp) -> Result<()> {
        self.check_ctx(other)?;
        if self.arity != other.arity && !self.is_zero() && !other.is_zero() {
            return Err(Error::LengthMismatch {
                expected: self.arity,
                got: other.arity,
            });
        }
        Ok(())
    }

    fn combined(&self, other: &MultiDiffOp, s: &Rational) -> MultiDiffOp {
        let arity = if self.is_zero() { other.arity } else { self.arity };
        let mut raw = self.terms.clone();
        raw.extend(other.terms.iter().map(|(k, c)| (k.clone(), c * s)));
        MultiDiffOp::from_raw(self.nvars, arity, raw)
    }

    /// Sum; a zero operand adopts the other's arity.
    pub fn add(&self, other: &MultiDiffOp) -> Result<MultiDiffOp> {
        self.check_same_shape(other)?;
        Ok(self.combined(other, &Rational::one()))
    }

    pub fn sub(&self, other: &MultiDiffOp) -> Result<MultiDiffOp> {
        self.check_same_shape(other)?;
        Ok(self.combined(other, &-Rational::one()))
    }

    pub fn scale(&self, s: &Rational) -> MultiDiffOp {
        if s.is_zero() {
            return MultiDiffOp::zero(self.nvars, self.arity);
        }
        MultiDiffOp {
            nvars: self.nvars,
            arity: self.arity,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c * s)).collect(),
        }
    }

    pub fn neg(&self) -> MultiDiffOp {
        self.scale(&-Rational::one())
    }

    /// Evaluates `D(a_1, …, a_k)`.
    pub fn apply(&self, args: &[Polynomial]) -> Result<Polynomial> {
        if args.len() != self.arity {
            return Err(Error::LengthMismatch {
                expected: self.arity,
                got: args.len(),
            });
        }
        if let Some(a) = args.iter().find(|a| a.nvars() != self.nvars) {
            return Err(Error::ContextMismatch {
                left: self.nvars,
                right: a.nvars(),
            });
        }
        let mut total = Polynomial::zero(self.nvars);
        for ((orders, m), c) in &self.terms {
            let mut acc = Polynomial::monomial(m.clone(), c.clone());
            for (o, a) in orders.iter().zip(args) {
                acc = acc.mul_unchecked(&a.derive_multi(o));
                if acc.is_zero() {
                    break;
                }
            }
            total = total.add_unchecked(&acc);
        }
        Ok(total)
    }

    pub fn display_with(&self, ctx: Option<&VarContext>) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.components()
            .iter()
            .map(|(orders, p)| {
                let ops: Vec<String> = orders
                    .iter()
                    .map(|o| {
                        if o.is_one() {
                            "id".to_string()
                        } else {
                            format!("D[{}]", o.display_with(ctx))
                        }
                    })
                    .collect();
                if ops.is_empty() {
                    format!("({})", p.display_with(ctx))
                } else {
                    format!("({})*{}", p.display_with(ctx), ops.join("(x)"))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Debug for MultiDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[arity {}] {}", self.arity, self.display_with(None))
    }
}

impl fmt::Display for MultiDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(None))
    }
}

/// The Hochschild differential
/// `δD(a_0,…,a_k) = a_0 D(a_1,…) + Σ_i (-1)^{i+1} D(…, a_i a_{i+1}, …) + (-1)^{k+1} D(…, a_{k-1}) a_k`.
pub fn hoch_delta(d: &MultiDiffOp) -> MultiDiffOp {
    let k = d.arity;
    let n = d.nvars;
    let one = Monomial::one(n);
    let mut raw = Vec::new();
    for ((orders, m), c) in &d.terms {
        let mut first: Orders = Orders::new();
        first.push(one.clone());
        first.extend(orders.iter().cloned());
        raw.push(((first, m.clone()), c.clone()));
        for i in 0..k {
            let negative = i % 2 == 0;
            for (w, qs) in splits(&orders[i], 2) {
                let mut o: Orders = orders[..i].iter().cloned().collect();
                o.push(qs[0].clone());
                o.push(qs[1].clone());
                o.extend(orders[i + 1..].iter().cloned());
                let v = &w * c;
                raw.push(((o, m.clone()), if negative { -v } else { v }));
            }
        }
        let mut last: Orders = orders.clone();
        last.push(one.clone());
        raw.push(((last, m.clone()), if k.is_multiple_of(2) { -c.clone() } else { c.clone() }));
    }
    MultiDiffOp::from_raw(n, k + 1, raw)
}

/// Brace insertion `D{E_1, …, E_m}`.
pub fn brace(d: &MultiDiffOp, args: &[MultiDiffOp]) -> Result<MultiDiffOp> {
    for e in args {
        d.check_ctx(e)?;
    }
    if args.len() > d.arity {
        return Err(Error::TooManyInsertions {
            arity: d.arity,
            got: args.len(),
        });
    }
    let n = d.nvars;
    let k = d.arity;
    let arity = k + args.iter().map(|e| e.arity).sum::<usize>() - args.len();
    if args.is_empty() {
        return Ok(d.clone());
    }
    let mut raw = Vec::new();
    for slots in subsets(k, args.len()) {
        // sign exponent Σ_j (l_j - 1)·(arguments after block j)
        let mut sign_exp = 0usize;
        let mut after = 0usize;
        let mut j = slots.len();
        for s in (0..k).rev() {
            if j > 0 && slots[j - 1] == s {
                j -= 1;
                sign_exp += (args[j].arity + 1) * after;
                after += args[j].arity;
            } else {
                after += 1;
            }
        }
        let negative = sign_exp % 2 == 1;
        for ((d_orders, d_mono), d_c) in &d.terms {
            // partial products: (coeff, mono, orders so far)
            let mut partial: Vec<(Rational, Monomial, Orders)> =
                vec![(if negative { -d_c.clone() } else { d_c.clone() }, d_mono.clone(), Orders::new())];
            let mut j = 0;
            for (s, o) in d_orders.iter().enumerate() {
                if j < slots.len() && slots[j] == s {
                    let e = &args[j];
                    let mut expansions = Vec::new();
                    for ((e_orders, e_mono), e_c) in &e.terms {
                        for (w, m, os) in derive_product(o, e_mono, e_orders) {
                            expansions.push((&w * e_c, m, os));
                        }
                    }
                    let mut next = Vec::with_capacity(partial.len() * expansions.len());
                    for (pc, pm, po) in &partial {
                        for (ec, em, eo) in &expansions {
                            let mut orders = po.clone();
                            orders.extend(eo.iter().cloned());
                            next.push((pc * ec, pm.mul(em), orders));
                        }
                    }
                    partial = next;
                    j += 1;
                } else {
                    for p in partial.iter_mut() {
                        p.2.push(o.clone());
                    }
                }
                if partial.is_empty() {
                    break;
                }
            }
            raw.extend(partial.into_iter().map(|(c, m, o)| ((o, m), c)));
        }
    }
    Ok(MultiDiffOp::from_raw(n, arity, raw))
}

/// `[D, E] = D{E} - (-1)^{(|D|-1)(|E|-1)} E{D}`. Arity-0 cochains take part
/// with shifted degree `-1`.
pub fn gerstenhaber(d: &MultiDiffOp, e: &MultiDiffOp) -> Result<MultiDiffOp> {
    d.check_ctx(e)?;
    let arity = (d.arity + e.arity).saturating_sub(1);
    let de = if d.arity >= 1 {
        brace(d, std::slice::from_ref(e))?
    } else {
        MultiDiffOp::zero(d.nvars, arity)
    };
    let ed = if e.arity >= 1 {
        brace(e, std::slice::from_ref(d))?
    } else {
        MultiDiffOp::zero(d.nvars, arity)
    };
    let odd = (d.arity as i64 - 1) * (e.arity as i64 - 1) % 2 != 0;
    let out = if odd { de.add(&ed)? } else { de.sub(&ed)? };
    Ok(MultiDiffOp { arity, ..out })
}

/// `(D ∪ E)(a_1, …, a_{k+l}) = D(a_1, …, a_k) E(a_{k+1}, …, a_{k+l})`.
pub fn cup(d: &MultiDiffOp, e: &MultiDiffOp) -> Result<MultiDiffOp> {
    d.check_ctx(e)?;
    let mut raw = Vec::with_capacity(d.terms.len() * e.terms.len());
    for ((o1, m1), c1) in &d.terms {
        for ((o2, m2), c2) in &e.terms {
            let mut o = o1.clone();
            o.extend(o2.iter().cloned());
            raw.push(((o, m1.mul(m2)), c1 * c2));
        }
    }
    Ok(MultiDiffOp::from_raw(d.nvars, d.arity + e.arity, raw))
}

/// `i_a D(a_1, …, a_{k-1}) = Σ_{i=0}^{k-1} (-1)^i D(a_1, …, a_i, a, a_{i+1}, …)`.
pub fn i_func_hoch(a: &Polynomial, d: &MultiDiffOp) -> Result<MultiDiffOp> {
    if a.nvars() != d.nvars {
        return Err(Error::ContextMismatch {
            left: d.nvars,
            right: a.nvars(),
        });
    }
    if d.arity == 0 {
        return Ok(MultiDiffOp::zero(d.nvars, 0));
    }
    let mut raw = Vec::new();
    for ((orders, m), c) in &d.terms {
        for i in 0..d.arity {
            let da = a.derive_multi(&orders[i]);
            if da.is_zero() {
                continue;
            }
            let rest: Orders = orders
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, o)| o.clone())
                .collect();
            let s = if i % 2 == 1 { -c.clone() } else { c.clone() };
            for (am, ac) in da.terms() {
                raw.push(((rest.clone(), m.mul(am)), &s * ac));
            }
        }
    }
    Ok(MultiDiffOp::from_raw(d.nvars, d.arity - 1, raw))
}

/// Antisymmetrization `f ∂_{i_1}∧…∧∂_{i_k} ↦ (1/k!) Σ_σ sgn(σ) f ∂_{i_σ(1)} ⊗ … ⊗ ∂_{i_σ(k)}`.
pub fn hkr(pi: &PolyVector) -> Result<MultiDiffOp> {
    let n = pi.nvars();
    let Some(k) = pi.degree() else {
        return Err(Error::WrongDegree {
            expected: pi.component(0).degree().unwrap_or(0),
            found: "mixed".into(),
        });
    };
    let norm = factorial(k as u32).recip();
    let perms = permutations(k);
    let mut raw = Vec::new();
    for (frame, f) in pi.components() {
        let idx = frame.indices();
        for perm in &perms {
            let orders: Orders = perm.iter().map(|&p| Monomial::var(n, idx[p])).collect();
            let w = if permutation_sign(perm) < 0 { -norm.clone() } else { norm.clone() };
            for (m, c) in f.terms() {
                raw.push(((orders.clone(), m.clone()), c * &w));
            }
        }
    }
    Ok(MultiDiffOp::from_raw(n, k, raw))
}

/// Search space for [`delta_primitive`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimitiveBounds {
    /// Maximum coefficient degree.
    pub poly_degree: u32,
    /// Maximum order `|o_i|` in each slot.
    pub op_order: u32,
}

#[derive(Clone, Debug)]
pub enum PrimitiveOutcome {
    Found(MultiDiffOp),
    /// No primitive within bounds. `residual` is the target reduced modulo
    /// the image of `δ`; `rank` is the dimension of that image.
    NotFound {
        residual: MultiDiffOp,
        rank: usize,
        unknowns: usize,
    },
}

impl PrimitiveOutcome {
    pub fn primitive(&self) -> Option<&MultiDiffOp> {
        match self {
            PrimitiveOutcome::Found(x) => Some(x),
            PrimitiveOutcome::NotFound { .. } => None,
        }
    }
}

/// Every basis cochain `x^m ∂^{o_1} ⊗ … ⊗ ∂^{o_k}` within the bounds, in
/// canonical order.
pub fn cochain_basis(nvars: usize, arity: usize, bounds: PrimitiveBounds) -> Vec<MultiDiffOp> {
    let monos = Monomial::all_up_to(nvars, bounds.poly_degree);
    let orders = Monomial::all_up_to(nvars, bounds.op_order);
    let mut tuples: Vec<Vec<Monomial>> = vec![Vec::new()];
    for _ in 0..arity {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                orders.iter().map(move |o| {
                    let mut t = t.clone();
                    t.push(o.clone());
                    t
                })
            })
            .collect();
    }
    let mut out = Vec::with_capacity(tuples.len() * monos.len());
    for t in &tuples {
        for m in &monos {
            out.push(MultiDiffOp::basis(m.clone(), t, Rational::one()));
        }
    }
    out
}

/// Finds `ξ` with `δξ = T` among cochains of arity `k - 1` within `bounds`,
/// by exact elimination.
pub fn delta_primitive(t: &MultiDiffOp, bounds: PrimitiveBounds) -> PrimitiveOutcome {
    let n = t.nvars;
    if t.is_zero() {
        return PrimitiveOutcome::Found(MultiDiffOp::zero(n, t.arity.saturating_sub(1)));
    }
    if t.arity == 0 {
        return PrimitiveOutcome::NotFound {
            residual: t.clone(),
            rank: 0,
            unknowns: 0,
        };
    }
    let basis = cochain_basis(n, t.arity - 1, bounds);
    let space = ColumnSpace::from_columns(basis.iter().map(|b| hoch_delta(b).terms));
    let target: SparseVec<OpKey> = t.terms.clone();
    match space.solve(&target) {
        Ok(x) => {
            let mut raw = Vec::new();
            for (b, c) in basis.iter().zip(&x) {
                if c.is_zero() {
                    continue;
                }
                raw.extend(b.terms.iter().map(|(k, v)| (k.clone(), v * c)));
            }
            PrimitiveOutcome::Found(MultiDiffOp::from_raw(n, t.arity - 1, raw))
        }
        Err(rem) => PrimitiveOutcome::NotFound {
            residual: MultiDiffOp::from_raw(n, t.arity, rem),
            rank: space.rank(),
            unknowns: basis.len(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    fn var(n: usize, i: usize) -> Polynomial {
        Polynomial::var(n, i)
    }

    fn e(n: usize, i: usize) -> Monomial {
        Monomial::var(n, i)
    }

    #[test]
    fn splits_count_and_weights() {
        // (x+y)^2 style: splitting order (2) into two parts gives weights 1,2,1
        let o = Monomial::from_exps(&[2]);
        let s = splits(&o, 2);
        let w: Vec<Rational> = s.iter().map(|(w, _)| w.clone()).collect();
        assert_eq!(w, vec![q(1, 1), q(2, 1), q(1, 1)]);
    }

    #[test]
    fn delta_of_identity_is_multiplication() {
        let n = 2;
        // δ id (a,b) = a b - ab + ab = ab
        assert_eq!(hoch_delta(&MultiDiffOp::identity(n)), MultiDiffOp::multiplication(n));
        assert!(hoch_delta(&MultiDiffOp::multiplication(n)).is_zero());
        let c = MultiDiffOp::function(&Polynomial::constant(n, q(3, 1)));
        assert!(hoch_delta(&c).is_zero());
    }

    #[test]
    fn delta_matches_simplicial_formula_on_inputs() {
        let n = 2;
        let d = MultiDiffOp::basis(Monomial::from_exps(&[1, 0]), &[e(n, 0), Monomial::from_exps(&[0, 2])], q(1, 1));
        let a0 = var(n, 0).add(&var(n, 1)).unwrap();
        let a1 = var(n, 1).mul(&var(n, 1)).unwrap().mul(&var(n, 0)).unwrap();
        let a2 = var(n, 0).mul(&var(n, 1)).unwrap().add(&Polynomial::one(n)).unwrap();
        let lhs = hoch_delta(&d).apply(&[a0.clone(), a1.clone(), a2.clone()]).unwrap();
        let ap = |x: &Polynomial, y: &Polynomial| d.apply(&[x.clone(), y.clone()]).unwrap();
        let rhs = a0
            .mul(&ap(&a1, &a2))
            .unwrap()
            .sub(&ap(&a0.mul(&a1).unwrap(), &a2))
            .unwrap()
            .add(&ap(&a0, &a1.mul(&a2).unwrap()))
            .unwrap()
            .sub(&ap(&a0, &a1).mul(&a2).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn brace_examples() {
        let n = 2;
        let dx = MultiDiffOp::partial(n, 0).unwrap();
        let dy = MultiDiffOp::partial(n, 1).unwrap();
        let mu = MultiDiffOp::multiplication(n);
        assert_eq!(brace(&mu, &[dx.clone(), dy.clone()]).unwrap(), cup(&dx, &dy).unwrap());
        assert_eq!(brace(&dx, &[]).unwrap(), dx);
        // ∂x{∂y} = ∂x∂y
        let dxy = MultiDiffOp::basis(Monomial::one(n), &[Monomial::from_exps(&[1, 1])], q(1, 1));
        assert_eq!(brace(&dx, &[dy.clone()]).unwrap(), dxy);
        assert!(matches!(
            brace(&dx, &[dx.clone(), dy]),
            Err(Error::TooManyInsertions { arity: 1, got: 2 })
        ));
    }

    #[test]
    fn brace_composition_applies() {
        let n = 2;
        // D = x ∂x, E = y ∂y^2 ; D{E}(a) = x ∂x(y ∂y² a) = x y ∂x∂y² a
        let d = MultiDiffOp::basis(e(n, 0), &[e(n, 0)], q(1, 1));
        let ee = MultiDiffOp::basis(e(n, 1), &[Monomial::from_exps(&[0, 2])], q(1, 1));
        let de = brace(&d, &[ee.clone()]).unwrap();
        let a = Polynomial::monomial(Monomial::from_exps(&[2, 3]), q(1, 1));
        let direct = d.apply(&[ee.apply(&[a.clone()]).unwrap()]).unwrap();
        assert_eq!(de.apply(&[a]).unwrap(), direct);
    }

    #[test]
    fn gerstenhaber_examples() {
        let n = 1;
        let dx = MultiDiffOp::partial(n, 0).unwrap();
        let xdx = MultiDiffOp::basis(e(n, 0), &[e(n, 0)], q(1, 1));
        assert_eq!(gerstenhaber(&dx, &xdx).unwrap(), dx);
        assert!(gerstenhaber(&xdx, &xdx).unwrap().is_zero());
    }

    #[test]
    fn delta_is_bracket_with_mu() {
        let n = 2;
        let mu = MultiDiffOp::multiplication(n);
        for arity in 0..=2 {
            for d in cochain_basis(n, arity, PrimitiveBounds { poly_degree: 1, op_order: 1 }) {
                assert_eq!(hoch_delta(&d), gerstenhaber(&mu, &d).unwrap(), "{d:?}");
            }
        }
    }

    #[test]
    fn cup_and_i_a_examples() {
        let n = 2;
        let dx = MultiDiffOp::partial(n, 0).unwrap();
        let dy = MultiDiffOp::partial(n, 1).unwrap();
        let c = cup(&dx, &dy).unwrap();
        let a = var(n, 0).mul(&var(n, 1)).unwrap();
        let b = var(n, 1).mul(&var(n, 1)).unwrap();
        // ∂x(xy) ∂y(y²) = y · 2y
        assert_eq!(c.apply(&[a, b]).unwrap(), var(n, 1).mul(&var(n, 1)).unwrap().scale(&q(2, 1)));
        let one = MultiDiffOp::function(&Polynomial::one(n));
        assert_eq!(cup(&one, &dx).unwrap(), dx);
        assert_eq!(i_func_hoch(&var(n, 0), &c).unwrap(), dy);
        assert!(i_func_hoch(&var(n, 0), &MultiDiffOp::multiplication(n)).unwrap().is_zero());
        assert!(i_func_hoch(&var(n, 0), &one).unwrap().is_zero());
    }

    #[test]
    fn hkr_examples() {
        let n = 2;
        let pxy = PolyVector::frame(n, &[0, 1]).unwrap();
        let h = hkr(&pxy).unwrap();
        let half = q(1, 2);
        let expected = MultiDiffOp::basis(Monomial::one(n), &[e(n, 0), e(n, 1)], half.clone())
            .sub(&MultiDiffOp::basis(Monomial::one(n), &[e(n, 1), e(n, 0)], half))
            .unwrap();
        assert_eq!(h, expected);
        assert!(hoch_delta(&h).is_zero());
        assert_eq!(hkr(&PolyVector::frame(n, &[0]).unwrap()).unwrap(), MultiDiffOp::partial(n, 0).unwrap());
        let f = var(n, 0);
        assert_eq!(hkr(&PolyVector::function(f.clone())).unwrap(), MultiDiffOp::function(&f));
        // contraction sign
        let lhs = hkr(&pxy.i_func(&f).unwrap()).unwrap();
        let rhs = i_func_hoch(&f, &h).unwrap().neg();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn primitive_round_trip_and_certificate() {
        let n = 2;
        let bounds = PrimitiveBounds { poly_degree: 1, op_order: 1 };
        let xi = MultiDiffOp::basis(e(n, 0), &[e(n, 1)], q(3, 1))
            .add(&MultiDiffOp::basis(Monomial::one(n), &[Monomial::one(n)], q(1, 2)))
            .unwrap();
        let t = hoch_delta(&xi);
        let found = delta_primitive(&t, bounds);
        assert_eq!(hoch_delta(found.primitive().unwrap()), t);

        let h = hkr(&PolyVector::frame(n, &[0, 1]).unwrap()).unwrap();
        match delta_primitive(&h, PrimitiveBounds { poly_degree: 2, op_order: 2 }) {
            PrimitiveOutcome::NotFound { residual, rank, unknowns } => {
                assert!(!residual.is_zero());
                assert!(rank < unknowns);
            }
            other => panic!("{other:?}"),
        }
        assert!(delta_primitive(&MultiDiffOp::zero(n, 2), bounds).primitive().unwrap().is_zero());
    }
}
