//! Sparse multivariate polynomials with exact rational coefficients.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Hard cap on the number of coordinates; frames are stored as `u32` bit sets.
pub const MAX_VARS: usize = 32;

/// Names of the coordinate functions of the affine chart.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarContext {
    names: Vec<String>,
}

impl VarContext {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > MAX_VARS {
            return Err(Error::InvalidContext(format!(
                "at most {MAX_VARS} variables supported, got {}",
                names.len()
            )));
        }
        for (i, name) in names.iter().enumerate() {
            let valid = name
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(Error::InvalidContext(format!("invalid variable name `{name}`")));
            }
            if names[..i].contains(name) {
                return Err(Error::InvalidContext(format!("duplicate variable name `{name}`")));
            }
        }
        Ok(VarContext { names })
    }

    /// `x1, …, xn`.
    pub fn numbered(n: usize) -> Self {
        VarContext::new((1..=n).map(|i| format!("x{i}"))).expect("numbered names are valid")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Exponent vector `x^e = x_1^{e_1} ⋯ x_n^{e_n}`.
///
/// Ordered graded-lexicographically: total degree first, then exponents
/// lexicographically (so `x > y > 1` with variables in declaration order).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: SmallVec<[u16; 6]>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: SmallVec::from_elem(0, nvars),
        }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Monomial::one(nvars);
        m.exps[i] = 1;
        m
    }

    pub fn from_exps(exps: &[u16]) -> Self {
        Monomial {
            exps: SmallVec::from_slice(exps),
        }
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        }
    }

    /// `∂_i x^e = e_i x^{e - 1_i}`; `None` when the result vanishes.
    pub fn derive(&self, i: usize) -> Option<(u16, Monomial)> {
        let e = self.exps[i];
        if e == 0 {
            return None;
        }
        let mut out = self.clone();
        out.exps[i] -= 1;
        Some((e, out))
    }

    /// `∂^order x^e`; returns the integer falling-factorial coefficient.
    pub fn derive_multi(&self, order: &Monomial) -> Option<(Rational, Monomial)> {
        let mut coeff: i64 = 1;
        let mut out = self.clone();
        for (slot, &k) in out.exps.iter_mut().zip(order.exps.iter()) {
            if *slot < k {
                return None;
            }
            for j in 0..k {
                coeff = coeff
                    .checked_mul((*slot - j) as i64)
                    .expect("derivative coefficient overflow");
            }
            *slot -= k;
        }
        Some((Rational::from_integer(coeff), out))
    }

    /// Componentwise `self >= other`.
    pub fn divides_into(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a - b).collect(),
        }
    }

    /// All monomials in `nvars` variables of total degree `<= max_degree`,
    /// in ascending graded-lex order.
    pub fn all_up_to(nvars: usize, max_degree: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for d in 0..=max_degree {
            out.extend(Monomial::all_of_degree(nvars, d));
        }
        out
    }

    pub fn all_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
        fn rec(nvars: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
            if cur.len() + 1 == nvars {
                cur.push(left as u16);
                out.push(Monomial::from_exps(cur));
                cur.pop();
                return;
            }
            for e in 0..=left {
                cur.push(e as u16);
                rec(nvars, left - e, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            if degree == 0 {
                out.push(Monomial::one(0));
            }
            return out;
        }
        rec(nvars, degree, &mut Vec::with_capacity(nvars), &mut out);
        out.sort();
        out
    }

    pub fn display_with(&self, ctx: Option<&VarContext>) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let name = ctx
                .and_then(|c| c.names().get(i).cloned())
                .unwrap_or_else(|| format!("x{}", i + 1));
            if e == 1 {
                parts.push(name);
            } else {
                parts.push(format!("{name}^{e}"));
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(None))
    }
}

/// Sort by key and merge equal keys, dropping zero sums.
pub(crate) fn normalize_terms<K: Ord>(mut terms: Vec<(K, Rational)>) -> Vec<(K, Rational)> {
    if terms.len() <= 1 {
        terms.retain(|(_, c)| !c.is_zero());
        return terms;
    }
    terms.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out: Vec<(K, Rational)> = Vec::with_capacity(terms.len());
    for (k, c) in terms {
        match out.last_mut() {
            Some((lk, lc)) if *lk == k => *lc += &c,
            _ => {
                if let Some((_, lc)) = out.last() {
                    if lc.is_zero() {
                        out.pop();
                    }
                }
                out.push((k, c));
            }
        }
    }
    if out.last().is_some_and(|(_, c)| c.is_zero()) {
        out.pop();
    }
    out
}

/// Merge two sorted, normalized term lists with `a + sign * b`.
pub(crate) fn merge_terms<K: Ord + Clone>(
    a: &[(K, Rational)],
    b: &[(K, Rational)],
    negate_b: bool,
) -> Vec<(K, Rational)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let bval = |c: &Rational| if negate_b { -c } else { c.clone() };
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push((b[j].0.clone(), bval(&b[j].1)));
                j += 1;
            }
            Ordering::Equal => {
                let s = if negate_b { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !s.is_zero() {
                    out.push((a[i].0.clone(), s));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    out.extend(b[j..].iter().map(|(k, c)| (k.clone(), bval(c))));
    out
}

/// A polynomial in `nvars` variables over ℚ, stored as ascending graded-lex
/// terms without zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: Vec<(Monomial, Rational)>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Polynomial::from_terms(nvars, vec![(Monomial::one(nvars), c)])
    }

    pub fn one(nvars: usize) -> Self {
        Polynomial::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Polynomial::from_terms(nvars, vec![(Monomial::var(nvars, i), Rational::one())])
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let nvars = m.nvars();
        Polynomial::from_terms(nvars, vec![(m, c)])
    }

    /// Builds a canonical polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms(nvars: usize, terms: Vec<(Monomial, Rational)>) -> Self {
        debug_assert!(terms.iter().all(|(m, _)| m.nvars() == nvars));
        Polynomial {
            nvars,
            terms: normalize_terms(terms),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Rational)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.last().map(|(m, _)| m.degree())
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms
            .binary_search_by(|(k, _)| k.cmp(m))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    fn check_ctx(&self, other: &Polynomial) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::ContextMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ctx(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ctx(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ctx(other)?;
        Ok(self.sub_unchecked(other))
    }

    pub(crate) fn add_unchecked(&self, other: &Polynomial) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: merge_terms(&self.terms, &other.terms, false),
        }
    }

    pub(crate) fn sub_unchecked(&self, other: &Polynomial) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: merge_terms(&self.terms, &other.terms, true),
        }
    }

    pub(crate) fn mul_unchecked(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                terms.push((m1.mul(m2), c1 * c2));
            }
        }
        Polynomial::from_terms(self.nvars, terms)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), -x)).collect(),
        }
    }

    /// Multiply by `c * x^m`.
    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        // Multiplying by a monomial preserves the graded-lex order.
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, x)| (k.mul(m), x * c)).collect(),
        }
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derive(&self, i: usize) -> Result<Polynomial> {
        if i >= self.nvars {
            return Err(Error::IndexOutOfRange {
                index: i,
                nvars: self.nvars,
            });
        }
        Ok(self.derive_unchecked(i))
    }

    pub(crate) fn derive_unchecked(&self, i: usize) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| m.derive(i).map(|(e, dm)| (dm, c * &Rational::from_integer(e as i64))))
            .collect();
        Polynomial::from_terms(self.nvars, terms)
    }

    /// `∂^order p` for a multi-index `order`.
    pub fn derive_multi(&self, order: &Monomial) -> Polynomial {
        if order.is_one() {
            return self.clone();
        }
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| m.derive_multi(order).map(|(k, dm)| (dm, c * &k)))
            .collect();
        Polynomial::from_terms(self.nvars, terms)
    }

    pub fn display_with(&self, ctx: Option<&VarContext>) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                s.push_str(&abs.to_string());
            } else if abs.is_one() {
                s.push_str(&m.display_with(ctx));
            } else {
                s.push_str(&format!("{abs}*{}", m.display_with(ctx)));
            }
        }
        s
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(None))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(None))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn x(n: usize, i: usize) -> Polynomial {
        Polynomial::var(n, i)
    }

    #[test]
    fn distributes() {
        let p = x(2, 0).add(&x(2, 1)).unwrap();
        let prod = p.mul(&x(2, 0)).unwrap();
        let expected = x(2, 0)
            .mul(&x(2, 0))
            .unwrap()
            .add(&x(2, 0).mul(&x(2, 1)).unwrap())
            .unwrap();
        assert_eq!(prod, expected);
        assert_eq!(prod.to_string(), "x1^2 + x1*x2");
    }

    #[test]
    fn zero_annihilates() {
        let p = x(3, 2).add(&Polynomial::one(3)).unwrap();
        assert!(Polynomial::zero(3).mul(&p).unwrap().is_zero());
    }

    #[test]
    fn rational_coefficients_multiply_exactly() {
        let a = x(2, 0).scale(&q(1, 2));
        let b = x(2, 1).scale(&q(2, 3));
        let expected = Polynomial::monomial(Monomial::from_exps(&[1, 1]), q(1, 3));
        assert_eq!(a.mul(&b).unwrap(), expected);
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let err = x(2, 0).add(&x(3, 0)).unwrap_err();
        assert_eq!(err, Error::ContextMismatch { left: 2, right: 3 });
    }

    #[test]
    fn partial_derivatives() {
        // ∂_x(x²y) = 2xy
        let x2y = Polynomial::monomial(Monomial::from_exps(&[2, 1]), Rational::one());
        let d = x2y.derive(0).unwrap();
        assert_eq!(d, Polynomial::monomial(Monomial::from_exps(&[1, 1]), q(2, 1)));
        // ∂_y(x) = 0
        assert!(x(2, 0).derive(1).unwrap().is_zero());
        // ∂_x((1/3)x³) = x²
        let cube = Polynomial::monomial(Monomial::from_exps(&[3, 0]), q(1, 3));
        assert_eq!(
            cube.derive(0).unwrap(),
            Polynomial::monomial(Monomial::from_exps(&[2, 0]), Rational::one())
        );
        assert_eq!(
            x(2, 0).derive(2).unwrap_err(),
            Error::IndexOutOfRange { index: 2, nvars: 2 }
        );
    }

    #[test]
    fn multi_derivative_matches_iterated() {
        let p = Polynomial::monomial(Monomial::from_exps(&[3, 2]), q(5, 7));
        let order = Monomial::from_exps(&[2, 1]);
        let iterated = p.derive(0).unwrap().derive(0).unwrap().derive(1).unwrap();
        assert_eq!(p.derive_multi(&order), iterated);
    }

    #[test]
    fn monomial_enumeration_counts() {
        assert_eq!(Monomial::all_up_to(4, 2).len(), 15);
        assert_eq!(Monomial::all_up_to(3, 2).len(), 10);
        assert_eq!(Monomial::all_up_to(0, 2).len(), 1);
        let ms = Monomial::all_up_to(2, 2);
        assert!(ms.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn context_validation() {
        assert!(VarContext::new(["x", "y"]).is_ok());
        assert!(VarContext::new(["x", "x"]).is_err());
        assert!(VarContext::new(["1x"]).is_err());
        assert_eq!(VarContext::numbered(3).names(), ["x1", "x2", "x3"]);
    }
}
