//! Polynomial-coefficient elements of an exterior algebra on `n` odd
//! generators. Shared storage for multivector fields (generators `∂_i`) and
//! differential forms (generators `dx_i`).

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{merge_terms, normalize_terms, Monomial, Polynomial, VarContext};
use crate::rational::Rational;
use crate::sign::merge_sign;

/// A strictly increasing tuple of generator indices, stored as a bit set.
///
/// Ordered by length first, then lexicographically on the index tuple.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Frame(u32);

impl Frame {
    pub const EMPTY: Frame = Frame(0);

    pub fn from_bits(bits: u32) -> Frame {
        Frame(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn single(i: usize) -> Frame {
        Frame(1 << i)
    }

    /// Fails unless `indices` is strictly increasing and below `nvars`.
    pub fn from_indices(indices: &[usize], nvars: usize) -> Result<Frame> {
        let mut bits = 0u32;
        for (k, &i) in indices.iter().enumerate() {
            if i >= nvars {
                return Err(Error::IndexOutOfRange { index: i, nvars });
            }
            if k > 0 && indices[k - 1] >= i {
                return Err(Error::Parse(crate::error::ParseError::new(format!(
                    "frame {indices:?} is not strictly increasing"
                ))));
            }
            bits |= 1 << i;
        }
        Ok(Frame(bits))
    }

    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|i| self.0 >> i & 1 == 1).collect()
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    /// Number of members strictly below `i`.
    pub fn rank_below(self, i: usize) -> u32 {
        (self.0 & ((1u32 << i) - 1)).count_ones()
    }

    pub fn without(self, i: usize) -> Frame {
        Frame(self.0 & !(1 << i))
    }

    /// `e_self ∧ e_other = sign · e_{self ∪ other}`, or `None` if they overlap.
    pub fn wedge(self, other: Frame) -> Option<(i32, Frame)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        Some((merge_sign(self.0, other.0), Frame(self.0 | other.0)))
    }

    /// All frames over `nvars` generators of length `<= max_len`, canonical order.
    pub fn all_up_to(nvars: usize, max_len: usize) -> Vec<Frame> {
        let mut out: Vec<Frame> = (0u32..(1u32 << nvars))
            .map(Frame)
            .filter(|f| f.len() <= max_len)
            .collect();
        out.sort();
        out
    }
}

impl Ord for Frame {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            if self.0 == other.0 {
                return Ordering::Equal;
            }
            let low = (self.0 ^ other.0).trailing_zeros();
            if self.0 >> low & 1 == 1 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl PartialOrd for Frame {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.indices())
    }
}

pub(crate) type Key = (Frame, Monomial);

/// Sorted, merged terms `coeff · x^mono · e_frame`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub(crate) struct ExtTerms {
    pub(crate) nvars: usize,
    pub(crate) terms: Vec<(Key, Rational)>,
}

impl ExtTerms {
    pub fn zero(nvars: usize) -> Self {
        ExtTerms {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn from_raw(nvars: usize, raw: Vec<(Key, Rational)>) -> Self {
        ExtTerms {
            nvars,
            terms: normalize_terms(raw),
        }
    }

    pub fn basis(frame: Frame, mono: Monomial, coeff: Rational) -> Self {
        let nvars = mono.nvars();
        ExtTerms::from_raw(nvars, vec![((frame, mono), coeff)])
    }

    pub fn from_components(nvars: usize, comps: Vec<(Frame, Polynomial)>) -> Self {
        let raw = comps
            .into_iter()
            .flat_map(|(f, p)| p.into_terms().into_iter().map(move |(m, c)| ((f, m), c)))
            .collect();
        ExtTerms::from_raw(nvars, raw)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn check_ctx(&self, other: &ExtTerms) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::ContextMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &ExtTerms) -> ExtTerms {
        ExtTerms {
            nvars: self.nvars,
            terms: merge_terms(&self.terms, &other.terms, false),
        }
    }

    pub fn sub(&self, other: &ExtTerms) -> ExtTerms {
        ExtTerms {
            nvars: self.nvars,
            terms: merge_terms(&self.terms, &other.terms, true),
        }
    }

    pub fn neg(&self) -> ExtTerms {
        ExtTerms {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> ExtTerms {
        if s.is_zero() {
            return ExtTerms::zero(self.nvars);
        }
        if s.is_one() {
            return self.clone();
        }
        ExtTerms {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c * s)).collect(),
        }
    }

    pub fn mul_poly(&self, p: &Polynomial) -> ExtTerms {
        let mut raw = Vec::with_capacity(self.terms.len() * p.len());
        for ((f, m), c) in &self.terms {
            for (pm, pc) in p.terms() {
                raw.push(((*f, m.mul(pm)), c * pc));
            }
        }
        ExtTerms::from_raw(self.nvars, raw)
    }

    pub fn wedge(&self, other: &ExtTerms) -> ExtTerms {
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for ((f1, m1), c1) in &self.terms {
            for ((f2, m2), c2) in &other.terms {
                if let Some((s, f)) = f1.wedge(*f2) {
                    let c = c1 * c2;
                    raw.push(((f, m1.mul(m2)), if s < 0 { -c } else { c }));
                }
            }
        }
        ExtTerms::from_raw(self.nvars, raw)
    }

    /// `Some(k)` if every term has frame length `k`; `None` for mixed
    /// degrees. The zero element reports `Some(0)`.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let first = self.terms.first().map_or(0, |((f, _), _)| f.len());
        self.terms
            .iter()
            .all(|((f, _), _)| f.len() == first)
            .then_some(first)
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut ds: Vec<usize> = self.terms.iter().map(|((f, _), _)| f.len()).collect();
        ds.dedup();
        ds
    }

    /// Terms are sorted by frame length first, so components are contiguous.
    pub fn component(&self, k: usize) -> ExtTerms {
        ExtTerms {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|((f, _), _)| f.len() == k)
                .cloned()
                .collect(),
        }
    }

    pub fn homogeneous_parts(&self) -> Vec<(usize, ExtTerms)> {
        self.degrees()
            .into_iter()
            .map(|k| (k, self.component(k)))
            .collect()
    }

    pub fn components(&self) -> Vec<(Frame, Polynomial)> {
        let mut out: Vec<(Frame, Vec<(Monomial, Rational)>)> = Vec::new();
        for ((f, m), c) in &self.terms {
            match out.last_mut() {
                Some((lf, v)) if lf == f => v.push((m.clone(), c.clone())),
                _ => out.push((*f, vec![(m.clone(), c.clone())])),
            }
        }
        out.into_iter()
            .map(|(f, v)| (f, Polynomial::from_terms(self.nvars, v)))
            .collect()
    }

    pub fn coefficient(&self, frame: Frame) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|((f, _), _)| *f == frame)
            .map(|((_, m), c)| (m.clone(), c.clone()))
            .collect();
        Polynomial::from_terms(self.nvars, terms)
    }

    pub fn max_coeff_degree(&self) -> Option<u32> {
        self.terms.iter().map(|((_, m), _)| m.degree()).max()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn display(&self, ctx: Option<&VarContext>, symbol: &dyn Fn(usize) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.components()
            .iter()
            .map(|(f, p)| {
                let gens: Vec<String> = f.indices().into_iter().map(symbol).collect();
                let poly = p.display_with(ctx);
                if gens.is_empty() {
                    format!("({poly})")
                } else {
                    format!("({poly})*{}", gens.join("^"))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_order_is_length_then_lex() {
        let frames = Frame::all_up_to(3, 3);
        let as_lists: Vec<Vec<usize>> = frames.iter().map(|f| f.indices()).collect();
        assert_eq!(
            as_lists,
            vec![
                vec![],
                vec![0],
                vec![1],
                vec![2],
                vec![0, 1],
                vec![0, 2],
                vec![1, 2],
                vec![0, 1, 2]
            ]
        );
    }

    #[test]
    fn frame_wedge_signs() {
        let x = Frame::single(0);
        let y = Frame::single(1);
        assert_eq!(y.wedge(x), Some((-1, Frame::from_bits(0b11))));
        assert_eq!(x.wedge(y), Some((1, Frame::from_bits(0b11))));
        assert_eq!(x.wedge(x), None);
    }

    #[test]
    fn frame_from_indices_validates() {
        assert!(Frame::from_indices(&[0, 2], 3).is_ok());
        assert!(Frame::from_indices(&[2, 0], 3).is_err());
        assert!(Frame::from_indices(&[1, 1], 3).is_err());
        assert!(matches!(
            Frame::from_indices(&[3], 3),
            Err(Error::IndexOutOfRange { index: 3, nvars: 3 })
        ));
    }
}
