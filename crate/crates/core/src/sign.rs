//! Koszul sign engine: signs of permutations of graded objects.

use crate::error::{Error, Result};

/// Degrees of a sequence of graded objects about to be permuted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedSignature {
    pub degrees: Vec<i64>,
}

impl GradedSignature {
    pub fn new(degrees: impl Into<Vec<i64>>) -> Self {
        GradedSignature {
            degrees: degrees.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }
}

fn validate(perm: &[usize]) -> Result<()> {
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
            return Err(Error::NotAPermutation(perm.to_vec()));
        }
    }
    Ok(())
}

/// Sign for reordering `(v_0, …, v_{n-1})` into `(v_{perm[0]}, …, v_{perm[n-1]})`.
///
/// Every pair of elements whose relative order is reversed contributes
/// `(-1)^{|v_i||v_j|}`.
pub fn koszul_sign(sig: &GradedSignature, perm: &[usize]) -> Result<i32> {
    if perm.len() != sig.len() {
        return Err(Error::LengthMismatch {
            expected: sig.len(),
            got: perm.len(),
        });
    }
    validate(perm)?;
    Ok(koszul_sign_unchecked(&sig.degrees, perm))
}

pub(crate) fn koszul_sign_unchecked(degrees: &[i64], perm: &[usize]) -> i32 {
    let mut odd = 0u32;
    for i in 0..perm.len() {
        if degrees[perm[i]] & 1 == 0 {
            continue;
        }
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] && degrees[perm[j]] & 1 == 1 {
                odd ^= 1;
            }
        }
    }
    if odd == 1 {
        -1
    } else {
        1
    }
}

/// Ordinary sign of a permutation.
pub fn permutation_sign(perm: &[usize]) -> i32 {
    let mut odd = false;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                odd = !odd;
            }
        }
    }
    if odd {
        -1
    } else {
        1
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).expect("successor exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

/// All increasing `k`-subsets of `0..n`, lexicographic.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// `(I, J)` unshuffles of `0..n` with `|I| = k`: the permutation `I ++ J`.
pub fn unshuffles(n: usize, k: usize) -> Vec<Vec<usize>> {
    subsets(n, k)
        .into_iter()
        .map(|sub| {
            let mut perm = sub.clone();
            perm.extend((0..n).filter(|i| !sub.contains(i)));
            perm
        })
        .collect()
}

/// `(-1)^{number of pairs (i ∈ a, j ∈ b) with i > j}` for bit sets of
/// indices; the sign of `e_a ∧ e_b` relative to `e_{a ∪ b}`.
#[inline]
pub(crate) fn merge_sign(a: u32, b: u32) -> i32 {
    let mut count = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        // elements of `a` strictly above j
        count += (a >> j >> 1).count_ones();
        rest &= rest - 1;
    }
    if count & 1 == 1 {
        -1
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
        // reorder by b, then by a: position i holds original b[a[i]]
        a.iter().map(|&i| b[i]).collect()
    }

    #[test]
    fn documented_examples() {
        let odd = GradedSignature::new(vec![1, 1]);
        assert_eq!(koszul_sign(&odd, &[1, 0]).unwrap(), -1);
        assert_eq!(koszul_sign(&odd, &[0, 1]).unwrap(), 1);
        let mixed = GradedSignature::new(vec![1, 2]);
        assert_eq!(koszul_sign(&mixed, &[1, 0]).unwrap(), 1);
        let any = GradedSignature::new(vec![3, 5, 2, 7]);
        assert_eq!(koszul_sign(&any, &[0, 1, 2, 3]).unwrap(), 1);
    }

    #[test]
    fn rejects_bad_input() {
        let sig = GradedSignature::new(vec![1, 1, 1]);
        assert!(matches!(
            koszul_sign(&sig, &[1, 0]),
            Err(Error::LengthMismatch { expected: 3, got: 2 })
        ));
        assert!(matches!(
            koszul_sign(&sig, &[0, 0, 1]),
            Err(Error::NotAPermutation(_))
        ));
    }

    #[test]
    fn homomorphism_on_small_groups() {
        let degree_sets: [&[i64]; 4] = [&[1, 1, 1, 1], &[0, 1, 2, 3], &[2, 3, 1, 1], &[1, 0, 1]];
        for degs in degree_sets {
            let n = degs.len();
            let perms = permutations(n);
            for a in &perms {
                for b in &perms {
                    // reorder by b first, then by a (acting on the reordered degrees)
                    let sb = koszul_sign_unchecked(degs, b);
                    let reordered: Vec<i64> = b.iter().map(|&i| degs[i]).collect();
                    let sa = koszul_sign_unchecked(&reordered, a);
                    let sab = koszul_sign_unchecked(degs, &compose(a, b));
                    assert_eq!(sa * sb, sab, "degs {degs:?} a {a:?} b {b:?}");
                }
            }
        }
    }

    #[test]
    fn all_odd_gives_permutation_sign() {
        for p in permutations(4) {
            assert_eq!(koszul_sign_unchecked(&[1, 1, 1, 1], &p), permutation_sign(&p));
            assert_eq!(koszul_sign_unchecked(&[0, 2, 4, 6], &p), 1);
        }
    }

    #[test]
    fn enumerations() {
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(unshuffles(3, 1), vec![vec![0, 1, 2], vec![1, 0, 2], vec![2, 0, 1]]);
    }

    #[test]
    fn merge_sign_matches_inversions() {
        for a in 0u32..16 {
            for b in 0u32..16 {
                if a & b != 0 {
                    continue;
                }
                let ia: Vec<usize> = (0..4).filter(|i| a >> i & 1 == 1).collect();
                let ib: Vec<usize> = (0..4).filter(|i| b >> i & 1 == 1).collect();
                let seq: Vec<usize> = ia.iter().chain(&ib).copied().collect();
                let inv = seq
                    .iter()
                    .enumerate()
                    .flat_map(|(i, x)| seq[i + 1..].iter().map(move |y| (x > y) as u32))
                    .sum::<u32>();
                let expected = if inv % 2 == 1 { -1 } else { 1 };
                assert_eq!(merge_sign(a, b), expected);
            }
        }
    }
}
