//! Exact sparse linear algebra over the rationals.
//!
//! Vectors are sorted `(key, value)` lists with no zero entries. Elimination
//! pivots on the smallest key of each reduced column, so results depend only
//! on the input order.

use num_traits::Zero;

use crate::rational::Rational;

pub type SparseVec<K> = Vec<(K, Rational)>;

/// `a + s·b` on sorted sparse vectors.
pub fn axpy<K: Ord + Clone>(a: &[(K, Rational)], s: &Rational, b: &[(K, Rational)]) -> SparseVec<K> {
    if s.is_zero() {
        return a.to_vec();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ord = match (a.get(i), b.get(j)) {
            (Some((ka, _)), Some((kb, _))) => ka.cmp(kb),
            (Some(_), None) => std::cmp::Ordering::Less,
            _ => std::cmp::Ordering::Greater,
        };
        match ord {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push((b[j].0.clone(), s * &b[j].1));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let v = &a[i].1 + &(s * &b[j].1);
                if !v.is_zero() {
                    out.push((a[i].0.clone(), v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Incrementally built echelon basis of a column span, remembering how each
/// reduced vector is made from the original columns.
#[derive(Clone, Debug)]
pub struct ColumnSpace<K> {
    ncols: usize,
    // reduced vector, its pivot is the first key; combination over columns
    rows: Vec<(SparseVec<K>, SparseVec<usize>)>,
}

impl<K: Ord + Clone> Default for ColumnSpace<K> {
    fn default() -> Self {
        ColumnSpace {
            ncols: 0,
            rows: Vec::new(),
        }
    }
}

impl<K: Ord + Clone> ColumnSpace<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_columns(columns: impl IntoIterator<Item = SparseVec<K>>) -> Self {
        let mut cs = Self::new();
        for c in columns {
            cs.push(c);
        }
        cs
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Reduces `v` against the current basis; returns the remainder and the
    /// combination `c` with `v = remainder + Σ c_j column_j`.
    fn reduce(&self, v: &[(K, Rational)]) -> (SparseVec<K>, SparseVec<usize>) {
        let mut rem: SparseVec<K> = v.to_vec();
        let mut comb: SparseVec<usize> = Vec::new();
        // Each row is free of the pivots of earlier rows, so one pass in
        // insertion order clears every pivot key from the remainder.
        for (row, row_comb) in &self.rows {
            let pivot = &row[0].0;
            let Ok(pos) = rem.binary_search_by(|(k, _)| k.cmp(pivot)) else {
                continue;
            };
            let factor = &rem[pos].1 / &row[0].1;
            rem = axpy(&rem, &-&factor, row);
            comb = axpy(&comb, &factor, row_comb);
        }
        (rem, comb)
    }

    /// Adds a column; returns whether it increased the rank.
    pub fn push(&mut self, column: SparseVec<K>) -> bool {
        let idx = self.ncols;
        self.ncols += 1;
        let (rem, comb) = self.reduce(&column);
        if rem.is_empty() {
            return false;
        }
        // rem = column - Σ comb_j col_j
        let mut own = vec![(idx, Rational::from_integer(1))];
        for (j, c) in comb {
            own.push((j, -c));
        }
        own.sort_by(|a, b| a.0.cmp(&b.0));
        self.rows.push((rem, own));
        true
    }

    /// Solves `Σ x_j column_j = target`. On failure returns the remainder of
    /// `target` modulo the span.
    pub fn solve(&self, target: &[(K, Rational)]) -> Result<Vec<Rational>, SparseVec<K>> {
        let (rem, comb) = self.reduce(target);
        if !rem.is_empty() {
            return Err(rem);
        }
        let mut x = vec![Rational::zero(); self.ncols];
        for (j, c) in comb {
            x[j] = c;
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn dense(v: &[i64]) -> SparseVec<usize> {
        v.iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, &x)| (i, q(x)))
            .collect()
    }

    #[test]
    fn solves_small_system() {
        let cs = ColumnSpace::from_columns(vec![dense(&[1, 1, 0]), dense(&[0, 1, 1]), dense(&[1, 2, 1])]);
        assert_eq!(cs.rank(), 2);
        let x = cs.solve(&dense(&[1, 3, 2])).unwrap();
        assert_eq!(x.len(), 3);
        let mut back: SparseVec<usize> = Vec::new();
        for (j, c) in [dense(&[1, 1, 0]), dense(&[0, 1, 1]), dense(&[1, 2, 1])].iter().enumerate() {
            back = axpy(&back, &x[j], c);
        }
        assert_eq!(back, dense(&[1, 3, 2]));
        assert!(cs.solve(&dense(&[1, 0, 0])).is_err());
    }

    proptest! {
        #[test]
        fn solutions_reproduce_target(
            cols in prop::collection::vec(prop::collection::vec(-3i64..4, 4), 1..6),
            x in prop::collection::vec(-3i64..4, 6),
        ) {
            let columns: Vec<_> = cols.iter().map(|c| dense(c)).collect();
            let mut target: SparseVec<usize> = Vec::new();
            for (c, xi) in columns.iter().zip(&x) {
                target = axpy(&target, &q(*xi), c);
            }
            let cs = ColumnSpace::from_columns(columns.clone());
            let sol = cs.solve(&target).unwrap();
            let mut back: SparseVec<usize> = Vec::new();
            for (c, xi) in columns.iter().zip(&sol) {
                back = axpy(&back, xi, c);
            }
            prop_assert_eq!(back, target);
        }
    }
}
