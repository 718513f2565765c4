//! Exact sparse row reduction.
//!
//! Vectors are ordered maps from column keys to nonzero scalars. Every stored
//! row has leading coefficient one at its smallest column, and no other row
//! has a nonzero entry in that column, so the stored basis is the reduced row
//! echelon form of the span and two spans are equal exactly when their bases
//! are.

use std::collections::BTreeMap;
use std::ops::Bound;

use crate::scalar::Scalar;

pub type SparseVec<C, K> = BTreeMap<C, K>;

/// `dst += c·src`, keeping `dst` free of zeros.
pub fn axpy<C: Ord + Clone, K: Scalar>(dst: &mut SparseVec<C, K>, c: &K, src: &SparseVec<C, K>) {
    if c.is_zero() {
        return;
    }
    for (k, v) in src {
        let add = c.clone() * v.clone();
        match dst.get_mut(k) {
            Some(x) => {
                *x = x.clone() + add;
                if x.is_zero() {
                    dst.remove(k);
                }
            }
            None => {
                dst.insert(k.clone(), add);
            }
        }
    }
}

/// Incrementally maintained reduced row echelon basis of a subspace.
#[derive(Clone, Debug)]
pub struct SparseEchelon<C, K> {
    rows: BTreeMap<C, SparseVec<C, K>>,
}

impl<C: Ord + Clone, K: Scalar> Default for SparseEchelon<C, K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<C: Ord + Clone, K: Scalar> SparseEchelon<C, K> {
    pub fn new() -> Self {
        Self { rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Basis rows keyed by pivot column, in increasing pivot order.
    pub fn rows(&self) -> impl Iterator<Item = (&C, &SparseVec<C, K>)> {
        self.rows.iter()
    }

    pub fn is_pivot(&self, c: &C) -> bool {
        self.rows.contains_key(c)
    }

    /// Normal form of `v` modulo the span: no entry in any pivot column.
    pub fn reduce(&self, v: &SparseVec<C, K>) -> SparseVec<C, K> {
        let mut v = v.clone();
        let mut cursor: Option<C> = None;
        loop {
            let next = {
                let range = match &cursor {
                    None => v.range::<C, (Bound<&C>, Bound<&C>)>((Bound::Unbounded, Bound::Unbounded)),
                    Some(c) => v.range::<C, (Bound<&C>, Bound<&C>)>((Bound::Excluded(c), Bound::Unbounded)),
                };
                range.filter(|(k, _)| self.rows.contains_key(*k)).map(|(k, c)| (k.clone(), c.clone())).next()
            };
            match next {
                None => return v,
                Some((col, c)) => {
                    axpy(&mut v, &-c, &self.rows[&col]);
                    cursor = Some(col);
                }
            }
        }
    }

    pub fn contains(&self, v: &SparseVec<C, K>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span. Returns `true` if the rank grew.
    pub fn insert(&mut self, v: &SparseVec<C, K>) -> bool {
        let mut r = self.reduce(v);
        let (pivot, lead) = match r.iter().next() {
            None => return false,
            Some((k, c)) => (k.clone(), c.clone()),
        };
        let inv = K::one() / lead;
        for x in r.values_mut() {
            *x = x.clone() * inv.clone();
        }
        for row in self.rows.values_mut() {
            if let Some(c) = row.get(&pivot).cloned() {
                axpy(row, &-c, &r);
            }
        }
        self.rows.insert(pivot, r);
        true
    }

    /// Same subspace.
    pub fn same_span(&self, other: &Self) -> bool {
        self.rows == other.rows
    }

    pub fn into_rows(self) -> Vec<SparseVec<C, K>> {
        self.rows.into_values().collect()
    }
}

/// Dense vector of length `n` as a sparse one with `usize` columns.
pub fn sparse_from_dense<K: Scalar>(v: &[K]) -> SparseVec<usize, K> {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
}

pub fn dense_from_sparse<K: Scalar>(v: &SparseVec<usize, K>, n: usize) -> Vec<K> {
    let mut out = vec![K::zero(); n];
    for (i, c) in v {
        out[*i] = c.clone();
    }
    out
}

/// Rank of a dense matrix given by rows.
pub fn rank<K: Scalar>(rows: &[Vec<K>]) -> usize {
    let mut e = SparseEchelon::new();
    for r in rows {
        e.insert(&sparse_from_dense(r));
    }
    e.rank()
}

/// Complement of a subspace of `K^n` spanned by non-pivot coordinates.
///
/// `project(v)` writes `v mod U` in the basis of the non-pivot unit vectors.
#[derive(Clone, Debug)]
pub struct Quotient<K> {
    pub ambient: usize,
    pub sub: SparseEchelon<usize, K>,
    free: Vec<usize>,
}

impl<K: Scalar> Quotient<K> {
    pub fn new(ambient: usize, sub: SparseEchelon<usize, K>) -> Self {
        let free = (0..ambient).filter(|i| !sub.is_pivot(i)).collect();
        Self { ambient, sub, free }
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// Ambient coordinates of the quotient basis vectors.
    pub fn representatives(&self) -> &[usize] {
        &self.free
    }

    pub fn project(&self, v: &[K]) -> Vec<K> {
        let r = self.sub.reduce(&sparse_from_dense(v));
        self.free.iter().map(|i| r.get(i).cloned().unwrap_or_else(K::zero)).collect()
    }

    /// Lift of a quotient vector to its canonical representative.
    pub fn lift(&self, v: &[K]) -> Vec<K> {
        let mut out = vec![K::zero(); self.ambient];
        for (c, i) in v.iter().zip(&self.free) {
            out[*i] = c.clone();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    type Q = BigRational;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    fn dense_rank(rows: &[Vec<i64>]) -> usize {
        // fraction-free Gaussian elimination on i128
        let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let cols = m.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..m.len()).find(|&i| m[i][c] != 0) else { continue };
            m.swap(rank, p);
            for i in 0..m.len() {
                if i != rank && m[i][c] != 0 {
                    let (a, b) = (m[rank][c], m[i][c]);
                    for j in 0..cols {
                        m[i][j] = m[i][j] * a - m[rank][j] * b;
                    }
                    let g = m[i].iter().fold(0i128, |g, &x| num_integer_gcd(g, x.abs()));
                    if g > 1 {
                        for x in m[i].iter_mut() {
                            *x /= g;
                        }
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn num_integer_gcd(a: i128, b: i128) -> i128 {
        if b == 0 { a } else { num_integer_gcd(b, a % b) }
    }

    #[test]
    fn reduce_and_span() {
        let mut e = SparseEchelon::new();
        assert!(e.insert(&sparse_from_dense(&[q(1), q(2), q(3)])));
        assert!(e.insert(&sparse_from_dense(&[q(0), q(1), q(1)])));
        assert!(!e.insert(&sparse_from_dense(&[q(1), q(3), q(4)])));
        assert_eq!(e.rank(), 2);
        let r = e.reduce(&sparse_from_dense(&[q(0), q(0), q(1)]));
        assert_eq!(r.len(), 1);
        let mut f = SparseEchelon::new();
        f.insert(&sparse_from_dense(&[q(1), q(3), q(4)]));
        f.insert(&sparse_from_dense(&[q(2), q(4), q(6)]));
        assert!(e.same_span(&f));
    }

    #[test]
    fn quotient_projection() {
        let mut e = SparseEchelon::new();
        e.insert(&sparse_from_dense(&[q(1), q(-1), q(0)]));
        let quo = Quotient::new(3, e);
        assert_eq!(quo.dim(), 2);
        assert_eq!(quo.project(&[q(1), q(0), q(0)]), quo.project(&[q(0), q(1), q(0)]));
        let v = vec![q(2), q(5)];
        assert_eq!(quo.project(&quo.lift(&v)), v);
    }

    proptest! {
        #[test]
        fn rank_matches_integer_elimination(rows in prop::collection::vec(prop::collection::vec(-3i64..4, 5), 0..7)) {
            let qrows: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
            prop_assert_eq!(rank(&qrows), dense_rank(&rows));
        }

        #[test]
        fn span_independent_of_insertion_order(rows in prop::collection::vec(prop::collection::vec(-3i64..4, 4), 1..6)) {
            let qrows: Vec<SparseVec<usize, Q>> = rows.iter().map(|r| sparse_from_dense(&r.iter().map(|&x| q(x)).collect::<Vec<_>>())).collect();
            let mut a = SparseEchelon::new();
            let mut b = SparseEchelon::new();
            for r in &qrows { a.insert(r); }
            for r in qrows.iter().rev() { b.insert(r); }
            prop_assert!(a.same_span(&b));
            for r in &qrows { prop_assert!(a.contains(r)); }
        }
    }
}
