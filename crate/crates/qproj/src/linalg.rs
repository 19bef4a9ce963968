//! Exact linear algebra: dense nullspaces for small systems and an incremental
//! sparse echelon basis used as the quotient-equality oracle.

use crate::scalar::Coeff;
use std::collections::BTreeMap;

/// Sparse vector with sorted distinct column keys and nonzero values.
pub type SparseVec<F> = Vec<(u32, F)>;

/// Reduced row echelon form of a dense matrix; returns the pivot columns.
pub fn rref<F: Coeff>(a: &mut [Vec<F>]) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].inv().expect("nonzero pivot");
        for x in a[r].iter_mut() {
            if !x.is_zero() {
                *x = x.mul(&inv);
            }
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the nullspace of a dense matrix with `cols` columns.
pub fn nullspace<F: Coeff>(mut a: Vec<Vec<F>>, cols: usize) -> Vec<Vec<F>> {
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![F::zero(); cols];
            v[fc] = F::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = a[r][fc].neg();
            }
            v
        })
        .collect()
}

/// Incrementally built echelon basis of a subspace of a sparse coordinate space.
///
/// Each stored row is monic at its pivot, which is its smallest column; pivots are distinct.
/// Fully reducing a vector against the basis yields a canonical representative of its coset.
#[derive(Clone, Debug)]
pub struct Echelon<F: Coeff> {
    rows: Vec<SparseVec<F>>,
    pivot_of: BTreeMap<u32, usize>,
}

impl<F: Coeff> Default for Echelon<F> {
    fn default() -> Self {
        Echelon { rows: Vec::new(), pivot_of: BTreeMap::new() }
    }
}

impl<F: Coeff> Echelon<F> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec<F>] {
        &self.rows
    }

    /// Canonical remainder of `x` modulo the span.
    pub fn reduce(&self, x: &SparseVec<F>) -> SparseVec<F> {
        let mut acc: BTreeMap<u32, F> = x.iter().cloned().collect();
        let mut cursor = 0u32;
        loop {
            let next = acc.range(cursor..).find(|(k, _)| self.pivot_of.contains_key(k)).map(|(k, v)| (*k, v.clone()));
            let Some((col, coef)) = next else { break };
            let row = &self.rows[self.pivot_of[&col]];
            for (k, v) in row {
                let delta = v.mul(&coef);
                let e = acc.entry(*k).or_insert_with(F::zero);
                *e = e.sub(&delta);
                if e.is_zero() {
                    acc.remove(k);
                }
            }
            cursor = col + 1;
        }
        acc.into_iter().collect()
    }

    /// Adds `x` to the span; returns whether the rank grew.
    pub fn insert(&mut self, x: &SparseVec<F>) -> bool {
        let r = self.reduce(x);
        let Some((pivot, lead)) = r.first().cloned() else { return false };
        let inv = lead.inv().expect("nonzero lead");
        let row: SparseVec<F> = r.into_iter().map(|(k, v)| (k, v.mul(&inv))).collect();
        self.pivot_of.insert(pivot, self.rows.len());
        self.rows.push(row);
        true
    }

    pub fn contains(&self, x: &SparseVec<F>) -> bool {
        self.reduce(x).is_empty()
    }
}

/// Adds `c·y` into the sparse accumulator `acc`.
pub fn axpy<F: Coeff>(acc: &mut BTreeMap<u32, F>, c: &F, y: &SparseVec<F>) {
    for (k, v) in y {
        let e = acc.entry(*k).or_insert_with(F::zero);
        *e = e.add(&v.mul(c));
        if e.is_zero() {
            acc.remove(k);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Q;

    fn q(a: i64) -> Q {
        Q::from_i64(a)
    }

    #[test]
    fn nullspace_of_rank_one() {
        let ns = nullspace(vec![vec![q(1), q(2), q(3)]], 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            let s = v[0].add(&v[1].mul(&q(2))).add(&v[2].mul(&q(3)));
            assert!(s.is_zero());
        }
    }

    #[test]
    fn echelon_membership_and_canonical_remainder() {
        let mut e = Echelon::new();
        assert!(e.insert(&vec![(0, q(1)), (2, q(1))]));
        assert!(e.insert(&vec![(1, q(2)), (2, q(4))]));
        assert!(!e.insert(&vec![(0, q(1)), (1, q(1)), (2, q(3))]));
        assert!(e.contains(&vec![(0, q(2)), (2, q(2))]));
        let a = e.reduce(&vec![(0, q(1))]);
        let b = e.reduce(&vec![(0, q(1)), (1, q(1)), (2, q(2))]);
        assert_eq!(a, b);
    }
}
