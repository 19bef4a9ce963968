//! Exact sparse linear maps between tensor products of `V` and `V*` slots,
//! acting on designated legs.
//!
//! Multi-indices are encoded in mixed radix `N`, first slot most significant.
//! Operators act on coefficient tensors through their plain matrix entries:
//! `(A x)^I = Σ_J A^I_J x^J`.

use crate::scalar::Coeff;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// Tag of one tensor slot.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize)]
pub enum Slot {
    /// The defining representation `V`.
    V,
    /// Its dual `V*`.
    D,
}

impl Slot {
    pub fn dual(self) -> Slot {
        match self {
            Slot::V => Slot::D,
            Slot::D => Slot::V,
        }
    }
    pub fn name(self) -> &'static str {
        match self {
            Slot::V => "V",
            Slot::D => "V*",
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Errors raised by leg operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LegError {
    #[error("slot {slot}: expected {expected}, found {found}")]
    SlotMismatch { slot: usize, expected: Slot, found: Slot },
    #[error("operator of arity {arity} at slot {pos} does not fit a signature of length {len}")]
    OutOfRange { pos: usize, arity: usize, len: usize },
    #[error("signature lengths differ: {0} vs {1}")]
    Length(usize, usize),
    #[error("operator is singular")]
    Singular,
}

/// Number of basis vectors of a signature of length `k`.
pub fn space_dim(n: usize, k: usize) -> usize {
    n.pow(k as u32)
}

/// Decodes a mixed-radix index into its digits.
pub fn decode(n: usize, k: usize, mut idx: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for slot in (0..k).rev() {
        out[slot] = idx % n;
        idx /= n;
    }
    out
}

/// Encodes digits into a mixed-radix index.
pub fn encode(n: usize, digits: &[usize]) -> usize {
    digits.iter().fold(0, |acc, &d| acc * n + d)
}

/// Values that operators can act on coefficient-wise.
pub trait Module<F: Coeff>: Clone {
    fn scaled(&self, c: &F) -> Self;
    fn add_into(&mut self, other: &Self);
    fn is_zero_value(&self) -> bool;
}

impl<F: Coeff> Module<F> for F {
    fn scaled(&self, c: &F) -> Self {
        self.mul(c)
    }
    fn add_into(&mut self, other: &Self) {
        self.add_assign(other);
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
}

/// A sparse linear map `⊗ sig_in → ⊗ sig_out`, stored column by column.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LegOp<F: Coeff> {
    n: usize,
    sig_in: Vec<Slot>,
    sig_out: Vec<Slot>,
    cols: Vec<Vec<(u32, F)>>,
}

impl<F: Coeff> LegOp<F> {
    /// Builds an operator from a function giving the image of each basis vector.
    pub fn from_fn(
        n: usize,
        sig_in: Vec<Slot>,
        sig_out: Vec<Slot>,
        mut f: impl FnMut(&[usize]) -> Vec<(Vec<usize>, F)>,
    ) -> Self {
        let dim = space_dim(n, sig_in.len());
        let mut cols = Vec::with_capacity(dim);
        for j in 0..dim {
            let digits = decode(n, sig_in.len(), j);
            let mut col: BTreeMap<u32, F> = BTreeMap::new();
            for (out, c) in f(&digits) {
                let key = encode(n, &out) as u32;
                col.entry(key).or_insert_with(F::zero).add_assign(&c);
            }
            cols.push(col.into_iter().filter(|(_, c)| !c.is_zero()).collect());
        }
        LegOp { n, sig_in, sig_out, cols }
    }

    pub fn identity(n: usize, sig: Vec<Slot>) -> Self {
        LegOp::from_fn(n, sig.clone(), sig, |d| vec![(d.to_vec(), F::one())])
    }

    /// The scalar operator `c·id` on `sig`.
    pub fn scalar(n: usize, sig: Vec<Slot>, c: F) -> Self {
        LegOp::from_fn(n, sig.clone(), sig, |d| vec![(d.to_vec(), c.clone())])
    }

    pub fn dim(&self) -> usize {
        self.n
    }
    pub fn sig_in(&self) -> &[Slot] {
        &self.sig_in
    }
    pub fn sig_out(&self) -> &[Slot] {
        &self.sig_out
    }

    /// Column of the basis vector with index `j`, sorted by output index.
    pub fn column(&self, j: usize) -> &[(u32, F)] {
        &self.cols[j]
    }

    /// Matrix entry `A^{out}_{in}`.
    pub fn entry(&self, out: &[usize], inp: &[usize]) -> F {
        let key = encode(self.n, out) as u32;
        self.cols[encode(self.n, inp)].iter().find(|(r, _)| *r == key).map(|(_, c)| c.clone()).unwrap_or_else(F::zero)
    }

    /// All nonzero entries as `(input digits, output digits, value)`, sorted.
    pub fn entries(&self) -> Vec<(Vec<usize>, Vec<usize>, F)> {
        let mut out = Vec::new();
        for (j, col) in self.cols.iter().enumerate() {
            for (r, c) in col {
                out.push((
                    decode(self.n, self.sig_in.len(), j),
                    decode(self.n, self.sig_out.len(), *r as usize),
                    c.clone(),
                ));
            }
        }
        out
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    /// `self ∘ b`.
    pub fn compose(&self, b: &LegOp<F>) -> Result<LegOp<F>, LegError> {
        check_sig(&self.sig_in, &b.sig_out)?;
        let cols = b
            .cols
            .iter()
            .map(|col| {
                let mut acc: BTreeMap<u32, F> = BTreeMap::new();
                for (k, c) in col {
                    for (r, a) in &self.cols[*k as usize] {
                        acc.entry(*r).or_insert_with(F::zero).add_assign(&a.mul(c));
                    }
                }
                acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
            })
            .collect();
        Ok(LegOp { n: self.n, sig_in: b.sig_in.clone(), sig_out: self.sig_out.clone(), cols })
    }

    /// Pads the operator with identities so that it acts on `ambient` starting at slot `pos` (0-based).
    pub fn embed(&self, pos: usize, ambient: &[Slot]) -> Result<LegOp<F>, LegError> {
        let k = self.sig_in.len();
        if pos + k > ambient.len() {
            return Err(LegError::OutOfRange { pos, arity: k, len: ambient.len() });
        }
        check_sig_at(&ambient[pos..pos + k], &self.sig_in, pos)?;
        let mut sig_out = ambient[..pos].to_vec();
        sig_out.extend_from_slice(&self.sig_out);
        sig_out.extend_from_slice(&ambient[pos + k..]);
        let n = self.n;
        let kout = self.sig_out.len();
        let suffix = ambient.len() - pos - k;
        let out_suffix_base = space_dim(n, suffix);
        let cols = (0..space_dim(n, ambient.len()))
            .map(|j| {
                let low = j % out_suffix_base;
                let mid = (j / out_suffix_base) % space_dim(n, k);
                let high = j / (out_suffix_base * space_dim(n, k));
                self.cols[mid]
                    .iter()
                    .map(|(r, c)| {
                        let idx = (high * space_dim(n, kout) + *r as usize) * out_suffix_base + low;
                        (idx as u32, c.clone())
                    })
                    .collect()
            })
            .collect();
        Ok(LegOp { n, sig_in: ambient.to_vec(), sig_out, cols })
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &LegOp<F>) -> LegOp<F> {
        let mut sig_in = self.sig_in.clone();
        sig_in.extend_from_slice(&other.sig_in);
        let mut sig_out = self.sig_out.clone();
        sig_out.extend_from_slice(&other.sig_out);
        let ka = self.sig_in.len();
        let kb = other.sig_in.len();
        let n = self.n;
        LegOp::from_fn(n, sig_in, sig_out, |d| {
            let a = &self.cols[encode(n, &d[..ka])];
            let b = &other.cols[encode(n, &d[ka..ka + kb])];
            let mut out = Vec::new();
            for (ra, ca) in a {
                for (rb, cb) in b {
                    let mut digits = decode(n, self.sig_out.len(), *ra as usize);
                    digits.extend(decode(n, other.sig_out.len(), *rb as usize));
                    out.push((digits, ca.mul(cb)));
                }
            }
            out
        })
    }

    pub fn add(&self, o: &LegOp<F>) -> Result<LegOp<F>, LegError> {
        check_sig(&self.sig_in, &o.sig_in)?;
        check_sig(&self.sig_out, &o.sig_out)?;
        let cols = self
            .cols
            .iter()
            .zip(&o.cols)
            .map(|(a, b)| {
                let mut acc: BTreeMap<u32, F> = a.iter().cloned().collect();
                for (r, c) in b {
                    acc.entry(*r).or_insert_with(F::zero).add_assign(c);
                }
                acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
            })
            .collect();
        Ok(LegOp { n: self.n, sig_in: self.sig_in.clone(), sig_out: self.sig_out.clone(), cols })
    }

    pub fn scale(&self, c: &F) -> LegOp<F> {
        let cols = self
            .cols
            .iter()
            .map(|col| col.iter().map(|(r, x)| (*r, x.mul(c))).filter(|(_, x)| !x.is_zero()).collect())
            .collect();
        LegOp { n: self.n, sig_in: self.sig_in.clone(), sig_out: self.sig_out.clone(), cols }
    }

    pub fn sub(&self, o: &LegOp<F>) -> Result<LegOp<F>, LegError> {
        self.add(&o.scale(&F::one().neg()))
    }

    /// `self + c·id`.
    pub fn plus_scalar(&self, c: &F) -> Result<LegOp<F>, LegError> {
        self.add(&LegOp::scalar(self.n, self.sig_in.clone(), c.clone()))
    }

    /// Number of entries in which two operators differ (the residual of an identity).
    pub fn residual(&self, o: &LegOp<F>) -> usize {
        if self.sig_in != o.sig_in || self.sig_out != o.sig_out {
            return usize::MAX;
        }
        match self.sub(o) {
            Ok(d) => d.nnz(),
            Err(_) => usize::MAX,
        }
    }

    /// Exact inverse by Gauss–Jordan elimination on the dense matrix.
    pub fn inverse(&self) -> Result<LegOp<F>, LegError> {
        let dim_in = self.cols.len();
        let dim_out = space_dim(self.n, self.sig_out.len());
        if dim_in != dim_out {
            return Err(LegError::Singular);
        }
        let m = dim_in;
        let mut a: Vec<Vec<F>> = vec![vec![F::zero(); 2 * m]; m];
        for (j, col) in self.cols.iter().enumerate() {
            for (r, c) in col {
                a[*r as usize][j] = c.clone();
            }
        }
        for (i, row) in a.iter_mut().enumerate() {
            row[m + i] = F::one();
        }
        for c in 0..m {
            let p = (c..m).find(|&r| !a[r][c].is_zero()).ok_or(LegError::Singular)?;
            a.swap(c, p);
            let inv = a[c][c].inv().expect("nonzero pivot");
            for x in a[c].iter_mut() {
                if !x.is_zero() {
                    *x = x.mul(&inv);
                }
            }
            let pivot_row = a[c].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r == c || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x = x.sub(&f.mul(y));
                    }
                }
            }
        }
        let n = self.n;
        let cols = (0..m)
            .map(|j| (0..m).filter(|&r| !a[r][m + j].is_zero()).map(|r| (r as u32, a[r][m + j].clone())).collect())
            .collect();
        Ok(LegOp { n, sig_in: self.sig_out.clone(), sig_out: self.sig_in.clone(), cols })
    }

    /// Maps every coefficient through `f`.
    pub fn map_coeffs<G: Coeff>(&self, mut f: impl FnMut(&F) -> G) -> LegOp<G> {
        let cols = self
            .cols
            .iter()
            .map(|col| col.iter().map(|(r, c)| (*r, f(c))).filter(|(_, c)| !c.is_zero()).collect())
            .collect();
        LegOp { n: self.n, sig_in: self.sig_in.clone(), sig_out: self.sig_out.clone(), cols }
    }

    /// Applies the operator to slots `[pos, pos + arity)` of a sparse tensor with signature `sig`.
    pub fn apply_at<M: Module<F>>(
        &self,
        pos: usize,
        sig: &[Slot],
        x: &BTreeMap<u32, M>,
    ) -> Result<(Vec<Slot>, BTreeMap<u32, M>), LegError> {
        let k = self.sig_in.len();
        if pos + k > sig.len() {
            return Err(LegError::OutOfRange { pos, arity: k, len: sig.len() });
        }
        check_sig_at(&sig[pos..pos + k], &self.sig_in, pos)?;
        let n = self.n;
        let kout = self.sig_out.len();
        let suffix = space_dim(n, sig.len() - pos - k);
        let mid_dim = space_dim(n, k);
        let mut out: BTreeMap<u32, M> = BTreeMap::new();
        for (j, val) in x {
            let j = *j as usize;
            let low = j % suffix;
            let mid = (j / suffix) % mid_dim;
            let high = j / (suffix * mid_dim);
            for (r, c) in &self.cols[mid] {
                let idx = ((high * space_dim(n, kout) + *r as usize) * suffix + low) as u32;
                let v = val.scaled(c);
                match out.get_mut(&idx) {
                    Some(e) => e.add_into(&v),
                    None => {
                        out.insert(idx, v);
                    }
                }
            }
        }
        out.retain(|_, v| !v.is_zero_value());
        let mut new_sig = sig[..pos].to_vec();
        new_sig.extend_from_slice(&self.sig_out);
        new_sig.extend_from_slice(&sig[pos + k..]);
        Ok((new_sig, out))
    }
}

fn check_sig(a: &[Slot], b: &[Slot]) -> Result<(), LegError> {
    if a.len() != b.len() {
        return Err(LegError::Length(a.len(), b.len()));
    }
    check_sig_at(a, b, 0)
}

fn check_sig_at(found: &[Slot], expected: &[Slot], offset: usize) -> Result<(), LegError> {
    for (i, (f, e)) in found.iter().zip(expected).enumerate() {
        if f != e {
            return Err(LegError::SlotMismatch { slot: offset + i + 1, expected: *e, found: *f });
        }
    }
    Ok(())
}

/// A chain of operators applied at given legs, composed right to left as written.
///
/// `Chain::on(n, sig).then(op, leg)` applies `op` at 1-based `leg` after the operators already in the chain.
pub struct Chain<F: Coeff> {
    acc: LegOp<F>,
}

impl<F: Coeff> Chain<F> {
    pub fn on(n: usize, sig: Vec<Slot>) -> Self {
        Chain { acc: LegOp::identity(n, sig) }
    }
    /// Applies `op` at 1-based leg `leg` (matching the usual subscript notation).
    pub fn then(self, op: &LegOp<F>, leg: usize) -> Result<Self, LegError> {
        let e = op.embed(leg - 1, &self.acc.sig_out)?;
        Ok(Chain { acc: e.compose(&self.acc)? })
    }
    pub fn build(self) -> LegOp<F> {
        self.acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Q;

    fn flip(n: usize) -> LegOp<Q> {
        LegOp::from_fn(n, vec![Slot::V, Slot::D], vec![Slot::D, Slot::V], |d| vec![(vec![d[1], d[0]], Q::one())])
    }

    #[test]
    fn embed_identity_positions() {
        let f = flip(2);
        assert_eq!(f.embed(0, &[Slot::V, Slot::D]).unwrap(), f);
        let e = f.embed(1, &[Slot::D, Slot::V, Slot::D]).unwrap();
        assert_eq!(e.sig_out(), &[Slot::D, Slot::D, Slot::V]);
        assert!(f.embed(0, &[Slot::D, Slot::D]).is_err());
    }

    #[test]
    fn compose_with_identity() {
        let f = flip(3);
        let id = LegOp::identity(3, vec![Slot::V, Slot::D]);
        assert_eq!(f.compose(&id).unwrap(), f);
        assert_eq!(f.inverse().unwrap().compose(&f).unwrap(), id);
    }
}
