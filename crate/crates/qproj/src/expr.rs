//! Index-free expressions: families of word combinations indexed by a tensor of
//! `V`/`V*` slots, on which leg operators act through their matrix entries.
//!
//! A family such as `f f` has two free indices and component `(i, j)` equal to the
//! word `f^i f^j`. Operators act on the free indices exactly as in
//! `(R̂_{12} f f)^{ij} = Σ_{kl} R̂^{ij}_{kl} f^k f^l`.

use crate::algebra::Elem;
use crate::leg::{decode, encode, space_dim, LegError, LegOp, Module, Slot};
use crate::scalar::Coeff;
use std::collections::BTreeMap;

impl<F: Coeff> Module<F> for Elem<F> {
    fn scaled(&self, c: &F) -> Self {
        if c.is_zero() {
            return BTreeMap::new();
        }
        self.iter().map(|(w, x)| (w.clone(), x.mul(c))).collect()
    }
    fn add_into(&mut self, other: &Self) {
        for (w, c) in other {
            match self.get_mut(w) {
                Some(e) => {
                    *e = e.add(c);
                    if e.is_zero() {
                        self.remove(w);
                    }
                }
                None => {
                    self.insert(w.clone(), c.clone());
                }
            }
        }
    }
    fn is_zero_value(&self) -> bool {
        self.is_empty()
    }
}

/// Product of two word combinations (concatenation of words).
pub fn mul_elem<F: Coeff>(a: &Elem<F>, b: &Elem<F>) -> Elem<F> {
    let mut out: Elem<F> = BTreeMap::new();
    for (w1, c1) in a {
        for (w2, c2) in b {
            let mut w = w1.clone();
            w.extend_from_slice(w2);
            out.add_into(&[(w, c1.mul(c2))].into_iter().collect());
        }
    }
    out
}

/// A family of word combinations with free indices of the given slot types.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr<F: Coeff> {
    pub n: usize,
    pub sig: Vec<Slot>,
    pub comps: BTreeMap<u32, Elem<F>>,
}

impl<F: Coeff> Expr<F> {
    pub fn zero(n: usize, sig: Vec<Slot>) -> Self {
        Expr { n, sig, comps: BTreeMap::new() }
    }

    /// The scalar family `c` with no free index, represented by the empty word.
    pub fn constant(n: usize, c: F) -> Self {
        let mut e = Expr::zero(n, Vec::new());
        if !c.is_zero() {
            e.comps.insert(0, [(Vec::new(), c)].into_iter().collect());
        }
        e
    }

    /// A family whose component at multi-index `I` is the single word `word(I)`.
    pub fn family(n: usize, sig: Vec<Slot>, word: impl Fn(&[usize]) -> Vec<u8>) -> Self {
        let k = sig.len();
        let comps = (0..space_dim(n, k))
            .map(|i| (i as u32, [(word(&decode(n, k, i)), F::one())].into_iter().collect()))
            .collect();
        Expr { n, sig, comps }
    }

    pub fn component(&self, idx: &[usize]) -> Elem<F> {
        self.comps.get(&(encode(self.n, idx) as u32)).cloned().unwrap_or_default()
    }

    /// Tensor-ordered product: `(x y)^{IJ} = x^I y^J`.
    pub fn mul(&self, o: &Expr<F>) -> Expr<F> {
        let mut sig = self.sig.clone();
        sig.extend_from_slice(&o.sig);
        let stride = space_dim(self.n, o.sig.len()) as u32;
        let mut comps = BTreeMap::new();
        for (i, a) in &self.comps {
            for (j, b) in &o.comps {
                let c = mul_elem(a, b);
                if !c.is_empty() {
                    comps.insert(i * stride + j, c);
                }
            }
        }
        Expr { n: self.n, sig, comps }
    }

    /// Applies `op` at the 1-based leg `leg`.
    pub fn apply(&self, op: &LegOp<F>, leg: usize) -> Result<Expr<F>, LegError> {
        let (sig, comps) = op.apply_at(leg - 1, &self.sig, &self.comps)?;
        Ok(Expr { n: self.n, sig, comps })
    }

    pub fn add(&self, o: &Expr<F>) -> Result<Expr<F>, LegError> {
        if self.sig != o.sig {
            return Err(LegError::Length(self.sig.len(), o.sig.len()));
        }
        let mut comps = self.comps.clone();
        for (k, v) in &o.comps {
            let e = comps.entry(*k).or_default();
            e.add_into(v);
            if e.is_empty() {
                comps.remove(k);
            }
        }
        Ok(Expr { n: self.n, sig: self.sig.clone(), comps })
    }

    pub fn scale(&self, c: &F) -> Expr<F> {
        let comps = self.comps.iter().map(|(k, v)| (*k, v.scaled(c))).filter(|(_, v)| !v.is_empty()).collect();
        Expr { n: self.n, sig: self.sig.clone(), comps }
    }

    pub fn sub(&self, o: &Expr<F>) -> Result<Expr<F>, LegError> {
        self.add(&o.scale(&F::one().neg()))
    }

    /// Replaces every word by a linear combination, linearly.
    pub fn map_words(&self, mut f: impl FnMut(&[u8]) -> Elem<F>) -> Expr<F> {
        let mut comps = BTreeMap::new();
        for (k, v) in &self.comps {
            let mut acc: Elem<F> = BTreeMap::new();
            for (w, c) in v {
                acc.add_into(&f(w).scaled(c));
            }
            if !acc.is_empty() {
                comps.insert(*k, acc);
            }
        }
        Expr { n: self.n, sig: self.sig.clone(), comps }
    }

    /// Fallible variant of [`Expr::map_words`].
    pub fn try_map_words<E>(&self, mut f: impl FnMut(&[u8]) -> Result<Elem<F>, E>) -> Result<Expr<F>, E> {
        let mut comps = BTreeMap::new();
        for (k, v) in &self.comps {
            let mut acc: Elem<F> = BTreeMap::new();
            for (w, c) in v {
                acc.add_into(&f(w)?.scaled(c));
            }
            if !acc.is_empty() {
                comps.insert(*k, acc);
            }
        }
        Ok(Expr { n: self.n, sig: self.sig.clone(), comps })
    }

    /// Total number of stored terms.
    pub fn term_count(&self) -> usize {
        self.comps.values().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// All words occurring in any component.
    pub fn words(&self) -> impl Iterator<Item = &Vec<u8>> {
        self.comps.values().flat_map(|v| v.keys())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Q;

    #[test]
    fn operator_acts_through_matrix_entries() {
        let n = 2;
        let swap = LegOp::from_fn(n, vec![Slot::V, Slot::V], vec![Slot::V, Slot::V], |d| {
            vec![(vec![d[1], d[0]], Q::from_i64(d[0] as i64 + 1))]
        });
        let f = Expr::<Q>::family(n, vec![Slot::V], |i| vec![i[0] as u8]);
        let ff = f.mul(&f);
        let r = ff.apply(&swap, 1).unwrap();
        // (op f f)^{ij} = Σ op^{ij}_{kl} f^k f^l with op^{ji}_{ij} = i + 1.
        let c = r.component(&[1, 0]);
        assert_eq!(c.get(&vec![0u8, 1u8]), Some(&Q::from_i64(1)));
    }
}
