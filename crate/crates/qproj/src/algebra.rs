//! The rewriting engine for the presented algebra and its one-form modules.
//!
//! Words are sequences of letters `f^i`, `v^i`, `∂f^i`, `∂̄v^i`. The engine works
//! with the homogenized algebra `H`, generated by `f` and `v` subject only to the
//! quadratic relations (`ff`, `vv` and the cross relation `vf`). `H` is bigraded by
//! the numbers of `f` and `v` letters and has the ordered monomials as a basis.
//! The element `c = Σ_i v^i f^i` is central in `H`, and the presented algebra is
//! `H/(c − 1)`; equality of inhomogeneous elements is decided by multiplying lower
//! components by powers of `c` up to a common bidegree.
//!
//! Tensor powers of the one-form modules are modelled as left `H`-modules freely
//! generated by words of differentials, modulo the left relations
//! `Σ_i v^i ∂f^i = 0` and `Σ_i q^{(2ρ,λ_i)} f^i ∂̄v^i = 0` inserted at every
//! position. Algebra letters are moved to the left of differentials with the
//! right-module rules, so every word has a normal form `h · D_1 ⋯ D_k` with `h` an
//! ordered monomial. The left relations are then quotiented by exact elimination
//! in each finite-dimensional block.

use crate::leg::{LegOp, Slot};
use crate::linalg::{Echelon, SparseVec};
use crate::rep::Rep;
use crate::scalar::{Coeff, Pairing};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

/// A letter of the free envelope: `kind * N + index`, with kinds `f`, `v`, `∂f`, `∂̄v`.
pub type Letter = u8;

/// Letter kinds.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Kind {
    F = 0,
    V = 1,
    DF = 2,
    DV = 3,
}

impl Kind {
    pub fn from_index(i: u8) -> Kind {
        match i {
            0 => Kind::F,
            1 => Kind::V,
            2 => Kind::DF,
            _ => Kind::DV,
        }
    }
    /// Slot tag of the coefficient index carried by letters of this kind.
    pub fn slot(self) -> Slot {
        match self {
            Kind::F | Kind::DF => Slot::V,
            Kind::V | Kind::DV => Slot::D,
        }
    }
    pub fn is_differential(self) -> bool {
        matches!(self, Kind::DF | Kind::DV)
    }
    pub fn name(self) -> &'static str {
        match self {
            Kind::F => "f",
            Kind::V => "v",
            Kind::DF => "df",
            Kind::DV => "dv",
        }
    }
}

/// Linear combination of words; words are not assumed normal.
pub type Elem<F> = BTreeMap<Vec<Letter>, F>;

/// Errors of the quotient engines.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("degree budget exceeded: need level {need}, budget {budget}")]
    Budget { need: usize, budget: usize },
    #[error("rewriting did not terminate within the cycle guard")]
    Cycle,
    #[error("the quadratic relations do not have the expected leading pairs")]
    Presentation,
}

type Terms<F> = Vec<(Vec<Letter>, F)>;
type SwapRules<F> = HashMap<(Letter, Letter), Vec<(Letter, Letter, F)>>;

/// Key of a finite-dimensional block: pattern of differential kinds and the bidegree of the algebra part.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct BlockKey {
    pub pattern: Vec<Kind>,
    pub a: usize,
    pub b: usize,
}

/// Basis of normal words of one block together with the left relations in it.
pub struct Block<F: Coeff> {
    pub key: BlockKey,
    pub basis: Vec<Vec<Letter>>,
    pub index: HashMap<Vec<Letter>, u32>,
    pub relations: Echelon<F>,
}

impl<F: Coeff> Block<F> {
    /// Dimension of the quotient block.
    pub fn quotient_dim(&self) -> usize {
        self.basis.len() - self.relations.rank()
    }
}

/// Homogeneous parts keyed by differential pattern and z-degree.
pub type ByPattern<T> = BTreeMap<(Vec<Kind>, i64), T>;

type Memo<K, V> = Mutex<HashMap<K, V>>;

/// Result of moving an algebra letter leftward past differentials: `(letter, differential word, coefficient)` terms.
type Pushed<F> = Vec<(Letter, Vec<Letter>, F)>;

/// Canonical image of an element: per `(pattern, z-degree)` the bidegree reached and the reduced vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canon<F: Coeff> {
    pub parts: ByPattern<(usize, usize, SparseVec<F>)>,
}

impl<F: Coeff> Canon<F> {
    pub fn is_zero(&self) -> bool {
        self.parts.values().all(|(_, _, v)| v.is_empty())
    }
    pub fn term_count(&self) -> usize {
        self.parts.values().map(|(_, _, v)| v.len()).sum()
    }
}

/// The rewriting model.
pub struct Model<F: Coeff> {
    pub rep: Arc<Rep<F>>,
    pub n: usize,
    ff: SwapRules<F>,
    vv: SwapRules<F>,
    cross: SwapRules<F>,
    right: SwapRules<F>,
    /// Coefficients of `c = Σ v^i f^i` and of the left relation for `∂̄v`.
    ep_weights: Vec<F>,
    mul_memo: Memo<(Vec<Letter>, Letter), Terms<F>>,
    push_memo: Memo<(Vec<Letter>, Letter), Pushed<F>>,
    nf_memo: Mutex<HashMap<Vec<Letter>, Terms<F>>>,
    blocks: Mutex<HashMap<BlockKey, Arc<Block<F>>>>,
}

const CYCLE_GUARD: usize = 10_000;

impl<F: Coeff> Model<F> {
    pub fn new(rep: Arc<Rep<F>>) -> Result<Self, AlgebraError> {
        let n = rep.n;
        let ww = rep.ww();
        let aa = rep.aa();
        let ff = quadratic_rules(&rep.p_vv, n, Kind::F)?;
        let vv = quadratic_rules(&rep.p_dd, n, Kind::V)?;
        let letter = |k: Kind, i: usize| (k as usize * n + i) as Letter;
        let mut cross: SwapRules<F> = HashMap::new();
        // v f = q^{(ω,ω)} R̂_{V,V*} f v
        let qw = rep.q(ww);
        for i in 0..n {
            for j in 0..n {
                let mut out = Vec::new();
                for k in 0..n {
                    for l in 0..n {
                        let c = rep.r_vd.entry(&[i, j], &[k, l]);
                        if !c.is_zero() {
                            out.push((letter(Kind::F, k), letter(Kind::V, l), c.mul(&qw)));
                        }
                    }
                }
                cross.insert((letter(Kind::V, i), letter(Kind::F, j)), out);
            }
        }
        let mut right: SwapRules<F> = HashMap::new();
        let mut add_right = |d: Kind, x: Kind, op: &LegOp<F>, scale: F| {
            for i in 0..n {
                for j in 0..n {
                    let mut out = Vec::new();
                    for k in 0..n {
                        for l in 0..n {
                            let c = op.entry(&[i, j], &[k, l]);
                            if !c.is_zero() {
                                out.push((letter(x, k), letter(d, l), c.mul(&scale)));
                            }
                        }
                    }
                    right.insert((letter(d, i), letter(x, j)), out);
                }
            }
        };
        // ∂f f = q^{(α,α)−(ω,ω)} R̂_{V,V} f ∂f,  ∂f v = q^{−(ω,ω)} R̂^{-1}_{V,V*} v ∂f
        add_right(Kind::DF, Kind::F, &rep.r_vv, rep.q(aa - ww));
        add_right(Kind::DF, Kind::V, &rep.r_vd_inv, rep.q(-ww));
        // ∂̄v f = q^{(ω,ω)} R̂_{V,V*} f ∂̄v,  ∂̄v v = q^{(ω,ω)−(α,α)} R̂^{-1}_{V*,V*} v ∂̄v
        add_right(Kind::DV, Kind::F, &rep.r_vd, rep.q(ww));
        add_right(Kind::DV, Kind::V, &rep.r_dd_inv, rep.q(ww - aa));
        let ep_weights = (0..n).map(|i| rep.q(rep.weights.rho2(i))).collect();
        Ok(Model {
            rep,
            n,
            ff,
            vv,
            cross,
            right,
            ep_weights,
            mul_memo: Mutex::default(),
            push_memo: Mutex::default(),
            nf_memo: Mutex::default(),
            blocks: Mutex::default(),
        })
    }

    pub fn letter(&self, k: Kind, i: usize) -> Letter {
        (k as usize * self.n + i) as Letter
    }
    pub fn kind(&self, l: Letter) -> Kind {
        Kind::from_index(l / self.n as u8)
    }
    pub fn index(&self, l: Letter) -> usize {
        l as usize % self.n
    }

    /// `q^p` in the coefficient field.
    pub fn q(&self, p: Pairing) -> F {
        self.rep.q(p)
    }

    /// Right multiplication of an ordered monomial of `H` by an algebra letter.
    fn mul_h(&self, m: &[Letter], x: Letter, depth: usize) -> Result<Terms<F>, AlgebraError> {
        if depth > CYCLE_GUARD {
            return Err(AlgebraError::Cycle);
        }
        match m.last() {
            None => return Ok(vec![(vec![x], F::one())]),
            Some(&y) if y <= x => {
                let mut w = m.to_vec();
                w.push(x);
                return Ok(vec![(w, F::one())]);
            }
            _ => {}
        }
        let key = (m.to_vec(), x);
        if let Some(r) = self.mul_memo.lock().unwrap().get(&key) {
            return Ok(r.clone());
        }
        let y = *m.last().unwrap();
        let prefix = &m[..m.len() - 1];
        let rules = match (self.kind(y), self.kind(x)) {
            (Kind::F, Kind::F) => &self.ff,
            (Kind::V, Kind::V) => &self.vv,
            (Kind::V, Kind::F) => &self.cross,
            _ => unreachable!("ordered monomials place f before v"),
        };
        let mut acc: HashMap<Vec<Letter>, F> = HashMap::new();
        for (a, b, c) in &rules[&(y, x)] {
            for (w1, c1) in self.mul_h(prefix, *a, depth + 1)? {
                for (w2, c2) in self.mul_h(&w1, *b, depth + 1)? {
                    acc.entry(w2).or_insert_with(F::zero).add_assign(&c.mul(&c1).mul(&c2));
                }
            }
        }
        let mut out: Terms<F> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        self.mul_memo.lock().unwrap().insert(key, out.clone());
        Ok(out)
    }

    /// Moves an algebra letter from the right of a differential word to its left.
    fn push(&self, dw: &[Letter], x: Letter) -> Pushed<F> {
        let Some(&d) = dw.last() else { return vec![(x, Vec::new(), F::one())] };
        let key = (dw.to_vec(), x);
        if let Some(r) = self.push_memo.lock().unwrap().get(&key) {
            return r.clone();
        }
        let prefix = &dw[..dw.len() - 1];
        let mut acc: BTreeMap<(Letter, Vec<Letter>), F> = BTreeMap::new();
        for (x1, d1, c) in &self.right[&(d, x)] {
            for (x2, mut u, c2) in self.push(prefix, *x1) {
                u.push(*d1);
                acc.entry((x2, u)).or_insert_with(F::zero).add_assign(&c.mul(&c2));
            }
        }
        let out: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|((x, u), c)| (x, u, c)).collect();
        self.push_memo.lock().unwrap().insert(key, out.clone());
        out
    }

    /// Splits a normal word into its algebra part and its differential part.
    pub fn split<'a>(&self, w: &'a [Letter]) -> (&'a [Letter], &'a [Letter]) {
        let k = w.iter().position(|&l| self.kind(l).is_differential()).unwrap_or(w.len());
        (&w[..k], &w[k..])
    }

    /// Right multiplication of a normal word by one letter.
    fn mul_letter(&self, w: &[Letter], x: Letter) -> Result<Terms<F>, AlgebraError> {
        let (h, dw) = self.split(w);
        if self.kind(x).is_differential() {
            let mut out = w.to_vec();
            out.push(x);
            return Ok(vec![(out, F::one())]);
        }
        let mut acc: BTreeMap<Vec<Letter>, F> = BTreeMap::new();
        for (x2, dw2, c) in self.push(dw, x) {
            for (h2, c2) in self.mul_h(h, x2, 0)? {
                let mut word = h2;
                word.extend_from_slice(&dw2);
                acc.entry(word).or_insert_with(F::zero).add_assign(&c.mul(&c2));
            }
        }
        Ok(acc.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }

    /// Normal form of a word in the free module over `H` (before the left relations).
    pub fn nf_word(&self, w: &[Letter]) -> Result<Terms<F>, AlgebraError> {
        if w.is_empty() {
            return Ok(vec![(Vec::new(), F::one())]);
        }
        if let Some(r) = self.nf_memo.lock().unwrap().get(w) {
            return Ok(r.clone());
        }
        let prefix = self.nf_word(&w[..w.len() - 1])?;
        let x = w[w.len() - 1];
        let mut acc: BTreeMap<Vec<Letter>, F> = BTreeMap::new();
        for (p, c) in prefix {
            for (q, c2) in self.mul_letter(&p, x)? {
                acc.entry(q).or_insert_with(F::zero).add_assign(&c.mul(&c2));
            }
        }
        let out: Terms<F> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        self.nf_memo.lock().unwrap().insert(w.to_vec(), out.clone());
        Ok(out)
    }

    /// Normal form of a linear combination (before the left relations).
    pub fn nf(&self, x: &Elem<F>) -> Result<Elem<F>, AlgebraError> {
        let mut acc: Elem<F> = BTreeMap::new();
        for (w, c) in x {
            for (q, c2) in self.nf_word(w)? {
                let e = acc.entry(q).or_insert_with(F::zero);
                *e = e.add(&c.mul(&c2));
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(acc)
    }

    /// `c · w` for a normal word `w`, computed inside `H` (where `c` is central).
    fn lift_word(&self, w: &[Letter]) -> Result<Terms<F>, AlgebraError> {
        let (h, dw) = self.split(w);
        let mut acc: BTreeMap<Vec<Letter>, F> = BTreeMap::new();
        for i in 0..self.n {
            for (h1, c1) in self.mul_h(h, self.letter(Kind::V, i), 0)? {
                for (h2, c2) in self.mul_h(&h1, self.letter(Kind::F, i), 0)? {
                    let mut word = h2;
                    word.extend_from_slice(dw);
                    acc.entry(word).or_insert_with(F::zero).add_assign(&c1.mul(&c2));
                }
            }
        }
        Ok(acc.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }

    /// Pattern of differential kinds and bidegree of the algebra part of a normal word.
    pub fn classify(&self, w: &[Letter]) -> (Vec<Kind>, usize, usize) {
        let (h, dw) = self.split(w);
        let a = h.iter().filter(|&&l| self.kind(l) == Kind::F).count();
        (dw.iter().map(|&l| self.kind(l)).collect(), a, h.len() - a)
    }

    /// Ordered monomials of `H` with `a` letters `f` and `b` letters `v`.
    pub fn h_monomials(&self, a: usize, b: usize) -> Vec<Vec<Letter>> {
        let mut out = Vec::new();
        for fs in multisets(self.n, a) {
            for vs in multisets(self.n, b) {
                let mut w: Vec<Letter> = fs.iter().map(|&i| self.letter(Kind::F, i)).collect();
                w.extend(vs.iter().map(|&i| self.letter(Kind::V, i)));
                out.push(w);
            }
        }
        out
    }

    /// The block with the given key, built on first use.
    pub fn block(&self, key: &BlockKey) -> Result<Arc<Block<F>>, AlgebraError> {
        if let Some(b) = self.blocks.lock().unwrap().get(key) {
            return Ok(b.clone());
        }
        let block = Arc::new(self.build_block(key)?);
        self.blocks.lock().unwrap().insert(key.clone(), block.clone());
        Ok(block)
    }

    fn build_block(&self, key: &BlockKey) -> Result<Block<F>, AlgebraError> {
        let n = self.n;
        let k = key.pattern.len();
        let dwords: Vec<Vec<Letter>> = tuples(n, k)
            .into_iter()
            .map(|t| t.iter().zip(&key.pattern).map(|(&i, &kd)| self.letter(kd, i)).collect())
            .collect();
        let mut basis = Vec::new();
        for h in self.h_monomials(key.a, key.b) {
            for dw in &dwords {
                let mut w = h.clone();
                w.extend_from_slice(dw);
                basis.push(w);
            }
        }
        basis.sort();
        let index: HashMap<Vec<Letter>, u32> = basis.iter().enumerate().map(|(i, w)| (w.clone(), i as u32)).collect();
        let mut relations = Echelon::new();
        for pos in 0..k {
            let (da, db, rel_letter) = match key.pattern[pos] {
                Kind::DF => (0, 1, Kind::V),
                _ => (1, 0, Kind::F),
            };
            if key.a < da || key.b < db {
                continue;
            }
            for h in self.h_monomials(key.a - da, key.b - db) {
                for dw in &dwords {
                    let mut acc: BTreeMap<Vec<Letter>, F> = BTreeMap::new();
                    for i in 0..n {
                        let coef = match key.pattern[pos] {
                            Kind::DF => F::one(),
                            _ => self.ep_weights[i].clone(),
                        };
                        let mut head = h.clone();
                        head.extend_from_slice(&dw[..pos]);
                        for (w1, c1) in self.mul_letter(&head, self.letter(rel_letter, i))? {
                            let mut w = w1;
                            w.push(self.letter(key.pattern[pos], i));
                            w.extend_from_slice(&dw[pos + 1..]);
                            acc.entry(w).or_insert_with(F::zero).add_assign(&coef.mul(&c1));
                        }
                    }
                    let v: SparseVec<F> = to_sparse(&index, acc)?;
                    relations.insert(&v);
                }
            }
        }
        Ok(Block { key: key.clone(), basis, index, relations })
    }

    /// Canonical image of an element in the quotient by the left relations and `c − 1`.
    ///
    /// Each homogeneous part is lifted by powers of `c` until its algebra part has at
    /// least as many `f` and as many `v` letters as there are differentials.
    pub fn canon(&self, x: &Elem<F>) -> Result<Canon<F>, AlgebraError> {
        let normal = self.nf(x)?;
        let mut groups: ByPattern<BTreeMap<(usize, usize), Elem<F>>> = BTreeMap::new();
        for (w, c) in normal {
            let (pat, a, b) = self.classify(&w);
            groups.entry((pat, a as i64 - b as i64)).or_default().entry((a, b)).or_default().insert(w, c);
        }
        let mut parts = BTreeMap::new();
        for (gk, levels) in groups {
            let (&(top_a, top_b), _) = levels.iter().next_back().unwrap();
            // Lift until every left relation can act, so that the block map is injective.
            let k = gk.0.len();
            let extra = k.saturating_sub(top_a).max(k.saturating_sub(top_b));
            let (amax, bmax) = (top_a + extra, top_b + extra);
            let mut total: Elem<F> = BTreeMap::new();
            for ((a, _), terms) in levels {
                let lifted = self.lift_terms(terms, amax - a)?;
                for (w, c) in lifted {
                    let e = total.entry(w).or_insert_with(F::zero);
                    *e = e.add(&c);
                }
            }
            total.retain(|_, c| !c.is_zero());
            let v = self.reduce_at(&gk.0, amax, bmax, total)?;
            parts.insert(gk, (amax, bmax, v));
        }
        Ok(Canon { parts })
    }

    /// Multiplies every term by `c^times`.
    pub fn lift_terms(&self, mut terms: Elem<F>, times: usize) -> Result<Elem<F>, AlgebraError> {
        for _ in 0..times {
            let mut next: Elem<F> = BTreeMap::new();
            for (w, c) in terms {
                for (w2, c2) in self.lift_word(&w)? {
                    let e = next.entry(w2).or_insert_with(F::zero);
                    *e = e.add(&c.mul(&c2));
                }
            }
            next.retain(|_, c| !c.is_zero());
            terms = next;
        }
        Ok(terms)
    }

    /// Reduced coordinates of normal terms in the block `(pattern, a, b)`.
    pub fn reduce_at(
        &self,
        pattern: &[Kind],
        a: usize,
        b: usize,
        terms: Elem<F>,
    ) -> Result<SparseVec<F>, AlgebraError> {
        let block = self.block(&BlockKey { pattern: pattern.to_vec(), a, b })?;
        let v = to_sparse(&block.index, terms)?;
        Ok(block.relations.reduce(&v))
    }

    /// Whether an element vanishes in the quotient.
    pub fn is_zero(&self, x: &Elem<F>) -> Result<bool, AlgebraError> {
        Ok(self.canon(x)?.is_zero())
    }

    /// Equality of two elements in the quotient.
    pub fn equal(&self, x: &Elem<F>, y: &Elem<F>) -> Result<bool, AlgebraError> {
        self.is_zero(&sub_elem(x, y))
    }

    /// The central element `c = Σ_i v^i f^i` as a word combination.
    pub fn c_elem(&self) -> Elem<F> {
        (0..self.n).map(|i| (vec![self.letter(Kind::V, i), self.letter(Kind::F, i)], F::one())).collect()
    }

    /// Dimension of the quotient block at the given key.
    pub fn block_quotient_dim(&self, key: &BlockKey) -> Result<usize, AlgebraError> {
        Ok(self.block(key)?.quotient_dim())
    }

    /// Coefficient of the left relation for `∂̄v^i`, namely `q^{(2ρ,λ_i)}`.
    pub fn ep_weight(&self, i: usize) -> &F {
        &self.ep_weights[i]
    }
}

fn to_sparse<F: Coeff>(index: &HashMap<Vec<Letter>, u32>, terms: Elem<F>) -> Result<SparseVec<F>, AlgebraError> {
    let mut v: SparseVec<F> = Vec::with_capacity(terms.len());
    for (w, c) in terms {
        if c.is_zero() {
            continue;
        }
        let i = *index.get(&w).ok_or(AlgebraError::Presentation)?;
        v.push((i, c));
    }
    v.sort_by_key(|(i, _)| *i);
    Ok(v)
}

/// `x − y`.
pub fn sub_elem<F: Coeff>(x: &Elem<F>, y: &Elem<F>) -> Elem<F> {
    let mut out = x.clone();
    for (w, c) in y {
        let e = out.entry(w.clone()).or_insert_with(F::zero);
        *e = e.sub(c);
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Nondecreasing sequences of length `k` over `0..n`.
pub fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::new(), &mut out);
    out
}

/// All sequences of length `k` over `0..n`, lexicographic.
pub fn tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..n.pow(k as u32)).map(|i| crate::leg::decode(n, k, i)).collect()
}

/// Rewriting rules `y x → Σ c a b` (for `y > x`) read off the quadratic relations
/// `(P x x)^{ij} = Σ P^{ij}_{kl} x^k x^l = 0` of one letter kind.
fn quadratic_rules<F: Coeff>(p: &LegOp<F>, n: usize, kind: Kind) -> Result<SwapRules<F>, AlgebraError> {
    let letter = |i: usize| (kind as usize * n + i) as Letter;
    // Columns ordered so that the descending pairs come first and become pivots.
    let mut order: Vec<(usize, usize)> = Vec::new();
    for k in 0..n {
        for l in 0..n {
            if k > l {
                order.push((k, l));
            }
        }
    }
    let ndesc = order.len();
    for k in 0..n {
        for l in k..n {
            order.push((k, l));
        }
    }
    let col_of: HashMap<(usize, usize), usize> = order.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut rows: Vec<Vec<F>> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut row = vec![F::zero(); order.len()];
            for k in 0..n {
                for l in 0..n {
                    let c = p.entry(&[i, j], &[k, l]);
                    if !c.is_zero() {
                        let col = col_of[&(k, l)];
                        row[col] = row[col].add(&c);
                    }
                }
            }
            rows.push(row);
        }
    }
    let pivots = crate::linalg::rref(&mut rows);
    if pivots != (0..ndesc).collect::<Vec<_>>() {
        return Err(AlgebraError::Presentation);
    }
    let mut rules = HashMap::new();
    for (r, &pc) in pivots.iter().enumerate() {
        let (k, l) = order[pc];
        let out = (ndesc..order.len())
            .filter(|&c| !rows[r][c].is_zero())
            .map(|c| (letter(order[c].0), letter(order[c].1), rows[r][c].neg()))
            .collect();
        rules.insert((letter(k), letter(l)), out);
    }
    Ok(rules)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Param, Q};

    fn model(n: usize) -> Model<Q> {
        let rep = Rep::build(Param::rational(n, Q::new(2.into(), 3.into()))).unwrap();
        Model::new(Arc::new(rep)).unwrap()
    }

    #[test]
    fn c_is_central_in_h() {
        for n in [2, 3] {
            let m = model(n);
            for kind in [Kind::F, Kind::V] {
                for i in 0..n {
                    let x = m.letter(kind, i);
                    let mut left: Elem<Q> = BTreeMap::new();
                    let mut right: Elem<Q> = BTreeMap::new();
                    for (w, c) in m.c_elem() {
                        let mut l = vec![x];
                        l.extend_from_slice(&w);
                        left.insert(l, c.clone());
                        let mut r = w.clone();
                        r.push(x);
                        right.insert(r, c);
                    }
                    assert_eq!(m.nf(&left).unwrap(), m.nf(&right).unwrap());
                }
            }
        }
    }

    #[test]
    fn unit_relation_holds() {
        let m = model(2);
        let one: Elem<Q> = [(Vec::new(), Q::one())].into_iter().collect();
        assert!(m.equal(&m.c_elem(), &one).unwrap());
        assert!(!m.is_zero(&one).unwrap());
    }
}
