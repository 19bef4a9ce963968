//! The differential layer over the projection generators.
//!
//! Forms are written in a formal alphabet of symbols `p^{ij}`, `∂p^{ij}` and
//! `∂̄p^{ij}`. A formal word is interpreted in the overcalculus model by the
//! substitutions `p ↦ f v`, `∂p ↦ ∂f v`, `∂̄p ↦ f ∂̄v`, under which tensor powers
//! of `Ω` over the projection algebra become the degree-zero part of tensor
//! powers of the overcalculus. Two-forms are the quotient of `Ω ⊗ Ω` by the
//! bimodule generated by the differentials of the relations of `Ω`, computed
//! level by level in a finite slice.

use crate::algebra::{AlgebraError, Elem, Kind, Letter, Model};
use crate::expr::{mul_elem, Expr};
use crate::leg::{LegError, Module, Slot};
use crate::linalg::{Echelon, SparseVec};
use crate::scalar::Coeff;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};
use thiserror::Error;

/// Kind of a formal symbol.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Sym {
    P = 0,
    Dp = 1,
    Dbp = 2,
}

impl Sym {
    pub fn is_differential(self) -> bool {
        self != Sym::P
    }
}

#[derive(Debug, Error)]
pub enum CalcError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Leg(#[from] LegError),
    #[error("element needs level {need}, budget is {budget}")]
    Budget { need: usize, budget: usize },
}

/// Quotient in which a zero test is performed.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Space {
    /// Tensor powers of `Ω`, including `Ω` itself and the algebra.
    Tensor,
    /// Two-forms.
    Wedge,
    /// Two-forms tensored with one-forms on the right.
    WedgeTensor,
    /// One-forms tensored with two-forms on the right.
    TensorWedge,
}

/// Outcome of a zero test.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ZeroTest {
    Zero,
    /// Not zero; carries the number of surviving canonical coordinates.
    NonZero(usize),
}

impl ZeroTest {
    pub fn is_zero(&self) -> bool {
        matches!(self, ZeroTest::Zero)
    }
    pub fn residual(&self) -> usize {
        match self {
            ZeroTest::Zero => 0,
            ZeroTest::NonZero(r) => *r,
        }
    }
}

/// A quotient together with the prolongation level its relations are built to.
type SpaceKey = (Space, usize);

/// The calculus: formal alphabet, differentials, module moves and two-form spaces.
pub struct Calculus<F: Coeff> {
    pub model: Arc<Model<F>>,
    pub n: usize,
    /// Highest level at which the two-form quotients are built.
    pub max_level: usize,
    left_moves: HashMap<(u8, u8), Elem<F>>,
    right_moves: HashMap<(u8, u8), Elem<F>>,
    relations: Vec<(&'static str, Expr<F>)>,
    lifted: Vec<(Elem<F>, usize)>,
    /// Relation spaces per quotient and prolongation level, built on first use.
    spaces: Mutex<HashMap<SpaceKey, Arc<Echelon<F>>>>,
}

/// Default level budget of the two-form quotients.
pub fn default_max_level(n: usize) -> usize {
    if n <= 2 {
        6
    } else {
        4
    }
}

impl<F: Coeff> Calculus<F> {
    pub fn new(model: Arc<Model<F>>, max_level: usize) -> Result<Self, CalcError> {
        let n = model.n;
        let mut calc = Calculus {
            model,
            n,
            max_level,
            left_moves: HashMap::new(),
            right_moves: HashMap::new(),
            relations: Vec::new(),
            lifted: Vec::new(),
            spaces: Mutex::default(),
        };
        calc.relations = calc.relation_families()?;
        let rep = calc.model.rep.clone();
        let (ww, aa) = (rep.ww(), rep.aa());
        let p = calc.p();
        let dp_moves = p.mul(&calc.dp()).apply(&rep.s, 1)?.scale(&rep.q(aa - ww));
        let dbp_moves = p.mul(&calc.dbp()).apply(&rep.st, 2)?.scale(&rep.q(ww - aa));
        for (moves, kind) in [(dp_moves, Sym::Dp), (dbp_moves, Sym::Dbp)] {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            let key = (calc.sym(kind, i, j), calc.sym(Sym::P, k, l));
                            calc.left_moves.insert(key, moves.component(&[i, j, k, l]));
                        }
                    }
                }
            }
        }
        // p ∂p = q^{(ω,ω)−(α,α)} S^{-1}_{123} ∂p p and p ∂̄p = q^{(α,α)−(ω,ω)} S̃^{-1}_{234} ∂̄p p
        let dp_right = calc.dp().mul(&p).apply(&rep.s_inv, 1)?.scale(&rep.q(ww - aa));
        let dbp_right = calc.dbp().mul(&p).apply(&rep.st_inv, 2)?.scale(&rep.q(aa - ww));
        for (moves, kind) in [(dp_right, Sym::Dp), (dbp_right, Sym::Dbp)] {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            let key = (calc.sym(Sym::P, i, j), calc.sym(kind, k, l));
                            calc.right_moves.insert(key, moves.component(&[i, j, k, l]));
                        }
                    }
                }
            }
        }
        let mut lifted = Vec::new();
        for (_, r) in &calc.relations {
            for e in r.comps.values() {
                let l = calc.d(e);
                if l.is_empty() {
                    continue;
                }
                let len = l.keys().map(Vec::len).max().unwrap_or(0);
                lifted.push((calc.to_gamma(&l), len));
            }
        }
        calc.lifted = lifted;
        Ok(calc)
    }

    pub fn sym(&self, k: Sym, i: usize, j: usize) -> u8 {
        (k as usize * self.n * self.n + i * self.n + j) as u8
    }

    pub fn parts(&self, s: u8) -> (Sym, usize, usize) {
        let n = self.n;
        let s = s as usize;
        let k = match s / (n * n) {
            0 => Sym::P,
            1 => Sym::Dp,
            _ => Sym::Dbp,
        };
        (k, (s / n) % n, s % n)
    }

    pub fn kind_of(&self, s: u8) -> Sym {
        self.parts(s).0
    }

    /// The family of a symbol kind, with free indices of type `(V, V*)`.
    pub fn family(&self, k: Sym) -> Expr<F> {
        Expr::family(self.n, vec![Slot::V, Slot::D], |ij| vec![self.sym(k, ij[0], ij[1])])
    }
    pub fn p(&self) -> Expr<F> {
        self.family(Sym::P)
    }
    pub fn dp(&self) -> Expr<F> {
        self.family(Sym::Dp)
    }
    pub fn dbp(&self) -> Expr<F> {
        self.family(Sym::Dbp)
    }

    /// Interprets a formal combination in the overcalculus model.
    pub fn to_gamma(&self, x: &Elem<F>) -> Elem<F> {
        let m = &self.model;
        let mut out: Elem<F> = BTreeMap::new();
        for (w, c) in x {
            let mut g: Vec<Letter> = Vec::with_capacity(2 * w.len());
            for &s in w {
                let (k, i, j) = self.parts(s);
                let (a, b) = match k {
                    Sym::P => (Kind::F, Kind::V),
                    Sym::Dp => (Kind::DF, Kind::V),
                    Sym::Dbp => (Kind::F, Kind::DV),
                };
                g.push(m.letter(a, i));
                g.push(m.letter(b, j));
            }
            out.add_into(&[(g, c.clone())].into_iter().collect());
        }
        out
    }

    /// Number of differential symbols in a word.
    pub fn form_degree(&self, w: &[u8]) -> usize {
        w.iter().filter(|&&s| self.kind_of(s).is_differential()).count()
    }

    /// Bidegree `(#∂p, #∂̄p)` of a word.
    pub fn bidegree(&self, w: &[u8]) -> (usize, usize) {
        let a = w.iter().filter(|&&s| self.kind_of(s) == Sym::Dp).count();
        let b = w.iter().filter(|&&s| self.kind_of(s) == Sym::Dbp).count();
        (a, b)
    }

    /// Keeps the words of the given bidegree.
    pub fn project(&self, x: &Elem<F>, bideg: (usize, usize)) -> Elem<F> {
        x.iter().filter(|(w, _)| self.bidegree(w) == bideg).map(|(w, c)| (w.clone(), c.clone())).collect()
    }

    /// `d p^{ij} = ∂p^{ij} + ∂̄p^{ij}` as a combination of single symbols.
    fn dsym(&self, i: usize, j: usize) -> Elem<F> {
        [(vec![self.sym(Sym::Dp, i, j)], F::one()), (vec![self.sym(Sym::Dbp, i, j)], F::one())].into_iter().collect()
    }

    /// `Σ_k d p^{ik} d p^{kj}`, the differential of `∂̄p^{ij}` and minus that of `∂p^{ij}`.
    fn dpdp(&self, i: usize, j: usize) -> Elem<F> {
        let mut acc: Elem<F> = BTreeMap::new();
        for k in 0..self.n {
            acc.add_into(&mul_elem(&self.dsym(i, k), &self.dsym(k, j)));
        }
        acc
    }

    /// Differential of a single symbol.
    fn d_symbol(&self, s: u8) -> Elem<F> {
        let (k, i, j) = self.parts(s);
        match k {
            Sym::P => self.dsym(i, j),
            Sym::Dp => self.dpdp(i, j).scaled(&F::one().neg()),
            Sym::Dbp => self.dpdp(i, j),
        }
    }

    /// The exterior differential, extended to formal words by the graded Leibniz rule.
    ///
    /// On words with one differential symbol this is the differential of the
    /// universal lift, so it maps relations of `Ω` to relations of the two-forms.
    pub fn d(&self, x: &Elem<F>) -> Elem<F> {
        let mut out: Elem<F> = BTreeMap::new();
        for (w, c) in x {
            let mut sign = c.clone();
            for (pos, &s) in w.iter().enumerate() {
                let head: Elem<F> = [(w[..pos].to_vec(), sign.clone())].into_iter().collect();
                let tail: Elem<F> = [(w[pos + 1..].to_vec(), F::one())].into_iter().collect();
                out.add_into(&mul_elem(&mul_elem(&head, &self.d_symbol(s)), &tail));
                if self.kind_of(s).is_differential() {
                    sign = sign.neg();
                }
            }
        }
        out
    }

    /// `∂` and `∂̄`: the components of `d` raising the holomorphic or antiholomorphic degree.
    pub fn del(&self, x: &Elem<F>, holomorphic: bool) -> Elem<F> {
        let mut out: Elem<F> = BTreeMap::new();
        for (w, c) in x {
            let (a, b) = self.bidegree(w);
            let target = if holomorphic { (a + 1, b) } else { (a, b + 1) };
            let single: Elem<F> = [(w.clone(), c.clone())].into_iter().collect();
            out.add_into(&self.project(&self.d(&single), target));
        }
        out
    }

    /// The involution: reverses words and exchanges `∂p^{ij}` with `∂̄p^{ji}`.
    ///
    /// Coefficients are fixed since `q` is real. On tensor products of one-forms
    /// this is the dagger `ω ⊗ η ↦ η^* ⊗ ω^*`.
    pub fn star(&self, x: &Elem<F>) -> Elem<F> {
        x.iter()
            .map(|(w, c)| {
                let v = w
                    .iter()
                    .rev()
                    .map(|&s| {
                        let (k, i, j) = self.parts(s);
                        let k2 = match k {
                            Sym::P => Sym::P,
                            Sym::Dp => Sym::Dbp,
                            Sym::Dbp => Sym::Dp,
                        };
                        self.sym(k2, j, i)
                    })
                    .collect();
                (v, c.clone())
            })
            .collect()
    }

    /// Moves every `p` lying between differential `k` and differential `k + 1` to the left of differential `k`.
    ///
    /// Uses the right module structure of `Ω`, so the result is equal in every
    /// tensor power and the two differentials become adjacent.
    pub fn pull_left(&self, x: &Elem<F>, k: usize) -> Elem<F> {
        let mut out: Elem<F> = BTreeMap::new();
        let mut work: Vec<(Vec<u8>, F)> = x.iter().map(|(w, c)| (w.clone(), c.clone())).collect();
        while let Some((w, c)) = work.pop() {
            let pos = w.iter().enumerate().filter(|(_, &s)| self.kind_of(s).is_differential()).nth(k).map(|(i, _)| i);
            let Some(pos) = pos else {
                out.add_into(&[(w, c)].into_iter().collect());
                continue;
            };
            if pos + 1 < w.len() && self.kind_of(w[pos + 1]) == Sym::P {
                let rule = &self.left_moves[&(w[pos], w[pos + 1])];
                for (r, rc) in rule {
                    let mut v = w[..pos].to_vec();
                    v.extend_from_slice(r);
                    v.extend_from_slice(&w[pos + 2..]);
                    work.push((v, c.mul(rc)));
                }
            } else {
                out.add_into(&[(w, c)].into_iter().collect());
            }
        }
        out
    }

    /// Moves every `p` lying between differential `k − 1` and differential `k` to the right of differential `k`.
    pub fn pull_right(&self, x: &Elem<F>, k: usize) -> Elem<F> {
        let mut out: Elem<F> = BTreeMap::new();
        let mut work: Vec<(Vec<u8>, F)> = x.iter().map(|(w, c)| (w.clone(), c.clone())).collect();
        while let Some((w, c)) = work.pop() {
            let pos = w.iter().enumerate().filter(|(_, &s)| self.kind_of(s).is_differential()).nth(k).map(|(i, _)| i);
            match pos {
                Some(pos) if pos > 0 && self.kind_of(w[pos - 1]) == Sym::P => {
                    for (r, rc) in &self.right_moves[&(w[pos - 1], w[pos])] {
                        let mut v = w[..pos - 1].to_vec();
                        v.extend_from_slice(r);
                        v.extend_from_slice(&w[pos + 1..]);
                        work.push((v, c.mul(rc)));
                    }
                }
                _ => out.add_into(&[(w, c)].into_iter().collect()),
            }
        }
        out
    }

    /// Applies a bimodule map on `Ω ⊗ Ω` to the differentials `k`, `k + 1` of every word.
    ///
    /// `table(a, b)` is the image of the pair of generators `a ⊗ b`.
    pub fn apply_pair(&self, x: &Elem<F>, k: usize, mut table: impl FnMut(u8, u8) -> Elem<F>) -> Elem<F> {
        let mut out: Elem<F> = BTreeMap::new();
        for (w, c) in self.pull_left(x, k) {
            let pos = w.iter().enumerate().filter(|(_, &s)| self.kind_of(s).is_differential()).nth(k).map(|(i, _)| i);
            let Some(pos) = pos else { continue };
            let head: Elem<F> = [(w[..pos].to_vec(), c)].into_iter().collect();
            let tail: Elem<F> = [(w[pos + 2..].to_vec(), F::one())].into_iter().collect();
            out.add_into(&mul_elem(&mul_elem(&head, &table(w[pos], w[pos + 1])), &tail));
        }
        out
    }

    /// Applies a left module map of `Ω` to differential `k` of every word, after moving the algebra part left.
    pub fn apply_single(&self, x: &Elem<F>, k: usize, mut table: impl FnMut(u8) -> Elem<F>) -> Elem<F> {
        let mut out: Elem<F> = BTreeMap::new();
        for (w, c) in x {
            let pos = w.iter().enumerate().filter(|(_, &s)| self.kind_of(s).is_differential()).nth(k).map(|(i, _)| i);
            let Some(pos) = pos else { continue };
            let head: Elem<F> = [(w[..pos].to_vec(), c.clone())].into_iter().collect();
            let tail: Elem<F> = [(w[pos + 1..].to_vec(), F::one())].into_iter().collect();
            out.add_into(&mul_elem(&mul_elem(&head, &table(w[pos])), &tail));
        }
        out
    }

    /// The generating relations of `Ω` as a bimodule, each as an index family.
    fn relation_families(&self) -> Result<Vec<(&'static str, Expr<F>)>, CalcError> {
        let rep = self.model.rep.clone();
        let (ww, aa) = (rep.ww(), rep.aa());
        let (p, dp, dbp) = (self.p(), self.dp(), self.dbp());
        let pdp = p.mul(&dp);
        let pdbp = p.mul(&dbp);
        let dpp = dp.mul(&p);
        let dbpp = dbp.mul(&p);
        Ok(vec![
            ("St_pdp", pdp.apply(&rep.st, 2)?.sub(&pdp.scale(&rep.q(-ww)))?),
            ("Ep_dp", dp.apply(&rep.ev_p, 1)?),
            ("S_pdbp", pdbp.apply(&rep.s, 1)?.sub(&pdbp.scale(&rep.q(ww)))?),
            ("Ep_dbp", dbp.apply(&rep.ev_p, 1)?),
            ("right_dp", dpp.sub(&pdp.apply(&rep.s, 1)?.scale(&rep.q(aa - ww)))?),
            ("right_dbp", dbpp.sub(&pdbp.apply(&rep.st, 2)?.scale(&rep.q(ww - aa)))?),
            ("E_pdp", pdp.apply(&rep.ev, 2)?),
            ("E_dpp", dpp.apply(&rep.ev, 2)?.sub(&dp)?),
            ("E_pdbp", pdbp.apply(&rep.ev, 2)?.sub(&dbp)?),
            ("E_dbpp", dbpp.apply(&rep.ev, 2)?),
        ])
    }

    /// The named relation families of `Ω`.
    pub fn relations(&self) -> &[(&'static str, Expr<F>)] {
        &self.relations
    }

    /// Level of a normal overcalculus word: its number of `f` and `∂f` letters.
    fn word_level(&self, w: &[Letter]) -> usize {
        let (pat, a, _) = self.model.classify(w);
        a + pat.iter().filter(|&&k| k == Kind::DF).count()
    }

    /// Canonical coordinates of an overcalculus element lifted to `level`, modulo the left relations.
    fn coords(&self, x: &Elem<F>, level: usize) -> Result<SparseVec<F>, CalcError> {
        let normal = self.model.nf(x)?;
        let mut groups: BTreeMap<Vec<Kind>, Elem<F>> = BTreeMap::new();
        for (w, c) in normal {
            let (pat, a, _) = self.model.classify(&w);
            let kdf = pat.iter().filter(|&&k| k == Kind::DF).count();
            if a + kdf > level {
                return Err(CalcError::Budget { need: a + kdf, budget: level });
            }
            let lifted = self.model.lift_terms([(w, c)].into_iter().collect(), level - kdf - a)?;
            groups.entry(pat).or_default().add_into(&lifted);
        }
        let mut out: SparseVec<F> = Vec::new();
        for (pat, terms) in groups {
            let kdf = pat.iter().filter(|&&k| k == Kind::DF).count();
            let kdv = pat.len() - kdf;
            let id = pat.iter().fold(1u32, |acc, &k| (acc << 1) | u32::from(k == Kind::DV));
            for (c, v) in self.model.reduce_at(&pat, level - kdf, level - kdv, terms)? {
                out.push(((id << 24) | c, v));
            }
        }
        out.sort_by_key(|(c, _)| *c);
        Ok(out)
    }

    /// Relation subspace of a two-form quotient at a given level, built on first use.
    fn space(&self, space: Space, level: usize) -> Result<Arc<Echelon<F>>, CalcError> {
        if let Some(e) = self.spaces.lock().unwrap().get(&(space, level)) {
            return Ok(e.clone());
        }
        let m = &self.model;
        let n = self.n;
        let gens: Vec<Vec<Letter>> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .flat_map(|(i, j)| {
                [vec![m.letter(Kind::DF, i), m.letter(Kind::V, j)], vec![m.letter(Kind::F, i), m.letter(Kind::DV, j)]]
            })
            .collect();
        let mut ech = Echelon::new();
        let extra = usize::from(space != Space::Wedge);
        for (l, len) in &self.lifted {
            if len + extra > level {
                continue;
            }
            let free = level - len - extra;
            let generators: Vec<Option<&Vec<Letter>>> = match space {
                Space::Wedge => vec![None],
                _ => gens.iter().map(Some).collect(),
            };
            for a in 0..=free {
                let b = free - a;
                for x in m.h_monomials(a, a) {
                    for y in m.h_monomials(b, b) {
                        for g in &generators {
                            let word = |w: &Vec<Letter>| -> Vec<Letter> {
                                let mut v = Vec::new();
                                if space == Space::TensorWedge {
                                    v.extend_from_slice(&x);
                                    v.extend_from_slice(g.unwrap());
                                    v.extend_from_slice(w);
                                    v.extend_from_slice(&y);
                                } else {
                                    v.extend_from_slice(&x);
                                    v.extend_from_slice(w);
                                    v.extend_from_slice(&y);
                                    if let Some(g) = g {
                                        v.extend_from_slice(g);
                                    }
                                }
                                v
                            };
                            let elem: Elem<F> = l.iter().map(|(w, c)| (word(w), c.clone())).collect();
                            let v = self.coords(&elem, level)?;
                            ech.insert(&v);
                        }
                    }
                }
            }
        }
        let ech = Arc::new(ech);
        self.spaces.lock().unwrap().insert((space, level), ech.clone());
        Ok(ech)
    }

    /// Zero test of a formal element in the given quotient.
    ///
    /// Two-form quotients are tried from the element's own level up to
    /// [`Calculus::max_level`]; an element whose level exceeds the budget is an error.
    pub fn zero_test(&self, space: Space, x: &Elem<F>) -> Result<ZeroTest, CalcError> {
        self.zero_test_gamma(space, &self.to_gamma(x))
    }

    /// Zero test of an overcalculus element in the given quotient.
    pub fn zero_test_gamma(&self, space: Space, g: &Elem<F>) -> Result<ZeroTest, CalcError> {
        let canon = self.model.canon(g)?;
        if canon.is_zero() {
            return Ok(ZeroTest::Zero);
        }
        if space == Space::Tensor {
            return Ok(ZeroTest::NonZero(canon.term_count()));
        }
        let normal = self.model.nf(g)?;
        let start = normal.keys().map(|w| self.word_level(w)).max().unwrap_or(0);
        if start > self.max_level {
            return Err(CalcError::Budget { need: start, budget: self.max_level });
        }
        let mut residual = 0;
        for level in start..=self.max_level {
            let v = self.coords(g, level)?;
            let r = self.space(space, level)?.reduce(&v);
            if r.is_empty() {
                return Ok(ZeroTest::Zero);
            }
            residual = r.len();
        }
        Ok(ZeroTest::NonZero(residual))
    }

    /// Zero test of every component of an index family.
    pub fn zero_test_expr(&self, space: Space, x: &Expr<F>) -> Result<ZeroTest, CalcError> {
        let mut residual = 0;
        for e in x.comps.values() {
            residual += self.zero_test(space, e)?.residual();
        }
        Ok(if residual == 0 { ZeroTest::Zero } else { ZeroTest::NonZero(residual) })
    }

    /// Maps every component of a family through a linear map on formal combinations.
    pub fn map_expr(&self, x: &Expr<F>, f: impl Fn(&Elem<F>) -> Elem<F>) -> Expr<F> {
        let comps = x.comps.iter().map(|(k, v)| (*k, f(v))).filter(|(_, v)| !v.is_empty()).collect();
        Expr { n: x.n, sig: x.sig.clone(), comps }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::Rep;
    use crate::scalar::{Param, Q};

    fn calc() -> Calculus<Q> {
        let rep = Arc::new(Rep::build(Param::rational(2, Q::new(1.into(), 2.into()))).unwrap());
        let model = Arc::new(Model::new(rep).unwrap());
        Calculus::new(model, 4).unwrap()
    }

    #[test]
    fn relations_hold_in_one_forms() {
        let c = calc();
        for (name, r) in c.relations() {
            assert!(c.zero_test_expr(Space::Tensor, r).unwrap().is_zero(), "{name}");
        }
    }

    #[test]
    fn holomorphic_differential_squares_to_zero_on_p() {
        let c = calc();
        for hol in [true, false] {
            let ddp = c.map_expr(&c.p(), |e| c.del(&c.del(e, hol), hol));
            assert!(!ddp.is_zero());
            assert!(c.zero_test_expr(Space::Wedge, &ddp).unwrap().is_zero());
        }
    }

    #[test]
    fn generators_are_nonzero() {
        let c = calc();
        assert!(!c.zero_test_expr(Space::Tensor, &c.dp()).unwrap().is_zero());
        assert!(!c.zero_test_expr(Space::Tensor, &c.dbp()).unwrap().is_zero());
    }

    #[test]
    fn star_is_involutive() {
        let c = calc();
        let x = c.dp().mul(&c.p()).mul(&c.dbp());
        for e in x.comps.values() {
            assert_eq!(&c.star(&c.star(e)), e);
        }
    }
}
