//! Brute-force equality oracle for the presented overcalculus.
//!
//! The oracle spans the two-sided ideal of the free algebra on the letters
//! `f`, `v`, `∂f`, `∂̄v` generated by every defining relation, truncated at a
//! maximal word length: the ideal slice is spanned by the products `x r y` of
//! length at most the truncation. It shares no rewriting code with
//! [`crate::algebra::Model`]; only the operators of the representation layer are
//! common. Membership in the truncated slice is a sufficient condition for
//! vanishing in the quotient, and the cross-check against the rewriting engine
//! establishes that the truncation is large enough for the words compared.

use crate::algebra::{AlgebraError, Canon, Elem, Kind, Letter, Model};
use crate::calculus::ZeroTest;
use crate::leg::Module;
use crate::linalg::{Echelon, SparseVec};
use crate::rep::Rep;
use crate::scalar::Coeff;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cmp::Reverse;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

/// Grading preserved by every relation: z-degree and the numbers of `∂f` and `∂̄v` letters.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Grade {
    pub z: i64,
    pub df: usize,
    pub dv: usize,
}

/// The ideal slice of one graded component.
pub struct OracleBlock<F: Coeff> {
    pub grade: Grade,
    /// Words of the component, longest first.
    pub words: Vec<Vec<Letter>>,
    pub index: HashMap<Vec<Letter>, u32>,
    pub ideal: Echelon<F>,
}

impl<F: Coeff> OracleBlock<F> {
    /// Dimension of the ideal slice inside the span of words of length at most `len`.
    pub fn ideal_dim_up_to(&self, len: usize) -> usize {
        let first = self.words.iter().position(|w| w.len() <= len).unwrap_or(self.words.len()) as u32;
        self.ideal.rows().iter().filter(|r| r[0].0 >= first).count()
    }

    /// Number of words of length at most `len`.
    pub fn words_up_to(&self, len: usize) -> usize {
        self.words.iter().filter(|w| w.len() <= len).count()
    }
}

/// The brute-force oracle for one representation.
pub struct Oracle<F: Coeff> {
    pub n: usize,
    pub max_len: usize,
    relations: Vec<Elem<F>>,
    blocks: Mutex<HashMap<Grade, Arc<OracleBlock<F>>>>,
}

fn letter(n: usize, k: Kind, i: usize) -> Letter {
    (k as usize * n + i) as Letter
}

fn single<F: Coeff>(w: Vec<Letter>, c: F) -> Elem<F> {
    if c.is_zero() {
        BTreeMap::new()
    } else {
        [(w, c)].into_iter().collect()
    }
}

impl<F: Coeff> Oracle<F> {
    /// Collects the defining relations of the overcalculus from the representation.
    pub fn new(rep: &Rep<F>, max_len: usize) -> Self {
        let n = rep.n;
        let (ww, aa) = (rep.ww(), rep.aa());
        let l = |k, i| letter(n, k, i);
        let mut relations: Vec<Elem<F>> = Vec::new();
        let mut push = |e: Elem<F>| {
            if !e.is_empty() {
                relations.push(e);
            }
        };
        for i in 0..n {
            for j in 0..n {
                let mut ff: Elem<F> = BTreeMap::new();
                let mut vv: Elem<F> = BTreeMap::new();
                // v f = q^{(ω,ω)} R̂_{V,V*} f v
                let mut cross = single(vec![l(Kind::V, i), l(Kind::F, j)], F::one());
                for k in 0..n {
                    for m in 0..n {
                        ff.add_into(&single(vec![l(Kind::F, k), l(Kind::F, m)], rep.p_vv.entry(&[i, j], &[k, m])));
                        vv.add_into(&single(vec![l(Kind::V, k), l(Kind::V, m)], rep.p_dd.entry(&[i, j], &[k, m])));
                        let c = rep.r_vd.entry(&[i, j], &[k, m]).mul(&rep.q(ww)).neg();
                        cross.add_into(&single(vec![l(Kind::F, k), l(Kind::V, m)], c));
                    }
                }
                push(ff);
                push(vv);
                push(cross);
            }
        }
        // ∂f f = q^{(α,α)−(ω,ω)} R̂_{V,V} f ∂f, ∂f v = q^{−(ω,ω)} R̂^{-1}_{V,V*} v ∂f,
        // ∂̄v f = q^{(ω,ω)} R̂_{V,V*} f ∂̄v, ∂̄v v = q^{(ω,ω)−(α,α)} R̂^{-1}_{V*,V*} v ∂̄v
        let right = [
            (Kind::DF, Kind::F, &rep.r_vv, rep.q(aa - ww)),
            (Kind::DF, Kind::V, &rep.r_vd_inv, rep.q(-ww)),
            (Kind::DV, Kind::F, &rep.r_vd, rep.q(ww)),
            (Kind::DV, Kind::V, &rep.r_dd_inv, rep.q(ww - aa)),
        ];
        for (d, x, op, s) in right {
            for i in 0..n {
                for j in 0..n {
                    let mut e = single(vec![l(d, i), l(x, j)], F::one());
                    for k in 0..n {
                        for m in 0..n {
                            let c = op.entry(&[i, j], &[k, m]).mul(&s).neg();
                            e.add_into(&single(vec![l(x, k), l(d, m)], c));
                        }
                    }
                    push(e);
                }
            }
        }
        // Σ v^i ∂f^i = 0, Σ q^{(2ρ,λ_i)} f^i ∂̄v^i = 0 and Σ v^i f^i = 1
        let mut left_df: Elem<F> = BTreeMap::new();
        let mut left_dv: Elem<F> = BTreeMap::new();
        let mut unit = single(Vec::new(), F::one().neg());
        for i in 0..n {
            left_df.add_into(&single(vec![l(Kind::V, i), l(Kind::DF, i)], F::one()));
            left_dv.add_into(&single(vec![l(Kind::F, i), l(Kind::DV, i)], rep.q(rep.weights.rho2(i))));
            unit.add_into(&single(vec![l(Kind::V, i), l(Kind::F, i)], F::one()));
        }
        push(left_df);
        push(left_dv);
        push(unit);
        Oracle { n, max_len, relations, blocks: Mutex::default() }
    }

    fn kind(&self, l: Letter) -> Kind {
        Kind::from_index(l / self.n as u8)
    }

    /// Grade of a word.
    pub fn grade(&self, w: &[Letter]) -> Grade {
        let mut g = Grade { z: 0, df: 0, dv: 0 };
        for &l in w {
            match self.kind(l) {
                Kind::F => g.z += 1,
                Kind::V => g.z -= 1,
                Kind::DF => {
                    g.z += 1;
                    g.df += 1
                }
                Kind::DV => {
                    g.z -= 1;
                    g.dv += 1
                }
            }
        }
        g
    }

    /// The defining relations, one combination per component.
    pub fn relations(&self) -> &[Elem<F>] {
        &self.relations
    }

    /// All words of length `len` with the given grade.
    fn words_of(&self, len: usize, grade: Grade) -> Vec<Vec<Letter>> {
        fn rec(n: usize, left: usize, g: Grade, cur: &mut Vec<Letter>, out: &mut Vec<Vec<Letter>>) {
            if left == 0 {
                if g.z == 0 && g.df == 0 && g.dv == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            if g.z.unsigned_abs() as usize > left || g.df + g.dv > left {
                return;
            }
            for kind in [Kind::F, Kind::V, Kind::DF, Kind::DV] {
                let mut h = g;
                match kind {
                    Kind::F => h.z -= 1,
                    Kind::V => h.z += 1,
                    Kind::DF => {
                        if h.df == 0 {
                            continue;
                        }
                        h.z -= 1;
                        h.df -= 1;
                    }
                    Kind::DV => {
                        if h.dv == 0 {
                            continue;
                        }
                        h.z += 1;
                        h.dv -= 1;
                    }
                }
                for i in 0..n {
                    cur.push(letter(n, kind, i));
                    rec(n, left - 1, h, cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        rec(self.n, len, grade, &mut Vec::new(), &mut out);
        out
    }

    /// The ideal slice of a graded component, built on first use.
    pub fn block(&self, grade: Grade) -> Arc<OracleBlock<F>> {
        if let Some(b) = self.blocks.lock().unwrap().get(&grade) {
            return b.clone();
        }
        let block = Arc::new(self.build_block(grade));
        self.blocks.lock().unwrap().insert(grade, block.clone());
        block
    }

    fn build_block(&self, grade: Grade) -> OracleBlock<F> {
        let mut words: Vec<Vec<Letter>> = (0..=self.max_len).flat_map(|len| self.words_of(len, grade)).collect();
        words.sort_by(|a, b| (Reverse(a.len()), a).cmp(&(Reverse(b.len()), b)));
        let index: HashMap<Vec<Letter>, u32> = words.iter().enumerate().map(|(i, w)| (w.clone(), i as u32)).collect();
        let mut ideal = Echelon::new();
        let mut memo: HashMap<(usize, Grade), Vec<Vec<Letter>>> = HashMap::new();
        for r in &self.relations {
            let rlen = r.keys().map(Vec::len).max().unwrap_or(0);
            let rg = self.grade(r.keys().next().expect("nonempty relation"));
            if rlen > self.max_len {
                continue;
            }
            for total in 0..=self.max_len - rlen {
                for a in 0..=total {
                    let b = total - a;
                    for gx in self.split_grades(grade, rg, a, b) {
                        let gy = Grade {
                            z: grade.z - rg.z - gx.z,
                            df: grade.df - rg.df - gx.df,
                            dv: grade.dv - rg.dv - gx.dv,
                        };
                        let xs = memo.entry((a, gx)).or_insert_with(|| self.words_of(a, gx)).clone();
                        let ys = memo.entry((b, gy)).or_insert_with(|| self.words_of(b, gy)).clone();
                        for x in &xs {
                            for y in &ys {
                                let mut v: SparseVec<F> = r
                                    .iter()
                                    .map(|(w, c)| {
                                        let mut word = x.clone();
                                        word.extend_from_slice(w);
                                        word.extend_from_slice(y);
                                        (index[&word], c.clone())
                                    })
                                    .collect();
                                v.sort_by_key(|(i, _)| *i);
                                ideal.insert(&v);
                            }
                        }
                    }
                }
            }
        }
        OracleBlock { grade, words, index, ideal }
    }

    /// Grades of a left factor of length `a` compatible with the target grade.
    fn split_grades(&self, target: Grade, rel: Grade, a: usize, b: usize) -> Vec<Grade> {
        let mut out = Vec::new();
        if rel.df > target.df || rel.dv > target.dv {
            return out;
        }
        let (rdf, rdv) = (target.df - rel.df, target.dv - rel.dv);
        for df in 0..=rdf.min(a) {
            for dv in 0..=rdv.min(a - df) {
                let (ydf, ydv) = (rdf - df, rdv - dv);
                if ydf + ydv > b {
                    continue;
                }
                let alg = (a - df - dv) as i64;
                for fx in 0..=alg {
                    let z = fx - (alg - fx) + df as i64 - dv as i64;
                    let zy = target.z - rel.z - z;
                    if zy.unsigned_abs() as usize <= b {
                        out.push(Grade { z, df, dv });
                    }
                }
            }
        }
        out
    }

    /// Zero test of an overcalculus element against the truncated ideal.
    pub fn zero_test(&self, x: &Elem<F>) -> Result<ZeroTest, AlgebraError> {
        let mut parts: BTreeMap<Grade, SparseVec<F>> = BTreeMap::new();
        for (w, c) in x {
            if c.is_zero() {
                continue;
            }
            if w.len() > self.max_len {
                return Err(AlgebraError::Budget { need: w.len(), budget: self.max_len });
            }
            let g = self.grade(w);
            let block = self.block(g);
            parts.entry(g).or_default().push((block.index[w], c.clone()));
        }
        let mut residual = 0;
        for (g, mut v) in parts {
            v.sort_by_key(|(i, _)| *i);
            residual += self.block(g).ideal.reduce(&v).len();
        }
        Ok(if residual == 0 { ZeroTest::Zero } else { ZeroTest::NonZero(residual) })
    }
}

/// Canonical coordinates of an element under the rewriting engine, lifted to a common level.
///
/// All words of one graded component up to a fixed length are lifted to the same
/// algebra bidegree, so the coordinates of different words live in one space and
/// ranks can be compared with the oracle.
pub fn rewrite_coords<F: Coeff>(model: &Model<F>, x: &Elem<F>, max_len: usize) -> Result<SparseVec<F>, AlgebraError> {
    let normal = model.nf(x)?;
    let mut groups: BTreeMap<Vec<Kind>, Elem<F>> = BTreeMap::new();
    let mut target: BTreeMap<Vec<Kind>, (usize, usize)> = BTreeMap::new();
    for (w, c) in normal {
        let (pat, a, b) = model.classify(&w);
        // Largest algebra length of the same parity that fits the budget.
        let room = max_len - pat.len();
        let room = if (room + a + b).is_multiple_of(2) { room } else { room - 1 };
        let lift = (room - a - b) / 2;
        target.insert(pat.clone(), (a + lift, b + lift));
        let lifted = model.lift_terms([(w, c)].into_iter().collect(), lift)?;
        groups.entry(pat).or_default().add_into(&lifted);
    }
    let mut out: SparseVec<F> = Vec::new();
    for (pat, terms) in groups {
        let (a, b) = target[&pat];
        let id = pat.iter().fold(1u32, |acc, &k| (acc << 1) | u32::from(k == Kind::DV));
        for (c, v) in model.reduce_at(&pat, a, b, terms)? {
            out.push(((id << 24) | c, v));
        }
    }
    out.sort_by_key(|(c, _)| *c);
    Ok(out)
}

/// Outcome of the exhaustive comparison of the two engines on one graded component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Agreement {
    pub grade: Grade,
    pub words: usize,
    pub oracle_kernel: usize,
    pub rewrite_kernel: usize,
    /// Ideal vectors the rewriting engine fails to annihilate.
    pub unsound: usize,
}

impl Agreement {
    pub fn agrees(&self) -> bool {
        self.oracle_kernel == self.rewrite_kernel && self.unsound == 0
    }
}

/// Compares the kernels of the two engines on all words of a component up to `len` letters.
///
/// The oracle kernel is contained in the rewriting kernel when every ideal vector
/// maps to zero; equal dimensions then give equal kernels.
pub fn compare_component<F: Coeff>(
    oracle: &Oracle<F>,
    model: &Model<F>,
    grade: Grade,
    len: usize,
) -> Result<Agreement, AlgebraError> {
    let block = oracle.block(grade);
    let words: Vec<&Vec<Letter>> = block.words.iter().filter(|w| w.len() <= len).collect();
    let mut image = Echelon::new();
    for w in &words {
        let v = rewrite_coords(model, &[((*w).clone(), F::one())].into_iter().collect(), len)?;
        image.insert(&v);
    }
    let first = block.words.iter().position(|w| w.len() <= len).unwrap_or(block.words.len()) as u32;
    let mut unsound = 0;
    for row in block.ideal.rows().iter().filter(|r| r[0].0 >= first) {
        let e: Elem<F> = row.iter().map(|(i, c)| (block.words[*i as usize].clone(), c.clone())).collect();
        if !model.canon(&e)?.is_zero() {
            unsound += 1;
        }
    }
    Ok(Agreement {
        grade,
        words: words.len(),
        oracle_kernel: block.ideal_dim_up_to(len),
        rewrite_kernel: words.len() - image.rank(),
        unsound,
    })
}

/// Zero test under the rewriting engine, as a residual.
pub fn rewrite_zero<F: Coeff>(model: &Model<F>, x: &Elem<F>) -> Result<ZeroTest, AlgebraError> {
    let c: Canon<F> = model.canon(x)?;
    Ok(if c.is_zero() { ZeroTest::Zero } else { ZeroTest::NonZero(c.term_count()) })
}

/// Randomized cross-check of the two engines on elements of the given components.
///
/// Each sample draws a random combination `x` of words and a random member `u` of
/// the truncated ideal, then counts violations of: the rewriting engine annihilates
/// `u`; the normal form of `x` equals `x` under the oracle and stays in the same
/// component; both engines agree on whether `x` and `x + u` vanish.
pub fn random_agreement<F: Coeff>(
    oracle: &Oracle<F>,
    model: &Model<F>,
    grades: &[Grade],
    samples: usize,
    seed: u64,
) -> Result<usize, AlgebraError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    for s in 0..samples {
        let grade = grades[s % grades.len()];
        let block = oracle.block(grade);
        if block.words.is_empty() {
            continue;
        }
        let mut x: Elem<F> = BTreeMap::new();
        for _ in 0..3 {
            let w = block.words[rng.gen_range(0..block.words.len())].clone();
            x.add_into(&[(w, F::from_i64(rng.gen_range(1..=4)))].into_iter().collect());
        }
        let mut u: Elem<F> = BTreeMap::new();
        let rows = block.ideal.rows();
        for _ in 0..rows.len().min(2) {
            let row = &rows[rng.gen_range(0..rows.len())];
            let c = F::from_i64(rng.gen_range(-3..=3));
            u.add_into(&row.iter().map(|(i, v)| (block.words[*i as usize].clone(), v.mul(&c))).collect());
        }
        violations += usize::from(!model.canon(&u)?.is_zero());
        let normal = model.nf(&x)?;
        violations += usize::from(normal.keys().any(|w| oracle.grade(w) != grade));
        if normal.keys().all(|w| w.len() <= oracle.max_len) {
            let diff = crate::algebra::sub_elem(&normal, &x);
            violations += usize::from(!oracle.zero_test(&diff)?.is_zero());
        }
        let mut y = x.clone();
        y.add_into(&u);
        for e in [&x, &y] {
            violations += usize::from(oracle.zero_test(e)?.is_zero() != model.canon(e)?.is_zero());
        }
    }
    Ok(violations)
}
