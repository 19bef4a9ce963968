//! The classical projective space as an independent oracle.
//!
//! Everything here is built from the commutative formulas in the projection
//! coordinates `p^{ij} = Z^i Z̄^j / |Z|²` and shares no code with the quantum
//! engine. Forms are stored with a commutative monomial in the `p^{ij}` and an
//! ordered word of differentials. Identities between forms are checked
//! pointwise: `Z` and `Z̄` are treated as independent rational vectors `Z`, `W`,
//! and derivatives are computed exactly with first-order jets in one holomorphic
//! and one antiholomorphic direction.
//!
//! The module also counts dimensions of the commutative homogeneous blocks used
//! for the flatness comparison with the quantum quotient.

use crate::scalar::Q;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Generators of the classical calculus.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Gen {
    /// `∂p^{ij}`.
    Del,
    /// `∂̄p^{ij}`.
    DelBar,
}

/// A differential generator with its two indices.
pub type Diff = (Gen, usize, usize);

/// A commutative monomial in the `p^{ij}`, kept sorted.
pub type Mono = Vec<(usize, usize)>;

/// A classical form: sums of monomials times ordered words of differentials.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Form {
    pub terms: BTreeMap<(Mono, Vec<Diff>), Q>,
}

impl Form {
    pub fn term(mono: Mono, diffs: Vec<Diff>, c: Q) -> Form {
        let mut f = Form::default();
        f.add_term(mono, diffs, c);
        f
    }

    pub fn add_term(&mut self, mut mono: Mono, diffs: Vec<Diff>, c: Q) {
        if c.is_zero() {
            return;
        }
        mono.sort_unstable();
        let e = self.terms.entry((mono, diffs)).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&mut self, o: &Form) {
        for ((m, d), c) in &o.terms {
            self.add_term(m.clone(), d.clone(), c.clone());
        }
    }

    pub fn scaled(&self, s: &Q) -> Form {
        let mut out = Form::default();
        for ((m, d), c) in &self.terms {
            out.add_term(m.clone(), d.clone(), c * s);
        }
        out
    }

    /// Product of forms, concatenating the differential words.
    pub fn mul(&self, o: &Form) -> Form {
        let mut out = Form::default();
        for ((m1, d1), c1) in &self.terms {
            for ((m2, d2), c2) in &o.terms {
                let mut m = m1.clone();
                m.extend_from_slice(m2);
                let mut d = d1.clone();
                d.extend_from_slice(d2);
                out.add_term(m, d, c1 * c2);
            }
        }
        out
    }

    /// Number of terms of `self − o`.
    pub fn difference_terms(&self, o: &Form) -> usize {
        let mut d = self.clone();
        d.add(&o.scaled(&-Q::one()));
        d.terms.len()
    }
}

fn q(v: i64) -> Q {
    Q::from_integer(v.into())
}

fn delta(a: usize, b: usize) -> Q {
    if a == b {
        Q::one()
    } else {
        Q::zero()
    }
}

fn p(i: usize, j: usize) -> Form {
    Form::term(vec![(i, j)], Vec::new(), Q::one())
}

fn gen(g: Gen, i: usize, j: usize) -> Form {
    Form::term(Vec::new(), vec![(g, i, j)], Q::one())
}

/// The classical metric, inverse metric and Levi-Civita connection in projection coordinates.
#[derive(Clone, Debug)]
pub struct ClassicalTensors {
    pub n: usize,
    /// `Σ ∂p^{ij} ⊗ ∂̄p^{ji} + ∂̄p^{ij} ⊗ ∂p^{ji}`.
    pub metric: Form,
    /// `g_{+-} = Σ ∂p^{ij} ⊗ ∂̄p^{ji}`.
    pub metric_pm: Form,
    /// `g_{-+} = Σ ∂̄p^{ij} ⊗ ∂p^{ji}`.
    pub metric_mp: Form,
    /// Values of the inverse metric on pairs of generators.
    pub inverse: BTreeMap<(Diff, Diff), Form>,
    /// Values of the connection on generators.
    pub connection: BTreeMap<Diff, Form>,
}

impl ClassicalTensors {
    pub fn new(n: usize) -> Self {
        let mut metric_pm = Form::default();
        let mut metric_mp = Form::default();
        for i in 0..n {
            for j in 0..n {
                metric_pm.add(&gen(Gen::Del, i, j).mul(&gen(Gen::DelBar, j, i)));
                metric_mp.add(&gen(Gen::DelBar, i, j).mul(&gen(Gen::Del, j, i)));
            }
        }
        let mut metric = metric_pm.clone();
        metric.add(&metric_mp);

        let mut inverse = BTreeMap::new();
        let mut connection = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        // (∂p^{ij}, ∂̄p^{kl}) = δ_{il} p^{kj} − p^{ij} p^{kl}
                        let mut pm = p(k, j).scaled(&delta(i, l));
                        pm.add(&p(i, j).mul(&p(k, l)).scaled(&q(-1)));
                        // (∂̄p^{ij}, ∂p^{kl}) = δ_{kj} p^{il} − p^{ij} p^{kl}
                        let mut mp = p(i, l).scaled(&delta(k, j));
                        mp.add(&p(i, j).mul(&p(k, l)).scaled(&q(-1)));
                        inverse.insert(((Gen::Del, i, j), (Gen::DelBar, k, l)), pm);
                        inverse.insert(((Gen::DelBar, i, j), (Gen::Del, k, l)), mp);
                        inverse.insert(((Gen::Del, i, j), (Gen::Del, k, l)), Form::default());
                        inverse.insert(((Gen::DelBar, i, j), (Gen::DelBar, k, l)), Form::default());
                    }
                }
                // ∇∂p^{ij} = Σ_k ∂̄p^{kj} ⊗ ∂p^{ik} − p^{ij} g_{-+}
                // ∇∂̄p^{ij} = Σ_k ∂p^{ik} ⊗ ∂̄p^{kj} − p^{ij} g_{+-}
                let mut del = p(i, j).mul(&metric_mp).scaled(&q(-1));
                let mut delbar = p(i, j).mul(&metric_pm).scaled(&q(-1));
                for k in 0..n {
                    del.add(&gen(Gen::DelBar, k, j).mul(&gen(Gen::Del, i, k)));
                    delbar.add(&gen(Gen::Del, i, k).mul(&gen(Gen::DelBar, k, j)));
                }
                connection.insert((Gen::Del, i, j), del);
                connection.insert((Gen::DelBar, i, j), delbar);
            }
        }
        ClassicalTensors { n, metric, metric_pm, metric_mp, inverse, connection }
    }
}

/// A first-order jet `c0 + c1 ε + c2 η + c3 εη` with `ε² = η² = 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
struct Jet([Q; 4]);

impl Jet {
    fn constant(c: Q) -> Jet {
        Jet([c, Q::zero(), Q::zero(), Q::zero()])
    }
    fn add(&self, o: &Jet) -> Jet {
        Jet(std::array::from_fn(|k| &self.0[k] + &o.0[k]))
    }
    fn mul(&self, o: &Jet) -> Jet {
        let [a0, a1, a2, a3] = &self.0;
        let [b0, b1, b2, b3] = &o.0;
        Jet([a0 * b0, a0 * b1 + a1 * b0, a0 * b2 + a2 * b0, a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0])
    }
    fn inv(&self) -> Jet {
        let [a0, a1, a2, a3] = &self.0;
        let r = a0.recip();
        let r2 = &r * &r;
        let r3 = &r2 * &r;
        Jet([r.clone(), -(a1 * &r2), -(a2 * &r2), q(2) * a1 * a2 * &r3 - a3 * &r2])
    }
}

/// A point of the cone over projective space, with `Z̄` replaced by an independent vector.
///
/// Values of `p`, its first derivatives and its mixed second derivatives are tabulated on construction.
#[derive(Clone, Debug)]
pub struct Point {
    pub z: Vec<Q>,
    pub w: Vec<Q>,
    p: Vec<Q>,
    del: Vec<Q>,
    delbar: Vec<Q>,
    mixed: Vec<Q>,
}

impl Point {
    pub fn new(z: Vec<Q>, w: Vec<Q>) -> Point {
        let n = z.len();
        let s: Q = z.iter().zip(&w).map(|(x, y)| x * y).sum();
        assert!(!s.is_zero(), "sample point on the null cone");
        let mut pt = Point { z, w, p: Vec::new(), del: Vec::new(), delbar: Vec::new(), mixed: Vec::new() };
        for i in 0..n {
            for j in 0..n {
                pt.p.push(pt.p_jet(i, j, None, None).0[0].clone());
                for a in 0..n {
                    pt.del.push(pt.p_jet(i, j, Some(a), None).0[1].clone());
                    pt.delbar.push(pt.p_jet(i, j, None, Some(a)).0[2].clone());
                    for b in 0..n {
                        pt.mixed.push(pt.p_jet(i, j, Some(a), Some(b)).0[3].clone());
                    }
                }
            }
        }
        pt
    }

    /// Deterministic sample points with `Z · W ≠ 0`.
    pub fn samples(n: usize) -> Vec<Point> {
        let z1 = (0..n).map(|k| Q::new((k as i64 + 1).into(), 1.into())).collect();
        let w1 = (0..n).map(|k| Q::new((2 - 3 * (k as i64 % 2)).into(), (k as i64 + 2).into())).collect();
        let z2 = (0..n).map(|k| Q::new((3 - 2 * k as i64).into(), 2.into())).collect();
        let w2 = (0..n).map(|k| Q::new((k as i64 * k as i64 + 2).into(), 3.into())).collect();
        vec![Point::new(z1, w1), Point::new(z2, w2)]
    }

    fn n(&self) -> usize {
        self.z.len()
    }

    /// `p^{ij}` with `Z_a` shifted by `ε` and `W_b` shifted by `η`.
    fn p_jet(&self, i: usize, j: usize, a: Option<usize>, b: Option<usize>) -> Jet {
        let n = self.n();
        let zc = |k: usize| {
            let mut c = Jet::constant(self.z[k].clone());
            if a == Some(k) {
                c.0[1] = Q::one();
            }
            c
        };
        let wc = |k: usize| {
            let mut c = Jet::constant(self.w[k].clone());
            if b == Some(k) {
                c.0[2] = Q::one();
            }
            c
        };
        let mut s = Jet::constant(Q::zero());
        for k in 0..n {
            s = s.add(&zc(k).mul(&wc(k)));
        }
        zc(i).mul(&wc(j)).mul(&s.inv())
    }

    pub fn p(&self, i: usize, j: usize) -> Q {
        self.p[i * self.n() + j].clone()
    }

    /// Value of a differential generator on tangent direction `tau`.
    ///
    /// Directions `0..N` move `Z`, directions `N..2N` move `W`.
    pub fn diff(&self, d: Diff, tau: usize) -> Q {
        let n = self.n();
        let (g, i, j) = d;
        match (g, tau < n) {
            (Gen::Del, true) => self.del[(i * n + j) * n + tau].clone(),
            (Gen::DelBar, false) => self.delbar[(i * n + j) * n + tau - n].clone(),
            _ => Q::zero(),
        }
    }

    /// Value of the two-form `d(d_g p^{ij})` on the pair of directions `(x, y)`.
    pub fn d_diff(&self, d: Diff, x: usize, y: usize) -> Q {
        let n = self.n();
        let (g, i, j) = d;
        let mixed = |a: usize, b: usize| self.mixed[((i * n + j) * n + a) * n + b].clone();
        // d ω (X, Y) = X ω(Y) − Y ω(X) for coordinate directions.
        match (g, x < n, y < n) {
            (Gen::DelBar, true, false) => mixed(x, y - n),
            (Gen::DelBar, false, true) => -mixed(y, x - n),
            (Gen::Del, true, false) => -mixed(x, y - n),
            (Gen::Del, false, true) => mixed(y, x - n),
            _ => Q::zero(),
        }
    }

    fn mono(&self, m: &Mono) -> Q {
        m.iter().fold(Q::one(), |acc, &(i, j)| acc * self.p(i, j))
    }

    /// Value of a form on a tuple of directions, one per differential.
    pub fn eval(&self, f: &Form, dirs: &[usize]) -> Q {
        let mut acc = Q::zero();
        for ((m, d), c) in &f.terms {
            assert_eq!(d.len(), dirs.len(), "form degree does not match the number of directions");
            let mut v = c * self.mono(m);
            for (g, &tau) in d.iter().zip(dirs) {
                if v.is_zero() {
                    break;
                }
                v *= self.diff(*g, tau);
            }
            acc += v;
        }
        acc
    }

    /// Value of the wedge of the first two factors of a form of degree two.
    pub fn eval_wedge(&self, f: &Form, x: usize, y: usize) -> Q {
        self.eval(f, &[x, y]) - self.eval(f, &[y, x])
    }
}

fn directions(n: usize, k: usize) -> Vec<Vec<usize>> {
    crate::algebra::tuples(2 * n, k)
}

/// Number of direction tuples on which two forms of equal degree differ at the sample points.
pub fn pointwise_mismatch(n: usize, a: &Form, b: &Form, degree: usize) -> usize {
    let mut bad = 0;
    for pt in Point::samples(n) {
        for dirs in directions(n, degree) {
            if pt.eval(a, &dirs) != pt.eval(b, &dirs) {
                bad += 1;
            }
        }
    }
    bad
}

/// Residual of the classical relations of the projection coordinates and their differentials.
pub fn relations_residual(n: usize) -> usize {
    let mut bad = 0;
    for pt in Point::samples(n) {
        let trace: Q = (0..n).map(|i| pt.p(i, i)).sum();
        bad += usize::from(trace != Q::one());
        for i in 0..n {
            for j in 0..n {
                let square: Q = (0..n).map(|k| pt.p(i, k) * pt.p(k, j)).sum();
                bad += usize::from(square != pt.p(i, j));
            }
        }
        for tau in 0..2 * n {
            let tr: Q = (0..n).map(|i| pt.diff((Gen::Del, i, i), tau)).sum();
            bad += usize::from(!tr.is_zero());
            for idx in crate::algebra::tuples(n, 4) {
                let (i, j, k, l) = (idx[0], idx[1], idx[2], idx[3]);
                // p^{ij} ∂p^{kl} = p^{il} ∂p^{kj} and p^{ij} ∂̄p^{kl} = p^{kj} ∂̄p^{il}
                let a = pt.p(i, j) * pt.diff((Gen::Del, k, l), tau) - pt.p(i, l) * pt.diff((Gen::Del, k, j), tau);
                let b = pt.p(i, j) * pt.diff((Gen::DelBar, k, l), tau) - pt.p(k, j) * pt.diff((Gen::DelBar, i, l), tau);
                bad += usize::from(!a.is_zero()) + usize::from(!b.is_zero());
            }
        }
    }
    bad
}

impl ClassicalTensors {
    fn generators(&self) -> Vec<Diff> {
        let n = self.n;
        let mut out = Vec::new();
        for g in [Gen::Del, Gen::DelBar] {
            for i in 0..n {
                for j in 0..n {
                    out.push((g, i, j));
                }
            }
        }
        out
    }

    /// Torsion `∧∇ − d` of the connection on every generator, as a count of nonzero values.
    pub fn torsion_residual(&self) -> usize {
        let n = self.n;
        let mut bad = 0;
        for pt in Point::samples(n) {
            for d in self.generators() {
                let nabla = &self.connection[&d];
                for x in 0..2 * n {
                    for y in 0..2 * n {
                        let t = pt.eval_wedge(nabla, x, y) - pt.d_diff(d, x, y);
                        bad += usize::from(!t.is_zero());
                    }
                }
            }
        }
        bad
    }

    /// `∇g` with the flip as braiding, as a count of nonzero values on direction triples.
    pub fn metric_compatibility_residual(&self) -> usize {
        let n = self.n;
        let mut bad = 0;
        for pt in Point::samples(n) {
            for dirs in directions(n, 3) {
                let (x, y, z) = (dirs[0], dirs[1], dirs[2]);
                let mut acc = Q::zero();
                for ((m, d), c) in &self.metric.terms {
                    assert!(m.is_empty() && d.len() == 2);
                    let (alpha, beta) = (d[0], d[1]);
                    // (∇ ⊗ id)(α ⊗ β) + (flip ⊗ id)(α ⊗ ∇β)
                    acc += c * pt.eval(&self.connection[&alpha], &[x, y]) * pt.diff(beta, z);
                    acc += c * pt.diff(alpha, y) * pt.eval(&self.connection[&beta], &[x, z]);
                }
                bad += usize::from(!acc.is_zero());
            }
        }
        bad
    }

    /// The two contractions of the metric with its inverse, compared with the identity on generators.
    pub fn inverse_residual(&self) -> usize {
        let n = self.n;
        let mut bad = 0;
        for omega in self.generators() {
            let mut left = Form::default();
            let mut right = Form::default();
            for ((m, d), c) in &self.metric.terms {
                let (alpha, beta) = (d[0], d[1]);
                let coeff = Form::term(m.clone(), Vec::new(), c.clone());
                // g^{(1)} (g^{(2)}, ω) and (ω, g^{(1)}) g^{(2)}
                left.add(&coeff.mul(&self.inverse[&(beta, omega)]).mul(&gen(alpha.0, alpha.1, alpha.2)));
                right.add(&coeff.mul(&self.inverse[&(omega, alpha)]).mul(&gen(beta.0, beta.1, beta.2)));
            }
            let target = gen(omega.0, omega.1, omega.2);
            bad += pointwise_mismatch(n, &left, &target, 1) + pointwise_mismatch(n, &right, &target, 1);
        }
        bad
    }
}

/// Dense rank over the rationals by plain Gaussian elimination.
fn rank(mut rows: Vec<Vec<Q>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, pivot);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

fn sorted_multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for m in sorted_multisets(n, k - 1) {
        let start = m.last().copied().unwrap_or(0);
        for i in start..n {
            let mut v = m.clone();
            v.push(i);
            out.push(v);
        }
    }
    out
}

/// Dimension of a commutative homogeneous block.
///
/// The block consists of polynomials with `a` letters `f` and `b` letters `v`
/// times a word of differentials with the given pattern (`true` for `∂f`), modulo
/// `Σ_i v^i ∂f^i = 0` and `Σ_i f^i ∂̄v^i = 0` at every differential position.
pub fn commutative_block_dim(n: usize, pattern: &[bool], a: usize, b: usize) -> usize {
    let k = pattern.len();
    let words = crate::algebra::tuples(n, k);
    // A basis monomial: sorted f indices, sorted v indices and the differential indices.
    type Key = (Vec<usize>, Vec<usize>, Vec<usize>);
    let basis: Vec<Key> = sorted_multisets(n, a)
        .into_iter()
        .flat_map(|fs| sorted_multisets(n, b).into_iter().map(move |vs| (fs.clone(), vs)))
        .flat_map(|(fs, vs)| words.iter().map(move |w| (fs.clone(), vs.clone(), w.clone())))
        .collect();
    let index: BTreeMap<&Key, usize> = basis.iter().enumerate().map(|(i, key)| (key, i)).collect();
    let mut rows = Vec::new();
    for pos in 0..k {
        let holomorphic = pattern[pos];
        let (da, db) = if holomorphic { (0, 1) } else { (1, 0) };
        if a < da || b < db {
            continue;
        }
        for fs in sorted_multisets(n, a - da) {
            for vs in sorted_multisets(n, b - db) {
                // The index at `pos` is summed over, so one representative word suffices.
                for w in words.iter().filter(|w| w[pos] == 0) {
                    let mut row = vec![Q::zero(); basis.len()];
                    for i in 0..n {
                        let (mut f2, mut v2, mut w2) = (fs.clone(), vs.clone(), w.clone());
                        if holomorphic {
                            v2.push(i);
                            v2.sort_unstable();
                        } else {
                            f2.push(i);
                            f2.sort_unstable();
                        }
                        w2[pos] = i;
                        row[index[&(f2, v2, w2)]] += Q::one();
                    }
                    rows.push(row);
                }
            }
        }
    }
    basis.len() - rank(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_relations_hold_at_sample_points() {
        for n in 2..=3 {
            assert_eq!(relations_residual(n), 0);
        }
    }

    #[test]
    fn levi_civita_connection_is_torsion_free_and_compatible() {
        for n in 2..=3 {
            let c = ClassicalTensors::new(n);
            assert_eq!(c.torsion_residual(), 0);
            assert_eq!(c.metric_compatibility_residual(), 0);
            assert_eq!(c.inverse_residual(), 0);
        }
    }

    #[test]
    fn perturbed_connection_has_torsion() {
        let mut c = ClassicalTensors::new(2);
        let key = (Gen::Del, 0, 1);
        let doubled = c.connection[&key].scaled(&q(2));
        c.connection.insert(key, doubled);
        assert!(c.torsion_residual() > 0);
    }

    #[test]
    fn block_dims_of_small_cases() {
        // One differential ∂f over f^0 v^1: N polynomials times N indices minus N relations.
        assert_eq!(commutative_block_dim(2, &[true], 0, 1), 2 * 2 - 1);
        assert_eq!(commutative_block_dim(3, &[], 2, 0), 6);
    }
}
