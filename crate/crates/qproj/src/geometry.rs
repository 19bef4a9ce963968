//! The quantum metric, its inverse pairing, the connections and the generalized
//! braiding, together with the identities relating them.
//!
//! Elements of tensor powers of `Ω` are formal words with several differential
//! symbols. Bimodule maps are evaluated on a chosen pair of adjacent factors after
//! moving the algebra coefficients between them to the left, which is legitimate
//! because every such map is a bimodule map. Maps that are only left module maps
//! in one leg, such as `∇ ⊗ id`, are evaluated on the coefficient-free
//! representative of the metric, whose words have no coefficients at all.

use crate::algebra::{Elem, Kind, Letter};
use crate::calculus::{CalcError, Calculus, Space, Sym, ZeroTest};
use crate::expr::{mul_elem, Expr};
use crate::leg::{LegOp, Module};
use crate::rep::Rep;
use crate::scalar::Coeff;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

/// Deliberate corruptions used as negative controls.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Perturb {
    #[default]
    None,
    /// Doubles the metric term of `∇_-`.
    Connection,
    /// Doubles `σ_{--}`.
    Braiding,
    /// Doubles `g_{-+}` inside `g`.
    Metric,
}

/// Marker separating the two factors of an overcalculus tensor word.
const SPLIT: Letter = Letter::MAX;

/// Metric, pairing, connection and braiding tables over a calculus.
pub struct Geometry<F: Coeff> {
    pub calc: Arc<Calculus<F>>,
    pub rep: Arc<Rep<F>>,
    pub g_pm: Elem<F>,
    pub g_mp: Elem<F>,
    pub g: Elem<F>,
    pairing: HashMap<(u8, u8), Elem<F>>,
    nabla: HashMap<u8, Elem<F>>,
    sigma: HashMap<(u8, u8), Elem<F>>,
}

fn scalar_family<F: Coeff>(n: usize, e: &Elem<F>) -> Expr<F> {
    let mut x = Expr::zero(n, Vec::new());
    if !e.is_empty() {
        x.comps.insert(0, e.clone());
    }
    x
}

/// The only component of a family without free indices.
fn scalar_part<F: Coeff>(x: &Expr<F>) -> Elem<F> {
    x.comps.get(&0).cloned().unwrap_or_default()
}

impl<F: Coeff> Geometry<F> {
    pub fn new(calc: Arc<Calculus<F>>, perturb: Perturb) -> Result<Self, CalcError> {
        let rep = calc.model.rep.clone();
        let n = calc.n;
        let q = |p| rep.q(p);
        let (ww, aa, w2r) = (rep.ww(), rep.aa(), rep.w2r());
        let one = F::one();
        let (p, dp, dbp) = (calc.p(), calc.dp(), calc.dbp());
        let metric =
            |x: &Expr<F>| -> Result<Elem<F>, CalcError> { Ok(scalar_part(&x.apply(&rep.ev, 2)?.apply(&rep.ev_p, 1)?)) };
        let g_pm = metric(&dp.mul(&dbp))?;
        let g_mp = metric(&dbp.mul(&dp))?;
        let mut g = g_pm.clone();
        let mp_weight = if perturb == Perturb::Metric { F::from_i64(2) } else { one.clone() };
        g.add_into(&g_mp.scaled(&mp_weight));
        let gpm = scalar_family(n, &g_pm);
        let gmp = scalar_family(n, &g_mp);

        let mut pairing = HashMap::new();
        let pm =
            p.apply(&rep.coev, 3)?.apply(&rep.s, 1)?.scale(&q(aa - ww - w2r)).sub(&p.mul(&p).scale(&q(aa - w2r)))?;
        let mp = p.apply(&rep.coev_p, 2)?.sub(&p.mul(&p).scale(&q(-w2r)))?;

        let mut nabla = HashMap::new();
        let metric_weight = if perturb == Perturb::Connection { F::from_i64(2) } else { one.clone() };
        let nm = dp.mul(&dbp).apply(&rep.ev, 2)?.sub(&p.mul(&gpm).scale(&q(-w2r).mul(&metric_weight)))?;
        let np =
            dbp.mul(&dp).apply(&rep.t, 1)?.apply(&rep.ev, 2)?.scale(&q(aa)).sub(&p.mul(&gmp).scale(&q(aa - w2r)))?;

        let mut sigma = HashMap::new();
        let mm_weight = if perturb == Perturb::Braiding { F::from_i64(2) } else { one.clone() };
        let spp = dp.mul(&dp).apply(&rep.t, 1)?.scale(&q(aa));
        let smm = dbp.mul(&dbp).apply(&rep.t, 1)?.scale(&q(-aa).mul(&mm_weight));
        let spm = dbp
            .mul(&dp)
            .apply(&rep.st_inv, 2)?
            .apply(&rep.s, 1)?
            .scale(&q(aa * 2 - ww * 2))
            .sub(&p.mul(&gmp).mul(&p).scale(&q(aa).sub(&one).mul(&q(aa - w2r))))?;
        let smp = dp
            .mul(&dbp)
            .apply(&rep.st, 2)?
            .apply(&rep.s_inv, 1)?
            .scale(&q(ww * 2 - aa * 2))
            .sub(&p.mul(&gpm).mul(&p).scale(&q(-aa).sub(&one).mul(&q(-w2r))))?;

        for i in 0..n {
            for j in 0..n {
                let (a_p, a_m) = (calc.sym(Sym::Dp, i, j), calc.sym(Sym::Dbp, i, j));
                nabla.insert(a_p, np.component(&[i, j]));
                nabla.insert(a_m, nm.component(&[i, j]));
                for k in 0..n {
                    for l in 0..n {
                        let (b_p, b_m) = (calc.sym(Sym::Dp, k, l), calc.sym(Sym::Dbp, k, l));
                        let idx = [i, j, k, l];
                        pairing.insert((a_p, b_m), pm.component(&idx));
                        pairing.insert((a_m, b_p), mp.component(&idx));
                        sigma.insert((a_p, b_p), spp.component(&idx));
                        sigma.insert((a_m, b_m), smm.component(&idx));
                        sigma.insert((a_p, b_m), spm.component(&idx));
                        sigma.insert((a_m, b_p), smp.component(&idx));
                    }
                }
            }
        }
        Ok(Geometry { calc, rep, g_pm, g_mp, g, pairing, nabla, sigma })
    }

    pub fn n(&self) -> usize {
        self.calc.n
    }

    /// `g` as a family without free indices.
    pub fn g_expr(&self) -> Expr<F> {
        scalar_family(self.n(), &self.g)
    }
    pub fn g_pm_expr(&self) -> Expr<F> {
        scalar_family(self.n(), &self.g_pm)
    }
    pub fn g_mp_expr(&self) -> Expr<F> {
        scalar_family(self.n(), &self.g_mp)
    }

    /// The inverse metric on a pair of generators.
    pub fn pair_table(&self, a: u8, b: u8) -> Elem<F> {
        self.pairing.get(&(a, b)).cloned().unwrap_or_default()
    }

    /// The inverse metric applied to the differentials `k`, `k + 1`.
    pub fn pair(&self, x: &Elem<F>, k: usize) -> Elem<F> {
        self.calc.apply_pair(x, k, |a, b| self.pair_table(a, b))
    }

    /// The generalized braiding applied to the differentials `k`, `k + 1`.
    pub fn sigma(&self, x: &Elem<F>, k: usize) -> Elem<F> {
        self.calc.apply_pair(x, k, |a, b| self.sigma[&(a, b)].clone())
    }

    /// The generalized braiding, with the coefficients between the two factors moved right instead of left.
    pub fn sigma_right(&self, x: &Elem<F>, k: usize) -> Elem<F> {
        let moved = self.calc.pull_right(x, k + 1);
        self.calc.apply_pair(&moved, k, |a, b| self.sigma[&(a, b)].clone())
    }

    /// `∇` of a one-form generator.
    pub fn nabla_generator(&self, s: u8) -> Elem<F> {
        self.nabla[&s].clone()
    }

    /// `∇` on one-forms: normalizes to left module form and applies the Leibniz rule.
    pub fn nabla(&self, x: &Elem<F>) -> Elem<F> {
        let calc = &self.calc;
        let mut out: Elem<F> = BTreeMap::new();
        for (w, c) in calc.pull_left(x, 0) {
            let Some(pos) = w.iter().position(|&s| calc.kind_of(s).is_differential()) else { continue };
            let head: Elem<F> = [(w[..pos].to_vec(), c)].into_iter().collect();
            let gen: Elem<F> = [(vec![w[pos]], F::one())].into_iter().collect();
            out.add_into(&mul_elem(&calc.d(&head), &gen));
            out.add_into(&mul_elem(&head, &self.nabla_generator(w[pos])));
        }
        out
    }

    /// `∇` applied to the differential `k` of coefficient-free words.
    pub fn nabla_at(&self, x: &Elem<F>, k: usize) -> Elem<F> {
        self.calc.apply_single(x, k, |s| self.nabla_generator(s))
    }

    /// The exterior differential applied to the differential `k` of coefficient-free words.
    pub fn d_at(&self, x: &Elem<F>, k: usize) -> Elem<F> {
        let calc = &self.calc;
        calc.apply_single(x, k, |s| calc.d(&[(vec![s], F::one())].into_iter().collect()))
    }

    /// `∇g = (∇ ⊗ id)g + (σ ⊗ id)(id ⊗ ∇)g` on the coefficient-free representative.
    pub fn nabla_g_terms(&self, g: &Elem<F>) -> (Elem<F>, Elem<F>) {
        let first = self.nabla_at(g, 0);
        let second = self.sigma(&self.nabla_at(g, 1), 0);
        (first, second)
    }

    /// Overcalculus maps `Φ` and `Ψ` on a pair of generators, for the descent checks.
    fn phi_psi(&self, d1: Letter, d2: Letter) -> Elem<F> {
        let m = &self.calc.model;
        let (i, j) = (m.index(d1), m.index(d2));
        let (k1, k2) = (m.kind(d1), m.kind(d2));
        let mut out: Elem<F> = BTreeMap::new();
        match (k1, k2) {
            (Kind::DF, Kind::DV) => {
                let c = self.rep.coev.entry(&[i, j], &[]);
                if !c.is_zero() {
                    out.insert(Vec::new(), c);
                }
                out.add_into(
                    &[(vec![m.letter(Kind::F, i), m.letter(Kind::V, j)], F::one().neg())].into_iter().collect(),
                );
            }
            (Kind::DV, Kind::DF) => {
                let c = self.rep.coev_p.entry(&[i, j], &[]);
                if !c.is_zero() {
                    out.insert(Vec::new(), c);
                }
                let w = self.rep.q(-self.rep.w2r());
                out.add_into(&[(vec![m.letter(Kind::V, i), m.letter(Kind::F, j)], w.neg())].into_iter().collect());
            }
            _ => {}
        }
        out
    }

    /// Moves the algebra letters of a one-form of the overcalculus to the right of its differential.
    fn right_normal(&self, w: &[Letter]) -> Elem<F> {
        let m = &self.calc.model;
        let rep = &self.rep;
        let (ww, aa) = (rep.ww(), rep.aa());
        let Some(pos) = w.iter().position(|&l| m.kind(l).is_differential()) else {
            return [(w.to_vec(), F::one())].into_iter().collect();
        };
        if pos == 0 {
            return [(w.to_vec(), F::one())].into_iter().collect();
        }
        let x = w[pos - 1];
        let d = w[pos];
        // x^k d^l = s^{-1} Σ (M^{-1})^{kl}_{ij} d^i x^j, inverting the right module rules.
        let (inv, s): (&LegOp<F>, F) = match (m.kind(d), m.kind(x)) {
            (Kind::DF, Kind::F) => (&rep.r_vv_inv, rep.q(aa - ww)),
            (Kind::DF, Kind::V) => (&rep.r_vd, rep.q(-ww)),
            (Kind::DV, Kind::F) => (&rep.r_vd_inv, rep.q(ww)),
            _ => (&rep.r_dd, rep.q(ww - aa)),
        };
        let s_inv = s.inv().expect("q is invertible");
        let (k, l) = (m.index(x), m.index(d));
        let n = self.n();
        let mut out: Elem<F> = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                let c = inv.entry(&[k, l], &[i, j]);
                if c.is_zero() {
                    continue;
                }
                let mut v = w[..pos - 1].to_vec();
                v.push(m.letter(m.kind(d), i));
                v.push(m.letter(m.kind(x), j));
                v.extend_from_slice(&w[pos + 1..]);
                for (v2, c2) in self.right_normal(&v) {
                    out.add_into(&[(v2, c2.mul(&c).mul(&s_inv))].into_iter().collect());
                }
            }
        }
        out
    }

    /// Evaluates `Φ − Ψ` (or `Φ − q^{-(ω,2ρ)} Ψ` on the mixed order) on an overcalculus tensor word.
    fn descent_eval(&self, w: &[Letter]) -> Result<Elem<F>, CalcError> {
        let m = &self.calc.model;
        let split = w.iter().position(|&l| l == SPLIT).expect("split marker");
        let mut out: Elem<F> = BTreeMap::new();
        for (left, c1) in m.nf_word(&w[..split])? {
            let (a, d1) = m.split(&left);
            for (right, c2) in self.right_normal(&w[split + 1..]) {
                let d2 = right[0];
                let value = self.phi_psi(d1[0], d2);
                let head: Elem<F> = [(a.to_vec(), c1.mul(&c2))].into_iter().collect();
                let tail: Elem<F> = [(right[1..].to_vec(), F::one())].into_iter().collect();
                out.add_into(&mul_elem(&mul_elem(&head, &value), &tail));
            }
        }
        Ok(out)
    }

    /// Images of the relations of the overcalculus under `Φ_{+-} − Ψ_{+-}` (`plus_minus`) or `Φ_{-+} − q^{-(ω,2ρ)}Ψ_{-+}`.
    ///
    /// The maps descend exactly when every returned overcalculus element vanishes.
    pub fn descent_images(&self, plus_minus: bool) -> Result<Vec<Elem<F>>, CalcError> {
        let m = self.calc.model.clone();
        let n = self.n();
        let rep = &self.rep;
        use crate::leg::Slot::{D, V};
        let l = |k: Kind, i: usize| m.letter(k, i);
        let (first, second) = if plus_minus { (Kind::DF, Kind::DV) } else { (Kind::DV, Kind::DF) };
        let first_slot = if plus_minus { V } else { D };
        let second_slot = first_slot.dual();
        let mut families = Vec::new();
        if plus_minus {
            // E_{12} (v ∂f ⊗ ∂̄v) and E'_{23} (∂f ⊗ f ∂̄v)
            let a =
                Expr::<F>::family(n, vec![D, V, D], |x| vec![l(Kind::V, x[0]), l(first, x[1]), SPLIT, l(second, x[2])]);
            families.push(a.map_words(|w| self.descent_eval(w).unwrap_or_default()).apply(&rep.ev, 1)?);
            let b =
                Expr::<F>::family(n, vec![V, V, D], |x| vec![l(first, x[0]), SPLIT, l(Kind::F, x[1]), l(second, x[2])]);
            families.push(b.map_words(|w| self.descent_eval(w).unwrap_or_default()).apply(&rep.ev_p, 2)?);
        } else {
            // E'_{12} (f ∂̄v ⊗ ∂f) and E_{23} (∂̄v ⊗ v ∂f)
            let a =
                Expr::<F>::family(n, vec![V, D, V], |x| vec![l(Kind::F, x[0]), l(first, x[1]), SPLIT, l(second, x[2])]);
            families.push(a.map_words(|w| self.descent_eval(w).unwrap_or_default()).apply(&rep.ev_p, 1)?);
            let b =
                Expr::<F>::family(n, vec![D, D, V], |x| vec![l(first, x[0]), SPLIT, l(Kind::V, x[1]), l(second, x[2])]);
            families.push(b.map_words(|w| self.descent_eval(w).unwrap_or_default()).apply(&rep.ev, 2)?);
        }
        // Balancing over the projection algebra: (ω p ⊗ η) and (ω ⊗ p η) agree.
        let sig = vec![first_slot, V, D, second_slot];
        let lhs = Expr::<F>::family(n, sig.clone(), |x| {
            vec![l(first, x[0]), l(Kind::F, x[1]), l(Kind::V, x[2]), SPLIT, l(second, x[3])]
        });
        let rhs = Expr::<F>::family(n, sig, |x| {
            vec![l(first, x[0]), SPLIT, l(Kind::F, x[1]), l(Kind::V, x[2]), l(second, x[3])]
        });
        families.push(lhs.sub(&rhs)?.map_words(|w| self.descent_eval(w).unwrap_or_default()));
        Ok(families.into_iter().flat_map(|f| f.comps.into_values()).collect())
    }

    /// Differences between the descended maps restricted to `Ω ⊗ Ω` and the inverse metric, as overcalculus elements.
    pub fn pairing_restriction_images(&self) -> Result<Vec<Elem<F>>, CalcError> {
        let calc = &self.calc;
        let n = self.n();
        let rep = &self.rep;
        let (aa, w2r) = (rep.aa(), rep.w2r());
        let mut out = Vec::new();
        for (a, b, scale) in [(Sym::Dp, Sym::Dbp, rep.q(aa - w2r)), (Sym::Dbp, Sym::Dp, F::one())] {
            for idx in crate::algebra::tuples(n, 4) {
                let (sa, sb) = (calc.sym(a, idx[0], idx[1]), calc.sym(b, idx[2], idx[3]));
                let expected = calc.to_gamma(&self.pair_table(sa, sb));
                let half = |s: u8| -> Vec<Letter> {
                    let g = calc.to_gamma(&[(vec![s], F::one())].into_iter().collect());
                    g.into_keys().next().unwrap()
                };
                let mut w = half(sa);
                w.push(SPLIT);
                w.extend(half(sb));
                let got = self.descent_eval(&w)?.scaled(&scale);
                out.push(crate::algebra::sub_elem(&got, &expected));
            }
        }
        Ok(out)
    }

    /// Zero test in a quotient, as a residual count.
    pub fn residual(&self, space: Space, x: &Expr<F>) -> Result<usize, CalcError> {
        Ok(self.calc.zero_test_expr(space, x)?.residual())
    }

    /// Zero test of a single element.
    pub fn test(&self, space: Space, x: &Elem<F>) -> Result<ZeroTest, CalcError> {
        self.calc.zero_test(space, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Model;
    use crate::scalar::{Param, Q};

    fn geometry(perturb: Perturb) -> Geometry<Q> {
        let rep = Arc::new(Rep::build(Param::rational(2, Q::new(1.into(), 2.into()))).unwrap());
        let model = Arc::new(Model::new(rep).unwrap());
        let calc = Arc::new(Calculus::new(model, 4).unwrap());
        Geometry::new(calc, perturb).unwrap()
    }

    #[test]
    fn metric_is_nonzero_and_real() {
        let g = geometry(Perturb::None);
        assert!(!g.test(Space::Tensor, &g.g).unwrap().is_zero());
        let diff = crate::algebra::sub_elem(&g.calc.star(&g.g), &g.g);
        assert!(g.test(Space::Tensor, &diff).unwrap().is_zero());
    }

    #[test]
    fn metric_is_symmetric_and_perturbation_is_caught() {
        assert!(geometry(Perturb::None).test(Space::Wedge, &geometry(Perturb::None).g).unwrap().is_zero());
        let bad = geometry(Perturb::Metric);
        assert!(!bad.test(Space::Wedge, &bad.g).unwrap().is_zero());
    }

    #[test]
    fn descents_hold() {
        let g = geometry(Perturb::None);
        let mut images = g.descent_images(true).unwrap();
        images.extend(g.descent_images(false).unwrap());
        images.extend(g.pairing_restriction_images().unwrap());
        for e in images {
            assert!(g.calc.zero_test_gamma(Space::Tensor, &e).unwrap().is_zero());
        }
    }
}
