//! The defining representation `V` of `U_q(sl_N)`, its dual, the braidings
//! between them, the duality morphisms and the derived structure operators.
//!
//! Conventions: `Δ(K) = K⊗K`, `Δ(E) = E⊗K + 1⊗E`, `Δ(F) = F⊗1 + K^{-1}⊗F`,
//! `S(E) = -E K^{-1}`, `S(F) = -K F`. On `V` the basis `v_1, …, v_N` is ordered by
//! weight with `v_1` highest, `E_i v_{i+1} = v_i`, `F_i v_i = v_{i+1}`. The dual
//! acts by `ρ*(X) = ρ(S(X))^T` on the dual basis `f^1, …, f^N`.

use crate::leg::{Chain, LegError, LegOp, Slot};
use crate::linalg::{nullspace, rref};
use crate::scalar::{Coeff, Pairing, Param};

type Mat<F> = Vec<Vec<F>>;

/// Errors raised while building representation data.
#[derive(Debug, thiserror::Error)]
pub enum RepError {
    #[error("dimension must be at least 2, got {0}")]
    Dimension(usize),
    #[error("commutant of {0} has dimension {1}, expected 2")]
    Commutant(String, usize),
    #[error("normalization of the braiding {0} is inconsistent or underdetermined")]
    Normalization(String),
    #[error(transparent)]
    Leg(#[from] LegError),
}

/// Weight data of the defining representation.
///
/// Weights are stored as integer vectors in the `ε`-basis; the invariant form is
/// `(x, y) = Σ x_i y_i − (Σ x)(Σ y)/N`, normalized so that `(α, α) = 2`.
#[derive(Clone, Debug)]
pub struct Weights {
    pub n: usize,
}

impl Weights {
    pub fn pair(&self, x: &[i64], y: &[i64]) -> Pairing {
        let dot: i64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
        let sx: i64 = x.iter().sum();
        let sy: i64 = y.iter().sum();
        Pairing::from_integer(dot) - Pairing::new(sx * sy, self.n as i64)
    }
    /// Weight `λ_i` of `v_i` (0-based).
    pub fn lambda(&self, i: usize) -> Vec<i64> {
        let mut w = vec![0; self.n];
        w[i] = 1;
        w
    }
    /// Weight of the `i`-th basis vector of a slot.
    pub fn weight(&self, slot: Slot, i: usize) -> Vec<i64> {
        let w = self.lambda(i);
        match slot {
            Slot::V => w,
            Slot::D => w.into_iter().map(|x| -x).collect(),
        }
    }
    /// `(2ρ, λ_i)` for 0-based `i`.
    pub fn rho2(&self, i: usize) -> Pairing {
        let rho2: Vec<i64> = (0..self.n).map(|k| self.n as i64 - 1 - 2 * k as i64).collect();
        self.pair(&rho2, &self.lambda(i))
    }
    /// `(ω, ω)` with `ω = ω_1`.
    pub fn omega_omega(&self) -> Pairing {
        self.pair(&self.lambda(0), &self.lambda(0))
    }
    /// `(α, α)`.
    pub fn alpha_alpha(&self) -> Pairing {
        let mut a = vec![0; self.n];
        a[0] = 1;
        a[1] = -1;
        self.pair(&a, &a)
    }
    /// `(ω, 2ρ)`.
    pub fn omega_2rho(&self) -> Pairing {
        self.rho2(0)
    }
}

/// Matrices of the Chevalley generators on one module.
#[derive(Clone, Debug)]
pub struct Action<F: Coeff> {
    pub e: Vec<Mat<F>>,
    pub f: Vec<Mat<F>>,
    pub k: Vec<Mat<F>>,
    pub kinv: Vec<Mat<F>>,
}

/// All representation-theoretic operators for one `(N, t)`.
#[derive(Clone, Debug)]
pub struct Rep<F: Coeff> {
    pub param: Param<F>,
    pub n: usize,
    pub weights: Weights,
    pub on_v: Action<F>,
    pub on_d: Action<F>,
    /// `R̂_{V,V}: V⊗V → V⊗V`.
    pub r_vv: LegOp<F>,
    /// `R̂_{V,V*}: V⊗V* → V*⊗V`.
    pub r_vd: LegOp<F>,
    /// `R̂_{V*,V}: V*⊗V → V⊗V*`.
    pub r_dv: LegOp<F>,
    /// `R̂_{V*,V*}`.
    pub r_dd: LegOp<F>,
    pub r_vv_inv: LegOp<F>,
    pub r_vd_inv: LegOp<F>,
    pub r_dv_inv: LegOp<F>,
    pub r_dd_inv: LegOp<F>,
    /// Evaluation `E: V*⊗V → 1`.
    pub ev: LegOp<F>,
    /// Evaluation `E′: V⊗V* → 1`.
    pub ev_p: LegOp<F>,
    /// Coevaluation `C: 1 → V⊗V*`.
    pub coev: LegOp<F>,
    /// Coevaluation `C′: 1 → V*⊗V`.
    pub coev_p: LegOp<F>,
    pub p_vv: LegOp<F>,
    pub q_vv: LegOp<F>,
    pub p_dd: LegOp<F>,
    pub q_dd: LegOp<F>,
    /// `S` on `V⊗V*⊗V`.
    pub s: LegOp<F>,
    pub s_inv: LegOp<F>,
    /// `S̃` on `V*⊗V⊗V*`.
    pub st: LegOp<F>,
    pub st_inv: LegOp<F>,
    /// `T` on `V⊗V*⊗V⊗V*`.
    pub t: LegOp<F>,
    pub t_inv: LegOp<F>,
}

fn zeros<F: Coeff>(n: usize) -> Mat<F> {
    vec![vec![F::zero(); n]; n]
}

fn matmul<F: Coeff>(a: &Mat<F>, b: &Mat<F>) -> Mat<F> {
    let n = a.len();
    let m = b[0].len();
    let mut c = vec![vec![F::zero(); m]; n];
    for i in 0..n {
        for (k, bk) in b.iter().enumerate() {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..m {
                if !bk[j].is_zero() {
                    c[i][j] = c[i][j].add(&a[i][k].mul(&bk[j]));
                }
            }
        }
    }
    c
}

fn transpose<F: Coeff>(a: &Mat<F>) -> Mat<F> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].clone()).collect()).collect()
}

fn scale_mat<F: Coeff>(a: &Mat<F>, c: &F) -> Mat<F> {
    a.iter().map(|r| r.iter().map(|x| x.mul(c)).collect()).collect()
}

fn kron<F: Coeff>(a: &Mat<F>, b: &Mat<F>) -> Mat<F> {
    let (n, m) = (a.len(), b.len());
    let mut c = vec![vec![F::zero(); n * m]; n * m];
    for i in 0..n {
        for j in 0..n {
            if a[i][j].is_zero() {
                continue;
            }
            for k in 0..m {
                for l in 0..m {
                    if !b[k][l].is_zero() {
                        c[i * m + k][j * m + l] = a[i][j].mul(&b[k][l]);
                    }
                }
            }
        }
    }
    c
}

fn add_mat<F: Coeff>(a: &Mat<F>, b: &Mat<F>) -> Mat<F> {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(u, v)| u.add(v)).collect()).collect()
}

fn ident<F: Coeff>(n: usize) -> Mat<F> {
    let mut m = zeros(n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = F::one();
    }
    m
}

impl<F: Coeff> Action<F> {
    fn defining(param: &Param<F>) -> Self {
        let n = param.n;
        let q = param.qpow(Pairing::from_integer(1));
        let qi = q.inv().expect("q is invertible");
        let mut e = Vec::new();
        let mut f = Vec::new();
        let mut k = Vec::new();
        let mut kinv = Vec::new();
        for i in 0..n - 1 {
            let mut em = zeros(n);
            em[i][i + 1] = F::one();
            let mut fm = zeros(n);
            fm[i + 1][i] = F::one();
            let mut km = ident(n);
            km[i][i] = q.clone();
            km[i + 1][i + 1] = qi.clone();
            let mut kim = ident(n);
            kim[i][i] = qi.clone();
            kim[i + 1][i + 1] = q.clone();
            e.push(em);
            f.push(fm);
            k.push(km);
            kinv.push(kim);
        }
        Action { e, f, k, kinv }
    }

    /// The contragredient action through the antipode.
    fn dual(&self) -> Self {
        let minus = F::one().neg();
        let e = self.e.iter().zip(&self.kinv).map(|(e, ki)| transpose(&scale_mat(&matmul(e, ki), &minus))).collect();
        let f = self.f.iter().zip(&self.k).map(|(f, k)| transpose(&scale_mat(&matmul(k, f), &minus))).collect();
        let k = self.kinv.iter().map(transpose).collect();
        let kinv = self.k.iter().map(transpose).collect();
        Action { e, f, k, kinv }
    }

    /// Action on a tensor product through the coproduct, as `(E, F)` lists.
    fn tensor(&self, o: &Action<F>) -> (Vec<Mat<F>>, Vec<Mat<F>>) {
        let r = self.e.len();
        let id_a = ident(self.e[0].len());
        let id_b = ident(o.e[0].len());
        let e = (0..r).map(|i| add_mat(&kron(&self.e[i], &o.k[i]), &kron(&id_a, &o.e[i]))).collect();
        let f = (0..r).map(|i| add_mat(&kron(&self.f[i], &id_b), &kron(&self.kinv[i], &o.f[i]))).collect();
        (e, f)
    }
}

impl<F: Coeff> Rep<F> {
    /// Builds all data for the given parameter.
    pub fn build(param: Param<F>) -> Result<Self, RepError> {
        let n = param.n;
        if n < 2 {
            return Err(RepError::Dimension(n));
        }
        let weights = Weights { n };
        let on_v = Action::defining(&param);
        let on_d = on_v.dual();
        let solve = |a: Slot, b: Slot| solve_braiding(&param, &weights, &on_v, &on_d, a, b);
        let r_vv = solve(Slot::V, Slot::V)?;
        let r_vd = solve(Slot::V, Slot::D)?;
        let r_dv = solve(Slot::D, Slot::V)?;
        let r_dd = solve(Slot::D, Slot::D)?;
        let r_vv_inv = r_vv.inverse()?;
        let r_vd_inv = r_vd.inverse()?;
        let r_dv_inv = r_dv.inverse()?;
        let r_dd_inv = r_dd.inverse()?;
        let ev = LegOp::from_fn(n, vec![Slot::D, Slot::V], vec![], |d| {
            if d[0] == d[1] {
                vec![(vec![], F::one())]
            } else {
                vec![]
            }
        });
        let ev_p = LegOp::from_fn(n, vec![Slot::V, Slot::D], vec![], |d| {
            if d[0] == d[1] {
                vec![(vec![], param.qpow(weights.rho2(d[0])))]
            } else {
                vec![]
            }
        });
        let coev =
            LegOp::from_fn(n, vec![], vec![Slot::V, Slot::D], |_| (0..n).map(|i| (vec![i, i], F::one())).collect());
        let coev_p = LegOp::from_fn(n, vec![], vec![Slot::D, Slot::V], |_| {
            (0..n).map(|i| (vec![i, i], param.qpow(-weights.rho2(i)))).collect()
        });
        let ww = weights.omega_omega();
        let aa = weights.alpha_alpha();
        let p_vv = r_vv.plus_scalar(&param.qpow(ww).neg())?;
        let q_vv = r_vv.plus_scalar(&param.qpow(ww - aa))?;
        let p_dd = r_dd.plus_scalar(&param.qpow(ww).neg())?;
        let q_dd = r_dd.plus_scalar(&param.qpow(ww - aa))?;
        use Slot::{D, V};
        let s = Chain::on(n, vec![V, D, V]).then(&r_vd_inv, 2)?.then(&r_vv, 1)?.then(&r_vd, 2)?.build();
        let s_inv = Chain::on(n, vec![V, D, V]).then(&r_vd_inv, 2)?.then(&r_vv_inv, 1)?.then(&r_vd, 2)?.build();
        let st = Chain::on(n, vec![D, V, D]).then(&r_vd_inv, 1)?.then(&r_dd_inv, 2)?.then(&r_vd, 1)?.build();
        let st_inv = Chain::on(n, vec![D, V, D]).then(&r_vd_inv, 1)?.then(&r_dd, 2)?.then(&r_vd, 1)?.build();
        let t = Chain::on(n, vec![V, D, V, D])
            .then(&r_vd_inv, 2)?
            .then(&r_dd_inv, 3)?
            .then(&r_vv, 1)?
            .then(&r_vd, 2)?
            .build();
        let t_inv = Chain::on(n, vec![V, D, V, D])
            .then(&r_vd_inv, 2)?
            .then(&r_vv_inv, 1)?
            .then(&r_dd, 3)?
            .then(&r_vd, 2)?
            .build();
        Ok(Rep {
            param,
            n,
            weights,
            on_v,
            on_d,
            r_vv,
            r_vd,
            r_dv,
            r_dd,
            r_vv_inv,
            r_vd_inv,
            r_dv_inv,
            r_dd_inv,
            ev,
            ev_p,
            coev,
            coev_p,
            p_vv,
            q_vv,
            p_dd,
            q_dd,
            s,
            s_inv,
            st,
            st_inv,
            t,
            t_inv,
        })
    }

    /// `q^p`.
    pub fn q(&self, p: Pairing) -> F {
        self.param.qpow(p)
    }
    pub fn ww(&self) -> Pairing {
        self.weights.omega_omega()
    }
    pub fn aa(&self) -> Pairing {
        self.weights.alpha_alpha()
    }
    pub fn w2r(&self) -> Pairing {
        self.weights.omega_2rho()
    }

    /// Braiding `R̂_{a,b}: a⊗b → b⊗a`.
    pub fn braiding(&self, a: Slot, b: Slot) -> &LegOp<F> {
        match (a, b) {
            (Slot::V, Slot::V) => &self.r_vv,
            (Slot::V, Slot::D) => &self.r_vd,
            (Slot::D, Slot::V) => &self.r_dv,
            (Slot::D, Slot::D) => &self.r_dd,
        }
    }

    /// Inverse braiding `R̂_{a,b}^{-1}: b⊗a → a⊗b`.
    pub fn braiding_inv(&self, a: Slot, b: Slot) -> &LegOp<F> {
        match (a, b) {
            (Slot::V, Slot::V) => &self.r_vv_inv,
            (Slot::V, Slot::D) => &self.r_vd_inv,
            (Slot::D, Slot::V) => &self.r_dv_inv,
            (Slot::D, Slot::D) => &self.r_dd_inv,
        }
    }

    /// Looks up an operator by its dump name.
    pub fn named(&self, name: &str) -> Option<&LegOp<F>> {
        Some(match name {
            "R_VV" => &self.r_vv,
            "R_VVd" => &self.r_vd,
            "R_VdV" => &self.r_dv,
            "R_VdVd" => &self.r_dd,
            "Rinv_VV" => &self.r_vv_inv,
            "Rinv_VVd" => &self.r_vd_inv,
            "Rinv_VdV" => &self.r_dv_inv,
            "Rinv_VdVd" => &self.r_dd_inv,
            "E" => &self.ev,
            "Ep" => &self.ev_p,
            "C" => &self.coev,
            "Cp" => &self.coev_p,
            "P_VV" => &self.p_vv,
            "Q_VV" => &self.q_vv,
            "P_VdVd" => &self.p_dd,
            "Q_VdVd" => &self.q_dd,
            "S" => &self.s,
            "Sinv" => &self.s_inv,
            "St" => &self.st,
            "Stinv" => &self.st_inv,
            "T" => &self.t,
            "Tinv" => &self.t_inv,
            _ => return None,
        })
    }

    /// Names accepted by [`Rep::named`].
    pub const OPERATOR_NAMES: [&'static str; 22] = [
        "R_VV",
        "R_VVd",
        "R_VdV",
        "R_VdVd",
        "Rinv_VV",
        "Rinv_VVd",
        "Rinv_VdV",
        "Rinv_VdVd",
        "E",
        "Ep",
        "C",
        "Cp",
        "P_VV",
        "Q_VV",
        "P_VdVd",
        "Q_VdVd",
        "S",
        "Sinv",
        "St",
        "Stinv",
        "T",
        "Tinv",
    ];

    /// Generator action on one module.
    pub fn action(&self, slot: Slot) -> &Action<F> {
        match slot {
            Slot::V => &self.on_v,
            Slot::D => &self.on_d,
        }
    }

    /// Residual of the intertwining equations `X Δ(g) = Δ(g) X` for an operator between two-slot products.
    pub fn intertwining_residual(&self, op: &LegOp<F>) -> usize {
        let (a, b) = (op.sig_in(), op.sig_out());
        let mats_in = self.product_action(a);
        let mats_out = self.product_action(b);
        let mut bad = 0;
        for (gi, go) in mats_in.iter().zip(&mats_out) {
            let x = to_dense(op);
            let lhs = matmul(&x, gi);
            let rhs = matmul(go, &x);
            bad += lhs.iter().zip(&rhs).flat_map(|(u, v)| u.iter().zip(v)).filter(|(u, v)| u != v).count();
        }
        bad
    }

    /// Generator matrices (all `E_i` then all `F_i`) on a tensor product of slots; the empty
    /// product is the trivial module where they act by zero.
    fn product_action(&self, sig: &[Slot]) -> Vec<Mat<F>> {
        if sig.is_empty() {
            return vec![vec![vec![F::zero()]]; 2 * (self.n - 1)];
        }
        let mut acc = self.action(sig[0]).clone();
        for s in &sig[1..] {
            let o = self.action(*s);
            let (e, f) = acc.tensor(o);
            let k = acc.k.iter().zip(&o.k).map(|(a, b)| kron(a, b)).collect();
            let kinv = acc.kinv.iter().zip(&o.kinv).map(|(a, b)| kron(a, b)).collect();
            acc = Action { e, f, k, kinv };
        }
        acc.e.into_iter().chain(acc.f).collect()
    }
}

#[allow(clippy::needless_range_loop)]
fn to_dense<F: Coeff>(op: &LegOp<F>) -> Mat<F> {
    let n = op.dim();
    let rows = n.pow(op.sig_out().len() as u32);
    let cols = n.pow(op.sig_in().len() as u32);
    let mut m = vec![vec![F::zero(); cols]; rows];
    for j in 0..cols {
        for (r, c) in op.column(j) {
            m[*r as usize][j] = c.clone();
        }
    }
    m
}

/// Solves for the braiding `R̂_{a,b}: a⊗b → b⊗a` as the intertwiner normalized by
/// `R̂(v_λ ⊗ v_{w0 μ}) = q^{(λ, w0 μ)} v_{w0 μ} ⊗ v_λ`, with `v_λ` the highest weight vector of
/// `a` and `v_{w0 μ}` the lowest weight vector of `b`.
#[allow(clippy::needless_range_loop)]
fn solve_braiding<F: Coeff>(
    param: &Param<F>,
    w: &Weights,
    on_v: &Action<F>,
    on_d: &Action<F>,
    a: Slot,
    b: Slot,
) -> Result<LegOp<F>, RepError> {
    let n = param.n;
    let act = |s: Slot| if s == Slot::V { on_v } else { on_d };
    let (e_ab, f_ab) = act(a).tensor(act(b));
    let (e_ba, f_ba) = act(b).tensor(act(a));
    let wsum = |s1: Slot, i: usize, s2: Slot, j: usize| -> Vec<i64> {
        w.weight(s1, i).iter().zip(w.weight(s2, j)).map(|(x, y)| x + y).collect()
    };
    // Unknown entries X[(k,l),(i,j)] restricted to weight-preserving positions.
    let mut vars: Vec<(usize, usize)> = Vec::new();
    let mut var_of = std::collections::HashMap::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    if wsum(a, i, b, j) == wsum(b, k, a, l) {
                        var_of.insert((k * n + l, i * n + j), vars.len());
                        vars.push((k * n + l, i * n + j));
                    }
                }
            }
        }
    }
    let nv = vars.len();
    let dim = n * n;
    let mut eqs: Vec<Vec<F>> = Vec::new();
    for (g_in, g_out) in e_ab.iter().zip(&e_ba).chain(f_ab.iter().zip(&f_ba)) {
        for r in 0..dim {
            for c in 0..dim {
                let mut row = vec![F::zero(); nv];
                let mut any = false;
                for s in 0..dim {
                    if !g_in[s][c].is_zero() {
                        if let Some(&v) = var_of.get(&(r, s)) {
                            row[v] = row[v].add(&g_in[s][c]);
                            any = true;
                        }
                    }
                    if !g_out[r][s].is_zero() {
                        if let Some(&v) = var_of.get(&(s, c)) {
                            row[v] = row[v].sub(&g_out[r][s]);
                            any = true;
                        }
                    }
                }
                if any && row.iter().any(|x| !x.is_zero()) {
                    eqs.push(row);
                }
            }
        }
    }
    let label = format!("{}⊗{}", a.name(), b.name());
    let basis = nullspace(eqs, nv);
    if basis.len() != 2 {
        return Err(RepError::Commutant(label, basis.len()));
    }
    let hi = match a {
        Slot::V => 0,
        Slot::D => n - 1,
    };
    let lo = match b {
        Slot::V => n - 1,
        Slot::D => 0,
    };
    let input = hi * n + lo;
    let target_out = lo * n + hi;
    let coef = param.qpow(w.pair(&w.weight(a, hi), &w.weight(b, lo)));
    // Conditions: Σ_m c_m X_m[r, input] = target[r] for every output r.
    let mut aug: Vec<Vec<F>> = Vec::new();
    for r in 0..dim {
        let mut row: Vec<F> =
            basis.iter().map(|x| var_of.get(&(r, input)).map(|&v| x[v].clone()).unwrap_or_else(F::zero)).collect();
        row.push(if r == target_out { coef.clone() } else { F::zero() });
        if row.iter().any(|x| !x.is_zero()) {
            aug.push(row);
        }
    }
    let pivots = rref(&mut aug);
    if pivots != vec![0, 1] {
        return Err(RepError::Normalization(label));
    }
    let c0 = aug[0][2].clone();
    let c1 = aug[1][2].clone();
    let mut entries: std::collections::HashMap<usize, Vec<(usize, F)>> = std::collections::HashMap::new();
    for (v, &(out, inp)) in vars.iter().enumerate() {
        let val = basis[0][v].mul(&c0).add(&basis[1][v].mul(&c1));
        if !val.is_zero() {
            entries.entry(inp).or_default().push((out, val));
        }
    }
    Ok(LegOp::from_fn(n, vec![a, b], vec![b, a], |d| {
        entries
            .get(&(d[0] * n + d[1]))
            .map(|col| col.iter().map(|(out, c)| (vec![out / n, out % n], c.clone())).collect())
            .unwrap_or_default()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Scalar, Q};

    #[test]
    fn weight_data() {
        let w = Weights { n: 2 };
        assert_eq!(w.rho2(0), Pairing::from_integer(1));
        assert_eq!(w.rho2(1), Pairing::from_integer(-1));
        assert_eq!(w.omega_omega(), Pairing::new(1, 2));
        assert_eq!(w.omega_2rho(), Pairing::from_integer(1));
        let w3 = Weights { n: 3 };
        assert_eq!(w3.omega_omega(), Pairing::new(2, 3));
        assert_eq!(w3.omega_2rho(), Pairing::from_integer(2));
        assert_eq!(w3.alpha_alpha(), Pairing::from_integer(2));
    }

    #[test]
    fn braiding_normalized_on_highest_vector() {
        let rep = Rep::build(Param::symbolic(2)).unwrap();
        assert_eq!(rep.r_vv.entry(&[0, 0], &[0, 0]), Scalar::t());
        assert_eq!(rep.ev_p.entry(&[], &[0, 0]), Scalar::t_pow(2));
    }

    #[test]
    fn braidings_intertwine() {
        let rep = Rep::build(Param::rational(3, Q::new(2.into(), 3.into()))).unwrap();
        for op in [&rep.r_vv, &rep.r_vd, &rep.r_dv, &rep.r_dd, &rep.ev, &rep.ev_p, &rep.coev, &rep.coev_p] {
            assert_eq!(rep.intertwining_residual(op), 0);
        }
    }
}
