//! The identity catalog and its runner.
//!
//! Every entry names one identity, the suite it belongs to and a short
//! descriptive anchor. Evaluating an entry produces a residual, the number of
//! surviving terms or coordinates, which is zero exactly when the identity holds.
//! Negative controls are entries whose residual is expected to be nonzero.
//! Non-degeneracy guards report a residual of one when the guarded element
//! vanishes.

use crate::algebra::{AlgebraError, Elem, Kind, Letter, Model};
use crate::calculus::{CalcError, Calculus, Space, Sym};
use crate::classical::{self, ClassicalTensors, Form, Gen};
use crate::expr::Expr;
use crate::geometry::{Geometry, Perturb};
use crate::leg::{Chain, LegError, LegOp, Module, Slot};
use crate::oracle::{self, Grade, Oracle};
use crate::rep::{Rep, RepError};
use crate::scalar::{Coeff, Param, Q};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::{Arc, LazyLock, Mutex};
use std::time::Instant;
use thiserror::Error;

/// Groups of identities selectable on the command line, plus the always-on guards.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Guards,
    Operators,
    Algebra,
    Metric,
    Connection,
    Bimodule,
    Classical,
}

impl Suite {
    /// Suites that can be requested explicitly.
    pub const SELECTABLE: [Suite; 6] =
        [Suite::Operators, Suite::Algebra, Suite::Metric, Suite::Connection, Suite::Bimodule, Suite::Classical];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Guards => "guards",
            Suite::Operators => "operators",
            Suite::Algebra => "algebra",
            Suite::Metric => "metric",
            Suite::Connection => "connection",
            Suite::Bimodule => "bimodule",
            Suite::Classical => "classical",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::SELECTABLE.into_iter().chain([Suite::Guards]).find(|x| x.name() == s)
    }

    /// Whether the suite needs the presented algebra and calculus.
    fn needs_calculus(self) -> bool {
        !matches!(self, Suite::Operators | Suite::Classical)
    }
}

/// Equality backend for the tensor powers of the one-forms.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Engine {
    /// Brute-force truncated ideal.
    Oracle,
    /// Rewriting normal forms.
    #[default]
    Rewrite,
    /// Both, failing on disagreement; rewriting alone beyond the oracle truncation.
    Cross,
}

impl Engine {
    pub fn parse(s: &str) -> Option<Engine> {
        match s {
            "oracle" => Some(Engine::Oracle),
            "rewrite" => Some(Engine::Rewrite),
            "cross" => Some(Engine::Cross),
            _ => None,
        }
    }
}

/// Outcome of one catalog entry.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Status {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "skipped-degree-budget")]
    Skipped,
}

/// One identity of the catalog.
#[derive(Clone, Debug)]
pub struct Entry {
    pub id: String,
    pub suite: Suite,
    pub paper_ref: &'static str,
    /// Negative control: the residual is expected to be nonzero.
    pub control: bool,
    /// Word length in overcalculus letters below which the entry is not attempted.
    pub degree: usize,
}

impl Entry {
    fn new(id: impl Into<String>, suite: Suite, paper_ref: &'static str, degree: usize) -> Entry {
        Entry { id: id.into(), suite, paper_ref, control: false, degree }
    }
    fn control(mut self) -> Entry {
        self.control = true;
        self
    }
}

/// One line of the report. Field order is the serialized key order.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub suite: Suite,
    pub paper_ref: &'static str,
    pub n: usize,
    pub t: String,
    pub status: Status,
    pub residual_terms: usize,
    pub ms: u64,
}

impl CheckResult {
    /// Whether the outcome is the designed one: controls fail, everything else passes.
    pub fn as_expected(&self, entry: &Entry) -> bool {
        match self.status {
            Status::Pass => !entry.control,
            Status::Fail => entry.control,
            Status::Skipped => true,
        }
    }
}

#[derive(Debug, Error)]
pub enum CheckError {
    #[error("degree budget exceeded: need {need}, budget {budget}")]
    Budget { need: usize, budget: usize },
    #[error("engines disagree on {0}")]
    Disagreement(String),
    #[error("{0}")]
    Failed(String),
}

impl From<AlgebraError> for CheckError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::Budget { need, budget } => CheckError::Budget { need, budget },
            other => CheckError::Failed(other.to_string()),
        }
    }
}

impl From<CalcError> for CheckError {
    fn from(e: CalcError) -> Self {
        match e {
            CalcError::Budget { need, budget } => CheckError::Budget { need, budget },
            CalcError::Algebra(a) => a.into(),
            other => CheckError::Failed(other.to_string()),
        }
    }
}

impl From<LegError> for CheckError {
    fn from(e: LegError) -> Self {
        CheckError::Failed(e.to_string())
    }
}

impl From<RepError> for CheckError {
    fn from(e: RepError) -> Self {
        CheckError::Failed(e.to_string())
    }
}

/// Longest words the equality oracle is built for.
pub const ORACLE_MAX_LEN: usize = 6;

/// Number of random elements in the randomized engine comparison.
pub const RANDOM_SAMPLES: usize = 1000;

/// Default truncation in overcalculus letters.
pub fn default_max_degree(n: usize) -> usize {
    if n <= 2 {
        12
    } else {
        8
    }
}

fn slots_of(s: &str) -> Vec<Slot> {
    s.chars().map(|c| if c == 'V' { Slot::V } else { Slot::D }).collect()
}

const SLOT_TRIPLES: [&str; 8] = ["VVV", "VVD", "VDV", "VDD", "DVV", "DVD", "DDV", "DDD"];
const SIGMA_PAIRS: [&str; 4] = ["pp", "mm", "pm", "mp"];

/// The catalog, in report order.
pub static CATALOG: LazyLock<Vec<Entry>> = LazyLock::new(build_catalog);

fn build_catalog() -> Vec<Entry> {
    use Suite::*;
    let mut c = vec![
        Entry::new("guards.unit", Guards, "the unit is nonzero in the quotient", 0),
        Entry::new("guards.del_p", Guards, "every component family of ∂p is nonzero", 4),
        Entry::new("guards.delbar_p", Guards, "every component family of ∂̄p is nonzero", 4),
        Entry::new("guards.metric", Guards, "the metric g is nonzero", 4),
        Entry::new("guards.two_forms", Guards, "∂p ∧ ∂̄p is nonzero among two-forms", 4),
        Entry::new(
            "guards.flatness",
            Guards,
            "graded dimensions equal the commutative dimensions up to degree four",
            4,
        ),
    ];
    for s in SLOT_TRIPLES {
        c.push(Entry::new(
            format!("operators.braid.{s}"),
            Operators,
            "braid equation R_{W,Z} R_{V,Z} R_{V,W} = R_{V,W} R_{V,Z} R_{W,Z}",
            0,
        ));
    }
    let ops: [(&str, &'static str); 27] = [
        ("duality.E23C1", "duality E_23 C_1 = id on V"),
        ("duality.E12C2", "duality E_12 C_2 = id on V*"),
        ("duality.Ep23Cp1", "duality E'_23 C'_1 = id on V*"),
        ("duality.Ep12Cp2", "duality E'_12 C'_2 = id on V"),
        ("naturality.E12", "naturality of evaluations: E_12 = E_23 R_{V*,W} R_{V,W}"),
        ("naturality.E23", "naturality of evaluations: E_23 = E_12 R_{W,V} R_{W,V*}"),
        ("naturality.Ep12", "naturality of evaluations: E'_12 = E'_23 R_{V,W} R_{V*,W}"),
        ("naturality.Ep23", "naturality of evaluations: E'_23 = E'_12 R_{W,V*} R_{W,V}"),
        ("naturality.C1", "naturality of coevaluations: C_1 = R_{W,V*} R_{W,V} C_2"),
        ("naturality.C2", "naturality of coevaluations: C_2 = R_{V,W} R_{V*,W} C_1"),
        ("naturality.Cp1", "naturality of coevaluations: C'_1 = R_{W,V} R_{W,V*} C'_2"),
        ("naturality.Cp2", "naturality of coevaluations: C'_2 = R_{V*,W} R_{V,W} C'_1"),
        ("evaluation_braiding", "evaluation against the braiding: E R_{V,V*} = q^{-(λ,λ+2ρ)} E'"),
        ("hecke.V", "Hecke relation P_{V,V} Q_{V,V} = 0"),
        ("hecke.Vd", "Hecke relation P_{V*,V*} Q_{V*,V*} = 0"),
        ("S.commute.1", "S and S̃ commute: S_123 S̃_234 = S̃_234 S_123"),
        ("S.commute.2", "S and S̃ commute: S̃_234 S_345 = S_345 S̃_234"),
        ("S.braid", "braid relation S_123 S_345 S_123 = S_345 S_123 S_345"),
        ("S.braid_tilde", "braid relation S̃_234 S̃_456 S̃_234 = S̃_456 S̃_234 S̃_456"),
        ("S.quadratic", "quadratic case: S = q^{2(ω,ω)-(α,α)} S^{-1} + q^{(ω,ω)}(1 - q^{-(α,α)})"),
        ("S.quadratic_tilde", "quadratic case: S̃ = q^{(α,α)-2(ω,ω)} S̃^{-1} + q^{-(ω,ω)}(1 - q^{(α,α)})"),
        ("ETT", "E_23 T_3456 T_1234 = T_1234 E_45"),
        (
            "S.evaluation",
            "S-evaluation identities E'_12 S_123 = q^{(λ,λ+2ρ)} E_23 and E'_34 S̃^{-1}_234 = q^{(λ,λ+2ρ)} E_23",
        ),
        ("S.evaluation2", "S-evaluation identities E'_12 S_123 S̃_234 = E'_34 and E_23 S̃_234 S_345 = E_45"),
        ("EpET", "E'_12 E_23 T_1234 = E'_12 E_23"),
        ("StESt", "S̃_234 E_45 S̃_456 = E_45 S̃_456 S̃_234"),
        ("T.braid", "braid equation for T: T_1234 T_3456 T_1234 = T_3456 T_1234 T_3456"),
    ];
    for (id, r) in ops {
        c.push(Entry::new(format!("operators.{id}"), Operators, r, 0));
    }
    c.push(Entry::new("operators.T.factorization", Operators, "T_1234 = S_123 S̃_234 = S̃_234 S_123", 0));
    c.push(Entry::new(
        "operators.intertwiners",
        Operators,
        "braidings, evaluations and coevaluations are module maps",
        0,
    ));

    let alg: [(&str, &'static str, usize); 28] = [
        ("relations.ff", "algebra relations: f f = q^{-(ω,ω)} R_12 f f", 2),
        ("relations.vv", "algebra relations: v v = q^{-(ω,ω)} R_12 v v", 2),
        ("relations.vf", "algebra relations: v f = q^{(ω,ω)} R_12 f v", 2),
        ("relations.unit", "algebra relations: E_12 v f = 1", 2),
        ("projections.V", "projection algebra: (P_{V,V})_12 (R^{-1}_{V,V*})_23 p p = 0", 4),
        ("projections.Vd", "projection algebra: (P_{V*,V*})_34 (R^{-1}_{V,V*})_23 p p = 0", 4),
        ("projections.trace", "projection algebra: E'_12 p = q^{(ω,2ρ)}", 2),
        ("redundancy.plus", "quadratic case: the P Q relation of the holomorphic calculus vanishes identically", 4),
        (
            "redundancy.minus",
            "quadratic case: the P Q relation of the antiholomorphic calculus vanishes identically",
            4,
        ),
        ("redundancy.overcalculus", "quadratic case: (P_{V,V} Q_{V,V})_12 f ∂f vanishes identically", 2),
        (
            "calc_relations.plus",
            "holomorphic calculus relations: (P_{V*,V*})_34 (R^{-1})_23 p ∂p = 0 and E'_12 ∂p = 0",
            4,
        ),
        (
            "calc_relations.minus",
            "antiholomorphic calculus relations: (P_{V,V})_12 (R^{-1})_23 p ∂̄p = 0 and E'_12 ∂̄p = 0",
            4,
        ),
        ("S_action_left.plus", "equivalent relations: (S̃_234 - q^{-(ω,ω)}) p ∂p = 0", 4),
        ("S_action_left.minus", "equivalent relations: (S_123 - q^{(ω,ω)}) p ∂̄p = 0", 4),
        ("S_action_right.plus", "equivalent relations: (S̃_234 - q^{-(ω,ω)}) ∂p p = 0", 4),
        ("S_action_right.minus", "equivalent relations: (S_123 - q^{(ω,ω)}) ∂̄p p = 0", 4),
        ("right_module.plus", "right module structure: ∂p p = q^{(α,α)} T_1234 p ∂p", 4),
        ("right_module.minus", "right module structure: ∂̄p p = q^{-(α,α)} T_1234 p ∂̄p", 4),
        ("S_right_module.plus", "right module structure via S: ∂p p = q^{(α,α)-(ω,ω)} S_123 p ∂p", 4),
        ("S_right_module.minus", "right module structure via S̃: ∂̄p p = q^{(ω,ω)-(α,α)} S̃_234 p ∂̄p", 4),
        ("S_bimodule.plus", "bimodule relations: (S_123 - q^{(ω,ω)})(p ∂p + ∂p p) = 0", 4),
        ("S_bimodule.minus", "bimodule relations: (S̃_234 - q^{-(ω,ω)})(p ∂̄p + ∂̄p p) = 0", 4),
        ("evaluations.p_del_p", "evaluations in the calculi: E_23 p ∂p = 0", 4),
        ("evaluations.del_p_p", "evaluations in the calculi: E_23 ∂p p = ∂p", 4),
        ("evaluations.p_delbar_p", "evaluations in the calculi: E_23 p ∂̄p = ∂̄p", 4),
        ("evaluations.delbar_p_p", "evaluations in the calculi: E_23 ∂̄p p = 0", 4),
        ("flatness", "flat deformation: graded dimensions equal the commutative ones up to degree four", 4),
        ("engines.exhaustive", "engine agreement on every word of length at most four", 4),
    ];
    for (id, r, d) in alg {
        c.push(Entry::new(format!("algebra.{id}"), Algebra, r, d));
    }
    c.push(Entry::new("algebra.engines.random", Algebra, "engine agreement and soundness on random elements", 4));

    let met: [(&str, &'static str, usize); 17] = [
        ("symmetric", "g is symmetric: ∧g = 0", 4),
        ("real", "g is real: g† = g", 4),
        ("real_components", "each of g_{+-} and g_{-+} is real", 4),
        ("central", "g is central: p g = g p", 6),
        ("kahler.left", "Kähler property: (d ⊗ id) g = 0", 6),
        ("kahler.right", "Kähler property: (id ⊗ d) g = 0", 6),
        ("degree_three.1", "degree three vanishing: E'_12 E_23 E_23 ∂p ⊗ ∂̄p ⊗ ∂p = 0", 6),
        ("degree_three.2", "degree three vanishing: E'_12 E_23 E_23 ∂̄p ⊗ ∂p ⊗ ∂̄p = 0", 6),
        ("identity.pm", "metric identities: g_{+-} p = q^{(ω,ω)-(α,α)} E'_12 S̃_234 ∂p ⊗ ∂̄p = q^{(ω,ω)-(α,α)} E'_34 S^{-1}_123 ∂p ⊗ ∂̄p", 6),
        ("identity.mp", "metric identities: p g_{-+} = q^{(ω,2ρ)} E_23 ∂̄p ⊗ ∂p", 6),
        ("descent.pm", "inverse metric: Φ_{+-} - Ψ_{+-} descends to the calculus", 6),
        ("descent.mp", "inverse metric: Φ_{-+} - q^{-(ω,2ρ)} Ψ_{-+} descends to the calculus", 6),
        ("descent.pairing", "inverse metric: the descended maps restrict to the pairing on generators", 6),
        ("inverse.left.del", "quantum metric: g^(1) (g^(2), ∂p) = ∂p", 8),
        ("inverse.left.delbar", "quantum metric: g^(1) (g^(2), ∂̄p) = ∂̄p", 8),
        ("inverse.right.del", "quantum metric: (∂p, g^(1)) g^(2) = ∂p", 8),
        ("inverse.right.delbar", "quantum metric: (∂̄p, g^(1)) g^(2) = ∂̄p", 8),
    ];
    for (id, r, d) in met {
        c.push(Entry::new(format!("metric.{id}"), Metric, r, d));
    }

    let con: [(&str, &'static str, usize); 15] = [
        ("well_defined.minus.Ep", "connection ∇_-: E'_12 ∇_-(∂̄p) = 0", 6),
        ("well_defined.plus.Ep", "connection ∇_+: E'_12 ∇_+(∂p) = 0", 6),
        ("well_defined.minus.S", "connection ∇_-: (S_123 - q^{(ω,ω)}) ∇_-(p ∂̄p) = 0", 8),
        ("well_defined.plus.St", "connection ∇_+: (S̃_234 - q^{-(ω,ω)}) ∇_+(p ∂p) = 0", 8),
        ("deldelbar", "∂∂̄p = E_23 (∂p ∧ ∂̄p + ∂̄p ∧ ∂p)", 4),
        ("deldelbar.evaluated", "E_23 p ∂∂̄p = E_23 ∂∂̄p p = E_23 ∂̄p ∧ ∂p", 6),
        ("deldelbar.right", "∂∂̄p p = T_1234 p ∂∂̄p", 6),
        ("torsion_identity", "q^{(α,α)} E_23 T_1234 ∂̄p ∧ ∂p = -E_23 ∂p ∧ ∂̄p + (q^{(α,α)} - 1) E_23 ∂̄p ∧ ∂p", 4),
        ("d_squared", "d² = 0, ∂² = ∂̄² = 0 and ∂∂̄ = -∂̄∂ on p", 4),
        ("torsion.plus", "∇ is torsion free: T_∇(∂p) = 0", 6),
        ("torsion.minus", "∇ is torsion free: T_∇(∂̄p) = 0", 6),
        ("torsion.left_linear", "torsion is a left module map: T_∇(p ∂p) = p T_∇(∂p)", 8),
        ("cotorsion", "∇ is cotorsion free: (d ⊗ id - (∧ ⊗ id)(id ⊗ ∇)) g = 0", 8),
        ("levi_civita", "weak Levi-Civita: torsion free and cotorsion free", 8),
        ("classical_limit_pairing", "the inverse metric pairs generators of equal type to zero", 0),
    ];
    for (id, r, d) in con {
        c.push(Entry::new(format!("connection.{id}"), Connection, r, d));
    }

    c.push(Entry::new(
        "bimodule.decomposition.minus",
        Bimodule,
        "decomposition ∇_-(∂̄p p) = σ_{--} + σ_{-+} + ∇_-(∂̄p) p",
        8,
    ));
    c.push(Entry::new(
        "bimodule.decomposition.plus",
        Bimodule,
        "decomposition ∇_+(∂p p) = σ_{++} + σ_{+-} + ∇_+(∂p) p",
        8,
    ));
    for pair in SIGMA_PAIRS {
        for (cond, r) in [
            ("Ep12", "σ well defined: action of E'_12"),
            ("Ep34", "σ well defined: action of E'_34"),
            ("left", "σ well defined: action of S̃_234 or S_123 on the left factor"),
            ("right", "σ well defined: action of S̃_456 or S_345 on the right factor"),
        ] {
            c.push(Entry::new(format!("bimodule.sigma.{pair}.{cond}"), Bimodule, r, 8));
        }
    }
    for pair in SIGMA_PAIRS {
        c.push(Entry::new(
            format!("bimodule.sigma.{pair}.tensor"),
            Bimodule,
            "σ well defined: tensor product over the projection algebra",
            8,
        ));
    }
    let bim: [(&str, &'static str, usize); 6] = [
        ("connection", "bimodule connections: ∇(ω p) = σ(ω ⊗ dp) + ∇(ω) p", 10),
        ("nabla_g", "∇g = 0, quantum Levi-Civita connection", 8),
        ("nabla_g.first_mp", "the term (∇ ⊗ id) g_{-+} vanishes", 8),
        ("nabla_g.first_pm", "the term (∇ ⊗ id) g_{+-} vanishes", 8),
        ("nabla_g.second_pm", "the term (id ⊗ ∇) g_{+-} vanishes", 8),
        ("nabla_g.second_mp", "the term (σ ⊗ id)(id ⊗ ∇) g_{-+} vanishes", 8),
    ];
    for (id, r, d) in bim {
        c.push(Entry::new(format!("bimodule.{id}"), Bimodule, r, d));
    }
    c.push(
        Entry::new(
            "bimodule.control.connection",
            Bimodule,
            "negative control: perturbed ∇_- violates E'_12 ∇_-(∂̄p) = 0",
            6,
        )
        .control(),
    );
    c.push(
        Entry::new(
            "bimodule.control.braiding",
            Bimodule,
            "negative control: perturbed σ_{--} violates the decomposition of ∇_-(∂̄p p)",
            8,
        )
        .control(),
    );
    c.push(
        Entry::new("bimodule.control.metric", Bimodule, "negative control: perturbed g is not symmetric", 4).control(),
    );

    let cls: [(&str, &'static str); 8] = [
        ("metric", "classical limit: g equals the Fubini-Study metric Σ ∂p^{ij} ⊗ ∂̄p^{ji} + ∂̄p^{ij} ⊗ ∂p^{ji}"),
        ("inverse", "classical limit: (∂p^{ij}, ∂̄p^{kl}) = δ_{il} p^{kj} - p^{ij} p^{kl} and its conjugate"),
        ("connection", "classical limit: ∇∂p^{ij} = Σ_k ∂̄p^{kj} ⊗ ∂p^{ik} - p^{ij} g_{-+} and its conjugate"),
        ("braidings", "classical limit: braidings are flips and E' = E∘flip"),
        ("relations", "classical relations p² = p, tr p = 1, Σ ∂p^{ii} = 0, p^{ij} ∂p^{kl} = p^{il} ∂p^{kj}"),
        ("torsion", "classical connection is torsion free"),
        ("metric_compatibility", "classical connection is metric compatible"),
        ("inverse_identity", "classical inverse metric inverts the metric"),
    ];
    for (id, r) in cls {
        c.push(Entry::new(format!("classical.{id}"), Classical, r, 0));
    }
    c
}

/// Everything built for one `(N, t)`: representation data and, on demand, the
/// algebra, calculus, geometries and oracle.
pub struct Context<F: Coeff> {
    pub rep: Arc<Rep<F>>,
    pub engine: Engine,
    pub max_degree: usize,
    model: Mutex<Option<Arc<Model<F>>>>,
    calc: Mutex<Option<Arc<Calculus<F>>>>,
    geometries: Mutex<BTreeMap<u8, Arc<Geometry<F>>>>,
    oracles: Mutex<BTreeMap<usize, Arc<Oracle<F>>>>,
    classical: Mutex<Option<Arc<ClassicalLimit>>>,
}

fn cached<T, E>(slot: &Mutex<Option<Arc<T>>>, build: impl FnOnce() -> Result<T, E>) -> Result<Arc<T>, E> {
    let mut guard = slot.lock().unwrap();
    if let Some(x) = guard.as_ref() {
        return Ok(x.clone());
    }
    let x = Arc::new(build()?);
    *guard = Some(x.clone());
    Ok(x)
}

impl<F: Coeff> Context<F> {
    pub fn new(param: Param<F>, engine: Engine, max_degree: usize) -> Result<Self, CheckError> {
        Ok(Context {
            rep: Arc::new(Rep::build(param)?),
            engine,
            max_degree,
            model: Mutex::default(),
            calc: Mutex::default(),
            geometries: Mutex::default(),
            oracles: Mutex::default(),
            classical: Mutex::default(),
        })
    }

    pub fn n(&self) -> usize {
        self.rep.n
    }

    pub fn model(&self) -> Result<Arc<Model<F>>, CheckError> {
        Ok(cached(&self.model, || Model::new(self.rep.clone()))?)
    }

    pub fn calc(&self) -> Result<Arc<Calculus<F>>, CheckError> {
        let model = self.model()?;
        Ok(cached(&self.calc, || Calculus::new(model, self.max_degree / 2))?)
    }

    pub fn geometry(&self, perturb: Perturb) -> Result<Arc<Geometry<F>>, CheckError> {
        let calc = self.calc()?;
        let mut map = self.geometries.lock().unwrap();
        if let Some(g) = map.get(&(perturb as u8)) {
            return Ok(g.clone());
        }
        let g = Arc::new(Geometry::new(calc, perturb)?);
        map.insert(perturb as u8, g.clone());
        Ok(g)
    }

    /// The equality oracle truncated at `len` letters.
    pub fn oracle_at(&self, len: usize) -> Arc<Oracle<F>> {
        self.oracles.lock().unwrap().entry(len).or_insert_with(|| Arc::new(Oracle::new(&self.rep, len))).clone()
    }

    /// The oracle used by the equality engine.
    pub fn oracle(&self) -> Arc<Oracle<F>> {
        self.oracle_at(self.max_degree.min(ORACLE_MAX_LEN))
    }

    fn classical(&self) -> Result<Arc<ClassicalLimit>, CheckError> {
        cached(&self.classical, || ClassicalLimit::new(self.n()))
    }

    fn tensor_zero(&self, g: &Elem<F>) -> Result<usize, CheckError> {
        let model = self.model()?;
        match self.engine {
            Engine::Rewrite => Ok(oracle::rewrite_zero(&model, g)?.residual()),
            Engine::Oracle => Ok(self.oracle().zero_test(g)?.residual()),
            Engine::Cross => {
                let r = oracle::rewrite_zero(&model, g)?;
                let oracle = self.oracle();
                if g.keys().all(|w| w.len() <= oracle.max_len) && oracle.zero_test(g)?.is_zero() != r.is_zero() {
                    let first = g.keys().next().map(|w| model_word(&model, w)).unwrap_or_default();
                    return Err(CheckError::Disagreement(format!(
                        "element with {} terms starting with {first}",
                        g.len()
                    )));
                }
                Ok(r.residual())
            }
        }
    }

    /// Residual of an overcalculus element in the given quotient.
    ///
    /// Tensor powers of the one-forms use the selected engine. Two-form quotients
    /// always use the prolongation relations of the calculus.
    pub fn zero_gamma(&self, space: Space, g: &Elem<F>) -> Result<usize, CheckError> {
        if g.is_empty() {
            return Ok(0);
        }
        let len = g.keys().map(Vec::len).max().unwrap_or(0);
        if len > self.max_degree {
            return Err(CheckError::Budget { need: len, budget: self.max_degree });
        }
        if space == Space::Tensor {
            self.tensor_zero(g)
        } else {
            Ok(self.calc()?.zero_test_gamma(space, g)?.residual())
        }
    }

    /// Residual of a formal element in the given quotient.
    pub fn zero(&self, space: Space, x: &Elem<F>) -> Result<usize, CheckError> {
        self.zero_gamma(space, &self.calc()?.to_gamma(x))
    }

    /// Total residual of a family of formal elements.
    pub fn zero_expr(&self, space: Space, x: &Expr<F>) -> Result<usize, CheckError> {
        x.comps.values().map(|e| self.zero(space, e)).sum()
    }

    /// Total residual of a family of overcalculus elements.
    pub fn zero_gamma_expr(&self, space: Space, x: &Expr<F>) -> Result<usize, CheckError> {
        x.comps.values().map(|e| self.zero_gamma(space, e)).sum()
    }
}

fn model_word<F: Coeff>(model: &Model<F>, w: &[Letter]) -> String {
    w.iter().map(|&l| format!("{}{}", model.kind(l).name(), model.index(l) + 1)).collect::<Vec<_>>().join(" ")
}

/// The quantum objects at `t = 1` together with the classical tensors.
struct ClassicalLimit {
    rep: Rep<Q>,
    geometry: Geometry<Q>,
    tensors: ClassicalTensors,
}

impl ClassicalLimit {
    fn new(n: usize) -> Result<Self, CheckError> {
        let rep = Rep::build(Param::rational(n, Q::from_integer(1.into())))?;
        let model = Arc::new(Model::new(Arc::new(rep.clone()))?);
        let calc = Arc::new(Calculus::new(model, 2)?);
        let geometry = Geometry::new(calc, Perturb::None)?;
        Ok(ClassicalLimit { rep, geometry, tensors: ClassicalTensors::new(n) })
    }

    /// A formal element at `t = 1`, with its `p` letters commuted into a monomial.
    fn to_form(&self, x: &Elem<Q>) -> Form {
        let calc = &self.geometry.calc;
        let mut out = Form::default();
        for (w, c) in x {
            let mut mono = Vec::new();
            let mut diffs = Vec::new();
            for &s in w {
                match calc.parts(s) {
                    (Sym::P, i, j) => mono.push((i, j)),
                    (Sym::Dp, i, j) => diffs.push((Gen::Del, i, j)),
                    (Sym::Dbp, i, j) => diffs.push((Gen::DelBar, i, j)),
                }
            }
            out.add_term(mono, diffs, c.clone());
        }
        out
    }

    fn sym(&self, g: Gen, i: usize, j: usize) -> u8 {
        let k = match g {
            Gen::Del => Sym::Dp,
            Gen::DelBar => Sym::Dbp,
        };
        self.geometry.calc.sym(k, i, j)
    }

    fn evaluate(&self, id: &str) -> Result<usize, CheckError> {
        let n = self.rep.n;
        let t = &self.tensors;
        let generators: Vec<(Gen, usize, usize)> = [Gen::Del, Gen::DelBar]
            .into_iter()
            .flat_map(|g| (0..n).flat_map(move |i| (0..n).map(move |j| (g, i, j))))
            .collect();
        Ok(match id {
            "metric" => self.to_form(&self.geometry.g).difference_terms(&t.metric),
            "inverse" => {
                let mut bad = 0;
                for &a in &generators {
                    for &b in &generators {
                        let quantum = self.geometry.pair_table(self.sym(a.0, a.1, a.2), self.sym(b.0, b.1, b.2));
                        bad += self.to_form(&quantum).difference_terms(&t.inverse[&(a, b)]);
                    }
                }
                bad
            }
            "connection" => generators
                .iter()
                .map(|&a| {
                    self.to_form(&self.geometry.nabla_generator(self.sym(a.0, a.1, a.2)))
                        .difference_terms(&t.connection[&a])
                })
                .sum(),
            "braidings" => {
                let flip = |a: Slot, b: Slot| {
                    LegOp::from_fn(n, vec![a, b], vec![b, a], |d| vec![(vec![d[1], d[0]], Q::from_integer(1.into()))])
                };
                let mut bad = 0;
                for a in [Slot::V, Slot::D] {
                    for b in [Slot::V, Slot::D] {
                        bad += self.rep.braiding(a, b).residual(&flip(a, b));
                    }
                }
                bad += self.rep.ev_p.residual(&self.rep.ev.compose(&flip(Slot::V, Slot::D))?);
                bad += self.rep.coev_p.residual(&flip(Slot::V, Slot::D).compose(&self.rep.coev)?);
                bad
            }
            "relations" => classical::relations_residual(n),
            "torsion" => t.torsion_residual(),
            "metric_compatibility" => t.metric_compatibility_residual(),
            "inverse_identity" => t.inverse_residual(),
            _ => return Err(CheckError::Failed(format!("unknown classical check {id}"))),
        })
    }
}

/// Evaluates one catalog entry to a residual.
pub fn evaluate<F: Coeff>(ctx: &Context<F>, entry: &Entry) -> Result<usize, CheckError> {
    if entry.degree > ctx.max_degree {
        return Err(CheckError::Budget { need: entry.degree, budget: ctx.max_degree });
    }
    let (_, rest) = entry.id.split_once('.').expect("catalog ids have a suite prefix");
    match entry.suite {
        Suite::Guards => guards(ctx, rest),
        Suite::Operators => operators(&ctx.rep, rest),
        Suite::Algebra => algebra(ctx, rest),
        Suite::Metric => metric(ctx, rest),
        Suite::Connection => connection(ctx, rest),
        Suite::Bimodule => bimodule(ctx, rest),
        Suite::Classical => ctx.classical()?.evaluate(rest),
    }
}

fn unknown(id: &str) -> CheckError {
    CheckError::Failed(format!("unknown check {id}"))
}

fn chain<F: Coeff>(n: usize, sig: &[Slot], steps: &[(&LegOp<F>, usize)]) -> Result<LegOp<F>, LegError> {
    let mut c = Chain::on(n, sig.to_vec());
    for (op, leg) in steps {
        c = c.then(op, *leg)?;
    }
    Ok(c.build())
}

fn operators<F: Coeff>(rep: &Rep<F>, id: &str) -> Result<usize, CheckError> {
    use Slot::{D, V};
    let n = rep.n;
    let q = |p| rep.q(p);
    let (ww, aa, w2r) = (rep.ww(), rep.aa(), rep.w2r());
    let r = |a, b| rep.braiding(a, b);
    let id_on = |sig: Vec<Slot>| LegOp::identity(n, sig);
    let one = F::one();
    if let Some(s) = id.strip_prefix("braid.") {
        let s = slots_of(s);
        let (a, b, c) = (s[0], s[1], s[2]);
        let lhs = chain(n, &s, &[(r(a, b), 1), (r(a, c), 2), (r(b, c), 1)])?;
        let rhs = chain(n, &s, &[(r(b, c), 2), (r(a, c), 1), (r(a, b), 2)])?;
        return Ok(lhs.residual(&rhs));
    }
    if let Some(which) = id.strip_prefix("naturality.") {
        let mut bad = 0;
        for w in [V, D] {
            let (lhs, rhs) = match which {
                "E12" => (
                    chain(n, &[D, V, w], &[(&rep.ev, 1)])?,
                    chain(n, &[D, V, w], &[(r(V, w), 2), (r(D, w), 1), (&rep.ev, 2)])?,
                ),
                "E23" => (
                    chain(n, &[w, D, V], &[(&rep.ev, 2)])?,
                    chain(n, &[w, D, V], &[(r(w, D), 1), (r(w, V), 2), (&rep.ev, 1)])?,
                ),
                "Ep12" => (
                    chain(n, &[V, D, w], &[(&rep.ev_p, 1)])?,
                    chain(n, &[V, D, w], &[(r(D, w), 2), (r(V, w), 1), (&rep.ev_p, 2)])?,
                ),
                "Ep23" => (
                    chain(n, &[w, V, D], &[(&rep.ev_p, 2)])?,
                    chain(n, &[w, V, D], &[(r(w, V), 1), (r(w, D), 2), (&rep.ev_p, 1)])?,
                ),
                "C1" => {
                    (chain(n, &[w], &[(&rep.coev, 1)])?, chain(n, &[w], &[(&rep.coev, 2), (r(w, V), 1), (r(w, D), 2)])?)
                }
                "C2" => {
                    (chain(n, &[w], &[(&rep.coev, 2)])?, chain(n, &[w], &[(&rep.coev, 1), (r(D, w), 2), (r(V, w), 1)])?)
                }
                "Cp1" => (
                    chain(n, &[w], &[(&rep.coev_p, 1)])?,
                    chain(n, &[w], &[(&rep.coev_p, 2), (r(w, D), 1), (r(w, V), 2)])?,
                ),
                "Cp2" => (
                    chain(n, &[w], &[(&rep.coev_p, 2)])?,
                    chain(n, &[w], &[(&rep.coev_p, 1), (r(V, w), 2), (r(D, w), 1)])?,
                ),
                _ => return Err(unknown(id)),
            };
            bad += lhs.residual(&rhs);
        }
        return Ok(bad);
    }
    let vdvd = [V, D, V, D];
    let six = [V, D, V, D, V, D];
    Ok(match id {
        "duality.E23C1" => chain(n, &[V], &[(&rep.coev, 1), (&rep.ev, 2)])?.residual(&id_on(vec![V])),
        "duality.E12C2" => chain(n, &[D], &[(&rep.coev, 2), (&rep.ev, 1)])?.residual(&id_on(vec![D])),
        "duality.Ep23Cp1" => chain(n, &[D], &[(&rep.coev_p, 1), (&rep.ev_p, 2)])?.residual(&id_on(vec![D])),
        "duality.Ep12Cp2" => chain(n, &[V], &[(&rep.coev_p, 2), (&rep.ev_p, 1)])?.residual(&id_on(vec![V])),
        "evaluation_braiding" => rep.ev.compose(&rep.r_vd)?.residual(&rep.ev_p.scale(&q(-(ww + w2r)))),
        "hecke.V" => rep.p_vv.compose(&rep.q_vv)?.nnz(),
        "hecke.Vd" => rep.p_dd.compose(&rep.q_dd)?.nnz(),
        "S.commute.1" => {
            chain(n, &vdvd, &[(&rep.st, 2), (&rep.s, 1)])?.residual(&chain(n, &vdvd, &[(&rep.s, 1), (&rep.st, 2)])?)
        }
        "S.commute.2" => {
            let sig = [V, D, V, D, V];
            chain(n, &sig, &[(&rep.s, 3), (&rep.st, 2)])?.residual(&chain(n, &sig, &[(&rep.st, 2), (&rep.s, 3)])?)
        }
        "S.braid" => {
            let sig = [V, D, V, D, V];
            chain(n, &sig, &[(&rep.s, 1), (&rep.s, 3), (&rep.s, 1)])?.residual(&chain(
                n,
                &sig,
                &[(&rep.s, 3), (&rep.s, 1), (&rep.s, 3)],
            )?)
        }
        "S.braid_tilde" => chain(n, &six, &[(&rep.st, 2), (&rep.st, 4), (&rep.st, 2)])?.residual(&chain(
            n,
            &six,
            &[(&rep.st, 4), (&rep.st, 2), (&rep.st, 4)],
        )?),
        "S.quadratic" => {
            let rhs = rep.s_inv.scale(&q(ww * 2 - aa)).plus_scalar(&q(ww).mul(&one.sub(&q(-aa))))?;
            rep.s.residual(&rhs)
        }
        "S.quadratic_tilde" => {
            let rhs = rep.st_inv.scale(&q(aa - ww * 2)).plus_scalar(&q(-ww).mul(&one.sub(&q(aa))))?;
            rep.st.residual(&rhs)
        }
        "ETT" => chain(n, &six, &[(&rep.t, 1), (&rep.t, 3), (&rep.ev, 2)])?.residual(&chain(
            n,
            &six,
            &[(&rep.ev, 4), (&rep.t, 1)],
        )?),
        "S.evaluation" => {
            let c = q(ww + w2r);
            let a = chain(n, &[V, D, V], &[(&rep.s, 1), (&rep.ev_p, 1)])?
                .residual(&chain(n, &[V, D, V], &[(&rep.ev, 2)])?.scale(&c));
            let b = chain(n, &vdvd, &[(&rep.st_inv, 2), (&rep.ev_p, 3)])?
                .residual(&chain(n, &vdvd, &[(&rep.ev, 2)])?.scale(&c));
            a + b
        }
        "S.evaluation2" => {
            let a = chain(n, &vdvd, &[(&rep.st, 2), (&rep.s, 1), (&rep.ev_p, 1)])?.residual(&chain(
                n,
                &vdvd,
                &[(&rep.ev_p, 3)],
            )?);
            let sig = [V, D, V, D, V];
            let b =
                chain(n, &sig, &[(&rep.s, 3), (&rep.st, 2), (&rep.ev, 2)])?.residual(&chain(n, &sig, &[(&rep.ev, 4)])?);
            a + b
        }
        "EpET" => chain(n, &vdvd, &[(&rep.t, 1), (&rep.ev, 2), (&rep.ev_p, 1)])?.residual(&chain(
            n,
            &vdvd,
            &[(&rep.ev, 2), (&rep.ev_p, 1)],
        )?),
        "StESt" => chain(n, &six, &[(&rep.st, 4), (&rep.ev, 4), (&rep.st, 2)])?.residual(&chain(
            n,
            &six,
            &[(&rep.st, 2), (&rep.st, 4), (&rep.ev, 4)],
        )?),
        "T.braid" => chain(n, &six, &[(&rep.t, 1), (&rep.t, 3), (&rep.t, 1)])?.residual(&chain(
            n,
            &six,
            &[(&rep.t, 3), (&rep.t, 1), (&rep.t, 3)],
        )?),
        "T.factorization" => {
            rep.t.residual(&chain(n, &vdvd, &[(&rep.st, 2), (&rep.s, 1)])?)
                + rep.t.residual(&chain(n, &vdvd, &[(&rep.s, 1), (&rep.st, 2)])?)
        }
        "intertwiners" => {
            let ops = [
                &rep.r_vv,
                &rep.r_vd,
                &rep.r_dv,
                &rep.r_dd,
                &rep.r_vv_inv,
                &rep.r_vd_inv,
                &rep.r_dv_inv,
                &rep.r_dd_inv,
                &rep.ev,
                &rep.ev_p,
                &rep.coev,
                &rep.coev_p,
            ];
            ops.iter().map(|op| rep.intertwining_residual(op)).sum()
        }
        _ => return Err(unknown(id)),
    })
}

/// `op − c` for a scalar `c`.
fn shifted<F: Coeff>(op: &LegOp<F>, c: F) -> Result<LegOp<F>, LegError> {
    op.plus_scalar(&c.neg())
}

/// Keys of the flatness comparison: differential patterns of length at most two and total degree at most four.
fn flatness_keys() -> Vec<(Vec<Kind>, usize, usize)> {
    let mut out = Vec::new();
    for k in 0..=2usize {
        for bits in 0..(1usize << k) {
            let pattern: Vec<Kind> = (0..k).map(|i| if bits >> i & 1 == 0 { Kind::DF } else { Kind::DV }).collect();
            for a in 0..=4 - k {
                for b in 0..=4 - k - a {
                    out.push((pattern.clone(), a, b));
                }
            }
        }
    }
    out
}

fn flatness<F: Coeff>(ctx: &Context<F>) -> Result<usize, CheckError> {
    let model = ctx.model()?;
    let mut bad = 0;
    for (pattern, a, b) in flatness_keys() {
        let quantum = model.block_quotient_dim(&crate::algebra::BlockKey { pattern: pattern.clone(), a, b })?;
        let bools: Vec<bool> = pattern.iter().map(|&k| k == Kind::DF).collect();
        bad += usize::from(quantum != classical::commutative_block_dim(ctx.n(), &bools, a, b));
    }
    Ok(bad)
}

fn guards<F: Coeff>(ctx: &Context<F>, id: &str) -> Result<usize, CheckError> {
    let vanishes = |r: usize| usize::from(r == 0);
    let calc = ctx.calc()?;
    let one: Elem<F> = [(Vec::new(), F::one())].into_iter().collect();
    Ok(match id {
        "unit" => vanishes(ctx.zero(Space::Tensor, &one)?),
        "del_p" => calc
            .dp()
            .comps
            .values()
            .map(|e| Ok(vanishes(ctx.zero(Space::Tensor, e)?)))
            .sum::<Result<usize, CheckError>>()?,
        "delbar_p" => calc
            .dbp()
            .comps
            .values()
            .map(|e| Ok(vanishes(ctx.zero(Space::Tensor, e)?)))
            .sum::<Result<usize, CheckError>>()?,
        "metric" => vanishes(ctx.zero(Space::Tensor, &ctx.geometry(Perturb::None)?.g)?),
        "two_forms" => {
            let x = calc.dp().mul(&calc.dbp()).apply(&ctx.rep.ev, 2)?;
            vanishes(ctx.zero_expr(Space::Wedge, &x)?)
        }
        "flatness" => flatness(ctx)?,
        _ => return Err(unknown(id)),
    })
}

fn algebra<F: Coeff>(ctx: &Context<F>, id: &str) -> Result<usize, CheckError> {
    use Slot::{D, V};
    let rep = &ctx.rep;
    let n = ctx.n();
    let q = |p| rep.q(p);
    let (ww, aa, w2r) = (rep.ww(), rep.aa(), rep.w2r());
    let model = ctx.model()?;
    let calc = ctx.calc()?;
    let letters = |kinds: &'static [Kind]| {
        let model = model.clone();
        let sig = kinds.iter().map(|k| k.slot()).collect();
        Expr::<F>::family(n, sig, move |x| kinds.iter().zip(x).map(|(&k, &i)| model.letter(k, i)).collect())
    };
    let (p, dp, dbp) = (calc.p(), calc.dp(), calc.dbp());
    let (pdp, pdbp, dpp, dbpp) = (p.mul(&dp), p.mul(&dbp), dp.mul(&p), dbp.mul(&p));
    let t = Space::Tensor;
    Ok(match id {
        "relations.ff" => {
            let ff = letters(&[Kind::F, Kind::F]);
            ctx.zero_gamma_expr(t, &ff.sub(&ff.apply(&rep.r_vv, 1)?.scale(&q(-ww)))?)?
        }
        "relations.vv" => {
            let vv = letters(&[Kind::V, Kind::V]);
            ctx.zero_gamma_expr(t, &vv.sub(&vv.apply(&rep.r_dd, 1)?.scale(&q(-ww)))?)?
        }
        "relations.vf" => {
            let vf = letters(&[Kind::V, Kind::F]);
            let fv = letters(&[Kind::F, Kind::V]);
            ctx.zero_gamma_expr(t, &vf.sub(&fv.apply(&rep.r_vd, 1)?.scale(&q(ww)))?)?
        }
        "relations.unit" => {
            let vf = letters(&[Kind::V, Kind::F]).apply(&rep.ev, 1)?;
            ctx.zero_gamma_expr(t, &vf.sub(&Expr::constant(n, F::one()))?)?
        }
        "projections.V" => ctx.zero_expr(t, &p.mul(&p).apply(&rep.r_vd_inv, 2)?.apply(&rep.p_vv, 1)?)?,
        "projections.Vd" => ctx.zero_expr(t, &p.mul(&p).apply(&rep.r_vd_inv, 2)?.apply(&rep.p_dd, 3)?)?,
        "projections.trace" => ctx.zero_expr(t, &p.apply(&rep.ev_p, 1)?.sub(&Expr::constant(n, q(w2r)))?)?,
        "redundancy.plus" => pdp.apply(&rep.r_vd_inv, 2)?.apply(&rep.q_vv, 1)?.apply(&rep.p_vv, 1)?.term_count(),
        "redundancy.minus" => pdbp.apply(&rep.r_vd_inv, 2)?.apply(&rep.q_dd, 3)?.apply(&rep.p_dd, 3)?.term_count(),
        "redundancy.overcalculus" => {
            letters(&[Kind::F, Kind::DF]).apply(&rep.q_vv, 1)?.apply(&rep.p_vv, 1)?.term_count()
        }
        "calc_relations.plus" => {
            ctx.zero_expr(t, &pdp.apply(&rep.r_vd_inv, 2)?.apply(&rep.p_dd, 3)?)?
                + ctx.zero_expr(t, &dp.apply(&rep.ev_p, 1)?)?
        }
        "calc_relations.minus" => {
            ctx.zero_expr(t, &pdbp.apply(&rep.r_vd_inv, 2)?.apply(&rep.p_vv, 1)?)?
                + ctx.zero_expr(t, &dbp.apply(&rep.ev_p, 1)?)?
        }
        "S_action_left.plus" => ctx.zero_expr(t, &pdp.apply(&shifted(&rep.st, q(-ww))?, 2)?)?,
        "S_action_left.minus" => ctx.zero_expr(t, &pdbp.apply(&shifted(&rep.s, q(ww))?, 1)?)?,
        "S_action_right.plus" => ctx.zero_expr(t, &dpp.apply(&shifted(&rep.st, q(-ww))?, 2)?)?,
        "S_action_right.minus" => ctx.zero_expr(t, &dbpp.apply(&shifted(&rep.s, q(ww))?, 1)?)?,
        "right_module.plus" => ctx.zero_expr(t, &dpp.sub(&pdp.apply(&rep.t, 1)?.scale(&q(aa)))?)?,
        "right_module.minus" => ctx.zero_expr(t, &dbpp.sub(&pdbp.apply(&rep.t, 1)?.scale(&q(-aa)))?)?,
        "S_right_module.plus" => ctx.zero_expr(t, &dpp.sub(&pdp.apply(&rep.s, 1)?.scale(&q(aa - ww)))?)?,
        "S_right_module.minus" => ctx.zero_expr(t, &dbpp.sub(&pdbp.apply(&rep.st, 2)?.scale(&q(ww - aa)))?)?,
        "S_bimodule.plus" => ctx.zero_expr(t, &pdp.add(&dpp)?.apply(&shifted(&rep.s, q(ww))?, 1)?)?,
        "S_bimodule.minus" => ctx.zero_expr(t, &pdbp.add(&dbpp)?.apply(&shifted(&rep.st, q(-ww))?, 2)?)?,
        "evaluations.p_del_p" => ctx.zero_expr(t, &pdp.apply(&rep.ev, 2)?)?,
        "evaluations.del_p_p" => ctx.zero_expr(t, &dpp.apply(&rep.ev, 2)?.sub(&dp)?)?,
        "evaluations.p_delbar_p" => ctx.zero_expr(t, &pdbp.apply(&rep.ev, 2)?.sub(&dbp)?)?,
        "evaluations.delbar_p_p" => ctx.zero_expr(t, &dbpp.apply(&rep.ev, 2)?)?,
        "flatness" => flatness(ctx)?,
        "engines.exhaustive" => {
            let len = 4;
            let oracle = ctx.oracle_at(len);
            let mut bad = 0;
            for df in 0..=2usize {
                for dv in 0..=2 - df {
                    for z in -4i64..=4 {
                        bad += usize::from(
                            !oracle::compare_component(&oracle, &model, Grade { z, df, dv }, len)?.agrees(),
                        );
                    }
                }
            }
            bad
        }
        "engines.random" => {
            let len = ctx.max_degree.min(ORACLE_MAX_LEN);
            let oracle = ctx.oracle_at(len);
            let mut grades = Vec::new();
            for z in -1i64..=1 {
                for (df, dv) in [(0, 0), (1, 0), (0, 1)] {
                    grades.push(Grade { z, df, dv });
                }
            }
            let _ = (V, D);
            oracle::random_agreement(&oracle, &model, &grades, RANDOM_SAMPLES, 0x5eed)?
        }
        _ => return Err(unknown(id)),
    })
}

fn metric<F: Coeff>(ctx: &Context<F>, id: &str) -> Result<usize, CheckError> {
    let rep = &ctx.rep;
    let q = |p| rep.q(p);
    let (ww, aa, w2r) = (rep.ww(), rep.aa(), rep.w2r());
    let geo = ctx.geometry(Perturb::None)?;
    let calc = &geo.calc;
    let (p, dp, dbp) = (calc.p(), calc.dp(), calc.dbp());
    let t = Space::Tensor;
    let descent =
        |images: Vec<Elem<F>>| -> Result<usize, CheckError> { images.iter().map(|e| ctx.zero_gamma(t, e)).sum() };
    let inverse = |omega: &Expr<F>, left: bool| -> Result<usize, CheckError> {
        let x = if left {
            calc.map_expr(&geo.g_expr().mul(omega), |e| geo.pair(e, 1))
        } else {
            calc.map_expr(&omega.mul(&geo.g_expr()), |e| geo.pair(e, 0))
        };
        ctx.zero_expr(t, &x.sub(omega)?)
    };
    Ok(match id {
        "symmetric" => ctx.zero(Space::Wedge, &geo.g)?,
        "real" => ctx.zero(t, &crate::algebra::sub_elem(&calc.star(&geo.g), &geo.g))?,
        "real_components" => {
            ctx.zero(t, &crate::algebra::sub_elem(&calc.star(&geo.g_pm), &geo.g_pm))?
                + ctx.zero(t, &crate::algebra::sub_elem(&calc.star(&geo.g_mp), &geo.g_mp))?
        }
        "central" => ctx.zero_expr(t, &p.mul(&geo.g_expr()).sub(&geo.g_expr().mul(&p))?)?,
        "kahler.left" => ctx.zero(Space::WedgeTensor, &geo.d_at(&geo.g, 0))?,
        "kahler.right" => ctx.zero(Space::TensorWedge, &geo.d_at(&geo.g, 1))?,
        "degree_three.1" => {
            ctx.zero_expr(t, &dp.mul(&dbp).mul(&dp).apply(&rep.ev, 2)?.apply(&rep.ev, 2)?.apply(&rep.ev_p, 1)?)?
        }
        "degree_three.2" => {
            ctx.zero_expr(t, &dbp.mul(&dp).mul(&dbp).apply(&rep.ev, 2)?.apply(&rep.ev, 2)?.apply(&rep.ev_p, 1)?)?
        }
        "identity.pm" => {
            let lhs = geo.g_pm_expr().mul(&p);
            let c = q(ww - aa);
            let a = dp.mul(&dbp).apply(&rep.st, 2)?.apply(&rep.ev_p, 1)?.scale(&c);
            let b = dp.mul(&dbp).apply(&rep.s_inv, 1)?.apply(&rep.ev_p, 3)?.scale(&c);
            ctx.zero_expr(t, &lhs.sub(&a)?)? + ctx.zero_expr(t, &lhs.sub(&b)?)?
        }
        "identity.mp" => {
            ctx.zero_expr(t, &p.mul(&geo.g_mp_expr()).sub(&dbp.mul(&dp).apply(&rep.ev, 2)?.scale(&q(w2r)))?)?
        }
        "descent.pm" => descent(geo.descent_images(true)?)?,
        "descent.mp" => descent(geo.descent_images(false)?)?,
        "descent.pairing" => descent(geo.pairing_restriction_images()?)?,
        "inverse.left.del" => inverse(&dp, true)?,
        "inverse.left.delbar" => inverse(&dbp, true)?,
        "inverse.right.del" => inverse(&dp, false)?,
        "inverse.right.delbar" => inverse(&dbp, false)?,
        _ => return Err(unknown(id)),
    })
}

fn connection<F: Coeff>(ctx: &Context<F>, id: &str) -> Result<usize, CheckError> {
    let rep = &ctx.rep;
    let q = |p| rep.q(p);
    let (ww, aa) = (rep.ww(), rep.aa());
    let geo = ctx.geometry(Perturb::None)?;
    let calc = &geo.calc;
    let (p, dp, dbp) = (calc.p(), calc.dp(), calc.dbp());
    let (t, w) = (Space::Tensor, Space::Wedge);
    let nabla = |x: &Expr<F>| calc.map_expr(x, |e| geo.nabla(e));
    let d = |x: &Expr<F>| calc.map_expr(x, |e| calc.d(e));
    let ddbp = calc.map_expr(&dbp, |e| calc.del(e, true));
    let torsion = |x: &Expr<F>| nabla(x).sub(&d(x));
    let cotorsion = || -> Result<usize, CheckError> {
        ctx.zero(Space::WedgeTensor, &crate::algebra::sub_elem(&geo.d_at(&geo.g, 0), &geo.nabla_at(&geo.g, 1)))
    };
    Ok(match id {
        "well_defined.minus.Ep" => ctx.zero_expr(t, &nabla(&dbp).apply(&rep.ev_p, 1)?)?,
        "well_defined.plus.Ep" => ctx.zero_expr(t, &nabla(&dp).apply(&rep.ev_p, 1)?)?,
        "well_defined.minus.S" => ctx.zero_expr(t, &nabla(&p.mul(&dbp)).apply(&shifted(&rep.s, q(ww))?, 1)?)?,
        "well_defined.plus.St" => ctx.zero_expr(t, &nabla(&p.mul(&dp)).apply(&shifted(&rep.st, q(-ww))?, 2)?)?,
        "deldelbar" => ctx.zero_expr(w, &ddbp.sub(&dp.mul(&dbp).add(&dbp.mul(&dp))?.apply(&rep.ev, 2)?)?)?,
        "deldelbar.evaluated" => {
            let rhs = dbp.mul(&dp).apply(&rep.ev, 2)?;
            ctx.zero_expr(w, &p.mul(&ddbp).apply(&rep.ev, 2)?.sub(&rhs)?)?
                + ctx.zero_expr(w, &ddbp.mul(&p).apply(&rep.ev, 2)?.sub(&rhs)?)?
        }
        "deldelbar.right" => ctx.zero_expr(w, &ddbp.mul(&p).sub(&p.mul(&ddbp).apply(&rep.t, 1)?)?)?,
        "torsion_identity" => {
            let mp = dbp.mul(&dp);
            let lhs = mp.apply(&rep.t, 1)?.apply(&rep.ev, 2)?.scale(&q(aa));
            let rhs = dp
                .mul(&dbp)
                .apply(&rep.ev, 2)?
                .scale(&F::one().neg())
                .add(&mp.apply(&rep.ev, 2)?.scale(&q(aa).sub(&F::one())))?;
            ctx.zero_expr(w, &lhs.sub(&rhs)?)?
        }
        "d_squared" => {
            let dd = d(&d(&p));
            let del2 = calc.map_expr(&p, |e| calc.del(&calc.del(e, true), true));
            let delbar2 = calc.map_expr(&p, |e| calc.del(&calc.del(e, false), false));
            let anti = calc.map_expr(&p, |e| {
                let mut x = calc.del(&calc.del(e, false), true);
                x.add_into(&calc.del(&calc.del(e, true), false));
                x
            });
            ctx.zero_expr(w, &dd)? + ctx.zero_expr(w, &del2)? + ctx.zero_expr(w, &delbar2)? + ctx.zero_expr(w, &anti)?
        }
        "torsion.plus" => ctx.zero_expr(w, &torsion(&dp)?)?,
        "torsion.minus" => ctx.zero_expr(w, &torsion(&dbp)?)?,
        "torsion.left_linear" => {
            let pdp = p.mul(&dp);
            ctx.zero_expr(w, &torsion(&pdp)?.sub(&p.mul(&torsion(&dp)?))?)?
        }
        "cotorsion" => cotorsion()?,
        "levi_civita" => ctx.zero_expr(w, &torsion(&dp)?)? + ctx.zero_expr(w, &torsion(&dbp)?)? + cotorsion()?,
        "classical_limit_pairing" => {
            let n = ctx.n();
            let mut bad = 0;
            for kind in [Sym::Dp, Sym::Dbp] {
                for a in crate::algebra::tuples(n, 4) {
                    bad += geo.pair_table(calc.sym(kind, a[0], a[1]), calc.sym(kind, a[2], a[3])).len();
                }
            }
            bad
        }
        _ => return Err(unknown(id)),
    })
}

fn bimodule<F: Coeff>(ctx: &Context<F>, id: &str) -> Result<usize, CheckError> {
    let rep = &ctx.rep;
    let q = |p| rep.q(p);
    let ww = rep.ww();
    let t = Space::Tensor;
    let perturb = match id {
        "control.connection" => Perturb::Connection,
        "control.braiding" => Perturb::Braiding,
        "control.metric" => Perturb::Metric,
        _ => Perturb::None,
    };
    let geo = ctx.geometry(perturb)?;
    let calc = &geo.calc;
    let (p, dp, dbp) = (calc.p(), calc.dp(), calc.dbp());
    let dpfull = dp.add(&dbp)?;
    let nabla = |x: &Expr<F>| calc.map_expr(x, |e| geo.nabla(e));
    let sigma = |x: &Expr<F>| calc.map_expr(x, |e| geo.sigma(e, 0));
    // ∇(ω p) − σ(ω ⊗ dp) − ∇(ω) p
    let leibniz = |omega: &Expr<F>| -> Result<usize, CheckError> {
        let x = nabla(&omega.mul(&p)).sub(&sigma(&omega.mul(&dpfull)))?.sub(&nabla(omega).mul(&p))?;
        ctx.zero_expr(t, &x)
    };
    let family = |c: char| if c == 'p' { dp.clone() } else { dbp.clone() };
    // The relation (S̃_234 − q^{-(ω,ω)}) p ∂p or (S_123 − q^{(ω,ω)}) p ∂̄p of a factor.
    let relation = |c: char| -> Result<Expr<F>, CheckError> {
        Ok(if c == 'p' {
            p.mul(&dp).apply(&shifted(&rep.st, q(-ww))?, 2)?
        } else {
            p.mul(&dbp).apply(&shifted(&rep.s, q(ww))?, 1)?
        })
    };
    if let Some(rest) = id.strip_prefix("sigma.") {
        let (pair, cond) = rest.split_once('.').ok_or_else(|| unknown(id))?;
        let mut cs = pair.chars();
        let (a, b) = (cs.next().ok_or_else(|| unknown(id))?, cs.next().ok_or_else(|| unknown(id))?);
        let (wa, wb) = (family(a), family(b));
        return match cond {
            "Ep12" => ctx.zero_expr(t, &sigma(&wa.mul(&wb)).apply(&rep.ev_p, 1)?),
            "Ep34" => ctx.zero_expr(t, &sigma(&wa.mul(&wb)).apply(&rep.ev_p, 3)?),
            "left" => ctx.zero_expr(t, &sigma(&relation(a)?.mul(&wb))),
            "right" => ctx.zero_expr(t, &sigma(&wa.mul(&relation(b)?))),
            "tensor" => {
                let x = wa.mul(&p).mul(&wb);
                let right = calc.map_expr(&x, |e| geo.sigma_right(e, 0));
                ctx.zero_expr(t, &sigma(&x).sub(&right)?)
            }
            _ => Err(unknown(id)),
        };
    }
    let term = |x: Elem<F>| ctx.zero(t, &x);
    Ok(match id {
        "decomposition.minus" | "control.braiding" => leibniz(&dbp)?,
        "decomposition.plus" => leibniz(&dp)?,
        "connection" => leibniz(&p.mul(&dp))? + leibniz(&p.mul(&dbp))?,
        "nabla_g" => {
            let (first, second) = geo.nabla_g_terms(&geo.g);
            let mut x = first;
            x.add_into(&second);
            term(x)?
        }
        "nabla_g.first_mp" => term(geo.nabla_at(&geo.g_mp, 0))?,
        "nabla_g.first_pm" => term(geo.nabla_at(&geo.g_pm, 0))?,
        "nabla_g.second_pm" => term(geo.nabla_at(&geo.g_pm, 1))?,
        "nabla_g.second_mp" => term(geo.sigma(&geo.nabla_at(&geo.g_mp, 1), 0))?,
        "control.connection" => ctx.zero_expr(t, &nabla(&dbp).apply(&rep.ev_p, 1)?)?,
        "control.metric" => ctx.zero(Space::Wedge, &geo.g)?,
        _ => return Err(unknown(id)),
    })
}

/// Options of one verification run.
#[derive(Clone, Debug)]
pub struct RunOptions {
    pub suites: Vec<Suite>,
    pub jobs: usize,
    pub timings: bool,
}

/// Catalog entries of the requested suites, guards first, in catalog order.
pub fn selected(suites: &[Suite]) -> Vec<&'static Entry> {
    CATALOG
        .iter()
        .filter(|e| {
            (e.suite == Suite::Guards && suites.iter().any(|s| s.needs_calculus())) || suites.contains(&e.suite)
        })
        .collect()
}

/// Evaluates one entry into a report line.
///
/// Failures other than exhausted budgets are reported on standard error.
pub fn run_entry<F: Coeff>(ctx: &Context<F>, entry: &Entry, t_label: &str, timings: bool) -> CheckResult {
    // The clock is only read on request, which also keeps targets without one usable.
    let start = timings.then(Instant::now);
    let outcome = evaluate(ctx, entry);
    let ms = start.map_or(0, |s| s.elapsed().as_millis() as u64);
    let (status, residual) = match outcome {
        Ok(0) => (Status::Pass, 0),
        Ok(r) => (Status::Fail, r),
        Err(CheckError::Budget { .. }) => (Status::Skipped, 0),
        Err(e) => {
            eprintln!("{} (N = {}, t = {t_label}): {e}", entry.id, ctx.n());
            (Status::Fail, 1)
        }
    };
    let t = if entry.suite == Suite::Classical { "1".to_string() } else { t_label.to_string() };
    CheckResult {
        id: entry.id.clone(),
        suite: entry.suite,
        paper_ref: entry.paper_ref,
        n: ctx.n(),
        t,
        status,
        residual_terms: residual,
        ms,
    }
}

/// Runs the selected entries and returns results in catalog order.
///
/// With more than one job the entries are spread over a worker pool.
pub fn run<F: Coeff>(ctx: &Context<F>, t_label: &str, opts: &RunOptions) -> Vec<CheckResult> {
    let entries = selected(&opts.suites);
    let one = |entry: &&Entry| run_entry(ctx, entry, t_label, opts.timings);
    if opts.jobs <= 1 {
        return entries.iter().map(one).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(opts.jobs).build().expect("thread pool");
    pool.install(|| entries.par_iter().map(one).collect())
}

/// Whether every result has its designed outcome.
pub fn all_as_expected(results: &[CheckResult]) -> bool {
    let by_id: BTreeMap<&str, &Entry> = CATALOG.iter().map(|e| (e.id.as_str(), e)).collect();
    results.iter().all(|r| by_id.get(r.id.as_str()).is_some_and(|e| r.as_expected(e)))
}
