//! Browser bindings: operator dumps, normal forms and suite runs as JSON strings.
//!
//! Every entry point takes the dimension `N` and the parameter `t`, given either
//! as `NUM/DEN` or as the word `symbolic`.

use qproj::checks::{self, Context, Engine, RunOptions, Suite};
use qproj::dump;
use qproj::rep::Rep;
use qproj::scalar::{parse_rational, Coeff, Param, Scalar};
use wasm_bindgen::prelude::*;

/// Largest dimension the demo accepts; larger ones are slow in a browser tab.
const MAX_DIM: usize = 4;

fn check_dim(n: usize) -> Result<(), JsError> {
    if (2..=MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(JsError::new(&format!("dimension must be between 2 and {MAX_DIM}")))
    }
}

/// Runs `f` over the rationals or over rational functions, as `t` requests.
fn with_param<R>(
    n: usize,
    t: &str,
    rational: impl FnOnce(Param<qproj::scalar::Q>, &str) -> Result<R, JsError>,
    symbolic: impl FnOnce(Param<Scalar>, &str) -> Result<R, JsError>,
) -> Result<R, JsError> {
    check_dim(n)?;
    let t = t.trim();
    if t == "symbolic" {
        return symbolic(Param::symbolic(n), "symbolic");
    }
    let t0 = parse_rational(t)
        .filter(|x| !Coeff::is_zero(x))
        .ok_or_else(|| JsError::new("t must be a nonzero NUM/DEN or `symbolic`"))?;
    rational(Param::rational(n, t0), t)
}

fn operator_json<F: Coeff>(param: Param<F>, name: &str) -> Result<String, JsError> {
    let rep = Rep::build(param).map_err(|e| JsError::new(&e.to_string()))?;
    let op = rep.named(name).ok_or_else(|| JsError::new(&format!("unknown operator `{name}`")))?;
    Ok(serde_json::to_string(&dump::operator(op))?)
}

fn element_json<F: Coeff>(param: Param<F>, expr: &str) -> Result<String, JsError> {
    let ctx = Context::new(param, Engine::Rewrite, 0).map_err(|e| JsError::new(&e.to_string()))?;
    let calc = ctx.calc().map_err(|e| JsError::new(&e.to_string()))?;
    let x = dump::parse(expr, &calc).map_err(|e| JsError::new(&e.to_string()))?;
    Ok(serde_json::to_string(&dump::element(&x, &calc.model).map_err(|e| JsError::new(&e.to_string()))?)?)
}

fn suite_json<F: Coeff>(param: Param<F>, label: &str, suite: Suite) -> Result<String, JsError> {
    let n = param.n;
    let ctx = Context::new(param, Engine::Rewrite, checks::default_max_degree(n))
        .map_err(|e| JsError::new(&e.to_string()))?;
    let results = checks::run(&ctx, label, &RunOptions { suites: vec![suite], jobs: 1, timings: false });
    Ok(serde_json::to_string(&results)?)
}

/// Names accepted by [`operator`].
#[wasm_bindgen]
pub fn operator_names() -> Vec<String> {
    Rep::<Scalar>::OPERATOR_NAMES.iter().map(|s| s.to_string()).collect()
}

/// Nonzero entries of a named operator.
#[wasm_bindgen]
pub fn operator(name: &str, n: usize, t: &str) -> Result<String, JsError> {
    with_param(n, t, |p, _| operator_json(p, name), |p, _| operator_json(p, name))
}

/// Normal form of an expression such as `p dp` or `v[1] f[1]`.
#[wasm_bindgen]
pub fn normal_form(expr: &str, n: usize, t: &str) -> Result<String, JsError> {
    with_param(n, t, |p, _| element_json(p, expr), |p, _| element_json(p, expr))
}

/// Report lines of one suite, run on the calling thread with the rewriting engine.
#[wasm_bindgen]
pub fn run_suite(suite: &str, n: usize, t: &str) -> Result<String, JsError> {
    let suite = Suite::parse(suite).ok_or_else(|| JsError::new(&format!("unknown suite `{suite}`")))?;
    with_param(n, t, |p, l| suite_json(p, l, suite), |p, l| suite_json(p, l, suite))
}
