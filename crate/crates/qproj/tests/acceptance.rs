//! Acceptance criteria, one line per criterion.
//!
//! Every criterion demands an exact zero residual for each of its identities,
//! no entry skipped for lack of degree budget, and nonzero residuals for the
//! negative controls.

use qproj::checks::{self, CheckResult, Context, Engine, Suite, CATALOG};
use qproj::scalar::{parse_rational, Coeff, Param, Scalar, Q};
use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

fn context<F: Coeff>(param: Param<F>) -> Context<F> {
    let n = param.n;
    Context::new(param, Engine::Cross, checks::default_max_degree(n)).expect("context")
}

fn rational(n: usize, t: &str) -> (Context<Q>, &str) {
    (context(Param::rational(n, parse_rational(t).unwrap())), t)
}

/// Results of one suite, sharing whatever the context has already built.
fn suite<F: Coeff>((ctx, label): &(Context<F>, &str), suite: Suite) -> Vec<CheckResult> {
    CATALOG.iter().filter(|e| e.suite == suite).map(|e| checks::run_entry(ctx, e, label, false)).collect()
}

/// Problems with a set of results: anything that is not a pass, or a control that passed.
fn problems_of(results: &[CheckResult]) -> Vec<String> {
    let controls: BTreeMap<&str, bool> = CATALOG.iter().map(|e| (e.id.as_str(), e.control)).collect();
    results
        .iter()
        .filter(|r| if controls[r.id.as_str()] { r.residual_terms == 0 } else { r.status != checks::Status::Pass })
        .map(|r| format!("{} (N = {}, t = {}): {:?}, residual {}", r.id, r.n, r.t, r.status, r.residual_terms))
        .collect()
}

#[derive(Default)]
struct Report {
    failed: bool,
    pending: Vec<String>,
}

impl Report {
    /// Adds a problem to the next criterion line unless `ok` holds.
    fn require(&mut self, ok: bool, problem: String) {
        if !ok {
            self.pending.push(problem);
        }
    }

    fn line(&mut self, k: usize, what: &str, results: &[CheckResult], start: Instant) {
        let mut problems = std::mem::take(&mut self.pending);
        problems.extend(problems_of(results));
        let verdict = if problems.is_empty() && !results.is_empty() { "PASS" } else { "FAIL" };
        println!(
            "criterion {k}: {verdict}  {what} ({} results, {:.1} s)",
            results.len(),
            start.elapsed().as_secs_f64()
        );
        for p in &problems {
            println!("    {p}");
        }
        self.failed |= verdict == "FAIL";
    }
}

fn main() -> ExitCode {
    use Suite::*;
    let mut report = Report::default();

    let start = Instant::now();
    let mut ops = Vec::new();
    for n in [2, 3, 4] {
        ops.extend(suite(&(context(Param::<Scalar>::symbolic(n)), "symbolic"), Operators));
    }
    report.line(1, "operator identities, N = 2, 3, 4, symbolic t", &ops, start);

    let n2 = [rational(2, "1/2"), rational(2, "2/3"), rational(2, "3")];
    let n3 = rational(3, "1/2");

    let start = Instant::now();
    let mut algebra: Vec<_> = n2.iter().flat_map(|c| suite(c, Algebra)).collect();
    algebra.extend(suite(&n3, Algebra));
    report.line(2, "algebra relations and engine agreement, N = 2 at three t, N = 3 at t = 1/2", &algebra, start);

    let start = Instant::now();
    let metric: Vec<_> = n2[..2].iter().flat_map(|c| suite(c, Metric)).collect();
    report.line(3, "metric properties, N = 2 at two t", &metric, start);

    let start = Instant::now();
    let connection: Vec<_> = n2[..2].iter().flat_map(|c| suite(c, Connection)).collect();
    report.line(4, "connection, torsion and cotorsion, N = 2 at two t", &connection, start);

    let start = Instant::now();
    let bimodule = suite(&n2[0], Bimodule);
    let controls = bimodule.iter().filter(|r| r.id.contains("control")).count();
    report.require(controls == 3, format!("expected three negative controls, found {controls}"));
    report.line(
        5,
        "generalized braiding, bimodule connection and ∇g = 0, N = 2 at t = 1/2, three controls",
        &bimodule,
        start,
    );

    let start = Instant::now();
    let classical: Vec<_> = [2, 3].into_iter().flat_map(|n| suite(&rational(n, "1"), Classical)).collect();
    report.line(6, "classical limit at t = 1, N = 2, 3", &classical, start);

    let start = Instant::now();
    let guards: Vec<_> = n2.iter().chain([&n3]).flat_map(|c| suite(c, Guards)).collect();
    report.line(7, "non-degeneracy guards on every run above", &guards, start);

    if report.failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
