use qproj::checks::{self, Context, Engine, RunOptions, Suite, CATALOG};
use qproj::dump;
use qproj::rep::Rep;
use qproj::scalar::{Param, Scalar, Q};
use std::collections::BTreeSet;

fn count(prefix: &str) -> usize {
    CATALOG.iter().filter(|e| e.id.starts_with(prefix)).count()
}

#[test]
fn ids_are_unique_and_prefixed_by_their_suite() {
    let ids: BTreeSet<&str> = CATALOG.iter().map(|e| e.id.as_str()).collect();
    assert_eq!(ids.len(), CATALOG.len());
    for e in CATALOG.iter() {
        assert!(e.id.starts_with(&format!("{}.", e.suite.name())), "{}", e.id);
        assert!(!e.paper_ref.is_empty(), "{}", e.id);
    }
}

#[test]
fn guards_come_first() {
    let first_other = CATALOG.iter().position(|e| e.suite != Suite::Guards).unwrap();
    assert!(CATALOG[first_other..].iter().all(|e| e.suite != Suite::Guards));
}

#[test]
fn every_identity_family_is_covered() {
    let families = [
        ("operators.braid.", 8),
        ("operators.duality.", 4),
        ("operators.naturality.", 8),
        ("operators.evaluation_braiding", 1),
        ("operators.hecke.", 2),
        ("operators.S.commute", 2),
        ("operators.S.braid", 2),
        ("operators.S.quadratic", 2),
        ("operators.ETT", 1),
        ("operators.S.evaluation", 2),
        ("operators.EpET", 1),
        ("operators.StESt", 1),
        ("operators.T.braid", 1),
        ("algebra.relations.", 4),
        ("algebra.projections.", 3),
        ("algebra.redundancy.", 3),
        ("algebra.calc_relations.", 2),
        ("algebra.S_action_", 4),
        ("algebra.right_module.", 2),
        ("algebra.S_right_module.", 2),
        ("algebra.S_bimodule.", 2),
        ("algebra.evaluations.", 4),
        ("algebra.flatness", 1),
        ("algebra.engines.", 2),
        ("metric.symmetric", 1),
        ("metric.real", 2),
        ("metric.central", 1),
        ("metric.kahler.", 2),
        ("metric.degree_three.", 2),
        ("metric.identity.", 2),
        ("metric.descent.", 3),
        ("metric.inverse.", 4),
        ("connection.well_defined.", 4),
        ("connection.deldelbar", 3),
        ("connection.torsion_identity", 1),
        ("connection.torsion.", 3),
        ("connection.cotorsion", 1),
        ("connection.levi_civita", 1),
        ("bimodule.decomposition.", 2),
        ("bimodule.connection", 1),
        ("bimodule.nabla_g", 5),
        ("bimodule.control.", 3),
        ("classical.", 8),
        ("guards.", 6),
    ];
    for (prefix, n) in families {
        assert_eq!(count(prefix), n, "{prefix}");
    }
    let sigma: Vec<_> =
        CATALOG.iter().filter(|e| e.id.starts_with("bimodule.sigma.") && !e.id.ends_with(".tensor")).collect();
    assert_eq!(sigma.len(), 16, "the sixteen well-definedness conditions of the generalized braiding");
    let controls: Vec<_> = CATALOG.iter().filter(|e| e.control).map(|e| e.id.as_str()).collect();
    assert_eq!(controls, ["bimodule.control.connection", "bimodule.control.braiding", "bimodule.control.metric"]);
}

#[test]
fn selection_adds_guards_only_for_calculus_suites() {
    assert!(checks::selected(&[Suite::Operators]).iter().all(|e| e.suite == Suite::Operators));
    let algebra = checks::selected(&[Suite::Algebra]);
    assert_eq!(algebra[0].id, "guards.unit");
    assert!(algebra.iter().all(|e| matches!(e.suite, Suite::Guards | Suite::Algebra)));
}

#[test]
fn reports_are_deterministic_and_ordered() {
    let report = || {
        let ctx = Context::new(Param::<Scalar>::symbolic(2), Engine::Rewrite, 12).unwrap();
        let opts = RunOptions { suites: vec![Suite::Operators, Suite::Classical], jobs: 3, timings: false };
        serde_json::to_string_pretty(&checks::run(&ctx, "symbolic", &opts)).unwrap()
    };
    let a = report();
    assert_eq!(a, report());
    let parsed: Vec<serde_json::Value> = serde_json::from_str(&a).unwrap();
    assert_eq!(parsed[0].as_object().unwrap().len(), 8);
    // Parsed objects do not keep key order, so read it from the text of the first object.
    let first = &a[..a.find("\"ms\"").unwrap() + 4];
    let positions: Vec<usize> =
        ["\"id\"", "\"suite\"", "\"paper_ref\"", "\"n\"", "\"t\"", "\"status\"", "\"residual_terms\"", "\"ms\""]
            .iter()
            .map(|k| first.find(k).unwrap())
            .collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]));
    let ids: Vec<&str> = parsed.iter().map(|r| r["id"].as_str().unwrap()).collect();
    let expected: Vec<&str> =
        checks::selected(&[Suite::Operators, Suite::Classical]).iter().map(|e| e.id.as_str()).collect();
    assert_eq!(ids, expected);
    assert!(parsed.iter().filter(|r| r["suite"] == "classical").all(|r| r["t"] == "1"));
    assert!(parsed.iter().all(|r| r["ms"] == 0));
}

#[test]
fn empty_report_is_an_empty_array() {
    let ctx = Context::new(Param::rational(2, Q::from_integer(3.into())), Engine::Rewrite, 12).unwrap();
    let results = checks::run(&ctx, "3", &RunOptions { suites: vec![], jobs: 1, timings: false });
    assert_eq!(serde_json::to_string(&results).unwrap(), "[]");
}

#[test]
fn budget_exhaustion_skips_instead_of_passing() {
    let ctx = Context::new(Param::rational(2, Q::new(1.into(), 2.into())), Engine::Rewrite, 4).unwrap();
    let results = checks::run(&ctx, "1/2", &RunOptions { suites: vec![Suite::Metric], jobs: 1, timings: false });
    let inverse = results.iter().find(|r| r.id == "metric.inverse.left.del").unwrap();
    assert_eq!(inverse.status, checks::Status::Skipped);
    assert_eq!(serde_json::to_value(inverse.status).unwrap(), "skipped-degree-budget");
}

#[test]
fn operator_dump_lists_inputs_before_outputs() {
    let rep = Rep::build(Param::<Scalar>::symbolic(2)).unwrap();
    let d = dump::operator(rep.named("E").unwrap());
    assert_eq!(d.signature_in, ["V*", "V"]);
    assert!(d.signature_out.is_empty());
    assert_eq!(d.entries.len(), 2);
    assert!(d.entries.iter().all(|(i, o, c)| i.len() == 2 && o.is_empty() && c == "1/1"));
}

#[test]
fn element_dump_reduces_and_rejects_bad_input() {
    let ctx = Context::new(Param::<Scalar>::symbolic(2), Engine::Rewrite, 0).unwrap();
    let calc = ctx.calc().unwrap();
    let dump = |src: &str| dump::element(&dump::parse(src, &calc).unwrap(), &calc.model).unwrap();
    // Normal forms order the f letters, so both products of f_1 and f_2 reduce to multiples of one word.
    let a = dump("f[1] f[2]");
    let b = dump("f[2] f[1]");
    assert_eq!(a.words.len(), 1);
    assert_eq!(a.words[0].types, ["f", "f"]);
    assert_eq!(a.words[0].coeffs.len(), 1);
    assert_eq!(b.words[0].coeffs.len(), 1);
    assert_eq!(a.words[0].coeffs[0].0, b.words[0].coeffs[0].0);
    assert!(dump("f[1] - f[1]").words.is_empty());
    let family = dump("p");
    assert!(family.words.iter().all(|w| w.coeffs.iter().all(|(i, _)| i.len() == 2 + w.types.len())));
    assert!(dump::parse("p[3,1]", &calc).is_err());
    assert!(dump::parse("x", &calc).is_err());
    assert!(dump::parse("", &calc).is_err());
}
