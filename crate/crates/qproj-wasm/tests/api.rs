//! The bindings return JSON strings; their success paths also run natively.

use qproj_wasm::{normal_form, operator, operator_names, run_suite};

fn parse(s: Result<String, wasm_bindgen::JsError>) -> serde_json::Value {
    serde_json::from_str(&s.unwrap_or_else(|_| panic!("binding returned an error"))).unwrap()
}

#[test]
fn every_named_operator_dumps() {
    let names = operator_names();
    assert_eq!(names.len(), 22);
    for name in &names {
        let d = parse(operator(name, 2, "1/2"));
        assert!(d["entries"].as_array().is_some_and(|e| !e.is_empty()), "{name}");
    }
}

#[test]
fn normal_forms_are_exact() {
    let d = parse(normal_form("f[1] - f[1]", 2, "symbolic"));
    assert_eq!(d["words"], serde_json::json!([]));
    let d = parse(normal_form("p dp", 3, "2/3"));
    assert!(!d["words"].as_array().unwrap().is_empty());
}

#[test]
fn operator_suite_passes_in_the_page_configuration() {
    let results = parse(run_suite("operators", 3, "symbolic"));
    let results = results.as_array().unwrap();
    assert!(!results.is_empty());
    assert!(results.iter().all(|r| r["status"] == "pass"));
}
