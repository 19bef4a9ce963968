use qproj::algebra::Model;
use qproj::oracle::{compare_component, random_agreement, Grade, Oracle};
use qproj::rep::Rep;
use qproj::scalar::{Param, Q};
use std::sync::Arc;

fn model(n: usize, t: Q) -> (Arc<Rep<Q>>, Model<Q>) {
    let rep = Arc::new(Rep::build(Param::rational(n, t)).unwrap());
    let model = Model::new(rep.clone()).unwrap();
    (rep, model)
}

#[test]
fn engines_agree_exhaustively_for_n2() {
    let (rep, model) = model(2, Q::new(1.into(), 2.into()));
    let len = 4;
    let oracle = Oracle::new(&rep, len);
    for df in 0..=2usize {
        for dv in 0..=2 - df {
            for z in -4i64..=4 {
                let a = compare_component(&oracle, &model, Grade { z, df, dv }, len).unwrap();
                assert!(a.agrees(), "{a:?}");
            }
        }
    }
}

#[test]
fn random_elements_agree_for_n3() {
    let (rep, model) = model(3, Q::new(2.into(), 3.into()));
    let oracle = Oracle::new(&rep, 4);
    let grades = [Grade { z: 0, df: 0, dv: 0 }, Grade { z: 1, df: 1, dv: 0 }, Grade { z: 0, df: 1, dv: 1 }];
    assert_eq!(random_agreement(&oracle, &model, &grades, 200, 7).unwrap(), 0);
}
