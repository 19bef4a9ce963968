//! Randomized checks of the algebraic laws the engine relies on.

use proptest::prelude::*;
use qproj::algebra::{sub_elem, Elem, Kind, Model};
use qproj::leg::{decode, Chain, LegOp, Module, Slot};
use qproj::oracle::{rewrite_zero, Oracle};
use qproj::rep::Rep;
use qproj::scalar::{qpow, Coeff, Pairing, Param, Poly, Scalar, Q};
use std::sync::{Arc, LazyLock};

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(-4i64..=4, 0..4).prop_map(|c| Poly::from_coeffs(c.into_iter().map(Into::into).collect()))
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (poly(), poly().prop_filter("nonzero denominator", |p| !p.is_zero())).prop_map(|(n, d)| Scalar::new(n, d))
}

fn rational() -> impl Strategy<Value = Q> {
    (-6i64..=6, 1i64..=6).prop_map(|(a, b)| Q::new(a.into(), b.into()))
}

proptest! {
    #[test]
    fn scalar_ring_laws(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.sub(&a), Scalar::zero());
    }

    #[test]
    fn scalar_inverse(a in scalar()) {
        match a.inv() {
            Some(inv) => prop_assert_eq!(a.mul(&inv), Scalar::one()),
            None => prop_assert!(a.is_zero()),
        }
    }

    #[test]
    fn scalar_text_round_trip(a in scalar()) {
        prop_assert_eq!(Scalar::parse(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in scalar(), b in scalar(), t in rational()) {
        if let (Ok(x), Ok(y)) = (a.eval_at(&t), b.eval_at(&t)) {
            prop_assert_eq!(a.add(&b).eval_at(&t).unwrap(), &x + &y);
            if let Ok(p) = a.mul(&b).eval_at(&t) {
                prop_assert_eq!(p, &x * &y);
            }
        }
    }

    #[test]
    fn qpow_is_additive(n in 2usize..=5, a in -12i64..=12, b in -12i64..=12) {
        let (x, y) = (Pairing::new(a, n as i64), Pairing::new(b, n as i64));
        prop_assert_eq!(qpow(x + y, n).unwrap(), qpow(x, n).unwrap().mul(&qpow(y, n).unwrap()));
    }
}

fn random_op(n: usize, sig_in: Vec<Slot>, sig_out: Vec<Slot>, seed: &[i64]) -> LegOp<Q> {
    let k = sig_out.len();
    let mut next = seed.iter().cycle().copied();
    LegOp::from_fn(n, sig_in, sig_out, |_| {
        (0..n.pow(k as u32)).map(|r| (decode(n, k, r), Q::from_integer(next.next().unwrap_or(0).into()))).collect()
    })
}

proptest! {
    #[test]
    fn operators_on_disjoint_legs_commute(
        a in prop::collection::vec(-3i64..=3, 1..20),
        b in prop::collection::vec(-3i64..=3, 1..20),
    ) {
        let n = 2;
        let x = random_op(n, vec![Slot::V, Slot::D], vec![Slot::D, Slot::V], &a);
        let y = random_op(n, vec![Slot::V], vec![Slot::V], &b);
        let sig = vec![Slot::V, Slot::D, Slot::V];
        let xy = Chain::on(n, sig.clone()).then(&x, 1).unwrap().then(&y, 3).unwrap().build();
        let yx = Chain::on(n, sig).then(&y, 3).unwrap().then(&x, 1).unwrap().build();
        prop_assert_eq!(xy, yx);
    }

    #[test]
    fn composition_is_associative(
        a in prop::collection::vec(-3i64..=3, 1..20),
        b in prop::collection::vec(-3i64..=3, 1..20),
        c in prop::collection::vec(-3i64..=3, 1..20),
    ) {
        let n = 2;
        let vd = || vec![Slot::V, Slot::D];
        let (x, y, z) = (random_op(n, vd(), vd(), &a), random_op(n, vd(), vd(), &b), random_op(n, vd(), vd(), &c));
        prop_assert_eq!(x.compose(&y).unwrap().compose(&z).unwrap(), x.compose(&y.compose(&z).unwrap()).unwrap());
    }
}

static MODEL: LazyLock<(Arc<Rep<Q>>, Model<Q>)> = LazyLock::new(|| {
    let rep = Arc::new(Rep::build(Param::rational(2, Q::new(2.into(), 3.into()))).unwrap());
    let model = Model::new(rep.clone()).unwrap();
    (rep, model)
});

static ORACLE: LazyLock<Oracle<Q>> = LazyLock::new(|| Oracle::new(&MODEL.0, 4));

fn element(max_len: usize) -> impl Strategy<Value = Elem<Q>> {
    let word = prop::collection::vec((0u8..4, 0usize..2), 0..=max_len);
    prop::collection::vec((word, -3i64..=3), 1..4).prop_map(|terms| {
        let model = &MODEL.1;
        let mut x = Elem::new();
        for (w, c) in terms {
            let w: Vec<u8> = w.into_iter().map(|(k, i)| model.letter(Kind::from_index(k), i)).collect();
            x.add_into(&Elem::from([(w, Q::from_integer(c.into()))]));
        }
        x
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_form_is_idempotent(x in element(6)) {
        let model = &MODEL.1;
        let once = model.nf(&x).unwrap();
        prop_assert_eq!(model.nf(&once).unwrap(), once);
    }

    #[test]
    fn normal_form_is_linear(x in element(5), y in element(5)) {
        let model = &MODEL.1;
        let mut sum = x.clone();
        sum.add_into(&y);
        let mut parts = model.nf(&x).unwrap();
        parts.add_into(&model.nf(&y).unwrap());
        prop_assert_eq!(model.nf(&sum).unwrap(), parts);
    }

    #[test]
    fn normal_form_differs_by_a_relation(x in element(4)) {
        let model = &MODEL.1;
        let diff = sub_elem(&model.nf(&x).unwrap(), &x);
        if diff.keys().all(|w| w.len() <= 4) {
            prop_assert!(ORACLE.zero_test(&diff).unwrap().is_zero());
        }
    }

    #[test]
    fn engines_agree_on_random_elements(x in element(4)) {
        let model = &MODEL.1;
        prop_assert_eq!(rewrite_zero(model, &x).unwrap().is_zero(), ORACLE.zero_test(&x).unwrap().is_zero());
    }
}
