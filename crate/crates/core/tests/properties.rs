use proptest::prelude::*;

use drinfeld_ext::biderivation::Biderivation;
use drinfeld_ext::ext::{find_splitting, reduce_vs_carlitz};
use drinfeld_ext::field::{Fq, FqElement, FqPoly, KElement};
use drinfeld_ext::json::{from_str, BiderivationJson, TModuleJson};
use drinfeld_ext::parse::{parse_k_element, parse_skew};
use drinfeld_ext::skew::{SkewMatrix, SkewPoly};
use drinfeld_ext::tmodule::{carlitz_tensor, is_morphism, DrinfeldModule, TModule};

fn field(q: u64) -> Fq {
    Fq::of_order(q).unwrap()
}

fn poly_strategy(q: u64, max_len: usize) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..q as u32, 0..=max_len)
}

fn to_poly(c: Vec<u32>) -> FqPoly {
    FqPoly::from_coeffs(c.into_iter().map(FqElement).collect())
}

/// (q, num, den) with a nonzero denominator.
fn k_parts() -> impl Strategy<Value = (u64, Vec<u32>, Vec<u32>)> {
    prop::sample::select(vec![2u64, 3, 4, 5]).prop_flat_map(|q| {
        (
            Just(q),
            poly_strategy(q, 3),
            poly_strategy(q, 3).prop_filter("nonzero", |d| d.iter().any(|&c| c != 0)),
        )
    })
}

fn k_elem(fq: &Fq, num: Vec<u32>, den: Vec<u32>) -> KElement {
    KElement::normalize(fq, to_poly(num), to_poly(den)).unwrap()
}

fn k_triple() -> impl Strategy<Value = (Fq, KElement, KElement, KElement)> {
    prop::sample::select(vec![2u64, 3, 4]).prop_flat_map(|q| {
        let part = || (poly_strategy(q, 3), poly_strategy(q, 3).prop_filter("nonzero", |d| d.iter().any(|&c| c != 0)));
        (Just(q), part(), part(), part()).prop_map(|(q, a, b, c)| {
            let fq = field(q);
            let x = k_elem(&fq, a.0, a.1);
            let y = k_elem(&fq, b.0, b.1);
            let z = k_elem(&fq, c.0, c.1);
            (fq, x, y, z)
        })
    })
}

/// A twisted polynomial of τ-degree < len with K coefficients.
fn skew_parts(q: u64, len: usize) -> impl Strategy<Value = Vec<(Vec<u32>, Vec<u32>)>> {
    prop::collection::vec(
        (poly_strategy(q, 2), poly_strategy(q, 2).prop_filter("nonzero", |d| d.iter().any(|&c| c != 0))),
        0..=len,
    )
}

fn to_skew(fq: &Fq, parts: Vec<(Vec<u32>, Vec<u32>)>) -> SkewPoly {
    SkewPoly::from_coeffs(fq, parts.into_iter().map(|(n, d)| k_elem(fq, n, d)).collect())
}

fn skew_triple() -> impl Strategy<Value = (Fq, SkewPoly, SkewPoly, SkewPoly)> {
    prop::sample::select(vec![2u64, 3]).prop_flat_map(|q| {
        (Just(q), skew_parts(q, 3), skew_parts(q, 3), skew_parts(q, 3)).prop_map(|(q, a, b, c)| {
            let fq = field(q);
            (fq.clone(), to_skew(&fq, a), to_skew(&fq, b), to_skew(&fq, c))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn k_is_a_field((fq, x, y, z) in k_triple()) {
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x - &x), &KElement::zero(&fq));
        if !x.is_zero() {
            prop_assert!((&x * &x.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn frobenius_is_a_ring_map((_fq, x, y, _z) in k_triple(), k in 0u32..3) {
        prop_assert_eq!((&x + &y).frobenius(k), &x.frobenius(k) + &y.frobenius(k));
        prop_assert_eq!((&x * &y).frobenius(k), &x.frobenius(k) * &y.frobenius(k));
        prop_assert_eq!(x.frobenius(k).frobenius_root(k), Some(x.clone()));
    }

    #[test]
    fn frobenius_is_the_q_power((q, num, den) in k_parts()) {
        let fq = field(q);
        let x = k_elem(&fq, num, den);
        prop_assert_eq!(x.frobenius(1), x.pow(q as i64).unwrap());
    }

    #[test]
    fn k_elements_print_and_parse((q, num, den) in k_parts()) {
        let fq = field(q);
        let x = k_elem(&fq, num, den);
        prop_assert_eq!(parse_k_element(&fq, &x.to_string()).unwrap(), x);
    }

    #[test]
    fn skew_ring_axioms((_fq, a, b, c) in skew_triple()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        if let (Some(da), Some(db)) = (a.degree(), b.degree()) {
            prop_assert_eq!(a.mul(&b).degree(), Some(da + db));
        }
    }

    #[test]
    fn skew_polys_act_by_composition((fq, a, b, _c) in skew_triple(), (n, d) in (poly_strategy(2, 2), Just(vec![1u32]))) {
        let x = KElement::normalize(&fq, to_poly(n.into_iter().map(|c| c % fq.p()).collect()), to_poly(d)).unwrap();
        prop_assert_eq!(a.mul(&b).apply(&x), a.apply(&b.apply(&x)));
    }

    #[test]
    fn tau_commutation((fq, x, _y, _z) in k_triple()) {
        let tau = SkewPoly::tau(&fq);
        let lhs = tau.mul(&SkewPoly::from_k(x.clone()));
        let rhs = SkewPoly::from_k(x.frobenius(1)).mul(&tau);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn skew_polys_print_and_parse((fq, a, _b, _c) in skew_triple()) {
        prop_assert_eq!(parse_skew(&fq, &a.to_string()).unwrap(), a);
    }

    #[test]
    fn cocycle_law(
        (fq, d0, _b, _c) in skew_triple(),
        ranks in prop::collection::vec(0u32..2, 2..=3),
        a in poly_strategy(2, 2),
        b in poly_strategy(2, 2),
    ) {
        let mut coeffs: Vec<KElement> = ranks.iter().map(|&c| KElement::from_int(&fq, c as i64)).collect();
        coeffs.push(KElement::one(&fq));
        let e = DrinfeldModule::new(coeffs).unwrap().as_tmodule().clone();
        let c = DrinfeldModule::carlitz(&fq).as_tmodule().clone();
        let d = Biderivation::new(e.clone(), c.clone(), SkewMatrix::from_rows(&fq, vec![vec![d0]]).unwrap()).unwrap();
        let (a, b) = (to_poly(a), to_poly(b));
        let ab = a.mul(&b, &fq);
        let rhs = c.phi_eval(&a).mul(&d.eval(&b)).unwrap().add(&d.eval(&a).mul(&e.phi_eval(&b)).unwrap()).unwrap();
        prop_assert_eq!(d.eval(&ab), rhs);
        prop_assert!(is_morphism(&e.phi_eval(&a), &e, &e).unwrap());
    }

    #[test]
    fn reduction_is_canonical_on_inner_shifts((fq, v, u, _c) in skew_triple(), a1 in 0u32..2) {
        let e = DrinfeldModule::new(vec![KElement::from_int(&fq, a1 as i64), KElement::theta(&fq)]).unwrap();
        let c = DrinfeldModule::carlitz(&fq).as_tmodule().clone();
        let one = |p: SkewPoly| SkewMatrix::from_rows(&fq, vec![vec![p]]).unwrap();
        let d = Biderivation::new(e.as_tmodule().clone(), c.clone(), one(v)).unwrap();
        let shifted = d.baer_sum(&Biderivation::inner(&one(u), e.as_tmodule(), &c).unwrap()).unwrap();
        let r1 = reduce_vs_carlitz(&e, &d).unwrap();
        let r2 = reduce_vs_carlitz(&e, &shifted).unwrap();
        prop_assert_eq!(&r1.class, &r2.class);
        prop_assert!(r1.certificate().check && r2.certificate().check);
        let w = find_splitting(&d.sub(&r1.reduced).unwrap(), 6).unwrap();
        prop_assert!(w.is_some());
    }

    #[test]
    fn json_round_trip((fq, a, b, _c) in skew_triple(), n in 1usize..=3) {
        let e = TModule::new(SkewMatrix::from_rows(&fq, vec![vec![SkewPoly::from_k(KElement::theta(&fq)).add(&b.mul(&SkewPoly::tau(&fq)))]]).unwrap()).unwrap();
        let target = carlitz_tensor(&fq, n).unwrap();
        let mut value = SkewMatrix::zeros(&fq, n, 1);
        value.set(n - 1, 0, a);
        let d = Biderivation::new(e.clone(), target, value).unwrap();
        let text = serde_json::to_string(&BiderivationJson::encode(&d)).unwrap();
        let back: BiderivationJson = from_str(&text).unwrap();
        prop_assert_eq!(back.decode(&fq).unwrap(), d);
        let m: TModuleJson = from_str(&serde_json::to_string(&TModuleJson::encode(&e)).unwrap()).unwrap();
        prop_assert_eq!(m.decode(&fq).unwrap(), e);
    }
}
