use std::sync::Arc;

use sgx_core::construct::{
    adjoin_identity, adjoin_zero, build_free_nilpotent, direct_product, find_isomorphism, is_homomorphism,
    quotient_by_partition, rees_quotient, zero_direct_union,
};
use sgx_core::io;
use sgx_core::partition::congruence_closure;
use sgx_core::semigroup::{cyclic_group, semilattice2, trivial};
use sgx_core::{nilpotency_profile, ElementId, FiniteSemigroup};

fn ab() -> Vec<String> {
    vec!["a".into(), "b".into()]
}

fn assert_associative(s: &FiniteSemigroup) {
    assert_eq!(s.associativity_witness(), None, "{} is not associative", s.name());
}

#[test]
fn free_nilpotent_orders() {
    for d in 1..=6 {
        let s = build_free_nilpotent(&ab(), d).unwrap();
        assert_eq!(s.order(), (1 << d) - 1, "FN{d}");
        assert_associative(&s);
        let p = nilpotency_profile(&s);
        assert_eq!(p.d, Some(d));
    }
}

#[test]
fn adjoined_identity_and_zero() {
    let s = build_free_nilpotent(&ab(), 3).unwrap();
    let m = adjoin_identity(&s, false).unwrap();
    assert_eq!(m.order(), s.order() + 1);
    assert!(m.is_monoid());
    assert_associative(&m);
    let z = adjoin_zero(&cyclic_group(3).unwrap()).unwrap();
    assert_eq!(z.order(), 4);
    assert!(z.zero().is_some());
    assert_associative(&z);
    let g = cyclic_group(3).unwrap();
    assert_eq!(adjoin_identity(&g, true).unwrap().order(), 3);
}

#[test]
fn product_projections_are_homomorphisms() {
    let a = semilattice2();
    let b = cyclic_group(3).unwrap();
    let p = direct_product(&a, &b).unwrap();
    assert_eq!(p.order(), 6);
    assert_associative(&p);
    let first: Vec<ElementId> = (0..6).map(|k| ElementId::new(k / 3)).collect();
    let second: Vec<ElementId> = (0..6).map(|k| ElementId::new(k % 3)).collect();
    assert!(is_homomorphism(&p, &a, &first));
    assert!(is_homomorphism(&p, &b, &second));
}

#[test]
fn zero_union_embeds_both_sides() {
    let s = build_free_nilpotent(&ab(), 3).unwrap();
    let t = semilattice2();
    let u = zero_direct_union(&s, &t).unwrap();
    assert_associative(&u.semigroup);
    let s0 = if s.zero().is_some() { s.clone() } else { adjoin_zero(&s).unwrap() };
    let t0 = if t.zero().is_some() { t.clone() } else { adjoin_zero(&t).unwrap() };
    assert_eq!(u.semigroup.order(), s0.order() + t0.order() - 1);
    assert!(is_homomorphism(&s0, &u.semigroup, &u.left));
    assert!(is_homomorphism(&t0, &u.semigroup, &u.right));
}

#[test]
fn quotient_map_is_a_homomorphism() {
    let s = build_free_nilpotent(&ab(), 4).unwrap();
    let pairs = [(s.element("ab").unwrap(), s.element("ba").unwrap())];
    let p = congruence_closure(&s, &pairs);
    let q = quotient_by_partition(&s, &p).unwrap();
    assert_associative(&q);
    assert_eq!(q.order(), p.len());
    let map: Vec<ElementId> = s.elements().map(|e| ElementId::new(p.class_of(e))).collect();
    assert!(is_homomorphism(&s, &q, &map));
    // ab = ba makes FN4{a,b} commutative
    assert!(q.is_commutative());
}

#[test]
fn rees_quotient_collapses_the_ideal() {
    let s = build_free_nilpotent(&ab(), 4).unwrap();
    let ideal: Vec<ElementId> = s.elements().filter(|&e| s.label(e).len() >= 3 || e.index() == 0).collect();
    let r = rees_quotient(&s, &ideal).unwrap();
    assert_eq!(r.order(), s.order() - ideal.len() + 1);
    assert_associative(&r);
    assert!(find_isomorphism(&r, &build_free_nilpotent(&ab(), 3).unwrap()).is_some());
}

#[test]
fn sg_json_round_trips() {
    let samples = [
        trivial(),
        semilattice2(),
        cyclic_group(5).unwrap(),
        adjoin_identity(&build_free_nilpotent(&ab(), 4).unwrap(), false).unwrap(),
    ];
    for s in samples {
        let back = io::from_sg_json(&io::to_sg_json(&s)).unwrap();
        assert_eq!(back.labels(), s.labels());
        assert_eq!(back.flat_table(), s.flat_table());
        assert_eq!(back.name(), s.name());
    }
}

#[test]
fn sgfn_round_trips() {
    let s = Arc::new(semilattice2());
    let t = sgx_core::Term::parse("x1 x3").unwrap();
    let f = sgx_core::function::term_to_function(s.clone(), &t, &Default::default());
    let bytes = io::encode_sgfn(&f).unwrap();
    let g = io::decode_sgfn(&bytes, s).unwrap();
    assert_eq!(g.table(), f.table());
    let other = Arc::new(cyclic_group(3).unwrap());
    assert!(matches!(
        io::decode_sgfn(&bytes, other),
        Err(sgx_core::Error::UniverseMismatch { .. })
    ));
}
