use std::collections::BTreeSet;
use std::sync::Arc;

use sgx_core::imt::{degree_lower_bound_probe, enumerate_imt_functions};
use sgx_core::semigroup::{cyclic_group, semilattice2};
use sgx_core::tuples::{decode, encode};
use sgx_core::{ElementId, FiniteSemigroup};

/// Tables of every word function of arity 3, by brute force over words of length
/// up to 6 (enough for both two-element universes here: x^3 = x in each).
fn word_tables(s: &FiniteSemigroup) -> BTreeSet<Vec<usize>> {
    let cells = 8;
    let mut out = BTreeSet::new();
    let mut frontier: Vec<Vec<usize>> = vec![vec![0], vec![1], vec![2]];
    for _ in 0..6 {
        let mut next = Vec::new();
        for w in &frontier {
            let t: Vec<usize> = (0..cells)
                .map(|idx| {
                    let a = decode(idx, 2, 3);
                    s.product(w.iter().map(|&v| a[v])).unwrap().index()
                })
                .collect();
            out.insert(t);
            for v in 0..3 {
                let mut w2 = w.clone();
                w2.push(v);
                next.push(w2);
            }
        }
        frontier = next;
    }
    out
}

fn minor(table: &[usize], i: usize, j: usize) -> Vec<usize> {
    (0..8)
        .map(|idx| {
            let mut a = decode(idx, 2, 3);
            a[i] = a[j];
            table[encode(&a, 2)]
        })
        .collect()
}

fn brute_force(s: &FiniteSemigroup) -> (BTreeSet<Vec<usize>>, BTreeSet<Vec<usize>>) {
    let terms = word_tables(s);
    let mut imt = BTreeSet::new();
    for bits in 0u32..256 {
        let t: Vec<usize> = (0..8).map(|k| ((bits >> k) & 1) as usize).collect();
        let ok = [(0, 1), (0, 2), (1, 2)]
            .iter()
            .all(|&(i, j)| terms.contains(&minor(&t, i, j)));
        if ok {
            imt.insert(t);
        }
    }
    (imt, terms)
}

fn enumerated(s: Arc<FiniteSemigroup>) -> BTreeSet<Vec<usize>> {
    enumerate_imt_functions(s, 3)
        .unwrap()
        .iter()
        .map(|f| f.table().iter().map(|e: &ElementId| e.index()).collect())
        .collect()
}

#[test]
fn semilattice_enumeration_matches_brute_force() {
    let s = Arc::new(semilattice2());
    let (imt, terms) = brute_force(&s);
    assert_eq!(terms.len(), 7);
    assert_eq!(enumerated(s), imt);
    assert_eq!((imt.len(), imt.difference(&terms).count()), (27, 20));
}

#[test]
fn z2_enumeration_matches_brute_force() {
    let s = Arc::new(cyclic_group(2).unwrap());
    let (imt, terms) = brute_force(&s);
    assert_eq!(terms.len(), 8);
    assert_eq!(enumerated(s.clone()), imt);
    let bad = imt.difference(&terms).count();
    assert_eq!((imt.len(), bad), (16, 8));

    let report = degree_lower_bound_probe(s, 3).unwrap();
    let v = &report.verdicts[0];
    assert_eq!((v.imt_functions, v.non_term_functions), (16, 8));
}
