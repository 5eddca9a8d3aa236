use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use sgx_core::closure::{word_function_closure, WordClosure};
use sgx_core::construct::{adjoin_identity, build_free_nilpotent};
use sgx_core::digraph::Digraph;
use sgx_core::function::{identification_minor, term_table, variable_exponent};
use sgx_core::membership::{Membership, Strategy as Method, TermTester};
use sgx_core::semigroup::{cyclic_group, semilattice2};
use sgx_core::synth::{synthesize_term_4nilpotent, synthesize_term_nilpotent_free, SynthesisConfig};
use sgx_core::term::terms_equivalent;
use sgx_core::tuples::Lex;
use sgx_core::{ElementId, FiniteFunction, FiniteSemigroup, Limits, MinorIndex, Term};

fn free_monoid(d: usize) -> Arc<FiniteSemigroup> {
    let ab = ["a".to_string(), "b".to_string()];
    Arc::new(adjoin_identity(&build_free_nilpotent(&ab, d).unwrap(), false).unwrap())
}

fn fn3() -> Arc<FiniteSemigroup> {
    static S: OnceLock<Arc<FiniteSemigroup>> = OnceLock::new();
    S.get_or_init(|| free_monoid(3)).clone()
}

fn fn4() -> Arc<FiniteSemigroup> {
    static S: OnceLock<Arc<FiniteSemigroup>> = OnceLock::new();
    S.get_or_init(|| free_monoid(4)).clone()
}

fn table(s: &Arc<FiniteSemigroup>, t: &Term) -> Vec<ElementId> {
    term_table(s.clone(), t, &Limits::default())
        .unwrap()
        .table()
        .unwrap()
        .to_vec()
}

fn term_strategy(max_arity: usize, max_len: usize) -> impl Strategy<Value = Term> {
    (1..=max_arity).prop_flat_map(move |n| {
        proptest::collection::vec(0..n, 1..=max_len).prop_map(move |w| Term::new(w, n).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn minor_of_word_is_word(
        (t, i, j) in (2usize..=4).prop_flat_map(|n| {
            (proptest::collection::vec(0..n, 1..=6), 0..n - 1)
                .prop_flat_map(move |(w, i)| (Just(Term::new(w, n).unwrap()), Just(i), i + 1..n))
        }),
    ) {
        let n = t.arity();
        let s = fn3();
        let f = term_table(s.clone(), &t, &Limits::default()).unwrap();
        let minor = identification_minor(&f, MinorIndex::new(i, j).unwrap()).unwrap();
        let map: Vec<usize> = (0..n).map(|v| if v == i { j } else { v }).collect();
        let renamed = t.substitute(&map, n).unwrap();
        prop_assert_eq!(minor.table().unwrap(), &table(&s, &renamed)[..]);
    }

    #[test]
    fn projection_commutes_with_evaluation(
        t in term_strategy(4, 7),
        mask in 0u8..16,
        picks in proptest::collection::vec(0usize..8, 4),
    ) {
        let s = fn3();
        let one = s.identity().unwrap();
        let n = t.arity();
        let keep: Vec<usize> = (0..n).filter(|k| mask & (1 << k) != 0).collect();
        let args: Vec<ElementId> = (0..n)
            .map(|k| if keep.contains(&k) { ElementId::new(picks[k]) } else { one })
            .collect();
        let full = t.eval(&s, &args).unwrap();
        let projected = match t.project(&keep) {
            Some(p) => p.eval(&s, &args).unwrap(),
            None => one,
        };
        prop_assert_eq!(full, projected);
    }

    #[test]
    fn variable_exponent_is_capped_occurrence_count(t in term_strategy(4, 8)) {
        let s = fn4();
        let c = 4;
        let f = term_table(s.clone(), &t, &Limits::default()).unwrap();
        let counts = t.occurrence_vector();
        for (k, &e) in counts.iter().enumerate() {
            let expected = if e < c { e } else { c };
            prop_assert_eq!(variable_exponent(&f, k).unwrap(), expected);
        }
    }
}

fn assert_closed(c: &WordClosure) {
    let members: Vec<Vec<ElementId>> = c.iter().map(|(_, t)| t.to_vec()).collect();
    for k in 0..c.arity() {
        let proj = c.function(k);
        assert!(c.contains(proj.table().unwrap()));
    }
    for a in &members {
        for b in &members {
            assert!(c.contains(&c.multiply(a, b)), "closure not closed under product");
        }
    }
    for (t, tab) in c.iter() {
        assert_eq!(table(c.universe(), t), tab, "witness {t} does not induce its table");
    }
}

#[test]
fn closure_is_idempotent() {
    let universes = [
        Arc::new(semilattice2()),
        Arc::new(cyclic_group(3).unwrap()),
        fn3(),
    ];
    for s in universes {
        for n in 1..=2 {
            let c = word_function_closure(s.clone(), n).unwrap();
            assert_closed(&c);
        }
    }
}

fn check_extension(g: &Digraph, order: &[usize]) -> Result<(), TestCaseError> {
    prop_assert_eq!(order.len(), g.len());
    let mut pos = vec![usize::MAX; g.len()];
    for (p, &v) in order.iter().enumerate() {
        prop_assert_eq!(pos[v], usize::MAX, "vertex repeated");
        pos[v] = p;
    }
    for (a, b) in g.edges() {
        prop_assert!(pos[a] < pos[b]);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn linear_extension_of_dag(
        n in 1usize..12,
        perm_seed in proptest::collection::vec(any::<u32>(), 12),
        edges in proptest::collection::vec((0usize..12, 0usize..12), 0..30),
    ) {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.sort_by_key(|&v| perm_seed[v]);
        let mut g = Digraph::new(n);
        for (a, b) in edges {
            let (a, b) = (a % n, b % n);
            if a < b {
                g.add_edge(perm[a], perm[b]).unwrap();
            }
        }
        let order = g.linear_extension().expect("acyclic graph");
        check_extension(&g, &order)?;
    }

    #[test]
    fn cycles_are_reported(
        n in 2usize..12,
        cycle_len in 2usize..12,
        extra in proptest::collection::vec((0usize..12, 0usize..12), 0..20),
    ) {
        let len = cycle_len.min(n);
        let mut g = Digraph::new(n);
        for k in 0..len {
            g.add_edge(k, (k + 1) % len).unwrap();
        }
        for (a, b) in extra {
            if a % n != b % n {
                g.add_edge(a % n, b % n).unwrap();
            }
        }
        let cycle = g.linear_extension().expect_err("graph has a cycle");
        prop_assert!(!cycle.is_empty());
        let edges: Vec<(usize, usize)> = g.edges().collect();
        for k in 0..cycle.len() {
            let (a, b) = (cycle[k], cycle[(k + 1) % cycle.len()]);
            prop_assert!(edges.contains(&(a, b)), "reported cycle uses a missing edge {}->{}", a, b);
        }
    }
}

fn fn4_closure(n: usize) -> Arc<WordClosure> {
    static C: [OnceLock<Arc<WordClosure>>; 4] = [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    C[n].get_or_init(|| Arc::new(word_function_closure(fn4(), n).unwrap())).clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closure_and_pruned_agree(
        t in term_strategy(3, 6),
        flip in proptest::option::of((any::<proptest::sample::Index>(), 0usize..16)),
    ) {
        let s = fn4();
        let n = t.arity();
        let mut values = table(&s, &t);
        if let Some((at, v)) = flip {
            let at = at.index(values.len());
            values[at] = ElementId::new(v);
        }
        let f = FiniteFunction::from_table(s.clone(), n, values).unwrap();
        let by_closure = TermTester::from_closure(fn4_closure(n)).test(&f).unwrap();
        let mut pruned = TermTester::new(&s, n, Method::PrunedNilpotent, &Limits::default()).unwrap();
        let by_pruned = pruned.test(&f).unwrap();
        prop_assert_eq!(by_closure.is_term(), by_pruned.is_term());
        if let (Membership::Term(a), Membership::Term(b)) = (&by_closure, &by_pruned) {
            prop_assert_eq!(table(&s, a), table(&s, b));
        }
    }
}

/// Random word with total length `< d`; variables may be absent.
fn short_word(n: usize, d: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(0..n, 0..d)
}

fn hidden_function(s: &Arc<FiniteSemigroup>, n: usize, word: &[usize]) -> FiniteFunction {
    let s2 = s.clone();
    let word = word.to_vec();
    let one = s.identity().unwrap();
    FiniteFunction::from_oracle(
        s.clone(),
        n,
        Arc::new(move |a: &[ElementId]| word.iter().fold(one, |acc, &v| s2.mul(acc, a[v]))),
    )
}

fn check_equivalent(s: &FiniteSemigroup, found: &Term, n: usize, word: &[usize]) -> Result<(), TestCaseError> {
    let found = found.with_arity(n).unwrap();
    let one = s.identity().unwrap();
    let mut lex = Lex::new(s.order(), n);
    loop {
        let a = lex.current();
        let expected = word.iter().fold(one, |acc, &v| s.mul(acc, a[v]));
        prop_assert_eq!(found.eval_unchecked(s, a), expected, "differs at {:?}", a);
        if !lex.advance() {
            return Ok(());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn synthesis_recovers_short_terms(d in 3usize..=5, n in 3usize..=4, seed in any::<u64>(), w in short_word(4, 5)) {
        let w: Vec<usize> = w.into_iter().filter(|&v| v < n).take(d - 1).collect();
        prop_assume!(!w.is_empty());
        let s = free_monoid(d);
        let f = hidden_function(&s, n, &w);
        let config = SynthesisConfig { samples: 2_000, seed };
        let out = synthesize_term_nilpotent_free(&f, &config).unwrap();
        check_equivalent(&s, &out.term, n, &w)?;
    }

    #[test]
    fn four_nilpotent_synthesis_recovers_terms(
        heads in proptest::collection::vec(0usize..3, 0..=1),
        perm_seed in proptest::collection::vec(any::<u32>(), 3),
        tail_exps in proptest::collection::vec(3usize..=4, 3),
        seed in any::<u64>(),
    ) {
        let n = 3;
        let mut vars: Vec<usize> = (0..n).collect();
        vars.sort_by_key(|&v| perm_seed[v]);
        let head = heads.first().map(|&h| vars[h % n]);
        let mut w = Vec::new();
        if let Some(h) = head {
            w.push(h);
        }
        for &v in &vars {
            if Some(v) != head {
                let e = tail_exps[v];
                w.extend(std::iter::repeat_n(v, e));
            }
        }
        let s = fn4();
        let f = hidden_function(&s, n, &w);
        let config = SynthesisConfig { samples: 2_000, seed };
        let out = synthesize_term_4nilpotent(&f, &config).unwrap();
        check_equivalent(&s, &out.term, n, &w)?;
    }
}

#[test]
fn synthesized_term_is_equivalent_by_exhaustion() {
    let s = free_monoid(5);
    let hidden = Term::parse("x2 x1 x3 x2").unwrap();
    let f = term_table(s.clone(), &hidden, &Limits::default()).unwrap();
    let out = synthesize_term_nilpotent_free(&f, &SynthesisConfig::default()).unwrap();
    assert_eq!(terms_equivalent(&s, &out.term, &hidden).unwrap(), None);
}
