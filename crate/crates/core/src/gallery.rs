//! Named example objects and end-to-end checks on them.
//!
//! * the 30-element monoid `S = (FN5{a,b}/θ)^1` with θ merging `abab ~ baba` and
//!   `aabb ~ bbaa`, and the `n`-ary function `f` on it whose minors are all term
//!   functions while `f` is not;
//! * the ternary function on the 2-element semilattice with minors `x3, x3, x1`;
//! * the 0-direct union `S ∪₀ T` with `T = FN5{a,b}^1`, which has `S⁰` both as a
//!   subsemigroup and as a Rees quotient.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::construct::{
    adjoin_identity, build_free_nilpotent, congruence_witness, find_isomorphism, ideal_witness,
    is_homomorphism, quotient_by_partition, rees_quotient, s_zero, subsemigroup_closure,
    zero_direct_union,
};
use crate::error::{Error, Result};
use crate::function::{
    dependence_witness, exponent_vector, term_table, FiniteFunction, MinorIndex,
};
use crate::imt::{enumerate_imt_functions, function_from_minors};
use crate::membership::{has_imt, is_term_function, pruned_search, word_matches, Membership, NotATerm, Strategy};
use crate::partition::Partition;
use crate::profile::nilpotency_profile;
use crate::semigroup::{semilattice2, ElementId, FiniteSemigroup, Limits};
use crate::term::{satisfies_identity, Identity, Term};
use crate::tuples::{BySupport, Lex};

pub const DEFAULT_SEED: u64 = 0x5347_5853;

/// Random tuples checked beyond the exhaustive slice at arity 5.
pub const DEFAULT_SAMPLES: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct GalleryReport {
    pub check: String,
    pub status: Status,
    pub stats: Map<String, Value>,
    pub witness: Option<Value>,
    pub seed: u64,
}

impl GalleryReport {
    fn new(check: &str, seed: u64) -> Self {
        GalleryReport {
            check: check.into(),
            status: Status::Pass,
            stats: Map::new(),
            witness: None,
            seed,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    fn stat(&mut self, key: &str, value: impl Into<Value>) {
        self.stats.insert(key.into(), value.into());
    }

    /// Records the first failure; later ones keep the earlier witness.
    fn fail(&mut self, witness: Value) {
        if self.status == Status::Pass {
            self.status = Status::Fail;
            self.witness = Some(witness);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    pub arity: usize,
    pub seed: u64,
    pub samples: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            arity: 4,
            seed: DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
        }
    }
}

pub const CHECKS: [&str; 4] = ["thm4", "semilattice", "propagation", "identities"];

/// Runs a check by name.
pub fn run_check(name: &str, opts: &CheckOptions) -> Result<GalleryReport> {
    match name {
        "thm4" | "theta" => verify_cyclic_square(opts.arity, opts.seed, opts.samples),
        "semilattice" => verify_semilattice(),
        "propagation" => verify_propagation(),
        "identities" => verify_identities(),
        other => Err(Error::InvalidArgument(format!(
            "unknown check {other:?} (expected one of {})",
            CHECKS.join(", ")
        ))),
    }
}

fn ab() -> Vec<String> {
    vec!["a".into(), "b".into()]
}

/// `FN5{a,b}` and the partition with classes `{abab, baba}`, `{aabb, bbaa}`.
pub fn theta_partition() -> Result<(FiniteSemigroup, Partition)> {
    let fn5 = build_free_nilpotent(&ab(), 5)?;
    let class = |u: &str, v: &str| -> Result<Vec<ElementId>> { Ok(vec![fn5.element(u)?, fn5.element(v)?]) };
    let classes = [class("abab", "baba")?, class("aabb", "bbaa")?];
    let p = Partition::from_classes(fn5.order(), &classes)?;
    Ok((fn5, p))
}

/// `(FN5{a,b}/θ)^1`, order 30.
pub fn theta_monoid() -> Result<FiniteSemigroup> {
    let (fn5, p) = theta_partition()?;
    let q = quotient_by_partition(&fn5, &p)?.with_name("FN5{a,b}/theta");
    adjoin_identity(&q, false)
}

/// Value of `f` at `a`: 1 on the all-identity tuple, `a_i^2` with one non-identity
/// coordinate, `(a_i a_j)^2` for cyclically adjacent `i < j`, `a_i^2 a_j^2` for other
/// pairs, 0 with three or more.
pub fn cyclic_square_value(s: &FiniteSemigroup, a: &[ElementId]) -> ElementId {
    let one = s.identity().expect("monoid");
    let zero = s.zero().expect("has zero");
    let n = a.len();
    let mut pos = [0usize; 2];
    let mut count = 0;
    for (k, &x) in a.iter().enumerate() {
        if x != one {
            if count == 2 {
                return zero;
            }
            pos[count] = k;
            count += 1;
        }
    }
    let sq = |x: ElementId| s.mul(x, x);
    match count {
        0 => one,
        1 => sq(a[pos[0]]),
        _ => {
            let (i, j) = (pos[0], pos[1]);
            let (x, y) = (a[i], a[j]);
            if j == i + 1 || (i == 0 && j == n - 1) {
                sq(s.mul(x, y))
            } else {
                s.mul(sq(x), sq(y))
            }
        }
    }
}

/// The function `f` on `universe` (which must be a monoid with zero); tabulated
/// for `n <= 5`, an oracle beyond.
pub fn cyclic_square_function_on(universe: Arc<FiniteSemigroup>, n: usize) -> Result<FiniteFunction> {
    if n < 4 {
        return Err(Error::ArityTooSmall { got: n, min: 4 });
    }
    if universe.identity().is_none() {
        return Err(Error::NotAMonoid);
    }
    if universe.zero().is_none() {
        return Err(Error::InvalidArgument("universe needs a zero".into()));
    }
    if n <= 5 {
        let u = universe.clone();
        FiniteFunction::tabulate(universe, n, &Limits::default(), move |a| cyclic_square_value(&u, a))
    } else {
        let u = universe.clone();
        Ok(FiniteFunction::from_oracle(
            universe,
            n,
            Arc::new(move |a: &[ElementId]| cyclic_square_value(&u, a)),
        ))
    }
}

pub fn cyclic_square_function(n: usize) -> Result<FiniteFunction> {
    cyclic_square_function_on(Arc::new(theta_monoid()?), n)
}

fn oplus(n: usize, i: usize, k: usize) -> usize {
    (i - 1 + k) % n + 1
}

fn ominus(n: usize, i: usize, k: usize) -> usize {
    (i - 1 + n - k % n) % n + 1
}

/// `g_ij` over `x1..xn` (1-based `i`, `j`): `x_i^2` when `i = j`, otherwise the
/// word of length `2ℓ`, `ℓ = (j - i mod n) + 1`, that walks cyclically from `x_i`
/// to `x_j` with every variable twice.
pub fn g_term(n: usize, i: usize, j: usize) -> Result<Term> {
    check_index(n, i)?;
    check_index(n, j)?;
    if i == j {
        return Term::new(vec![i - 1, i - 1], n);
    }
    let l = (j + n - i) % n + 1;
    let mut pos = vec![0usize; 2 * l + 1];
    pos[1] = i;
    pos[3] = i;
    for k in 1..l - 1 {
        pos[2 * k] = oplus(n, i, k);
        pos[2 * k + 3] = oplus(n, i, k);
    }
    pos[2 * l - 2] = j;
    pos[2 * l] = j;
    debug_assert!(pos[1..].iter().all(|&v| v != 0));
    Term::new(pos[1..].iter().map(|&v| v - 1).collect(), n)
}

fn check_index(n: usize, i: usize) -> Result<()> {
    if i == 0 || i > n {
        return Err(Error::InvalidArgument(format!("index {i} outside 1..={n}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessTerms {
    pub g: Term,
    pub h: Term,
    pub r: Term,
}

/// `g_ij`, `h` and `r = x_j^4 h` for `1 <= i < j <= n`; `r` induces the minor `f_ij`.
pub fn witness_terms(n: usize, i: usize, j: usize) -> Result<WitnessTerms> {
    if n < 4 {
        return Err(Error::ArityTooSmall { got: n, min: 4 });
    }
    if !(1 <= i && i < j && j <= n) {
        return Err(Error::InvalidArgument(format!("need 1 <= i < j <= n, got ({i},{j})")));
    }
    let g = g_term(n, i, j)?;
    let h = if (i, j) == (1, n) {
        g_term(n, 2, n - 1)?
    } else if j == i + 1 {
        g_term(n, oplus(n, j, 1), ominus(n, i, 1))?
    } else {
        g_term(n, oplus(n, j, 1), ominus(n, i, 1))?.concat(&g_term(n, i + 1, j - 1)?)
    };
    let r = Term::new(vec![j - 1; 4], n)?.concat(&h);
    Ok(WitnessTerms { g, h, r })
}

fn labels(s: &FiniteSemigroup, a: &[ElementId]) -> Vec<String> {
    a.iter().map(|&e| s.label(e).to_string()).collect()
}

/// Checks that every minor `f_ij` is induced by `r`, and that `f` is not a term
/// function. Arity 4 is scanned in full; arity 5 on all tuples with at most three
/// non-identity coordinates plus `samples` seeded random tuples. Beyond that slice
/// both sides are 0: `f` by definition and `r` since it then has at least five
/// non-identity factors.
pub fn verify_cyclic_square(n: usize, seed: u64, samples: u64) -> Result<GalleryReport> {
    if n < 4 {
        return Err(Error::ArityTooSmall { got: n, min: 4 });
    }
    if n > 5 {
        return Err(Error::InvalidArgument(format!("arity {n} is beyond the checked range 4..=5")));
    }
    let s = Arc::new(theta_monoid()?);
    let f = cyclic_square_function_on(s.clone(), n)?;
    let one = s.identity().expect("monoid");
    let mut report = GalleryReport::new("thm4", seed);
    report.stat("arity", n);
    report.stat("order", s.order());

    // minors
    let minors: Vec<(MinorIndex, Term)> = MinorIndex::all(n)
        .map(|m| Ok((m, witness_terms(n, m.i() + 1, m.j() + 1)?.r)))
        .collect::<Result<_>>()?;
    let mut bad: Vec<Option<Value>> = vec![None; minors.len()];
    let mut scanned: u64 = 0;
    let mut check_tuple = |a: &[ElementId], b: &mut Vec<ElementId>| {
        for (k, (m, r)) in minors.iter().enumerate() {
            if bad[k].is_some() {
                continue;
            }
            b.copy_from_slice(a);
            b[m.i()] = a[m.j()];
            let (want, got) = (f.eval(b), r.eval_unchecked(&s, a));
            if want != got {
                bad[k] = Some(json!({
                    "minor": m.to_string(),
                    "term": r.to_string(),
                    "tuple": labels(&s, a),
                    "minor_value": s.label(want),
                    "term_value": s.label(got),
                }));
            }
        }
    };
    let mut b = vec![one; n];
    let mut sampled = 0;
    if n == 4 {
        for a in Lex::new(s.order(), n) {
            check_tuple(&a, &mut b);
            scanned += 1;
        }
    } else {
        for a in BySupport::up_to(s.order(), n, one, 3) {
            check_tuple(&a, &mut b);
            scanned += 1;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut a = vec![one; n];
        for _ in 0..samples {
            for x in a.iter_mut() {
                *x = ElementId::new(rng.gen_range(0..s.order()));
            }
            check_tuple(&a, &mut b);
        }
        sampled = samples;
    }
    let verified = bad.iter().filter(|w| w.is_none()).count();
    report.stat("minors", minors.len());
    report.stat("minors_verified", verified);
    report.stat("tuples_scanned", scanned);
    report.stat("samples", sampled);
    if let Some(w) = bad.into_iter().flatten().next() {
        report.fail(json!({ "kind": "minor_mismatch", "detail": w }));
    }

    // f is invariant under the cyclic shift of its arguments
    let mut rotated = vec![one; n];
    let rotation_ok = Lex::new(s.order(), n).all(|a| {
        rotated[..n - 1].copy_from_slice(&a[1..]);
        rotated[n - 1] = a[0];
        f.eval(&a) == f.eval(&rotated)
    });
    report.stat("rotation_invariant", rotation_ok);
    if !rotation_ok {
        report.fail(json!({ "kind": "not_rotation_invariant" }));
    }

    // non-term search
    let exponents = exponent_vector(&f)?;
    report.stat("exponents", exponents.clone());
    if exponents.iter().any(|&e| e != 2) {
        report.fail(json!({ "kind": "exponents", "exponents": exponents }));
    }
    let profile = nilpotency_profile(&s);
    let (d, c) = (profile.d.unwrap_or(5), profile.c.unwrap_or(5));
    let (membership, candidates) = pruned_search(&f, d, c, &Limits::default())?;
    report.stat("candidates_exhausted", candidates);
    if let Membership::Term(t) = membership {
        report.fail(json!({ "kind": "inducing_word", "term": t.to_string() }));
    }

    // the same search restricted to words starting with x2
    let screen: Vec<Vec<ElementId>> = BySupport::up_to(s.order(), n, one, 2).collect();
    let screen_values: Vec<ElementId> = screen.iter().map(|a| f.eval(a)).collect();
    let mut word: Vec<usize> = (0..n).flat_map(|v| [v, v]).collect();
    let mut pinned: u64 = 0;
    let mut pinned_match: Option<Vec<usize>> = None;
    loop {
        if word[0] == 1 {
            pinned += 1;
            if pinned_match.is_none() && word_matches(&s, &f, &word, &screen, &screen_values) {
                pinned_match = Some(word.clone());
            }
        }
        if !crate::membership::next_permutation(&mut word) {
            break;
        }
    }
    report.stat("candidates_pinned", pinned);
    if let Some(w) = pinned_match {
        report.fail(json!({ "kind": "inducing_word", "term": Term::new(w, n)?.to_string() }));
    }
    Ok(report)
}

/// The ternary function on the 2-element semilattice with
/// `f12 = f13 = x3` and `f23 = x1`, built by propagating the minors.
pub fn semilattice_counterexample() -> Result<FiniteFunction> {
    let s = Arc::new(semilattice2());
    let limits = Limits::default();
    let table = |text: &str| -> Result<Vec<ElementId>> {
        let t = Term::parse_with_arity(text, 3)?;
        Ok(term_table(s.clone(), &t, &limits)?
            .table()
            .expect("explicit")
            .to_vec())
    };
    let minors = [
        (MinorIndex::new(0, 1)?, table("x3")?),
        (MinorIndex::new(0, 2)?, table("x3")?),
        (MinorIndex::new(1, 2)?, table("x1")?),
    ];
    function_from_minors(s, 3, &minors, &limits)
}

pub fn verify_semilattice() -> Result<GalleryReport> {
    let mut report = GalleryReport::new("semilattice", 0);
    let f = semilattice_counterexample()?;
    let s = f.universe_arc().clone();
    let table: Vec<usize> = f.table().expect("explicit").iter().map(|e| e.index()).collect();
    report.stat("table", table.clone());

    let imt = has_imt(&f, Strategy::Closure)?;
    let witnesses: Map<String, Value> = imt
        .witnesses
        .iter()
        .map(|(m, t)| (m.to_string(), Value::from(t.to_string())))
        .collect();
    report.stat("imt", imt.has_imt());
    report.stat("witnesses", Value::Object(witnesses));
    if let Some((m, why)) = &imt.failing {
        report.fail(json!({ "kind": "minor_not_term", "minor": m.to_string(), "reason": why }));
    }

    match is_term_function(&f, Strategy::Closure)? {
        Membership::Term(t) => report.fail(json!({ "kind": "is_term", "term": t.to_string() })),
        Membership::NotATerm(why) => {
            if let NotATerm::ClosureMiss { closure_size } = why {
                report.stat("closure_size", closure_size);
            }
            report.stat("term", false);
        }
    }

    if let Some((a, b)) = dependence_witness(&f, 1, &Limits::default())? {
        report.stat(
            "depends_on_x2",
            json!({ "tuple": labels(&s, &a), "other": labels(&s, &b) }),
        );
    } else {
        report.fail(json!({ "kind": "independent_of_x2" }));
    }

    let all = enumerate_imt_functions(s, 3)?;
    report.stat("imt_functions", all.len());
    let found = all.iter().any(|g| g.table() == f.table().expect("explicit"));
    report.stat("found_by_enumeration", found);
    if !found {
        report.fail(json!({ "kind": "missing_from_enumeration" }));
    }
    Ok(report)
}

pub fn verify_identities() -> Result<GalleryReport> {
    let mut report = GalleryReport::new("identities", 0);
    let s = theta_monoid()?;
    let free = adjoin_identity(&build_free_nilpotent(&ab(), 5)?, false)?;
    let ids = [
        Identity::parse("x1 x2 x1 x2 = x2 x1 x2 x1")?,
        Identity::parse("x1^2 x2^2 = x2^2 x1^2")?,
    ];
    let mut holds = Vec::new();
    let mut fails_free = Vec::new();
    for id in &ids {
        let on_s = satisfies_identity(&s, id)?;
        holds.push(json!({ "identity": id.to_string(), "holds": on_s.is_none() }));
        if let Some(w) = on_s {
            report.fail(json!({ "kind": "identity_fails", "identity": id.to_string(), "tuple": labels(&s, &w) }));
        }
        let on_free = satisfies_identity(&free, id)?;
        match on_free {
            Some(w) => fails_free.push(json!({ "identity": id.to_string(), "witness": labels(&free, &w) })),
            None => report.fail(json!({ "kind": "holds_on_free", "identity": id.to_string() })),
        }
    }
    report.stat("order", s.order());
    report.stat("pairs_scanned", (s.order() * s.order()) as u64 * ids.len() as u64);
    report.stat("theta_monoid", holds);
    report.stat("free_monoid", fails_free);
    Ok(report)
}

pub fn verify_propagation() -> Result<GalleryReport> {
    let mut report = GalleryReport::new("propagation", 0);
    let s = theta_monoid()?;
    let t = adjoin_identity(&build_free_nilpotent(&ab(), 5)?, false)?;
    let (s0, t0) = (s_zero(&s)?, s_zero(&t)?);
    let u = zero_direct_union(&s, &t)?;
    let order = u.semigroup.order();
    report.stat("s0_order", s0.order());
    report.stat("t0_order", t0.order());
    report.stat("union_order", order);
    if order != s0.order() + t0.order() - 1 {
        report.fail(json!({ "kind": "order_law", "order": order }));
    }

    // T⁰ sits inside as an ideal
    let ideal: Vec<ElementId> = u.right.clone();
    if let Some((e, by, side)) = ideal_witness(&u.semigroup, &ideal) {
        report.fail(json!({ "kind": "not_an_ideal", "element": e, "by": by, "side": side.to_string() }));
        return Ok(report);
    }
    report.stat("ideal_size", ideal.len());

    // Rees quotient by it is S⁰
    let q = rees_quotient(&u.semigroup, &ideal)?;
    report.stat("quotient_order", q.order());
    match find_isomorphism(&q, &s0) {
        Some(map) => report.stat(
            "quotient_isomorphism",
            json!(map.iter().map(|e| e.index()).collect::<Vec<_>>()),
        ),
        None => report.fail(json!({ "kind": "quotient_not_isomorphic" })),
    }

    // S⁰ and T⁰ embed
    for (name, sub, emb) in [("s0", &s0, &u.left), ("t0", &t0, &u.right)] {
        let closed = subsemigroup_closure(&u.semigroup, emb).len() == sub.order();
        let mut image = emb.clone();
        image.sort();
        image.dedup();
        let injective = image.len() == emb.len();
        let hom = is_homomorphism(sub, &u.semigroup, emb);
        report.stat(&format!("{name}_embeds"), closed && injective && hom);
        if !(closed && injective && hom) {
            report.fail(json!({ "kind": "embedding", "part": name }));
        }
    }
    Ok(report)
}

/// The congruence audit on θ: `None` when every product respects the classes.
pub fn theta_congruence_witness() -> Result<Option<(usize, usize, usize, usize)>> {
    let (fn5, p) = theta_partition()?;
    Ok(congruence_witness(&fn5, &p))
}
