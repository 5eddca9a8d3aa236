//! Term synthesis from one- and two-variable restrictions.
//!
//! Both procedures only query tuples with at most two non-identity coordinates,
//! then check the produced term against `f` on that slice plus a seeded random sample.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::digraph::{linear_extension, Occurrence, OccurrenceDigraph};
use crate::error::Error;
use crate::function::{variable_exponent, FiniteFunction};
use crate::membership::next_permutation;
use crate::profile::{nilpotency_profile, ProfiledPart};
use crate::semigroup::{ElementId, FiniteSemigroup};
use crate::term::{satisfies_identity, Identity, Term};
use crate::tuples::{BySupport, Lex};

pub const DEFAULT_SEED: u64 = 0x5347_5853;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SynthesisConfig {
    /// Random tuples checked after synthesis.
    pub samples: u64,
    pub seed: u64,
}

impl Default for SynthesisConfig {
    fn default() -> Self {
        SynthesisConfig {
            samples: 100_000,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SynthesisFailure {
    /// The pairwise orders contradict each other, so `f` cannot have IMT.
    #[error("bad promise: occurrence order has a cycle {}", show_cycle(.cycle))]
    BadPromise { cycle: Vec<Occurrence> },
    #[error("restriction to {} is not induced by any admissible word", show_vars(.vars))]
    RestrictionNotInduced { vars: Vec<usize> },
    /// The `w_im` shapes of an exponent-2 variable admit no cut points.
    #[error("shape conflict for x{}: {}", .var + 1, .shapes)]
    ShapeConflict { var: usize, shapes: String },
    #[error("universe is commutative; use the commutative-monoid argument instead")]
    UseCommutativePath,
    #[error("universe is not a 4-nilpotent monoid ({profile})")]
    NotFourNilpotent { profile: String },
    #[error("universe is not a monoid with nilpotent non-identity part ({profile})")]
    NotNilpotentMonoid { profile: String },
    #[error("synthesized term {term} disagrees with f at {tuple:?}")]
    VerificationFailed { term: Term, tuple: Vec<ElementId> },
    #[error(transparent)]
    Algebra(#[from] Error),
}

impl SynthesisFailure {
    pub fn kind(&self) -> &'static str {
        match self {
            SynthesisFailure::BadPromise { .. } => "BadPromise",
            SynthesisFailure::RestrictionNotInduced { .. } => "RestrictionNotInduced",
            SynthesisFailure::ShapeConflict { .. } => "ShapeConflict",
            SynthesisFailure::UseCommutativePath => "UseCommutativePath",
            SynthesisFailure::NotFourNilpotent { .. } => "NotFourNilpotent",
            SynthesisFailure::NotNilpotentMonoid { .. } => "NotNilpotentMonoid",
            SynthesisFailure::VerificationFailed { .. } => "VerificationFailed",
            SynthesisFailure::Algebra(_) => "Error",
        }
    }
}

fn show_cycle(c: &[Occurrence]) -> String {
    c.iter().map(|o| o.to_string()).collect::<Vec<_>>().join(" -> ")
}

fn show_vars(v: &[usize]) -> String {
    v.iter().map(|k| format!("x{}", k + 1)).collect::<Vec<_>>().join(", ")
}

/// Where the single occurrence of a head variable `x_i` sits relative to the
/// two occurrences of `x_m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Shape {
    /// `x_i x_m^2`
    Before,
    /// `x_m x_i x_m`
    Between,
    /// `x_m^2 x_i`
    After,
}

impl Shape {
    const ALL: [Shape; 3] = [Shape::Before, Shape::Between, Shape::After];

    /// The word over `(x_i, x_m) = (0, 1)`.
    fn word(self) -> [usize; 3] {
        match self {
            Shape::Before => [0, 1, 1],
            Shape::Between => [1, 0, 1],
            Shape::After => [1, 1, 0],
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::Before => "x_i x_m^2",
            Shape::Between => "x_m x_i x_m",
            Shape::After => "x_m^2 x_i",
        })
    }
}

#[derive(Debug, Clone)]
pub struct SynthesisTrace {
    pub exponents: Vec<usize>,
    /// Recovered two-variable words, keyed by 0-based `(i, j)`.
    pub pairwise: BTreeMap<(usize, usize), Term>,
    pub digraph: OccurrenceDigraph,
    /// Shapes inducing each `w_im`, keyed by 0-based `(i, m)`.
    pub shapes: BTreeMap<(usize, usize), Vec<Shape>>,
    /// Cut points `(α, β)` for each exponent-2 variable.
    pub cuts: BTreeMap<usize, (usize, usize)>,
    /// Which of the five identity regimes holds (4-nilpotent path only).
    pub case: Option<u8>,
    pub tuples_checked: u64,
    pub samples: u64,
    pub seed: u64,
}

impl SynthesisTrace {
    fn new(exponents: Vec<usize>, config: &SynthesisConfig) -> Self {
        let digraph = OccurrenceDigraph::new(&exponents);
        SynthesisTrace {
            exponents,
            pairwise: BTreeMap::new(),
            digraph,
            shapes: BTreeMap::new(),
            cuts: BTreeMap::new(),
            case: None,
            tuples_checked: 0,
            samples: config.samples,
            seed: config.seed,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Synthesis {
    pub term: Term,
    pub trace: SynthesisTrace,
}

type Outcome = std::result::Result<Synthesis, SynthesisFailure>;

/// Term synthesis over a free nilpotent monoid `(FN_d A)^1`.
pub fn synthesize_term_nilpotent_free(f: &FiniteFunction, config: &SynthesisConfig) -> Outcome {
    let s = f.universe();
    let profile = nilpotency_profile(s);
    let d = match (profile.part, profile.d) {
        (ProfiledPart::NonIdentity, Some(d)) => d,
        _ => {
            return Err(SynthesisFailure::NotNilpotentMonoid {
                profile: profile.to_string(),
            })
        }
    };
    let n = f.arity();
    let exponents = exponents(f)?;
    let mut trace = SynthesisTrace::new(exponents.clone(), config);
    for (k, &e) in exponents.iter().enumerate() {
        for a in 1..e {
            trace.digraph.add_edge(
                Occurrence { var: k, ordinal: a - 1 },
                Occurrence { var: k, ordinal: a },
            )?;
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let (ei, ej) = (exponents[i], exponents[j]);
            if ei == 0 || ej == 0 || ei + ej >= d {
                continue;
            }
            let values = restriction_values(f, &[i, j]);
            let mut arrangement: Vec<usize> = [vec![0; ei], vec![1; ej]].concat();
            let found = loop {
                if induces(s, &arrangement, &values, 2) {
                    break Some(arrangement.clone());
                }
                if !next_permutation(&mut arrangement) {
                    break None;
                }
            };
            let word = found.ok_or(SynthesisFailure::RestrictionNotInduced { vars: vec![i, j] })?;
            let word: Vec<usize> = word.iter().map(|&v| [i, j][v]).collect();
            trace.digraph.add_word_order(&word)?;
            trace.pairwise.insert((i, j), Term::new(word, n)?);
        }
    }
    let order = match linear_extension(&trace.digraph) {
        Ok(order) => order,
        Err(Error::CycleFound(cycle)) => {
            let vs = trace.digraph.vertices();
            return Err(SynthesisFailure::BadPromise {
                cycle: cycle.into_iter().map(|v| vs[v]).collect(),
            });
        }
        Err(e) => return Err(e.into()),
    };
    let word: Vec<usize> = order.iter().map(|o| o.var).collect();
    finish(f, word, trace)
}

/// Term synthesis over a noncommutative monoid whose non-identity part is
/// 3- or 4-nilpotent.
pub fn synthesize_term_4nilpotent(f: &FiniteFunction, config: &SynthesisConfig) -> Outcome {
    let s = f.universe();
    let profile = nilpotency_profile(s);
    let d = match (profile.part, profile.d) {
        (ProfiledPart::NonIdentity, Some(d)) if d <= 4 => d,
        _ => {
            return Err(SynthesisFailure::NotFourNilpotent {
                profile: profile.to_string(),
            })
        }
    };
    if s.is_commutative() {
        return Err(SynthesisFailure::UseCommutativePath);
    }
    let n = f.arity();
    let exponents = exponents(f)?;
    let mut trace = SynthesisTrace::new(exponents.clone(), config);

    let heads: Vec<usize> = (0..n).filter(|&k| exponents[k] == 1).collect();
    let mids: Vec<usize> = if d == 4 {
        (0..n).filter(|&k| exponents[k] == 2).collect()
    } else {
        Vec::new()
    };
    let tails: Vec<usize> = (0..n)
        .filter(|&k| exponents[k] >= 1 && !heads.contains(&k) && !mids.contains(&k))
        .collect();

    // order of the single-occurrence variables
    let first = |k: usize| Occurrence { var: k, ordinal: 0 };
    for (a, &i) in heads.iter().enumerate() {
        for &j in &heads[a + 1..] {
            let values = restriction_values(f, &[i, j]);
            let word = if induces(s, &[0, 1], &values, 2) {
                vec![i, j]
            } else if induces(s, &[1, 0], &values, 2) {
                vec![j, i]
            } else {
                return Err(SynthesisFailure::RestrictionNotInduced { vars: vec![i, j] });
            };
            trace.digraph.add_edge(first(word[0]), first(word[1]))?;
            trace.pairwise.insert((i, j), Term::new(word, n)?);
        }
    }
    let head_order: Vec<usize> = match linear_extension(&trace.digraph) {
        Ok(order) => order
            .into_iter()
            .filter(|o| heads.contains(&o.var))
            .map(|o| o.var)
            .collect(),
        Err(Error::CycleFound(cycle)) => {
            let vs = trace.digraph.vertices();
            return Err(SynthesisFailure::BadPromise {
                cycle: cycle.into_iter().map(|v| vs[v]).collect(),
            });
        }
        Err(e) => return Err(e.into()),
    };

    let mut word: Vec<usize> = Vec::new();
    if mids.is_empty() {
        word.extend(&head_order);
    } else if head_order.is_empty() {
        for &m in &mids {
            word.extend([m, m]);
        }
    } else {
        let case = identity_regime(s)?;
        trace.case = Some(case);
        let r = head_order.len();
        let mut cuts: Vec<(usize, usize)> = Vec::with_capacity(mids.len());
        for &m in &mids {
            let mut allowed: Vec<Vec<Shape>> = Vec::with_capacity(r);
            for &i in &head_order {
                let values = restriction_values(f, &[i, m]);
                let fits: Vec<Shape> = Shape::ALL
                    .into_iter()
                    .filter(|sh| induces(s, &sh.word(), &values, 2))
                    .collect();
                if fits.is_empty() {
                    return Err(SynthesisFailure::RestrictionNotInduced { vars: vec![i, m] });
                }
                let w: Vec<usize> = fits[0].word().iter().map(|&v| [i, m][v]).collect();
                trace.pairwise.insert((i.min(m), i.max(m)), Term::new(w, n)?);
                trace.shapes.insert((i, m), fits.clone());
                allowed.push(fits);
            }
            let cut = if case == 5 {
                Some((r, r))
            } else {
                find_cuts(&allowed)
            };
            let cut = cut.ok_or_else(|| SynthesisFailure::ShapeConflict {
                var: m,
                shapes: allowed
                    .iter()
                    .map(|a| a.first().map(|s| s.to_string()).unwrap_or_default())
                    .collect::<Vec<_>>()
                    .join(", "),
            })?;
            trace.cuts.insert(m, cut);
            cuts.push(cut);
        }
        for p in 0..=r {
            for (&m, &(alpha, beta)) in mids.iter().zip(&cuts) {
                if alpha == p {
                    word.push(m);
                }
                if beta == p {
                    word.push(m);
                }
            }
            if let Some(&h) = head_order.get(p) {
                word.push(h);
            }
        }
    }
    for &k in &tails {
        word.extend(std::iter::repeat_n(k, exponents[k]));
    }
    finish(f, word, trace)
}

/// Regime 1..=5 by which of `xy^2`, `yxy`, `y^2x` are equivalent.
pub fn identity_regime(s: &FiniteSemigroup) -> Result<u8, Error> {
    let holds = |text: &str| -> Result<bool, Error> {
        Ok(satisfies_identity(s, &Identity::parse(text)?)?.is_none())
    };
    let ab = holds("x1 x2^2 = x2 x1 x2")?;
    let ac = holds("x1 x2^2 = x2^2 x1")?;
    let bc = holds("x2 x1 x2 = x2^2 x1")?;
    Ok(match (ab, ac, bc) {
        (false, false, false) => 1,
        (false, true, false) => 2,
        (true, false, false) => 3,
        (false, false, true) => 4,
        _ => 5,
    })
}

/// Least `(α, β)` with positions `< α` admitting `Before`, `α..β` admitting
/// `Between` and `β..` admitting `After`.
fn find_cuts(allowed: &[Vec<Shape>]) -> Option<(usize, usize)> {
    let r = allowed.len();
    (0..=r)
        .flat_map(|a| (a..=r).map(move |b| (a, b)))
        .find(|&(a, b)| {
            allowed.iter().enumerate().all(|(p, fits)| {
                let need = if p < a {
                    Shape::Before
                } else if p < b {
                    Shape::Between
                } else {
                    Shape::After
                };
                fits.contains(&need)
            })
        })
}

fn exponents(f: &FiniteFunction) -> Result<Vec<usize>, SynthesisFailure> {
    (0..f.arity())
        .map(|k| match variable_exponent(f, k) {
            Ok(e) => Ok(e),
            Err(Error::NotAPower { .. }) => Err(SynthesisFailure::RestrictionNotInduced { vars: vec![k] }),
            Err(e) => Err(e.into()),
        })
        .collect()
}

/// Values of `f` with `positions` ranging over `S^k` (lexicographic) and the
/// other coordinates at the identity.
fn restriction_values(f: &FiniteFunction, positions: &[usize]) -> Vec<ElementId> {
    let s = f.universe();
    let one = s.identity().expect("monoid");
    let mut args = vec![one; f.arity()];
    Lex::new(s.order(), positions.len())
        .map(|a| {
            for (&p, &v) in positions.iter().zip(&a) {
                args[p] = v;
            }
            f.eval(&args)
        })
        .collect()
}

/// Whether `word` over `0..k` induces the given restriction table.
fn induces(s: &FiniteSemigroup, word: &[usize], values: &[ElementId], k: usize) -> bool {
    Lex::new(s.order(), k).zip(values).all(|(a, &v)| {
        let got = word
            .iter()
            .map(|&x| a[x])
            .reduce(|p, q| s.mul(p, q))
            .expect("nonempty word");
        got == v
    })
}

fn finish(f: &FiniteFunction, word: Vec<usize>, mut trace: SynthesisTrace) -> Outcome {
    let s = f.universe();
    let n = f.arity();
    let one = s.identity().expect("monoid");
    if word.is_empty() {
        // constantly 1: no variable occurs
        return Err(SynthesisFailure::RestrictionNotInduced { vars: (0..n).collect() });
    }
    let term = Term::new(word, n)?;
    let check = |a: &[ElementId]| -> Result<(), SynthesisFailure> {
        if term.eval_unchecked(s, a) != f.eval(a) {
            return Err(SynthesisFailure::VerificationFailed {
                term: term.clone(),
                tuple: a.to_vec(),
            });
        }
        Ok(())
    };
    for a in BySupport::up_to(s.order(), n, one, 2) {
        check(&a)?;
        trace.tuples_checked += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(trace.seed);
    let mut a = vec![one; n];
    for _ in 0..trace.samples {
        for x in a.iter_mut() {
            *x = ElementId::new(rng.gen_range(0..s.order()));
        }
        check(&a)?;
        trace.tuples_checked += 1;
    }
    Ok(Synthesis { term, trace })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::construct::{adjoin_identity, build_free_nilpotent};
    use crate::function::term_to_function;
    use crate::semigroup::Limits;
    use crate::term::terms_equivalent;

    fn fn1(d: usize) -> Arc<FiniteSemigroup> {
        let fnd = build_free_nilpotent(&["a".into(), "b".into()], d).unwrap();
        Arc::new(adjoin_identity(&fnd, false).unwrap())
    }

    fn hidden(s: &Arc<FiniteSemigroup>, text: &str, n: usize) -> FiniteFunction {
        let t = Term::parse_with_arity(text, n).unwrap();
        let t2 = t.clone();
        let u = s.clone();
        FiniteFunction::from_oracle(s.clone(), n, Arc::new(move |a| t2.eval_unchecked(&u, a)))
    }

    fn small() -> SynthesisConfig {
        SynthesisConfig {
            samples: 2000,
            ..SynthesisConfig::default()
        }
    }

    #[test]
    fn free_recovers_short_terms() {
        let s = fn1(4);
        for text in ["x2 x1 x3", "x1 x2^2"] {
            let out = synthesize_term_nilpotent_free(&hidden(&s, text, 3), &small()).unwrap();
            assert_eq!(out.term.to_string(), text);
        }
        let out = synthesize_term_nilpotent_free(&hidden(&s, "x1 x2^2", 2), &small()).unwrap();
        assert_eq!(out.trace.pairwise[&(0, 1)].to_string(), "x1 x2^2");
    }

    #[test]
    fn free_handles_long_terms() {
        let s = fn1(4);
        let f = hidden(&s, "x3 x1 x2 x3 x1 x2^3", 3);
        let out = synthesize_term_nilpotent_free(&f, &small()).unwrap();
        let t = Term::parse("x3 x1 x2 x3 x1 x2^3").unwrap();
        assert_eq!(terms_equivalent(&s, &out.term, &t).unwrap(), None);
    }

    #[test]
    fn inconsistent_pairs_are_a_bad_promise() {
        // pairwise orders x1<x2, x2<x3, x3<x1
        let s = fn1(4);
        let u = s.clone();
        let one = s.identity().unwrap();
        let f = FiniteFunction::from_oracle(
            s.clone(),
            3,
            Arc::new(move |a: &[ElementId]| {
                let word: &[usize] = match (a[0] != one, a[1] != one, a[2] != one) {
                    (true, true, true) => &[0, 1, 2],
                    (true, false, true) => &[2, 0],
                    _ => &[0, 1, 2],
                };
                word.iter().map(|&k| a[k]).reduce(|p, q| u.mul(p, q)).unwrap()
            }),
        );
        let err = synthesize_term_nilpotent_free(&f, &small()).unwrap_err();
        assert!(matches!(err, SynthesisFailure::BadPromise { .. }), "{err}");
    }

    #[test]
    fn four_nilpotent_paths() {
        let s = fn1(4);
        let out = synthesize_term_4nilpotent(&hidden(&s, "x1 x2", 2), &small()).unwrap();
        assert_eq!(out.term.to_string(), "x1 x2");
        let f = hidden(&s, "x1 x3^2 x2", 3);
        let out = synthesize_term_4nilpotent(&f, &small()).unwrap();
        assert_eq!(out.trace.case, Some(1));
        assert_eq!(out.trace.shapes[&(0, 2)], vec![Shape::Before]);
        assert_eq!(out.trace.shapes[&(1, 2)], vec![Shape::After]);
        let t = Term::parse("x1 x3^2 x2").unwrap();
        assert_eq!(terms_equivalent(&s, &out.term, &t).unwrap(), None);
    }

    #[test]
    fn four_nilpotent_with_between_and_tail() {
        let s = fn1(4);
        let text = "x4^3 x3 x1 x3 x2";
        let f = hidden(&s, text, 4);
        let out = synthesize_term_4nilpotent(&f, &small()).unwrap();
        assert_eq!(out.trace.cuts[&2], (0, 1));
        let t = Term::parse(text).unwrap();
        assert_eq!(terms_equivalent(&s, &out.term, &t).unwrap(), None);
    }

    #[test]
    fn commutative_universe_is_refused() {
        let s = Arc::new(
            adjoin_identity(&build_free_nilpotent(&["a".into()], 4).unwrap(), false).unwrap(),
        );
        let f = term_to_function(s, &Term::parse("x1 x2").unwrap(), &Limits::default());
        let err = synthesize_term_4nilpotent(&f, &small()).unwrap_err();
        assert!(matches!(err, SynthesisFailure::UseCommutativePath));
    }

    #[test]
    fn regimes() {
        assert_eq!(identity_regime(&fn1(4)).unwrap(), 1);
        assert_eq!(identity_regime(&fn1(3)).unwrap(), 5);
    }
}
