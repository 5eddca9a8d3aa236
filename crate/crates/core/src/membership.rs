//! Term-function membership and the IMT property.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::closure::{word_function_closure_with, WordClosure};
use crate::error::{Error, Result};
use crate::function::{exponent_vector, identification_minor, FiniteFunction, MinorIndex};
use crate::profile::nilpotency_profile;
use crate::semigroup::{ElementId, FiniteSemigroup, Limits};
use crate::term::Term;
use crate::tuples::{encode, BySupport, Lex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Look the value table up in the word-function closure.
    Closure,
    /// Enumerate words with the occurrence counts forced by the variable exponents
    /// (nilpotent monoids only).
    PrunedNilpotent,
    /// `PrunedNilpotent` on nilpotent monoids, `Closure` otherwise.
    Auto,
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closure" => Ok(Strategy::Closure),
            "pruned" | "pruned-nilpotent" => Ok(Strategy::PrunedNilpotent),
            "auto" => Ok(Strategy::Auto),
            other => Err(Error::Parse(format!("unknown strategy {other:?}"))),
        }
    }
}

/// Why a function was found not to be a term function.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NotATerm {
    /// The value table is not among the closure members.
    ClosureMiss { closure_size: usize },
    /// Every candidate word was compared and none matched.
    Exhausted {
        candidates: u64,
        exponents: Vec<usize>,
    },
    /// Some unary restriction is not a power map (1-based variable).
    NotAPower { var: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    Term(Term),
    NotATerm(NotATerm),
}

impl Membership {
    pub fn term(&self) -> Option<&Term> {
        match self {
            Membership::Term(t) => Some(t),
            Membership::NotATerm(_) => None,
        }
    }

    pub fn is_term(&self) -> bool {
        matches!(self, Membership::Term(_))
    }
}

/// Membership tester for one universe and arity; reuses the closure across calls.
#[derive(Debug, Clone)]
pub enum TermTester {
    Closure(Arc<WordClosure>),
    Pruned {
        d: usize,
        c: usize,
        limits: Limits,
        /// Candidates compared by the most recent query.
        last_candidates: u64,
    },
}

impl TermTester {
    pub fn new(
        universe: &Arc<FiniteSemigroup>,
        arity: usize,
        strategy: Strategy,
        limits: &Limits,
    ) -> Result<Self> {
        let profile = nilpotency_profile(universe);
        let nilpotent_monoid = universe.identity().is_some() && profile.d.is_some() && profile.c.is_some();
        let strategy = match strategy {
            Strategy::Auto if nilpotent_monoid => Strategy::PrunedNilpotent,
            Strategy::Auto => Strategy::Closure,
            s => s,
        };
        match strategy {
            Strategy::Closure => Ok(TermTester::Closure(Arc::new(word_function_closure_with(
                universe.clone(),
                arity,
                limits,
            )?))),
            Strategy::PrunedNilpotent => {
                if !nilpotent_monoid {
                    return Err(Error::InvalidArgument(
                        "pruned strategy needs a monoid whose non-identity part is nilpotent".into(),
                    ));
                }
                Ok(TermTester::Pruned {
                    d: profile.d.expect("checked"),
                    c: profile.c.expect("checked"),
                    limits: *limits,
                    last_candidates: 0,
                })
            }
            Strategy::Auto => unreachable!(),
        }
    }

    pub fn from_closure(closure: Arc<WordClosure>) -> Self {
        TermTester::Closure(closure)
    }

    pub fn test(&mut self, f: &FiniteFunction) -> Result<Membership> {
        match self {
            TermTester::Closure(closure) => {
                if closure.arity() != f.arity() {
                    return Err(Error::ArityMismatch {
                        expected: closure.arity(),
                        got: f.arity(),
                    });
                }
                let explicit = f.materialize(&Limits::default())?;
                let table = explicit.table().expect("materialized");
                Ok(match closure.witness(table) {
                    Some(t) => Membership::Term(t.clone()),
                    None => Membership::NotATerm(NotATerm::ClosureMiss {
                        closure_size: closure.len(),
                    }),
                })
            }
            TermTester::Pruned {
                d,
                c,
                limits,
                last_candidates,
            } => {
                let out = pruned_search(f, *d, *c, limits)?;
                *last_candidates = out.1;
                Ok(out.0)
            }
        }
    }
}

/// Decides whether `f` is induced by a term, returning the length-lex least one.
pub fn is_term_function(f: &FiniteFunction, strategy: Strategy) -> Result<Membership> {
    is_term_function_with(f, strategy, &Limits::default())
}

pub fn is_term_function_with(
    f: &FiniteFunction,
    strategy: Strategy,
    limits: &Limits,
) -> Result<Membership> {
    TermTester::new(f.universe_arc(), f.arity(), strategy, limits)?.test(f)
}

/// Occurrence counts worth trying for a variable with exponent `e`.
///
/// Below `c` the count is exact. From `c` on, one more occurrence never changes the
/// function once the count reaches `max(c, d)`; when `c >= d - 1` every evaluation
/// with this variable non-identity is already zero at count `c`.
fn count_range(e: usize, c: usize, d: usize) -> std::ops::RangeInclusive<usize> {
    if e < c {
        e..=e
    } else if c + 1 >= d {
        c..=c
    } else {
        c..=d
    }
}

/// Exhaustive pruned search. Returns the membership verdict and the number of
/// candidate words compared.
pub fn pruned_search(
    f: &FiniteFunction,
    d: usize,
    c: usize,
    limits: &Limits,
) -> Result<(Membership, u64)> {
    let s = f.universe();
    let one = s.identity().ok_or(Error::NotAMonoid)?;
    limits.check_cells(f.domain_size())?;
    let exponents = match exponent_vector(f) {
        Ok(e) => e,
        Err(Error::NotAPower { var }) => {
            return Ok((Membership::NotATerm(NotATerm::NotAPower { var }), 0))
        }
        Err(e) => return Err(e),
    };
    let n = f.arity();
    let ranges: Vec<Vec<usize>> = exponents
        .iter()
        .map(|&e| count_range(e, c, d).collect())
        .collect();

    // all count vectors, grouped by total length
    let mut count_vectors: Vec<Vec<usize>> = vec![Vec::new()];
    for r in &ranges {
        let mut next = Vec::new();
        for prefix in &count_vectors {
            for &k in r {
                let mut v = prefix.clone();
                v.push(k);
                next.push(v);
            }
        }
        count_vectors = next;
    }
    count_vectors.retain(|v| v.iter().sum::<usize>() > 0);
    count_vectors.sort_by_key(|v| v.iter().sum::<usize>());

    let screen: Vec<Vec<ElementId>> = BySupport::up_to(s.order(), n, one, 2).collect();
    let screen_values: Vec<ElementId> = screen.iter().map(|a| f.eval(a)).collect();

    let mut candidates: u64 = 0;
    let mut k = 0;
    while k < count_vectors.len() {
        let len = count_vectors[k].iter().sum::<usize>();
        let mut best: Option<Vec<usize>> = None;
        while k < count_vectors.len() && count_vectors[k].iter().sum::<usize>() == len {
            let mut word: Vec<usize> = count_vectors[k]
                .iter()
                .enumerate()
                .flat_map(|(v, &m)| std::iter::repeat_n(v, m))
                .collect();
            loop {
                if best.as_ref().is_some_and(|b| word >= *b) {
                    break;
                }
                candidates += 1;
                if word_matches(s, f, &word, &screen, &screen_values) {
                    best = Some(word.clone());
                    break;
                }
                if !next_permutation(&mut word) {
                    break;
                }
            }
            k += 1;
        }
        if let Some(w) = best {
            return Ok((Membership::Term(Term::new(w, n)?), candidates));
        }
    }
    Ok((
        Membership::NotATerm(NotATerm::Exhausted {
            candidates,
            exponents,
        }),
        candidates,
    ))
}

/// Screens on the low-support tuples, then compares on every tuple.
pub(crate) fn word_matches(
    s: &FiniteSemigroup,
    f: &FiniteFunction,
    word: &[usize],
    screen: &[Vec<ElementId>],
    screen_values: &[ElementId],
) -> bool {
    let eval = |a: &[ElementId]| -> ElementId {
        let mut acc = a[word[0]];
        for &v in &word[1..] {
            acc = s.mul(acc, a[v]);
        }
        acc
    };
    if screen
        .iter()
        .zip(screen_values)
        .any(|(a, &v)| eval(a) != v)
    {
        return false;
    }
    let order = s.order();
    let mut lex = Lex::new(order, f.arity());
    let table = f.table();
    loop {
        let a = lex.current();
        let expected = match table {
            Some(t) => t[encode(a, order)],
            None => f.eval(a),
        };
        if eval(a) != expected {
            return false;
        }
        if !lex.advance() {
            return true;
        }
    }
}

/// Next lexicographic permutation of a multiset in place; `false` after the last.
pub fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Result of [`has_imt`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImtReport {
    /// Witness term for every minor checked before the first failure.
    pub witnesses: BTreeMap<MinorIndex, Term>,
    pub failing: Option<(MinorIndex, NotATerm)>,
}

impl ImtReport {
    pub fn has_imt(&self) -> bool {
        self.failing.is_none()
    }
}

/// Checks every identification minor of `f`; stops at the first one that is not a term function.
pub fn has_imt(f: &FiniteFunction, strategy: Strategy) -> Result<ImtReport> {
    has_imt_with(f, strategy, &Limits::default())
}

pub fn has_imt_with(f: &FiniteFunction, strategy: Strategy, limits: &Limits) -> Result<ImtReport> {
    let mut tester = TermTester::new(f.universe_arc(), f.arity(), strategy, limits)?;
    imt_with_tester(f, &mut tester)
}

pub fn imt_with_tester(f: &FiniteFunction, tester: &mut TermTester) -> Result<ImtReport> {
    let mut witnesses = BTreeMap::new();
    for m in MinorIndex::all(f.arity()) {
        let minor = identification_minor(f, m)?;
        match tester.test(&minor)? {
            Membership::Term(t) => {
                witnesses.insert(m, t);
            }
            Membership::NotATerm(why) => {
                return Ok(ImtReport {
                    witnesses,
                    failing: Some((m, why)),
                })
            }
        }
    }
    Ok(ImtReport {
        witnesses,
        failing: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{adjoin_identity, build_free_nilpotent};
    use crate::function::term_to_function;
    use crate::semigroup::semilattice2;

    #[test]
    fn permutations_of_multiset() {
        let mut v = vec![0, 0, 1, 1];
        let mut count = 1;
        while next_permutation(&mut v) {
            count += 1;
        }
        assert_eq!(count, 6);
        assert_eq!(v, vec![1, 1, 0, 0]);
    }

    #[test]
    fn meet_is_x1_x2() {
        let s = Arc::new(semilattice2());
        let meet = FiniteFunction::from_table(
            s,
            2,
            vec![ElementId(0), ElementId(0), ElementId(0), ElementId(1)],
        )
        .unwrap();
        for strategy in [Strategy::Closure, Strategy::PrunedNilpotent, Strategy::Auto] {
            let m = is_term_function(&meet, strategy).unwrap();
            assert_eq!(m.term().unwrap().to_string(), "x1 x2", "{strategy:?}");
        }
    }

    #[test]
    fn pruned_finds_least_witness() {
        let s = Arc::new(adjoin_identity(&build_free_nilpotent(&["a".into(), "b".into()], 4).unwrap(), false).unwrap());
        let t = Term::parse("x2 x1 x3").unwrap();
        let f = term_to_function(s.clone(), &t, &Limits::default());
        let m = is_term_function(&f, Strategy::PrunedNilpotent).unwrap();
        assert_eq!(m.term(), Some(&t));
        let c = is_term_function(&f, Strategy::Closure).unwrap();
        assert_eq!(c.term(), Some(&t));
    }

    #[test]
    fn projections_have_imt() {
        let s = Arc::new(semilattice2());
        for n in 2..5 {
            let p = term_to_function(s.clone(), &Term::variable(0, n).unwrap(), &Limits::default());
            let r = has_imt(&p, Strategy::Closure).unwrap();
            assert!(r.has_imt());
            assert_eq!(r.witnesses.len(), n * (n - 1) / 2);
        }
    }

    #[test]
    fn pruned_rejects_non_nilpotent() {
        let s = Arc::new(crate::semigroup::cyclic_group(2).unwrap());
        let p = term_to_function(s, &Term::variable(0, 2).unwrap(), &Limits::default());
        assert!(is_term_function(&p, Strategy::PrunedNilpotent).is_err());
        assert!(is_term_function(&p, Strategy::Auto).unwrap().is_term());
    }
}
