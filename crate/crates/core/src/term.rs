//! Semigroup terms: nonempty words over the variables `x1..xn`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::semigroup::{tuple_count, ElementId, FiniteSemigroup, Limits};
use crate::tuples::Lex;

/// Longest word the parser accepts.
pub const MAX_WORD_LEN: usize = 1 << 16;

/// A nonempty word over variables `0..arity` (displayed 1-based as `x1..xn`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    word: Vec<u16>,
    arity: usize,
}

/// Ordering is length first, then lexicographic on variable indices.
impl Ord for Term {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.word
            .len()
            .cmp(&other.word.len())
            .then_with(|| self.word.cmp(&other.word))
            .then_with(|| self.arity.cmp(&other.arity))
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Term {
    /// `word` holds 0-based variable indices.
    pub fn new(word: Vec<usize>, arity: usize) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::InvalidArgument("terms are nonempty words".into()));
        }
        if let Some(&v) = word.iter().find(|&&v| v >= arity) {
            return Err(Error::InvalidArgument(format!(
                "variable x{} exceeds arity {}",
                v + 1,
                arity
            )));
        }
        if arity > u16::MAX as usize {
            return Err(Error::InvalidArgument(format!("arity {arity} too large")));
        }
        Ok(Term {
            word: word.into_iter().map(|v| v as u16).collect(),
            arity,
        })
    }

    /// The projection `x_{var+1}`.
    pub fn variable(var: usize, arity: usize) -> Result<Self> {
        Term::new(vec![var], arity)
    }

    /// Parses `x2 x1 x3^2`; arity is the largest variable index.
    pub fn parse(text: &str) -> Result<Self> {
        let word = parse_word(text)?;
        let arity = word.iter().copied().max().unwrap_or(0) + 1;
        Term::new(word, arity)
    }

    /// Parses and widens to `arity`, which must cover every variable used.
    pub fn parse_with_arity(text: &str, arity: usize) -> Result<Self> {
        Term::new(parse_word(text)?, arity)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// 0-based variable indices.
    pub fn vars(&self) -> impl Iterator<Item = usize> + '_ {
        self.word.iter().map(|&v| v as usize)
    }

    pub fn word(&self) -> Vec<usize> {
        self.vars().collect()
    }

    pub fn with_arity(&self, arity: usize) -> Result<Self> {
        Term::new(self.word(), arity)
    }

    /// Concatenation `self · other`.
    pub fn concat(&self, other: &Term) -> Term {
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        Term {
            word,
            arity: self.arity.max(other.arity),
        }
    }

    /// Occurrence count of each variable.
    pub fn occurrence_vector(&self) -> Vec<usize> {
        let mut counts = vec![0; self.arity];
        for v in self.vars() {
            counts[v] += 1;
        }
        counts
    }

    /// Keeps only the variables in `keep` (0-based); `None` when nothing remains.
    pub fn project(&self, keep: &[usize]) -> Option<Term> {
        let word: Vec<u16> = self
            .word
            .iter()
            .copied()
            .filter(|&v| keep.contains(&(v as usize)))
            .collect();
        if word.is_empty() {
            None
        } else {
            Some(Term {
                word,
                arity: self.arity,
            })
        }
    }

    /// Renames every variable through `map` (0-based), producing a term of `arity`.
    pub fn substitute(&self, map: &[usize], arity: usize) -> Result<Term> {
        Term::new(self.vars().map(|v| map[v]).collect(), arity)
    }

    /// Left-to-right product of `args[word[k]]`.
    pub fn eval(&self, s: &FiniteSemigroup, args: &[ElementId]) -> Result<ElementId> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: args.len(),
            });
        }
        Ok(self.eval_unchecked(s, args))
    }

    /// Evaluation without the arity check; `args` must have length `arity`.
    #[inline]
    pub fn eval_unchecked(&self, s: &FiniteSemigroup, args: &[ElementId]) -> ElementId {
        let mut it = self.word.iter();
        let first = args[*it.next().expect("nonempty") as usize];
        it.fold(first, |acc, &v| s.mul(acc, args[v as usize]))
    }
}

/// `t(1̄, x_{i1}, 1̄, …)`: the projection of `t` onto `keep`, or `Empty`.
pub fn project_term(t: &Term, keep: &[usize]) -> Option<Term> {
    t.project(keep)
}

pub fn occurrence_vector(t: &Term) -> Vec<usize> {
    t.occurrence_vector()
}

pub fn eval_term(s: &FiniteSemigroup, t: &Term, args: &[ElementId]) -> Result<ElementId> {
    t.eval(s, args)
}

fn parse_word(text: &str) -> Result<Vec<usize>> {
    let compact: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty term".into()));
    }
    let mut word = Vec::new();
    let mut i = 0;
    let number = |i: &mut usize| -> Result<usize> {
        let start = *i;
        while *i < compact.len() && compact[*i].is_ascii_digit() {
            *i += 1;
        }
        if start == *i {
            return Err(Error::Parse(format!("expected a number at offset {start}")));
        }
        let digits: String = compact[start..*i].iter().collect();
        digits
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("number {digits} out of range")))
    };
    while i < compact.len() {
        if compact[i] != 'x' {
            return Err(Error::Parse(format!(
                "unexpected {:?} at offset {}",
                compact[i], i
            )));
        }
        i += 1;
        let var = number(&mut i)?;
        if var == 0 {
            return Err(Error::Parse("variables are numbered from x1".into()));
        }
        if var > u16::MAX as usize {
            return Err(Error::Parse(format!("variable x{var} out of range")));
        }
        let mut power = 1;
        if i < compact.len() && compact[i] == '^' {
            i += 1;
            power = number(&mut i)?;
            if power == 0 {
                return Err(Error::Parse("exponent must be positive".into()));
            }
        }
        if word.len() + power > MAX_WORD_LEN {
            return Err(Error::Parse(format!(
                "term longer than {MAX_WORD_LEN} letters"
            )));
        }
        word.extend(std::iter::repeat_n(var - 1, power));
    }
    Ok(word)
}

impl FromStr for Term {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Term::parse(s)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut i = 0;
        while i < self.word.len() {
            let v = self.word[i];
            let mut j = i;
            while j < self.word.len() && self.word[j] == v {
                j += 1;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "x{}", v + 1)?;
            if j - i > 1 {
                write!(f, "^{}", j - i)?;
            }
            i = j;
        }
        Ok(())
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// `lhs ≈ rhs` over a shared arity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identity {
    pub lhs: Term,
    pub rhs: Term,
}

impl Identity {
    pub fn new(lhs: Term, rhs: Term) -> Result<Self> {
        let arity = lhs.arity().max(rhs.arity());
        Ok(Identity {
            lhs: lhs.with_arity(arity)?,
            rhs: rhs.with_arity(arity)?,
        })
    }

    /// Parses `"x1 x2 ≈ x2 x1"` (`=` also accepted).
    pub fn parse(text: &str) -> Result<Self> {
        let (l, r) = text
            .split_once('≈')
            .or_else(|| text.split_once('='))
            .ok_or_else(|| Error::Parse("identity needs '≈' or '='".into()))?;
        Identity::new(Term::parse(l)?, Term::parse(r)?)
    }

    pub fn arity(&self) -> usize {
        self.lhs.arity()
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ≈ {}", self.lhs, self.rhs)
    }
}

/// Exhaustive comparison of `s` and `t` over `S^n`.
/// `Ok(None)` when they induce the same function, otherwise the lexicographically
/// least tuple where they differ.
pub fn terms_equivalent(
    sg: &FiniteSemigroup,
    s: &Term,
    t: &Term,
) -> Result<Option<Vec<ElementId>>> {
    terms_equivalent_with(sg, s, t, &Limits::default())
}

pub fn terms_equivalent_with(
    sg: &FiniteSemigroup,
    s: &Term,
    t: &Term,
    limits: &Limits,
) -> Result<Option<Vec<ElementId>>> {
    let arity = s.arity().max(t.arity());
    limits.check_cells(tuple_count(sg.order(), arity))?;
    let (s, t) = (s.with_arity(arity)?, t.with_arity(arity)?);
    let mut lex = Lex::new(sg.order(), arity);
    loop {
        let a = lex.current();
        if s.eval_unchecked(sg, a) != t.eval_unchecked(sg, a) {
            return Ok(Some(a.to_vec()));
        }
        if !lex.advance() {
            return Ok(None);
        }
    }
}

/// `Ok(None)` if `S` satisfies the identity, else the least witness tuple.
pub fn satisfies_identity(sg: &FiniteSemigroup, id: &Identity) -> Result<Option<Vec<ElementId>>> {
    terms_equivalent(sg, &id.lhs, &id.rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{adjoin_identity, build_free_nilpotent};
    use crate::semigroup::semilattice2;

    fn fn_ab(d: usize, one: bool) -> FiniteSemigroup {
        let s = build_free_nilpotent(&["a".into(), "b".into()], d).unwrap();
        if one {
            adjoin_identity(&s, false).unwrap()
        } else {
            s
        }
    }

    #[test]
    fn parse_and_display() {
        let t = Term::parse("x2 x1 x3^2").unwrap();
        assert_eq!(t.word(), vec![1, 0, 2, 2]);
        assert_eq!(t.arity(), 3);
        assert_eq!(t.to_string(), "x2 x1 x3^2");
        assert_eq!(Term::parse("x1x2 x1").unwrap().to_string(), "x1 x2 x1");
        assert!(Term::parse("").is_err());
        assert!(Term::parse("   ").is_err());
        assert!(Term::parse("x0").is_err());
        assert!(Term::parse("x1^0").is_err());
        assert!(Term::parse("y1").is_err());
        assert!(Term::parse("x").is_err());
        assert!(Term::parse("x1^").is_err());
        assert!(Term::parse_with_arity("x3", 2).is_err());
    }

    #[test]
    fn projection() {
        let t = Term::parse("x2 x1 x3 x2").unwrap();
        assert_eq!(t.project(&[0, 1]).unwrap().to_string(), "x2 x1 x2");
        assert_eq!(t.project(&[0, 1, 2]).unwrap(), t);
        assert_eq!(Term::parse("x1 x2").unwrap().project(&[2]), None);
    }

    #[test]
    fn occurrences() {
        let g = Term::parse("x4 x5 x4 x1 x5 x2 x1 x2").unwrap();
        assert_eq!(g.occurrence_vector(), vec![2, 2, 0, 2, 2]);
        assert_eq!(Term::parse("x1^7").unwrap().occurrence_vector(), vec![7]);
        assert_eq!(Term::parse("x1 x2").unwrap().occurrence_vector(), vec![1, 1]);
    }

    #[test]
    fn evaluation() {
        let s = fn_ab(3, false);
        let (a, b) = (s.element("a").unwrap(), s.element("b").unwrap());
        let t = Term::parse("x1 x2").unwrap();
        assert_eq!(s.label(t.eval(&s, &[a, b]).unwrap()), "ab");
        assert!(matches!(t.eval(&s, &[a]), Err(Error::ArityMismatch { .. })));

        let m = fn_ab(5, true);
        let a = m.element("a").unwrap();
        let b = m.element("b").unwrap();
        let one = m.identity().unwrap();
        assert_eq!(Term::parse("x1^5").unwrap().eval(&m, &[a]).unwrap(), m.zero().unwrap());
        let t = Term::parse("x2 x1 x2").unwrap();
        assert_eq!(m.label(t.eval(&m, &[one, b]).unwrap()), "bb");
    }

    #[test]
    fn equivalence_and_identities() {
        let s = fn_ab(3, false);
        let w = terms_equivalent(&s, &Term::parse("x1 x2").unwrap(), &Term::parse("x2 x1").unwrap())
            .unwrap()
            .unwrap();
        assert_eq!(w, vec![s.element("a").unwrap(), s.element("b").unwrap()]);

        let m = fn_ab(5, true);
        let id = Identity::parse("x1 x2 x1 x2 = x2 x1 x2 x1").unwrap();
        let w = satisfies_identity(&m, &id).unwrap().unwrap();
        assert_eq!(w, vec![m.element("a").unwrap(), m.element("b").unwrap()]);
        let t = Term::parse("x1 x2 x1").unwrap();
        assert_eq!(terms_equivalent(&m, &t, &t).unwrap(), None);

        let sl = semilattice2();
        assert_eq!(
            satisfies_identity(&sl, &Identity::parse("x1 x2 ≈ x2 x1^3").unwrap()).unwrap(),
            None
        );
    }

    #[test]
    fn length_lex_order() {
        let a = Term::parse("x2").unwrap().with_arity(2).unwrap();
        let b = Term::parse("x1 x1").unwrap().with_arity(2).unwrap();
        let c = Term::parse("x1 x2").unwrap();
        assert!(a < b && b < c);
    }
}
