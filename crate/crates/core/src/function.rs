//! Finitary functions on a semigroup, backed by a value table or a query oracle.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::semigroup::{tuple_count, ElementId, FiniteSemigroup, Limits};
use crate::term::Term;
use crate::tuples::{decode_into, encode, Lex};

/// Query interface for functions too large to tabulate. Must be deterministic.
pub type Oracle = Arc<dyn Fn(&[ElementId]) -> ElementId + Send + Sync>;

#[derive(Clone)]
pub enum Backing {
    /// Values in lexicographic tuple order, first coordinate most significant.
    Table(Arc<Vec<ElementId>>),
    Oracle(Oracle),
}

/// An `n`-ary function `S^n -> S`.
#[derive(Clone)]
pub struct FiniteFunction {
    universe: Arc<FiniteSemigroup>,
    arity: usize,
    backing: Backing,
}

impl fmt::Debug for FiniteFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteFunction")
            .field("universe", &self.universe.name())
            .field("arity", &self.arity)
            .field("explicit", &self.is_explicit())
            .finish()
    }
}

impl FiniteFunction {
    pub fn from_table(
        universe: Arc<FiniteSemigroup>,
        arity: usize,
        values: Vec<ElementId>,
    ) -> Result<Self> {
        let expected = tuple_count(universe.order(), arity);
        if values.len() as u128 != expected {
            return Err(Error::InvalidTable(format!(
                "function table has {} values, expected {}",
                values.len(),
                expected
            )));
        }
        if let Some(bad) = values.iter().find(|v| v.index() >= universe.order()) {
            return Err(Error::ElementOutOfRange(bad.index()));
        }
        Ok(FiniteFunction {
            universe,
            arity,
            backing: Backing::Table(Arc::new(values)),
        })
    }

    pub fn from_oracle(universe: Arc<FiniteSemigroup>, arity: usize, oracle: Oracle) -> Self {
        FiniteFunction {
            universe,
            arity,
            backing: Backing::Oracle(oracle),
        }
    }

    /// Tabulates `g` over all tuples.
    pub fn tabulate<G>(universe: Arc<FiniteSemigroup>, arity: usize, limits: &Limits, g: G) -> Result<Self>
    where
        G: Fn(&[ElementId]) -> ElementId,
    {
        let cells = tuple_count(universe.order(), arity);
        limits.check_cells(cells)?;
        let mut values = Vec::with_capacity(cells as usize);
        let mut lex = Lex::new(universe.order(), arity);
        loop {
            values.push(g(lex.current()));
            if !lex.advance() {
                break;
            }
        }
        Ok(FiniteFunction {
            universe,
            arity,
            backing: Backing::Table(Arc::new(values)),
        })
    }

    pub fn universe(&self) -> &FiniteSemigroup {
        &self.universe
    }

    pub fn universe_arc(&self) -> &Arc<FiniteSemigroup> {
        &self.universe
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self.backing, Backing::Table(_))
    }

    pub fn table(&self) -> Option<&[ElementId]> {
        match &self.backing {
            Backing::Table(t) => Some(t),
            Backing::Oracle(_) => None,
        }
    }

    #[inline]
    pub fn eval(&self, args: &[ElementId]) -> ElementId {
        debug_assert_eq!(args.len(), self.arity);
        match &self.backing {
            Backing::Table(t) => t[encode(args, self.universe.order())],
            Backing::Oracle(o) => o(args),
        }
    }

    pub fn try_eval(&self, args: &[ElementId]) -> Result<ElementId> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: args.len(),
            });
        }
        if let Some(bad) = args.iter().find(|a| a.index() >= self.universe.order()) {
            return Err(Error::ElementOutOfRange(bad.index()));
        }
        Ok(self.eval(args))
    }

    /// Explicit-table copy, querying the oracle on every tuple if needed.
    pub fn materialize(&self, limits: &Limits) -> Result<FiniteFunction> {
        match &self.backing {
            Backing::Table(_) => Ok(self.clone()),
            Backing::Oracle(o) => {
                let o = o.clone();
                FiniteFunction::tabulate(self.universe.clone(), self.arity, limits, |a| o(a))
            }
        }
    }

    /// Number of tuples in the domain.
    pub fn domain_size(&self) -> u128 {
        tuple_count(self.universe.order(), self.arity)
    }
}

/// The induced term function: a table when it fits the cap, otherwise an oracle.
pub fn term_to_function(s: Arc<FiniteSemigroup>, t: &Term, limits: &Limits) -> FiniteFunction {
    let arity = t.arity();
    if tuple_count(s.order(), arity) <= limits.max_cells {
        let sg = s.clone();
        FiniteFunction::tabulate(s, arity, limits, |a| t.eval_unchecked(&sg, a))
            .expect("size checked above")
    } else {
        let sg = s.clone();
        let t = t.clone();
        FiniteFunction::from_oracle(s, arity, Arc::new(move |a| t.eval_unchecked(&sg, a)))
    }
}

/// Table-only variant; fails with `SizeOverflow` beyond the cap.
pub fn term_table(s: Arc<FiniteSemigroup>, t: &Term, limits: &Limits) -> Result<FiniteFunction> {
    let sg = s.clone();
    FiniteFunction::tabulate(s, t.arity(), limits, |a| t.eval_unchecked(&sg, a))
}

/// Pair `(i, j)` with `i < j`, 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MinorIndex {
    i: usize,
    j: usize,
}

impl MinorIndex {
    pub fn new(i: usize, j: usize) -> Result<Self> {
        if i >= j {
            return Err(Error::InvalidArgument(format!(
                "minor index needs i < j, got ({}, {})",
                i + 1,
                j + 1
            )));
        }
        Ok(MinorIndex { i, j })
    }

    pub fn i(self) -> usize {
        self.i
    }

    pub fn j(self) -> usize {
        self.j
    }

    /// All pairs for arity `n`, lexicographically.
    pub fn all(n: usize) -> impl Iterator<Item = MinorIndex> {
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| MinorIndex { i, j }))
    }
}

impl fmt::Display for MinorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i + 1, self.j + 1)
    }
}

/// `f_ij(x) = f(x_1, …, x_{i-1}, x_j, x_{i+1}, …, x_n)`, same arity.
pub fn identification_minor(f: &FiniteFunction, m: MinorIndex) -> Result<FiniteFunction> {
    let n = f.arity();
    if m.j >= n {
        return Err(Error::InvalidArgument(format!(
            "minor {} out of range for arity {}",
            m, n
        )));
    }
    let (i, j) = (m.i, m.j);
    match &f.backing {
        Backing::Table(t) => {
            let order = f.universe.order();
            let mut buf = vec![ElementId(0); n];
            let values = (0..t.len())
                .map(|idx| {
                    decode_into(idx, order, &mut buf);
                    buf[i] = buf[j];
                    t[encode(&buf, order)]
                })
                .collect();
            Ok(FiniteFunction {
                universe: f.universe.clone(),
                arity: n,
                backing: Backing::Table(Arc::new(values)),
            })
        }
        Backing::Oracle(o) => {
            let o = o.clone();
            Ok(FiniteFunction::from_oracle(
                f.universe.clone(),
                n,
                Arc::new(move |a: &[ElementId]| {
                    let mut b = a.to_vec();
                    b[i] = b[j];
                    o(&b)
                }),
            ))
        }
    }
}

/// Two tuples differing only at `k` with different values, if any.
pub fn dependence_witness(
    f: &FiniteFunction,
    k: usize,
    limits: &Limits,
) -> Result<Option<(Vec<ElementId>, Vec<ElementId>)>> {
    if k >= f.arity() {
        return Err(Error::InvalidArgument(format!(
            "variable x{} out of range for arity {}",
            k + 1,
            f.arity()
        )));
    }
    let explicit = f.materialize(limits)?;
    let t = explicit.table().expect("materialized");
    let order = f.universe.order();
    let n = f.arity();
    let stride = (order as u128).pow((n - 1 - k) as u32) as usize;
    for base in 0..t.len() {
        if !(base / stride).is_multiple_of(order) {
            continue;
        }
        let v0 = t[base];
        for v in 1..order {
            let idx = base + v * stride;
            if t[idx] != v0 {
                let a = crate::tuples::decode(base, order, n);
                let b = crate::tuples::decode(idx, order, n);
                return Ok(Some((a, b)));
            }
        }
    }
    Ok(None)
}

pub fn depends_on(f: &FiniteFunction, k: usize, limits: &Limits) -> Result<bool> {
    Ok(dependence_witness(f, k, limits)?.is_some())
}

/// `f(1̄, x, 1̄)` with `x` at coordinate `k`, as a vector indexed by `x`.
pub fn unary_restriction(f: &FiniteFunction, k: usize) -> Result<Vec<ElementId>> {
    let s = f.universe();
    let one = s.identity().ok_or(Error::NotAMonoid)?;
    let mut args = vec![one; f.arity()];
    Ok(s
        .elements()
        .map(|x| {
            args[k] = x;
            f.eval(&args)
        })
        .collect())
}

/// Least `e` such that `x^e` induces `f(1̄, x, 1̄)` at coordinate `k`.
///
/// Returns 0 when the restriction is the constant identity map.
pub fn variable_exponent(f: &FiniteFunction, k: usize) -> Result<usize> {
    if k >= f.arity() {
        return Err(Error::InvalidArgument(format!(
            "variable x{} out of range for arity {}",
            k + 1,
            f.arity()
        )));
    }
    let s = f.universe();
    let one = s.identity().ok_or(Error::NotAMonoid)?;
    let target = unary_restriction(f, k)?;
    if target.iter().all(|&v| v == one) {
        return Ok(0);
    }
    let base: Vec<ElementId> = s.elements().collect();
    let mut power = base.clone();
    let mut seen: Vec<Vec<ElementId>> = Vec::new();
    let mut e = 1;
    loop {
        if power == target {
            return Ok(e);
        }
        if seen.contains(&power) {
            return Err(Error::NotAPower { var: k + 1 });
        }
        seen.push(power.clone());
        for (p, &x) in power.iter_mut().zip(&base) {
            *p = s.mul(*p, x);
        }
        e += 1;
    }
}

/// Variable exponents of every coordinate.
pub fn exponent_vector(f: &FiniteFunction) -> Result<Vec<usize>> {
    (0..f.arity()).map(|k| variable_exponent(f, k)).collect()
}
