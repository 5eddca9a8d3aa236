//! Functions determined by their identification minors.
//!
//! For `n > |S|` every tuple in `S^n` repeats a coordinate, so a function is fixed
//! by its minors: `f(a) = f_ij(a)` whenever `a_i = a_j`. Inverting that, assigning
//! a word function to each of the `C(n,2)` minor slots either determines a unique
//! IMT function or contradicts itself.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use serde::Serialize;

use crate::closure::{word_function_closure_with, WordClosure};
use crate::error::{Error, Result};
use crate::function::{identification_minor, FiniteFunction, MinorIndex};
use crate::semigroup::{tuple_count, ElementId, FiniteSemigroup, Limits};
use crate::term::Term;
use crate::tuples::{decode, decode_into, encode};

/// Builds `f` from prescribed minors `f_ij = g`, checking that every tuple is
/// covered, that the prescriptions agree, and that the result has exactly those minors.
pub fn function_from_minors(
    s: Arc<FiniteSemigroup>,
    arity: usize,
    minors: &[(MinorIndex, Vec<ElementId>)],
    limits: &Limits,
) -> Result<FiniteFunction> {
    let order = s.order();
    let cells = tuple_count(order, arity);
    limits.check_cells(cells)?;
    let cells = cells as usize;
    for (m, g) in minors {
        if g.len() != cells || m.j() >= arity {
            return Err(Error::InvalidArgument(format!("minor {m} does not fit arity {arity}")));
        }
    }
    let mut values: Vec<Option<ElementId>> = vec![None; cells];
    let mut buf = vec![ElementId(0); arity];
    for (idx, slot) in values.iter_mut().enumerate() {
        decode_into(idx, order, &mut buf);
        for (m, g) in minors {
            if buf[m.i()] != buf[m.j()] {
                continue;
            }
            match slot {
                None => *slot = Some(g[idx]),
                Some(v) if *v != g[idx] => {
                    return Err(Error::InconsistentConstraints { tuple: buf.clone() })
                }
                Some(_) => {}
            }
        }
    }
    let table: Vec<ElementId> = values
        .iter()
        .enumerate()
        .map(|(idx, v)| v.ok_or_else(|| Error::Underdetermined { tuple: decode(idx, order, arity) }))
        .collect::<Result<_>>()?;
    let f = FiniteFunction::from_table(s, arity, table)?;
    for (m, g) in minors {
        let actual = identification_minor(&f, *m)?;
        let actual = actual.table().expect("explicit");
        if let Some(idx) = (0..cells).find(|&k| actual[k] != g[k]) {
            return Err(Error::InconsistentConstraints {
                tuple: decode(idx, order, arity),
            });
        }
    }
    Ok(f)
}

/// An IMT function together with the least witness term of each minor.
#[derive(Debug, Clone)]
pub struct ImtFunction {
    pub function: FiniteFunction,
    pub witnesses: BTreeMap<MinorIndex, Term>,
}

impl ImtFunction {
    pub fn table(&self) -> &[ElementId] {
        self.function.table().expect("explicit")
    }
}

/// Every `n`-ary function whose minors are all word functions, each yielded once.
pub fn enumerate_imt_functions(s: Arc<FiniteSemigroup>, arity: usize) -> Result<Vec<ImtFunction>> {
    let limits = Limits::default();
    let closure = word_function_closure_with(s, arity, &limits)?;
    enumerate_with_closure(&closure)
}

pub fn enumerate_with_closure(closure: &WordClosure) -> Result<Vec<ImtFunction>> {
    let mut out = Vec::new();
    for_each_imt_function(closure, |f| {
        out.push(f);
        true
    })?;
    Ok(out)
}

/// Streams IMT functions into `sink` in canonical order (slot assignments
/// lexicographic in closure order). `sink` returns `false` to stop early.
pub fn for_each_imt_function<F>(closure: &WordClosure, mut sink: F) -> Result<()>
where
    F: FnMut(ImtFunction) -> bool,
{
    let s = closure.universe().clone();
    let order = s.order();
    let arity = closure.arity();
    if arity <= order {
        return Err(Error::InvalidArgument(format!(
            "arity {arity} must exceed the universe order {order}"
        )));
    }
    if arity < 2 {
        return Err(Error::ArityTooSmall { got: arity, min: 2 });
    }
    let cells = tuple_count(order, arity) as usize;
    let slots: Vec<MinorIndex> = MinorIndex::all(arity).collect();
    let members: Vec<(&Term, &[ElementId])> = closure.iter().collect();

    // tuple indices covered by each slot, and the closure members admissible there
    let mut covered: Vec<Vec<usize>> = vec![Vec::new(); slots.len()];
    let mut buf = vec![ElementId(0); arity];
    for idx in 0..cells {
        decode_into(idx, order, &mut buf);
        for (k, m) in slots.iter().enumerate() {
            if buf[m.i()] == buf[m.j()] {
                covered[k].push(idx);
            }
        }
    }
    let admissible: Vec<Vec<usize>> = slots
        .iter()
        .map(|m| {
            (0..members.len())
                .filter(|&k| ignores_coordinate(members[k].1, order, arity, m.i()))
                .collect()
        })
        .collect();

    let mut search = Search {
        members: &members,
        covered: &covered,
        admissible: &admissible,
        values: vec![None; cells],
        trail: Vec::new(),
        choice: vec![0; slots.len()],
        seen: HashSet::new(),
    };
    search.run(0, &s, arity, &slots, &mut sink)?;
    Ok(())
}

/// `g(x) = g(x[i := anything])` for every tuple.
fn ignores_coordinate(g: &[ElementId], order: usize, arity: usize, i: usize) -> bool {
    let stride = order.pow((arity - 1 - i) as u32);
    (0..g.len())
        .filter(|idx| (idx / stride).is_multiple_of(order))
        .all(|base| (1..order).all(|v| g[base + v * stride] == g[base]))
}

struct Search<'a> {
    members: &'a [(&'a Term, &'a [ElementId])],
    covered: &'a [Vec<usize>],
    admissible: &'a [Vec<usize>],
    values: Vec<Option<ElementId>>,
    trail: Vec<usize>,
    choice: Vec<usize>,
    seen: HashSet<Vec<ElementId>>,
}

impl Search<'_> {
    /// Returns `false` once the sink asks to stop.
    fn run<F>(
        &mut self,
        slot: usize,
        s: &Arc<FiniteSemigroup>,
        arity: usize,
        slots: &[MinorIndex],
        sink: &mut F,
    ) -> Result<bool>
    where
        F: FnMut(ImtFunction) -> bool,
    {
        if slot == slots.len() {
            let table: Vec<ElementId> = self
                .values
                .iter()
                .map(|v| v.expect("n > |S| covers every tuple"))
                .collect();
            if !self.seen.insert(table.clone()) {
                return Ok(true);
            }
            let witnesses = slots
                .iter()
                .zip(&self.choice)
                .map(|(&m, &k)| (m, self.members[k].0.clone()))
                .collect();
            let function = FiniteFunction::from_table(s.clone(), arity, table)?;
            return Ok(sink(ImtFunction {
                function,
                witnesses,
            }));
        }
        for &k in &self.admissible[slot] {
            let g = self.members[k].1;
            let mark = self.trail.len();
            let mut ok = true;
            for &idx in &self.covered[slot] {
                match self.values[idx] {
                    None => {
                        self.values[idx] = Some(g[idx]);
                        self.trail.push(idx);
                    }
                    Some(v) if v != g[idx] => {
                        ok = false;
                        break;
                    }
                    Some(_) => {}
                }
            }
            if ok {
                self.choice[slot] = k;
                if !self.run(slot + 1, s, arity, slots, sink)? {
                    return Ok(false);
                }
            }
            for idx in self.trail.drain(mark..) {
                self.values[idx] = None;
            }
        }
        Ok(true)
    }
}

/// Outcome of the probe at one arity.
#[derive(Debug, Clone, Serialize)]
pub struct ArityVerdict {
    pub arity: usize,
    pub imt_functions: usize,
    pub non_term_functions: usize,
    /// Value table of the first IMT function that is not a term function.
    pub example: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    pub order: usize,
    pub max_arity: usize,
    pub verdicts: Vec<ArityVerdict>,
    /// Largest arity with an IMT function that is not a term function.
    pub degree_at_least: Option<usize>,
}

/// For each arity in `(|S|, max_arity]`, counts IMT functions that are not term
/// functions. Reports lower bounds on the degree only.
pub fn degree_lower_bound_probe(s: Arc<FiniteSemigroup>, max_arity: usize) -> Result<ProbeReport> {
    degree_lower_bound_probe_with(s, max_arity, &Limits::default())
}

pub fn degree_lower_bound_probe_with(
    s: Arc<FiniteSemigroup>,
    max_arity: usize,
    limits: &Limits,
) -> Result<ProbeReport> {
    let order = s.order();
    if max_arity <= order {
        return Err(Error::InvalidArgument(format!(
            "max arity {max_arity} must exceed the universe order {order}"
        )));
    }
    let mut verdicts = Vec::new();
    for arity in (order + 1).max(2)..=max_arity {
        let closure = word_function_closure_with(s.clone(), arity, limits)?;
        let mut imt_functions = 0;
        let mut non_term_functions = 0;
        let mut example = None;
        for_each_imt_function(&closure, |f| {
            imt_functions += 1;
            if !closure.contains(f.table()) {
                non_term_functions += 1;
                if example.is_none() {
                    example = Some(f.table().iter().map(|e| e.index()).collect());
                }
            }
            true
        })?;
        verdicts.push(ArityVerdict {
            arity,
            imt_functions,
            non_term_functions,
            example,
        });
    }
    let degree_at_least = verdicts
        .iter()
        .filter(|v| v.non_term_functions > 0)
        .map(|v| v.arity)
        .max();
    Ok(ProbeReport {
        order,
        max_arity,
        verdicts,
        degree_at_least,
    })
}

/// Index of `tuple` in a table of the given arity, for callers holding raw tables.
pub fn table_index(tuple: &[ElementId], order: usize) -> usize {
    encode(tuple, order)
}
