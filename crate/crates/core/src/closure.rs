//! All `n`-ary word functions of a finite semigroup.
//!
//! Word functions are the pointwise products of projections, so the set is the
//! subsemigroup of `S^(S^n)` generated by the `n` projections. The closure is
//! computed breadth-first by right multiplication with projections; within a
//! level, parents are visited in length-lex order of their witnesses, so the
//! first word that reaches a function is its length-lex least witness.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::function::FiniteFunction;
use crate::semigroup::{tuple_count, ElementId, FiniteSemigroup, Limits};
use crate::term::Term;
use crate::tuples::Lex;

pub type Table = Arc<[ElementId]>;

#[derive(Debug, Clone)]
pub struct WordClosure {
    universe: Arc<FiniteSemigroup>,
    arity: usize,
    tables: Vec<Table>,
    witnesses: Vec<Term>,
    index: HashMap<Table, usize>,
}

impl WordClosure {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn universe(&self) -> &Arc<FiniteSemigroup> {
        &self.universe
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    /// Least witness of the function with this value table, if it is a word function.
    pub fn witness(&self, table: &[ElementId]) -> Option<&Term> {
        self.index.get(table).map(|&k| &self.witnesses[k])
    }

    pub fn contains(&self, table: &[ElementId]) -> bool {
        self.index.contains_key(table)
    }

    /// Members in discovery order (length-lex by witness).
    pub fn iter(&self) -> impl Iterator<Item = (&Term, &[ElementId])> {
        self.witnesses
            .iter()
            .zip(self.tables.iter().map(|t| &t[..]))
    }

    pub fn function(&self, k: usize) -> FiniteFunction {
        FiniteFunction::from_table(self.universe.clone(), self.arity, self.tables[k].to_vec())
            .expect("closure tables are well formed")
    }

    /// Pointwise product of two tables.
    pub fn multiply(&self, a: &[ElementId], b: &[ElementId]) -> Vec<ElementId> {
        a.iter().zip(b).map(|(&x, &y)| self.universe.mul(x, y)).collect()
    }
}

pub fn word_function_closure(s: Arc<FiniteSemigroup>, arity: usize) -> Result<WordClosure> {
    word_function_closure_with(s, arity, &Limits::default())
}

pub fn word_function_closure_with(
    s: Arc<FiniteSemigroup>,
    arity: usize,
    limits: &Limits,
) -> Result<WordClosure> {
    if arity == 0 {
        return Err(Error::InvalidArgument("closure needs arity at least 1".into()));
    }
    let cells = tuple_count(s.order(), arity);
    limits.check_cells(cells)?;
    let cells = cells as usize;
    let bytes_per = (cells * std::mem::size_of::<ElementId>()) as u128;

    let mut cols: Vec<Vec<ElementId>> = vec![Vec::with_capacity(cells); arity];
    let mut lex = Lex::new(s.order(), arity);
    loop {
        for (k, col) in cols.iter_mut().enumerate() {
            col.push(lex.current()[k]);
        }
        if !lex.advance() {
            break;
        }
    }
    let projections: Vec<Table> = cols.into_iter().map(Table::from).collect();

    let mut closure = WordClosure {
        universe: s.clone(),
        arity,
        tables: Vec::new(),
        witnesses: Vec::new(),
        index: HashMap::new(),
    };
    let mut level: Vec<usize> = Vec::new();
    for (k, p) in projections.iter().enumerate() {
        if closure.index.contains_key(p) {
            continue;
        }
        push(&mut closure, p.clone(), Term::variable(k, arity)?, bytes_per, limits)?;
        level.push(closure.len() - 1);
    }
    let gen_terms: Vec<Term> = (0..arity)
        .map(|k| Term::variable(k, arity))
        .collect::<Result<_>>()?;

    while !level.is_empty() {
        let mut next = Vec::new();
        for &parent in &level {
            for (g, proj) in projections.iter().enumerate() {
                let prod: Vec<ElementId> = closure.tables[parent]
                    .iter()
                    .zip(proj.iter())
                    .map(|(&x, &y)| s.mul(x, y))
                    .collect();
                if closure.index.contains_key(&prod[..]) {
                    continue;
                }
                let witness = closure.witnesses[parent].concat(&gen_terms[g]);
                push(&mut closure, prod.into(), witness, bytes_per, limits)?;
                next.push(closure.len() - 1);
            }
        }
        level = next;
    }
    Ok(closure)
}

fn push(
    closure: &mut WordClosure,
    table: Table,
    witness: Term,
    bytes_per: u128,
    limits: &Limits,
) -> Result<()> {
    let needed = bytes_per * (closure.tables.len() as u128 + 1);
    if needed > limits.mem_budget {
        return Err(Error::MemoryBudgetExceeded {
            needed,
            budget: limits.mem_budget,
        });
    }
    closure.index.insert(table.clone(), closure.tables.len());
    closure.tables.push(table);
    closure.witnesses.push(witness);
    Ok(())
}
