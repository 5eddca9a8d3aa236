//! Finite semigroups given by their Cayley table.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of an element inside one [`FiniteSemigroup`]. Indices are dense, `0..order`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementId(pub u16);

impl ElementId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn new(index: usize) -> Self {
        debug_assert!(index <= u16::MAX as usize);
        ElementId(index as u16)
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Size caps for everything that materializes a table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_order: usize,
    pub max_cells: u128,
    pub mem_budget: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_order: 4096,
            max_cells: 1 << 26,
            mem_budget: 2 << 30,
        }
    }
}

impl Limits {
    pub fn check_order(&self, order: u128) -> Result<()> {
        if order > self.max_order as u128 {
            return Err(Error::SizeOverflow {
                what: "universe",
                size: order,
                cap: self.max_order as u128,
            });
        }
        Ok(())
    }

    pub fn check_cells(&self, cells: u128) -> Result<()> {
        if cells > self.max_cells {
            return Err(Error::SizeOverflow {
                what: "table",
                size: cells,
                cap: self.max_cells,
            });
        }
        Ok(())
    }
}

/// `order^arity`, saturating.
pub fn tuple_count(order: usize, arity: usize) -> u128 {
    let mut n: u128 = 1;
    for _ in 0..arity {
        n = n.saturating_mul(order as u128);
    }
    n
}

/// A finite semigroup with a validated, associative Cayley table.
///
/// Identity and zero are always recomputed from the table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteSemigroup {
    name: String,
    labels: Vec<String>,
    table: Vec<ElementId>,
    identity: Option<ElementId>,
    zero: Option<ElementId>,
}

impl fmt::Debug for FiniteSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteSemigroup")
            .field("name", &self.name)
            .field("order", &self.order())
            .field("identity", &self.identity)
            .field("zero", &self.zero)
            .finish()
    }
}

impl FiniteSemigroup {
    /// Validates a square table of element indices and builds the semigroup.
    pub fn from_table(
        name: impl Into<String>,
        labels: Vec<String>,
        table: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let order = labels.len();
        if table.len() != order {
            return Err(Error::InvalidTable(format!(
                "{} rows for {} elements",
                table.len(),
                order
            )));
        }
        let mut flat = Vec::with_capacity(order * order);
        for (i, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(Error::InvalidTable(format!(
                    "row {} has {} entries, expected {}",
                    i,
                    row.len(),
                    order
                )));
            }
            for &v in row {
                if v >= order {
                    return Err(Error::ElementOutOfRange(v));
                }
                flat.push(ElementId::new(v));
            }
        }
        Self::from_flat(name, labels, flat)
    }

    /// Same as [`from_table`](Self::from_table) for a row-major flat table.
    pub fn from_flat(
        name: impl Into<String>,
        labels: Vec<String>,
        table: Vec<ElementId>,
    ) -> Result<Self> {
        let order = labels.len();
        if order == 0 {
            return Err(Error::InvalidTable("empty universe".into()));
        }
        Limits::default().check_order(order as u128)?;
        if table.len() != order * order {
            return Err(Error::InvalidTable(format!(
                "table has {} cells, expected {}",
                table.len(),
                order * order
            )));
        }
        if let Some(bad) = table.iter().find(|e| e.index() >= order) {
            return Err(Error::ElementOutOfRange(bad.index()));
        }
        let mut seen = HashSet::with_capacity(order);
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let mut s = FiniteSemigroup {
            name: name.into(),
            labels,
            table,
            identity: None,
            zero: None,
        };
        if let Some((x, y, z)) = s.associativity_witness() {
            return Err(Error::NotAssociative { x, y, z });
        }
        s.identity = s.find_identity();
        s.zero = s.find_zero();
        Ok(s)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, e: ElementId) -> &str {
        &self.labels[e.index()]
    }

    pub fn element(&self, label: &str) -> Result<ElementId> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(ElementId::new)
            .ok_or_else(|| Error::UnknownElement(label.to_string()))
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> + '_ {
        (0..self.order()).map(ElementId::new)
    }

    #[inline]
    pub fn mul(&self, a: ElementId, b: ElementId) -> ElementId {
        self.table[a.index() * self.order() + b.index()]
    }

    /// Left-to-right product; `None` for an empty iterator.
    pub fn product<I: IntoIterator<Item = ElementId>>(&self, items: I) -> Option<ElementId> {
        items.into_iter().reduce(|acc, x| self.mul(acc, x))
    }

    pub fn pow(&self, a: ElementId, e: usize) -> Option<ElementId> {
        if e == 0 {
            return self.identity;
        }
        let mut acc = a;
        for _ in 1..e {
            acc = self.mul(acc, a);
        }
        Some(acc)
    }

    pub fn identity(&self) -> Option<ElementId> {
        self.identity
    }

    pub fn zero(&self) -> Option<ElementId> {
        self.zero
    }

    pub fn is_monoid(&self) -> bool {
        self.identity.is_some()
    }

    pub fn flat_table(&self) -> &[ElementId] {
        &self.table
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        (0..n)
            .map(|i| (0..n).map(|j| self.table[i * n + j].index()).collect())
            .collect()
    }

    pub fn is_commutative(&self) -> bool {
        self.commutativity_witness().is_none()
    }

    pub fn commutativity_witness(&self) -> Option<(ElementId, ElementId)> {
        for a in self.elements() {
            for b in self.elements().skip(a.index() + 1) {
                if self.mul(a, b) != self.mul(b, a) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Lexicographically least triple violating associativity.
    pub fn associativity_witness(&self) -> Option<(usize, usize, usize)> {
        let n = self.order();
        for x in 0..n {
            for y in 0..n {
                let xy = self.table[x * n + y].index();
                for z in 0..n {
                    let yz = self.table[y * n + z].index();
                    if self.table[xy * n + z] != self.table[x * n + yz] {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    fn find_identity(&self) -> Option<ElementId> {
        self.elements()
            .find(|&e| self.elements().all(|x| self.mul(e, x) == x && self.mul(x, e) == x))
    }

    fn find_zero(&self) -> Option<ElementId> {
        self.elements()
            .find(|&z| self.elements().all(|x| self.mul(z, x) == z && self.mul(x, z) == z))
    }

    /// A label not yet used, derived from `base`.
    pub(crate) fn fresh_label(&self, base: &str) -> String {
        let mut candidate = base.to_string();
        while self.labels.contains(&candidate) {
            candidate.push('\'');
        }
        candidate
    }

    /// Restriction of the table to `subset`, which must be closed under the product.
    pub fn subsemigroup(&self, name: impl Into<String>, subset: &[ElementId]) -> Result<Self> {
        let mut pos = vec![usize::MAX; self.order()];
        for (k, e) in subset.iter().enumerate() {
            pos[e.index()] = k;
        }
        let labels = subset.iter().map(|&e| self.label(e).to_string()).collect();
        let mut table = Vec::with_capacity(subset.len() * subset.len());
        for &a in subset {
            for &b in subset {
                let p = pos[self.mul(a, b).index()];
                if p == usize::MAX {
                    return Err(Error::InvalidArgument(format!(
                        "subset is not closed: {} * {} = {}",
                        self.label(a),
                        self.label(b),
                        self.label(self.mul(a, b))
                    )));
                }
                table.push(ElementId::new(p));
            }
        }
        Self::from_flat(name, labels, table)
    }
}

/// The 2-element semilattice `{0, 1}` with `0·1 = 1·0 = 0`.
pub fn semilattice2() -> FiniteSemigroup {
    FiniteSemigroup::from_table(
        "semilattice2",
        vec!["0".into(), "1".into()],
        vec![vec![0, 0], vec![0, 1]],
    )
    .expect("valid table")
}

/// One-element semigroup.
pub fn trivial() -> FiniteSemigroup {
    FiniteSemigroup::from_table("trivial", vec!["e".into()], vec![vec![0]]).expect("valid table")
}

/// Cyclic group of order `n` written multiplicatively, identity labelled `1`.
pub fn cyclic_group(n: usize) -> Result<FiniteSemigroup> {
    if n == 0 {
        return Err(Error::InvalidArgument("cyclic group of order 0".into()));
    }
    let labels = (0..n)
        .map(|k| match k {
            0 => "1".to_string(),
            1 => "g".to_string(),
            _ => format!("g{}", k),
        })
        .collect();
    let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    FiniteSemigroup::from_table(format!("Z{}", n), labels, table)
}
