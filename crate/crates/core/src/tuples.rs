//! Tuple indexing: lexicographic, first coordinate most significant.

use crate::semigroup::ElementId;

/// Flat index of `tuple` over a universe of size `order`.
pub fn encode(tuple: &[ElementId], order: usize) -> usize {
    tuple.iter().fold(0, |acc, e| acc * order + e.index())
}

/// Inverse of [`encode`], writing into `out`.
pub fn decode_into(mut index: usize, order: usize, out: &mut [ElementId]) {
    for slot in out.iter_mut().rev() {
        *slot = ElementId::new(index % order);
        index /= order;
    }
}

pub fn decode(index: usize, order: usize, arity: usize) -> Vec<ElementId> {
    let mut v = vec![ElementId(0); arity];
    decode_into(index, order, &mut v);
    v
}

/// Odometer over `order^arity` tuples in lexicographic order.
#[derive(Debug, Clone)]
pub struct Lex {
    order: usize,
    current: Vec<ElementId>,
    done: bool,
}

impl Lex {
    pub fn new(order: usize, arity: usize) -> Self {
        Lex {
            order,
            current: vec![ElementId(0); arity],
            done: order == 0,
        }
    }

    /// Advances in place; returns `false` after the last tuple.
    pub fn advance(&mut self) -> bool {
        for slot in self.current.iter_mut().rev() {
            if slot.index() + 1 < self.order {
                *slot = ElementId::new(slot.index() + 1);
                return true;
            }
            *slot = ElementId(0);
        }
        self.done = true;
        false
    }

    pub fn current(&self) -> &[ElementId] {
        &self.current
    }
}

impl Iterator for Lex {
    type Item = Vec<ElementId>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        self.advance();
        Some(out)
    }
}

/// Every tuple over a monoid exactly once, ordered by the number of
/// non-identity coordinates, then by support positions, then lexicographically.
#[derive(Debug, Clone)]
pub struct BySupport {
    identity: ElementId,
    others: Vec<ElementId>,
    arity: usize,
    max_support: usize,
    size: usize,
    positions: Vec<usize>,
    digits: Vec<usize>,
    started: bool,
    done: bool,
}

impl BySupport {
    pub fn new(order: usize, arity: usize, identity: ElementId) -> Self {
        Self::up_to(order, arity, identity, arity)
    }

    /// Only tuples with at most `max_support` non-identity coordinates.
    pub fn up_to(order: usize, arity: usize, identity: ElementId, max_support: usize) -> Self {
        let others = (0..order)
            .map(ElementId::new)
            .filter(|&e| e != identity)
            .collect();
        BySupport {
            identity,
            others,
            arity,
            max_support: max_support.min(arity),
            size: 0,
            positions: Vec::new(),
            digits: Vec::new(),
            started: false,
            done: false,
        }
    }

    fn emit(&self) -> Vec<ElementId> {
        let mut t = vec![self.identity; self.arity];
        for (p, d) in self.positions.iter().zip(&self.digits) {
            t[*p] = self.others[*d];
        }
        t
    }

    fn step(&mut self) -> bool {
        // next assignment of digits
        for d in self.digits.iter_mut().rev() {
            if *d + 1 < self.others.len() {
                *d += 1;
                return true;
            }
            *d = 0;
        }
        // next position subset of the same size
        let k = self.size;
        let n = self.arity;
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.positions[i] < n - k + i {
                self.positions[i] += 1;
                for j in i + 1..k {
                    self.positions[j] = self.positions[j - 1] + 1;
                }
                return true;
            }
        }
        // next support size
        self.size += 1;
        if self.size > self.max_support || self.others.is_empty() {
            return false;
        }
        self.positions = (0..self.size).collect();
        self.digits = vec![0; self.size];
        true
    }
}

impl Iterator for BySupport {
    type Item = Vec<ElementId>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.emit());
        }
        if self.step() {
            Some(self.emit())
        } else {
            self.done = true;
            None
        }
    }
}

/// Number of non-identity coordinates.
pub fn support_size(tuple: &[ElementId], identity: ElementId) -> usize {
    tuple.iter().filter(|&&e| e != identity).count()
}
