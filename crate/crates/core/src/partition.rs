//! Equivalence relations on the universe of a semigroup.

use crate::error::{Error, Result};
use crate::semigroup::{ElementId, FiniteSemigroup};

/// Disjoint nonempty blocks covering `0..order`.
///
/// Blocks are kept sorted internally and ordered by their least member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<Vec<ElementId>>,
    class: Vec<usize>,
}

impl Partition {
    pub fn from_blocks(order: usize, blocks: Vec<Vec<ElementId>>) -> Result<Self> {
        let mut class = vec![usize::MAX; order];
        let mut blocks: Vec<Vec<ElementId>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort();
                b
            })
            .collect();
        if blocks.iter().any(|b| b.is_empty()) {
            return Err(Error::InvalidPartition("empty block".into()));
        }
        blocks.sort_by_key(|b| b[0]);
        for (k, block) in blocks.iter().enumerate() {
            for e in block {
                let slot = class
                    .get_mut(e.index())
                    .ok_or(Error::ElementOutOfRange(e.index()))?;
                if *slot != usize::MAX {
                    return Err(Error::InvalidPartition(format!(
                        "element {} appears in two blocks",
                        e.index()
                    )));
                }
                *slot = k;
            }
        }
        if let Some(missing) = class.iter().position(|&c| c == usize::MAX) {
            return Err(Error::InvalidPartition(format!(
                "element {} is in no block",
                missing
            )));
        }
        Ok(Partition { blocks, class })
    }

    pub fn singletons(order: usize) -> Self {
        Partition {
            blocks: (0..order).map(|i| vec![ElementId::new(i)]).collect(),
            class: (0..order).collect(),
        }
    }

    /// Only the given blocks are nontrivial; everything else is a singleton.
    pub fn from_classes(order: usize, classes: &[Vec<ElementId>]) -> Result<Self> {
        let mut seen = vec![false; order];
        let mut blocks: Vec<Vec<ElementId>> = Vec::new();
        for c in classes {
            for e in c {
                if e.index() >= order {
                    return Err(Error::ElementOutOfRange(e.index()));
                }
                seen[e.index()] = true;
            }
            blocks.push(c.clone());
        }
        blocks.extend(
            (0..order)
                .filter(|&i| !seen[i])
                .map(|i| vec![ElementId::new(i)]),
        );
        Self::from_blocks(order, blocks)
    }

    pub fn blocks(&self) -> &[Vec<ElementId>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn universe_len(&self) -> usize {
        self.class.len()
    }

    /// Index of the block containing `e`.
    pub fn class_of(&self, e: ElementId) -> usize {
        self.class[e.index()]
    }

    pub fn representative(&self, e: ElementId) -> ElementId {
        self.blocks[self.class_of(e)][0]
    }

    pub fn same_class(&self, a: ElementId, b: ElementId) -> bool {
        self.class_of(a) == self.class_of(b)
    }
}

/// Least congruence on `s` that identifies every given pair.
pub fn congruence_closure(s: &FiniteSemigroup, pairs: &[(ElementId, ElementId)]) -> Partition {
    let n = s.order();
    let mut uf = UnionFind::new(n);
    for &(a, b) in pairs {
        uf.union(a.index(), b.index());
    }
    loop {
        let mut changed = false;
        for x in 0..n {
            let r = uf.find(x);
            if r == x {
                continue;
            }
            let (ex, er) = (ElementId::new(x), ElementId::new(r));
            for t in s.elements() {
                changed |= uf.union(s.mul(t, ex).index(), s.mul(t, er).index());
                changed |= uf.union(s.mul(ex, t).index(), s.mul(er, t).index());
            }
        }
        if !changed {
            break;
        }
    }
    let mut groups: Vec<Vec<ElementId>> = vec![Vec::new(); n];
    for x in 0..n {
        groups[uf.find(x)].push(ElementId::new(x));
    }
    let blocks = groups.into_iter().filter(|g| !g.is_empty()).collect();
    Partition::from_blocks(n, blocks).expect("union-find yields a partition")
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Roots always point at the smaller index.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(v: &[usize]) -> Vec<ElementId> {
        v.iter().map(|&i| ElementId::new(i)).collect()
    }

    #[test]
    fn rejects_overlap_and_gaps() {
        assert!(Partition::from_blocks(3, vec![ids(&[0, 1]), ids(&[1, 2])]).is_err());
        assert!(Partition::from_blocks(3, vec![ids(&[0, 1])]).is_err());
        assert!(Partition::from_blocks(2, vec![ids(&[0]), ids(&[1]), vec![]]).is_err());
    }

    #[test]
    fn blocks_ordered_by_least_member() {
        let p = Partition::from_blocks(4, vec![ids(&[3, 1]), ids(&[2, 0])]).unwrap();
        assert_eq!(p.blocks()[0], ids(&[0, 2]));
        assert_eq!(p.representative(ElementId(3)), ElementId(1));
        assert!(p.same_class(ElementId(0), ElementId(2)));
    }
}
