//! Occurrence digraphs and their linear extensions.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Finite digraph on vertices `0..len`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Digraph {
    len: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Digraph {
    pub fn new(len: usize) -> Self {
        Digraph {
            len,
            edges: BTreeSet::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn add_edge(&mut self, from: usize, to: usize) -> Result<()> {
        if from >= self.len || to >= self.len {
            return Err(Error::InvalidArgument(format!(
                "edge ({from},{to}) outside {} vertices",
                self.len
            )));
        }
        if from == to {
            return Err(Error::InvalidArgument(format!("self-loop at {from}")));
        }
        self.edges.insert((from, to));
        Ok(())
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Kahn's algorithm, always taking the least-indexed source.
    /// On failure returns a cycle `v0 -> v1 -> … -> v0` (without repeating `v0`).
    pub fn linear_extension(&self) -> std::result::Result<Vec<usize>, Vec<usize>> {
        let mut indegree = vec![0usize; self.len];
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); self.len];
        for &(a, b) in &self.edges {
            indegree[b] += 1;
            out[a].push(b);
        }
        let mut sources: BTreeSet<usize> = (0..self.len).filter(|&v| indegree[v] == 0).collect();
        let mut order = Vec::with_capacity(self.len);
        while let Some(v) = sources.pop_first() {
            order.push(v);
            for &w in &out[v] {
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    sources.insert(w);
                }
            }
        }
        if order.len() == self.len {
            return Ok(order);
        }
        Err(self.find_cycle(&indegree))
    }

    /// Every vertex left over by Kahn's algorithm has a predecessor that is also
    /// left over; walking predecessors must revisit a vertex.
    fn find_cycle(&self, indegree: &[usize]) -> Vec<usize> {
        let remaining: Vec<bool> = indegree.iter().map(|&d| d > 0).collect();
        let mut pred: Vec<Option<usize>> = vec![None; self.len];
        for &(a, b) in &self.edges {
            if remaining[a] && remaining[b] && pred[b].is_none() {
                pred[b] = Some(a);
            }
        }
        let start = remaining.iter().position(|&r| r).expect("some vertex remains");
        let mut seen = vec![usize::MAX; self.len];
        let mut walk = Vec::new();
        let mut v = start;
        while seen[v] == usize::MAX {
            seen[v] = walk.len();
            walk.push(v);
            v = pred[v].expect("remaining vertices have remaining predecessors");
        }
        let mut cycle: Vec<usize> = walk[seen[v]..].to_vec();
        // walk follows predecessors; reverse to follow edges
        cycle.reverse();
        let min_pos = cycle
            .iter()
            .enumerate()
            .min_by_key(|(_, &x)| x)
            .map(|(i, _)| i)
            .unwrap_or(0);
        cycle.rotate_left(min_pos);
        cycle
    }
}

/// Vertex `x_{iα}`: the `ordinal`-th occurrence (0-based) of variable `var` (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Occurrence {
    pub var: usize,
    pub ordinal: usize,
}

impl fmt::Display for Occurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}.{}", self.var + 1, self.ordinal + 1)
    }
}

/// Digraph whose vertices are the enumerated occurrences of each variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccurrenceDigraph {
    exponents: Vec<usize>,
    vertices: Vec<Occurrence>,
    offsets: Vec<usize>,
    graph: Digraph,
}

impl OccurrenceDigraph {
    /// Vertices `x_{iα}` for `α < exponents[i]`, in `(var, ordinal)` order.
    pub fn new(exponents: &[usize]) -> Self {
        let mut offsets = Vec::with_capacity(exponents.len());
        let mut vertices = Vec::new();
        for (var, &e) in exponents.iter().enumerate() {
            offsets.push(vertices.len());
            vertices.extend((0..e).map(|ordinal| Occurrence { var, ordinal }));
        }
        let graph = Digraph::new(vertices.len());
        OccurrenceDigraph {
            exponents: exponents.to_vec(),
            vertices,
            offsets,
            graph,
        }
    }

    pub fn exponents(&self) -> &[usize] {
        &self.exponents
    }

    pub fn vertices(&self) -> &[Occurrence] {
        &self.vertices
    }

    pub fn vertex(&self, o: Occurrence) -> Result<usize> {
        if o.var >= self.exponents.len() || o.ordinal >= self.exponents[o.var] {
            return Err(Error::InvalidArgument(format!("no vertex {o}")));
        }
        Ok(self.offsets[o.var] + o.ordinal)
    }

    pub fn add_edge(&mut self, from: Occurrence, to: Occurrence) -> Result<()> {
        let (a, b) = (self.vertex(from)?, self.vertex(to)?);
        self.graph.add_edge(a, b)
    }

    /// Adds the left-to-right order of all occurrences in `word` (0-based variables).
    pub fn add_word_order(&mut self, word: &[usize]) -> Result<()> {
        let mut seen = vec![0usize; self.exponents.len()];
        let mut occ = Vec::with_capacity(word.len());
        for &v in word {
            occ.push(Occurrence {
                var: v,
                ordinal: seen[v],
            });
            seen[v] += 1;
        }
        for a in 0..occ.len() {
            for b in a + 1..occ.len() {
                self.add_edge(occ[a], occ[b])?;
            }
        }
        Ok(())
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn edges(&self) -> impl Iterator<Item = (Occurrence, Occurrence)> + '_ {
        self.graph
            .edges()
            .map(|(a, b)| (self.vertices[a], self.vertices[b]))
    }
}

/// Total order of the occurrences consistent with every edge, or `CycleFound`.
pub fn linear_extension(g: &OccurrenceDigraph) -> Result<Vec<Occurrence>> {
    g.graph
        .linear_extension()
        .map(|order| order.into_iter().map(|v| g.vertices[v]).collect())
        .map_err(Error::CycleFound)
}
