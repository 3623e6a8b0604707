//! Undirected weighted graphs with dense vertex indices.
//!
//! A [`Graph`] is immutable once built. Edge weights live beside it in a
//! [`WeightVector`] so the flow can evolve weights without touching topology.

use std::collections::{HashMap, HashSet, VecDeque};
use std::ops::Index;

use crate::community::Partition;
use crate::error::{Error, Result};

/// One line of an edge list: two external ids and an optional weight.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeRecord {
    pub u: String,
    pub v: String,
    pub weight: Option<f64>,
}

impl EdgeRecord {
    pub fn new(u: impl Into<String>, v: impl Into<String>) -> Self {
        EdgeRecord {
            u: u.into(),
            v: v.into(),
            weight: None,
        }
    }

    pub fn weighted(u: impl Into<String>, v: impl Into<String>, weight: f64) -> Self {
        EdgeRecord {
            u: u.into(),
            v: v.into(),
            weight: Some(weight),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    /// Canonical `(u, v)` with `u < v`, in input order.
    edges: Vec<(usize, usize)>,
    /// Per vertex: `(neighbor, edge index)`.
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    /// Builds a graph and its initial weights from edge records.
    ///
    /// Vertices get dense indices in order of first appearance. Missing
    /// weights default to 1.0.
    pub fn from_records<I>(records: I) -> Result<(Graph, WeightVector)>
    where
        I: IntoIterator<Item = EdgeRecord>,
    {
        let mut names: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut intern = |name: String| -> usize {
            if let Some(&i) = index.get(&name) {
                return i;
            }
            let i = names.len();
            names.push(name.clone());
            index.insert(name, i);
            i
        };

        let mut pairs = Vec::new();
        let mut weights = Vec::new();
        for rec in records {
            if rec.u == rec.v {
                return Err(Error::SelfLoop(rec.u));
            }
            let w = rec.weight.unwrap_or(1.0);
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::NonPositiveWeight {
                    u: rec.u,
                    v: rec.v,
                    weight: w,
                });
            }
            let a = intern(rec.u);
            let b = intern(rec.v);
            pairs.push((a, b));
            weights.push(w);
        }

        let graph = Graph::assemble(names, index, &pairs)?;
        Ok((graph, WeightVector(weights)))
    }

    /// Builds a graph on vertices `0..n` named by their decimal index.
    pub fn from_index_edges(n: usize, pairs: &[(usize, usize)]) -> Result<Graph> {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let index = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        for &(u, v) in pairs {
            if u >= n || v >= n {
                return Err(Error::Parameter(format!(
                    "edge {u}-{v} references a vertex outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::SelfLoop(u.to_string()));
            }
        }
        Graph::assemble(names, index, pairs)
    }

    fn assemble(
        names: Vec<String>,
        index: HashMap<String, usize>,
        pairs: &[(usize, usize)],
    ) -> Result<Graph> {
        if names.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut seen = HashSet::with_capacity(pairs.len());
        let mut edges = Vec::with_capacity(pairs.len());
        let mut adjacency = vec![Vec::new(); names.len()];
        for &(a, b) in pairs {
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if !seen.insert((u, v)) {
                return Err(Error::DuplicateEdge(names[a].clone(), names[b].clone()));
            }
            let e = edges.len();
            edges.push((u, v));
            adjacency[u].push((v, e));
            adjacency[v].push((u, e));
        }
        Ok(Graph {
            names,
            index,
            edges,
            adjacency,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    /// `(neighbor, edge index)` pairs of `v`.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Edge index of `{u, v}` if present.
    pub fn find_edge(&self, u: usize, v: usize) -> Option<usize> {
        self.adjacency[u]
            .iter()
            .find(|&&(n, _)| n == v)
            .map(|&(_, e)| e)
    }
}

/// Strictly positive weight per edge index.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if let Some(i) = weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::Parameter(format!(
                "weight {} at edge {i} is not a positive finite number",
                weights[i]
            )));
        }
        Ok(WeightVector(weights))
    }

    /// Unit weights for every edge of `graph`.
    pub fn uniform(graph: &Graph) -> Self {
        WeightVector(vec![1.0; graph.edge_count()])
    }

    /// Wraps weights already known to be positive and finite.
    pub(crate) fn from_trusted(weights: Vec<f64>) -> Self {
        debug_assert!(weights.iter().all(|w| *w > 0.0 && w.is_finite()));
        WeightVector(weights)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        WeightVector::new(self.0.iter().map(|w| w * factor).collect())
    }

    pub fn check_against(&self, graph: &Graph) -> Result<()> {
        if self.len() != graph.edge_count() {
            return Err(Error::Mismatch(format!(
                "{} weights for {} edges",
                self.len(),
                graph.edge_count()
            )));
        }
        Ok(())
    }
}

impl Index<usize> for WeightVector {
    type Output = f64;

    fn index(&self, e: usize) -> &f64 {
        &self.0[e]
    }
}

/// BFS layers `N_0(x), N_1(x), ...` of a source's connected component.
#[derive(Debug, Clone, PartialEq)]
pub struct ShellDecomposition {
    source: usize,
    shell_of: Vec<Option<usize>>,
    shells: Vec<Vec<usize>>,
}

impl ShellDecomposition {
    pub fn source(&self) -> usize {
        self.source
    }

    /// Shell number of `v`, or `None` outside the source's component.
    pub fn shell_of(&self, v: usize) -> Option<usize> {
        self.shell_of[v]
    }

    pub fn shells(&self) -> &[Vec<usize>] {
        &self.shells
    }

    /// Largest index of a nonempty shell.
    pub fn depth(&self) -> usize {
        self.shells.len() - 1
    }

    /// Whether `v` (in shell `j`) has a neighbor in shell `j + 1`.
    pub fn reaches_outward(&self, graph: &Graph, v: usize) -> bool {
        match self.shell_of[v] {
            Some(j) => graph
                .neighbors(v)
                .iter()
                .any(|&(u, _)| self.shell_of[u] == Some(j + 1)),
            None => false,
        }
    }
}

pub fn shells(graph: &Graph, source: usize) -> ShellDecomposition {
    let mut shell_of = vec![None; graph.vertex_count()];
    let mut shells = vec![vec![source]];
    shell_of[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let next = shell_of[u].unwrap() + 1;
        for &(v, _) in graph.neighbors(u) {
            if shell_of[v].is_none() {
                shell_of[v] = Some(next);
                if shells.len() == next {
                    shells.push(Vec::new());
                }
                shells[next].push(v);
                queue.push_back(v);
            }
        }
    }
    ShellDecomposition {
        source,
        shell_of,
        shells,
    }
}

/// Components of the subgraph keeping edges whose mask entry is `true`.
///
/// Component ids are dense and assigned in order of each component's
/// lowest vertex index.
pub fn connected_components(graph: &Graph, keep: &[bool]) -> Partition {
    assert_eq!(keep.len(), graph.edge_count(), "one mask entry per edge");
    let n = graph.vertex_count();
    let mut labels = vec![usize::MAX; n];
    let mut next = 0;
    let mut stack = Vec::new();
    for start in 0..n {
        if labels[start] != usize::MAX {
            continue;
        }
        labels[start] = next;
        stack.push(start);
        while let Some(u) = stack.pop() {
            for &(v, e) in graph.neighbors(u) {
                if keep[e] && labels[v] == usize::MAX {
                    labels[v] = next;
                    stack.push(v);
                }
            }
        }
        next += 1;
    }
    Partition::from_dense(labels, next)
}
