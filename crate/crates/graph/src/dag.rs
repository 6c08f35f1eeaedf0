use std::collections::VecDeque;
use std::sync::OnceLock;

use thiserror::Error;

use crate::VertexSet;

/// Dense vertex identifier.
pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph with {node_count} vertices")]
    OutOfRange { vertex: Vertex, node_count: usize },
    #[error("graph contains a cycle through vertex {vertex}")]
    Cycle { vertex: Vertex },
    #[error("self-loop on vertex {vertex}")]
    SelfLoop { vertex: Vertex },
    #[error("designated sink {vertex} has out-degree {out_degree}")]
    SinkHasSuccessors { vertex: Vertex, out_degree: usize },
}

/// An immutable directed acyclic graph with predecessor lists.
///
/// Predecessor lists are sorted and free of duplicates. The optional sink is
/// guaranteed to have out-degree zero.
#[derive(Debug)]
pub struct Dag {
    preds: Vec<Vec<Vertex>>,
    labels: Vec<Option<String>>,
    sink: Option<Vertex>,
    succs: OnceLock<Vec<Vec<Vertex>>>,
}

impl Clone for Dag {
    fn clone(&self) -> Self {
        Dag {
            preds: self.preds.clone(),
            labels: self.labels.clone(),
            sink: self.sink,
            succs: OnceLock::new(),
        }
    }
}

impl PartialEq for Dag {
    fn eq(&self, other: &Self) -> bool {
        self.preds == other.preds && self.labels == other.labels && self.sink == other.sink
    }
}

impl Eq for Dag {}

impl Dag {
    /// Builds a graph from predecessor lists, checking ranges and acyclicity.
    pub fn from_preds(preds: Vec<Vec<Vertex>>, sink: Option<Vertex>) -> Result<Dag, GraphError> {
        let mut b = DagBuilder::with_vertices(preds.len());
        for (v, ps) in preds.into_iter().enumerate() {
            for u in ps {
                b.add_edge(u, v);
            }
        }
        if let Some(z) = sink {
            b.set_sink(z);
        }
        b.build()
    }

    pub fn node_count(&self) -> usize {
        self.preds.len()
    }

    pub fn edge_count(&self) -> usize {
        self.preds.iter().map(Vec::len).sum()
    }

    pub fn preds(&self, v: Vertex) -> &[Vertex] {
        &self.preds[v]
    }

    /// Successor lists, derived from the predecessor lists on first call.
    pub fn succs(&self, v: Vertex) -> &[Vertex] {
        &self.succ_table()[v]
    }

    fn succ_table(&self) -> &Vec<Vec<Vertex>> {
        self.succs.get_or_init(|| {
            let mut s = vec![Vec::new(); self.preds.len()];
            for (v, ps) in self.preds.iter().enumerate() {
                for &u in ps {
                    s[u].push(v);
                }
            }
            s
        })
    }

    pub fn in_degree(&self, v: Vertex) -> usize {
        self.preds[v].len()
    }

    pub fn out_degree(&self, v: Vertex) -> usize {
        self.succs(v).len()
    }

    pub fn max_fanin(&self) -> usize {
        self.preds.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn sink(&self) -> Option<Vertex> {
        self.sink
    }

    pub fn label(&self, v: Vertex) -> Option<&str> {
        self.labels[v].as_deref()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.preds.len()
    }

    /// Vertices without predecessors, in increasing order.
    pub fn sources(&self) -> Vec<Vertex> {
        self.vertices().filter(|&v| self.preds[v].is_empty()).collect()
    }

    /// Vertices without successors, in increasing order.
    pub fn sinks(&self) -> Vec<Vertex> {
        self.vertices().filter(|&v| self.succs(v).is_empty()).collect()
    }

    /// All edges `(u, v)` sorted by `(u, v)`.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut es: Vec<_> = self
            .preds
            .iter()
            .enumerate()
            .flat_map(|(v, ps)| ps.iter().map(move |&u| (u, v)))
            .collect();
        es.sort_unstable();
        es
    }

    /// A topological order (Kahn's algorithm, smallest ready id first).
    pub fn topological_order(&self) -> Vec<Vertex> {
        topo(&self.preds).expect("Dag invariant: acyclic")
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v < self.node_count() {
            Ok(())
        } else {
            Err(GraphError::OutOfRange { vertex: v, node_count: self.node_count() })
        }
    }

    /// The subgraph induced on `keep`, relabelled in increasing old-id order.
    /// Returns the graph and the map from new ids to old ids. The sink is
    /// carried over when it is kept.
    pub fn induced(&self, keep: &VertexSet) -> (Dag, Vec<Vertex>) {
        let old: Vec<Vertex> = keep.iter().collect();
        let mut new_of = vec![usize::MAX; self.node_count()];
        for (i, &v) in old.iter().enumerate() {
            new_of[v] = i;
        }
        let mut b = DagBuilder::with_vertices(old.len());
        for (i, &v) in old.iter().enumerate() {
            for &u in &self.preds[v] {
                if new_of[u] != usize::MAX {
                    b.add_edge(new_of[u], i);
                }
            }
            if let Some(l) = &self.labels[v] {
                b.set_label(i, l.clone());
            }
        }
        let mut d = b.build().expect("induced subgraph of a DAG is a DAG");
        if let Some(z) = self.sink {
            if new_of[z] != usize::MAX {
                d.sink = Some(new_of[z]);
            }
        }
        (d, old)
    }

    /// Returns a copy with the designated sink replaced.
    pub fn with_sink(&self, sink: Option<Vertex>) -> Result<Dag, GraphError> {
        if let Some(z) = sink {
            self.check_vertex(z)?;
            let out = self.out_degree(z);
            if out > 0 {
                return Err(GraphError::SinkHasSuccessors { vertex: z, out_degree: out });
            }
        }
        let mut d = self.clone();
        d.sink = sink;
        Ok(d)
    }
}

pub(crate) fn topo(preds: &[Vec<Vertex>]) -> Result<Vec<Vertex>, GraphError> {
    let n = preds.len();
    let mut indeg: Vec<usize> = preds.iter().map(Vec::len).collect();
    let mut succs = vec![Vec::new(); n];
    for (v, ps) in preds.iter().enumerate() {
        for &u in ps {
            succs[u].push(v);
        }
    }
    let mut queue: VecDeque<Vertex> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &v in &succs[u] {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                queue.push_back(v);
            }
        }
    }
    if order.len() == n {
        Ok(order)
    } else {
        let vertex = (0..n).find(|&v| indeg[v] > 0).unwrap_or(0);
        Err(GraphError::Cycle { vertex })
    }
}

/// Incremental constructor for [`Dag`].
///
/// The builder accepts arbitrary edges, including ones closing a cycle, so
/// that [`crate::validate_builder`] can report on malformed input;
/// [`DagBuilder::build`] rejects them.
#[derive(Debug, Clone, Default)]
pub struct DagBuilder {
    preds: Vec<Vec<Vertex>>,
    labels: Vec<Option<String>>,
    sink: Option<Vertex>,
    pending_range_error: Option<GraphError>,
}

impl DagBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices(n: usize) -> Self {
        let mut b = Self::new();
        b.add_vertices(n);
        b
    }

    pub fn node_count(&self) -> usize {
        self.preds.len()
    }

    pub fn add_vertex(&mut self) -> Vertex {
        self.preds.push(Vec::new());
        self.labels.push(None);
        self.preds.len() - 1
    }

    /// Adds `k` vertices and returns the id of the first one.
    pub fn add_vertices(&mut self, k: usize) -> Vertex {
        let first = self.preds.len();
        for _ in 0..k {
            self.add_vertex();
        }
        first
    }

    /// Adds the edge `(u, v)`; duplicates are ignored.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) {
        let n = self.preds.len();
        for x in [u, v] {
            if x >= n && self.pending_range_error.is_none() {
                self.pending_range_error = Some(GraphError::OutOfRange { vertex: x, node_count: n });
            }
        }
        if u >= n || v >= n {
            return;
        }
        let ps = &mut self.preds[v];
        if let Err(pos) = ps.binary_search(&u) {
            ps.insert(pos, u);
        }
    }

    pub fn preds(&self, v: Vertex) -> &[Vertex] {
        &self.preds[v]
    }

    pub fn set_label(&mut self, v: Vertex, label: impl Into<String>) {
        self.labels[v] = Some(label.into());
    }

    pub fn set_sink(&mut self, v: Vertex) {
        self.sink = Some(v);
    }

    pub fn sink(&self) -> Option<Vertex> {
        self.sink
    }

    pub(crate) fn raw(&self) -> (&[Vec<Vertex>], Option<Vertex>, Option<&GraphError>) {
        (&self.preds, self.sink, self.pending_range_error.as_ref())
    }

    pub fn build(self) -> Result<Dag, GraphError> {
        if let Some(e) = self.pending_range_error {
            return Err(e);
        }
        for (v, ps) in self.preds.iter().enumerate() {
            if ps.contains(&v) {
                return Err(GraphError::SelfLoop { vertex: v });
            }
        }
        topo(&self.preds)?;
        let d = Dag { preds: self.preds, labels: self.labels, sink: None, succs: OnceLock::new() };
        match self.sink {
            None => Ok(d),
            Some(z) => d.with_sink(Some(z)),
        }
    }
}
