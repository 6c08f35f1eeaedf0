use std::collections::VecDeque;

use crate::{Dag, Vertex, VertexSet};

/// Parameters for a vertex-capacitated minimum cut.
///
/// Paths run from any vertex of `sources` to any vertex of `targets` and may
/// only use vertices in `within`. Vertices in `cuttable` have capacity one;
/// all other vertices cannot be cut.
#[derive(Debug, Clone)]
pub struct CutQuery {
    pub sources: VertexSet,
    pub targets: VertexSet,
    pub cuttable: VertexSet,
    pub within: VertexSet,
}

struct Edge {
    to: usize,
    cap: usize,
}

struct Network {
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

impl Network {
    fn new(n: usize) -> Self {
        Network { edges: Vec::new(), adj: vec![Vec::new(); n] }
    }

    fn add(&mut self, u: usize, v: usize, cap: usize) {
        self.adj[u].push(self.edges.len());
        self.edges.push(Edge { to: v, cap });
        self.adj[v].push(self.edges.len());
        self.edges.push(Edge { to: u, cap: 0 });
    }

    /// Breadth-first search in the residual graph; returns the parent edge of
    /// every reached node.
    fn bfs(&self, s: usize) -> Vec<Option<usize>> {
        let mut parent = vec![None; self.adj.len()];
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &e in &self.adj[u] {
                let to = self.edges[e].to;
                if self.edges[e].cap > 0 && !seen[to] {
                    seen[to] = true;
                    parent[to] = Some(e);
                    q.push_back(to);
                }
            }
        }
        parent
    }

    fn max_flow(&mut self, s: usize, t: usize, limit: usize) -> usize {
        let mut flow = 0;
        while flow < limit {
            let parent = self.bfs(s);
            if parent[t].is_none() {
                break;
            }
            let mut bottleneck = usize::MAX;
            let mut v = t;
            while v != s {
                let e = parent[v].unwrap();
                bottleneck = bottleneck.min(self.edges[e].cap);
                v = self.edges[e ^ 1].to;
            }
            let mut v = t;
            while v != s {
                let e = parent[v].unwrap();
                self.edges[e].cap -= bottleneck;
                self.edges[e ^ 1].cap += bottleneck;
                v = self.edges[e ^ 1].to;
            }
            flow = flow.saturating_add(bottleneck);
        }
        flow
    }

    fn reachable(&self, s: usize) -> Vec<bool> {
        let parent = self.bfs(s);
        let mut r: Vec<bool> = parent.iter().map(Option::is_some).collect();
        r[s] = true;
        r
    }
}

/// Minimum set of `cuttable` vertices meeting every `sources`→`targets` path
/// inside `within`, or `None` when some path avoids all cuttable vertices.
pub fn min_vertex_cut(d: &Dag, q: &CutQuery) -> Option<VertexSet> {
    let n = d.node_count();
    let inf = n + 1;
    let (s, t) = (2 * n, 2 * n + 1);
    let mut net = Network::new(2 * n + 2);
    for v in q.within.iter() {
        let cap = if q.cuttable.contains(v) { 1 } else { inf };
        net.add(2 * v, 2 * v + 1, cap);
        for &u in d.preds(v) {
            if q.within.contains(u) {
                net.add(2 * u + 1, 2 * v, inf);
            }
        }
        if q.sources.contains(v) {
            net.add(s, 2 * v, inf);
        }
        if q.targets.contains(v) {
            net.add(2 * v + 1, t, inf);
        }
    }
    let flow = net.max_flow(s, t, inf);
    if flow >= inf {
        return None;
    }
    let reach = net.reachable(s);
    let cut = q.within.iter().filter(|&v| reach[2 * v] && !reach[2 * v + 1]);
    Some(VertexSet::from_vertices(n, cut))
}

/// A minimum-cardinality blocking set for `targets`: every path from a source
/// of `d` to a vertex of `targets` contains one of its members.
///
/// # Panics
/// Panics if `targets` is empty.
pub fn min_blocking_set(d: &Dag, targets: &VertexSet) -> VertexSet {
    assert!(!targets.is_empty(), "min_blocking_set needs at least one target");
    let n = d.node_count();
    let q = CutQuery {
        sources: VertexSet::from_vertices(n, d.sources()),
        targets: targets.clone(),
        cuttable: VertexSet::full(n),
        within: VertexSet::full(n),
    };
    min_vertex_cut(d, &q).expect("every vertex is cuttable")
}

/// Whether `blocker` meets every path from a source of `d` to `targets`.
pub fn is_blocking(d: &Dag, blocker: &VertexSet, targets: &VertexSet) -> bool {
    let n = d.node_count();
    let mut seen = VertexSet::new(n);
    let mut stack: Vec<Vertex> = d.sources().into_iter().filter(|&v| !blocker.contains(v)).collect();
    for &v in &stack {
        seen.insert(v);
    }
    while let Some(u) = stack.pop() {
        if targets.contains(u) {
            return false;
        }
        for &w in d.succs(u) {
            if !blocker.contains(w) && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    true
}
