use pebble_constructions::road;
use pebble_graph::{ancestors, min_vertex_cut, CutQuery, Dag, Vertex, VertexSet};
use pebble_solvers::{Challenger, GameState, Response};

use crate::StrategyError;

/// Dymond–Tompa Challenger for `road(w, l)` that tracks a focus subroad.
///
/// The focus is the set of ancestors of `sink` at layers `>= low`, and there
/// is always a path from `sink` to the challenged vertex carrying no pebble
/// except at its end. While the focus sink is still reachable from the focus
/// sources by an unpebbled path the Challenger stays. When a placement cuts
/// it off, a minimum blocking set made of pebbles decides: a set whose top
/// layer is narrower than `w`, or whose midpoint layer lies in the upper
/// half of the focus, triggers a jump into the subroad below the set;
/// otherwise the Challenger stays and keeps the part above it.
pub struct RoadChallenger {
    w: usize,
    layer: Vec<usize>,
    sink: Vertex,
    low: usize,
    challenged: Option<Vertex>,
}

impl RoadChallenger {
    pub fn new(w: usize, l: usize) -> Result<Self, StrategyError> {
        let g = road(w, l)?;
        let layer = g.layers.clone().expect("roads carry layers");
        Ok(RoadChallenger { w, layer, sink: g.sink(), low: 0, challenged: None })
    }

    /// Focus sink and lowest focus layer.
    pub fn focus(&self) -> (Vertex, usize) {
        (self.sink, self.low)
    }

    fn focus_set(&self, d: &Dag) -> VertexSet {
        let mut f = ancestors(d, self.sink).expect("focus sink in range");
        for v in f.to_vec() {
            if self.layer[v] < self.low {
                f.remove(v);
            }
        }
        f
    }
}

/// Whether some path `from -> ... -> to` has no pebble except at `to`.
fn semiopen(d: &Dag, from: Vertex, to: Vertex, pebbled: &VertexSet) -> bool {
    if from == to {
        return true;
    }
    if pebbled.contains(from) {
        return false;
    }
    let mut seen = VertexSet::new(d.node_count());
    let mut stack = vec![from];
    seen.insert(from);
    while let Some(x) = stack.pop() {
        for &y in d.succs(x) {
            if y == to {
                return true;
            }
            if !pebbled.contains(y) && seen.insert(y) {
                stack.push(y);
            }
        }
    }
    false
}

/// Unpebbled vertices of `within` that reach `target` through unpebbled
/// vertices of `within`. The target itself is included whatever its state.
fn reaching(d: &Dag, target: Vertex, within: &VertexSet, pebbled: &VertexSet) -> VertexSet {
    let mut seen = VertexSet::new(d.node_count());
    seen.insert(target);
    let mut stack = vec![target];
    while let Some(x) = stack.pop() {
        for &y in d.preds(x) {
            if within.contains(y) && !pebbled.contains(y) && seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen
}

impl Challenger for RoadChallenger {
    fn respond(&mut self, d: &Dag, before: &GameState, placed: Vertex) -> Response {
        let c = *self.challenged.get_or_insert(before.challenged);
        let mut pebbled = before.pebbled.as_set().clone();
        pebbled.insert(placed);
        if !semiopen(d, self.sink, c, &pebbled) {
            self.challenged = Some(placed);
            return Response::Jump;
        }
        let focus = self.focus_set(d);
        if !focus.contains(placed) {
            return Response::Stay;
        }
        let sources: Vec<Vertex> = focus.iter().filter(|&v| self.layer[v] == self.low).collect();
        let open = reaching(d, self.sink, &focus, &pebbled);
        if sources.iter().any(|&s| open.contains(s)) {
            return Response::Stay;
        }
        let mut cuttable = pebbled.clone();
        cuttable.intersect_with(&focus);
        cuttable.remove(self.sink);
        let n = d.node_count();
        let q = CutQuery {
            sources: VertexSet::from_vertices(n, sources.iter().copied()),
            targets: VertexSet::from_vertices(n, [self.sink]),
            cuttable,
            within: focus.clone(),
        };
        let blocking = min_vertex_cut(d, &q).expect("pebbles disconnect the focus sink");
        let lo = blocking.iter().map(|v| self.layer[v]).min().expect("blocking set is non-empty");
        let hi = blocking.iter().map(|v| self.layer[v]).max().expect("blocking set is non-empty");
        let top_width = focus.iter().filter(|&v| self.layer[v] == hi).count();
        let length = self.layer[self.sink] - self.low;
        if top_width >= self.w && (lo - self.low) + (hi - self.low) <= length {
            self.low = hi + 1;
            return Response::Stay;
        }
        // Jump into the subroad below the blocking set, rooted on an open
        // path from the focus sources to the new pebble.
        let mut free = VertexSet::full(n);
        free.difference_with(&pebbled);
        let toward = reaching(d, placed, &focus, &pebbled);
        let mut fed = VertexSet::new(n);
        let mut stack: Vec<Vertex> = sources.iter().copied().filter(|&s| free.contains(s)).collect();
        for &s in &stack {
            fed.insert(s);
        }
        while let Some(x) = stack.pop() {
            for &y in d.succs(x) {
                if focus.contains(y) && free.contains(y) && fed.insert(y) {
                    stack.push(y);
                }
            }
        }
        let root = (lo > self.low)
            .then(|| focus.iter().find(|&v| self.layer[v] == lo - 1 && toward.contains(v) && fed.contains(v)))
            .flatten();
        self.sink = root.unwrap_or(placed);
        self.challenged = Some(placed);
        Response::Jump
    }
}
