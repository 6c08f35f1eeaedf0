use std::collections::BTreeMap;
use std::fmt::Write as _;

use pebble_graph::{Dag, DagBuilder, GraphError, Vertex};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("parameter out of range: {0}")]
    Domain(String),
    #[error("no anchor named `{0}`")]
    MissingAnchor(String),
    #[error("glued vertex {0} is not a source of the embedded gadget")]
    GlueNotSource(Vertex),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub(crate) fn domain(msg: impl Into<String>) -> ConstructionError {
    ConstructionError::Domain(msg.into())
}

/// A graph together with named vertices used to wire it into larger gadgets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetHandle {
    pub graph: Dag,
    pub anchors: BTreeMap<String, Vertex>,
    /// Layer index per vertex for the layered families.
    pub layers: Option<Vec<usize>>,
}

impl GadgetHandle {
    pub fn new(graph: Dag) -> Self {
        let mut anchors = BTreeMap::new();
        if let Some(z) = graph.sink() {
            anchors.insert("sink".to_string(), z);
        }
        GadgetHandle { graph, anchors, layers: None }
    }

    pub fn anchor(&self, name: &str) -> Result<Vertex, ConstructionError> {
        self.anchors.get(name).copied().ok_or_else(|| ConstructionError::MissingAnchor(name.to_string()))
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    /// The designated sink; every single-sink family sets one.
    pub fn sink(&self) -> Vertex {
        self.graph.sink().expect("gadget has a designated sink")
    }

    /// Sidecar text with one `anchor <name> <v>` line per anchor.
    pub fn write_anchors(&self) -> String {
        let mut out = String::new();
        for (name, v) in &self.anchors {
            writeln!(out, "anchor {name} {v}").unwrap();
        }
        out
    }
}

/// Reads the sidecar format written by [`GadgetHandle::write_anchors`].
pub fn parse_anchors(text: &str) -> Result<BTreeMap<String, Vertex>, ConstructionError> {
    let mut out = BTreeMap::new();
    for l in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        let parts: Vec<&str> = l.split_whitespace().collect();
        match parts.as_slice() {
            ["anchor", name, v] => {
                let v = v.parse().map_err(|_| domain(format!("bad anchor line `{l}`")))?;
                out.insert(name.to_string(), v);
            }
            _ => return Err(domain(format!("bad anchor line `{l}`"))),
        }
    }
    Ok(out)
}

/// Incremental assembly of gadgets from smaller ones.
#[derive(Default)]
pub struct Composer {
    b: DagBuilder,
    anchors: BTreeMap<String, Vertex>,
}

impl Composer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node_count(&self) -> usize {
        self.b.node_count()
    }

    pub fn add_vertex(&mut self) -> Vertex {
        self.b.add_vertex()
    }

    pub fn add_named(&mut self, name: impl Into<String>) -> Vertex {
        let v = self.b.add_vertex();
        self.anchors.insert(name.into(), v);
        v
    }

    pub fn name(&mut self, name: impl Into<String>, v: Vertex) {
        self.anchors.insert(name.into(), v);
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) {
        self.b.add_edge(u, v);
    }

    pub fn preds(&self, v: Vertex) -> &[Vertex] {
        self.b.preds(v)
    }

    /// Copies `g` in, identifying each `(old, existing)` pair of `glue`.
    /// Glued vertices must be sources of `g`. Returns the map from `g`'s ids
    /// to composed ids; anchors of `g` are not copied.
    pub fn embed(&mut self, g: &Dag, glue: &[(Vertex, Vertex)]) -> Result<Vec<Vertex>, ConstructionError> {
        let mut map = vec![usize::MAX; g.node_count()];
        for &(old, existing) in glue {
            if !g.preds(old).is_empty() {
                return Err(ConstructionError::GlueNotSource(old));
            }
            map[old] = existing;
        }
        for m in map.iter_mut().filter(|m| **m == usize::MAX) {
            *m = self.b.add_vertex();
        }
        for v in g.vertices() {
            for &u in g.preds(v) {
                self.b.add_edge(map[u], map[v]);
            }
        }
        Ok(map)
    }

    /// Copies `g` in and its anchors under `prefix`.
    pub fn embed_handle(&mut self, g: &GadgetHandle, prefix: &str) -> Result<Vec<Vertex>, ConstructionError> {
        let map = self.embed(&g.graph, &[])?;
        for (name, &v) in &g.anchors {
            self.anchors.insert(format!("{prefix}{name}"), map[v]);
        }
        Ok(map)
    }

    pub fn finish(mut self, sink: Option<Vertex>) -> Result<GadgetHandle, ConstructionError> {
        if let Some(z) = sink {
            self.b.set_sink(z);
            self.anchors.insert("sink".to_string(), z);
        }
        let graph = self.b.build()?;
        Ok(GadgetHandle { graph, anchors: self.anchors, layers: None })
    }
}
