use pebble_graph::{Vertex, VertexSet};

/// The set of currently pebbled vertices.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PebbleConfig {
    set: VertexSet,
}

impl PebbleConfig {
    pub fn empty(node_count: usize) -> Self {
        PebbleConfig { set: VertexSet::new(node_count) }
    }

    pub fn from_vertices(node_count: usize, vs: impl IntoIterator<Item = Vertex>) -> Self {
        PebbleConfig { set: VertexSet::from_vertices(node_count, vs) }
    }

    pub fn from_set(set: VertexSet) -> Self {
        PebbleConfig { set }
    }

    pub fn node_count(&self) -> usize {
        self.set.universe()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.set.contains(v)
    }

    pub fn insert(&mut self, v: Vertex) -> bool {
        self.set.insert(v)
    }

    pub fn remove(&mut self, v: Vertex) -> bool {
        self.set.remove(v)
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.set.iter()
    }

    pub fn to_vec(&self) -> Vec<Vertex> {
        self.set.to_vec()
    }

    pub fn as_set(&self) -> &VertexSet {
        &self.set
    }

    /// Number of pebbled vertices inside `r`.
    pub fn count_in(&self, r: &Region) -> usize {
        self.set.intersection_count(&r.mask)
    }
}

/// A cost mask: only pebbles on vertices of the mask are counted.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Region {
    pub mask: VertexSet,
}

impl Region {
    pub fn all(node_count: usize) -> Self {
        Region { mask: VertexSet::full(node_count) }
    }

    pub fn none(node_count: usize) -> Self {
        Region { mask: VertexSet::new(node_count) }
    }

    pub fn new(mask: VertexSet) -> Self {
        Region { mask }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.mask.contains(v)
    }
}
