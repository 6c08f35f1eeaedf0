use std::fmt;

use fixedbitset::FixedBitSet;

use crate::Vertex;

/// A set of vertex ids drawn from `0..universe`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    bits: FixedBitSet,
}

impl VertexSet {
    /// The empty set over `universe` vertices.
    pub fn new(universe: usize) -> Self {
        VertexSet { bits: FixedBitSet::with_capacity(universe) }
    }

    /// The set containing every vertex `0..universe`.
    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        VertexSet { bits }
    }

    /// Builds a set from an iterator of vertices.
    ///
    /// # Panics
    /// Panics if a vertex is outside the universe.
    pub fn from_vertices(universe: usize, vs: impl IntoIterator<Item = Vertex>) -> Self {
        let mut s = VertexSet::new(universe);
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    /// Inserts `v`, returning whether it was newly added.
    pub fn insert(&mut self, v: Vertex) -> bool {
        assert!(v < self.bits.len(), "vertex {v} outside universe {}", self.bits.len());
        !self.bits.put(v)
    }

    /// Removes `v`, returning whether it was present.
    pub fn remove(&mut self, v: Vertex) -> bool {
        if v >= self.bits.len() {
            return false;
        }
        let was = self.bits.contains(v);
        self.bits.set(v, false);
        was
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.bits.contains(v)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<Vertex> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        self.bits.difference_with(&other.bits);
    }

    /// Number of members shared with `other`.
    pub fn intersection_count(&self, other: &VertexSet) -> usize {
        self.bits.intersection_count(&other.bits)
    }

    /// The complement within the universe.
    pub fn complement(&self) -> VertexSet {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        VertexSet { bits }
    }

    pub fn as_bitset(&self) -> &FixedBitSet {
        &self.bits
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
