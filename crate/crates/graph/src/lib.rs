//! Directed acyclic graphs for pebble games.
//!
//! A [`Dag`] stores predecessor lists as the source of truth, since every
//! pebbling rule asks "are the predecessors of `v` pebbled?". Successor lists
//! are derived on first use. Vertex ids are dense `0..n`.
//!
//! Besides the container itself this crate provides structural validation
//! ([`validate`]), ancestry queries ([`ancestors`], [`descendants`]), blocking
//! sets computed as vertex-capacitated minimum cuts ([`min_blocking_set`]),
//! and the plain-text and DOT formats ([`io`]).

mod cut;
mod dag;
pub mod io;
mod reach;
mod set;
mod validate;

pub use cut::{is_blocking, min_blocking_set, min_vertex_cut, CutQuery};
pub use dag::{Dag, DagBuilder, GraphError, Vertex};
pub use reach::{ancestors, descendants, proper_ancestors, proper_descendants};
pub use set::VertexSet;
pub use validate::{validate, validate_builder, ValidationReport, Violation};
