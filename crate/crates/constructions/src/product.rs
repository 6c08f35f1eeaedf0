use pebble_graph::{DagBuilder, Vertex};

use crate::handle::{domain, ConstructionError, GadgetHandle};

/// The three nodes of a `(v1, v2)` cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellPart {
    Out = 0,
    Ext = 1,
    Int = 2,
}

/// Id of a cell node in `product_reversible(g1, g2)` where `g2` has `n2` vertices.
pub fn cell_id(n2: usize, v1: Vertex, v2: Vertex, part: CellPart) -> Vertex {
    3 * (v1 * n2 + v2) + part as usize
}

fn single_sink(g: &GadgetHandle, which: &str) -> Result<Vertex, ConstructionError> {
    match (g.graph.sink(), g.graph.sinks().as_slice()) {
        (Some(z), [only]) if *only == z => Ok(z),
        _ => Err(domain(format!("{which} must have a single designated sink"))),
    }
}

/// Reversible product: every vertex of `g1` becomes a block of `g2` cells.
/// The sink is `(z1, z2)_out`.
pub fn product_reversible(g1: &GadgetHandle, g2: &GadgetHandle) -> Result<GadgetHandle, ConstructionError> {
    let z1 = single_sink(g1, "outer graph")?;
    let z2 = single_sink(g2, "inner graph")?;
    let (n1, n2) = (g1.node_count(), g2.node_count());
    let id = |v1, v2, part| cell_id(n2, v1, v2, part);
    let mut b = DagBuilder::with_vertices(3 * n1 * n2);
    for v1 in 0..n1 {
        for v2 in 0..n2 {
            b.add_edge(id(v1, v2, CellPart::Ext), id(v1, v2, CellPart::Out));
            b.add_edge(id(v1, v2, CellPart::Int), id(v1, v2, CellPart::Out));
            for &w1 in g1.graph.preds(v1) {
                b.add_edge(id(w1, z2, CellPart::Out), id(v1, v2, CellPart::Ext));
            }
            for &w2 in g2.graph.preds(v2) {
                b.add_edge(id(v1, w2, CellPart::Out), id(v1, v2, CellPart::Int));
            }
        }
    }
    let sink = id(z1, z2, CellPart::Out);
    b.set_sink(sink);
    let mut h = GadgetHandle::new(b.build()?);
    h.layers = Some((0..3 * n1 * n2).map(|c| c / (3 * n2)).collect());
    Ok(h)
}

/// Vertex layout of `product_standard`: each block holds the inner graph
/// followed by alternating centipede legs `s_i` and spine nodes `r_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PointyLayout {
    pub n1: usize,
    pub n2: usize,
    /// Sink of the inner graph, which doubles as `r_0`.
    pub z2: Vertex,
}

impl PointyLayout {
    pub fn block_size(&self) -> usize {
        self.n2 + 2 * self.n1
    }

    pub fn inner(&self, v1: Vertex, v2: Vertex) -> Vertex {
        v1 * self.block_size() + v2
    }

    /// Leg `s_i` for `1 <= i <= n1`.
    pub fn leg(&self, v1: Vertex, i: usize) -> Vertex {
        v1 * self.block_size() + self.n2 + 2 * (i - 1)
    }

    /// Spine node `r_i` for `0 <= i <= n1`.
    pub fn spine(&self, v1: Vertex, i: usize) -> Vertex {
        if i == 0 {
            self.inner(v1, self.z2)
        } else {
            v1 * self.block_size() + self.n2 + 2 * (i - 1) + 1
        }
    }

    pub fn tip(&self, v1: Vertex) -> Vertex {
        self.spine(v1, self.n1)
    }
}

/// Standard product output. `hypothesis_ok` is false when the inner graph
/// has standard price below 3, in which case no price claim is made.
#[derive(Clone, Debug)]
pub struct StandardProduct {
    pub gadget: GadgetHandle,
    pub layout: PointyLayout,
    pub hypothesis_ok: bool,
}

/// Standard product; `inner_price` is the standard price of `g2` if known.
pub fn product_standard(g1: &GadgetHandle, g2: &GadgetHandle, inner_price: Option<usize>) -> Result<StandardProduct, ConstructionError> {
    let z1 = single_sink(g1, "outer graph")?;
    let z2 = single_sink(g2, "inner graph")?;
    let (n1, n2) = (g1.node_count(), g2.node_count());
    let lay = PointyLayout { n1, n2, z2 };
    let mut b = DagBuilder::with_vertices(n1 * lay.block_size());
    for v1 in 0..n1 {
        for v2 in 0..n2 {
            for &u2 in g2.graph.preds(v2) {
                b.add_edge(lay.inner(v1, u2), lay.inner(v1, v2));
            }
        }
        for i in 1..=n1 {
            b.add_edge(lay.spine(v1, i - 1), lay.spine(v1, i));
            b.add_edge(lay.leg(v1, i), lay.spine(v1, i));
            for &u1 in g1.graph.preds(v1) {
                b.add_edge(lay.tip(u1), lay.leg(v1, i));
            }
        }
    }
    b.set_sink(lay.tip(z1));
    let mut gadget = GadgetHandle::new(b.build()?);
    gadget.layers = Some((0..n1 * lay.block_size()).map(|c| c / lay.block_size()).collect());
    Ok(StandardProduct { gadget, layout: lay, hypothesis_ok: inner_price.is_some_and(|p| p >= 3) })
}
