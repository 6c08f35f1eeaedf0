use pebble_graph::{DagBuilder, Vertex};

use crate::arith::{g_at_most, g_inv};
use crate::families::{pyramid, teabag};
use crate::handle::{domain, ConstructionError, GadgetHandle};

/// Which graph realises `G_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModifiedKind {
    Pyramid(usize),
    /// Teabag with a single extra vertex above the apex.
    Teabag(usize),
}

impl ModifiedKind {
    pub fn node_count(self) -> usize {
        match self {
            ModifiedKind::Pyramid(h) => (h + 1) * (h + 2) / 2,
            ModifiedKind::Teabag(h) => (h + 1) * (h + 2) / 2 + 1,
        }
    }
}

/// Chooses the pyramid or teabag with reversible persistent price `p`.
pub fn modified_kind(p: usize) -> Result<ModifiedKind, ConstructionError> {
    if p == 0 {
        return Err(domain("modified pyramids start at p = 1"));
    }
    for h in 0..p {
        let f = h + g_inv(h as u64) as usize;
        if f == p {
            return Ok(ModifiedKind::Pyramid(h));
        }
        if f + 1 == p {
            let delta = g_inv(h as u64);
            if g_at_most(delta, h as u64) == Some(h as u64) && h + 1 + g_inv(h as u64 + 1) as usize > p {
                return Ok(ModifiedKind::Teabag(h));
            }
        }
    }
    unreachable!("every p >= 1 is a pyramid or teabag price")
}

pub fn modified_pyramid(p: usize) -> Result<GadgetHandle, ConstructionError> {
    Ok(match modified_kind(p)? {
        ModifiedKind::Pyramid(h) => pyramid(h),
        ModifiedKind::Teabag(h) => teabag(h, 1),
    })
}

/// Layer `t` (1-based) of `T_r` as `(p, offset)`: a copy of `G_p` whose ids
/// start at `offset`. Layers are laid out bottom to top.
pub fn christmas_layout(r: usize) -> Result<Vec<(ModifiedKind, Vertex)>, ConstructionError> {
    if r == 0 {
        return Err(domain("christmas trees start at r = 1"));
    }
    let mut out = Vec::with_capacity(r);
    let mut offset = 0;
    for t in 1..=r {
        let p = if t < r { r - t } else { 1 };
        let k = modified_kind(p)?;
        out.push((k, offset));
        offset += k.node_count();
    }
    Ok(out)
}

/// The stacked modified pyramids `T_r`. Anchors `layer<t>` name each layer's sink.
pub fn christmas_tree(r: usize) -> Result<GadgetHandle, ConstructionError> {
    let layout = christmas_layout(r)?;
    let mut b = DagBuilder::new();
    let mut sinks = Vec::with_capacity(r);
    let mut sources = Vec::with_capacity(r);
    let mut layers = Vec::new();
    for (t, &(k, _)) in layout.iter().enumerate() {
        let gp = match k {
            ModifiedKind::Pyramid(h) => pyramid(h),
            ModifiedKind::Teabag(h) => teabag(h, 1),
        };
        let base = b.add_vertices(gp.node_count());
        for v in gp.graph.vertices() {
            for &u in gp.graph.preds(v) {
                b.add_edge(base + u, base + v);
            }
        }
        sinks.push(base + gp.sink());
        sources.push(gp.graph.sources().into_iter().map(|s| base + s).collect::<Vec<_>>());
        layers.extend(std::iter::repeat_n(t + 1, gp.node_count()));
    }
    for t in 0..r.saturating_sub(2) {
        for &s in sources[t + 1].iter().chain(&sources[t + 2]) {
            b.add_edge(sinks[t], s);
        }
    }
    if r >= 2 {
        for &s in &sources[r - 1] {
            b.add_edge(sinks[r - 2], s);
        }
    }
    b.set_sink(sinks[r - 1]);
    let mut g = GadgetHandle::new(b.build()?);
    for (t, &z) in sinks.iter().enumerate() {
        g.anchors.insert(format!("layer{}", t + 1), z);
    }
    g.layers = Some(layers);
    Ok(g)
}

/// Split every vertex `v` into `v_in = 2v` and `v_out = 2v + 1` and add the
/// special source `s = 2n` feeding every `v_out`.
pub fn mold(g: &GadgetHandle) -> Result<GadgetHandle, ConstructionError> {
    let n = g.node_count();
    let mut b = DagBuilder::with_vertices(2 * n + 1);
    for v in g.graph.vertices() {
        b.add_edge(2 * v, 2 * v + 1);
        b.add_edge(2 * n, 2 * v + 1);
        for &u in g.graph.preds(v) {
            b.add_edge(2 * u + 1, 2 * v);
        }
    }
    b.set_sink(2 * g.sink() + 1);
    let mut h = GadgetHandle::new(b.build()?);
    h.anchors.insert("s".into(), 2 * n);
    Ok(h)
}

/// Turnpike of toll `r` with entrance anchor `a` and exit anchor `b`.
/// Toll 0 is the single edge `(0, 1)`; otherwise the molded `T_r` with
/// `a` its special source.
pub fn turnpike(r: usize) -> Result<GadgetHandle, ConstructionError> {
    let mut h = if r == 0 {
        let mut b = DagBuilder::with_vertices(2);
        b.add_edge(0, 1);
        b.set_sink(1);
        let mut h = GadgetHandle::new(b.build()?);
        h.anchors.insert("s".into(), 0);
        h
    } else {
        mold(&christmas_tree(r)?)?
    };
    let (a, z) = (h.anchor("s")?, h.sink());
    h.anchors.insert("a".into(), a);
    h.anchors.insert("b".into(), z);
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modified_examples() {
        assert_eq!(modified_kind(1).unwrap(), ModifiedKind::Pyramid(0));
        assert_eq!(modified_kind(2).unwrap(), ModifiedKind::Teabag(0));
        assert_eq!(modified_kind(3).unwrap(), ModifiedKind::Pyramid(1));
        assert_eq!(modified_kind(4).unwrap(), ModifiedKind::Teabag(1));
        assert_eq!(modified_kind(5).unwrap(), ModifiedKind::Pyramid(2));
    }

    #[test]
    fn modified_pyramids_fit_in_square() {
        for p in 1..60 {
            assert!(modified_pyramid(p).unwrap().node_count() <= p * p, "p={p}");
        }
    }

    #[test]
    fn christmas_sizes() {
        assert_eq!(christmas_tree(1).unwrap().node_count(), 1);
        assert_eq!(christmas_tree(4).unwrap().node_count(), 7);
        for r in 1..20 {
            let t = christmas_tree(r).unwrap();
            assert!(t.node_count() <= r * r * r);
            assert_eq!(t.graph.sinks(), vec![t.sink()]);
            assert!(t.graph.max_fanin() <= 2);
        }
    }

    #[test]
    fn mold_single_vertex() {
        let m = mold(&crate::families::path(0)).unwrap();
        assert_eq!(m.node_count(), 3);
        assert_eq!(m.graph.edges(), vec![(0, 1), (2, 1)]);
    }
}
