//! Layered families. Each constructor documents its id layout.

use pebble_graph::{ancestors, Dag, DagBuilder, Vertex};

use crate::handle::{domain, ConstructionError, GadgetHandle};

fn single_sink(preds: Vec<Vec<Vertex>>, sink: Vertex) -> Dag {
    Dag::from_preds(preds, Some(sink)).expect("family constructors emit DAGs")
}

/// Path with `l` edges: vertices `0..=l`, edge `(v-1, v)`, sink `l`.
pub fn path(l: usize) -> GadgetHandle {
    let preds = (0..=l).map(|v| if v == 0 { vec![] } else { vec![v - 1] }).collect();
    let mut h = GadgetHandle::new(single_sink(preds, l));
    h.anchors.insert("source".into(), 0);
    h.layers = Some((0..=l).collect());
    h
}

/// Id of pyramid vertex `(i, j)`, `0 <= i <= j <= h`, where `i` is the layer.
/// Layer `i` occupies a contiguous block in increasing `j`.
pub fn pyramid_id(h: usize, i: usize, j: usize) -> Vertex {
    debug_assert!(i <= j && j <= h);
    let offset = i * (h + 1) - i * (i.saturating_sub(1)) / 2;
    offset + (j - i)
}

/// Pyramid of height `h`: `(i, j)` has predecessors `(i-1, j-1)` and `(i-1, j)`.
pub fn pyramid(h: usize) -> GadgetHandle {
    let n = (h + 1) * (h + 2) / 2;
    let mut preds = vec![Vec::new(); n];
    let mut layers = vec![0; n];
    for i in 0..=h {
        for j in i..=h {
            let v = pyramid_id(h, i, j);
            layers[v] = i;
            if i > 0 {
                preds[v] = vec![pyramid_id(h, i - 1, j - 1), pyramid_id(h, i - 1, j)];
            }
        }
    }
    let mut g = GadgetHandle::new(single_sink(preds, pyramid_id(h, h, h)));
    g.layers = Some(layers);
    g
}

/// Id of the complete binary tree vertex at heap index `k` (root 0,
/// children `2k+1` and `2k+2`). Leaves get the small ids.
pub fn tree_id(h: usize, k: usize) -> Vertex {
    (1usize << (h + 1)) - 2 - k
}

/// Complete binary tree of height `h` with edges toward the root.
pub fn binary_tree(h: usize) -> GadgetHandle {
    let n = (1usize << (h + 1)) - 1;
    let mut preds = vec![Vec::new(); n];
    let mut layers = vec![0; n];
    for k in 0..n {
        let depth = (usize::BITS - 1 - (k + 1).leading_zeros()) as usize;
        layers[tree_id(h, k)] = h - depth;
        if 2 * k + 2 < n {
            preds[tree_id(h, k)] = vec![tree_id(h, 2 * k + 1), tree_id(h, 2 * k + 2)];
        }
    }
    let mut g = GadgetHandle::new(single_sink(preds, tree_id(h, 0)));
    g.layers = Some(layers);
    g
}

/// Chain of width `w` and length `l`: vertex `(t, i)` has id `t*w + i` and
/// predecessors `(t-1, i)` and `(t-1, (i+1) mod w)`. The top layer holds
/// `w` sinks, so no sink is designated.
pub fn chain(w: usize, l: usize) -> Result<GadgetHandle, ConstructionError> {
    if w == 0 {
        return Err(domain("chain width must be at least 1"));
    }
    let mut b = DagBuilder::with_vertices(w * (l + 1));
    for t in 1..=l {
        for i in 0..w {
            b.add_edge((t - 1) * w + i, t * w + i);
            b.add_edge((t - 1) * w + (i + 1) % w, t * w + i);
        }
    }
    let mut g = GadgetHandle::new(b.build()?);
    g.layers = Some((0..w * (l + 1)).map(|v| v / w).collect());
    Ok(g)
}

/// Road of width `w` and length `l`: the ancestors of chain vertex `(l, 0)`
/// in `chain(w, l)`, relabelled in increasing chain id. Layers follow the
/// chain, so the bottom `l - w + 2` layers are full and the top `w - 1`
/// layers shrink to the sink.
pub fn road(w: usize, l: usize) -> Result<GadgetHandle, ConstructionError> {
    if w == 0 || l + 1 < w {
        return Err(domain(format!("road needs 1 <= w <= l + 1, got w={w}, l={l}")));
    }
    let c = chain(w, l)?;
    let keep = ancestors(&c.graph, l * w)?;
    let (d, old) = c.graph.induced(&keep);
    let sink = d.node_count() - 1;
    let mut g = GadgetHandle::new(d.with_sink(Some(sink))?);
    g.layers = Some(old.iter().map(|&v| v / w).collect());
    Ok(g)
}

/// Pyramid of height `h` with a path of `l` edges hung above its apex.
/// Pyramid ids come first; path vertex `k` (1-based) is `n_pyr + k - 1`.
pub fn teabag(h: usize, l: usize) -> GadgetHandle {
    let p = pyramid(h);
    let base = p.node_count();
    let mut preds: Vec<Vec<Vertex>> = p.graph.vertices().map(|v| p.graph.preds(v).to_vec()).collect();
    let mut prev = p.sink();
    for k in 0..l {
        preds.push(vec![prev]);
        prev = base + k;
    }
    let mut g = GadgetHandle::new(single_sink(preds, prev));
    g.anchors.insert("apex".into(), p.sink());
    let mut layers = p.layers.expect("pyramid layers");
    layers.extend((1..=l).map(|k| h + k));
    g.layers = Some(layers);
    g
}

/// Centipede of length `l`: `r_0 = 0`, `s_i = 2i - 1`, `r_i = 2i`, with
/// edges `(r_{i-1}, r_i)` and `(s_i, r_i)`.
pub fn centipede(l: usize) -> GadgetHandle {
    let mut preds = vec![Vec::new(); 2 * l + 1];
    for i in 1..=l {
        preds[2 * i] = vec![2 * i - 2, 2 * i - 1];
    }
    let mut g = GadgetHandle::new(single_sink(preds, 2 * l));
    g.anchors.insert("r0".into(), 0);
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        for h in 0..6 {
            assert_eq!(pyramid(h).node_count(), (h + 1) * (h + 2) / 2);
            assert_eq!(binary_tree(h).node_count(), (1 << (h + 1)) - 1);
            assert_eq!(centipede(h).node_count(), 2 * h + 1);
        }
        assert_eq!(pyramid(0).node_count(), 1);
    }

    #[test]
    fn teabag_without_string_is_pyramid() {
        assert_eq!(teabag(3, 0).graph, pyramid(3).graph);
    }

    #[test]
    fn road_shape() {
        let r = road(3, 9).unwrap();
        let layers = r.layers.as_ref().unwrap();
        assert_eq!(*layers.iter().max().unwrap(), 9);
        let widths: Vec<usize> = (0..=9).map(|t| layers.iter().filter(|&&x| x == t).count()).collect();
        assert_eq!(widths, [3, 3, 3, 3, 3, 3, 3, 3, 2, 1]);
        assert_eq!(r.graph.sinks(), vec![r.sink()]);
        assert_eq!(r.graph.max_fanin(), 2);
    }

    #[test]
    fn width_one_road_is_path() {
        assert_eq!(road(1, 5).unwrap().graph, path(5).graph);
    }

    #[test]
    fn pyramid_layout() {
        let p = pyramid(2);
        assert_eq!(p.sink(), 5);
        assert_eq!(p.graph.preds(pyramid_id(2, 1, 2)), &[1, 2]);
    }
}
