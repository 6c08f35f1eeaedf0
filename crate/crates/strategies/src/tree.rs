use pebble_constructions::{binary_tree, g_at_most, g_inv, modified_kind, pyramid, pyramid_id, teabag, ModifiedKind};
use pebble_engine::{reverse_items, Flavor, Item, MacroId, Move, PebblingTrace, TraceProgram};
use pebble_graph::{Dag, Vertex};
use rustc_hash::FxHashMap;

use crate::path::{path_persistent, path_surround};
use crate::{input, StrategyError};

/// Reversible persistent pebblings of vertices in a graph where every
/// non-source has exactly two predecessors, written into a shared program.
///
/// `preds[0]` plays the left child and `preds[1]` the right child. A vertex
/// `v` of height `t` is surrounded by walking down the right spine: the left
/// children of the top `t - k + 1` spine nodes are pebbled persistently, then
/// spine node `c_{k-1}`, and the remaining spine segment is climbed with the
/// path strategy. Here `k = g(g_inv(t) - 1) + 1`, which gives
/// `t + g_inv(t)` pebbles in total.
pub struct TreeLike<'a> {
    d: &'a Dag,
    height: Vec<usize>,
    pub prog: TraceProgram,
    memo: FxHashMap<Vertex, MacroId>,
}

impl<'a> TreeLike<'a> {
    pub fn new(d: &'a Dag) -> Result<Self, StrategyError> {
        let mut height = vec![0; d.node_count()];
        for v in d.topological_order() {
            match d.preds(v) {
                [] => {}
                &[l, r] => height[v] = 1 + height[l].max(height[r]),
                other => return Err(input(format!("vertex {v} has {} predecessors, expected 0 or 2", other.len()))),
            }
        }
        Ok(TreeLike { d, height, prog: TraceProgram::new(Flavor::Reversible), memo: FxHashMap::default() })
    }

    pub fn height(&self, v: Vertex) -> usize {
        self.height[v]
    }

    /// Macro pebbling `v` persistently from a configuration with no pebbles
    /// among its ancestors.
    pub fn persistent(&mut self, v: Vertex) -> Result<MacroId, StrategyError> {
        if let Some(&id) = self.memo.get(&v) {
            return Ok(id);
        }
        let items = if self.height[v] == 0 {
            vec![Item::place(v)]
        } else {
            let s = self.surround(v)?;
            let mut items = s.clone();
            items.push(Item::place(v));
            items.extend(reverse_items(&s));
            items
        };
        let id = self.prog.add_macro(items)?;
        self.memo.insert(v, id);
        Ok(id)
    }

    fn surround(&mut self, v: Vertex) -> Result<Vec<Item>, StrategyError> {
        let t = self.height[v];
        let delta = g_inv(t as u64);
        let k = g_at_most(delta - 1, t as u64).expect("g(g_inv(t) - 1) < t") as usize + 1;
        // spine[s] is c_s for s in k-1..=t
        let mut spine = vec![0; t + 1];
        spine[t] = v;
        for s in (k..=t).rev() {
            spine[s - 1] = self.d.preds(spine[s])[1];
        }
        let mut items = Vec::new();
        for s in (k..=t).rev() {
            let left = self.d.preds(spine[s])[0];
            items.push(Item::call(self.persistent(left)?));
        }
        items.push(Item::call(self.persistent(spine[k - 1])?));
        items.extend(path_surround(&spine[k..=t]).into_iter().map(Item::Move));
        Ok(items)
    }
}

/// Program whose main sequence pebbles `v` persistently.
pub fn tree_like_program(d: &Dag, v: Vertex) -> Result<TraceProgram, StrategyError> {
    let mut t = TreeLike::new(d)?;
    let id = t.persistent(v)?;
    t.prog.set_main(vec![Item::call(id)])?;
    Ok(t.prog)
}

/// Persistent reversible pebbling of `binary_tree(h)` with `h + g_inv(h)` pebbles.
pub fn strat_tree_reversible(h: usize) -> Result<TraceProgram, StrategyError> {
    let g = binary_tree(h);
    tree_like_program(&g.graph, g.sink())
}

/// Persistent reversible pebbling of `pyramid(h)` with `h + g_inv(h)` pebbles.
pub fn strat_pyramid_reversible(h: usize) -> Result<TraceProgram, StrategyError> {
    let g = pyramid(h);
    tree_like_program(&g.graph, g.sink())
}

/// Persistent reversible pebbling of `teabag(h, l)`: the apex persistently,
/// the hanging path on top of it, then the apex pebbling undone.
pub fn strat_teabag(h: usize, l: usize) -> Result<TraceProgram, StrategyError> {
    let g = teabag(h, l);
    let apex = g.anchor("apex")?;
    let base = pyramid(h);
    let mut t = TreeLike::new(&base.graph)?;
    let a = t.persistent(apex)?;
    let mut prog = t.prog;
    let tail: Vec<Vertex> = (apex + 1..apex + 1 + l).collect();
    let mut main = vec![Item::call(a)];
    main.extend(path_persistent(&tail).into_iter().map(Item::Move));
    main.push(Item::call_rev(a));
    prog.set_main(main)?;
    Ok(prog)
}

/// Persistent reversible pebbling of the modified pyramid `G_p` with `p` pebbles.
pub fn strat_modified(p: usize) -> Result<TraceProgram, StrategyError> {
    match modified_kind(p)? {
        ModifiedKind::Pyramid(h) => strat_pyramid_reversible(h),
        ModifiedKind::Teabag(h) => strat_teabag(h, 1),
    }
}

/// Standard pebbling of `pyramid(h)` with `h + 2` pebbles, sweeping the
/// layers bottom up and freeing each vertex once both its successors exist.
pub fn strat_pyramid_standard(h: usize) -> PebblingTrace {
    let mut moves = Vec::new();
    for i in 0..=h {
        for j in i..=h {
            moves.push(Move::place(pyramid_id(h, i, j)));
            if i > 0 {
                moves.push(Move::remove(pyramid_id(h, i - 1, j - 1)));
            }
        }
        if i > 0 {
            moves.push(Move::remove(pyramid_id(h, i - 1, h)));
        }
    }
    PebblingTrace::new(Flavor::Standard, moves)
}

#[cfg(test)]
mod tests {
    use super::*;
    use pebble_constructions::pyramid_price;
    use pebble_engine::{validate_program, validate_trace, PebbleConfig};

    #[test]
    fn pyramid_spaces() {
        for h in 0..=7 {
            let g = pyramid(h);
            let prog = strat_pyramid_reversible(h).unwrap();
            let rep = validate_program(&g.graph, &prog, &PebbleConfig::empty(g.node_count()), None).unwrap();
            assert_eq!(rep.space as u64, pyramid_price(h as u64), "h = {h}");
            assert_eq!(rep.final_config.to_vec(), vec![g.sink()]);
        }
    }

    #[test]
    fn standard_sweep() {
        for h in 0..=6 {
            let g = pyramid(h);
            let rep = validate_trace(&g.graph, &strat_pyramid_standard(h)).unwrap();
            assert_eq!(rep.space, if h == 0 { 1 } else { h + 2 });
            assert_eq!(rep.final_config.to_vec(), vec![g.sink()]);
        }
    }

    #[test]
    fn rejects_unary_vertices() {
        let g = teabag(1, 2);
        assert!(TreeLike::new(&g.graph).is_err());
    }
}
