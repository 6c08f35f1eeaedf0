use pebble_constructions::{christmas_layout, turnpike, GadgetHandle};
use pebble_engine::{Flavor, Item, Move, MoveKind, TraceProgram};
use pebble_graph::Vertex;
use rustc_hash::FxHashMap;

use crate::tree::strat_modified;
use crate::StrategyError;

/// Persistent reversible pebbling of `T_r` with `r` pebbles: every lower
/// layer's sink is pebbled persistently and kept, then the top vertex, then
/// the layers are unwound in reverse order.
pub fn strat_christmas(r: usize) -> Result<TraceProgram, StrategyError> {
    let layout = christmas_layout(r)?;
    let mut prog = TraceProgram::new(Flavor::Reversible);
    let mut standalone: FxHashMap<usize, TraceProgram> = FxHashMap::default();
    let mut calls = Vec::new();
    for (t, &(kind, offset)) in layout[..r - 1].iter().enumerate() {
        let p = r - 1 - t;
        if let std::collections::hash_map::Entry::Vacant(e) = standalone.entry(p) {
            e.insert(strat_modified(p)?);
        }
        let src = &standalone[&p];
        let map: Vec<Vertex> = (offset..offset + kind.node_count()).collect();
        let items = prog.embed_relabeled(src, src.main(), &map)?;
        calls.push(prog.add_macro(items)?);
    }
    let top = layout[r - 1].1;
    let mut main: Vec<Item> = calls.iter().map(|&c| Item::call(c)).collect();
    main.push(Item::place(top));
    main.extend(calls.iter().rev().map(|&c| Item::call_rev(c)));
    prog.set_main(main)?;
    Ok(prog)
}

/// Image of an inner move under molding: `v` becomes the pair
/// `v_in = 2v`, `v_out = 2v + 1`, and only `v_out` outlives the move.
pub fn mold_items(m: Move, map: &dyn Fn(Vertex) -> Vertex) -> Vec<Item> {
    let (i, o) = (map(2 * m.vertex), map(2 * m.vertex + 1));
    match m.kind {
        MoveKind::Place => vec![Item::place(i), Item::place(o), Item::remove(i)],
        MoveKind::Remove => vec![Item::place(i), Item::remove(o), Item::remove(i)],
    }
}

/// Pebbling of `mold(g)` that lifts the reversible pebbling `inner` of `g`
/// with the special source held throughout, for two extra pebbles.
pub fn strat_mold(g: &GadgetHandle, inner: &TraceProgram) -> Result<TraceProgram, StrategyError> {
    let s = 2 * g.node_count();
    let mut prog = TraceProgram::new(inner.flavor);
    let body = prog.embed_with(inner, inner.main(), &mut |m| mold_items(m, &|v| v))?;
    let mut main = vec![Item::place(s)];
    main.extend(body);
    main.push(Item::remove(s));
    prog.set_main(main)?;
    Ok(prog)
}

/// Items that carry a pebble across a turnpike of toll `toll` whose vertices
/// sit at `map` (indexed by the standalone turnpike ids). The entrance must
/// be pebbled and stays pebbled; the exit ends pebbled.
///
/// `xmas` is the christmas strategy for `T_toll` and is ignored for toll 0.
pub fn traverse_items(
    prog: &mut TraceProgram,
    toll: usize,
    xmas: Option<&TraceProgram>,
    map: &[Vertex],
) -> Result<Vec<Item>, StrategyError> {
    if toll == 0 {
        return Ok(vec![Item::place(map[1])]);
    }
    let src = xmas.expect("christmas strategy for a positive toll");
    Ok(prog.embed_with(src, src.main(), &mut |m| mold_items(m, &|v| map[v]))?)
}

/// Traversal of the standalone `turnpike(r)` starting from its entrance.
pub fn strat_turnpike(r: usize) -> Result<TraceProgram, StrategyError> {
    let tp = turnpike(r)?;
    let map: Vec<Vertex> = tp.graph.vertices().collect();
    let xmas = if r > 0 { Some(strat_christmas(r)?) } else { None };
    let mut prog = TraceProgram::new(Flavor::Reversible);
    let items = traverse_items(&mut prog, r, xmas.as_ref(), &map)?;
    prog.set_main(items)?;
    Ok(prog)
}

#[cfg(test)]
mod tests {
    use super::*;
    use pebble_constructions::christmas_tree;
    use pebble_engine::{validate_program, PebbleConfig, Region};
    use pebble_graph::VertexSet;

    #[test]
    fn christmas_spaces() {
        for r in 1..=8 {
            let g = christmas_tree(r).unwrap();
            let prog = strat_christmas(r).unwrap();
            let rep = validate_program(&g.graph, &prog, &PebbleConfig::empty(g.node_count()), None).unwrap();
            assert_eq!(rep.space, r, "r = {r}");
            assert_eq!(rep.final_config.to_vec(), vec![g.sink()]);
        }
    }

    #[test]
    fn turnpike_traversal() {
        for r in 0..=5 {
            let tp = turnpike(r).unwrap();
            let (a, b) = (tp.anchor("a").unwrap(), tp.anchor("b").unwrap());
            let n = tp.node_count();
            let prog = strat_turnpike(r).unwrap();
            let start = PebbleConfig::from_vertices(n, [a]);
            let mut outside = VertexSet::full(n);
            outside.remove(a);
            let rep = validate_program(&tp.graph, &prog, &start, Some(&Region::new(outside))).unwrap();
            assert_eq!(rep.final_config, PebbleConfig::from_vertices(n, [a, b]));
            assert_eq!(rep.space, r + 2, "r = {r}");
            assert_eq!(rep.region_space, r + 1);
        }
    }
}
