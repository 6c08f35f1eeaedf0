use pebble_constructions::{cell_id, product_standard, CellPart, GadgetHandle};
use pebble_engine::{validate_trace, Flavor, Item, MacroId, Move, MoveKind, PebblingTrace, TraceProgram};
use pebble_graph::Vertex;

use crate::{input, StrategyError};

/// Reversible pebbling of `product_reversible(g1, g2)` from reversible
/// persistent pebblings `t1` of `g1` and `t2` of `g2`.
///
/// Each placement of `v1` in `t1` runs `t2` inside block `v1`, where placing
/// or removing `v2` toggles the cell output with the external and internal
/// nodes raised around it. Removals of `v1` run that block backwards.
pub fn strat_product_reversible(
    g1: &GadgetHandle,
    t1: &TraceProgram,
    g2: &GadgetHandle,
    t2: &TraceProgram,
) -> Result<TraceProgram, StrategyError> {
    if t1.flavor != Flavor::Reversible || t2.flavor != Flavor::Reversible {
        return Err(input("both factor strategies must be reversible"));
    }
    let (n1, n2) = (g1.node_count(), g2.node_count());
    let mut prog = TraceProgram::new(Flavor::Reversible);
    let mut blocks: Vec<MacroId> = Vec::with_capacity(n1);
    for v1 in 0..n1 {
        let id = |v2, part| cell_id(n2, v1, v2, part);
        let items = prog.embed_with(t2, t2.main(), &mut |m: Move| {
            let (ext, int, out) = (id(m.vertex, CellPart::Ext), id(m.vertex, CellPart::Int), id(m.vertex, CellPart::Out));
            let toggle = match m.kind {
                MoveKind::Place => Item::place(out),
                MoveKind::Remove => Item::remove(out),
            };
            vec![Item::place(ext), Item::place(int), toggle, Item::remove(int), Item::remove(ext)]
        })?;
        blocks.push(prog.add_macro(items)?);
    }
    let main = prog.embed_with(t1, t1.main(), &mut |m: Move| match m.kind {
        MoveKind::Place => vec![Item::call(blocks[m.vertex])],
        MoveKind::Remove => vec![Item::call_rev(blocks[m.vertex])],
    })?;
    prog.set_main(main)?;
    Ok(prog)
}

/// Standard pebbling of `product_standard(g1, g2)` from standard pebblings
/// `t1` of `g1` and `t2` of `g2` (the latter must end on the sink of `g2`).
///
/// Placing `v1` pebbles the inner copy of `g2` in block `v1` down to its
/// sink and then walks the centipede up to the block tip; removing `v1`
/// removes the tip.
pub fn strat_product_standard(
    g1: &GadgetHandle,
    t1: &PebblingTrace,
    g2: &GadgetHandle,
    t2: &PebblingTrace,
) -> Result<PebblingTrace, StrategyError> {
    let sp = product_standard(g1, g2, None)?;
    let lay = sp.layout;
    let r1 = validate_trace(&g1.graph, t1)?;
    let r2 = validate_trace(&g2.graph, t2)?;
    if !r1.final_config.contains(g1.sink()) || !r2.final_config.contains(g2.sink()) {
        return Err(input("factor pebblings must end with their sink pebbled"));
    }
    let extras2: Vec<Vertex> = r2.final_config.iter().filter(|&v| v != g2.sink()).collect();
    let mut moves = Vec::new();
    let place_block = |moves: &mut Vec<Move>, v1: Vertex| {
        for m in &t2.moves {
            moves.push(Move { kind: m.kind, vertex: lay.inner(v1, m.vertex) });
        }
        for &x in &extras2 {
            moves.push(Move::remove(lay.inner(v1, x)));
        }
        for i in 1..=lay.n1 {
            moves.push(Move::place(lay.leg(v1, i)));
            moves.push(Move::place(lay.spine(v1, i)));
            moves.push(Move::remove(lay.spine(v1, i - 1)));
            moves.push(Move::remove(lay.leg(v1, i)));
        }
    };
    for m in &t1.moves {
        match m.kind {
            MoveKind::Place => place_block(&mut moves, m.vertex),
            MoveKind::Remove => moves.push(Move::remove(lay.tip(m.vertex))),
        }
    }
    for v in r1.final_config.iter().filter(|&v| v != g1.sink()) {
        moves.push(Move::remove(lay.tip(v)));
    }
    Ok(PebblingTrace::new(Flavor::Standard, moves))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{strat_path_reversible, strat_pyramid_reversible, strat_pyramid_standard};
    use pebble_constructions::{path, product_reversible, pyramid};
    use pebble_engine::{validate_program, PebbleConfig};

    #[test]
    fn reversible_paths_and_pyramids() {
        let cases = [
            (path(1), TraceProgram::from_trace(&strat_path_reversible(1)), 2),
            (pyramid(1), strat_pyramid_reversible(1).unwrap(), 3),
        ];
        for (g1, t1, p1) in &cases {
            for (g2, t2, p2) in &cases {
                let b = product_reversible(g1, g2).unwrap();
                let prog = strat_product_reversible(g1, t1, g2, t2).unwrap();
                let rep = validate_program(&b.graph, &prog, &PebbleConfig::empty(b.node_count()), None).unwrap();
                assert_eq!(rep.space, p1 + p2 + 1);
                assert_eq!(rep.final_config.to_vec(), vec![b.sink()]);
            }
        }
    }

    #[test]
    fn standard_pyramids() {
        let (g1, g2) = (pyramid(1), pyramid(1));
        let t = strat_pyramid_standard(1);
        let sp = product_standard(&g1, &g2, Some(3)).unwrap();
        let out = strat_product_standard(&g1, &t, &g2, &t).unwrap();
        let rep = validate_trace(&sp.gadget.graph, &out).unwrap();
        assert_eq!(rep.space, 5);
        assert_eq!(rep.final_config.to_vec(), vec![sp.gadget.sink()]);
    }
}
