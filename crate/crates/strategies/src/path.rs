use pebble_engine::{Flavor, Move, PebblingTrace};
use pebble_graph::Vertex;

/// Reversible moves that end with only the last vertex of `vs` added, where
/// `vs` is a path whose first vertex has its predecessor (if any) pebbled.
///
/// Splits the path in half, pebbles the midpoint, recurses on the upper half
/// and then unpebbles the midpoint, for `ceil(log2 |vs|) + 1` pebbles.
pub fn path_persistent(vs: &[Vertex]) -> Vec<Move> {
    let mut out = Vec::new();
    persistent_into(vs, &mut out);
    out
}

fn persistent_into(vs: &[Vertex], out: &mut Vec<Move>) {
    match vs.len() {
        0 => {}
        1 => out.push(Move::place(vs[0])),
        m => {
            let a = m.div_ceil(2);
            let start = out.len();
            persistent_into(&vs[..a], out);
            let first: Vec<Move> = out[start..].to_vec();
            persistent_into(&vs[a..], out);
            out.extend(first.iter().rev().map(|m| m.inverse()));
        }
    }
}

/// Moves that leave the predecessor of the last vertex of `vs` pebbled,
/// plus leftover checkpoints below it.
pub fn path_surround(vs: &[Vertex]) -> Vec<Move> {
    let mut out = Vec::new();
    let mut rest = vs;
    while rest.len() > 1 {
        let n = rest.len();
        let b = usize::BITS - (n - 1).leading_zeros();
        let a = 1usize << (b - 1);
        persistent_into(&rest[..a], &mut out);
        rest = &rest[a..];
    }
    out
}

/// Persistent reversible pebbling of `path(l)` with `floor(log2 l) + 2` pebbles.
pub fn strat_path_reversible(l: usize) -> PebblingTrace {
    let vs: Vec<Vertex> = (0..=l).collect();
    PebblingTrace::new(Flavor::Reversible, path_persistent(&vs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use pebble_constructions::path;
    use pebble_engine::{validate_trace, PebbleConfig};

    #[test]
    fn small_paths() {
        for (l, p) in [(0, 1), (1, 2), (2, 3), (3, 3), (4, 4), (7, 4), (8, 5)] {
            let g = path(l);
            let rep = validate_trace(&g.graph, &strat_path_reversible(l)).unwrap();
            assert_eq!(rep.space, p, "l = {l}");
            assert_eq!(rep.final_config, PebbleConfig::from_vertices(l + 1, [l]));
        }
    }

    #[test]
    fn surround_leaves_predecessor() {
        let g = path(9);
        let vs: Vec<Vertex> = (0..=9).collect();
        let t = PebblingTrace::new(Flavor::Reversible, path_surround(&vs));
        let rep = validate_trace(&g.graph, &t).unwrap();
        assert!(rep.final_config.contains(8));
        assert!(!rep.final_config.contains(9));
        assert!(rep.space <= 4);
    }
}
