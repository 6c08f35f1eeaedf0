use pebble_engine::{apply_move_in_place, Flavor, PebbleConfig, PebblingTrace};
use pebble_graph::{Dag, Vertex};
use pebble_solvers::{GameState, Pebbler};

use crate::{input, StrategyError};

/// Dymond–Tompa Pebbler that binary-searches a standard pebbling.
///
/// With `C_0, ..., C_tau` the configurations of the pebbling, the Pebbler
/// keeps an interval `[a, b]` such that every vertex of `C_a` is pebbled and
/// `b` is the first time at or after `a` when the challenged vertex is in
/// `C_t`. Once `b = a + 1` the challenged vertex has all predecessors pebbled. Each phase pebbles `C_m` for the
/// midpoint `m`. A jump to `v` shrinks the interval to `[a, t]` with `t` the
/// first time at or after `a` that `v` is pebbled; if every placement of the
/// phase was answered with a stay, the interval becomes `[m, b]`. A phase
/// costs at most `p` rounds, and there are at most `ceil(log2 tau)` phases.
#[derive(Clone)]
pub struct BisectionPebbler {
    configs: Vec<PebbleConfig>,
    a: usize,
    b: usize,
    m: usize,
    pending: Vec<Vertex>,
    last: Option<Vertex>,
    challenged: Option<Vertex>,
}

impl BisectionPebbler {
    /// The pebbling must be a legal standard pebbling of `d` that ends with
    /// the sink pebbled.
    pub fn new(d: &Dag, t: &PebblingTrace) -> Result<Self, StrategyError> {
        let z = d.sink().ok_or_else(|| input("graph has no designated sink"))?;
        let mut cur = PebbleConfig::empty(d.node_count());
        let mut configs = vec![cur.clone()];
        for &m in &t.moves {
            apply_move_in_place(d, &mut cur, m, Flavor::Standard).map_err(|e| input(format!("illegal move {m}: {e}")))?;
            configs.push(cur.clone());
        }
        if !cur.contains(z) {
            return Err(input("pebbling does not end on the sink"));
        }
        let b = configs.iter().position(|c| c.contains(z)).expect("sink pebbled at the end");
        Ok(BisectionPebbler { configs, a: 0, b, m: 0, pending: Vec::new(), last: None, challenged: None })
    }

    /// Current search interval.
    pub fn interval(&self) -> (usize, usize) {
        (self.a, self.b)
    }

    fn open_phase(&mut self, s: &GameState) {
        loop {
            assert!(self.b > self.a + 1, "bisection Pebbler asked to move with interval [{}, {}]", self.a, self.b);
            self.m = (self.a + self.b) / 2;
            let mut todo: Vec<Vertex> = self.configs[self.m].iter().filter(|&v| !s.pebbled.contains(v)).collect();
            if todo.is_empty() {
                self.a = self.m;
                continue;
            }
            todo.reverse();
            self.pending = todo;
            return;
        }
    }
}

impl Pebbler for BisectionPebbler {
    fn place(&mut self, _: &Dag, s: &GameState) -> Vertex {
        let before = *self.challenged.get_or_insert(s.challenged);
        if s.challenged != before {
            let v = s.challenged;
            assert_eq!(Some(v), self.last, "challenge moved to a vertex this Pebbler did not place");
            self.b = (self.a..=self.m).find(|&t| self.configs[t].contains(v)).expect("jump target is pebbled at m");
            self.challenged = Some(v);
            self.open_phase(s);
        } else if self.pending.is_empty() {
            if self.last.is_some() {
                self.a = self.m;
            }
            self.open_phase(s);
        }
        let v = self.pending.pop().expect("phase has a vertex to place");
        self.last = Some(v);
        v
    }

    fn clone_box(&self) -> Box<dyn Pebbler> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use pebble_constructions::{path, pyramid};
    use pebble_engine::Move;
    use pebble_solvers::dt_worst_case;

    fn ceil_log2(x: usize) -> usize {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }

    #[test]
    fn path_walk() {
        let g = path(3);
        let mut moves = Vec::new();
        for v in 0..=3 {
            moves.push(Move::place(v));
            if v > 0 {
                moves.push(Move::remove(v - 1));
            }
        }
        let t = PebblingTrace::new(Flavor::Standard, moves);
        let p = BisectionPebbler::new(&g.graph, &t).unwrap();
        let worst = dt_worst_case(&g.graph, &p, 64).unwrap();
        assert!(worst <= 2 * ceil_log2(t.len()), "worst = {worst}");
    }

    #[test]
    fn pyramid_sweep() {
        let g = pyramid(2);
        let t = crate::strat_pyramid_standard(2);
        let p = BisectionPebbler::new(&g.graph, &t).unwrap();
        let worst = dt_worst_case(&g.graph, &p, 64).unwrap();
        assert!(worst <= 4 * ceil_log2(t.len()));
    }

    #[test]
    fn single_placement() {
        let g = path(0);
        let t = PebblingTrace::new(Flavor::Standard, vec![Move::place(0)]);
        let p = BisectionPebbler::new(&g.graph, &t).unwrap();
        assert_eq!(dt_worst_case(&g.graph, &p, 8).unwrap(), 1);
    }
}
