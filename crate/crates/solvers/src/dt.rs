use std::cell::RefCell;
use std::rc::Rc;

use pebble_engine::PebbleConfig;
use pebble_graph::{proper_ancestors, Dag, Vertex};
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::SolveError;

/// Position in a Dymond–Tompa game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameState {
    pub pebbled: PebbleConfig,
    pub challenged: Vertex,
    pub rounds_so_far: usize,
}

impl GameState {
    pub fn is_over(&self, d: &Dag) -> bool {
        d.preds(self.challenged).iter().all(|&u| self.pebbled.contains(u))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Response {
    Stay,
    Jump,
}

pub trait Pebbler {
    /// Picks an empty vertex to pebble in a game that is not over.
    fn place(&mut self, d: &Dag, s: &GameState) -> Vertex;
    fn clone_box(&self) -> Box<dyn Pebbler>;
}

pub trait Challenger {
    /// Reacts to `placed` having just been pebbled; `before` is the state
    /// prior to that placement.
    fn respond(&mut self, d: &Dag, before: &GameState, placed: Vertex) -> Response;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundLog {
    pub placed: Vertex,
    pub response: Response,
    pub challenged: Vertex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub rounds: usize,
    /// Rounds after the opening placement on the sink.
    pub log: Vec<RoundLog>,
    pub final_state: GameState,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("graph has no designated sink")]
    NoSink,
    #[error("round {round}: vertex {vertex} is already pebbled or out of range")]
    IllegalPlacement { round: usize, vertex: Vertex },
    #[error("game exceeded {0} rounds")]
    RoundCap(usize),
}

fn opening(d: &Dag) -> Result<GameState, GameError> {
    let z = d.sink().ok_or(GameError::NoSink)?;
    Ok(GameState { pebbled: PebbleConfig::from_vertices(d.node_count(), [z]), challenged: z, rounds_so_far: 1 })
}

fn advance(d: &Dag, s: &GameState, v: Vertex, r: Response) -> Result<GameState, GameError> {
    if v >= d.node_count() || s.pebbled.contains(v) {
        return Err(GameError::IllegalPlacement { round: s.rounds_so_far + 1, vertex: v });
    }
    let mut next = s.clone();
    next.pebbled.insert(v);
    next.rounds_so_far += 1;
    if r == Response::Jump {
        next.challenged = v;
    }
    Ok(next)
}

/// Referees one game. Round 1 pebbles and challenges the sink.
pub fn dt_play(d: &Dag, pebbler: &mut dyn Pebbler, challenger: &mut dyn Challenger, round_cap: usize) -> Result<Transcript, GameError> {
    let mut s = opening(d)?;
    let mut log = Vec::new();
    while !s.is_over(d) {
        if s.rounds_so_far >= round_cap {
            return Err(GameError::RoundCap(round_cap));
        }
        let v = pebbler.place(d, &s);
        if v >= d.node_count() || s.pebbled.contains(v) {
            return Err(GameError::IllegalPlacement { round: s.rounds_so_far + 1, vertex: v });
        }
        let r = challenger.respond(d, &s, v);
        s = advance(d, &s, v, r)?;
        log.push(RoundLog { placed: v, response: r, challenged: s.challenged });
    }
    Ok(Transcript { rounds: s.rounds_so_far, log, final_state: s })
}

fn worst_from(d: &Dag, p: &mut dyn Pebbler, s: &GameState, cap: usize) -> Result<usize, GameError> {
    if s.is_over(d) {
        return Ok(s.rounds_so_far);
    }
    if s.rounds_so_far >= cap {
        return Err(GameError::RoundCap(cap));
    }
    let v = p.place(d, s);
    let mut best = 0;
    for r in [Response::Stay, Response::Jump] {
        let next = advance(d, s, v, r)?;
        best = best.max(worst_from(d, p.clone_box().as_mut(), &next, cap)?);
    }
    Ok(best)
}

/// Longest game `pebbler` can be forced into, over all Challenger behaviours.
pub fn dt_worst_case(d: &Dag, pebbler: &dyn Pebbler, round_cap: usize) -> Result<usize, GameError> {
    worst_from(d, pebbler.clone_box().as_mut(), &opening(d)?, round_cap)
}

/// Challenger that simulates a copy of its opponent and picks the reply
/// leading to the longest remaining game.
pub struct ExhaustiveChallenger {
    model: Box<dyn Pebbler>,
    round_cap: usize,
}

impl ExhaustiveChallenger {
    /// `model` must be an untouched copy of the Pebbler it will face.
    pub fn new(model: &dyn Pebbler, round_cap: usize) -> Self {
        ExhaustiveChallenger { model: model.clone_box(), round_cap }
    }
}

impl Challenger for ExhaustiveChallenger {
    fn respond(&mut self, d: &Dag, before: &GameState, placed: Vertex) -> Response {
        let v = self.model.place(d, before);
        debug_assert_eq!(v, placed, "model Pebbler fell out of sync");
        let mut best = (0, Response::Stay);
        for r in [Response::Stay, Response::Jump] {
            let Ok(next) = advance(d, before, placed, r) else { continue };
            let len = worst_from(d, self.model.clone_box().as_mut(), &next, self.round_cap).unwrap_or(usize::MAX);
            if len > best.0 {
                best = (len, r);
            }
        }
        best.1
    }
}

pub struct StayingChallenger;

impl Challenger for StayingChallenger {
    fn respond(&mut self, _: &Dag, _: &GameState, _: Vertex) -> Response {
        Response::Stay
    }
}

pub struct JumpingChallenger;

impl Challenger for JumpingChallenger {
    fn respond(&mut self, _: &Dag, _: &GameState, _: Vertex) -> Response {
        Response::Jump
    }
}

/// Memoized game values `W(P, c)`: the number of further rounds Pebbler
/// needs from pebbled set `P` with `c` challenged.
pub struct DtSolver {
    preds: Vec<u128>,
    anc: Vec<u128>,
    prune: bool,
    memo: FxHashMap<(u128, u8), u8>,
    state_limit: usize,
}

impl DtSolver {
    pub fn new(d: &Dag, prune_to_ancestors: bool) -> Result<Self, SolveError> {
        let n = d.node_count();
        if n > 128 {
            return Err(SolveError::TooManyVertices { active: n, limit: 128 });
        }
        let mask = |vs: &mut dyn Iterator<Item = Vertex>| vs.fold(0u128, |m, v| m | 1 << v);
        let preds = d.vertices().map(|v| mask(&mut d.preds(v).iter().copied())).collect();
        let anc = d.vertices().map(|v| mask(&mut proper_ancestors(d, v).unwrap().iter())).collect();
        Ok(DtSolver { preds, anc, prune: prune_to_ancestors, memo: FxHashMap::default(), state_limit: 20_000_000 })
    }

    pub fn with_state_limit(mut self, limit: usize) -> Self {
        self.state_limit = limit;
        self
    }

    fn candidates(&self, p: u128, c: Vertex) -> u128 {
        let all = if self.preds.len() == 128 { u128::MAX } else { (1u128 << self.preds.len()) - 1 };
        let pool = if self.prune { self.anc[c] } else { all };
        pool & !p
    }

    pub fn value(&mut self, p: u128, c: Vertex) -> Result<usize, SolveError> {
        if p & self.preds[c] == self.preds[c] {
            return Ok(0);
        }
        if let Some(&w) = self.memo.get(&(p, c as u8)) {
            return Ok(w as usize);
        }
        if self.memo.len() >= self.state_limit {
            return Err(SolveError::StateLimit { limit: self.state_limit, lower_bound: 1 });
        }
        let mut best = usize::MAX;
        let mut cand = self.candidates(p, c);
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            let q = p | 1 << v;
            let stay = self.value(q, c)?;
            if 1 + stay >= best {
                continue;
            }
            let jump = self.value(q, v)?;
            best = best.min(1 + stay.max(jump));
        }
        self.memo.insert((p, c as u8), best as u8);
        Ok(best)
    }

    fn bits(s: &GameState) -> u128 {
        s.pebbled.iter().fold(0u128, |m, v| m | 1 << v)
    }

    /// Optimal placement from a state that is not over.
    pub fn best_move(&mut self, s: &GameState) -> Result<Vertex, SolveError> {
        let p = Self::bits(s);
        let target = self.value(p, s.challenged)?;
        let mut cand = self.candidates(p, s.challenged);
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            let q = p | 1 << v;
            if 1 + self.value(q, s.challenged)?.max(self.value(q, v)?) == target {
                return Ok(v);
            }
        }
        unreachable!("a game that is not over has an optimal move")
    }

    /// The reply that maximises the remaining game value.
    pub fn best_response(&mut self, before: &GameState, placed: Vertex) -> Result<Response, SolveError> {
        let q = Self::bits(before) | 1 << placed;
        let stay = self.value(q, before.challenged)?;
        let jump = self.value(q, placed)?;
        Ok(if jump > stay { Response::Jump } else { Response::Stay })
    }
}

/// Number of rounds Pebbler needs under optimal play on both sides.
pub fn dt_price(d: &Dag, prune_to_ancestors: bool) -> Result<usize, SolveError> {
    let z = d.sink().ok_or(SolveError::NoSink)?;
    let mut s = DtSolver::new(d, prune_to_ancestors)?;
    Ok(1 + s.value(1 << z, z)?)
}

/// Pebbler that plays optimally using a shared [`DtSolver`].
#[derive(Clone)]
pub struct OptimalPebbler(pub Rc<RefCell<DtSolver>>);

impl Pebbler for OptimalPebbler {
    fn place(&mut self, _: &Dag, s: &GameState) -> Vertex {
        self.0.borrow_mut().best_move(s).expect("game value within state limit")
    }

    fn clone_box(&self) -> Box<dyn Pebbler> {
        Box::new(self.clone())
    }
}

pub struct OptimalChallenger(pub Rc<RefCell<DtSolver>>);

impl Challenger for OptimalChallenger {
    fn respond(&mut self, _: &Dag, before: &GameState, placed: Vertex) -> Response {
        self.0.borrow_mut().best_response(before, placed).expect("game value within state limit")
    }
}
