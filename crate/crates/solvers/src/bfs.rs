use std::time::{Duration, Instant};

use pebble_engine::{Flavor, Move, PebbleConfig, PebblingTrace, Region};
use pebble_graph::Dag;
use rustc_hash::FxHashMap;

use crate::par;
use crate::space::Space;
use crate::SolveError;

/// Which final configurations count as success.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Goal {
    /// Only the sink is pebbled (inside the region).
    Persistent,
    /// The sink carries a pebble.
    Visiting,
    /// Every predecessor of the sink carries a pebble.
    Surrounding,
    /// Exactly this configuration (inside the region).
    Config(PebbleConfig),
}

impl Goal {
    pub fn name(&self) -> &'static str {
        match self {
            Goal::Persistent => "persistent",
            Goal::Visiting => "visiting",
            Goal::Surrounding => "surrounding",
            Goal::Config(_) => "config",
        }
    }
}

#[derive(Clone, Debug)]
pub struct PriceQuery {
    pub flavor: Flavor,
    pub goal: Goal,
    /// Cost mask; pebbles outside it are free.
    pub region: Option<Region>,
    /// Search fails once the price is known to exceed this.
    pub budget_cap: usize,
    /// Search fails after storing this many configurations.
    pub state_limit: usize,
    /// Starting configuration; empty when `None`.
    pub start: Option<PebbleConfig>,
    /// Identify configurations that differ by swapping twin vertices.
    pub twin_symmetry: bool,
}

impl PriceQuery {
    pub fn new(flavor: Flavor, goal: Goal) -> Self {
        PriceQuery { flavor, goal, region: None, budget_cap: 128, state_limit: 40_000_000, start: None, twin_symmetry: false }
    }

    pub fn reversible(goal: Goal) -> Self {
        Self::new(Flavor::Reversible, goal)
    }

    pub fn standard(goal: Goal) -> Self {
        Self::new(Flavor::Standard, goal)
    }

    pub fn with_region(mut self, r: Region) -> Self {
        self.region = Some(r);
        self
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.budget_cap = cap;
        self
    }

    pub fn with_state_limit(mut self, limit: usize) -> Self {
        self.state_limit = limit;
        self
    }

    pub fn with_twin_symmetry(mut self) -> Self {
        self.twin_symmetry = true;
        self
    }

    pub fn from_config(mut self, start: PebbleConfig) -> Self {
        self.start = Some(start);
        self
    }
}

/// Result of a successful search.
#[derive(Clone, Debug)]
pub struct Solution {
    pub price: usize,
    pub nodes_expanded: u64,
    pub states: usize,
    pub elapsed: Duration,
    /// Optimal move sequence from the start configuration.
    pub trace: PebblingTrace,
    /// Configuration the trace starts from, including permanently free pebbles.
    pub start: PebbleConfig,
}

enum Target {
    Exact(u128),
    Contains(u128),
}

impl Target {
    fn mask(&self) -> u128 {
        match *self {
            Target::Exact(t) | Target::Contains(t) => t,
        }
    }

    fn hit(&self, c: u128) -> bool {
        match *self {
            Target::Exact(t) => c == t,
            Target::Contains(t) => c & t == t,
        }
    }
}

fn target(d: &Dag, sp: &Space, goal: &Goal) -> Result<Option<Target>, SolveError> {
    let sink = || d.sink().ok_or(SolveError::NoSink);
    Ok(match goal {
        Goal::Persistent => sp.mask_of([sink()?]).map(Target::Exact),
        Goal::Visiting => sp.mask_of([sink()?]).map(Target::Contains),
        Goal::Surrounding => sp.mask_of(d.preds(sink()?).iter().copied()).map(Target::Contains),
        Goal::Config(t) => {
            if t.node_count() != d.node_count() {
                return Err(SolveError::ConfigSize { got: t.node_count(), expected: d.node_count() });
            }
            if t.iter().any(|v| sp.bit(v).is_none() && !sp.fixed[v]) {
                None
            } else {
                Some(Target::Exact(sp.mask_of(t.iter().filter(|&v| sp.bit(v).is_some())).unwrap()))
            }
        }
    })
}

fn start_mask(d: &Dag, sp: &Space, q: &PriceQuery) -> Result<u128, SolveError> {
    match &q.start {
        None => Ok(0),
        Some(s) => {
            if s.node_count() != d.node_count() {
                return Err(SolveError::ConfigSize { got: s.node_count(), expected: d.node_count() });
            }
            Ok(sp.mask_of(s.iter().filter(|&v| sp.bit(v).is_some())).unwrap())
        }
    }
}

/// Packs the pebbles of every twin class onto its lowest members.
fn canonical(classes: &[u128], c: u128) -> u128 {
    let mut out = c;
    for &m in classes {
        let k = (c & m).count_ones();
        out &= !m;
        let mut rest = m;
        for _ in 0..k {
            let low = rest & rest.wrapping_neg();
            out |= low;
            rest &= !low;
        }
    }
    out
}

fn push_neighbors(sp: &Space, flavor: Flavor, c: u128, out: &mut Vec<(u128, u128)>) {
    for i in 0..sp.len() {
        let b = 1u128 << i;
        let preds_ok = sp.placeable[i] && c & sp.pred_mask[i] == sp.pred_mask[i];
        let next = if c & b == 0 {
            preds_ok.then_some(c | b)
        } else {
            (flavor == Flavor::Standard || preds_ok).then_some(c & !b)
        };
        if let Some(n) = next {
            out.push((n, c));
        }
    }
}

pub(crate) fn solve_inner(d: &Dag, q: &PriceQuery) -> Result<Solution, SolveError> {
    let t0 = Instant::now();
    if q.budget_cap == 0 {
        return Err(SolveError::BadCap);
    }
    let sp = Space::new(d, q.region.as_ref())?;
    let tgt = target(d, &sp, &q.goal)?.ok_or(SolveError::Unreachable)?;
    let actual_start = start_mask(d, &sp, q)?;
    let classes = if q.twin_symmetry { sp.twin_classes(d, tgt.mask()) } else { Vec::new() };
    let start = canonical(&classes, actual_start);
    let cost = |c: u128| c.count_ones() as usize;
    let mut parents: FxHashMap<u128, u128> = FxHashMap::default();
    parents.insert(start, start);
    let mut buckets: Vec<Vec<u128>> = vec![Vec::new(); sp.len() + 1];
    let first = cost(start);
    buckets[first].push(start);
    let mut expanded = 0u64;
    let mut found = None;
    'outer: for b in first..=sp.len() {
        let mut frontier = std::mem::take(&mut buckets[b]);
        if frontier.is_empty() {
            continue;
        }
        if b > q.budget_cap {
            return Err(SolveError::CapExceeded { cap: q.budget_cap, lower_bound: b });
        }
        if let Some(&g) = frontier.iter().find(|&&c| tgt.hit(c)) {
            found = Some((b, g));
            break;
        }
        while !frontier.is_empty() {
            expanded += frontier.len() as u64;
            let cand = par::expand(&frontier, |c, out| {
                let from = out.len();
                push_neighbors(&sp, q.flavor, c, out);
                if !classes.is_empty() {
                    for e in &mut out[from..] {
                        e.0 = canonical(&classes, e.0);
                    }
                }
            });
            let mut next = Vec::new();
            for (n, p) in cand {
                if parents.contains_key(&n) {
                    continue;
                }
                parents.insert(n, p);
                let cn = cost(n);
                if cn <= b {
                    if tgt.hit(n) {
                        found = Some((b, n));
                        break 'outer;
                    }
                    next.push(n);
                } else {
                    buckets[cn].push(n);
                }
            }
            if parents.len() > q.state_limit {
                return Err(SolveError::StateLimit { limit: q.state_limit, lower_bound: b });
            }
            frontier = next;
        }
    }
    let (price, goal) = found.ok_or(SolveError::Unreachable)?;
    let mut chain = vec![goal];
    while *chain.last().unwrap() != start {
        chain.push(parents[chain.last().unwrap()]);
    }
    chain.reverse();
    let mut moves = Vec::with_capacity(chain.len());
    let mut cur = actual_start;
    let mut scratch = Vec::new();
    for &want in &chain[1..] {
        scratch.clear();
        push_neighbors(&sp, q.flavor, cur, &mut scratch);
        let next = scratch.iter().map(|e| e.0).find(|&n| canonical(&classes, n) == want).expect("parent chain follows legal moves");
        let diff = cur ^ next;
        let v = sp.global[diff.trailing_zeros() as usize];
        moves.push(if next & diff != 0 { Move::place(v) } else { Move::remove(v) });
        cur = next;
    }
    let start_cfg = PebbleConfig::from_vertices(d.node_count(), sp.fixed_vertices().chain(sp.to_vertices(actual_start)));
    Ok(Solution {
        price,
        nodes_expanded: expanded,
        states: parents.len(),
        elapsed: t0.elapsed(),
        trace: PebblingTrace::new(q.flavor, moves),
        start: start_cfg,
    })
}
