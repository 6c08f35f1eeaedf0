use fixedbitset::FixedBitSet;
use pebble_graph::{Dag, Vertex};
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::{check_move, Flavor, Move, MoveError, MoveKind, PebbleConfig, PebblingTrace, Region};

/// Index of a macro inside a [`TraceProgram`].
pub type MacroId = u32;

/// One step of a macro body.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Item {
    Move(Move),
    /// Runs macro `id`, or its inverse (moves reversed and flipped) when `reversed`.
    Call { id: MacroId, reversed: bool },
}

impl Item {
    pub fn place(v: Vertex) -> Self {
        Item::Move(Move::place(v))
    }

    pub fn remove(v: Vertex) -> Self {
        Item::Move(Move::remove(v))
    }

    pub fn call(id: MacroId) -> Self {
        Item::Call { id, reversed: false }
    }

    pub fn call_rev(id: MacroId) -> Self {
        Item::Call { id, reversed: true }
    }

    pub fn inverse(self) -> Self {
        match self {
            Item::Move(m) => Item::Move(m.inverse()),
            Item::Call { id, reversed } => Item::Call { id, reversed: !reversed },
        }
    }
}

/// Inverse of a whole item sequence.
pub fn reverse_items(items: &[Item]) -> Vec<Item> {
    items.iter().rev().map(|i| i.inverse()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ProgramError {
    #[error("illegal move {mv} at index {index}: {error}")]
    Illegal { index: u128, mv: Move, error: MoveError },
    #[error("start configuration has {got} vertices, graph has {expected}")]
    StartSize { got: usize, expected: usize },
    #[error("program expands to {len} moves, above the limit of {limit}")]
    TooLarge { len: u128, limit: u128 },
    #[error("macro {0} is not defined yet")]
    UnknownMacro(MacroId),
}

/// A straight-line program over macros that expands to a move sequence.
///
/// Macros may only call macros defined before them, so the call graph is
/// acyclic and every expansion is finite.
#[derive(Clone, Debug)]
pub struct TraceProgram {
    pub flavor: Flavor,
    macros: Vec<Vec<Item>>,
    lens: Vec<u128>,
    main: Vec<Item>,
    main_len: u128,
}

impl TraceProgram {
    pub fn new(flavor: Flavor) -> Self {
        TraceProgram { flavor, macros: Vec::new(), lens: Vec::new(), main: Vec::new(), main_len: 0 }
    }

    pub fn from_trace(t: &PebblingTrace) -> Self {
        let mut p = TraceProgram::new(t.flavor);
        p.set_main(t.moves.iter().map(|&m| Item::Move(m)).collect()).expect("moves only");
        p
    }

    fn items_len(&self, items: &[Item]) -> Result<u128, ProgramError> {
        let mut n = 0u128;
        for it in items {
            n += match *it {
                Item::Move(_) => 1,
                Item::Call { id, .. } => *self.lens.get(id as usize).ok_or(ProgramError::UnknownMacro(id))?,
            };
        }
        Ok(n)
    }

    /// Defines a new macro. Its body may call only earlier macros.
    pub fn add_macro(&mut self, items: Vec<Item>) -> Result<MacroId, ProgramError> {
        let len = self.items_len(&items)?;
        self.macros.push(items);
        self.lens.push(len);
        Ok((self.macros.len() - 1) as MacroId)
    }

    pub fn set_main(&mut self, items: Vec<Item>) -> Result<(), ProgramError> {
        self.main_len = self.items_len(&items)?;
        self.main = items;
        Ok(())
    }

    pub fn main(&self) -> &[Item] {
        &self.main
    }

    pub fn body(&self, id: MacroId) -> &[Item] {
        &self.macros[id as usize]
    }

    pub fn macro_count(&self) -> usize {
        self.macros.len()
    }

    /// Expanded length of macro `id`.
    pub fn macro_len(&self, id: MacroId) -> u128 {
        self.lens[id as usize]
    }

    /// Expanded length of the main sequence.
    pub fn time(&self) -> u128 {
        self.main_len
    }

    /// Streams the expanded moves of the main sequence.
    pub fn moves(&self) -> ProgramMoves<'_> {
        ProgramMoves { prog: self, stack: vec![Frame { body: &self.main, pos: 0, reversed: false }] }
    }

    /// Expands to a flat trace, refusing when longer than `limit` moves.
    pub fn expand(&self, limit: u128) -> Result<PebblingTrace, ProgramError> {
        if self.main_len > limit {
            return Err(ProgramError::TooLarge { len: self.main_len, limit });
        }
        Ok(PebblingTrace::new(self.flavor, self.moves().collect()))
    }

    /// Copies the macros reachable from `items` in `src` into `self`, mapping
    /// each move through `f`, and returns the mapped copy of `items`.
    ///
    /// Calls keep their direction, so `f` must satisfy
    /// `f(m.inverse()) == reverse_items(&f(m))` wherever `src` reverses a call.
    /// Items produced by `f` refer to macros of `self`.
    pub fn embed_with(
        &mut self,
        src: &TraceProgram,
        items: &[Item],
        f: &mut dyn FnMut(Move) -> Vec<Item>,
    ) -> Result<Vec<Item>, ProgramError> {
        let mut memo: FxHashMap<MacroId, MacroId> = FxHashMap::default();
        self.embed_rec(src, items, f, &mut memo)
    }

    fn embed_rec(
        &mut self,
        src: &TraceProgram,
        items: &[Item],
        f: &mut dyn FnMut(Move) -> Vec<Item>,
        memo: &mut FxHashMap<MacroId, MacroId>,
    ) -> Result<Vec<Item>, ProgramError> {
        let mut out = Vec::with_capacity(items.len());
        for it in items {
            match *it {
                Item::Move(m) => out.extend(f(m)),
                Item::Call { id, reversed } => {
                    let new = match memo.get(&id) {
                        Some(&n) => n,
                        None => {
                            let body = src.macros.get(id as usize).ok_or(ProgramError::UnknownMacro(id))?;
                            let mapped = self.embed_rec(src, body, f, memo)?;
                            let n = self.add_macro(mapped)?;
                            memo.insert(id, n);
                            n
                        }
                    };
                    out.push(Item::Call { id: new, reversed });
                }
            }
        }
        Ok(out)
    }

    /// [`embed_with`](Self::embed_with) that renames every vertex through `map`.
    pub fn embed_relabeled(&mut self, src: &TraceProgram, items: &[Item], map: &[Vertex]) -> Result<Vec<Item>, ProgramError> {
        self.embed_with(src, items, &mut |m| vec![Item::Move(Move { kind: m.kind, vertex: map[m.vertex] })])
    }
}

struct Frame<'a> {
    body: &'a [Item],
    pos: usize,
    reversed: bool,
}

/// Iterator over the moves a program expands to.
pub struct ProgramMoves<'a> {
    prog: &'a TraceProgram,
    stack: Vec<Frame<'a>>,
}

impl Iterator for ProgramMoves<'_> {
    type Item = Move;

    fn next(&mut self) -> Option<Move> {
        loop {
            let top = self.stack.last_mut()?;
            if top.pos == top.body.len() {
                self.stack.pop();
                continue;
            }
            let idx = if top.reversed { top.body.len() - 1 - top.pos } else { top.pos };
            top.pos += 1;
            let rev = top.reversed;
            match top.body[idx] {
                Item::Move(m) => return Some(if rev { m.inverse() } else { m }),
                Item::Call { id, reversed } => {
                    let body = &self.prog.macros[id as usize];
                    self.stack.push(Frame { body, pos: 0, reversed: reversed != rev });
                }
            }
        }
    }
}

/// Outcome of validating a program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProgramReport {
    pub space: usize,
    /// Peak count inside the region, or equal to `space` without one.
    pub region_space: usize,
    pub time: u128,
    pub final_config: PebbleConfig,
}

struct MemoVal {
    end: FixedBitSet,
    peak_inside: usize,
    rpeak_inside: usize,
}

struct MacroInfo {
    footprint: Vec<Vertex>,
    context: Vec<Vertex>,
    eligible: bool,
}

const MEMO_MIN_LEN: u128 = 64;

struct Validator<'a> {
    d: &'a Dag,
    prog: &'a TraceProgram,
    region: Option<&'a FixedBitSet>,
    info: Vec<MacroInfo>,
    memo: FxHashMap<(MacroId, bool, Box<[u64]>), MemoVal>,
    cur: FixedBitSet,
    count: usize,
    rcount: usize,
    peak: usize,
    rpeak: usize,
    t: u128,
}

impl Validator<'_> {
    fn step(&mut self, m: Move) -> Result<(), ProgramError> {
        check_move(self.d, &self.cur, m, self.prog.flavor).map_err(|error| ProgramError::Illegal { index: self.t, mv: m, error })?;
        let inr = self.region.is_none_or(|r| r.contains(m.vertex));
        match m.kind {
            MoveKind::Place => {
                self.cur.insert(m.vertex);
                self.count += 1;
                self.rcount += usize::from(inr);
                self.peak = self.peak.max(self.count);
                self.rpeak = self.rpeak.max(self.rcount);
            }
            MoveKind::Remove => {
                self.cur.set(m.vertex, false);
                self.count -= 1;
                self.rcount -= usize::from(inr);
            }
        }
        self.t += 1;
        Ok(())
    }

    fn run(&mut self, body: &[Item], reversed: bool) -> Result<(), ProgramError> {
        let n = body.len();
        for k in 0..n {
            let it = if reversed { body[n - 1 - k].inverse() } else { body[k] };
            match it {
                Item::Move(m) => self.step(m)?,
                Item::Call { id, reversed } => self.call(id, reversed)?,
            }
        }
        Ok(())
    }

    fn call(&mut self, id: MacroId, reversed: bool) -> Result<(), ProgramError> {
        let prog = self.prog;
        let info = &self.info[id as usize];
        if !info.eligible {
            return self.run(&prog.macros[id as usize], reversed);
        }
        let mut key = vec![0u64; (info.footprint.len() + info.context.len()).div_ceil(64)];
        for (i, &v) in info.footprint.iter().chain(&info.context).enumerate() {
            if self.cur.contains(v) {
                key[i / 64] |= 1 << (i % 64);
            }
        }
        let inside = info.footprint.iter().filter(|&&v| self.cur.contains(v)).count();
        let rinside = match self.region {
            Some(r) => info.footprint.iter().filter(|&&v| self.cur.contains(v) && r.contains(v)).count(),
            None => inside,
        };
        let outside = self.count - inside;
        let routside = self.rcount - rinside;
        let key = (id, reversed, key.into_boxed_slice());
        if let Some(val) = self.memo.get(&key) {
            let info = &self.info[id as usize];
            let mut end_in = 0;
            let mut rend_in = 0;
            for (i, &v) in info.footprint.iter().enumerate() {
                let b = val.end.contains(i);
                self.cur.set(v, b);
                if b {
                    end_in += 1;
                    if self.region.is_none_or(|r| r.contains(v)) {
                        rend_in += 1;
                    }
                }
            }
            self.peak = self.peak.max(outside + val.peak_inside);
            self.rpeak = self.rpeak.max(routside + val.rpeak_inside);
            self.count = outside + end_in;
            self.rcount = routside + rend_in;
            self.t += prog.lens[id as usize];
            return Ok(());
        }
        let (saved, rsaved) = (self.peak, self.rpeak);
        self.peak = self.count;
        self.rpeak = self.rcount;
        self.run(&prog.macros[id as usize], reversed)?;
        let info = &self.info[id as usize];
        let mut end = FixedBitSet::with_capacity(info.footprint.len());
        for (i, &v) in info.footprint.iter().enumerate() {
            end.set(i, self.cur.contains(v));
        }
        let val = MemoVal { end, peak_inside: self.peak - outside, rpeak_inside: self.rpeak - routside };
        self.memo.insert(key, val);
        self.peak = self.peak.max(saved);
        self.rpeak = self.rpeak.max(rsaved);
        Ok(())
    }
}

fn macro_infos(d: &Dag, prog: &TraceProgram) -> Vec<MacroInfo> {
    let n = d.node_count();
    let mut fps: Vec<FixedBitSet> = Vec::with_capacity(prog.macros.len());
    let mut infos = Vec::with_capacity(prog.macros.len());
    for (id, body) in prog.macros.iter().enumerate() {
        let mut fp = FixedBitSet::with_capacity(n);
        for it in body {
            match *it {
                Item::Move(m) if m.vertex < n => fp.insert(m.vertex),
                Item::Move(_) => {}
                Item::Call { id, .. } => fp.union_with(&fps[id as usize]),
            }
        }
        let mut ctx = FixedBitSet::with_capacity(n);
        for v in fp.ones() {
            for &u in d.preds(v) {
                if !fp.contains(u) {
                    ctx.insert(u);
                }
            }
        }
        let footprint: Vec<Vertex> = fp.ones().collect();
        let context: Vec<Vertex> = ctx.ones().collect();
        let width = (footprint.len() + context.len()) as u128;
        let len = prog.lens[id];
        let eligible = len >= MEMO_MIN_LEN && len >= 4 * width;
        infos.push(MacroInfo { footprint, context, eligible });
        fps.push(fp);
    }
    infos
}

/// Replays `prog` from `start`, memoizing each large macro on the contents of
/// the vertices it touches and their predecessors.
///
/// Space counts every pebble, the start configuration included. Region space
/// counts only pebbles on `region`.
pub fn validate_program(
    d: &Dag,
    prog: &TraceProgram,
    start: &PebbleConfig,
    region: Option<&Region>,
) -> Result<ProgramReport, ProgramError> {
    if start.node_count() != d.node_count() {
        return Err(ProgramError::StartSize { got: start.node_count(), expected: d.node_count() });
    }
    let cur = start.as_set().as_bitset().clone();
    let count = cur.count_ones(..);
    let rcount = region.map_or(count, |r| start.count_in(r));
    let mut v = Validator {
        d,
        prog,
        region: region.map(|r| r.mask.as_bitset()),
        info: macro_infos(d, prog),
        memo: FxHashMap::default(),
        cur,
        count,
        rcount,
        peak: count,
        rpeak: rcount,
        t: 0,
    };
    v.run(&prog.main, false)?;
    let mut final_config = PebbleConfig::empty(d.node_count());
    for x in v.cur.ones() {
        final_config.insert(x);
    }
    Ok(ProgramReport { space: v.peak, region_space: v.rpeak, time: v.t, final_config })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::validate_trace;

    fn path(n: usize) -> Dag {
        let preds = (0..n).map(|i| if i == 0 { vec![] } else { vec![i - 1] }).collect();
        Dag::from_preds(preds, Some(n - 1)).unwrap()
    }

    #[test]
    fn reversed_call_expands_to_inverse() {
        let mut p = TraceProgram::new(Flavor::Reversible);
        let a = p.add_macro(vec![Item::place(0), Item::place(1)]).unwrap();
        p.set_main(vec![Item::call(a), Item::remove(0), Item::call_rev(a)]).unwrap();
        let got: Vec<String> = p.moves().map(|m| m.to_string()).collect();
        assert_eq!(got, ["+0", "+1", "-0", "-1", "-0"]);
        assert_eq!(p.time(), 5);
    }

    #[test]
    fn forward_references_rejected() {
        let mut p = TraceProgram::new(Flavor::Standard);
        assert_eq!(p.add_macro(vec![Item::call(3)]), Err(ProgramError::UnknownMacro(3)));
    }

    #[test]
    fn doubling_program_matches_flat() {
        // Walk a pebble up a path by repeated doubling-sized macros.
        let d = path(80);
        let mut p = TraceProgram::new(Flavor::Standard);
        let mut items = Vec::new();
        for v in 0..80 {
            items.push(Item::place(v));
            if v > 0 {
                items.push(Item::remove(v - 1));
            }
        }
        let m = p.add_macro(items).unwrap();
        p.set_main(vec![Item::call(m)]).unwrap();
        let flat = validate_trace(&d, &p.expand(1 << 20).unwrap()).unwrap();
        let rep = validate_program(&d, &p, &PebbleConfig::empty(80), None).unwrap();
        assert_eq!(rep.space, flat.space);
        assert_eq!(rep.time, flat.time as u128);
        assert_eq!(rep.final_config, flat.final_config);
    }

    #[test]
    fn error_index_is_global() {
        let d = path(3);
        let mut p = TraceProgram::new(Flavor::Reversible);
        let a = p.add_macro(vec![Item::place(0), Item::remove(0)]).unwrap();
        p.set_main(vec![Item::call(a), Item::call(a), Item::place(2)]).unwrap();
        match validate_program(&d, &p, &PebbleConfig::empty(3), None) {
            Err(ProgramError::Illegal { index, .. }) => assert_eq!(index, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn expand_guard() {
        let mut p = TraceProgram::new(Flavor::Reversible);
        let mut id = p.add_macro(vec![Item::place(0), Item::remove(0)]).unwrap();
        for _ in 0..100 {
            id = p.add_macro(vec![Item::call(id), Item::call(id)]).unwrap();
        }
        p.set_main(vec![Item::call(id)]).unwrap();
        assert_eq!(p.time(), 1u128 << 101);
        assert!(matches!(p.expand(1000), Err(ProgramError::TooLarge { .. })));
        let d = path(1);
        let rep = validate_program(&d, &p, &PebbleConfig::empty(1), None).unwrap();
        assert_eq!((rep.space, rep.time), (1, 1u128 << 101));
    }
}
