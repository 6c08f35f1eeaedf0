use pebble_engine::{
    reverse_items, reverse_trace, validate_program, validate_trace_from, Flavor, Item, Move, PebbleConfig,
    PebblingTrace, ProgramError, Region, TraceError, TraceProgram,
};
use pebble_graph::{Dag, VertexSet};
use proptest::prelude::*;

fn random_dag(n: usize, edges: &[(usize, usize)]) -> Dag {
    let mut preds = vec![Vec::new(); n];
    for &(a, b) in edges {
        let (a, b) = (a % n, b % n);
        if a < b && preds[b].len() < 2 && !preds[b].contains(&a) {
            preds[b].push(a);
        }
    }
    Dag::from_preds(preds, None).unwrap()
}

fn to_item(raw: (bool, usize), n: usize) -> Item {
    let v = raw.1 % n;
    if raw.0 {
        Item::place(v)
    } else {
        Item::remove(v)
    }
}

fn build_program(flavor: Flavor, n: usize, base: &[Vec<(bool, usize)>], calls: &[Vec<(usize, bool)>]) -> TraceProgram {
    let mut p = TraceProgram::new(flavor);
    for b in base {
        let fwd: Vec<Item> = b.iter().map(|&r| to_item(r, n)).collect();
        let mut body = fwd.clone();
        body.extend(reverse_items(&fwd));
        p.add_macro(body).unwrap();
    }
    for c in calls {
        let k = p.macro_count();
        let body = c.iter().map(|&(i, rev)| Item::Call { id: (i % k) as u32, reversed: rev }).collect();
        p.add_macro(body).unwrap();
    }
    let k = p.macro_count() as u32;
    p.set_main(vec![Item::call(k - 1), Item::call(k - 1)]).unwrap();
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn program_matches_flat_replay(
        n in 2usize..10,
        edges in prop::collection::vec((0usize..10, 0usize..10), 0..12),
        base in prop::collection::vec(prop::collection::vec((any::<bool>(), 0usize..10), 1..6), 1..4),
        calls in prop::collection::vec(prop::collection::vec((0usize..16, any::<bool>()), 2..5), 1..6),
        start in prop::collection::vec(0usize..10, 0..4),
        region in prop::collection::vec(0usize..10, 0..6),
        reversible in any::<bool>(),
    ) {
        let d = random_dag(n, &edges);
        let flavor = if reversible { Flavor::Reversible } else { Flavor::Standard };
        let p = build_program(flavor, n, &base, &calls);
        let start = PebbleConfig::from_vertices(n, start.iter().map(|v| v % n));
        let region = Region::new(VertexSet::from_vertices(n, region.iter().map(|v| v % n)));
        let flat = p.expand(1 << 22).unwrap();
        let by_prog = validate_program(&d, &p, &start, Some(&region));
        match validate_trace_from(&d, &flat, &start) {
            Ok(rep) => {
                let got = by_prog.unwrap();
                prop_assert_eq!(got.space, rep.space);
                prop_assert_eq!(got.time, rep.time as u128);
                prop_assert_eq!(&got.final_config, &rep.final_config);
                let mut c = start.clone();
                let mut peak = c.count_in(&region);
                for &m in &flat.moves {
                    c = pebble_engine::apply_move(&d, &c, m, flavor).unwrap();
                    peak = peak.max(c.count_in(&region));
                }
                prop_assert_eq!(got.region_space, peak);
            }
            Err(TraceError::Illegal { index, mv, .. }) => match by_prog {
                Err(ProgramError::Illegal { index: i2, mv: m2, .. }) => {
                    prop_assert_eq!(i2, index as u128);
                    prop_assert_eq!(m2, mv);
                }
                other => prop_assert!(false, "expected illegal, got {:?}", other),
            },
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn reversible_traces_run_backwards(
        n in 2usize..9,
        edges in prop::collection::vec((0usize..9, 0usize..9), 0..12),
        choices in prop::collection::vec(0usize..64, 0..60),
    ) {
        let d = random_dag(n, &edges);
        let mut c = PebbleConfig::empty(n);
        let mut moves = Vec::new();
        for ch in choices {
            let legal: Vec<Move> = (0..n)
                .flat_map(|v| [Move::place(v), Move::remove(v)])
                .filter(|&m| pebble_engine::apply_move(&d, &c, m, Flavor::Reversible).is_ok())
                .collect();
            if legal.is_empty() {
                break;
            }
            let m = legal[ch % legal.len()];
            c = pebble_engine::apply_move(&d, &c, m, Flavor::Reversible).unwrap();
            moves.push(m);
        }
        let t = PebblingTrace::new(Flavor::Reversible, moves);
        let fwd = validate_trace_from(&d, &t, &PebbleConfig::empty(n)).unwrap();
        let back = validate_trace_from(&d, &reverse_trace(&t).unwrap(), &fwd.final_config).unwrap();
        prop_assert!(back.final_config.is_empty());
        prop_assert_eq!(back.space, fwd.space);
    }
}
