use std::collections::HashSet;

use pebble_constructions::{binary_tree, path, pyramid, teabag};
use pebble_engine::{apply_move, region_space_from, validate_trace, validate_trace_from, Flavor, Move, PebbleConfig, Region};
use pebble_graph::{ancestors, Dag, VertexSet};
use pebble_solvers::*;
use proptest::prelude::*;

/// Naive iterative deepening on the space bound with a fresh BFS per bound.
fn naive_price(d: &Dag, flavor: Flavor, goal: &dyn Fn(&PebbleConfig) -> bool) -> usize {
    let n = d.node_count();
    for s in 0..=n {
        let start = PebbleConfig::empty(n);
        let mut seen = HashSet::from([start.clone()]);
        let mut queue = vec![start];
        while let Some(c) = queue.pop() {
            if goal(&c) {
                return s;
            }
            for v in 0..n {
                let m = if c.contains(v) { Move::remove(v) } else { Move::place(v) };
                if let Ok(next) = apply_move(d, &c, m, flavor) {
                    if next.len() <= s && seen.insert(next.clone()) {
                        queue.push(next);
                    }
                }
            }
        }
    }
    panic!("no pebbling found")
}

fn naive(d: &Dag, flavor: Flavor, goal: Goal) -> usize {
    let z = d.sink().unwrap();
    let n = d.node_count();
    match goal {
        Goal::Persistent => naive_price(d, flavor, &|c| c.len() == 1 && c.contains(z)),
        Goal::Visiting => naive_price(d, flavor, &|c| c.contains(z)),
        Goal::Surrounding => naive_price(d, flavor, &|c| d.preds(z).iter().all(|&u| c.contains(u))),
        Goal::Config(t) => naive_price(d, flavor, &move |c| *c == t && c.node_count() == n),
    }
}

prop_compose! {
    fn arb_dag(max: usize)(n in 1..=max)(raw in proptest::collection::vec((any::<u16>(), any::<u16>(), 0u8..3), n)) -> Dag {
        let n = raw.len();
        let preds: Vec<Vec<usize>> = raw.iter().enumerate().map(|(v, &(a, b, k))| {
            if v == 0 { return Vec::new(); }
            let mut p = vec![a as usize % v, b as usize % v];
            p.truncate(k as usize);
            p.sort();
            p.dedup();
            p
        }).collect();
        let d = Dag::from_preds(preds, Some(n - 1)).unwrap();
        let keep = ancestors(&d, n - 1).unwrap();
        let (sub, _) = d.induced(&keep);
        let z = sub.node_count() - 1;
        sub.with_sink(Some(z)).unwrap()
    }
}

fn sp(d: &Dag, flavor: Flavor, goal: Goal) -> usize {
    price(d, &PriceQuery::new(flavor, goal)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bucketed_search_matches_naive(d in arb_dag(8)) {
        for flavor in [Flavor::Reversible, Flavor::Standard] {
            for goal in [Goal::Persistent, Goal::Visiting, Goal::Surrounding] {
                prop_assert_eq!(sp(&d, flavor, goal.clone()), naive(&d, flavor, goal));
            }
        }
    }

    #[test]
    fn twin_quotient_preserves_prices(d in arb_dag(10)) {
        for flavor in [Flavor::Reversible, Flavor::Standard] {
            for goal in [Goal::Persistent, Goal::Surrounding] {
                let plain = PriceQuery::new(flavor, goal.clone());
                let s = solve(&d, &plain.clone().with_twin_symmetry()).unwrap();
                prop_assert_eq!(s.price, price(&d, &plain).unwrap());
                prop_assert_eq!(validate_trace(&d, &s.trace).unwrap().space, s.price);
            }
        }
    }

    #[test]
    fn price_orderings(d in arb_dag(10)) {
        let pers = sp(&d, Flavor::Reversible, Goal::Persistent);
        let vis = sp(&d, Flavor::Reversible, Goal::Visiting);
        let sur = sp(&d, Flavor::Reversible, Goal::Surrounding);
        let std = sp(&d, Flavor::Standard, Goal::Persistent);
        prop_assert!(std <= vis && vis <= pers && sur <= vis);
        if !d.preds(d.sink().unwrap()).is_empty() {
            prop_assert_eq!(sur + 1, pers);
        }
    }

    #[test]
    fn dt_matches_persistent(d in arb_dag(9)) {
        let pers = sp(&d, Flavor::Reversible, Goal::Persistent);
        prop_assert_eq!(dt_price(&d, false).unwrap(), pers);
        prop_assert_eq!(dt_price(&d, true).unwrap(), pers);
    }

    #[test]
    fn optimal_traces_revalidate(d in arb_dag(10)) {
        for flavor in [Flavor::Reversible, Flavor::Standard] {
            let q = PriceQuery::new(flavor, Goal::Persistent);
            let s = solve(&d, &q).unwrap();
            let r = validate_trace(&d, &s.trace).unwrap();
            prop_assert_eq!(r.space, s.price);
            prop_assert_eq!(r.final_config.to_vec(), vec![d.sink().unwrap()]);
        }
    }

    #[test]
    fn config_prices_are_symmetric(d in arb_dag(9), picks in proptest::collection::vec(any::<bool>(), 9)) {
        let n = d.node_count();
        let target = PebbleConfig::from_vertices(n, (0..n).filter(|&v| picks[v]));
        let forward = price_to_config(&d, &target, None).unwrap();
        let q = PriceQuery::reversible(Goal::Config(PebbleConfig::empty(n))).from_config(target.clone());
        prop_assert_eq!(price(&d, &q).unwrap(), forward);
        prop_assert_eq!(forward, naive(&d, Flavor::Reversible, Goal::Config(target)));
    }

    #[test]
    fn region_traces_revalidate(d in arb_dag(10), cut in 0usize..10) {
        let n = d.node_count();
        let c = cut % n;
        let outside = ancestors(&d, c).unwrap();
        let region = Region::new(outside.complement());
        let q = PriceQuery::reversible(Goal::Visiting).with_region(region.clone());
        let s = solve(&d, &q).unwrap();
        let (rep, rs) = region_space_from(&d, &s.trace, &s.start, &region).unwrap();
        prop_assert_eq!(rs, s.price);
        prop_assert!(rep.final_config.contains(d.sink().unwrap()));
        prop_assert!(outside.iter().all(|v| s.start.contains(v)));
    }
}

#[test]
fn spec_examples() {
    let one = path(0).graph;
    for flavor in [Flavor::Reversible, Flavor::Standard] {
        assert_eq!(sp(&one, flavor, Goal::Persistent), 1);
    }
    assert_eq!(sp(&pyramid(1).graph, Flavor::Reversible, Goal::Persistent), 3);
    assert_eq!(sp(&pyramid(2).graph, Flavor::Standard, Goal::Persistent), 4);
    assert_eq!(sp(&path(1).graph, Flavor::Reversible, Goal::Persistent), 2);

    let p1 = pyramid(1).graph;
    assert_eq!(price_to_config(&p1, &PebbleConfig::empty(3), None).unwrap(), 0);
    assert_eq!(price_to_config(&p1, &PebbleConfig::from_vertices(3, [2]), None).unwrap(), 3);
    assert_eq!(price_to_config(&p1, &PebbleConfig::from_vertices(3, p1.preds(2).iter().copied()), None).unwrap(), 2);

    let t = extract_optimal_trace(&one, &PriceQuery::reversible(Goal::Persistent)).unwrap();
    assert_eq!(t.moves, vec![Move::place(0)]);
    let t = extract_optimal_trace(&p1, &PriceQuery::reversible(Goal::Persistent)).unwrap();
    assert_eq!(t.len(), 5);
    assert_eq!(validate_trace(&p1, &t).unwrap().space, 3);
    let t = extract_optimal_trace(&path(4).graph, &PriceQuery::reversible(Goal::Persistent)).unwrap();
    assert_eq!(validate_trace(&path(4).graph, &t).unwrap().space, 4);
}

#[test]
fn dt_examples() {
    assert_eq!(dt_price(&path(0).graph, false).unwrap(), 1);
    assert_eq!(dt_price(&path(1).graph, false).unwrap(), 2);
    assert_eq!(dt_price(&pyramid(1).graph, false).unwrap(), 3);
    let d = pyramid(2).graph;
    let table = std::rc::Rc::new(std::cell::RefCell::new(DtSolver::new(&d, false).unwrap()));
    let mut p = OptimalPebbler(table.clone());
    let mut c = OptimalChallenger(table);
    let tr = dt_play(&d, &mut p, &mut c, 50).unwrap();
    assert_eq!(tr.rounds, dt_price(&d, false).unwrap());
    let mut p = OptimalPebbler(std::rc::Rc::new(std::cell::RefCell::new(DtSolver::new(&d, true).unwrap())));
    assert_eq!(dt_worst_case(&d, &p, 50).unwrap(), 5);
    let mut ex = ExhaustiveChallenger::new(&p, 50);
    assert_eq!(dt_play(&d, &mut p, &mut ex, 50).unwrap().rounds, 5);
    let src = path(0).graph;
    assert_eq!(dt_play(&src, &mut p, &mut StayingChallenger, 5).unwrap().rounds, 1);
}

#[test]
fn twin_quotient_on_roads_and_trees() {
    use pebble_constructions::road;
    for g in [road(2, 6).unwrap(), road(3, 5).unwrap(), binary_tree(3), pyramid(3)] {
        let q = PriceQuery::reversible(Goal::Persistent);
        let fast = solve(&g.graph, &q.clone().with_twin_symmetry()).unwrap();
        let slow = solve(&g.graph, &q).unwrap();
        assert_eq!(fast.price, slow.price);
        assert!(fast.states <= slow.states);
        let r = validate_trace(&g.graph, &fast.trace).unwrap();
        assert_eq!((r.space, r.final_config.to_vec()), (fast.price, vec![g.sink()]));
    }
}

#[test]
fn caps_report_lower_bounds() {
    let d = pyramid(3).graph;
    let err = price(&d, &PriceQuery::reversible(Goal::Persistent).with_cap(4)).unwrap_err();
    assert_eq!(err, SolveError::CapExceeded { cap: 4, lower_bound: 5 });
    assert!(matches!(price(&d, &PriceQuery::reversible(Goal::Persistent).with_state_limit(10)), Err(SolveError::StateLimit { .. })));
}

#[test]
fn turnpike_free_entrance_matches_induced_graph() {
    let t = teabag(1, 2).graph;
    let n = t.node_count();
    let keep = VertexSet::from_vertices(n, 1..n);
    let region = Region::new(keep.clone());
    let masked = price(&t, &PriceQuery::reversible(Goal::Persistent).with_region(region)).unwrap();
    let mut free = PebbleConfig::empty(n);
    free.insert(0);
    let s = solve(&t, &PriceQuery::reversible(Goal::Config(PebbleConfig::from_vertices(n, [0, n - 1]))).from_config(free)).unwrap();
    assert_eq!(s.price, masked + 1);
    assert_eq!(validate_trace_from(&t, &s.trace, &s.start).unwrap().space, s.price);
}

#[test]
fn parallel_toggle_agrees() {
    let d = binary_tree(3).graph;
    let q = PriceQuery::reversible(Goal::Persistent);
    set_parallel(false);
    let a = solve(&d, &q).unwrap();
    set_parallel(true);
    let b = solve(&d, &q).unwrap();
    assert_eq!(a.price, b.price);
    assert_eq!(a.states, b.states);
    let jobs: Vec<_> = (0..4).map(|h| pyramid(h).graph).collect();
    let refs: Vec<_> = jobs.iter().map(|g| (g, &q)).collect();
    let got: Vec<usize> = price_many(&refs).into_iter().map(Result::unwrap).collect();
    assert_eq!(got, vec![1, 3, 5, 6]);
}

#[test]
fn price_record_json() {
    let d = pyramid(1).graph;
    let q = PriceQuery::reversible(Goal::Persistent);
    let s = solve(&d, &q).unwrap();
    let v = serde_json::to_value(PriceRecord::new("pyramid(1)", &q, &s)).unwrap();
    assert_eq!(v["price"], 3);
    assert_eq!(v["flavor"], "reversible");
    assert_eq!(v["goal"], "persistent");
    assert!(v.get("region").is_none());
}
