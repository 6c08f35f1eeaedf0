use pebble_qbf::{gamma, parse_qdimacs, write_qdimacs, ParseError, Qbf, QbfError, Quantifier};
use proptest::prelude::*;

const FIGURE_EXAMPLE: &str = "c forall x3 exists x2 forall x1\n\
p cnf 3 3\n\
a 3 0\n\
e 2 0\n\
a 1 0\n\
1 2 3 0\n\
-1 2 3 0\n\
-1 -2 -3 0\n";

fn brute_force(phi: &Qbf) -> bool {
    fn go(phi: &Qbf, k: usize, values: &mut Vec<bool>) -> bool {
        if k == phi.var_count() {
            return phi.matrix_holds(values);
        }
        let (q, v) = phi.prefix()[k];
        let outcomes: Vec<bool> = [false, true]
            .iter()
            .map(|&b| {
                values[v as usize - 1] = b;
                go(phi, k + 1, values)
            })
            .collect();
        match q {
            Quantifier::Exists => outcomes.contains(&true),
            Quantifier::Forall => !outcomes.contains(&false),
        }
    }
    go(phi, 0, &mut vec![false; phi.var_count()])
}

#[test]
fn rejects_repeated_variable() {
    let e = parse_qdimacs("p cnf 1 1\ne 1 0\n1 1 1 0\n").unwrap_err();
    assert_eq!(e, ParseError::Formula(QbfError::RepeatedVariable { clause: 1, var: 1 }));
}

#[test]
fn rejects_short_clause() {
    let e = parse_qdimacs("p cnf 2 1\ne 1 2 0\n1 2 0\n").unwrap_err();
    assert_eq!(e, ParseError::NotThreeLiterals { clause: 1, len: 2 });
}

#[test]
fn rejects_free_variable() {
    let e = parse_qdimacs("p cnf 3 1\ne 1 2 0\n1 2 3 0\n").unwrap_err();
    assert_eq!(e, ParseError::Formula(QbfError::FreeVariable(3)));
}

#[test]
fn rejects_double_quantification() {
    let e = parse_qdimacs("p cnf 3 1\ne 1 2 3 0\na 1 0\n1 2 3 0\n").unwrap_err();
    assert_eq!(e, ParseError::Formula(QbfError::DuplicateQuantifier(1)));
}

#[test]
fn figure_example_parses() {
    let phi = parse_qdimacs(FIGURE_EXAMPLE).unwrap();
    let qs: Vec<Quantifier> = phi.prefix().iter().map(|p| p.0).collect();
    assert_eq!(qs, [Quantifier::Forall, Quantifier::Exists, Quantifier::Forall]);
    assert_eq!(phi.clause_count(), 3);
    assert_eq!(phi.evaluate(), brute_force(&phi));
    let l = gamma(&phi).unwrap();
    assert_eq!(l.gamma, vec![13, 18, 21, 26]);
    assert_eq!(l.literal_price, vec![15, 19, 23]);
    assert_eq!(l.innermost_var, vec![1, 2, 3]);
    assert_eq!(parse_qdimacs(&write_qdimacs(&phi)).unwrap(), phi);
}

#[test]
fn forall_exists_example_is_true() {
    use Quantifier::*;
    let phi = Qbf::new(3, vec![(Forall, 1), (Exists, 2), (Exists, 3)], vec![[1, 2, 3], [-1, 2, 3]]).unwrap();
    assert!(brute_force(&phi));
    assert!(phi.evaluate());
}

#[test]
fn ledger_json() {
    let l = gamma(&parse_qdimacs(FIGURE_EXAMPLE).unwrap()).unwrap();
    let v = serde_json::to_value(&l).unwrap();
    assert_eq!(v["gamma"][3], 26);
    assert_eq!(v["beta"], serde_json::json!([2, 4, 6]));
}

fn arb_qbf() -> impl Strategy<Value = Qbf> {
    (3usize..7).prop_flat_map(|n| {
        let prefix = (Just((1..=n as u32).collect::<Vec<_>>()).prop_shuffle(), prop::collection::vec(any::<bool>(), n));
        let clause = (prop::sample::subsequence((1..=n as i32).collect::<Vec<_>>(), 3), prop::collection::vec(any::<bool>(), 3));
        (Just(n), prefix, prop::collection::vec(clause, 1..6))
    })
    .prop_map(|(n, (order, qs), cls)| {
        let prefix = order
            .into_iter()
            .zip(qs)
            .map(|(v, e)| (if e { Quantifier::Exists } else { Quantifier::Forall }, v))
            .collect();
        let clauses = cls
            .into_iter()
            .map(|(vs, signs)| {
                let mut c = [0; 3];
                for k in 0..3 {
                    c[k] = if signs[k] { vs[k] } else { -vs[k] };
                }
                c
            })
            .collect();
        Qbf::new(n, prefix, clauses).unwrap()
    })
}

proptest! {
    #[test]
    fn evaluate_matches_brute_force(phi in arb_qbf()) {
        prop_assert_eq!(phi.evaluate(), brute_force(&phi));
    }

    #[test]
    fn evaluate_sub_composes(phi in arb_qbf(), split in 0usize..7, bits in prop::collection::vec(any::<bool>(), 7)) {
        let k = split.min(phi.var_count());
        let outer = &bits[..k];
        let (q, _) = if k < phi.var_count() { phi.prefix()[k] } else { (Quantifier::Exists, 0) };
        let here = phi.evaluate_sub(outer).unwrap();
        if k < phi.var_count() {
            let mut t = outer.to_vec();
            t.push(true);
            let mut f = outer.to_vec();
            f.push(false);
            let (a, b) = (phi.evaluate_sub(&t).unwrap(), phi.evaluate_sub(&f).unwrap());
            let expect = match q { Quantifier::Exists => a || b, Quantifier::Forall => a && b };
            prop_assert_eq!(here, expect);
        }
        prop_assert_eq!(phi.evaluate_sub(&[]).unwrap(), phi.evaluate());
    }

    #[test]
    fn gamma_depends_only_on_prefix_and_clause_count(phi in arb_qbf(), seed in any::<u64>()) {
        let mut cls = phi.clauses().to_vec();
        let len = cls.len();
        cls.rotate_left((seed as usize) % len);
        let other = Qbf::new(phi.var_count(), phi.prefix().to_vec(), cls).unwrap();
        prop_assert_eq!(gamma(&phi).unwrap().gamma, gamma(&other).unwrap().gamma);
    }

    #[test]
    fn roundtrip(phi in arb_qbf()) {
        prop_assert_eq!(parse_qdimacs(&write_qdimacs(&phi)).unwrap(), phi);
    }
}
