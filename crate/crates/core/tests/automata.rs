//! Parsing, symbolic successors and the input/output product.

use delaymon_core::automata::{format_scaled, insert_pruned, parse_scaled};
use delaymon_core::liveness::has_accepting_run;
use delaymon_core::{
    AtomicConstraint, Bound, Constraint, Dbm, Error, NonEmptyMap, Relation, SymbolicState, Tba,
};
use delaymon_oracle::{random_pair, Configs, Shape};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PHI: &str = include_str!("../../../fixtures/response.tba");
const FIG5: &str = include_str!("../../../fixtures/io_response.tba");

fn response() -> Tba {
    Tba::parse(PHI, 10).unwrap()
}

/// Zone over `x` and `time` pinning both to `tau`.
fn pinned(tau: i64) -> Dbm {
    Dbm::from_constraints(
        3,
        &[
            Constraint::upper(1, Bound::le(tau)),
            Constraint::lower(1, tau, false),
            Constraint::upper(2, Bound::le(tau)),
            Constraint::lower(2, tau, false),
        ],
    )
}

#[test]
fn response_guard_is_scaled() {
    let a = response();
    let q0 = a.location("q0").unwrap();
    let q1 = a.location("q1").unwrap();
    let sym = a.symbol("a").unwrap();
    let t = a.transitions().iter().find(|t| t.src == q0 && t.dst == q1 && t.label == sym).unwrap();
    assert_eq!(t.guard, [AtomicConstraint::new(0, Relation::Le, 100)]);
    assert!(t.resets.is_empty());
    assert_eq!(a.max_constants(), [200]);
}

#[test]
fn text_round_trips() {
    for scale in [1, 10, 100] {
        let a = Tba::parse(PHI, scale).unwrap();
        let text = a.to_text(scale);
        assert_eq!(Tba::parse(&text, scale).unwrap(), a);
    }
    let b = Tba::parse(FIG5, 100).unwrap();
    assert_eq!(Tba::parse(&b.to_text(100), 100).unwrap(), b);
    assert!(b.to_text(100).contains("x<7.5"));
}

#[test]
fn syntax_errors_carry_positions() {
    let text = "alphabet a\nclocks x\nlocation q initial\n  edge q => q on a\n";
    match Tba::parse(text, 1) {
        Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (4, 10)),
        other => panic!("{other:?}"),
    }
    let text = "alphabet a\nlocation q initial\nedge q -> q on a when x<=ten\n";
    match Tba::parse(text, 1) {
        Err(Error::Syntax { line, column, message }) => {
            assert_eq!((line, column), (3, 23));
            assert!(message.contains("ten"), "{message}");
        }
        other => panic!("{other:?}"),
    }
    let text = "alphabet a\nstate q\n";
    assert!(matches!(Tba::parse(text, 1), Err(Error::Syntax { line: 2, column: 1, .. })));
    let text = "alphabet a\nlocation q initial final\n";
    assert!(matches!(Tba::parse(text, 1), Err(Error::Syntax { line: 2, column: 20, .. })));
}

#[test]
fn semantic_errors_are_listed_together() {
    let text = "\
alphabet a b
inputs a
clocks x
location q initial
edge q -> r on a
edge q -> q on c when y<1
edge q -> q on b reset z
";
    let Err(Error::Semantic(errors)) = Tba::parse(text, 1) else { panic!() };
    assert_eq!(
        errors,
        [
            "symbol `b` is neither input nor output",
            "edge to unknown location `r`",
            "edge labelled with unknown symbol `c`",
            "guard on unknown clock `y`",
            "reset of unknown clock `z`",
        ]
    );
}

#[test]
fn empty_location_set_is_rejected() {
    let Err(Error::Semantic(errors)) = Tba::parse("alphabet a\nclocks x\n", 1) else { panic!() };
    assert!(errors.contains(&"no locations declared".to_string()));
    assert!(errors.contains(&"no initial location".to_string()));
}

#[test]
fn residual_fractions_are_rejected() {
    let text = "alphabet a\nclocks x\nlocation q initial\nedge q -> q on a when x<0.25\n";
    assert!(matches!(Tba::parse(text, 10), Err(Error::Syntax { line: 4, .. })));
    assert!(Tba::parse(text, 100).is_ok());
}

#[test]
fn scaled_decimals() {
    assert_eq!(parse_scaled("17.3", 10), Some(173));
    assert_eq!(parse_scaled("17.30", 10), Some(173));
    assert_eq!(parse_scaled("17.35", 10), None);
    assert_eq!(parse_scaled(".5", 10), Some(5));
    assert_eq!(parse_scaled("6", 100), Some(600));
    assert_eq!(parse_scaled("-1", 10), None);
    assert_eq!(parse_scaled("1e3", 10), None);
    assert_eq!(parse_scaled(".", 10), None);
    assert_eq!(format_scaled(173, 10), "17.3");
    assert_eq!(format_scaled(1910, 100), "19.1");
    assert_eq!(format_scaled(-5, 10), "-0.5");
    assert_eq!(format_scaled(200, 10), "20");
    for v in [0, 1, 9, 10, 101, 12345] {
        assert_eq!(parse_scaled(&format_scaled(v, 100), 100), Some(v));
    }
}

#[test]
fn post_splits_on_the_guard() {
    let a = response();
    let s = SymbolicState { location: a.location("q0").unwrap(), zone: Dbm::zero(3) };
    let mut next: Vec<String> =
        a.post(&s, a.symbol("a").unwrap()).iter().map(|n| a.locations()[n.location].clone()).collect();
    next.sort();
    assert_eq!(next, ["notphi", "q1"]);

    let phi = SymbolicState { location: a.location("phi").unwrap(), zone: Dbm::zero(3) };
    for sym in ["a", "b"] {
        let n = a.post(&phi, a.symbol(sym).unwrap());
        assert_eq!(n.len(), 1);
        assert_eq!(n[0].location, phi.location);
        assert_eq!(n[0].zone, Dbm::zero(3).up());
    }

    let dead = Tba::parse("alphabet a b\nclocks x\nlocation q initial accepting\nedge q -> q on a\n", 1).unwrap();
    let s = SymbolicState { location: 0, zone: Dbm::zero(2) };
    assert!(dead.post(&s, dead.symbol("b").unwrap()).is_empty());
}

#[test]
fn delay_free_succ_of_a_late_a() {
    let a = response();
    let start = [SymbolicState { location: a.location("q0").unwrap(), zone: Dbm::zero(3) }];
    let next = a.succ(&start, a.symbol("a").unwrap(), 173, 2);
    assert_eq!(next.len(), 1);
    assert_eq!(a.locations()[next[0].location], "notphi");
    assert_eq!(next[0].zone, pinned(173));
    // Time cannot run backwards.
    assert!(a.succ(&next, a.symbol("b").unwrap(), 100, 2).is_empty());
}

#[test]
fn stored_zones_are_nonempty_and_pinned() {
    let a = response();
    let mut s = vec![SymbolicState { location: a.location("q0").unwrap(), zone: Dbm::zero(3) }];
    for (sym, tau) in [("a", 50), ("a", 120), ("b", 250)] {
        s = a.succ(&s, a.symbol(sym).unwrap(), tau, 2);
        assert!(!s.is_empty());
        for st in &s {
            assert!(!st.zone.is_empty());
            let t = st.zone.difference_bounds(2, 0);
            assert!(t.contains(tau) && !t.contains(tau - 1) && !t.contains(tau + 1));
        }
    }
    assert_eq!(a.locations()[s[0].location], "phi");
}

/// Integer points of a zone over `k` clocks and `time`, with `time = tau`.
fn points_at(z: &Dbm, k: usize, tau: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![0]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|p| (0..=tau).map(move |x| [p.clone(), vec![x]].concat()))
            .collect();
    }
    out.into_iter()
        .map(|mut p| {
            p.push(tau);
            p
        })
        .filter(|p| z.contains_point(p))
        .map(|p| p[1..=k].to_vec())
        .collect()
}

#[test]
fn succ_matches_explicit_runs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let shape = Shape { locations: rng.gen_range(1..=4), clocks: 2, max_constant: 5, io: false };
        let (a, _) = random_pair(&mut rng, &shape);
        let time = 3;
        let mut sym = vec![SymbolicState { location: 0, zone: Dbm::zero(4) }];
        let mut concrete = Configs::initial(&a);
        let mut tau = 0;
        for _ in 0..5 {
            tau += rng.gen_range(0..=3);
            let s = rng.gen_range(0..2);
            sym = a.succ(&sym, s, tau, time);
            concrete = concrete.step(&a, s, tau, 1);
            let mut from_zones: Vec<(usize, Vec<i64>)> = sym
                .iter()
                .flat_map(|st| points_at(&st.zone, 2, tau).into_iter().map(move |p| (st.location, p)))
                .collect();
            from_zones.sort();
            from_zones.dedup();
            let explicit: Vec<(usize, Vec<i64>)> = concrete.states.iter().cloned().collect();
            assert_eq!(from_zones, explicit, "{}", a.to_text(1));
        }
    }
}

#[test]
fn pruning_keeps_the_union() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..200 {
        let shape = Shape { locations: rng.gen_range(1..=3), clocks: 2, max_constant: 4, io: false };
        let (a, _) = random_pair(&mut rng, &shape);
        // Zones over the two clocks and `time`, without pinning, so pruning has work to do.
        let mut pruned = vec![SymbolicState { location: 0, zone: Dbm::zero(4) }];
        let mut plain = pruned.clone();
        for _ in 0..4 {
            let s = rng.gen_range(0..2);
            let mut next = Vec::new();
            for st in &pruned {
                for n in a.post(st, s) {
                    insert_pruned(&mut next, n);
                }
            }
            pruned = next;
            plain = plain.iter().flat_map(|st| a.post(st, s)).collect();
            assert!(pruned.len() <= plain.len());
            for q in 0..a.locations().len() {
                for x in 0..=8 {
                    for y in 0..=8 {
                        for t in 0..=8 {
                            let p = [0, x, y, t];
                            let hit = |set: &[SymbolicState]| {
                                set.iter().any(|st| st.location == q && st.zone.contains_point(&p))
                            };
                            assert_eq!(hit(&pruned), hit(&plain));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn io_product_doubles_locations() {
    let a = Tba::parse(FIG5, 100).unwrap();
    let p = a.io_alternation_product().unwrap();
    assert_eq!(p.locations().len(), 2 * a.locations().len());
    assert_eq!(p.transitions().len(), a.transitions().len());
    assert_eq!(p.initial().len(), a.initial().len());
    for (q, name) in p.locations().iter().enumerate() {
        let base = name.rsplit_once('|').unwrap().0;
        assert_eq!(p.is_accepting(q), a.is_accepting(a.location(base).unwrap()));
    }
    assert_eq!(response().io_alternation_product(), Err(Error::MissingPartition));
}

#[test]
fn io_product_rejects_two_inputs_in_a_row() {
    let p = Tba::parse(FIG5, 100).unwrap().io_alternation_product().unwrap();
    let (a, b) = (p.symbol("a").unwrap(), p.symbol("b").unwrap());
    let start: Vec<SymbolicState> =
        p.initial().iter().map(|&q| SymbolicState { location: q, zone: Dbm::zero(4) }).collect();
    let one = p.succ(&start, a, 100, 3);
    assert!(!one.is_empty());
    assert!(p.succ(&one, a, 200, 3).is_empty());
    assert!(!p.succ(&one, b, 200, 3).is_empty());
    assert!(p.succ(&start, b, 100, 3).is_empty());
}

#[test]
fn io_response_product_has_accepting_runs() {
    let a = Tba::parse(FIG5, 100).unwrap();
    let p = a.io_alternation_product().unwrap();
    assert!(has_accepting_run(&p));
    assert!(!NonEmptyMap::compute(&p).is_empty());
    let fail = Tba::parse(include_str!("../../../fixtures/io_response_complement.tba"), 100).unwrap();
    assert!(has_accepting_run(&fail.io_alternation_product().unwrap()));
}

/// The product only removes behaviour: a product state with an accepting
/// future projects to an automaton state with one.
#[test]
fn io_product_language_is_included() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..200 {
        let shape = Shape { locations: rng.gen_range(1..=3), clocks: rng.gen_range(0..=2), max_constant: 4, io: true };
        let (a, _) = random_pair(&mut rng, &shape);
        let p = a.io_alternation_product().unwrap();
        let (na, np) = (NonEmptyMap::compute(&a), NonEmptyMap::compute(&p));
        let k = a.clock_count();
        for (q, name) in p.locations().iter().enumerate() {
            let base = a.location(name.rsplit_once('|').unwrap().0).unwrap();
            for x in 0..=6 {
                for y in 0..=6 {
                    let v = [x, y];
                    if np.contains(q, &v[..k]) {
                        assert!(na.contains(base, &v[..k]), "{}", a.to_text(1));
                    }
                }
            }
        }
    }
}
