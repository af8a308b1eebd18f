//! Non-empty language sets against a region-graph oracle.

use delaymon_core::liveness::{describe, has_accepting_run};
use delaymon_core::{NonEmptyMap, Tba};
use delaymon_oracle::{random_pair, RegionOracle, Shape};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn load(text: &str) -> Tba {
    Tba::parse(text, 10).unwrap()
}

fn described(tba: &Tba, map: &NonEmptyMap) -> Vec<(String, Vec<String>)> {
    (0..tba.locations().len())
        .map(|q| {
            let zones = map.zones(q).iter().map(|z| describe(z, tba.clocks())).collect();
            (tba.locations()[q].clone(), zones)
        })
        .collect()
}

fn map_of(pairs: &[(&str, &[&str])]) -> Vec<(String, Vec<String>)> {
    pairs
        .iter()
        .map(|(q, zs)| (q.to_string(), zs.iter().map(|s| s.to_string()).collect()))
        .collect()
}

#[test]
fn response_maps_are_exact() {
    let phi = load(include_str!("../../../fixtures/response.tba"));
    let notphi = load(include_str!("../../../fixtures/response_complement.tba"));
    assert_eq!(
        described(&phi, &NonEmptyMap::compute(&phi)),
        map_of(&[("q0", &["x<=100"]), ("q1", &["true"]), ("phi", &["true"]), ("notphi", &[])])
    );
    assert_eq!(
        described(&notphi, &NonEmptyMap::compute(&notphi)),
        map_of(&[("q0", &["true"]), ("q1", &["x<=200"]), ("phi", &[]), ("notphi", &["true"])])
    );
    let ne = NonEmptyMap::compute(&phi);
    assert!(ne.contains(0, &[100]) && !ne.contains(0, &[101]));
}

#[test]
fn no_accepting_locations_means_empty() {
    let phi = load(include_str!("../../../fixtures/response.tba"));
    let none = phi.with_accepting(&[]);
    assert!(NonEmptyMap::compute(&none).is_empty());
    assert!(!has_accepting_run(&none));
}

#[test]
fn zeno_runs_do_not_count() {
    // The only accepting cycle must fire within one time unit forever.
    let text = "\
alphabet a
clocks x
location q initial accepting
edge q -> q on a when x<1
";
    let a = Tba::parse(text, 1).unwrap();
    assert!(NonEmptyMap::compute(&a).is_empty());
    assert!(!has_accepting_run(&a));
    assert!(!NonEmptyMap::compute_with(&a, false).is_empty());
    // With a reset the same loop can repeat forever while time diverges.
    let b = Tba::parse(&text.replace("x<1", "x<1 reset x"), 1).unwrap();
    assert!(has_accepting_run(&b));
    assert!(NonEmptyMap::compute(&b).contains(0, &[0]));
    assert!(!NonEmptyMap::compute(&b).contains(0, &[1]));
}

/// The automaton with every constant multiplied by `n`, so that integer
/// valuations of the copy are valuations on the `1/n` grid of the original.
fn refined(tba: &Tba, n: i64) -> Tba {
    Tba::parse(&tba.to_text(1), n).unwrap()
}

#[test]
fn maps_agree_with_the_region_graph() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let n = 3;
    for _ in 0..300 {
        let shape = Shape {
            locations: rng.gen_range(1..=4),
            clocks: rng.gen_range(0..=2),
            max_constant: rng.gen_range(0..=4),
            io: false,
        };
        let (a, na) = random_pair(&mut rng, &shape);
        for tba in [a, na] {
            let fine = NonEmptyMap::compute(&refined(&tba, n));
            let mut oracle = RegionOracle::new(&tba);
            let k = tba.clock_count();
            let span = 6 * n;
            for q in 0..tba.locations().len() {
                for x in 0..=span {
                    for y in 0..=span {
                        let v = [x, y];
                        let v = &v[..k];
                        assert_eq!(
                            fine.contains(q, v),
                            oracle.is_live(q, v, n),
                            "{} at {q} {v:?}/{n}",
                            tba.to_text(1)
                        );
                        if k < 2 {
                            break;
                        }
                    }
                    if k < 1 {
                        break;
                    }
                }
            }
        }
    }
}

#[test]
fn forward_emptiness_check_agrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..500 {
        let shape = Shape {
            locations: rng.gen_range(1..=4),
            clocks: rng.gen_range(0..=2),
            max_constant: rng.gen_range(0..=5),
            io: rng.gen_bool(0.5),
        };
        let (a, na) = random_pair(&mut rng, &shape);
        for tba in [a, na] {
            let ne = NonEmptyMap::compute(&tba);
            let zero = vec![0; tba.clock_count()];
            let backward = tba.initial().iter().any(|&q| ne.contains(q, &zero));
            assert_eq!(has_accepting_run(&tba), backward, "{}", tba.to_text(1));
            let mut oracle = RegionOracle::new(&tba);
            let regions = tba.initial().iter().any(|&q| oracle.is_live(q, &zero, 1));
            assert_eq!(backward, regions, "{}", tba.to_text(1));
        }
    }
}

#[test]
fn a_complement_pair_covers_every_state() {
    // The unique run of a deterministic complete automaton is accepted by
    // exactly one of the pair, so some copy of each start state is live.
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..200 {
        let shape = Shape { locations: rng.gen_range(1..=4), clocks: rng.gen_range(0..=2), max_constant: 4, io: false };
        let (a, na) = random_pair(&mut rng, &shape);
        let (ma, mn) = (NonEmptyMap::compute(&a), NonEmptyMap::compute(&na));
        let k = a.clock_count();
        for q in 0..a.locations().len() {
            let tail = na.location(&format!("r{q}"));
            for x in 0..=6 {
                let v = [x, 6 - x];
                let v = &v[..k];
                let neg = mn.contains(q, v) || tail.is_some_and(|r| mn.contains(r, v));
                assert!(ma.contains(q, v) || neg, "{}", a.to_text(1));
            }
        }
    }
}
