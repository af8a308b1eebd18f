//! Random deterministic complete automata and their complements.

use delaymon_core::{Relation, Tba, TbaBuilder};
use rand::Rng;

/// Size limits for generated automata.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub locations: usize,
    pub clocks: usize,
    pub max_constant: i64,
    /// Use inputs `i` and outputs `o` instead of the plain alphabet `a b`.
    pub io: bool,
}

struct Edge {
    src: usize,
    dst: usize,
    label: usize,
    guard: Option<(usize, Relation, i64)>,
    resets: Vec<usize>,
}

const CLOCKS: [&str; 3] = ["x", "y", "w"];

/// A deterministic complete automaton `D` with a random Büchi set, returned
/// as `(D, complement of D)`. The complement guesses the point after which
/// the unique run of `D` never visits an accepting location again.
pub fn random_pair<R: Rng>(rng: &mut R, shape: &Shape) -> (Tba, Tba) {
    let symbols: [&str; 2] = if shape.io { ["i", "o"] } else { ["a", "b"] };
    let n = shape.locations.max(1);
    let mut edges = Vec::new();
    for src in 0..n {
        for label in 0..2 {
            let resets = |rng: &mut R| (0..shape.clocks).filter(|_| rng.gen_bool(0.3)).collect::<Vec<_>>();
            if shape.clocks == 0 || rng.gen_bool(0.3) {
                let dst = rng.gen_range(0..n);
                edges.push(Edge { src, dst, label, guard: None, resets: resets(rng) });
            } else {
                let c = rng.gen_range(0..shape.clocks);
                let k = rng.gen_range(0..=shape.max_constant);
                let (below, above) = if rng.gen_bool(0.5) {
                    (Relation::Le, Relation::Gt)
                } else {
                    (Relation::Lt, Relation::Ge)
                };
                for rel in [below, above] {
                    let dst = rng.gen_range(0..n);
                    edges.push(Edge { src, dst, label, guard: Some((c, rel, k)), resets: resets(rng) });
                }
            }
        }
    }
    let accepting: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    (build(shape, &symbols, &edges, &accepting, false), build(shape, &symbols, &edges, &accepting, true))
}

fn build(shape: &Shape, symbols: &[&str; 2], edges: &[Edge], accepting: &[bool], complement: bool) -> Tba {
    let n = accepting.len();
    let mut b = TbaBuilder::new().alphabet(symbols).clocks(&CLOCKS[..shape.clocks]);
    if shape.io {
        b = b.inputs(&symbols[..1]).outputs(&symbols[1..]);
    }
    let name = |q: usize| format!("q{q}");
    let tail = |q: usize| format!("r{q}");
    for q in 0..n {
        b = b.location(&name(q), q == 0, !complement && accepting[q]);
    }
    if complement {
        for q in (0..n).filter(|&q| !accepting[q]) {
            b = b.location(&tail(q), q == 0, true);
        }
    }
    for e in edges {
        let guard: Vec<(&str, Relation, i64)> = e.guard.iter().map(|&(c, r, k)| (CLOCKS[c], r, k)).collect();
        let resets: Vec<&str> = e.resets.iter().map(|&c| CLOCKS[c]).collect();
        let label = symbols[e.label];
        b = b.edge(&name(e.src), &name(e.dst), label, &guard, &resets);
        if complement && !accepting[e.dst] {
            b = b.edge(&name(e.src), &tail(e.dst), label, &guard, &resets);
            if !accepting[e.src] {
                b = b.edge(&tail(e.src), &tail(e.dst), label, &guard, &resets);
            }
        }
    }
    b.build().expect("generated automata are well-formed")
}
