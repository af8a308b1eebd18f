//! Verdicts by enumerating ground truths on a rational grid.
//!
//! The consistent ground truths of an observation, together with the delay
//! parameters, form a finite union of zones with integer constants in `n`
//! real variables. Every non-empty region of such a union holds a point whose
//! coordinates are multiples of `1 / (n + 1)`, so scanning that grid decides
//! every verdict exactly.

use std::collections::HashSet;

use delaymon_core::{Direction, Relation, Tba, TbaBuilder, Verdict};

use crate::region::RegionOracle;
use crate::run::Configs;

fn verdict_of(pos: bool, neg: bool) -> Verdict {
    match (pos, neg) {
        (true, false) => Verdict::Satisfied,
        (false, true) => Verdict::Violated,
        (true, true) => Verdict::Inconclusive,
        (false, false) => panic!("no ground truth reaches either automaton"),
    }
}

/// Per grid point of the delay parameters, whether some consistent ground
/// truth extends into the property (`pos`) and into its complement (`neg`).
#[derive(Clone, Debug)]
pub struct DelayGrid {
    /// Grid points per time unit.
    pub scale: i64,
    /// `(parameters in grid units, pos, neg)`.
    pub points: Vec<(Vec<i64>, bool, bool)>,
}

impl DelayGrid {
    pub fn verdict(&self) -> Verdict {
        let pos = self.points.iter().any(|p| p.1);
        let neg = self.points.iter().any(|p| p.2);
        verdict_of(pos, neg)
    }
}

struct Side<'a> {
    tba: &'a Tba,
    live: RegionOracle<'a>,
}

impl<'a> Side<'a> {
    fn new(tba: &'a Tba) -> Side<'a> {
        Side { tba, live: RegionOracle::new(tba) }
    }

    fn symbol(&self, name: &str) -> usize {
        self.tba.symbol(name).unwrap_or_else(|| panic!("unknown symbol {name}"))
    }

    fn any_live(&mut self, c: &Configs, scale: i64) -> bool {
        c.states.iter().any(|(q, v)| self.live.is_live(*q, v, scale))
    }
}

/// Ground truths with exactly the observed events, latency `δ ∈ [low, high]`
/// and jitter in `[0, jitter]`, continued from `max(τ(ρ), t - δ - jitter)`.
pub fn monitor_grid(
    spec: &Tba,
    complement: &Tba,
    (low, high, jitter): (i64, i64, i64),
    events: &[(&str, i64)],
    t: i64,
) -> DelayGrid {
    let n = events.len() as i64 + 2;
    let mut sides = [Side::new(spec), Side::new(complement)];
    let ids: Vec<[usize; 2]> = events.iter().map(|(s, _)| [sides[0].symbol(s), sides[1].symbol(s)]).collect();
    let mut points = Vec::new();
    for delta in low * n..=high * n {
        let mut found = [false; 2];
        let mut seen = HashSet::new();
        let start = [Configs::initial(spec), Configs::initial(complement)];
        let mut stack = vec![(0usize, start)];
        while let Some((i, cs)) = stack.pop() {
            if found[0] && found[1] {
                break;
            }
            if !seen.insert((i, cs.clone())) {
                continue;
            }
            if i == events.len() {
                let end = cs[0].now.max(t * n - delta - jitter * n);
                for k in 0..2 {
                    if !found[k] {
                        let at = cs[k].advance(end);
                        found[k] = sides[k].any_live(&at, n);
                    }
                }
                continue;
            }
            let obs = events[i].1 * n;
            let lo = (obs - delta - jitter * n).max(cs[0].now);
            for tau in lo..=obs - delta {
                let next = [
                    cs[0].step(spec, ids[i][0], tau, n),
                    cs[1].step(complement, ids[i][1], tau, n),
                ];
                if !(next[0].states.is_empty() && next[1].states.is_empty()) {
                    stack.push((i + 1, next));
                }
            }
        }
        points.push((vec![delta], found[0], found[1]));
    }
    DelayGrid { scale: n, points }
}

/// The product with the two-phase automaton of input/output alternation,
/// built by name.
pub fn alternating(tba: &Tba) -> Tba {
    let mut b = TbaBuilder::new();
    let names: Vec<&str> = tba.alphabet().iter().map(String::as_str).collect();
    b = b.alphabet(&names);
    let clocks: Vec<&str> = tba.clocks().iter().map(String::as_str).collect();
    b = b.clocks(&clocks);
    let ins: Vec<&str> = names
        .iter()
        .enumerate()
        .filter(|(a, _)| tba.direction(*a) == Some(Direction::Input))
        .map(|(_, s)| *s)
        .collect();
    let outs: Vec<&str> = names.iter().copied().filter(|s| !ins.contains(s)).collect();
    b = b.inputs(&ins).outputs(&outs);
    for (q, name) in tba.locations().iter().enumerate() {
        let init = tba.initial().contains(&q);
        let acc = tba.is_accepting(q);
        b = b.location(&format!("{name}@in"), init, acc);
        b = b.location(&format!("{name}@out"), false, acc);
    }
    for t in tba.transitions() {
        let src = &tba.locations()[t.src];
        let dst = &tba.locations()[t.dst];
        let (from, to) = if ins.contains(&names[t.label]) {
            (format!("{src}@in"), format!("{dst}@out"))
        } else {
            (format!("{src}@out"), format!("{dst}@in"))
        };
        let guard: Vec<(&str, Relation, i64)> =
            t.guard.iter().map(|g| (clocks[g.clock], g.relation, g.constant)).collect();
        let resets: Vec<&str> = t.resets.iter().map(|&c| clocks[c]).collect();
        b = b.edge(&from, &to, names[t.label], &guard, &resets);
    }
    b.build().expect("product of a valid automaton is valid")
}

/// Channel bounds `(low, high, jitter)` for inputs and outputs.
pub type IoBounds = ((i64, i64, i64), (i64, i64, i64));

/// Testing ground truths: every observed input arrives after the input
/// latency, every observed output left before the output latency, at most one
/// unobserved output follows a trailing input, and the continuation starts at
/// `max(t, τ(ρ))`.
pub fn tester_grid(spec: &Tba, complement: &Tba, bounds: IoBounds, events: &[(&str, i64)], t: i64) -> DelayGrid {
    let ((li, ui, ei), (lo, uo, eo)) = bounds;
    let n = events.len() as i64 + 4;
    let prods = [alternating(spec), alternating(complement)];
    let mut sides = [Side::new(&prods[0]), Side::new(&prods[1])];
    let ids: Vec<[usize; 2]> = events.iter().map(|(s, _)| [sides[0].symbol(s), sides[1].symbol(s)]).collect();
    let input = |a: usize| prods[0].direction(a) == Some(Direction::Input);
    let outputs: Vec<[usize; 2]> = (0..prods[0].alphabet().len())
        .filter(|&a| !input(a))
        .map(|a| [a, sides[1].symbol(&prods[0].alphabet()[a])])
        .collect();
    let last_input = events.iter().rev().find(|(s, _)| input(sides[0].symbol(s))).map(|e| e.1);
    let trailing_input = events.last().is_some_and(|(s, _)| input(sides[0].symbol(s)));
    let mut points = Vec::new();
    for di in li * n..=ui * n {
        for d_o in lo * n..=uo * n {
            let mut found = [false; 2];
            let mut seen = HashSet::new();
            let start = [Configs::initial(&prods[0]), Configs::initial(&prods[1])];
            let mut stack = vec![(0usize, start)];
            let mut finish = |cs: &[Configs; 2], end: i64, found: &mut [bool; 2]| {
                for k in 0..2 {
                    if !found[k] {
                        let at = cs[k].advance(end.max(cs[k].now));
                        found[k] = sides[k].any_live(&at, n);
                    }
                }
            };
            while let Some((i, cs)) = stack.pop() {
                if found[0] && found[1] {
                    break;
                }
                if !seen.insert((i, cs.clone())) {
                    continue;
                }
                let now = cs[0].now;
                if i == events.len() {
                    finish(&cs, t * n, &mut found);
                    if trailing_input {
                        let sent = last_input.expect("trailing input exists") * n;
                        let first = now.max(t * n - d_o - eo * n);
                        let last = (t * n).max(sent + di + ei * n);
                        for tau in first..=last {
                            for o in &outputs {
                                let next = [
                                    cs[0].step(&prods[0], o[0], tau, n),
                                    cs[1].step(&prods[1], o[1], tau, n),
                                ];
                                finish(&next, t * n, &mut found);
                            }
                        }
                    }
                    continue;
                }
                let obs = events[i].1 * n;
                let (a, b) = if input(ids[i][0]) {
                    (obs + di, obs + di + ei * n)
                } else {
                    (obs - d_o - eo * n, obs - d_o)
                };
                for tau in a.max(now).max(0)..=b {
                    let next = [
                        cs[0].step(&prods[0], ids[i][0], tau, n),
                        cs[1].step(&prods[1], ids[i][1], tau, n),
                    ];
                    if !(next[0].states.is_empty() && next[1].states.is_empty()) {
                        stack.push((i + 1, next));
                    }
                }
            }
            points.push((vec![di, d_o], found[0], found[1]));
        }
    }
    DelayGrid { scale: n, points }
}
