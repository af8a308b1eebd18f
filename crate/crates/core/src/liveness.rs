//! States with a non-empty language.
//!
//! `NonEmpty(A)` is the set of `(q, v)` from which some time-divergent run
//! visits accepting locations infinitely often. Divergence is made explicit
//! with an extra clock `z` and a phase bit: phase 1 means "an accepting
//! location was seen", and the only accepting edges are phase-1 edges taken
//! with `z ≥ 1` that reset `z`. A run crosses infinitely many accepting edges
//! iff it visits `F` infinitely often and lets at least one unit of time pass
//! infinitely often.
//!
//! The exact valuation sets come from a backward Büchi fixpoint on unions of
//! zones: `νY. μX. AccPre(Y) ∪ Pre(X)`. A forward check over the extrapolated
//! zone graph answers the coarser question "is `L(A)` empty?".

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;

use crate::automata::{LocationId, SymbolicState, Tba};
use crate::bound::Bound;
use crate::dbm::{Clock, Constraint, Dbm};

/// Per-location zones over the automaton clocks only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonEmptyMap {
    clocks: usize,
    zones: Vec<Vec<Dbm>>,
}

#[derive(Clone, Debug)]
struct Edge {
    src: usize,
    dst: usize,
    guard: Vec<Constraint>,
    resets: Vec<Clock>,
    accepting: bool,
}

/// The phase-annotated automaton with the divergence clock at index `k + 1`.
struct Extended {
    dim: usize,
    nodes: usize,
    edges: Vec<Edge>,
    z: Option<Clock>,
}

fn node(q: LocationId, phase: bool) -> usize {
    2 * q + usize::from(phase)
}

fn extend(tba: &Tba, divergence: bool) -> Extended {
    let k = tba.clock_count();
    let z = divergence.then_some(k + 1);
    let dim = k + 1 + usize::from(divergence);
    let mut edges = Vec::new();
    for t in tba.transitions() {
        let mut guard = Vec::new();
        for g in &t.guard {
            guard.extend(g.to_dbm().into_iter().flatten());
        }
        let resets: Vec<Clock> = t.resets.iter().map(|c| c + 1).collect();
        let lands = tba.is_accepting(t.dst);
        edges.push(Edge {
            src: node(t.src, false),
            dst: node(t.dst, lands),
            guard: guard.clone(),
            resets: resets.clone(),
            accepting: false,
        });
        edges.push(Edge {
            src: node(t.src, true),
            dst: node(t.dst, true),
            guard: guard.clone(),
            resets: resets.clone(),
            accepting: false,
        });
        let mut tick_guard = guard;
        let mut tick_resets = resets;
        if let Some(z) = z {
            tick_guard.push(Constraint::lower(z, 1, false));
            tick_resets.push(z);
        }
        edges.push(Edge {
            src: node(t.src, true),
            dst: node(t.dst, lands),
            guard: tick_guard,
            resets: tick_resets,
            accepting: true,
        });
    }
    Extended { dim, nodes: 2 * tba.locations().len(), edges, z }
}

/// Valuations that can take `e` (after some delay) into `target`.
fn pre(e: &Edge, target: &Dbm) -> Dbm {
    let mut z = target.clone();
    for &x in &e.resets {
        z = z.constrain(Constraint::upper(x, Bound::LE_ZERO));
    }
    if z.is_empty() {
        return z;
    }
    for &x in &e.resets {
        z = z.free(x).expect("resets never touch the reference clock");
    }
    z.intersect(&e.guard).down()
}

fn covered(fed: &[Dbm], z: &Dbm) -> bool {
    let mut rest = vec![z.clone()];
    for f in fed {
        if rest.is_empty() {
            break;
        }
        rest = rest.iter().flat_map(|r| r.subtract(f)).collect();
    }
    rest.is_empty()
}

/// Adds `z` unless already covered; returns whether the union grew.
fn add(fed: &mut Vec<Dbm>, z: Dbm) -> bool {
    if z.is_empty() || covered(fed, &z) {
        return false;
    }
    fed.retain(|f| !z.includes(f));
    fed.push(z);
    true
}

fn fed_subset(a: &[Dbm], b: &[Dbm]) -> bool {
    a.iter().all(|z| covered(b, z))
}

/// Replaces pairs whose union is convex by their hull, and drops included zones.
fn compact(fed: Vec<Dbm>) -> Vec<Dbm> {
    let mut out: Vec<Dbm> = Vec::new();
    for z in fed {
        if !z.is_empty() {
            add(&mut out, z);
        }
    }
    loop {
        let mut merged = false;
        'search: for i in 0..out.len() {
            for j in (i + 1)..out.len() {
                let h = out[i].convex_hull(&out[j]);
                if covered(&[out[i].clone(), out[j].clone()], &h) {
                    out.swap_remove(j);
                    out.swap_remove(i);
                    add(&mut out, h);
                    merged = true;
                    break 'search;
                }
            }
        }
        if !merged {
            break;
        }
    }
    out.sort();
    out
}

/// Backward Büchi fixpoint over the extended automaton.
fn accepting_states(ext: &Extended) -> Vec<Vec<Dbm>> {
    let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); ext.nodes];
    for (k, e) in ext.edges.iter().enumerate() {
        incoming[e.dst].push(k);
    }
    let mut y: Vec<Vec<Dbm>> = vec![vec![Dbm::universe(ext.dim)]; ext.nodes];
    loop {
        let mut x: Vec<Vec<Dbm>> = vec![Vec::new(); ext.nodes];
        let mut work: Vec<(usize, Dbm)> = Vec::new();
        for e in ext.edges.iter().filter(|e| e.accepting) {
            for t in &y[e.dst] {
                let p = pre(e, t);
                if add(&mut x[e.src], p.clone()) {
                    work.push((e.src, p));
                }
            }
        }
        while let Some((n, z)) = work.pop() {
            for &k in &incoming[n] {
                let e = &ext.edges[k];
                let p = pre(e, &z);
                if add(&mut x[e.src], p.clone()) {
                    work.push((e.src, p));
                }
            }
        }
        let stable = (0..ext.nodes).all(|n| fed_subset(&y[n], &x[n]));
        y = x;
        if stable {
            return y;
        }
    }
}

impl NonEmptyMap {
    /// `NonEmpty(A)` with time divergence required.
    pub fn compute(tba: &Tba) -> NonEmptyMap {
        NonEmptyMap::compute_with(tba, true)
    }

    /// As [`NonEmptyMap::compute`]; `divergence = false` also admits Zeno
    /// witnesses, which is only useful for debugging specifications.
    pub fn compute_with(tba: &Tba, divergence: bool) -> NonEmptyMap {
        let ext = extend(tba, divergence);
        let y = accepting_states(&ext);
        let k = tba.clock_count();
        let keep: Vec<Clock> = (0..=k).collect();
        let mut zones = Vec::with_capacity(tba.locations().len());
        for q in 0..tba.locations().len() {
            let start = node(q, tba.is_accepting(q));
            let mut fed = Vec::new();
            for zone in &y[start] {
                let at_zero = match ext.z {
                    Some(z) => zone.clone().constrain(Constraint::upper(z, Bound::LE_ZERO)),
                    None => zone.clone(),
                };
                if !at_zero.is_empty() {
                    fed.push(at_zero.remove_clocks(&keep));
                }
            }
            zones.push(compact(fed));
        }
        NonEmptyMap { clocks: k, zones }
    }

    pub fn clock_count(&self) -> usize {
        self.clocks
    }

    pub fn zones(&self, q: LocationId) -> &[Dbm] {
        &self.zones[q]
    }

    pub fn is_empty(&self) -> bool {
        self.zones.iter().all(Vec::is_empty)
    }

    /// Whether `(q, v)` is in the set; `v` lists automaton clock values.
    pub fn contains(&self, q: LocationId, v: &[i64]) -> bool {
        let mut p = Vec::with_capacity(v.len() + 1);
        p.push(0);
        p.extend_from_slice(v);
        self.zones[q].iter().any(|z| z.contains_point(&p))
    }

    /// Copies of the zones lifted to `dim` clocks, auxiliary clocks unconstrained.
    pub fn embedded(&self, dim: usize) -> Vec<Vec<Dbm>> {
        let map: Vec<Clock> = (0..=self.clocks).collect();
        self.zones
            .iter()
            .map(|fed| fed.iter().map(|z| z.embed(dim, &map)).collect())
            .collect()
    }

    /// One line per zone in guard syntax, for debugging.
    pub fn dump(&self, tba: &Tba) -> String {
        let mut out = String::new();
        for (q, fed) in self.zones.iter().enumerate() {
            for z in fed {
                let _ = writeln!(out, "{}: {}", tba.locations()[q], describe(z, tba.clocks()));
            }
        }
        out
    }
}

/// Human-readable conjunction for a zone over named clocks.
pub fn describe(z: &Dbm, clocks: &[String]) -> String {
    if z.is_empty() {
        return "false".into();
    }
    let name = |k: usize| clocks[k - 1].as_str();
    let mut parts: Vec<String> = Vec::new();
    for i in 1..z.dim() {
        let lo = z.get(0, i);
        let hi = z.get(i, 0);
        if lo != Bound::LE_ZERO {
            let op = if lo.is_strict() { ">" } else { ">=" };
            parts.push(alloc::format!("{}{}{}", name(i), op, -lo.value().unwrap_or(0)));
        }
        if let Some(v) = hi.value() {
            let op = if hi.is_strict() { "<" } else { "<=" };
            parts.push(alloc::format!("{}{}{}", name(i), op, v));
        }
        for j in 1..z.dim() {
            if i == j {
                continue;
            }
            let b = z.get(i, j);
            let implied = z.get(i, 0).add(z.get(0, j));
            if let Some(v) = b.value() {
                if b < implied {
                    let op = if b.is_strict() { "<" } else { "<=" };
                    parts.push(alloc::format!("{}-{}{}{}", name(i), name(j), op, v));
                }
            }
        }
    }
    if parts.is_empty() {
        "true".into()
    } else {
        parts.join(" && ")
    }
}

/// Whether some state of `states` meets the map. Zones of `states` may carry
/// auxiliary clocks after the automaton clocks; `embedded` must come from
/// [`NonEmptyMap::embedded`] with the states' dimension.
pub fn intersects_nonempty(states: &[SymbolicState], embedded: &[Vec<Dbm>]) -> bool {
    states
        .iter()
        .any(|s| embedded[s.location].iter().any(|z| z.intersects(&s.zone)))
}

/// Whether `L(A)` is non-empty, by forward exploration of the extrapolated
/// zone graph of the extended automaton from the initial locations.
pub fn has_accepting_run(tba: &Tba) -> bool {
    let ext = extend(tba, true);
    let mut ceilings = vec![0i64];
    ceilings.extend(tba.max_constants());
    ceilings.push(1);
    let mut ids: BTreeMap<(usize, Dbm), usize> = BTreeMap::new();
    let mut graph: Vec<Vec<(usize, bool)>> = Vec::new();
    let mut stack = Vec::new();
    let mut roots = Vec::new();
    let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); ext.nodes];
    for (k, e) in ext.edges.iter().enumerate() {
        out_edges[e.src].push(k);
    }
    for &q in tba.initial() {
        let key = (node(q, tba.is_accepting(q)), Dbm::zero(ext.dim).extrapolate(&ceilings));
        let id = *ids.entry(key.clone()).or_insert_with(|| {
            graph.push(Vec::new());
            stack.push(key);
            graph.len() - 1
        });
        roots.push(id);
    }
    while let Some((n, z)) = stack.pop() {
        let from = ids[&(n, z.clone())];
        let up = z.up();
        for &k in &out_edges[n] {
            let e = &ext.edges[k];
            let g = up.clone().intersect(&e.guard);
            if g.is_empty() {
                continue;
            }
            let next = g.reset(&e.resets).expect("no reference reset").extrapolate(&ceilings);
            let key = (e.dst, next);
            let to = match ids.get(&key) {
                Some(&id) => id,
                None => {
                    graph.push(Vec::new());
                    let id = graph.len() - 1;
                    ids.insert(key.clone(), id);
                    stack.push(key);
                    id
                }
            };
            graph[from].push((to, e.accepting));
        }
    }
    let n = graph.len();
    let mut y = vec![true; n];
    loop {
        let mut x = vec![false; n];
        let mut changed = true;
        while changed {
            changed = false;
            for v in 0..n {
                if x[v] {
                    continue;
                }
                if graph[v].iter().any(|&(w, acc)| (acc && y[w]) || x[w]) {
                    x[v] = true;
                    changed = true;
                }
            }
        }
        if x == y {
            break;
        }
        y = x;
    }
    roots.iter().any(|&r| y[r])
}
