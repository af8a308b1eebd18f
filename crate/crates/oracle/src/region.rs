//! Explicit region-graph check of `NonEmpty`.
//!
//! States are a location and a clock region over the automaton clocks plus a
//! divergence clock `z` with ceiling 1. A silent tick resets `z` once it has
//! reached 1. A state is live iff it reaches a strongly connected component
//! that contains an accepting location, a tick, and an automaton transition.

use std::collections::HashMap;

use delaymon_core::{Relation, Tba};
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

/// Integer parts (`ceiling + 1` standing for "above the ceiling") and the
/// rank of each fractional part among the distinct non-zero ones (0 for a
/// zero fraction or a clock above its ceiling).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Region {
    ints: Vec<i64>,
    ranks: Vec<u32>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Step {
    Time,
    Tick,
    Action,
}

pub struct RegionOracle<'a> {
    tba: &'a Tba,
    ceilings: Vec<i64>,
    ids: HashMap<(usize, Region), usize>,
    nodes: Vec<(usize, Region)>,
    edges: Vec<Vec<(usize, Step)>>,
    expanded: usize,
    live: Vec<bool>,
}

impl<'a> RegionOracle<'a> {
    pub fn new(tba: &'a Tba) -> RegionOracle<'a> {
        let k = tba.clock_count();
        let mut ceilings = vec![0; k + 1];
        for t in tba.transitions() {
            for g in &t.guard {
                ceilings[g.clock] = ceilings[g.clock].max(g.constant);
            }
        }
        ceilings[k] = 1;
        RegionOracle { tba, ceilings, ids: HashMap::new(), nodes: Vec::new(), edges: Vec::new(), expanded: 0, live: Vec::new() }
    }

    /// Whether an accepting time-divergent run starts in `q` with clock
    /// values `values[c] / scale`.
    pub fn is_live(&mut self, q: usize, values: &[i64], scale: i64) -> bool {
        let r = self.region_of(values, scale);
        let id = self.intern(q, r);
        if self.expanded < self.nodes.len() {
            self.explore();
            self.solve();
        }
        self.live[id]
    }

    fn region_of(&self, values: &[i64], scale: i64) -> Region {
        let k = self.ceilings.len();
        let mut ints = vec![0; k];
        let mut fracs = vec![0; k];
        for c in 0..k - 1 {
            let v = values[c];
            assert!(v >= 0, "clock values are non-negative");
            if v > self.ceilings[c] * scale {
                ints[c] = self.ceilings[c] + 1;
            } else {
                ints[c] = v / scale;
                fracs[c] = v % scale;
            }
        }
        let mut distinct: Vec<i64> = fracs.iter().copied().filter(|&f| f > 0).collect();
        distinct.sort_unstable();
        distinct.dedup();
        let ranks = fracs
            .iter()
            .map(|f| if *f == 0 { 0 } else { distinct.binary_search(f).unwrap() as u32 + 1 })
            .collect();
        Region { ints, ranks }
    }

    fn intern(&mut self, q: usize, r: Region) -> usize {
        let key = (q, r);
        if let Some(&id) = self.ids.get(&key) {
            return id;
        }
        let id = self.nodes.len();
        self.ids.insert(key.clone(), id);
        self.nodes.push(key);
        self.edges.push(Vec::new());
        id
    }

    fn top(&self, r: &Region, c: usize) -> bool {
        r.ints[c] > self.ceilings[c]
    }

    fn time_successor(&self, r: &Region) -> Region {
        let k = r.ints.len();
        let mut s = r.clone();
        let zero: Vec<usize> = (0..k).filter(|&c| !self.top(r, c) && r.ranks[c] == 0).collect();
        if !zero.is_empty() {
            for c in 0..k {
                if s.ranks[c] > 0 {
                    s.ranks[c] += 1;
                }
            }
            for c in zero {
                if r.ints[c] == self.ceilings[c] {
                    s.ints[c] += 1;
                } else {
                    s.ranks[c] = 1;
                }
            }
            return normalize(s);
        }
        let max = r.ranks.iter().copied().max().unwrap_or(0);
        if max == 0 {
            return s;
        }
        for c in 0..k {
            if r.ranks[c] == max {
                s.ints[c] += 1;
                s.ranks[c] = 0;
            }
        }
        normalize(s)
    }

    fn holds(&self, r: &Region, c: usize, rel: Relation, n: i64) -> bool {
        let top = self.top(r, c);
        let (i, f) = (r.ints[c], r.ranks[c] > 0);
        match rel {
            Relation::Le => !top && (i < n || (i == n && !f)),
            Relation::Lt => !top && i < n,
            Relation::Eq => !top && i == n && !f,
            Relation::Ge => top || i >= n,
            Relation::Gt => top || i > n || (i == n && f),
        }
    }

    fn reset(r: &Region, clocks: &[usize]) -> Region {
        let mut s = r.clone();
        for &c in clocks {
            s.ints[c] = 0;
            s.ranks[c] = 0;
        }
        normalize(s)
    }

    fn explore(&mut self) {
        let z = self.ceilings.len() - 1;
        while self.expanded < self.nodes.len() {
            let id = self.expanded;
            self.expanded += 1;
            let (q, r) = self.nodes[id].clone();
            let mut out = Vec::new();
            let next = self.time_successor(&r);
            out.push((q, next, Step::Time));
            if self.top(&r, z) || (r.ints[z] == 1 && r.ranks[z] == 0) {
                out.push((q, Self::reset(&r, &[z]), Step::Tick));
            }
            for t in self.tba.transitions().iter().filter(|t| t.src == q) {
                if t.guard.iter().all(|g| self.holds(&r, g.clock, g.relation, g.constant)) {
                    out.push((t.dst, Self::reset(&r, &t.resets), Step::Action));
                }
            }
            for (q2, r2, step) in out {
                let to = self.intern(q2, r2);
                self.edges[id].push((to, step));
            }
        }
    }

    fn solve(&mut self) {
        let n = self.nodes.len();
        let mut g: DiGraph<(), ()> = DiGraph::with_capacity(n, n * 2);
        for _ in 0..n {
            g.add_node(());
        }
        for (a, es) in self.edges.iter().enumerate() {
            for &(b, _) in es {
                g.add_edge(NodeIndex::new(a), NodeIndex::new(b), ());
            }
        }
        let mut comp = vec![0; n];
        let sccs = tarjan_scc(&g);
        for (k, scc) in sccs.iter().enumerate() {
            for v in scc {
                comp[v.index()] = k;
            }
        }
        let mut good = vec![false; sccs.len()];
        for (k, scc) in sccs.iter().enumerate() {
            let (mut acc, mut tick, mut action) = (false, false, false);
            for v in scc {
                let a = v.index();
                acc |= self.tba.is_accepting(self.nodes[a].0);
                for &(b, step) in &self.edges[a] {
                    if comp[b] == k {
                        tick |= step == Step::Tick;
                        action |= step == Step::Action;
                    }
                }
            }
            good[k] = acc && tick && action;
        }
        // Backward closure from the good components.
        let mut rev = vec![Vec::new(); n];
        for (a, es) in self.edges.iter().enumerate() {
            for &(b, _) in es {
                rev[b].push(a);
            }
        }
        let mut live: Vec<bool> = (0..n).map(|v| good[comp[v]]).collect();
        let mut stack: Vec<usize> = (0..n).filter(|&v| live[v]).collect();
        while let Some(v) = stack.pop() {
            for &u in &rev[v] {
                if !live[u] {
                    live[u] = true;
                    stack.push(u);
                }
            }
        }
        self.live = live;
    }
}

fn normalize(mut r: Region) -> Region {
    let mut used: Vec<u32> = r.ranks.iter().copied().filter(|&x| x > 0).collect();
    used.sort_unstable();
    used.dedup();
    for x in r.ranks.iter_mut() {
        if *x > 0 {
            *x = used.binary_search(x).unwrap() as u32 + 1;
        }
    }
    r
}
