//! Online monitoring of a single delayed output channel.
//!
//! Zones carry the automaton clocks plus `time` (the system-side event time)
//! and `etime` (the earliest observation time of the latest event). The
//! difference `etime - time` is the unknown latency, so its projection is the
//! set of latencies consistent with the observation so far.

use alloc::vec::Vec;
use core::fmt;

use crate::automata::{insert_pruned, SymbolId, SymbolicState, Tba};
use crate::bound::Bound;
use crate::dbm::{Clock, Constraint, Dbm};
use crate::error::Error;
use crate::interval::{Interval, IntervalSet};
use crate::liveness::{intersects_nonempty, NonEmptyMap};

/// Latency in `[low, high]` (`high = None` for no upper bound) and per-event
/// jitter in `[0, jitter]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DelayBounds {
    pub low: i64,
    pub high: Option<i64>,
    pub jitter: i64,
}

impl DelayBounds {
    pub fn new(low: i64, high: Option<i64>, jitter: i64) -> Result<DelayBounds, Error> {
        let b = DelayBounds { low, high, jitter };
        b.validate()?;
        Ok(b)
    }

    /// No delay and no jitter.
    pub const fn zero() -> DelayBounds {
        DelayBounds { low: 0, high: Some(0), jitter: 0 }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.low < 0 || self.jitter < 0 {
            return Err(Error::Bounds("latency and jitter must be non-negative".into()));
        }
        if matches!(self.high, Some(h) if h < self.low) {
            return Err(Error::Bounds("latency upper bound below lower bound".into()));
        }
        Ok(())
    }

    pub fn latency_interval(&self) -> Interval {
        match self.high {
            Some(h) => Interval::closed(self.low, h),
            None => Interval::closed_open(self.low, None),
        }
    }

    pub(crate) fn high_bound(&self) -> Bound {
        match self.high {
            Some(h) => Bound::le(h),
            None => Bound::INFINITY,
        }
    }
}

/// Three-valued verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// Every consistent continuation satisfies the property.
    Satisfied,
    /// No consistent continuation satisfies the property.
    Violated,
    Inconclusive,
}

impl Verdict {
    pub fn is_conclusive(self) -> bool {
        self != Verdict::Inconclusive
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Satisfied => "POSITIVE",
            Verdict::Violated => "NEGATIVE",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Latencies consistent with satisfaction (`positive`) and with violation
/// (`negative`), and the jitter bound in force.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatencyReport {
    pub positive: IntervalSet,
    pub negative: IntervalSet,
    pub jitter: i64,
}

/// Clock indices of the auxiliary clocks for an automaton with `k` clocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DelayLayout {
    pub dim: usize,
    pub time: Clock,
    pub etime: Clock,
}

impl DelayLayout {
    pub fn for_automaton(tba: &Tba) -> DelayLayout {
        let k = tba.clock_count();
        DelayLayout { dim: k + 3, time: k + 1, etime: k + 2 }
    }
}

/// `Z₀ᵈ`: all automaton clocks and `time` at 0, `etime - time ∈ [ℓ, u]`.
pub fn initial_zone(tba: &Tba, b: &DelayBounds) -> Dbm {
    let l = DelayLayout::for_automaton(tba);
    let mut z = Dbm::zero(l.dim);
    // Free etime, then bound it against time.
    z = z.free(l.etime).expect("etime is not the reference clock");
    z.intersect(&[
        Constraint::new(l.etime, l.time, b.high_bound()),
        Constraint::new(l.time, l.etime, Bound::le(-b.low)),
    ])
}

/// Initial reach-set over all initial locations.
pub fn initial_states(tba: &Tba, b: &DelayBounds) -> Vec<SymbolicState> {
    let z = initial_zone(tba, b);
    tba.initial().iter().map(|&q| SymbolicState { location: q, zone: z.clone() }).collect()
}

/// `Succ_d`: symbolic successors under `a` observed at `tau`, with
/// `etime ∈ [tau - ε, tau]`, inclusion-pruned.
pub fn succ_delayed(
    tba: &Tba,
    states: &[SymbolicState],
    a: SymbolId,
    tau: i64,
    b: &DelayBounds,
) -> Vec<SymbolicState> {
    let l = DelayLayout::for_automaton(tba);
    let window = [
        Constraint::upper(l.etime, Bound::le(tau)),
        Constraint::lower(l.etime, tau - b.jitter, false),
    ];
    let mut out = Vec::new();
    for s in states {
        for mut n in tba.post(s, a) {
            n.zone = n.zone.intersect(&window);
            if !n.zone.is_empty() {
                insert_pruned(&mut out, n);
            }
        }
    }
    out
}

/// The zones a stored zone stands for once the observer's clock reads `t`:
/// ground truths advance to `max(time, t - ε - (etime - time))`, i.e. `etime`
/// moves up to `t - ε` unless it is already past it.
pub fn advance_to(zone: &Dbm, etime: Clock, t: i64, jitter: i64) -> [Dbm; 2] {
    let edge = t - jitter;
    let stay = zone.clone().constrain(Constraint::lower(etime, edge, false));
    let moved = zone.clone().up().intersect(&[
        Constraint::upper(etime, Bound::le(edge)),
        Constraint::lower(etime, edge, false),
    ]);
    [stay, moved]
}

struct Side {
    tba: Tba,
    nonempty: NonEmptyMap,
    embedded: Vec<Vec<Dbm>>,
    layout: DelayLayout,
    reach: Vec<SymbolicState>,
    /// Keep inactive clocks instead of freeing them.
    exact: bool,
}

impl Side {
    fn new(tba: Tba, b: &DelayBounds) -> Side {
        let nonempty = NonEmptyMap::compute(&tba);
        let layout = DelayLayout::for_automaton(&tba);
        let embedded = nonempty.embedded(layout.dim);
        let mut s = Side { tba, nonempty, embedded, layout, reach: Vec::new(), exact: false };
        s.restart(b);
        s
    }

    fn restart(&mut self, b: &DelayBounds) {
        let init = initial_states(&self.tba, b);
        self.store(init);
    }

    /// Stores `states`, dropping those that can never reach an accepting
    /// continuation.
    fn store(&mut self, states: Vec<SymbolicState>) {
        let states = if self.exact {
            states
        } else {
            let mut out = Vec::with_capacity(states.len());
            for st in states {
                insert_pruned(&mut out, self.tba.free_inactive(st));
            }
            out
        };
        let emb = &self.embedded;
        self.reach = states.into_iter().filter(|s| emb[s.location].iter().any(|z| z.intersects(&s.zone))).collect();
    }

    fn advanced(&self, t: i64, jitter: i64) -> Vec<SymbolicState> {
        let mut out = Vec::new();
        for s in &self.reach {
            for z in advance_to(&s.zone, self.layout.etime, t, jitter) {
                if !z.is_empty() {
                    out.push(SymbolicState { location: s.location, zone: z });
                }
            }
        }
        out
    }

    fn hits(&self, t: i64, jitter: i64) -> bool {
        intersects_nonempty(&self.advanced(t, jitter), &self.embedded)
    }

    fn latencies(&self, t: i64, b: &DelayBounds) -> IntervalSet {
        let mut out = IntervalSet::new();
        for s in self.advanced(t, b.jitter) {
            for ne in &self.embedded[s.location] {
                let z = s.zone.clone().intersect_zone(ne);
                out.insert(z.difference_bounds(self.layout.etime, self.layout.time));
            }
        }
        out.intersect(&b.latency_interval())
    }
}

/// Monitor for a property `A` and its complement `Ā` under delay bounds.
pub struct Monitor {
    pos: Side,
    neg: Side,
    bounds: DelayBounds,
    last: Option<i64>,
    verdict: Verdict,
    observations: usize,
}

impl Monitor {
    pub fn new(spec: Tba, complement: Tba, bounds: DelayBounds) -> Result<Monitor, Error> {
        bounds.validate()?;
        if !spec.same_alphabet(&complement) {
            return Err(Error::AlphabetMismatch);
        }
        let pos = Side::new(spec, &bounds);
        let neg = Side::new(complement, &bounds);
        let mut m = Monitor { pos, neg, bounds, last: None, verdict: Verdict::Inconclusive, observations: 0 };
        m.verdict = m.compute_verdict(0)?;
        Ok(m)
    }

    /// Stores zones exactly as computed. By default clocks that no guard
    /// reads before their next reset are freed, which keeps reach-sets small
    /// without changing verdicts or latency reports. Only affects states
    /// stored from now on, so call it before the first observation.
    pub fn keep_inactive_clocks(mut self) -> Monitor {
        self.pos.exact = true;
        self.neg.exact = true;
        if self.observations == 0 {
            self.pos.restart(&self.bounds);
            self.neg.restart(&self.bounds);
        }
        self
    }

    pub fn bounds(&self) -> &DelayBounds {
        &self.bounds
    }

    pub fn verdict(&self) -> Verdict {
        self.verdict
    }

    pub fn last_observation(&self) -> Option<i64> {
        self.last
    }

    pub fn observations(&self) -> usize {
        self.observations
    }

    pub fn spec(&self) -> &Tba {
        &self.pos.tba
    }

    pub fn complement(&self) -> &Tba {
        &self.neg.tba
    }

    pub fn nonempty_maps(&self) -> (&NonEmptyMap, &NonEmptyMap) {
        (&self.pos.nonempty, &self.neg.nonempty)
    }

    /// Stored reach-sets over `A` and `Ā`, after pruning.
    pub fn reach_sets(&self) -> (&[SymbolicState], &[SymbolicState]) {
        (&self.pos.reach, &self.neg.reach)
    }

    /// Total number of stored symbolic states.
    pub fn state_count(&self) -> usize {
        self.pos.reach.len() + self.neg.reach.len()
    }

    fn check_time(&self, t: i64) -> Result<(), Error> {
        match self.last {
            Some(p) if t < p => Err(Error::Ordering { previous: p, time: t }),
            _ => Ok(()),
        }
    }

    fn compute_verdict(&self, t: i64) -> Result<Verdict, Error> {
        let pos = self.pos.hits(t, self.bounds.jitter);
        let neg = self.neg.hits(t, self.bounds.jitter);
        match (pos, neg) {
            (false, false) => Err(Error::BothEmpty),
            (true, false) => Ok(Verdict::Satisfied),
            (false, true) => Ok(Verdict::Violated),
            (true, true) => Ok(Verdict::Inconclusive),
        }
    }

    /// Processes the observation of `symbol` at observer time `tau`.
    pub fn observe(&mut self, symbol: &str, tau: i64) -> Result<Verdict, Error> {
        let a = self.pos.tba.symbol(symbol).ok_or_else(|| Error::UnknownSymbol(symbol.into()))?;
        let na = self.neg.tba.symbol(symbol).ok_or_else(|| Error::UnknownSymbol(symbol.into()))?;
        self.check_time(tau)?;
        if self.last.is_none() && tau < self.bounds.low {
            return Err(Error::NotDObservation { time: tau, min_latency: self.bounds.low });
        }
        self.last = Some(tau);
        self.observations += 1;
        let pos = succ_delayed(&self.pos.tba, &self.pos.reach, a, tau, &self.bounds);
        let neg = succ_delayed(&self.neg.tba, &self.neg.reach, na, tau, &self.bounds);
        self.pos.store(pos);
        self.neg.store(neg);
        // Conclusive verdicts are final; the reach-sets keep following the
        // observation so that latency reports stay current.
        if !self.verdict.is_conclusive() {
            self.verdict = self.compute_verdict(tau)?;
        }
        Ok(self.verdict)
    }

    /// Verdict if nothing more is observed up to time `t`.
    pub fn verdict_at(&self, t: i64) -> Result<Verdict, Error> {
        self.check_time(t)?;
        if self.verdict.is_conclusive() {
            return Ok(self.verdict);
        }
        self.compute_verdict(t)
    }

    /// Consistent latencies at the time of the last observation.
    pub fn latency_report(&self) -> LatencyReport {
        self.latency_report_at(self.last.unwrap_or(0)).expect("last observation time is valid")
    }

    /// Consistent latencies if nothing more is observed up to time `t`.
    pub fn latency_report_at(&self, t: i64) -> Result<LatencyReport, Error> {
        self.check_time(t)?;
        Ok(LatencyReport {
            positive: self.pos.latencies(t, &self.bounds),
            negative: self.neg.latencies(t, &self.bounds),
            jitter: self.bounds.jitter,
        })
    }
}

/// Delay-free monitor: zones over the automaton clocks and `time` only.
pub struct ClassicMonitor {
    sides: [(Tba, Vec<Vec<Dbm>>, Vec<SymbolicState>); 2],
    last: Option<i64>,
    verdict: Verdict,
}

impl ClassicMonitor {
    pub fn new(spec: Tba, complement: Tba) -> Result<ClassicMonitor, Error> {
        if !spec.same_alphabet(&complement) {
            return Err(Error::AlphabetMismatch);
        }
        let side = |tba: Tba| {
            let dim = tba.dim_with(1);
            let emb = NonEmptyMap::compute(&tba).embedded(dim);
            let reach: Vec<SymbolicState> = tba
                .initial()
                .iter()
                .map(|&q| SymbolicState { location: q, zone: Dbm::zero(dim) })
                .filter(|s| emb[s.location].iter().any(|z| z.intersects(&s.zone)))
                .collect();
            (tba, emb, reach)
        };
        let mut m = ClassicMonitor { sides: [side(spec), side(complement)], last: None, verdict: Verdict::Inconclusive };
        m.verdict = m.compute(0)?;
        Ok(m)
    }

    fn compute(&self, t: i64) -> Result<Verdict, Error> {
        let hit = |(tba, emb, reach): &(Tba, Vec<Vec<Dbm>>, Vec<SymbolicState>)| {
            let time = tba.clock_count() + 1;
            let at: Vec<SymbolicState> = reach
                .iter()
                .map(|s| SymbolicState {
                    location: s.location,
                    zone: s.zone.clone().up().intersect(&[
                        Constraint::upper(time, Bound::le(t)),
                        Constraint::lower(time, t, false),
                    ]),
                })
                .filter(|s| !s.zone.is_empty())
                .collect();
            intersects_nonempty(&at, emb)
        };
        match (hit(&self.sides[0]), hit(&self.sides[1])) {
            (false, false) => Err(Error::BothEmpty),
            (true, false) => Ok(Verdict::Satisfied),
            (false, true) => Ok(Verdict::Violated),
            (true, true) => Ok(Verdict::Inconclusive),
        }
    }

    pub fn verdict(&self) -> Verdict {
        self.verdict
    }

    pub fn state_count(&self) -> usize {
        self.sides.iter().map(|s| s.2.len()).sum()
    }

    pub fn observe(&mut self, symbol: &str, tau: i64) -> Result<Verdict, Error> {
        let mut ids = [0; 2];
        for (k, side) in self.sides.iter().enumerate() {
            ids[k] = side.0.symbol(symbol).ok_or_else(|| Error::UnknownSymbol(symbol.into()))?;
        }
        if let Some(p) = self.last {
            if tau < p {
                return Err(Error::Ordering { previous: p, time: tau });
            }
        }
        self.last = Some(tau);
        if self.verdict.is_conclusive() {
            return Ok(self.verdict);
        }
        for (k, (tba, emb, reach)) in self.sides.iter_mut().enumerate() {
            let time = tba.clock_count() + 1;
            let mut next = tba.succ(reach, ids[k], tau, time);
            next.retain(|s| emb[s.location].iter().any(|z| z.intersects(&s.zone)));
            *reach = next;
        }
        self.verdict = self.compute(tau)?;
        Ok(self.verdict)
    }

    pub fn verdict_at(&self, t: i64) -> Result<Verdict, Error> {
        if let Some(p) = self.last {
            if t < p {
                return Err(Error::Ordering { previous: p, time: t });
            }
        }
        if self.verdict.is_conclusive() {
            return Ok(self.verdict);
        }
        self.compute(t)
    }
}
