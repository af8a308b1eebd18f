//! Online testing with delayed input and output channels.
//!
//! Inputs are sent by the tester and reach the system `δ_I` (plus jitter)
//! later; outputs leave the system and reach the tester `δ_O` (plus jitter)
//! later. Zones carry the automaton clocks plus `time` (system time of the
//! latest event), `etime_I` and `etime_O`, with `time - etime_I = δ_I` and
//! `etime_O - time = δ_O` for the whole run. Words are restricted to
//! input/output alternation starting with an input.

use alloc::vec::Vec;

use crate::automata::{insert_pruned, Direction, SymbolId, SymbolicState, Tba};
use crate::bound::Bound;
use crate::dbm::{Clock, Constraint, Dbm};
use crate::error::Error;
use crate::interval::{Interval, IntervalSet};
use crate::liveness::{intersects_nonempty, NonEmptyMap};
use crate::monitor::{DelayBounds, Verdict};

/// Delay bounds for both channels, and optional bounds on the round trip
/// `δ_I + δ_O`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IoDelayBounds {
    pub input: DelayBounds,
    pub output: DelayBounds,
    pub round_trip: Option<(i64, Option<i64>)>,
}

impl IoDelayBounds {
    pub fn new(input: DelayBounds, output: DelayBounds) -> Result<IoDelayBounds, Error> {
        let b = IoDelayBounds { input, output, round_trip: None };
        b.validate()?;
        Ok(b)
    }

    pub const fn zero() -> IoDelayBounds {
        IoDelayBounds { input: DelayBounds::zero(), output: DelayBounds::zero(), round_trip: None }
    }

    /// Adds `δ_I + δ_O ∈ [low, high]`.
    pub fn with_round_trip(mut self, low: i64, high: Option<i64>) -> Result<IoDelayBounds, Error> {
        self.round_trip = Some((low, high));
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), Error> {
        self.input.validate()?;
        self.output.validate()?;
        if let Some((low, high)) = self.round_trip {
            if low < 0 || matches!(high, Some(h) if h < low) {
                return Err(Error::Bounds("invalid round-trip bounds".into()));
            }
        }
        Ok(())
    }

    /// Smallest possible gap between sending an input and observing the
    /// output that answers it.
    pub fn min_gap(&self) -> i64 {
        let sum = self.input.low + self.output.low;
        match self.round_trip {
            Some((low, _)) => sum.max(low),
            None => sum,
        }
    }

    /// `[ℓ_I + ℓ_O, u_I + u_O]`, narrowed by the round-trip bounds.
    pub fn round_trip_interval(&self) -> Interval {
        let high = match (self.input.high, self.output.high) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        let sum = match high {
            Some(h) => Interval::closed(self.input.low + self.output.low, h),
            None => Interval::closed_open(self.input.low + self.output.low, None),
        };
        match self.round_trip {
            Some((low, Some(h))) => sum.intersect(&Interval::closed(low, h)),
            Some((low, None)) => sum.intersect(&Interval::closed_open(low, None)),
            None => sum,
        }
    }
}

/// Consistent input, output and round-trip latencies for one verdict side.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IoLatencies {
    pub input: IntervalSet,
    pub output: IntervalSet,
    pub round_trip: IntervalSet,
}

/// Latencies consistent with satisfaction and with violation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IoLatencyReport {
    pub positive: IoLatencies,
    pub negative: IoLatencies,
}

/// Clock indices of the auxiliary clocks for an automaton with `k` clocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IoLayout {
    pub dim: usize,
    pub time: Clock,
    pub etime_in: Clock,
    pub etime_out: Clock,
}

impl IoLayout {
    pub fn for_automaton(tba: &Tba) -> IoLayout {
        let k = tba.clock_count();
        IoLayout { dim: k + 4, time: k + 1, etime_in: k + 2, etime_out: k + 3 }
    }
}

/// `Z₀ᴵᴼ`: automaton clocks and `time` at 0, `time - etime_I ∈ [ℓ_I, u_I]`,
/// `etime_O - time ∈ [ℓ_O, u_O]`. `etime_I` is left negative instead of
/// shifting the bounds.
pub fn initial_zone_io(tba: &Tba, b: &IoDelayBounds) -> Dbm {
    let l = IoLayout::for_automaton(tba);
    let mut z = Dbm::zero(l.dim);
    z = z.unbound(l.etime_in).expect("etime_I is not the reference clock");
    z = z.unbound(l.etime_out).expect("etime_O is not the reference clock");
    let mut cs = Vec::from([
        Constraint::new(l.time, l.etime_in, b.input.high_bound()),
        Constraint::new(l.etime_in, l.time, Bound::le(-b.input.low)),
        Constraint::new(l.etime_out, l.time, b.output.high_bound()),
        Constraint::new(l.time, l.etime_out, Bound::le(-b.output.low)),
    ]);
    if let Some((low, high)) = b.round_trip {
        let hb = high.map_or(Bound::INFINITY, Bound::le);
        cs.push(Constraint::new(l.etime_out, l.etime_in, hb));
        cs.push(Constraint::new(l.etime_in, l.etime_out, Bound::le(-low)));
    }
    z.intersect(&cs)
}

/// `Succ_IO`: symbolic successors under `a` observed at `tau`, with
/// `etime_I ∈ [tau, tau + ε_I]` for inputs and `etime_O ∈ [tau - ε_O, tau]`
/// for outputs, inclusion-pruned.
pub fn succ_io(
    tba: &Tba,
    states: &[SymbolicState],
    a: SymbolId,
    tau: i64,
    b: &IoDelayBounds,
) -> Vec<SymbolicState> {
    let l = IoLayout::for_automaton(tba);
    let window = match tba.direction(a) {
        Some(Direction::Input) => [
            Constraint::lower(l.etime_in, tau, false),
            Constraint::upper(l.etime_in, Bound::le(tau + b.input.jitter)),
        ],
        _ => [
            Constraint::lower(l.etime_out, tau - b.output.jitter, false),
            Constraint::upper(l.etime_out, Bound::le(tau)),
        ],
    };
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

/// Moves the end of a ground truth to `max(t, time)`.
fn extend_from(zone: &Dbm, time: Clock, t: i64) -> [Dbm; 2] {
    let stay = zone.clone().constrain(Constraint::lower(time, t, false));
    let moved = zone
        .clone()
        .up()
        .intersect(&[Constraint::upper(time, Bound::le(t)), Constraint::lower(time, t, false)]);
    [stay, moved]
}

struct Side {
    tba: Tba,
    nonempty: NonEmptyMap,
    embedded: Vec<Vec<Dbm>>,
    layout: IoLayout,
    outputs: Vec<SymbolId>,
    reach: Vec<SymbolicState>,
    /// Keep inactive clocks instead of freeing them.
    exact: bool,
}

impl Side {
    fn new(tba: &Tba, b: &IoDelayBounds) -> Result<Side, Error> {
        let tba = tba.io_alternation_product()?;
        let nonempty = NonEmptyMap::compute(&tba);
        let layout = IoLayout::for_automaton(&tba);
        let embedded = nonempty.embedded(layout.dim);
        let outputs = (0..tba.alphabet().len())
            .filter(|&a| tba.direction(a) == Some(Direction::Output))
            .collect();
        let mut s = Side { tba, nonempty, embedded, layout, outputs, reach: Vec::new(), exact: false };
        s.restart(b);
        Ok(s)
    }

    fn restart(&mut self, b: &IoDelayBounds) {
        let z = initial_zone_io(&self.tba, b);
        let init = self.tba.initial().iter().map(|&q| SymbolicState { location: q, zone: z.clone() }).collect();
        self.store(init);
    }

    /// As for the monitor: free inactive clocks unless exact, then drop
    /// states outside the non-empty language set.
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

    /// Reach-set at observer time `t`: every consistent ground truth, moved
    /// to the point where its continuation starts.
    fn at(&self, t: i64, pending_input: Option<i64>, b: &IoDelayBounds) -> Vec<SymbolicState> {
        let l = self.layout;
        let mut out = Vec::new();
        let mut push = |location, z: Dbm| {
            if !z.is_empty() {
                out.push(SymbolicState { location, zone: z });
            }
        };
        for s in &self.reach {
            let Some(sent) = pending_input else {
                // The last event was observed at the tester, so it happened
                // by `t`; continuations start at `t`.
                let z = s.zone.clone().up().intersect(&[
                    Constraint::upper(l.time, Bound::le(t)),
                    Constraint::lower(l.time, t, false),
                ]);
                push(s.location, z);
                continue;
            };
            for z in extend_from(&s.zone, l.time, t) {
                push(s.location, z);
            }
            // One answer may already be on its way: not yet observed, and no
            // later than `max(t, last input arrival bound)`.
            for &o in &self.outputs {
                for n in self.tba.post(s, o) {
                    let pending = n.zone.constrain(Constraint::lower(l.etime_out, t - b.output.jitter, false));
                    let early = pending.clone().constrain(Constraint::upper(l.time, Bound::le(t)));
                    let late = pending.constrain(Constraint::upper(l.etime_in, Bound::le(sent + b.input.jitter)));
                    for z in [early, late] {
                        for w in extend_from(&z, l.time, t) {
                            push(n.location, w);
                        }
                    }
                }
            }
        }
        out
    }

    fn latencies(&self, states: &[SymbolicState], b: &IoDelayBounds) -> IoLatencies {
        let l = self.layout;
        let mut r = IoLatencies::default();
        for s in states {
            for ne in &self.embedded[s.location] {
                let z = s.zone.clone().intersect_zone(ne);
                r.input.insert(z.difference_bounds(l.time, l.etime_in));
                r.output.insert(z.difference_bounds(l.etime_out, l.time));
                r.round_trip.insert(z.difference_bounds(l.etime_out, l.etime_in));
            }
        }
        IoLatencies {
            input: r.input.intersect(&b.input.latency_interval()),
            output: r.output.intersect(&b.output.latency_interval()),
            round_trip: r.round_trip.intersect(&b.round_trip_interval()),
        }
    }
}

/// Tester for a property `A` and its complement `Ā` over partitioned
/// alphabets, under input and output delay bounds.
pub struct Tester {
    pos: Side,
    neg: Side,
    bounds: IoDelayBounds,
    last: Option<i64>,
    last_input: Option<i64>,
    expect_output: bool,
    seen_output: bool,
    verdict: Verdict,
    observations: usize,
}

impl Tester {
    pub fn new(spec: &Tba, complement: &Tba, bounds: IoDelayBounds) -> Result<Tester, Error> {
        bounds.validate()?;
        if !spec.same_alphabet(complement) {
            return Err(Error::AlphabetMismatch);
        }
        for a in spec.alphabet() {
            let (x, y) = (spec.symbol(a), complement.symbol(a));
            if spec.direction(x.unwrap_or(0)) != complement.direction(y.unwrap_or(0)) {
                return Err(Error::AlphabetMismatch);
            }
        }
        let pos = Side::new(spec, &bounds)?;
        let neg = Side::new(complement, &bounds)?;
        let mut t = Tester {
            pos,
            neg,
            bounds,
            last: None,
            last_input: None,
            expect_output: false,
            seen_output: false,
            verdict: Verdict::Inconclusive,
            observations: 0,
        };
        t.verdict = t.compute_verdict(0)?;
        Ok(t)
    }

    /// Stores zones exactly as computed; see [`crate::Monitor::keep_inactive_clocks`].
    pub fn keep_inactive_clocks(mut self) -> Tester {
        self.pos.exact = true;
        self.neg.exact = true;
        if self.observations == 0 {
            self.pos.restart(&self.bounds);
            self.neg.restart(&self.bounds);
        }
        self
    }

    pub fn bounds(&self) -> &IoDelayBounds {
        &self.bounds
    }

    pub fn verdict(&self) -> Verdict {
        self.verdict
    }

    pub fn observations(&self) -> usize {
        self.observations
    }

    pub fn last_observation(&self) -> Option<i64> {
        self.last
    }

    /// The alternation products the tester runs on.
    pub fn products(&self) -> (&Tba, &Tba) {
        (&self.pos.tba, &self.neg.tba)
    }

    pub fn nonempty_maps(&self) -> (&NonEmptyMap, &NonEmptyMap) {
        (&self.pos.nonempty, &self.neg.nonempty)
    }

    pub fn reach_sets(&self) -> (&[SymbolicState], &[SymbolicState]) {
        (&self.pos.reach, &self.neg.reach)
    }

    pub fn state_count(&self) -> usize {
        self.pos.reach.len() + self.neg.reach.len()
    }

    fn pending_input(&self) -> Option<i64> {
        if self.expect_output {
            self.last_input
        } else {
            None
        }
    }

    fn check_time(&self, t: i64) -> Result<(), Error> {
        match self.last {
            Some(p) if t < p => Err(Error::Ordering { previous: p, time: t }),
            _ => Ok(()),
        }
    }

    fn compute_verdict(&self, t: i64) -> Result<Verdict, Error> {
        let pending = self.pending_input();
        let pos = intersects_nonempty(&self.pos.at(t, pending, &self.bounds), &self.pos.embedded);
        let neg = intersects_nonempty(&self.neg.at(t, pending, &self.bounds), &self.neg.embedded);
        match (pos, neg) {
            (false, false) => Err(Error::BothEmpty),
            (true, false) => Ok(Verdict::Satisfied),
            (false, true) => Ok(Verdict::Violated),
            (true, true) => Ok(Verdict::Inconclusive),
        }
    }

    /// Records `symbol` sent (input) or received (output) at tester time `tau`.
    pub fn observe(&mut self, symbol: &str, tau: i64) -> Result<Verdict, Error> {
        let a = self.pos.tba.symbol(symbol).ok_or_else(|| Error::UnknownSymbol(symbol.into()))?;
        let na = self.neg.tba.symbol(symbol).ok_or_else(|| Error::UnknownSymbol(symbol.into()))?;
        self.check_time(tau)?;
        let dir = self.pos.tba.direction(a).ok_or(Error::MissingPartition)?;
        match (dir, self.expect_output) {
            (Direction::Input, true) => {
                return Err(Error::Alternation { expected: "output", symbol: symbol.into() })
            }
            (Direction::Output, false) => {
                return Err(Error::Alternation { expected: "input", symbol: symbol.into() })
            }
            _ => {}
        }
        if dir == Direction::Output {
            if !self.seen_output && tau < self.bounds.output.low {
                return Err(Error::NotDObservation { time: tau, min_latency: self.bounds.output.low });
            }
            let input = self.last_input.expect("an output always follows an input");
            let gap = self.bounds.min_gap();
            if tau - input < gap {
                return Err(Error::Gap { input, time: tau, min_gap: gap });
            }
        }
        self.last = Some(tau);
        self.observations += 1;
        match dir {
            Direction::Input => {
                self.last_input = Some(tau);
                self.expect_output = true;
            }
            Direction::Output => {
                self.seen_output = true;
                self.expect_output = false;
            }
        }
        let pos = succ_io(&self.pos.tba, &self.pos.reach, a, tau, &self.bounds);
        let neg = succ_io(&self.neg.tba, &self.neg.reach, na, tau, &self.bounds);
        self.pos.store(pos);
        self.neg.store(neg);
        // Conclusive verdicts are final; the reach-sets keep following the
        // observation so that latency reports stay current.
        if !self.verdict.is_conclusive() {
            self.verdict = self.compute_verdict(tau)?;
        }
        Ok(self.verdict)
    }

    /// Verdict if nothing more is sent or received up to time `t`.
    pub fn verdict_at(&self, t: i64) -> Result<Verdict, Error> {
        self.check_time(t)?;
        if self.verdict.is_conclusive() {
            return Ok(self.verdict);
        }
        self.compute_verdict(t)
    }

    /// Reach-sets at time `t` over both products, before intersecting with
    /// the non-empty states.
    pub fn finalize_at(&self, t: i64) -> Result<(Vec<SymbolicState>, Vec<SymbolicState>), Error> {
        self.check_time(t)?;
        let pending = self.pending_input();
        Ok((self.pos.at(t, pending, &self.bounds), self.neg.at(t, pending, &self.bounds)))
    }

    pub fn latency_report(&self) -> IoLatencyReport {
        self.latency_report_at(self.last.unwrap_or(0)).expect("last observation time is valid")
    }

    pub fn latency_report_at(&self, t: i64) -> Result<IoLatencyReport, Error> {
        let (p, n) = self.finalize_at(t)?;
        Ok(IoLatencyReport {
            positive: self.pos.latencies(&p, &self.bounds),
            negative: self.neg.latencies(&n, &self.bounds),
        })
    }
}
