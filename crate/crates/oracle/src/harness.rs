//! Random small instances, run through the zone engine and the enumeration
//! oracle side by side.

use delaymon_core::{
    Bound, DelayBounds, IntervalSet, IoDelayBounds, Monitor, Tba, Tester, Verdict,
};
use rand::Rng;

use crate::enumerate::{monitor_grid, tester_grid, IoBounds};
use crate::random::{random_pair, Shape};

/// Whether `num / den` lies in `set`.
pub fn member(set: &IntervalSet, num: i64, den: i64) -> bool {
    let admits = |b: Bound, v: i64| match b.value() {
        None => true,
        Some(c) if b.is_strict() => v < c * den,
        Some(c) => v <= c * den,
    };
    set.parts().iter().any(|p| admits(p.upper_bound(), num) && admits(p.lower_bound(), -num))
}

/// A property, its complement, delay bounds `(low, high, jitter)` and an
/// observation, all on the integer grid.
#[derive(Clone, Debug)]
pub struct MonitorCase {
    pub spec: Tba,
    pub complement: Tba,
    pub bounds: (i64, i64, i64),
    pub events: Vec<(&'static str, i64)>,
    /// Time of the final verdict query after the last event.
    pub horizon: i64,
}

/// At most two clocks, constants at most 5, at most four events, bounds at most 3.
pub fn monitor_case<R: Rng>(rng: &mut R) -> MonitorCase {
    let shape = Shape {
        locations: rng.gen_range(1..=3),
        clocks: rng.gen_range(0..=2),
        max_constant: rng.gen_range(0..=5),
        io: false,
    };
    let (spec, complement) = random_pair(rng, &shape);
    let low = rng.gen_range(0..=3);
    let high = rng.gen_range(low..=3);
    let jitter = rng.gen_range(0..=3);
    let mut t = low;
    let mut events = Vec::new();
    for _ in 0..rng.gen_range(0..=4) {
        t += rng.gen_range(0..=3);
        events.push((if rng.gen_bool(0.5) { "a" } else { "b" }, t));
    }
    MonitorCase { spec, complement, bounds: (low, high, jitter), events, horizon: t + 2 }
}

/// Runs the monitor over every prefix and at the horizon. Verdicts and
/// latency sets must match the oracle everywhere. Returns the oracle verdicts.
pub fn check_monitor(case: &MonitorCase) -> Result<Vec<Verdict>, String> {
    let (low, high, jitter) = case.bounds;
    let bounds = DelayBounds::new(low, Some(high), jitter).map_err(|e| e.to_string())?;
    let mut mon = Monitor::new(case.spec.clone(), case.complement.clone(), bounds).map_err(|e| e.to_string())?;
    let m = case.events.len();
    let mut seen = Vec::new();
    for i in 0..=m + 1 {
        let (now, got) = if i == 0 {
            (0, mon.verdict())
        } else if i <= m {
            let (s, tau) = case.events[i - 1];
            (tau, mon.observe(s, tau).map_err(|e| e.to_string())?)
        } else {
            (case.horizon, mon.verdict_at(case.horizon).map_err(|e| e.to_string())?)
        };
        let grid = monitor_grid(&case.spec, &case.complement, case.bounds, &case.events[..i.min(m)], now);
        let want = grid.verdict();
        if got != want {
            return Err(format!("prefix {i}: monitor {got:?}, oracle {want:?}\n{case:?}"));
        }
        seen.push(want);
        let report = mon.latency_report_at(now).map_err(|e| e.to_string())?;
        for (d, pos, neg) in &grid.points {
            if member(&report.positive, d[0], grid.scale) != *pos || member(&report.negative, d[0], grid.scale) != *neg {
                return Err(format!(
                    "prefix {i}: latency {}/{} oracle ({pos}, {neg}), report {report:?}\n{case:?}",
                    d[0], grid.scale
                ));
            }
        }
    }
    Ok(seen)
}

/// As [`MonitorCase`] for testing, with alternating events `i`, `o`.
#[derive(Clone, Debug)]
pub struct TesterCase {
    pub spec: Tba,
    pub complement: Tba,
    pub bounds: IoBounds,
    pub events: Vec<(&'static str, i64)>,
    pub horizon: i64,
}

/// At most two clocks, constants at most 5, at most four events, bounds at most 3.
pub fn tester_case<R: Rng>(rng: &mut R) -> TesterCase {
    let shape = Shape {
        locations: rng.gen_range(1..=3),
        clocks: rng.gen_range(0..=2),
        max_constant: rng.gen_range(0..=5),
        io: true,
    };
    let (spec, complement) = random_pair(rng, &shape);
    let channel = |rng: &mut R| {
        let low = rng.gen_range(0..=3);
        (low, rng.gen_range(low..=3), rng.gen_range(0..=3))
    };
    let (input, output) = (channel(rng), channel(rng));
    let mut t = 0;
    let mut events = Vec::new();
    for j in 0..rng.gen_range(0..=4) {
        if j % 2 == 1 {
            t += input.0 + output.0 + rng.gen_range(0..=2);
            events.push(("o", t));
        } else {
            t += rng.gen_range(0..=2);
            events.push(("i", t));
        }
    }
    TesterCase { spec, complement, bounds: (input, output), events, horizon: t + 1 }
}

fn io_bounds(b: IoBounds) -> Result<IoDelayBounds, String> {
    let ((li, ui, ei), (lo, uo, eo)) = b;
    let input = DelayBounds::new(li, Some(ui), ei).map_err(|e| e.to_string())?;
    let output = DelayBounds::new(lo, Some(uo), eo).map_err(|e| e.to_string())?;
    IoDelayBounds::new(input, output).map_err(|e| e.to_string())
}

/// As [`check_monitor`]; latency sets are compared as projections of the
/// oracle's two-dimensional grid onto each channel.
pub fn check_tester(case: &TesterCase) -> Result<Vec<Verdict>, String> {
    let ((li, ui, _), (lo, uo, _)) = case.bounds;
    let mut tester = Tester::new(&case.spec, &case.complement, io_bounds(case.bounds)?).map_err(|e| e.to_string())?;
    let m = case.events.len();
    let mut seen = Vec::new();
    for i in 0..=m + 1 {
        let (now, got) = if i == 0 {
            (0, tester.verdict())
        } else if i <= m {
            let (s, tau) = case.events[i - 1];
            (tau, tester.observe(s, tau).map_err(|e| e.to_string())?)
        } else {
            (case.horizon, tester.verdict_at(case.horizon).map_err(|e| e.to_string())?)
        };
        let grid = tester_grid(&case.spec, &case.complement, case.bounds, &case.events[..i.min(m)], now);
        let want = grid.verdict();
        if got != want {
            return Err(format!("prefix {i}: tester {got:?}, oracle {want:?}\n{case:?}"));
        }
        seen.push(want);
        let report = tester.latency_report_at(now).map_err(|e| e.to_string())?;
        let n = grid.scale;
        for (side, polarity) in [(&report.positive, true), (&report.negative, false)] {
            let hit = |axis: usize, v: i64| {
                grid.points.iter().any(|(d, p, q)| d[axis] == v && if polarity { *p } else { *q })
            };
            for (axis, set, (a, b)) in [(0, &side.input, (li, ui)), (1, &side.output, (lo, uo))] {
                for v in a * n..=b * n {
                    if member(set, v, n) != hit(axis, v) {
                        return Err(format!(
                            "prefix {i}: channel {axis} latency {v}/{n} polarity {polarity}, report {report:?}\n{case:?}"
                        ));
                    }
                }
            }
        }
    }
    Ok(seen)
}
