//! One interface over the three monitoring modes, and the text and CSV
//! renderings of their latency reports.

use std::fmt::Write as _;

use delaymon_core::monitor::ClassicMonitor;
use delaymon_core::{Endpoint, Error, IntervalSet, IoDelayBounds, IoLatencyReport, LatencyReport, Monitor, Tester, Verdict};

pub enum Engine {
    Classic(ClassicMonitor),
    Delayed(Monitor),
    Test(Box<Tester>),
}

/// What a mode can say about consistent latencies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Report {
    None,
    Delayed(LatencyReport),
    Test(IoLatencyReport, IoDelayBounds),
}

impl Engine {
    pub fn observe(&mut self, symbol: &str, tau: i64) -> Result<Verdict, Error> {
        match self {
            Engine::Classic(m) => m.observe(symbol, tau),
            Engine::Delayed(m) => m.observe(symbol, tau),
            Engine::Test(t) => t.observe(symbol, tau),
        }
    }

    pub fn verdict(&self) -> Verdict {
        match self {
            Engine::Classic(m) => m.verdict(),
            Engine::Delayed(m) => m.verdict(),
            Engine::Test(t) => t.verdict(),
        }
    }

    pub fn state_count(&self) -> usize {
        match self {
            Engine::Classic(m) => m.state_count(),
            Engine::Delayed(m) => m.state_count(),
            Engine::Test(t) => t.state_count(),
        }
    }

    pub fn report(&self) -> Report {
        match self {
            Engine::Classic(_) => Report::None,
            Engine::Delayed(m) => Report::Delayed(m.latency_report()),
            Engine::Test(t) => Report::Test(t.latency_report(), *t.bounds()),
        }
    }
}

/// The block printed after each event.
pub fn block(verdict: Verdict, report: &Report) -> String {
    let mut s = format!("Verdict: {verdict}\n");
    match report {
        Report::None => {}
        Report::Delayed(r) => {
            for (label, set) in [("Positive", &r.positive), ("Negative", &r.negative)] {
                let _ = write!(s, "{label}:\nConsistent latencies: {set}\nJitter bound: {}\n", r.jitter);
            }
        }
        Report::Test(r, b) => {
            for (label, side) in [("Positive", &r.positive), ("Negative", &r.negative)] {
                let _ = write!(
                    s,
                    "{label}:\nConsistent input latencies: {}\nConsistent output latencies: {}\n\
                     Consistent round-trip latencies: {}\nJitter bound: in {}, out {}\n",
                    side.input, side.output, side.round_trip, b.input.jitter, b.output.jitter
                );
            }
        }
    }
    s
}

pub const CSV_HEADER: &str = "obs,pos_in_low,pos_in_high,pos_out_low,pos_out_high,pos_sum_low,pos_sum_high,\
neg_in_low,neg_in_high,neg_out_low,neg_out_high,neg_sum_low,neg_sum_high";

fn endpoint(e: Endpoint) -> String {
    match e {
        Endpoint::Infinite => "inf".to_string(),
        Endpoint::Finite { value, open: true } => format!("{value}s"),
        Endpoint::Finite { value, open: false } => value.to_string(),
    }
}

/// Lower and upper end of the hull; both blank for the empty set.
fn columns(set: Option<&IntervalSet>) -> [String; 2] {
    match set {
        Some(s) if !s.is_empty() => {
            let h = s.hull();
            [endpoint(h.low()), endpoint(h.high())]
        }
        _ => [String::new(), String::new()],
    }
}

/// One CSV row for observation `obs`.
pub fn csv_row(obs: usize, report: &Report) -> String {
    let mut cells = vec![obs.to_string()];
    let mut side = |input: Option<&IntervalSet>, output: Option<&IntervalSet>, sum: Option<&IntervalSet>| {
        for set in [input, output, sum] {
            cells.extend(columns(set));
        }
    };
    match report {
        Report::None => {
            side(None, None, None);
            side(None, None, None);
        }
        Report::Delayed(r) => {
            side(None, Some(&r.positive), None);
            side(None, Some(&r.negative), None);
        }
        Report::Test(r, _) => {
            side(Some(&r.positive.input), Some(&r.positive.output), Some(&r.positive.round_trip));
            side(Some(&r.negative.input), Some(&r.negative.output), Some(&r.negative.round_trip));
        }
    }
    cells.join(",")
}
