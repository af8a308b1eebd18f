//! Synthetic channel delays for experiments: turns a system-side trace into
//! what the observer would see.

use delaymon_core::automata::parse_scaled;
use delaymon_core::{DelayBounds, Direction, IoDelayBounds, Tba};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::trace::TraceEvent;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InjectError {
    #[error("malformed --inject value `{0}`; expected e.g. `din:4.5,dout:6.5,seed:7`")]
    Syntax(String),
    #[error("assigned {channel} latency {value} lies outside the declared bounds")]
    OutOfBounds { channel: &'static str, value: i64 },
    #[error("missing `{0}` in --inject")]
    Missing(&'static str),
    #[error("event {index} would be observed out of order; channels never reorder events")]
    Overtaking { index: usize },
    #[error("input {index} would have to be sent before time 0")]
    BeforeStart { index: usize },
    #[error("symbol `{0}` is neither an input nor an output")]
    Undirected(String),
}

/// Assigned latencies and the generator seed, all scaled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Injection {
    pub din: Option<i64>,
    pub dout: Option<i64>,
    pub seed: u64,
}

impl Injection {
    pub fn parse(text: &str, scale: i64) -> Result<Injection, InjectError> {
        let bad = || InjectError::Syntax(text.to_string());
        let mut inj = Injection { din: None, dout: None, seed: 0 };
        for item in text.split(',') {
            let (key, value) = item.trim().split_once(':').ok_or_else(bad)?;
            match key.trim() {
                "din" => inj.din = Some(parse_scaled(value.trim(), scale).ok_or_else(bad)?),
                "dout" => inj.dout = Some(parse_scaled(value.trim(), scale).ok_or_else(bad)?),
                "seed" => inj.seed = value.trim().parse().map_err(|_| bad())?,
                _ => return Err(bad()),
            }
        }
        Ok(inj)
    }
}

fn check(channel: &'static str, value: i64, b: &DelayBounds) -> Result<(), InjectError> {
    if b.latency_interval().contains(value) {
        Ok(())
    } else {
        Err(InjectError::OutOfBounds { channel, value })
    }
}

fn ordered(events: &[TraceEvent]) -> Result<(), InjectError> {
    match events.windows(2).position(|w| w[1].time < w[0].time) {
        Some(k) => Err(InjectError::Overtaking { index: k + 2 }),
        None => Ok(()),
    }
}

/// Every event is an output: observed at `τ + δ + j` with `j` uniform on `[0, ε]`.
pub fn delay_outputs(truth: &[TraceEvent], b: &DelayBounds, inj: &Injection) -> Result<Vec<TraceEvent>, InjectError> {
    let d = inj.dout.ok_or(InjectError::Missing("dout"))?;
    check("output", d, b)?;
    let mut rng = ChaCha8Rng::seed_from_u64(inj.seed);
    let out: Vec<TraceEvent> = truth
        .iter()
        .map(|e| TraceEvent { time: e.time + d + rng.gen_range(0..=b.jitter), symbol: e.symbol.clone() })
        .collect();
    ordered(&out)?;
    Ok(out)
}

/// Inputs are sent `δ_I + j` before they reach the system; outputs are
/// observed `δ_O + j` after the system emits them.
pub fn delay_io(
    truth: &[TraceEvent],
    tba: &Tba,
    b: &IoDelayBounds,
    inj: &Injection,
) -> Result<Vec<TraceEvent>, InjectError> {
    let din = inj.din.ok_or(InjectError::Missing("din"))?;
    let dout = inj.dout.ok_or(InjectError::Missing("dout"))?;
    check("input", din, &b.input)?;
    check("output", dout, &b.output)?;
    if !b.round_trip_interval().contains(din + dout) {
        return Err(InjectError::OutOfBounds { channel: "round-trip", value: din + dout });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(inj.seed);
    let mut out = Vec::with_capacity(truth.len());
    for (k, e) in truth.iter().enumerate() {
        let dir = tba.symbol(&e.symbol).and_then(|a| tba.direction(a));
        let time = match dir {
            Some(Direction::Input) => {
                let t = e.time - din - rng.gen_range(0..=b.input.jitter);
                if t < 0 {
                    return Err(InjectError::BeforeStart { index: k + 1 });
                }
                t
            }
            Some(Direction::Output) => e.time + dout + rng.gen_range(0..=b.output.jitter),
            None => return Err(InjectError::Undirected(e.symbol.clone())),
        };
        out.push(TraceEvent { time, symbol: e.symbol.clone() });
    }
    ordered(&out)?;
    Ok(out)
}
