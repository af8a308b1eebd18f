//! The event loop: read events, feed the engine, print blocks and CSV rows.

use std::io::{BufRead, Write};
use std::time::{Duration, Instant};

use delaymon_core::{Error, Verdict};
use thiserror::Error as ThisError;

use crate::engine::{block, csv_row, Engine, CSV_HEADER};
use crate::trace::{parse_line, TraceError, TraceEvent};

#[derive(Debug, ThisError)]
pub enum RunError {
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error("trace line {line}")]
    Engine { line: usize, source: Error },
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Options {
    pub scale: i64,
    pub keep_going: bool,
    /// Time each event and print a summary instead of per-event blocks.
    pub benchmark: bool,
}

/// Per-event response times and reach-set sizes.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Stats {
    pub events: usize,
    pub max_response: Duration,
    pub total_response: Duration,
    pub max_states: usize,
}

impl Stats {
    pub fn mean_response(&self) -> Duration {
        if self.events == 0 {
            Duration::ZERO
        } else {
            self.total_response / self.events as u32
        }
    }

    pub fn summary(&self) -> String {
        format!(
            "Events: {}\nMax response time (us): {}\nMean response time (us): {}\nMax symbolic states: {}\n",
            self.events,
            self.max_response.as_micros(),
            self.mean_response().as_micros(),
            self.max_states
        )
    }
}

/// Source of events: a line reader or an already delayed trace.
pub enum Events<R> {
    Lines(R),
    Given(Vec<TraceEvent>),
}

impl<R: BufRead> Events<R> {
    fn next(&mut self, scale: i64, line: &mut usize) -> Result<Option<TraceEvent>, RunError> {
        match self {
            Events::Given(v) => {
                if *line >= v.len() {
                    return Ok(None);
                }
                *line += 1;
                Ok(Some(v[*line - 1].clone()))
            }
            Events::Lines(r) => loop {
                let mut buf = String::new();
                if r.read_line(&mut buf)? == 0 {
                    return Ok(None);
                }
                *line += 1;
                if let Some(e) = parse_line(&buf, scale, *line)? {
                    return Ok(Some(e));
                }
            },
        }
    }
}

/// Runs to the end of the stream, or to the first conclusive verdict unless
/// `keep_going` is set. Returns the last verdict.
pub fn run<R: BufRead, W: Write>(
    engine: &mut Engine,
    mut events: Events<R>,
    out: &mut W,
    mut csv: Option<&mut dyn Write>,
    opts: Options,
) -> Result<(Verdict, Stats), RunError> {
    let mut stats = Stats::default();
    stats.max_states = engine.state_count();
    if let Some(c) = csv.as_deref_mut() {
        writeln!(c, "{CSV_HEADER}")?;
    }
    let mut line = 0;
    let mut verdict = engine.verdict();
    while let Some(e) = events.next(opts.scale, &mut line)? {
        let start = Instant::now();
        verdict = engine.observe(&e.symbol, e.time).map_err(|source| RunError::Engine { line, source })?;
        let took = start.elapsed();
        stats.events += 1;
        stats.max_response = stats.max_response.max(took);
        stats.total_response += took;
        stats.max_states = stats.max_states.max(engine.state_count());
        let report = engine.report();
        if let Some(c) = csv.as_deref_mut() {
            writeln!(c, "{}", csv_row(stats.events, &report))?;
        }
        if !opts.benchmark {
            let sep = if stats.events > 1 { "\n" } else { "" };
            write!(out, "{sep}Input: @{} {}\n\n{}", e.time, e.symbol, block(verdict, &report))?;
            out.flush()?;
        }
        if verdict.is_conclusive() && !opts.keep_going {
            break;
        }
    }
    if stats.events == 0 && !opts.benchmark {
        write!(out, "{}", block(verdict, &engine.report()))?;
    }
    if opts.benchmark {
        write!(out, "Verdict: {verdict}\n{}", stats.summary())?;
    }
    Ok((verdict, stats))
}
