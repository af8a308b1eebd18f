use std::fs::File;
use std::io::{self, BufReader, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, ValueEnum};
use delaymon::inject::{delay_io, delay_outputs, Injection};
use delaymon::trace;
use delaymon::{run, Engine, Events, Options};
use delaymon_core::automata::parse_scaled;
use delaymon_core::monitor::ClassicMonitor;
use delaymon_core::{DelayBounds, IoDelayBounds, Monitor, Tba, Tester, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Events are seen exactly when they happen.
    Classic,
    /// Every event is an output seen through one delayed channel.
    Monitor,
    /// Inputs reach the system and outputs reach the tester through separate channels.
    Test,
}

/// Monitor a timed property over events observed through delayed channels.
///
/// Exit status: 0 satisfied, 1 violated, 2 inconclusive, 3 error.
#[derive(Debug, Parser)]
#[command(name = "delaymon", version)]
struct Cli {
    /// Timed Büchi automaton for the property.
    #[arg(long, value_name = "FILE")]
    spec: PathBuf,
    /// Timed Büchi automaton for its complement. It is not checked to be one.
    #[arg(long, value_name = "FILE")]
    complement: PathBuf,
    #[arg(long, value_enum, default_value = "monitor")]
    mode: Mode,
    /// Integer time units per unit in the trace and the bounds.
    #[arg(long, default_value_t = 10)]
    scale: i64,
    /// Latency bounds in monitor mode; the upper bound may be `inf`.
    #[arg(long, num_args = 2, value_names = ["L", "U"])]
    latency: Option<Vec<String>>,
    /// Jitter bound in monitor mode.
    #[arg(long, value_name = "E")]
    jitter: Option<String>,
    /// Input latency bounds in test mode.
    #[arg(long, num_args = 2, value_names = ["L", "U"])]
    in_latency: Option<Vec<String>>,
    #[arg(long, value_name = "E")]
    in_jitter: Option<String>,
    /// Output latency bounds in test mode.
    #[arg(long, num_args = 2, value_names = ["L", "U"])]
    out_latency: Option<Vec<String>>,
    #[arg(long, value_name = "E")]
    out_jitter: Option<String>,
    /// Trace of `@<time> <symbol>` lines, or `-` for standard input.
    #[arg(long, value_name = "FILE", default_value = "-")]
    trace: String,
    /// Write one row of latency bounds per observation.
    #[arg(long, value_name = "FILE")]
    csv: Option<PathBuf>,
    /// Print response times and reach-set sizes instead of verdict blocks.
    #[arg(long)]
    benchmark: bool,
    /// Keep reading after a conclusive verdict.
    #[arg(long)]
    keep_going: bool,
    /// Treat the trace as system-side times and delay it first, e.g.
    /// `din:4.5,dout:6.5,seed:7`.
    #[arg(long, value_name = "SPEC")]
    inject: Option<String>,
}

fn scaled(text: &str, scale: i64, what: &str) -> Result<i64> {
    parse_scaled(text, scale).with_context(|| format!("{what}: `{text}` is not a non-negative decimal on the 1/{scale} grid"))
}

fn bounds(latency: &Option<Vec<String>>, jitter: &Option<String>, scale: i64, flag: &str) -> Result<DelayBounds> {
    let Some(lu) = latency else { bail!("--{flag} is required in this mode") };
    let low = scaled(&lu[0], scale, flag)?;
    let high = match lu[1].as_str() {
        "inf" => None,
        u => Some(scaled(u, scale, flag)?),
    };
    let jitter = match jitter {
        Some(e) => scaled(e, scale, "jitter")?,
        None => 0,
    };
    Ok(DelayBounds::new(low, high, jitter)?)
}

fn load(path: &PathBuf, scale: i64) -> Result<Tba> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Tba::parse(&text, scale).with_context(|| format!("in {}", path.display()))
}

fn execute(cli: Cli) -> Result<Verdict> {
    if cli.scale <= 0 {
        bail!("--scale must be positive");
    }
    let s = cli.scale;
    let spec = load(&cli.spec, s)?;
    let complement = load(&cli.complement, s)?;
    let has_mono = cli.latency.is_some() || cli.jitter.is_some();
    let has_io = cli.in_latency.is_some() || cli.in_jitter.is_some() || cli.out_latency.is_some() || cli.out_jitter.is_some();
    let mut engine = match cli.mode {
        Mode::Classic => {
            if has_mono || has_io || cli.inject.is_some() {
                bail!("classic mode takes no delay bounds");
            }
            Engine::Classic(ClassicMonitor::new(spec.clone(), complement)?)
        }
        Mode::Monitor => {
            if has_io {
                bail!("monitor mode takes --latency and --jitter only");
            }
            Engine::Delayed(Monitor::new(spec.clone(), complement, bounds(&cli.latency, &cli.jitter, s, "latency")?)?)
        }
        Mode::Test => {
            if has_mono {
                bail!("test mode takes the --in-* and --out-* bounds");
            }
            let b = IoDelayBounds::new(
                bounds(&cli.in_latency, &cli.in_jitter, s, "in-latency")?,
                bounds(&cli.out_latency, &cli.out_jitter, s, "out-latency")?,
            )?;
            Engine::Test(Box::new(Tester::new(&spec, &complement, b)?))
        }
    };

    let reader: Box<dyn io::BufRead> = if cli.trace == "-" {
        Box::new(io::stdin().lock())
    } else {
        Box::new(BufReader::new(File::open(&cli.trace).with_context(|| format!("opening {}", cli.trace))?))
    };
    let events = match &cli.inject {
        None => Events::Lines(reader),
        Some(text) => {
            let inj = Injection::parse(text, s)?;
            let mut all = String::new();
            let mut reader = reader;
            reader.read_to_string(&mut all)?;
            let truth = trace::parse(&all, s)?;
            let observed = match &engine {
                Engine::Delayed(m) => delay_outputs(&truth, m.bounds(), &inj)?,
                Engine::Test(t) => delay_io(&truth, &spec, t.bounds(), &inj)?,
                Engine::Classic(_) => unreachable!(),
            };
            Events::Given(observed)
        }
    };

    let mut csv = match &cli.csv {
        Some(p) => Some(io::BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => None,
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let opts = Options { scale: s, keep_going: cli.keep_going, benchmark: cli.benchmark };
    let result = run(&mut engine, events, &mut out, csv.as_mut().map(|w| w as &mut dyn Write), opts);
    if let Some(w) = csv.as_mut() {
        w.flush()?;
    }
    Ok(result?.0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(Verdict::Satisfied) => ExitCode::from(0),
        Ok(Verdict::Violated) => ExitCode::from(1),
        Ok(Verdict::Inconclusive) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
