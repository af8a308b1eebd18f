//! The command-line tool end to end, and injection round trips through the
//! library.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use delaymon::inject::{delay_io, delay_outputs, Injection};
use delaymon::trace::TraceEvent;
use delaymon_core::monitor::ClassicMonitor;
use delaymon_core::{DelayBounds, IoDelayBounds, Monitor, Tester};
use delaymon_oracle::{random_pair, Shape};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn delaymon(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_delaymon"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn response_args() -> Vec<String> {
    ["--spec", &fixture("response.tba"), "--complement", &fixture("response_complement.tba"), "--latency", "0", "10", "--jitter", "0.2"]
        .iter()
        .map(|s| s.to_string())
        .collect()
}

fn run_response(extra: &[&str], stdin: &str) -> Output {
    let mut args = response_args();
    args.extend(extra.iter().map(|s| s.to_string()));
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    delaymon(&refs, stdin)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn example_session_blocks() {
    // The reference session echoes its second event at 27.1, where the
    // property is already violated; its blocks belong to the event at 27.5.
    let want = std::fs::read_to_string(fixture("example_session.txt")).unwrap().replace("@271 b", "@275 b");
    let o = run_response(&[], "@17.3 a\n@27.5 b\n");
    assert_eq!(stdout(&o), want);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn violation_stops_the_stream() {
    let o = run_response(&[], "@17.3 a\n@27.1 b\n@30 a\n");
    let text = stdout(&o);
    assert!(text.contains("Input: @271 b\n\nVerdict: NEGATIVE\nPositive:\nConsistent latencies: {}\n"));
    assert!(!text.contains("@300"));
    assert_eq!(o.status.code(), Some(1));
    let o = run_response(&["--keep-going"], "@17.3 a\n@27.1 b\n@30 a\n");
    assert!(stdout(&o).contains("Input: @300 a\n\nVerdict: NEGATIVE"));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn satisfied_exits_zero() {
    // With exact observations a b after 20 and an a before 10 satisfy it.
    let args = ["--spec", &fixture("response.tba"), "--complement", &fixture("response_complement.tba"), "--mode", "classic"];
    let o = delaymon(&args, "@5 a\n@25 b\n");
    assert_eq!(stdout(&o), "Input: @50 a\n\nVerdict: INCONCLUSIVE\n\nInput: @250 b\n\nVerdict: POSITIVE\n");
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn empty_trace_prints_the_initial_report() {
    let o = run_response(&[], "# nothing yet\n\n");
    assert_eq!(
        stdout(&o),
        "Verdict: INCONCLUSIVE\nPositive:\nConsistent latencies: {[0,100]}\nJitter bound: 2\n\
         Negative:\nConsistent latencies: {[0,100]}\nJitter bound: 2\n"
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_input_is_an_error() {
    let o = run_response(&[], "@17.3 a\n@17 b\n");
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("trace line 2"));
    assert_eq!(stdout(&o).matches("Verdict:").count(), 1);

    let o = run_response(&[], "@1 a\n\n17.3 b\n");
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("trace line 3"));

    for (extra, stdin) in [
        (&["--scale", "10"][..], "@1.25 a\n"),
        (&[][..], "@1 c\n"),
        (&["--in-latency", "0", "1"][..], ""),
        (&["--bogus"][..], ""),
    ] {
        assert_eq!(run_response(extra, stdin).status.code(), Some(3), "{extra:?}");
    }
    let o = delaymon(&["--spec", "/nonexistent", "--complement", "/nonexistent", "--latency", "0", "1"], "");
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn csv_rows_follow_the_reports() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    run_response(&["--csv", csv.to_str().unwrap()], "@17.3 a\n@27.5 b\n");
    let text = std::fs::read_to_string(&csv).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0].split(',').count(), 13);
    assert_eq!(rows[1], "1,,,71,100,,,,,0,100,,");
    assert_eq!(rows[2], "2,,,71,75s,,,,,0,100,,");
    assert_eq!(rows.len(), 3);
}

#[test]
fn test_mode_reports_both_channels() {
    let args = [
        "--spec", &fixture("io_response.tba"), "--complement", &fixture("io_response_complement.tba"), "--mode", "test",
        "--scale", "100", "--in-latency", "0", "inf", "--in-jitter", "0.05",
        "--out-latency", "0", "1.5", "--out-jitter", "0.05",
    ];
    let o = delaymon(&args, "@6 a\n@19.1 b\n");
    let text = stdout(&o);
    // Arriving before 7.5 is what makes the a count, hence the negative
    // input latencies below 1.5 after the first event.
    assert!(text.contains("Negative:\nConsistent input latencies: {[0,150)}\n"));
    assert!(text.ends_with(
        "Input: @1910 b\n\nVerdict: POSITIVE\nPositive:\nConsistent input latencies: {[0,1310]}\n\
         Consistent output latencies: {[0,150]}\nConsistent round-trip latencies: {[0,1310]}\n\
         Jitter bound: in 5, out 5\nNegative:\nConsistent input latencies: {}\n\
         Consistent output latencies: {}\nConsistent round-trip latencies: {}\nJitter bound: in 5, out 5\n"
    ), "{text}");
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn injection_is_seeded() {
    let gear = ["--spec", &fixture("gear.tba"), "--complement", &fixture("gear_complement.tba"), "--scale", "1"];
    let run = |inject: &str| {
        let mut args = gear.to_vec();
        args.extend(["--latency", "0", "100", "--jitter", "10", "--inject", inject, "--keep-going"]);
        stdout(&delaymon(&args, "@100 req\n@700 gear\n@3000 req\n@3500 gear\n"))
    };
    assert_eq!(run("dout:50,seed:4"), run("dout:50,seed:4"));
    assert_ne!(run("dout:50,seed:4"), run("dout:50,seed:5"));
    let mut args = gear.to_vec();
    args.extend(["--latency", "0", "100", "--inject", "dout:150,seed:1"]);
    let o = delaymon(&args, "@100 req\n");
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("outside the declared bounds"));
}

#[test]
fn gear_experiments_end_at_the_22nd_observation() {
    let gear = ["--spec", &fixture("gear.tba"), "--complement", &fixture("gear_complement.tba"), "--scale", "1", "--mode", "test"];
    for (truth, bounds, inject) in [
        ("gear_errors.truth", ["10", "50", "60", "100"], "din:45,dout:65,seed:1"),
        ("gear_slow.truth", ["0", "90", "100", "200"], "din:60,dout:120,seed:5"),
    ] {
        let trace = fixture(truth);
        let mut args = gear.to_vec();
        args.extend([
            "--in-latency", bounds[0], bounds[1], "--in-jitter", "10",
            "--out-latency", bounds[2], bounds[3], "--out-jitter", "10",
            "--inject", inject, "--trace", &trace,
        ]);
        let o = delaymon(&args, "");
        let text = stdout(&o);
        assert_eq!(o.status.code(), Some(1), "{text}");
        assert_eq!(text.matches("Verdict: INCONCLUSIVE").count(), 21);
        assert_eq!(text.matches("Verdict: NEGATIVE").count(), 1);
    }
}

#[test]
fn benchmark_summary() {
    let args = ["--spec", &fixture("response.tba"), "--complement", &fixture("response_complement.tba"), "--mode", "classic", "--benchmark"];
    let text = stdout(&delaymon(&args, "@5 a\n@15 a\n"));
    assert!(text.starts_with("Verdict: INCONCLUSIVE\nEvents: 2\nMax response time (us): "), "{text}");
    assert!(text.contains("\nMax symbolic states: "));
}

fn events(v: &[(&'static str, i64)]) -> Vec<TraceEvent> {
    v.iter().map(|&(s, t)| TraceEvent { time: t, symbol: s.to_string() }).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// A verdict on a delayed observation never contradicts what the system
    /// actually did.
    #[test]
    fn delayed_verdicts_agree_with_the_ground_truth(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let io = rng.gen_bool(0.5);
        let shape = Shape { locations: rng.gen_range(1..=3), clocks: rng.gen_range(0..=2), max_constant: 5, io };
        let (spec, complement) = random_pair(&mut rng, &shape);
        let mut t = rng.gen_range(3..=6);
        let mut truth = Vec::new();
        for k in 0..rng.gen_range(1..=4) {
            let sym = if io { ["i", "o"][k % 2] } else { ["a", "b"][rng.gen_range(0..2)] };
            truth.push((sym, t));
            t += rng.gen_range(0..=3);
        }
        // The tester only considers alternating words, so compare against
        // exact monitoring of the alternating products.
        let mut classic = if io {
            ClassicMonitor::new(spec.io_alternation_product().unwrap(), complement.io_alternation_product().unwrap())
        } else {
            ClassicMonitor::new(spec.clone(), complement.clone())
        }
        .unwrap();
        let mut actual = classic.verdict();
        for &(s, tau) in &truth {
            actual = classic.observe(s, tau).unwrap();
        }
        let inj = Injection { din: Some(rng.gen_range(0..=2)), dout: Some(rng.gen_range(0..=2)), seed: rng.gen() };
        let truth = events(&truth);
        let verdict = if io {
            let b = IoDelayBounds::new(
                DelayBounds::new(0, Some(2), rng.gen_range(0..=2)).unwrap(),
                DelayBounds::new(0, Some(2), rng.gen_range(0..=2)).unwrap(),
            ).unwrap();
            let Ok(seen) = delay_io(&truth, &spec, &b, &inj) else { return Ok(()) };
            let mut tester = Tester::new(&spec, &complement, b).unwrap();
            let mut v = tester.verdict();
            for e in &seen {
                v = tester.observe(&e.symbol, e.time).unwrap();
            }
            v
        } else {
            let b = DelayBounds::new(0, Some(2), rng.gen_range(0..=2)).unwrap();
            let Ok(seen) = delay_outputs(&truth, &b, &inj) else { return Ok(()) };
            let mut m = Monitor::new(spec.clone(), complement.clone(), b).unwrap();
            let mut v = m.verdict();
            for e in &seen {
                v = m.observe(&e.symbol, e.time).unwrap();
            }
            v
        };
        if verdict.is_conclusive() {
            prop_assert_eq!(verdict, actual);
        }
    }
}
