//! Monitoring and testing of timed Büchi automata when events reach the
//! observer through channels with unknown but bounded latency and jitter.
//!
//! The crate is `no_std` and only needs an allocator. Times are integers in
//! a caller-chosen unit; the command-line front end owns decimal scaling.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod automata;
pub mod bound;
pub mod dbm;
pub mod error;
pub mod interval;
pub mod liveness;
pub mod monitor;
pub mod tester;

pub use automata::{AtomicConstraint, Direction, Relation, SymbolicState, Tba, TbaBuilder, Transition};
pub use bound::Bound;
pub use dbm::{Clock, Constraint, Dbm};
pub use error::Error;
pub use interval::{Endpoint, Interval, IntervalSet};
pub use liveness::NonEmptyMap;
pub use monitor::{DelayBounds, LatencyReport, Monitor, Verdict};
pub use tester::{IoDelayBounds, IoLatencies, IoLatencyReport, Tester};
