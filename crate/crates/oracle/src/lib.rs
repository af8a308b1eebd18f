//! Brute-force reference implementations for the delaymon test suites.
//!
//! Nothing here shares code with the zone engine: liveness is decided on an
//! explicit region graph, and verdicts come from enumerating concrete ground
//! truths on a grid fine enough to hit every region.

pub mod enumerate;
pub mod harness;
pub mod random;
pub mod region;
pub mod run;

pub use enumerate::{alternating, monitor_grid, tester_grid, DelayGrid, IoBounds};
pub use harness::{check_monitor, check_tester, member, monitor_case, tester_case, MonitorCase, TesterCase};
pub use random::{random_pair, Shape};
pub use region::RegionOracle;
pub use run::Configs;
