//! Command-line front end for delayed monitoring and testing.

pub mod engine;
pub mod inject;
pub mod run;
pub mod trace;

pub use engine::{Engine, Report};
pub use run::{run, Events, Options, RunError, Stats};
