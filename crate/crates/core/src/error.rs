use alloc::string::String;
use alloc::vec::Vec;

/// Everything that can go wrong in the engine.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("invalid automaton: {}", .0.join("; "))]
    Semantic(Vec<String>),
    #[error("symbol `{0}` is not in the alphabet")]
    UnknownSymbol(String),
    #[error("the property automaton and its complement disagree on the alphabet")]
    AlphabetMismatch,
    #[error("the automaton has no input/output partition")]
    MissingPartition,
    #[error("the automaton accepts words that do not alternate inputs and outputs")]
    NotIoAlternating,
    #[error("timestamp {time} precedes the previous observation at {previous}")]
    Ordering { previous: i64, time: i64 },
    #[error("not a D-observation: first event at {time} precedes the minimal latency {min_latency}")]
    NotDObservation { time: i64, min_latency: i64 },
    #[error("expected an {expected} event, got `{symbol}`")]
    Alternation { expected: &'static str, symbol: String },
    #[error("output at {time} follows its input at {input} by less than the minimal round trip {min_gap}")]
    Gap { input: i64, time: i64, min_gap: i64 },
    #[error("invalid delay bounds: {0}")]
    Bounds(String),
    #[error("internal invariant violated: both reach-sets miss their non-empty states; the second automaton is not a complement of the first")]
    BothEmpty,
}
