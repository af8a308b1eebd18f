//! Trace wire format: one `@<time> <symbol>` event per line.

use delaymon_core::automata::{format_scaled, parse_scaled};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEvent {
    /// Timestamp multiplied by the scale.
    pub time: i64,
    pub symbol: String,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("trace line {line}: {message}")]
pub struct TraceError {
    pub line: usize,
    pub message: String,
}

/// Parses one line; `Ok(None)` for blank lines and comments.
pub fn parse_line(text: &str, scale: i64, line: usize) -> Result<Option<TraceEvent>, TraceError> {
    let err = |message: String| TraceError { line, message };
    let body = text.split('#').next().unwrap_or("").trim();
    if body.is_empty() {
        return Ok(None);
    }
    let rest = body.strip_prefix('@').ok_or_else(|| err(format!("expected `@<time> <symbol>`, got `{body}`")))?;
    let mut parts = rest.split_whitespace();
    let (Some(time), Some(symbol), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(err(format!("expected `@<time> <symbol>`, got `{body}`")));
    };
    let time = parse_scaled(time, scale)
        .ok_or_else(|| err(format!("`{time}` is not a non-negative decimal on the 1/{scale} grid")))?;
    Ok(Some(TraceEvent { time, symbol: symbol.to_string() }))
}

/// Parses a whole trace.
pub fn parse(text: &str, scale: i64) -> Result<Vec<TraceEvent>, TraceError> {
    let mut events = Vec::new();
    for (k, line) in text.lines().enumerate() {
        if let Some(e) = parse_line(line, scale, k + 1)? {
            events.push(e);
        }
    }
    Ok(events)
}

/// Renders events in the wire format.
pub fn render(events: &[TraceEvent], scale: i64) -> String {
    events.iter().map(|e| format!("@{} {}\n", format_scaled(e.time, scale), e.symbol)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lines() {
        assert_eq!(parse_line("@17.3 a", 10, 1), Ok(Some(TraceEvent { time: 173, symbol: "a".into() })));
        assert_eq!(parse_line("  # note", 10, 1), Ok(None));
        assert_eq!(parse_line("@5 b # late", 1, 1).unwrap().unwrap().time, 5);
        assert_eq!(parse_line("@1.25 a", 10, 7).unwrap_err().line, 7);
        assert!(parse_line("17 a", 10, 1).is_err());
        assert!(parse_line("@17 a b", 10, 1).is_err());
        assert!(parse_line("@-1 a", 10, 1).is_err());
    }

    #[test]
    fn round_trip() {
        let text = "@17.3 a\n@27 b\n";
        assert_eq!(render(&parse(text, 10).unwrap(), 10), text);
    }
}
