//! Derivation trace: one enter/exit event pair per rule application.

use std::io::{self, Write};

use serde::Serialize;

use crate::state::State;

/// Rules of the execution and backchaining judgments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// Run the body of the matching definition.
    Backchain = 1,
    /// Instantiate parameters with argument values.
    ArgumentPassing = 2,
    Call = 3,
    /// `t`; also used for `f`, which has no derivation.
    Truth = 4,
    Condition = 5,
    NegatedCondition = 6,
    Assignment = 7,
    Sequence = 8,
    Selection = 9,
}

impl Rule {
    pub fn number(self) -> u8 {
        self as u8
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceKind {
    Enter,
    Exit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceOutcome {
    Success,
    Failure,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEvent {
    pub kind: TraceKind,
    pub rule: u8,
    pub stmt: String,
    pub depth: usize,
    /// Present on exit events only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome: Option<TraceOutcome>,
}

/// Receives trace events synchronously, in derivation order. `state` is the
/// machine state at the moment of the event: before the step on enter, after
/// it on exit.
pub trait TraceSink {
    fn record(&mut self, event: &TraceEvent, state: &State);
}

impl TraceSink for Vec<TraceEvent> {
    fn record(&mut self, event: &TraceEvent, _state: &State) {
        self.push(event.clone());
    }
}

/// Writes each event as one JSON object per line.
pub struct JsonlTrace<W: Write> {
    writer: W,
    error: Option<io::Error>,
}

impl<W: Write> JsonlTrace<W> {
    pub fn new(writer: W) -> Self {
        JsonlTrace { writer, error: None }
    }

    /// Flushes and returns the writer, or the first write error.
    pub fn finish(mut self) -> io::Result<W> {
        if let Some(e) = self.error.take() {
            return Err(e);
        }
        self.writer.flush()?;
        Ok(self.writer)
    }
}

impl<W: Write> TraceSink for JsonlTrace<W> {
    fn record(&mut self, event: &TraceEvent, _state: &State) {
        if self.error.is_some() {
            return;
        }
        let res = serde_json::to_writer(&mut self.writer, event)
            .map_err(io::Error::from)
            .and_then(|()| self.writer.write_all(b"\n"));
        if let Err(e) = res {
            self.error = Some(e);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jsonl_shape() {
        let mut sink = JsonlTrace::new(Vec::new());
        let state = State::new();
        sink.record(
            &TraceEvent {
                kind: TraceKind::Enter,
                rule: 9,
                stmt: "choose(f, t)".into(),
                depth: 0,
                outcome: None,
            },
            &state,
        );
        sink.record(
            &TraceEvent {
                kind: TraceKind::Exit,
                rule: 9,
                stmt: "choose(f, t)".into(),
                depth: 0,
                outcome: Some(TraceOutcome::Success),
            },
            &state,
        );
        let text = String::from_utf8(sink.finish().unwrap()).unwrap();
        assert_eq!(
            text,
            "{\"kind\":\"enter\",\"rule\":9,\"stmt\":\"choose(f, t)\",\"depth\":0}\n\
             {\"kind\":\"exit\",\"rule\":9,\"stmt\":\"choose(f, t)\",\"depth\":0,\"outcome\":\"success\"}\n"
        );
    }
}
