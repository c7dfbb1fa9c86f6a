//! Machine state: a flat map from variable names to values, with nested
//! transactions backed by an undo log.
//!
//! Each open transaction records, for the first write to a name inside it,
//! the binding (or absence of a binding) that name had before. Restoring
//! replays that record; committing hands it to the enclosing transaction so
//! an outer restore still reaches back to its own mark.

use std::collections::btree_map::{self, BTreeMap};
use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::ast::Value;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TxError {
    #[error("transaction {token} is not the innermost open transaction")]
    NotInnermost { token: u64 },
}

/// Marks the start of an open transaction. Closed by exactly one of
/// [`State::tx_restore`] or [`State::tx_commit`].
#[derive(Debug, PartialEq, Eq)]
#[must_use = "an open transaction must be committed or restored"]
pub struct TxToken {
    id: u64,
}

#[derive(Debug, Clone, Default)]
struct UndoFrame {
    id: u64,
    touched: HashSet<String>,
    prior: Vec<(String, Option<Value>)>,
}

impl UndoFrame {
    fn record(&mut self, name: &str, prior: Option<Value>) {
        if self.touched.insert(name.to_owned()) {
            self.prior.push((name.to_owned(), prior));
        }
    }
}

#[derive(Clone, Default)]
pub struct State {
    bindings: BTreeMap<String, Value>,
    frames: Vec<UndoFrame>,
    next_id: u64,
}

impl State {
    pub fn new() -> Self {
        Self::default()
    }

    /// `None` means unbound.
    pub fn get(&self, name: &str) -> Option<&Value> {
        self.bindings.get(name)
    }

    /// Binds `name` to `value`, replacing any previous binding.
    pub fn set(&mut self, name: &str, value: Value) {
        let prior = self.bindings.insert(name.to_owned(), value);
        if let Some(frame) = self.frames.last_mut() {
            frame.record(name, prior);
        }
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    /// Bindings in lexicographic name order.
    pub fn iter(&self) -> btree_map::Iter<'_, String, Value> {
        self.bindings.iter()
    }

    pub fn bindings(&self) -> &BTreeMap<String, Value> {
        &self.bindings
    }

    /// Number of transactions currently open.
    pub fn open_transactions(&self) -> usize {
        self.frames.len()
    }

    /// Copy of the bindings with no open transactions.
    pub fn snapshot(&self) -> State {
        State {
            bindings: self.bindings.clone(),
            ..State::default()
        }
    }

    pub fn tx_begin(&mut self) -> TxToken {
        let id = self.next_id;
        self.next_id += 1;
        self.frames.push(UndoFrame {
            id,
            ..UndoFrame::default()
        });
        TxToken { id }
    }

    /// Undoes every write since `tok` was opened.
    pub fn tx_restore(&mut self, tok: TxToken) -> Result<(), TxError> {
        let frame = self.close(tok)?;
        for (name, prior) in frame.prior.into_iter().rev() {
            match prior {
                Some(v) => {
                    self.bindings.insert(name, v);
                }
                None => {
                    self.bindings.remove(&name);
                }
            }
        }
        Ok(())
    }

    /// Keeps every write since `tok` was opened.
    pub fn tx_commit(&mut self, tok: TxToken) -> Result<(), TxError> {
        let frame = self.close(tok)?;
        if let Some(parent) = self.frames.last_mut() {
            for (name, prior) in frame.prior {
                parent.record(&name, prior);
            }
        }
        Ok(())
    }

    fn close(&mut self, tok: TxToken) -> Result<UndoFrame, TxError> {
        match self.frames.last() {
            Some(frame) if frame.id == tok.id => Ok(self.frames.pop().expect("non-empty")),
            _ => Err(TxError::NotInnermost { token: tok.id }),
        }
    }
}

/// Equality of the binding maps only.
impl PartialEq for State {
    fn eq(&self, other: &Self) -> bool {
        self.bindings == other.bindings
    }
}

impl Eq for State {}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.bindings.iter()).finish()
    }
}

/// One `name=value` line per binding, sorted by name.
impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, value) in &self.bindings {
            writeln!(f, "{name}={value}")?;
        }
        Ok(())
    }
}

impl<S: Into<String>> FromIterator<(S, Value)> for State {
    fn from_iter<I: IntoIterator<Item = (S, Value)>>(iter: I) -> Self {
        State {
            bindings: iter.into_iter().map(|(k, v)| (k.into(), v)).collect(),
            ..State::default()
        }
    }
}
