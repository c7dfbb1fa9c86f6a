//! An interpreter for a small imperative language with a single selection
//! statement, `choose(G1, ..., Gn)`.
//!
//! Every statement either succeeds or fails. `choose` runs its alternatives
//! left to right and keeps the first one that succeeds; a failed alternative
//! has its updates rolled back by the machine before the next one starts.
//! When every alternative fails, the failure carries the error codes of all
//! of them, in order. `if`/`else`, `switch` and `try`/`catch` are sugar over
//! `choose`, see [`desugar`].
//!
//! * [`ast`] statements, expressions, values and procedure definitions
//! * [`parser`] surface syntax and the canonical printer
//! * [`state`] variable store with nested undo-log transactions
//! * [`engine`] execution, backchaining and derivation traces
//! * [`desugar`] mini-Java front end and its translation to `choose`
//! * [`cli`] the `choose` command-line tool
//!
//! ```
//! use choose_lang::{engine, parser, ExecConfig};
//!
//! let program = parser::parse_program(r#"
//!     proc send(m) { choose(f("fast_down"), f("slow_down"), sent = m) }
//! "#).unwrap();
//! let goal = parser::parse_goal(r#"send("hello")"#).unwrap();
//! let done = engine::run(&program, &goal, ExecConfig::default());
//! assert_eq!(done.state.to_string(), "sent=\"hello\"\n");
//! ```

pub mod ast;
pub mod cli;
pub mod desugar;
pub mod engine;
pub mod parser;
pub mod state;

pub use ast::{Defn, ErrorCode, Expr, Outcome, Program, Stmt, Value};
pub use engine::{ExecConfig, Termination};
pub use state::State;
