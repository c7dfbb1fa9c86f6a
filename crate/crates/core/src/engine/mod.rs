//! Execution and backchaining.
//!
//! [`Machine::exec`] runs a statement against a mutable [`State`] and either
//! succeeds, keeping every update, or fails with a list of error codes.
//! `choose` brackets every alternative in a transaction: a failed alternative
//! is rolled back before the next one starts, and the first success is
//! committed. Procedure calls evaluate their arguments, pick the matching
//! definition and run its body with the parameters replaced by the argument
//! values.
//!
//! Nondeterminism is resolved left to right everywhere: alternatives in
//! source order, candidate definitions in declaration order.

mod eval;
pub mod trace;

use std::collections::HashMap;

pub use eval::eval_expr;
pub use trace::{JsonlTrace, Rule, TraceEvent, TraceKind, TraceOutcome, TraceSink};

use crate::ast::{
    Defn, ErrorCode, Expr, Outcome, Program, Stmt, Value, DEPTH_EXCEEDED, NO_MATCHING_PROCEDURE,
    TYPE_ERROR,
};
use crate::parser::print_stmt;
use crate::state::State;

pub const DEFAULT_MAX_DEPTH: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExecConfig {
    /// Deepest permitted nesting of procedure calls. At least 1.
    pub max_depth: usize,
}

impl Default for ExecConfig {
    fn default() -> Self {
        ExecConfig {
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }
}

impl ExecConfig {
    pub fn with_max_depth(max_depth: usize) -> Self {
        ExecConfig {
            max_depth: max_depth.max(1),
        }
    }
}

/// Why a statement did not succeed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    /// Ordinary failure; alternatives of an enclosing `choose` are tried.
    Codes(Vec<ErrorCode>),
    /// The call depth budget ran out. Aborts the whole run.
    DepthExceeded,
}

impl Failure {
    fn single(code: ErrorCode) -> Self {
        Failure::Codes(vec![code])
    }

    pub fn into_codes(self) -> Vec<ErrorCode> {
        match self {
            Failure::Codes(codes) => codes,
            Failure::DepthExceeded => vec![ErrorCode::reserved(DEPTH_EXCEEDED)],
        }
    }
}

pub type ExecResult = Result<(), Failure>;

pub struct Machine<'a> {
    program: &'a Program,
    cfg: ExecConfig,
    sink: Option<&'a mut dyn TraceSink>,
    call_depth: usize,
    trace_depth: usize,
    steps: u64,
}

impl<'a> Machine<'a> {
    pub fn new(program: &'a Program, cfg: ExecConfig) -> Self {
        Machine {
            program,
            cfg,
            sink: None,
            call_depth: 0,
            trace_depth: 0,
            steps: 0,
        }
    }

    pub fn with_sink(mut self, sink: &'a mut dyn TraceSink) -> Self {
        self.sink = Some(sink);
        self
    }

    /// Rule applications so far.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn exec(&mut self, state: &mut State, g: &Stmt) -> ExecResult {
        stacker::maybe_grow(64 * 1024, 4 * 1024 * 1024, || {
            let rule = match g {
                Stmt::True | Stmt::Fail(_) => Rule::Truth,
                Stmt::Call(..) => Rule::Call,
                Stmt::Cond(_) => Rule::Condition,
                Stmt::NegCond(_) => Rule::NegatedCondition,
                Stmt::Assign(..) => Rule::Assignment,
                Stmt::Seq(..) => Rule::Sequence,
                Stmt::Choose(_) => Rule::Selection,
            };
            self.step(rule, state, || print_stmt(g), |m, state| m.dispatch(state, g))
        })
    }

    fn dispatch(&mut self, state: &mut State, g: &Stmt) -> ExecResult {
        match g {
            Stmt::True => Ok(()),
            Stmt::Fail(code) => Err(Failure::single(code.clone())),
            Stmt::Call(name, args) => self.exec_call(state, name, args),
            Stmt::Cond(e) => condition(state, e, true),
            Stmt::NegCond(e) => condition(state, e, false),
            Stmt::Assign(x, e) => {
                let v = eval_expr(state, e).map_err(Failure::single)?;
                state.set(x, v);
                Ok(())
            }
            Stmt::Seq(a, b) => self.exec_seq(state, a, b),
            Stmt::Choose(alts) => self.exec_choose(state, alts),
        }
    }

    /// Runs `first`, then `second` from the state `first` left behind.
    pub fn exec_seq(&mut self, state: &mut State, first: &Stmt, second: &Stmt) -> ExecResult {
        self.exec(state, first)?;
        self.exec(state, second)
    }

    /// Tries each alternative from the entry state, in order. The first one
    /// to succeed is kept. If all fail, their codes are concatenated in
    /// alternative order.
    pub fn exec_choose(&mut self, state: &mut State, alts: &[Stmt]) -> ExecResult {
        let mut codes = Vec::new();
        for alt in alts {
            let tok = state.tx_begin();
            match self.exec(state, alt) {
                Ok(()) => {
                    state.tx_commit(tok).expect("alternative transaction is innermost");
                    return Ok(());
                }
                Err(Failure::Codes(c)) => {
                    state.tx_restore(tok).expect("alternative transaction is innermost");
                    codes.extend(c);
                }
                Err(Failure::DepthExceeded) => {
                    state.tx_commit(tok).expect("alternative transaction is innermost");
                    return Err(Failure::DepthExceeded);
                }
            }
        }
        Err(Failure::Codes(codes))
    }

    /// Evaluates `args` left to right, then backchains on the definitions
    /// matching `name/arity` in declaration order until one succeeds.
    pub fn exec_call(&mut self, state: &mut State, name: &str, args: &[Expr]) -> ExecResult {
        let values = args
            .iter()
            .map(|a| eval_expr(state, a))
            .collect::<Result<Vec<_>, _>>()
            .map_err(Failure::single)?;
        let program = self.program;
        let mut candidates = program.candidates(name, values.len()).peekable();
        if candidates.peek().is_none() {
            return Err(Failure::single(ErrorCode::reserved(NO_MATCHING_PROCEDURE)));
        }
        if self.call_depth >= self.cfg.max_depth {
            return Err(Failure::DepthExceeded);
        }
        self.call_depth += 1;
        let mut codes = Vec::new();
        let mut result = None;
        while let Some(d) = candidates.next() {
            let tok = state.tx_begin();
            match self.backchain(state, d, &values) {
                Ok(()) => {
                    state.tx_commit(tok).expect("candidate transaction is innermost");
                    result = Some(Ok(()));
                    break;
                }
                // The last candidate's failure is not undone, as for any other
                // failing statement outside a choose.
                Err(Failure::Codes(c)) if candidates.peek().is_none() => {
                    state.tx_commit(tok).expect("candidate transaction is innermost");
                    codes.extend(c);
                }
                Err(Failure::Codes(c)) => {
                    state.tx_restore(tok).expect("candidate transaction is innermost");
                    codes.extend(c);
                }
                Err(Failure::DepthExceeded) => {
                    state.tx_commit(tok).expect("candidate transaction is innermost");
                    result = Some(Err(Failure::DepthExceeded));
                    break;
                }
            }
        }
        self.call_depth -= 1;
        result.unwrap_or(Err(Failure::Codes(codes)))
    }

    /// Instantiates `d` with `args` and runs the instantiated body.
    pub fn backchain(&mut self, state: &mut State, d: &Defn, args: &[Value]) -> ExecResult {
        if d.arity() != args.len() {
            return Err(Failure::single(ErrorCode::reserved(NO_MATCHING_PROCEDURE)));
        }
        let head = || {
            let args = args.iter().map(|v| Expr::Lit(v.clone())).collect();
            print_stmt(&Stmt::Call(d.name.clone(), args))
        };
        if d.params.is_empty() {
            return self.step(Rule::Backchain, state, head, |m, state| m.exec(state, &d.body));
        }
        self.step(Rule::ArgumentPassing, state, head, |m, state| {
            let body = instantiate(d, args);
            m.step(Rule::Backchain, state, head, |m, state| m.exec(state, &body))
        })
    }

    fn step(
        &mut self,
        rule: Rule,
        state: &mut State,
        text: impl Fn() -> String,
        f: impl FnOnce(&mut Self, &mut State) -> ExecResult,
    ) -> ExecResult {
        self.steps += 1;
        let depth = self.trace_depth;
        let stmt = self.sink.is_some().then(&text);
        if let (Some(sink), Some(stmt)) = (self.sink.as_deref_mut(), &stmt) {
            let event = TraceEvent {
                kind: TraceKind::Enter,
                rule: rule.number(),
                stmt: stmt.clone(),
                depth,
                outcome: None,
            };
            sink.record(&event, state);
        }
        self.trace_depth += 1;
        let result = f(self, state);
        self.trace_depth -= 1;
        if let (Some(sink), Some(stmt)) = (self.sink.as_deref_mut(), stmt) {
            let event = TraceEvent {
                kind: TraceKind::Exit,
                rule: rule.number(),
                stmt,
                depth,
                outcome: Some(if result.is_ok() {
                    TraceOutcome::Success
                } else {
                    TraceOutcome::Failure
                }),
            };
            sink.record(&event, state);
        }
        result
    }
}

fn condition(state: &State, e: &Expr, expected: bool) -> ExecResult {
    match eval_expr(state, e).map_err(Failure::single)? {
        Value::Bool(b) if b == expected => Ok(()),
        Value::Bool(_) => Err(Failure::single(ErrorCode::generic())),
        _ => Err(Failure::single(ErrorCode::reserved(TYPE_ERROR))),
    }
}

/// The body of `d` with every parameter occurrence replaced by its value.
fn instantiate(d: &Defn, args: &[Value]) -> Stmt {
    let subst: HashMap<&str, &Value> = d.params.iter().map(String::as_str).zip(args).collect();
    subst_stmt(&d.body, &subst)
}

fn subst_stmt(s: &Stmt, subst: &HashMap<&str, &Value>) -> Stmt {
    match s {
        Stmt::True | Stmt::Fail(_) => s.clone(),
        Stmt::Call(name, args) => Stmt::Call(name.clone(), args.iter().map(|a| subst_expr(a, subst)).collect()),
        Stmt::Cond(e) => Stmt::Cond(subst_expr(e, subst)),
        Stmt::NegCond(e) => Stmt::NegCond(subst_expr(e, subst)),
        Stmt::Assign(x, e) => Stmt::Assign(x.clone(), subst_expr(e, subst)),
        Stmt::Seq(a, b) => Stmt::seq(subst_stmt(a, subst), subst_stmt(b, subst)),
        Stmt::Choose(alts) => Stmt::Choose(alts.iter().map(|a| subst_stmt(a, subst)).collect()),
    }
}

fn subst_expr(e: &Expr, subst: &HashMap<&str, &Value>) -> Expr {
    match e {
        Expr::Var(x) => match subst.get(x.as_str()) {
            Some(v) => Expr::Lit((*v).clone()),
            None => e.clone(),
        },
        Expr::Lit(_) => e.clone(),
        Expr::Unary(op, inner) => Expr::unary(*op, subst_expr(inner, subst)),
        Expr::Binary(op, l, r) => Expr::binary(*op, subst_expr(l, subst), subst_expr(r, subst)),
    }
}

/// How a top-level run ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Termination {
    pub outcome: Outcome,
    /// Post-state on success; the state at the point of failure otherwise.
    pub state: State,
    pub steps: u64,
}

impl Termination {
    pub fn depth_exceeded(&self) -> bool {
        matches!(self.outcome.codes(), [c] if c.as_str() == DEPTH_EXCEEDED)
    }
}

/// Executes `g` from the program's state.
pub fn exec(program: &Program, g: &Stmt, cfg: ExecConfig) -> Outcome {
    run(program, g, cfg).outcome
}

/// Executes `goal` from the program's state. A failed goal is not rolled back.
pub fn run(program: &Program, goal: &Stmt, cfg: ExecConfig) -> Termination {
    drive(Machine::new(program, cfg), program, goal)
}

pub fn run_traced(program: &Program, goal: &Stmt, cfg: ExecConfig, sink: &mut dyn TraceSink) -> Termination {
    drive(Machine::new(program, cfg).with_sink(sink), program, goal)
}

fn drive(mut machine: Machine<'_>, program: &Program, goal: &Stmt) -> Termination {
    let mut state = program.state.snapshot();
    let result = machine.exec(&mut state, goal);
    debug_assert_eq!(state.open_transactions(), 0);
    let outcome = match result {
        Ok(()) => Outcome::Success(state.snapshot()),
        Err(f) => Outcome::Failure(f.into_codes()),
    };
    Termination {
        outcome,
        state,
        steps: machine.steps(),
    }
}
