//! Shared test machinery: a random program generator, a reference evaluator
//! that copies the whole state for every alternative, and a trace sink that
//! checks rollback at every `choose`.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use choose_lang::ast::{BinOp, Defn, ErrorCode, Expr, Program, Stmt, UnOp, Value};
use choose_lang::engine::{TraceEvent, TraceKind, TraceOutcome, TraceSink};
use choose_lang::State;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const VARS: [&str; 8] = ["v0", "v1", "v2", "v3", "v4", "v5", "v6", "v7"];
pub const PARAMS: [&str; 2] = ["a", "b"];
const CODES: [&str; 4] = ["e1", "e2", "e3", "e4"];

/// Random programs over at most eight globals. Procedure `pK` only calls
/// `pJ` with `J < K`, so every generated program terminates.
pub struct Fuzz {
    rng: ChaCha8Rng,
    /// Arity of each generated procedure, by index.
    procs: Vec<usize>,
}

pub struct Case {
    pub program: Program,
    pub goal: Stmt,
}

impl Fuzz {
    pub fn new(seed: u64) -> Self {
        Fuzz {
            rng: ChaCha8Rng::seed_from_u64(seed),
            procs: Vec::new(),
        }
    }

    /// A program, a goal of depth at most `max_depth`, and an initial state.
    pub fn case(&mut self, max_depth: u32) -> Case {
        self.procs.clear();
        let n_procs = self.rng.gen_range(0..=3);
        let mut defs = Vec::new();
        for i in 0..n_procs {
            let arity = self.rng.gen_range(0..=2);
            let depth = self.rng.gen_range(0..=3);
            let body = self.stmt(depth, &PARAMS[..arity]);
            defs.push(Defn::new(format!("p{i}"), PARAMS[..arity].iter().map(|s| s.to_string()).collect(), body).unwrap());
            self.procs.push(arity);
        }
        let depth = self.rng.gen_range(1..=max_depth);
        let goal = self.stmt(depth, &[]);
        let state = self.state(false);
        Case {
            program: Program::new(defs).unwrap().with_state(state),
            goal,
        }
    }

    /// Some of the globals, bound to small integers and the odd boolean.
    /// `all_ints` binds every global to an integer.
    pub fn state(&mut self, all_ints: bool) -> State {
        let mut state = State::new();
        for v in VARS {
            if all_ints {
                state.set(v, Value::Int(self.rng.gen_range(-3..=3)));
            } else if self.rng.gen_bool(0.6) {
                let value = if self.rng.gen_bool(0.85) {
                    Value::Int(self.rng.gen_range(-3..=3))
                } else {
                    Value::Bool(self.rng.gen_bool(0.5))
                };
                state.set(v, value);
            }
        }
        state
    }

    pub fn stmt(&mut self, depth: u32, params: &[&str]) -> Stmt {
        let leaf = depth == 0 || self.rng.gen_bool(0.25);
        if leaf {
            return match self.rng.gen_range(0..10) {
                0 => Stmt::True,
                1 => self.fail(),
                2 | 3 => Stmt::Cond(self.bool_expr(2, params)),
                4 => Stmt::NegCond(self.bool_expr(2, params)),
                5 => self.call(params).unwrap_or(Stmt::True),
                _ => self.assign(params),
            };
        }
        match self.rng.gen_range(0..10) {
            0..=3 => Stmt::seq(self.stmt(depth - 1, params), self.stmt(depth - 1, params)),
            4..=7 => {
                let n = self.rng.gen_range(1..=4);
                Stmt::Choose((0..n).map(|_| self.stmt(depth - 1, params)).collect())
            }
            8 => self.call(params).unwrap_or_else(|| self.fail()),
            _ => self.assign(params),
        }
    }

    fn fail(&mut self) -> Stmt {
        if self.rng.gen_bool(0.3) {
            Stmt::Fail(ErrorCode::generic())
        } else {
            Stmt::fail(CODES.choose(&mut self.rng).unwrap()).unwrap()
        }
    }

    fn assign(&mut self, params: &[&str]) -> Stmt {
        let target = *VARS.choose(&mut self.rng).unwrap();
        let e = if self.rng.gen_bool(0.8) {
            self.int_expr(2, params)
        } else {
            self.bool_expr(1, params)
        };
        Stmt::assign(target, e)
    }

    fn call(&mut self, params: &[&str]) -> Option<Stmt> {
        if self.procs.is_empty() {
            return None;
        }
        let i = self.rng.gen_range(0..self.procs.len());
        let arity = self.procs[i];
        // Occasionally call with the wrong arity.
        let arity = if self.rng.gen_bool(0.05) { arity + 1 } else { arity };
        let args = (0..arity).map(|_| self.int_expr(1, params)).collect();
        Some(Stmt::call(format!("p{i}"), args))
    }

    fn var(&mut self, params: &[&str]) -> Expr {
        if !params.is_empty() && self.rng.gen_bool(0.4) {
            Expr::var(*params.choose(&mut self.rng).unwrap())
        } else {
            Expr::var(*VARS.choose(&mut self.rng).unwrap())
        }
    }

    pub fn int_expr(&mut self, depth: u32, params: &[&str]) -> Expr {
        if depth == 0 || self.rng.gen_bool(0.35) {
            return if self.rng.gen_bool(0.5) {
                Expr::lit(self.rng.gen_range(-3i64..=3))
            } else {
                self.var(params)
            };
        }
        if self.rng.gen_bool(0.1) {
            return Expr::unary(UnOp::Neg, self.int_expr(depth - 1, params));
        }
        let op = *[BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Rem]
            .choose(&mut self.rng)
            .unwrap();
        Expr::binary(op, self.int_expr(depth - 1, params), self.int_expr(depth - 1, params))
    }

    pub fn bool_expr(&mut self, depth: u32, params: &[&str]) -> Expr {
        if depth == 0 || self.rng.gen_bool(0.3) {
            return match self.rng.gen_range(0..6) {
                0 => Expr::lit(self.rng.gen_bool(0.5)),
                1 => self.var(params),
                _ => self.comparison(params),
            };
        }
        match self.rng.gen_range(0..4) {
            0 => Expr::unary(UnOp::Not, self.bool_expr(depth - 1, params)),
            1 => Expr::binary(BinOp::And, self.bool_expr(depth - 1, params), self.bool_expr(depth - 1, params)),
            2 => Expr::binary(BinOp::Or, self.bool_expr(depth - 1, params), self.bool_expr(depth - 1, params)),
            _ => self.comparison(params),
        }
    }

    fn comparison(&mut self, params: &[&str]) -> Expr {
        let op = *[BinOp::Eq, BinOp::Ne, BinOp::Lt, BinOp::Le, BinOp::Gt, BinOp::Ge]
            .choose(&mut self.rng)
            .unwrap();
        Expr::binary(op, self.int_expr(1, params), self.int_expr(1, params))
    }

    /// Boolean condition that evaluates without error when every global is
    /// bound to an integer: no division, no unbound names.
    pub fn safe_cond(&mut self, depth: u32) -> Expr {
        let atom = |f: &mut Self| {
            if f.rng.gen_bool(0.5) {
                Expr::var(*VARS.choose(&mut f.rng).unwrap())
            } else {
                Expr::lit(f.rng.gen_range(-3i64..=3))
            }
        };
        if depth == 0 || self.rng.gen_bool(0.4) {
            let op = *[BinOp::Eq, BinOp::Ne, BinOp::Lt, BinOp::Le, BinOp::Gt, BinOp::Ge]
                .choose(&mut self.rng)
                .unwrap();
            let l = atom(self);
            let r = if self.rng.gen_bool(0.3) {
                Expr::binary(BinOp::Add, atom(self), atom(self))
            } else {
                atom(self)
            };
            return Expr::binary(op, l, r);
        }
        match self.rng.gen_range(0..3) {
            0 => Expr::unary(UnOp::Not, self.safe_cond(depth - 1)),
            1 => Expr::binary(BinOp::And, self.safe_cond(depth - 1), self.safe_cond(depth - 1)),
            _ => Expr::binary(BinOp::Or, self.safe_cond(depth - 1), self.safe_cond(depth - 1)),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

// ---------------------------------------------------------------------------
// Reference evaluator.
//
// Parameters live in a local environment instead of being substituted, every
// alternative runs against a full copy of the globals, and expressions are
// evaluated by a separate implementation.

pub type Globals = BTreeMap<String, Value>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleRun {
    /// `Ok` on success, the error codes otherwise.
    pub result: Result<(), Vec<String>>,
    /// Final globals; at the point of failure when the run failed.
    pub globals: Globals,
}

pub fn oracle_run(program: &Program, goal: &Stmt) -> OracleRun {
    let mut globals: Globals = program.state.bindings().clone();
    let result = Oracle { defs: program.defs() }.exec(&HashMap::new(), &mut globals, goal);
    OracleRun { result, globals }
}

struct Oracle<'a> {
    defs: &'a [Defn],
}

pub type Env = HashMap<String, Value>;

impl Oracle<'_> {
    fn exec(&self, env: &Env, g: &mut Globals, s: &Stmt) -> Result<(), Vec<String>> {
        match s {
            Stmt::True => Ok(()),
            Stmt::Fail(code) => Err(vec![code.to_string()]),
            Stmt::Cond(e) => match oracle_eval(env, g, e).map_err(|c| vec![c])? {
                Value::Bool(true) => Ok(()),
                Value::Bool(false) => Err(vec!["f".into()]),
                _ => Err(vec!["type_error".into()]),
            },
            Stmt::NegCond(e) => match oracle_eval(env, g, e).map_err(|c| vec![c])? {
                Value::Bool(false) => Ok(()),
                Value::Bool(true) => Err(vec!["f".into()]),
                _ => Err(vec!["type_error".into()]),
            },
            Stmt::Assign(x, e) => {
                let v = oracle_eval(env, g, e).map_err(|c| vec![c])?;
                g.insert(x.clone(), v);
                Ok(())
            }
            Stmt::Seq(a, b) => {
                self.exec(env, g, a)?;
                self.exec(env, g, b)
            }
            Stmt::Choose(alts) => {
                let mut codes = Vec::new();
                for alt in alts {
                    let copy = g.clone();
                    match self.exec(env, g, alt) {
                        Ok(()) => return Ok(()),
                        Err(c) => {
                            *g = copy;
                            codes.extend(c);
                        }
                    }
                }
                Err(codes)
            }
            Stmt::Call(name, args) => {
                let mut values = Vec::new();
                for a in args {
                    values.push(oracle_eval(env, g, a).map_err(|c| vec![c])?);
                }
                let Some(d) = self.defs.iter().find(|d| &d.name == name && d.params.len() == values.len()) else {
                    return Err(vec!["no_matching_procedure".into()]);
                };
                let local: Env = d.params.iter().cloned().zip(values).collect();
                self.exec(&local, g, &d.body)
            }
        }
    }
}

pub fn oracle_eval(env: &Env, g: &Globals, e: &Expr) -> Result<Value, String> {
    let te = || "type_error".to_string();
    Ok(match e {
        Expr::Lit(v) => v.clone(),
        Expr::Var(x) => env
            .get(x)
            .or_else(|| g.get(x))
            .cloned()
            .ok_or_else(|| "unbound_variable".to_string())?,
        Expr::Unary(UnOp::Neg, inner) => match oracle_eval(env, g, inner)? {
            Value::Int(n) => Value::Int(n.checked_neg().ok_or_else(te)?),
            _ => return Err(te()),
        },
        Expr::Unary(UnOp::Not, inner) => match oracle_eval(env, g, inner)? {
            Value::Bool(b) => Value::Bool(!b),
            _ => return Err(te()),
        },
        Expr::Binary(BinOp::And, l, r) => match oracle_eval(env, g, l)? {
            Value::Bool(false) => Value::Bool(false),
            Value::Bool(true) => match oracle_eval(env, g, r)? {
                b @ Value::Bool(_) => b,
                _ => return Err(te()),
            },
            _ => return Err(te()),
        },
        Expr::Binary(BinOp::Or, l, r) => match oracle_eval(env, g, l)? {
            Value::Bool(true) => Value::Bool(true),
            Value::Bool(false) => match oracle_eval(env, g, r)? {
                b @ Value::Bool(_) => b,
                _ => return Err(te()),
            },
            _ => return Err(te()),
        },
        Expr::Binary(op, l, r) => {
            let a = oracle_eval(env, g, l)?;
            let b = oracle_eval(env, g, r)?;
            match (op, a, b) {
                (BinOp::Add, Value::Int(x), Value::Int(y)) => Value::Int(x.checked_add(y).ok_or_else(te)?),
                (BinOp::Sub, Value::Int(x), Value::Int(y)) => Value::Int(x.checked_sub(y).ok_or_else(te)?),
                (BinOp::Mul, Value::Int(x), Value::Int(y)) => Value::Int(x.checked_mul(y).ok_or_else(te)?),
                (BinOp::Div | BinOp::Rem, Value::Int(_), Value::Int(0)) => return Err("division_by_zero".into()),
                (BinOp::Div, Value::Int(x), Value::Int(y)) => Value::Int(x.checked_div(y).ok_or_else(te)?),
                (BinOp::Rem, Value::Int(x), Value::Int(y)) => Value::Int(x.checked_rem(y).ok_or_else(te)?),
                (BinOp::Eq, Value::Int(x), Value::Int(y)) => Value::Bool(x == y),
                (BinOp::Eq, Value::Bool(x), Value::Bool(y)) => Value::Bool(x == y),
                (BinOp::Eq, Value::Str(x), Value::Str(y)) => Value::Bool(x == y),
                (BinOp::Ne, Value::Int(x), Value::Int(y)) => Value::Bool(x != y),
                (BinOp::Ne, Value::Bool(x), Value::Bool(y)) => Value::Bool(x != y),
                (BinOp::Ne, Value::Str(x), Value::Str(y)) => Value::Bool(x != y),
                (BinOp::Lt, Value::Int(x), Value::Int(y)) => Value::Bool(x < y),
                (BinOp::Le, Value::Int(x), Value::Int(y)) => Value::Bool(x <= y),
                (BinOp::Gt, Value::Int(x), Value::Int(y)) => Value::Bool(x > y),
                (BinOp::Ge, Value::Int(x), Value::Int(y)) => Value::Bool(x >= y),
                (BinOp::Lt, Value::Str(x), Value::Str(y)) => Value::Bool(x < y),
                (BinOp::Le, Value::Str(x), Value::Str(y)) => Value::Bool(x <= y),
                (BinOp::Gt, Value::Str(x), Value::Str(y)) => Value::Bool(x > y),
                (BinOp::Ge, Value::Str(x), Value::Str(y)) => Value::Bool(x >= y),
                _ => return Err(te()),
            }
        }
    })
}

// ---------------------------------------------------------------------------
// Trace instrumentation.

struct OpenChoose {
    depth: usize,
    entry: State,
    failed_before: bool,
    succeeded: bool,
}

/// Checks, at every `choose`, that each alternative after a failed one starts
/// from the choose-entry state, and that nothing runs after a success.
#[derive(Default)]
pub struct RollbackChecker {
    open: Vec<OpenChoose>,
    /// Alternatives entered after a failed predecessor.
    pub checked: usize,
    pub violations: Vec<String>,
}

impl TraceSink for RollbackChecker {
    fn record(&mut self, event: &TraceEvent, state: &State) {
        const SELECTION: u8 = 9;
        match event.kind {
            TraceKind::Enter => {
                if let Some(top) = self.open.last_mut() {
                    if event.depth == top.depth + 1 {
                        if top.succeeded {
                            self.violations.push(format!("alternative {} ran after a success", event.stmt));
                        } else if top.failed_before {
                            self.checked += 1;
                            if *state != top.entry {
                                self.violations.push(format!(
                                    "alternative {} entered with {:?}, choose entered with {:?}",
                                    event.stmt, state, top.entry
                                ));
                            }
                        }
                    }
                }
                if event.rule == SELECTION {
                    self.open.push(OpenChoose {
                        depth: event.depth,
                        entry: state.snapshot(),
                        failed_before: false,
                        succeeded: false,
                    });
                }
            }
            TraceKind::Exit => {
                if event.rule == SELECTION && self.open.last().is_some_and(|top| top.depth == event.depth) {
                    self.open.pop();
                }
                let Some(top) = self.open.last_mut() else { return };
                if event.depth == top.depth + 1 {
                    match event.outcome {
                        Some(TraceOutcome::Failure) => top.failed_before = true,
                        Some(TraceOutcome::Success) => top.succeeded = true,
                        None => {}
                    }
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// proptest strategies.

fn ident() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("x".to_string()),
        Just("y".to_string()),
        Just("emp".to_string()),
        "[a-z][a-z0-9_]{0,4}".prop_filter("keyword", |s| {
            !["t", "f", "proc", "choose", "true", "false"].contains(&s.as_str())
        }),
    ]
}

pub fn value() -> impl Strategy<Value = Value> {
    prop_oneof![
        any::<i64>().prop_map(Value::Int),
        (-5i64..5).prop_map(Value::Int),
        any::<bool>().prop_map(Value::Bool),
        "[a-z \"\\\\\n]{0,5}".prop_map(Value::Str),
    ]
}

pub fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![value().prop_map(Expr::Lit), ident().prop_map(Expr::Var)];
    leaf.prop_recursive(4, 24, 2, |inner| {
        let binop = prop_oneof![
            Just(BinOp::Add),
            Just(BinOp::Sub),
            Just(BinOp::Mul),
            Just(BinOp::Div),
            Just(BinOp::Rem),
            Just(BinOp::Eq),
            Just(BinOp::Ne),
            Just(BinOp::Lt),
            Just(BinOp::Le),
            Just(BinOp::Gt),
            Just(BinOp::Ge),
            Just(BinOp::And),
            Just(BinOp::Or),
        ];
        prop_oneof![
            (prop_oneof![Just(UnOp::Neg), Just(UnOp::Not)], inner.clone()).prop_map(|(op, e)| Expr::unary(op, e)),
            (binop, inner.clone(), inner).prop_map(|(op, l, r)| Expr::binary(op, l, r)),
        ]
    })
}

pub fn stmt() -> impl Strategy<Value = Stmt> {
    let code = prop_oneof![Just("f".to_string()), "[a-z_]{1,6}".prop_filter("reserved", |c| {
        ErrorCode::user(c.as_str()).is_ok()
    })];
    let leaf = prop_oneof![
        Just(Stmt::True),
        code.prop_map(|c| Stmt::Fail(ErrorCode::user(c).unwrap())),
        (ident(), prop::collection::vec(expr(), 0..3)).prop_map(|(n, a)| Stmt::Call(n, a)),
        expr().prop_map(Stmt::Cond),
        expr().prop_map(Stmt::NegCond),
        (ident(), expr()).prop_map(|(x, e)| Stmt::Assign(x, e)),
    ];
    leaf.prop_recursive(4, 32, 4, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Stmt::seq(a, b)),
            prop::collection::vec(inner, 1..4).prop_map(Stmt::Choose),
        ]
    })
}

/// Seed for proptest-driven fuzz cases.
pub fn fuzz_case() -> impl Strategy<Value = Case> {
    (any::<u64>(), 1u32..=6).prop_map(|(seed, depth)| Fuzz::new(seed).case(depth))
}

impl std::fmt::Debug for Case {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}goal: {}\nstate: {:?}",
            choose_lang::parser::print_program(&self.program),
            choose_lang::parser::print_stmt(&self.goal),
            self.program.state
        )
    }
}

pub fn rng_pick<T: Clone>(rng: &mut ChaCha8Rng, items: &[T]) -> T {
    items[rng.gen_range(0..items.len())].clone()
}
