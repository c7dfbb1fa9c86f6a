//! Abstract syntax of statements, procedure definitions and values.
//!
//! A statement is one of: `t`, `f` / `f(code)`, a procedure call, a boolean
//! condition, a negated condition, an assignment, a sequence `G; G` or a
//! selection `choose(G1, ..., Gn)`. A procedure definition binds a head
//! `p(x1, ..., xn)` to a body statement.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::state::State;

/// Code carried by bare `f`.
pub const GENERIC_FAILURE: &str = "f";
pub const UNBOUND_VARIABLE: &str = "unbound_variable";
pub const TYPE_ERROR: &str = "type_error";
pub const DIVISION_BY_ZERO: &str = "division_by_zero";
pub const NO_MATCHING_PROCEDURE: &str = "no_matching_procedure";
pub const DEPTH_EXCEEDED: &str = "depth_exceeded";

/// Codes the engine itself produces. User code may only raise `f` from this set.
pub const RESERVED_CODES: [&str; 6] = [
    GENERIC_FAILURE,
    UNBOUND_VARIABLE,
    TYPE_ERROR,
    DIVISION_BY_ZERO,
    NO_MATCHING_PROCEDURE,
    DEPTH_EXCEEDED,
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AstError {
    #[error("error codes must be non-empty")]
    EmptyErrorCode,
    #[error("error code {0:?} is reserved for the interpreter")]
    ReservedErrorCode(String),
    #[error("choose needs at least one alternative")]
    EmptyChoose,
    #[error("procedure {name}/{arity} is defined more than once")]
    DuplicateDefinition { name: String, arity: usize },
    #[error("parameter {param} of {name} is declared more than once")]
    DuplicateParameter { name: String, param: String },
    #[error("procedure {name} assigns to its parameter {param}")]
    AssignToParameter { name: String, param: String },
}

/// A runtime value. Comparisons are only defined between values of the same kind.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Int(i64),
    Bool(bool),
    Str(String),
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Int(_) => "int",
            Value::Bool(_) => "bool",
            Value::Str(_) => "string",
        }
    }
}

impl From<i64> for Value {
    fn from(n: i64) -> Self {
        Value::Int(n)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Str(s.to_owned())
    }
}

/// Renders integers in decimal, booleans as `true`/`false` and strings quoted
/// with `\"`, `\\` and `\n` escaped.
impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Str(s) => {
                f.write_str("\"")?;
                for c in s.chars() {
                    match c {
                        '"' => f.write_str("\\\"")?,
                        '\\' => f.write_str("\\\\")?,
                        '\n' => f.write_str("\\n")?,
                        c => write!(f, "{c}")?,
                    }
                }
                f.write_str("\"")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnOp {
    Neg,
    Not,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Rem,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Rem => "%",
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::And => "&&",
            BinOp::Or => "||",
        }
    }

    /// Binding strength; higher binds tighter. All levels are left-associative.
    pub fn precedence(self) -> u8 {
        match self {
            BinOp::Or => 1,
            BinOp::And => 2,
            BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => 3,
            BinOp::Add | BinOp::Sub => 4,
            BinOp::Mul | BinOp::Div | BinOp::Rem => 5,
        }
    }
}

/// Side-effect free expression.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Lit(Value),
    Var(String),
    Unary(UnOp, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn lit(v: impl Into<Value>) -> Self {
        Expr::Lit(v.into())
    }

    pub fn var(name: impl Into<String>) -> Self {
        Expr::Var(name.into())
    }

    pub fn unary(op: UnOp, e: Expr) -> Self {
        Expr::Unary(op, Box::new(e))
    }

    pub fn binary(op: BinOp, l: Expr, r: Expr) -> Self {
        Expr::Binary(op, Box::new(l), Box::new(r))
    }

    pub fn eq(l: Expr, r: Expr) -> Self {
        Expr::binary(BinOp::Eq, l, r)
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Lit(_) => {}
            Expr::Var(x) => {
                out.insert(x.clone());
            }
            Expr::Unary(_, e) => e.collect_vars(out),
            Expr::Binary(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }
}

/// An error code raised by `f(code)` or by the interpreter.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ErrorCode(String);

impl ErrorCode {
    /// Any non-empty code, reserved or not.
    pub fn new(code: impl Into<String>) -> Result<Self, AstError> {
        let code = code.into();
        if code.is_empty() {
            return Err(AstError::EmptyErrorCode);
        }
        Ok(ErrorCode(code))
    }

    /// A code a program may raise: non-empty and not one of the interpreter's
    /// own codes, except the generic `f`.
    pub fn user(code: impl Into<String>) -> Result<Self, AstError> {
        let code = ErrorCode::new(code)?;
        if code.is_reserved() && !code.is_generic() {
            return Err(AstError::ReservedErrorCode(code.0));
        }
        Ok(code)
    }

    pub fn generic() -> Self {
        ErrorCode(GENERIC_FAILURE.to_owned())
    }

    pub(crate) fn reserved(code: &'static str) -> Self {
        debug_assert!(RESERVED_CODES.contains(&code));
        ErrorCode(code.to_owned())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_generic(&self) -> bool {
        self.0 == GENERIC_FAILURE
    }

    pub fn is_reserved(&self) -> bool {
        RESERVED_CODES.contains(&self.0.as_str())
    }
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A statement.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Stmt {
    /// `t`
    True,
    /// `f` or `f("code")`
    Fail(ErrorCode),
    Call(String, Vec<Expr>),
    Cond(Expr),
    NegCond(Expr),
    Assign(String, Expr),
    Seq(Box<Stmt>, Box<Stmt>),
    /// Never empty; build through [`Stmt::choose`].
    Choose(Vec<Stmt>),
}

impl Stmt {
    pub fn fail(code: &str) -> Result<Self, AstError> {
        Ok(Stmt::Fail(ErrorCode::user(code)?))
    }

    pub fn call(name: impl Into<String>, args: Vec<Expr>) -> Self {
        Stmt::Call(name.into(), args)
    }

    pub fn assign(var: impl Into<String>, e: Expr) -> Self {
        Stmt::Assign(var.into(), e)
    }

    pub fn seq(first: Stmt, second: Stmt) -> Self {
        Stmt::Seq(Box::new(first), Box::new(second))
    }

    /// Right-nested sequence of `stmts`; `t` when empty.
    pub fn seq_all(stmts: impl IntoIterator<Item = Stmt>) -> Self {
        let mut stmts: Vec<Stmt> = stmts.into_iter().collect();
        let Some(mut acc) = stmts.pop() else {
            return Stmt::True;
        };
        while let Some(s) = stmts.pop() {
            acc = Stmt::seq(s, acc);
        }
        acc
    }

    pub fn choose(alts: Vec<Stmt>) -> Result<Self, AstError> {
        if alts.is_empty() {
            return Err(AstError::EmptyChoose);
        }
        Ok(Stmt::Choose(alts))
    }

    /// Every variable name occurring in the statement: expression operands,
    /// assignment targets and call arguments.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Stmt::True | Stmt::Fail(_) => {}
            Stmt::Call(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            Stmt::Cond(e) | Stmt::NegCond(e) => e.collect_vars(out),
            Stmt::Assign(x, e) => {
                out.insert(x.clone());
                e.collect_vars(out);
            }
            Stmt::Seq(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Stmt::Choose(alts) => alts.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    fn assigned_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Stmt::Assign(x, _) => {
                out.insert(x.clone());
            }
            Stmt::Seq(a, b) => {
                a.assigned_vars(out);
                b.assigned_vars(out);
            }
            Stmt::Choose(alts) => alts.iter().for_each(|a| a.assigned_vars(out)),
            _ => {}
        }
    }
}

/// Structural equality of two statements.
pub fn stmt_equal(a: &Stmt, b: &Stmt) -> bool {
    a == b
}

/// Free variables of a statement; see [`Stmt::free_vars`].
pub fn free_vars(s: &Stmt) -> BTreeSet<String> {
    s.free_vars()
}

/// A procedure definition `name(params) = body`.
///
/// Parameters are instantiated by substitution, so the body may read them but
/// never assign to them. Any other variable in the body is global.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Defn {
    pub name: String,
    pub params: Vec<String>,
    pub body: Stmt,
}

impl Defn {
    pub fn new(name: impl Into<String>, params: Vec<String>, body: Stmt) -> Result<Self, AstError> {
        let name = name.into();
        let mut seen = HashSet::new();
        for p in &params {
            if !seen.insert(p.as_str()) {
                return Err(AstError::DuplicateParameter { name, param: p.clone() });
            }
        }
        let mut assigned = BTreeSet::new();
        body.assigned_vars(&mut assigned);
        if let Some(p) = params.iter().find(|p| assigned.contains(*p)) {
            return Err(AstError::AssignToParameter { name, param: p.clone() });
        }
        Ok(Defn { name, params, body })
    }

    pub fn arity(&self) -> usize {
        self.params.len()
    }
}

/// Procedure definitions together with the machine state.
#[derive(Debug, Clone, Default)]
pub struct Program {
    defs: Vec<Defn>,
    pub state: State,
}

impl Program {
    /// Fails if two definitions share a name and arity.
    pub fn new(defs: Vec<Defn>) -> Result<Self, AstError> {
        let mut seen = HashSet::new();
        for d in &defs {
            if !seen.insert((d.name.as_str(), d.arity())) {
                return Err(AstError::DuplicateDefinition {
                    name: d.name.clone(),
                    arity: d.arity(),
                });
            }
        }
        Ok(Program { defs, state: State::new() })
    }

    /// Skips the uniqueness check, so calls can see several candidates.
    #[cfg(test)]
    pub(crate) fn allowing_duplicates(defs: Vec<Defn>) -> Self {
        Program { defs, state: State::new() }
    }

    pub fn with_state(mut self, state: State) -> Self {
        self.state = state;
        self
    }

    pub fn defs(&self) -> &[Defn] {
        &self.defs
    }

    /// Definitions matching `name/arity`, in declaration order.
    pub fn candidates<'a>(&'a self, name: &'a str, arity: usize) -> impl Iterator<Item = &'a Defn> + 'a {
        self.defs
            .iter()
            .filter(move |d| d.name == name && d.arity() == arity)
    }
}

/// Result of executing a statement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Success(State),
    /// Never empty.
    Failure(Vec<ErrorCode>),
}

impl Outcome {
    pub fn is_success(&self) -> bool {
        matches!(self, Outcome::Success(_))
    }

    pub fn codes(&self) -> &[ErrorCode] {
        match self {
            Outcome::Success(_) => &[],
            Outcome::Failure(codes) => codes,
        }
    }
}
