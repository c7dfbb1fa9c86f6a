//! Translation of `if`/`else`, `switch` and `try`/`catch` into `choose`.
//!
//! * `if (c) S else T` becomes `choose(c; S, !c; T)`; a missing `else` is `t`.
//! * `switch (e) { case v1: S1 ... default: D }` becomes
//!   `choose(e == v1; S1, ..., true; D)`; a missing `default` is `t`.
//! * `try B catch H` becomes `choose(B, H)`. Several `catch` blocks nest, so
//!   each handler covers the failure of everything before it.
//!
//! The source syntax is a small Java-flavored language, see [`parse_sugar`].

mod parse;

use crate::ast::{AstError, Defn, Expr, Program, Stmt, Value};

pub use parse::{parse_sugar, parse_sugar_program, translate};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SugarStmt {
    IfThenElse {
        cond: Expr,
        then: Box<SugarStmt>,
        otherwise: Option<Box<SugarStmt>>,
    },
    /// Case labels are pairwise distinct.
    Switch {
        scrutinee: Expr,
        cases: Vec<(Value, SugarStmt)>,
        default: Option<Box<SugarStmt>>,
    },
    TryCatch {
        body: Box<SugarStmt>,
        handler: Box<SugarStmt>,
    },
    Plain(Stmt),
    Seq(Box<SugarStmt>, Box<SugarStmt>),
}

impl SugarStmt {
    pub fn if_then(cond: Expr, then: SugarStmt, otherwise: Option<SugarStmt>) -> Self {
        SugarStmt::IfThenElse {
            cond,
            then: Box::new(then),
            otherwise: otherwise.map(Box::new),
        }
    }

    pub fn try_catch(body: SugarStmt, handler: SugarStmt) -> Self {
        SugarStmt::TryCatch {
            body: Box::new(body),
            handler: Box::new(handler),
        }
    }

    pub fn seq(first: SugarStmt, second: SugarStmt) -> Self {
        SugarStmt::Seq(Box::new(first), Box::new(second))
    }

    /// Right-nested sequence; `t` when empty.
    pub fn seq_all(stmts: Vec<SugarStmt>) -> Self {
        let mut stmts = stmts;
        let Some(mut acc) = stmts.pop() else {
            return SugarStmt::Plain(Stmt::True);
        };
        while let Some(s) = stmts.pop() {
            acc = SugarStmt::seq(s, acc);
        }
        acc
    }
}

/// A procedure whose body may use the sugared constructs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SugarDefn {
    pub name: String,
    pub params: Vec<String>,
    pub body: SugarStmt,
}

pub fn desugar(s: &SugarStmt) -> Stmt {
    match s {
        SugarStmt::IfThenElse { cond, then, otherwise } => Stmt::Choose(vec![
            Stmt::seq(Stmt::Cond(cond.clone()), desugar(then)),
            Stmt::seq(Stmt::NegCond(cond.clone()), desugar_or_true(otherwise.as_deref())),
        ]),
        SugarStmt::Switch {
            scrutinee,
            cases,
            default,
        } => {
            let mut alts: Vec<Stmt> = cases
                .iter()
                .map(|(label, body)| {
                    let guard = Expr::eq(scrutinee.clone(), Expr::Lit(label.clone()));
                    Stmt::seq(Stmt::Cond(guard), desugar(body))
                })
                .collect();
            alts.push(Stmt::seq(
                Stmt::Cond(Expr::lit(true)),
                desugar_or_true(default.as_deref()),
            ));
            Stmt::Choose(alts)
        }
        SugarStmt::TryCatch { body, handler } => Stmt::Choose(vec![desugar(body), desugar(handler)]),
        SugarStmt::Plain(s) => s.clone(),
        SugarStmt::Seq(a, b) => Stmt::seq(desugar(a), desugar(b)),
    }
}

fn desugar_or_true(s: Option<&SugarStmt>) -> Stmt {
    s.map_or(Stmt::True, desugar)
}

pub fn desugar_defn(d: &SugarDefn) -> Result<Defn, AstError> {
    Defn::new(d.name.clone(), d.params.clone(), desugar(&d.body))
}

pub fn desugar_program(defs: &[SugarDefn]) -> Result<Program, AstError> {
    Program::new(defs.iter().map(desugar_defn).collect::<Result<_, _>>()?)
}
