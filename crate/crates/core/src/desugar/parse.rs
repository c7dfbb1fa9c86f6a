//! Front end for the Java-flavored source accepted by `choose translate`.
//!
//! ```text
//! file   := { defn }
//! defn   := [ "proc" ] IDENT "(" [ IDENT { "," IDENT } ] ")" block
//! block  := "{" { jstmt } "}"
//! jstmt  := "if" "(" expr ")" block [ "else" ( block | if-jstmt ) ]
//!         | "switch" "(" expr ")" "{" { case } [ "default" ":" { jstmt } [ "break" ";" ] ] "}"
//!         | "try" block "catch" block { "catch" block }
//!         | "throw" STRING ";"
//!         | block
//!         | basic ";"
//! case   := "case" literal ":" { jstmt } "break" ";"     // `break` optional on the last case
//! ```
//!
//! `basic` and `expr` are the core statement and expression forms, so
//! assignments, calls, `t`, `f(..)`, conditions and `choose(..)` may appear
//! directly. A case that does not end in `break` may not be followed by
//! another label.

use crate::ast::{Defn, ErrorCode, Expr, Program, Stmt, Value};
use crate::parser::{ParseError, Parser, SourcePos, Tok};

use super::{desugar_defn, SugarDefn, SugarStmt};

const JAVA_KEYWORDS: [&str; 9] = [
    "if", "else", "switch", "case", "default", "break", "try", "catch", "throw",
];

/// Parses a sequence of statements.
pub fn parse_sugar(text: &str) -> Result<SugarStmt, ParseError> {
    let mut p = Parser::new(text)?;
    let mut stmts = Vec::new();
    while !p.at(&Tok::Eof) {
        stmts.push(jstmt(&mut p)?);
    }
    Ok(SugarStmt::seq_all(stmts))
}

pub fn parse_sugar_program(text: &str) -> Result<Vec<SugarDefn>, ParseError> {
    Ok(located_defns(text)?.into_iter().map(|(_, d)| d).collect())
}

fn located_defns(text: &str) -> Result<Vec<(SourcePos, SugarDefn)>, ParseError> {
    let mut p = Parser::new(text)?;
    let mut defs = Vec::new();
    while !p.at(&Tok::Eof) {
        let pos = p.pos();
        p.eat_word("proc");
        let (_, name, params) = p.head()?;
        let body = block(&mut p)?;
        defs.push((pos, SugarDefn { name, params, body }));
    }
    Ok(defs)
}

/// Parses and desugars a whole file into a program.
pub fn translate(text: &str) -> Result<Program, ParseError> {
    let located = located_defns(text)?;
    let mut defs: Vec<Defn> = Vec::with_capacity(located.len());
    for (pos, d) in &located {
        let defn = desugar_defn(d).map_err(|e| ParseError::new(*pos, e.to_string()))?;
        if defs.iter().any(|seen| seen.name == defn.name && seen.arity() == defn.arity()) {
            return Err(ParseError::new(
                *pos,
                format!("procedure {}/{} is already defined", defn.name, defn.arity()),
            ));
        }
        defs.push(defn);
    }
    Program::new(defs).map_err(|e| ParseError::new(SourcePos { line: 1, column: 1 }, e.to_string()))
}

fn block(p: &mut Parser) -> Result<SugarStmt, ParseError> {
    p.expect(Tok::LBrace)?;
    let mut stmts = Vec::new();
    while !p.eat(&Tok::RBrace) {
        if p.at(&Tok::Eof) {
            return Err(p.unexpected(&["`}`"]));
        }
        stmts.push(jstmt(p)?);
    }
    Ok(SugarStmt::seq_all(stmts))
}

fn paren_expr(p: &mut Parser) -> Result<Expr, ParseError> {
    p.expect(Tok::LParen)?;
    let e = p.expr()?;
    p.expect(Tok::RParen)?;
    Ok(e)
}

fn jstmt(p: &mut Parser) -> Result<SugarStmt, ParseError> {
    if p.at(&Tok::LBrace) {
        return block(p);
    }
    if p.eat_word("if") {
        return if_rest(p);
    }
    if p.eat_word("switch") {
        return switch_rest(p);
    }
    if p.eat_word("try") {
        let mut acc = block(p)?;
        p.expect_word("catch")?;
        acc = SugarStmt::try_catch(acc, block(p)?);
        while p.eat_word("catch") {
            acc = SugarStmt::try_catch(acc, block(p)?);
        }
        return Ok(acc);
    }
    if p.eat_word("throw") {
        let pos = p.pos();
        let code = p.string()?;
        let code = ErrorCode::user(code).map_err(|e| ParseError::new(pos, e.to_string()))?;
        p.expect(Tok::Semi)?;
        return Ok(SugarStmt::Plain(Stmt::Fail(code)));
    }
    if let Some(word) = JAVA_KEYWORDS.iter().find(|w| p.at_word(w)) {
        return Err(ParseError {
            pos: p.pos(),
            message: format!("`{word}` cannot start a statement here"),
            expected: vec!["statement".into()],
        });
    }
    let s = p.basic()?;
    p.expect(Tok::Semi)?;
    Ok(SugarStmt::Plain(s))
}

fn if_rest(p: &mut Parser) -> Result<SugarStmt, ParseError> {
    let cond = paren_expr(p)?;
    let then = block(p)?;
    let otherwise = if p.eat_word("else") {
        if p.eat_word("if") {
            Some(if_rest(p)?)
        } else {
            Some(block(p)?)
        }
    } else {
        None
    };
    Ok(SugarStmt::if_then(cond, then, otherwise))
}

fn switch_rest(p: &mut Parser) -> Result<SugarStmt, ParseError> {
    let scrutinee = paren_expr(p)?;
    p.expect(Tok::LBrace)?;
    let mut cases: Vec<(Value, SugarStmt)> = Vec::new();
    let mut default = None;
    // Whether the previous label's body was closed by `break`.
    let mut closed = true;
    loop {
        let pos = p.pos();
        if p.eat(&Tok::RBrace) {
            break;
        }
        if default.is_some() {
            return Err(p.unexpected(&["`}`"]));
        }
        if !p.at_word("case") && !p.at_word("default") {
            return Err(p.unexpected(&["`case`", "`default`", "`}`"]));
        }
        if !closed {
            return Err(ParseError {
                pos,
                message: "missing `break` before this label; fall-through is not supported".into(),
                expected: vec!["`break`".into()],
            });
        }
        let label = if p.eat_word("case") {
            let label_pos = p.pos();
            let v = p.literal()?;
            if cases.iter().any(|(seen, _)| *seen == v) {
                return Err(ParseError::new(label_pos, format!("duplicate case label {v}")));
            }
            Some(v)
        } else {
            p.expect_word("default")?;
            None
        };
        p.expect(Tok::Colon)?;
        let mut body = Vec::new();
        closed = false;
        loop {
            if p.eat_word("break") {
                p.expect(Tok::Semi)?;
                closed = true;
                break;
            }
            if p.at_word("case") || p.at_word("default") || p.at(&Tok::RBrace) {
                break;
            }
            if p.at(&Tok::Eof) {
                return Err(p.unexpected(&["`}`"]));
            }
            body.push(jstmt(p)?);
        }
        let body = SugarStmt::seq_all(body);
        match label {
            Some(v) => cases.push((v, body)),
            None => default = Some(Box::new(body)),
        }
    }
    Ok(SugarStmt::Switch {
        scrutinee,
        cases,
        default,
    })
}
