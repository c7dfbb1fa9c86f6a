//! Concrete syntax for programs and goals.
//!
//! ```text
//! program := { procdef }
//! procdef := "proc" IDENT "(" [ IDENT { "," IDENT } ] ")" "{" stmt "}"
//! stmt    := basic { ";" basic } [ ";" ]
//! basic   := "t" | "f" [ "(" STRING ")" ]
//!          | "choose" "(" stmt { "," stmt } ")"
//!          | "{" stmt "}"
//!          | IDENT "=" expr
//!          | IDENT "(" [ expr { "," expr } ] ")"
//!          | "!" expr                      // negated condition
//!          | expr                          // condition
//! expr    := or-expr, with `||` < `&&` < comparisons < `+ -` < `* / %` < unary `! -`
//! atom    := INT | STRING | "true" | "false" | IDENT | "(" expr ")"
//! ```
//!
//! `//` starts a comment that runs to the end of the line. Sequences nest to
//! the right; braces group a sequence that has to appear as the left operand
//! of another sequence.

mod lexer;
mod print;

use std::fmt;

use thiserror::Error;

use crate::ast::{BinOp, Defn, ErrorCode, Expr, Program, Stmt, UnOp, Value};
use crate::state::State;

pub(crate) use lexer::Tok;
use lexer::Token;
pub use print::{print_expr, print_program, print_stmt};

const KEYWORDS: [&str; 6] = ["proc", "t", "f", "choose", "true", "false"];

/// 1-based line and column; columns count characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct SourcePos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourcePos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {message}{}", expected_suffix(.expected))]
pub struct ParseError {
    pub pos: SourcePos,
    pub message: String,
    pub expected: Vec<String>,
}

fn expected_suffix(expected: &[String]) -> String {
    if expected.is_empty() {
        String::new()
    } else {
        format!(" (expected {})", expected.join(", "))
    }
}

impl ParseError {
    pub fn new(pos: SourcePos, message: impl Into<String>) -> Self {
        ParseError {
            pos,
            message: message.into(),
            expected: Vec::new(),
        }
    }
}

/// Parses a sequence of procedure definitions. The state starts empty.
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let mut p = Parser::new(text)?;
    let mut defs: Vec<Defn> = Vec::new();
    while !p.at(&Tok::Eof) {
        let pos = p.pos();
        let defn = p.procdef()?;
        if defs.iter().any(|d| d.name == defn.name && d.arity() == defn.arity()) {
            return Err(ParseError::new(
                pos,
                format!("procedure {}/{} is already defined", defn.name, defn.arity()),
            ));
        }
        defs.push(defn);
    }
    Program::new(defs).map_err(|e| ParseError::new(p.pos(), e.to_string()))
}

/// Parses a single statement.
pub fn parse_goal(text: &str) -> Result<Stmt, ParseError> {
    let mut p = Parser::new(text)?;
    let s = p.stmt()?;
    p.expect_eof()?;
    Ok(s)
}

/// Parses a literal: an integer (optionally negative), a string, `true` or `false`.
pub fn parse_value(text: &str) -> Result<Value, ParseError> {
    let mut p = Parser::new(text)?;
    let v = p.literal()?;
    p.expect_eof()?;
    Ok(v)
}

/// Parses comma-separated `name=literal` pairs into a state. Later pairs
/// overwrite earlier ones.
pub fn parse_state(text: &str) -> Result<State, ParseError> {
    let mut p = Parser::new(text)?;
    let mut state = State::new();
    if p.at(&Tok::Eof) {
        return Ok(state);
    }
    loop {
        let name = p.ident()?;
        p.expect(Tok::Assign)?;
        let value = p.literal()?;
        state.set(&name, value);
        if !p.eat(&Tok::Comma) {
            break;
        }
    }
    p.expect_eof()?;
    Ok(state)
}

pub(crate) struct Parser {
    tokens: Vec<Token>,
    idx: usize,
}

impl Parser {
    pub(crate) fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            tokens: lexer::tokenize(text)?,
            idx: 0,
        })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.tokens[self.idx].tok
    }

    pub(crate) fn peek_nth(&self, n: usize) -> &Tok {
        let i = (self.idx + n).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    pub(crate) fn pos(&self) -> SourcePos {
        self.tokens[self.idx].pos
    }

    pub(crate) fn at(&self, tok: &Tok) -> bool {
        self.peek() == tok
    }

    pub(crate) fn at_word(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(name) if name == word)
    }

    fn bump(&mut self) -> Tok {
        let tok = self.tokens[self.idx].tok.clone();
        if self.idx + 1 < self.tokens.len() {
            self.idx += 1;
        }
        tok
    }

    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if self.at(tok) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn eat_word(&mut self, word: &str) -> bool {
        if self.at_word(word) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn unexpected(&self, expected: &[&str]) -> ParseError {
        ParseError {
            pos: self.pos(),
            message: format!("unexpected {}", self.peek().describe()),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub(crate) fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.unexpected(&[&format!("`{}`", tok.symbol())]))
        }
    }

    pub(crate) fn expect_word(&mut self, word: &str) -> Result<(), ParseError> {
        if self.eat_word(word) {
            Ok(())
        } else {
            Err(self.unexpected(&[&format!("`{word}`")]))
        }
    }

    pub(crate) fn expect_eof(&mut self) -> Result<(), ParseError> {
        if self.at(&Tok::Eof) {
            Ok(())
        } else {
            Err(self.unexpected(&["end of input"]))
        }
    }

    pub(crate) fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) => {
                let name = name.clone();
                self.bump();
                Ok(name)
            }
            _ => Err(self.unexpected(&["identifier"])),
        }
    }

    pub(crate) fn string(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Tok::Str(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected(&["string literal"])),
        }
    }

    pub(crate) fn literal(&mut self) -> Result<Value, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Minus => {
                self.bump();
                match self.peek().clone() {
                    Tok::Int(n) => {
                        self.bump();
                        negative_literal(n, pos)
                    }
                    _ => Err(self.unexpected(&["integer"])),
                }
            }
            Tok::Int(n) => {
                self.bump();
                positive_literal(n, pos)
            }
            Tok::Str(s) => {
                self.bump();
                Ok(Value::Str(s))
            }
            Tok::Ident(w) if w == "true" || w == "false" => {
                self.bump();
                Ok(Value::Bool(w == "true"))
            }
            _ => Err(self.unexpected(&["integer", "string literal", "`true`", "`false`"])),
        }
    }

    fn params(&mut self) -> Result<Vec<String>, ParseError> {
        self.expect(Tok::LParen)?;
        let mut params = Vec::new();
        if !self.eat(&Tok::RParen) {
            loop {
                params.push(self.ident()?);
                if self.eat(&Tok::RParen) {
                    break;
                }
                if !self.eat(&Tok::Comma) {
                    return Err(self.unexpected(&["`,`", "`)`"]));
                }
            }
        }
        Ok(params)
    }

    /// Head of a definition after the introducing keyword: name and parameters.
    pub(crate) fn head(&mut self) -> Result<(SourcePos, String, Vec<String>), ParseError> {
        let pos = self.pos();
        let name = self.ident()?;
        let params = self.params()?;
        Ok((pos, name, params))
    }

    fn procdef(&mut self) -> Result<Defn, ParseError> {
        self.expect_word("proc")?;
        let (pos, name, params) = self.head()?;
        self.expect(Tok::LBrace)?;
        let body = self.stmt()?;
        self.expect(Tok::RBrace)?;
        Defn::new(name, params, body).map_err(|e| ParseError::new(pos, e.to_string()))
    }

    fn at_stmt_end(&self) -> bool {
        matches!(self.peek(), Tok::RBrace | Tok::RParen | Tok::Comma | Tok::Eof)
    }

    pub(crate) fn stmt(&mut self) -> Result<Stmt, ParseError> {
        let mut parts = vec![self.basic()?];
        while self.eat(&Tok::Semi) {
            if self.at_stmt_end() {
                break;
            }
            parts.push(self.basic()?);
        }
        Ok(Stmt::seq_all(parts))
    }

    pub(crate) fn basic(&mut self) -> Result<Stmt, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::LBrace => {
                self.bump();
                let s = self.stmt()?;
                self.expect(Tok::RBrace)?;
                Ok(s)
            }
            Tok::Bang => match self.expr()? {
                Expr::Unary(UnOp::Not, inner) => Ok(Stmt::NegCond(*inner)),
                other => Ok(Stmt::Cond(other)),
            },
            Tok::Ident(w) if w == "t" => {
                self.bump();
                Ok(Stmt::True)
            }
            Tok::Ident(w) if w == "f" => {
                self.bump();
                if !self.eat(&Tok::LParen) {
                    return Ok(Stmt::Fail(ErrorCode::generic()));
                }
                let code_pos = self.pos();
                let code = self.string()?;
                self.expect(Tok::RParen)?;
                let code = ErrorCode::user(code).map_err(|e| ParseError::new(code_pos, e.to_string()))?;
                Ok(Stmt::Fail(code))
            }
            Tok::Ident(w) if w == "choose" => {
                self.bump();
                self.expect(Tok::LParen)?;
                if self.at(&Tok::RParen) {
                    return Err(ParseError {
                        pos: self.pos(),
                        message: "choose needs at least one alternative".into(),
                        expected: vec!["statement".into()],
                    });
                }
                let mut alts = vec![self.stmt()?];
                while self.eat(&Tok::Comma) {
                    alts.push(self.stmt()?);
                }
                self.expect(Tok::RParen)?;
                Stmt::choose(alts).map_err(|e| ParseError::new(pos, e.to_string()))
            }
            Tok::Ident(w) if !KEYWORDS.contains(&w.as_str()) && self.peek_nth(1) == &Tok::Assign => {
                self.bump();
                self.bump();
                Ok(Stmt::Assign(w, self.expr()?))
            }
            Tok::Ident(w) if !KEYWORDS.contains(&w.as_str()) && self.peek_nth(1) == &Tok::LParen => {
                self.bump();
                self.bump();
                let mut args = Vec::new();
                if !self.eat(&Tok::RParen) {
                    loop {
                        args.push(self.expr()?);
                        if self.eat(&Tok::RParen) {
                            break;
                        }
                        if !self.eat(&Tok::Comma) {
                            return Err(self.unexpected(&["`,`", "`)`"]));
                        }
                    }
                }
                Ok(Stmt::Call(w, args))
            }
            _ => Ok(Stmt::Cond(self.expr()?)),
        }
    }

    pub(crate) fn expr(&mut self) -> Result<Expr, ParseError> {
        self.binary(1)
    }

    fn binary_op(&self) -> Option<BinOp> {
        Some(match self.peek() {
            Tok::OrOr => BinOp::Or,
            Tok::AndAnd => BinOp::And,
            Tok::EqEq => BinOp::Eq,
            Tok::NotEq => BinOp::Ne,
            Tok::Lt => BinOp::Lt,
            Tok::Le => BinOp::Le,
            Tok::Gt => BinOp::Gt,
            Tok::Ge => BinOp::Ge,
            Tok::Plus => BinOp::Add,
            Tok::Minus => BinOp::Sub,
            Tok::Star => BinOp::Mul,
            Tok::Slash => BinOp::Div,
            Tok::Percent => BinOp::Rem,
            _ => return None,
        })
    }

    fn binary(&mut self, min_prec: u8) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.binary_op().filter(|op| op.precedence() >= min_prec) {
            self.bump();
            let rhs = self.binary(op.precedence() + 1)?;
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(Expr::unary(UnOp::Not, self.unary()?))
            }
            Tok::Minus => {
                self.bump();
                if let Tok::Int(n) = *self.peek() {
                    self.bump();
                    return Ok(Expr::Lit(negative_literal(n, pos)?));
                }
                Ok(Expr::unary(UnOp::Neg, self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Lit(positive_literal(n, pos)?))
            }
            Tok::Str(s) => {
                self.bump();
                Ok(Expr::Lit(Value::Str(s)))
            }
            Tok::Ident(w) if w == "true" || w == "false" => {
                self.bump();
                Ok(Expr::Lit(Value::Bool(w == "true")))
            }
            Tok::Ident(w) if !KEYWORDS.contains(&w.as_str()) => {
                self.bump();
                Ok(Expr::Var(w))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            _ => Err(self.unexpected(&["expression"])),
        }
    }
}

fn positive_literal(n: u64, pos: SourcePos) -> Result<Value, ParseError> {
    i64::try_from(n)
        .map(Value::Int)
        .map_err(|_| ParseError::new(pos, format!("integer literal {n} is out of range")))
}

fn negative_literal(n: u64, pos: SourcePos) -> Result<Value, ParseError> {
    0i64.checked_sub_unsigned(n)
        .map(Value::Int)
        .ok_or_else(|| ParseError::new(pos, format!("integer literal -{n} is out of range")))
}
