use std::fmt::Write;

use crate::ast::{Expr, Program, Stmt, UnOp, Value};

/// Canonical surface text of a statement. `parse_goal` inverts it.
pub fn print_stmt(s: &Stmt) -> String {
    let mut out = String::new();
    write_stmt(&mut out, s);
    out
}

pub fn print_expr(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(&mut out, e, 0);
    out
}

/// Canonical text of every definition, one procedure per block.
pub fn print_program(p: &Program) -> String {
    let mut out = String::new();
    for (i, d) in p.defs().iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "proc {}({}) {{", d.name, d.params.join(", "));
        let _ = writeln!(out, "    {};", print_stmt(&d.body));
        out.push_str("}\n");
    }
    out
}

fn write_stmt(out: &mut String, s: &Stmt) {
    match s {
        Stmt::True => out.push('t'),
        Stmt::Fail(code) if code.is_generic() => out.push('f'),
        Stmt::Fail(code) => {
            let _ = write!(out, "f({})", Value::Str(code.as_str().to_owned()));
        }
        Stmt::Call(name, args) => {
            out.push_str(name);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_expr(out, a, 0);
            }
            out.push(')');
        }
        // A leading `!` would read back as a negated condition.
        Stmt::Cond(e @ Expr::Unary(UnOp::Not, _)) => {
            out.push('(');
            write_expr(out, e, 0);
            out.push(')');
        }
        Stmt::Cond(e) => write_expr(out, e, 0),
        Stmt::NegCond(e) => {
            out.push('!');
            write_expr(out, e, UNARY_PREC);
        }
        Stmt::Assign(x, e) => {
            out.push_str(x);
            out.push_str(" = ");
            write_expr(out, e, 0);
        }
        Stmt::Seq(a, b) => {
            if let Stmt::Seq(..) = **a {
                out.push_str("{ ");
                write_stmt(out, a);
                out.push_str(" }");
            } else {
                write_stmt(out, a);
            }
            out.push_str("; ");
            write_stmt(out, b);
        }
        Stmt::Choose(alts) => {
            out.push_str("choose(");
            for (i, a) in alts.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_stmt(out, a);
            }
            out.push(')');
        }
    }
}

const UNARY_PREC: u8 = 6;

fn write_expr(out: &mut String, e: &Expr, min_prec: u8) {
    match e {
        Expr::Lit(v) => {
            let _ = write!(out, "{v}");
        }
        Expr::Var(x) => out.push_str(x),
        // `-5` would read back as a negative literal.
        Expr::Unary(UnOp::Neg, inner) if matches!(**inner, Expr::Lit(Value::Int(n)) if n >= 0) => {
            out.push_str("-(");
            write_expr(out, inner, 0);
            out.push(')');
        }
        Expr::Unary(op, inner) => {
            out.push(match op {
                UnOp::Neg => '-',
                UnOp::Not => '!',
            });
            write_expr(out, inner, UNARY_PREC);
        }
        Expr::Binary(op, l, r) => {
            let prec = op.precedence();
            let wrap = prec < min_prec;
            if wrap {
                out.push('(');
            }
            write_expr(out, l, prec);
            let _ = write!(out, " {} ", op.symbol());
            write_expr(out, r, prec + 1);
            if wrap {
                out.push(')');
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::BinOp;
    use crate::parser::{parse_goal, parse_program};

    #[test]
    fn canonical_forms() {
        assert_eq!(print_stmt(&Stmt::True), "t");
        let s = Stmt::Choose(vec![
            Stmt::Cond(Expr::eq(Expr::var("x"), Expr::lit(1))),
            Stmt::True,
        ]);
        assert_eq!(print_stmt(&s), "choose(x == 1, t)");
        assert_eq!(print_stmt(&Stmt::fail("net").unwrap()), r#"f("net")"#);
        assert_eq!(print_stmt(&Stmt::fail("f").unwrap()), "f");
    }

    #[test]
    fn parenthesizes_by_precedence() {
        let e = Expr::binary(
            BinOp::Mul,
            Expr::binary(BinOp::Add, Expr::var("a"), Expr::var("b")),
            Expr::binary(BinOp::Sub, Expr::var("c"), Expr::lit(-1)),
        );
        assert_eq!(print_expr(&e), "(a + b) * (c - -1)");
        let e = Expr::binary(
            BinOp::Sub,
            Expr::var("a"),
            Expr::binary(BinOp::Sub, Expr::var("b"), Expr::var("c")),
        );
        assert_eq!(print_expr(&e), "a - (b - c)");
        assert_eq!(print_expr(&Expr::unary(UnOp::Neg, Expr::lit(3))), "-(3)");
        assert_eq!(
            print_stmt(&Stmt::NegCond(Expr::eq(Expr::var("x"), Expr::lit(0)))),
            "!(x == 0)"
        );
    }

    #[test]
    fn tricky_shapes_round_trip() {
        let cases = [
            Stmt::Cond(Expr::unary(UnOp::Not, Expr::var("x"))),
            Stmt::NegCond(Expr::unary(UnOp::Not, Expr::var("x"))),
            Stmt::NegCond(Expr::lit(-5)),
            Stmt::seq(
                Stmt::seq(Stmt::True, Stmt::fail("a").unwrap()),
                Stmt::seq(Stmt::True, Stmt::True),
            ),
            Stmt::assign("x", Expr::unary(UnOp::Neg, Expr::lit(i64::MIN))),
            Stmt::assign("s", Expr::lit("q\"\\\n")),
            Stmt::Choose(vec![Stmt::Choose(vec![Stmt::seq(Stmt::True, Stmt::True)])]),
        ];
        for s in cases {
            let text = print_stmt(&s);
            assert_eq!(parse_goal(&text).unwrap(), s, "{text}");
        }
    }

    #[test]
    fn program_round_trip() {
        let src = "proc a(x, y) { r = x + y }\nproc b() { choose(a(1, 2), t) }";
        let p = parse_program(src).unwrap();
        let printed = print_program(&p);
        assert_eq!(
            printed,
            "proc a(x, y) {\n    r = x + y;\n}\n\nproc b() {\n    choose(a(1, 2), t);\n}\n"
        );
        assert_eq!(parse_program(&printed).unwrap().defs(), p.defs());
    }
}
