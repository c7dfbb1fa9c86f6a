use crate::ast::{
    BinOp, ErrorCode, Expr, UnOp, Value, DIVISION_BY_ZERO, TYPE_ERROR, UNBOUND_VARIABLE,
};
use crate::state::State;

fn type_error() -> ErrorCode {
    ErrorCode::reserved(TYPE_ERROR)
}

/// Evaluates `e` against `state`. Strict, except that `&&` and `||` skip their
/// right operand once the left one decides the result.
///
/// Integer overflow and operands of the wrong kind yield `type_error`; a
/// variable without a binding yields `unbound_variable`; `/` or `%` by zero
/// yields `division_by_zero`.
pub fn eval_expr(state: &State, e: &Expr) -> Result<Value, ErrorCode> {
    match e {
        Expr::Lit(v) => Ok(v.clone()),
        Expr::Var(x) => state
            .get(x)
            .cloned()
            .ok_or_else(|| ErrorCode::reserved(UNBOUND_VARIABLE)),
        Expr::Unary(op, inner) => match (op, eval_expr(state, inner)?) {
            (UnOp::Neg, Value::Int(n)) => n.checked_neg().map(Value::Int).ok_or_else(type_error),
            (UnOp::Not, Value::Bool(b)) => Ok(Value::Bool(!b)),
            _ => Err(type_error()),
        },
        Expr::Binary(op @ (BinOp::And | BinOp::Or), l, r) => {
            let Value::Bool(lhs) = eval_expr(state, l)? else {
                return Err(type_error());
            };
            if lhs == (*op == BinOp::Or) {
                return Ok(Value::Bool(lhs));
            }
            match eval_expr(state, r)? {
                Value::Bool(rhs) => Ok(Value::Bool(rhs)),
                _ => Err(type_error()),
            }
        }
        Expr::Binary(op, l, r) => {
            let lhs = eval_expr(state, l)?;
            let rhs = eval_expr(state, r)?;
            binary(*op, lhs, rhs)
        }
    }
}

fn binary(op: BinOp, lhs: Value, rhs: Value) -> Result<Value, ErrorCode> {
    use std::cmp::Ordering;

    if let (Value::Int(a), Value::Int(b)) = (&lhs, &rhs) {
        let (a, b) = (*a, *b);
        let checked = match op {
            BinOp::Add => a.checked_add(b),
            BinOp::Sub => a.checked_sub(b),
            BinOp::Mul => a.checked_mul(b),
            BinOp::Div | BinOp::Rem if b == 0 => return Err(ErrorCode::reserved(DIVISION_BY_ZERO)),
            BinOp::Div => a.checked_div(b),
            BinOp::Rem => a.checked_rem(b),
            _ => return compare(op, a.cmp(&b), lhs == rhs),
        };
        return checked.map(Value::Int).ok_or_else(type_error);
    }
    match (op, &lhs, &rhs) {
        (BinOp::Eq | BinOp::Ne, _, _) if lhs.kind() == rhs.kind() => compare(op, Ordering::Equal, lhs == rhs),
        (BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge, Value::Str(a), Value::Str(b)) => {
            compare(op, a.cmp(b), a == b)
        }
        _ => Err(type_error()),
    }
}

fn compare(op: BinOp, ord: std::cmp::Ordering, equal: bool) -> Result<Value, ErrorCode> {
    Ok(Value::Bool(match op {
        BinOp::Eq => equal,
        BinOp::Ne => !equal,
        BinOp::Lt => ord.is_lt(),
        BinOp::Le => ord.is_le(),
        BinOp::Gt => ord.is_gt(),
        BinOp::Ge => ord.is_ge(),
        _ => return Err(type_error()),
    }))
}
