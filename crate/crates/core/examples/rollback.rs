//! Nested transactions on the state, used directly.
//!
//!     cargo run --example rollback

use choose_lang::{State, Value};

fn main() {
    let mut state = State::new();
    state.set("balance", Value::Int(100));

    let outer = state.tx_begin();
    state.set("balance", Value::Int(70));

    let inner = state.tx_begin();
    state.set("balance", Value::Int(0));
    state.set("overdrawn", Value::Bool(true));
    print!("inside inner:\n{state}");
    state.tx_restore(inner).unwrap();
    print!("inner restored:\n{state}");

    // Committing merges the outer writes into whatever encloses it; here
    // nothing does, so they simply stay.
    state.tx_commit(outer).unwrap();
    print!("outer committed:\n{state}");

    let again = state.tx_begin();
    state.set("balance", Value::Int(-5));
    state.tx_restore(again).unwrap();
    assert_eq!(state.get("balance"), Some(&Value::Int(70)));
    assert_eq!(state.open_transactions(), 0);
}
