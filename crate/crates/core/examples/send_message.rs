//! Falling back through three senders, and what happens when all of them fail.
//!
//!     cargo run --example send_message

use choose_lang::engine::{exec, ExecConfig};
use choose_lang::parser::{parse_goal, parse_program};
use choose_lang::Outcome;

fn senders(slowest: &str) -> String {
    format!(
        r#"
        proc send_fast(m) {{ f("fast_down") }}
        proc send_slow(m) {{ attempts = 2; f("slow_down") }}
        proc send_slowest(m) {{ {slowest} }}
        "#
    )
}

fn main() {
    let goal = parse_goal(r#"choose(send_fast("hi"), send_slow("hi"), send_slowest("hi"))"#).unwrap();

    let up = parse_program(&senders(r#"sent = m"#)).unwrap();
    match exec(&up, &goal, ExecConfig::default()) {
        // `attempts` is gone: send_slow failed and was rolled back.
        Outcome::Success(state) => print!("delivered:\n{state}"),
        Outcome::Failure(codes) => println!("unexpected failure {codes:?}"),
    }

    let down = parse_program(&senders(r#"f("slowest_down")"#)).unwrap();
    let outcome = exec(&down, &goal, ExecConfig::default());
    let codes: Vec<&str> = outcome.codes().iter().map(|c| c.as_str()).collect();
    println!("all down: {codes:?}");
}
