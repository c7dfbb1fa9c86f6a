//! Deep recursion within the call budget, and a runaway one stopped by it.
//!
//!     cargo run --example depth_guard

use choose_lang::engine::{run, ExecConfig};
use choose_lang::parser::{parse_goal, parse_program};

const PROGRAM: &str = r#"
proc sum(n) { choose(n == 0, total = total + n; sum(n - 1)) }
proc forever(k) { forever(k + 1) }
"#;

fn main() {
    let program = parse_program(PROGRAM).unwrap();
    let program = program.with_state(choose_lang::parser::parse_state("total=0").unwrap());

    let done = run(&program, &parse_goal("sum(5000)").unwrap(), ExecConfig::default());
    print!("sum(5000):\n{}", done.state);

    let cfg = ExecConfig::with_max_depth(50);
    let done = run(&program, &parse_goal("forever(0)").unwrap(), cfg);
    println!(
        "forever(0) with max depth 50: {:?}, depth exceeded: {}",
        done.outcome.codes(),
        done.depth_exceeded()
    );
}
