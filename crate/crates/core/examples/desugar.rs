//! if/else, switch and try/catch lowered to `choose`, then run.
//!
//!     cargo run --example desugar

use choose_lang::desugar::{desugar, parse_sugar, translate};
use choose_lang::engine::{run, ExecConfig};
use choose_lang::parser::{parse_goal, print_program, print_stmt};

const SOURCE: &str = r#"
classify(n) {
    if (n < 0) {
        kind = "negative";
    } else if (n == 0) {
        kind = "zero";
    } else {
        kind = "positive";
    }
}

safeDiv(a, b) {
    try {
        q = a / b;
    } catch {
        q = 0;
        warned = true;
    }
}
"#;

fn main() {
    let program = translate(SOURCE).unwrap();
    print!("{}", print_program(&program));

    for goal in ["classify(-4)", "classify(0)", "safeDiv(7, 2)", "safeDiv(7, 0)"] {
        let done = run(&program, &parse_goal(goal).unwrap(), ExecConfig::default());
        println!("{goal}: {}", done.state.to_string().trim_end().replace('\n', " "));
    }

    let multi = parse_sugar(r#"try { a(); } catch { b(); } catch { throw "gave_up"; }"#).unwrap();
    println!("{}", print_stmt(&desugar(&multi)));
}
