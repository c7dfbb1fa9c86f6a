//! The employee age lookup, written once as a `switch` and once with `choose`.
//!
//!     cargo run --example get_age

use choose_lang::desugar::translate;
use choose_lang::engine::{run, ExecConfig};
use choose_lang::parser::{parse_goal, parse_program, print_program};

const SWITCH: &str = r#"
getAge(emp) {
    switch (emp) {
        case "tom": age = 31; break;
        case "kim": age = 40; break;
        case "sue": age = 22; break;
        default: age = 0;
    }
}
"#;

const CHOOSE: &str = r#"
proc getAge(emp) {
    choose(
        emp == "tom"; age = 31,
        emp == "kim"; age = 40,
        emp == "sue"; age = 22,
        true; age = 0
    );
}
"#;

fn main() {
    let translated = translate(SWITCH).expect("switch source parses");
    let written = parse_program(CHOOSE).expect("choose source parses");
    print!("{}", print_program(&translated));
    assert_eq!(translated.defs(), written.defs());

    for emp in ["tom", "kim", "sue", "zoe"] {
        let goal = parse_goal(&format!("getAge(\"{emp}\")")).unwrap();
        let done = run(&translated, &goal, ExecConfig::default());
        println!("{emp:>4}: {}", done.state.to_string().trim_end());
    }
}
