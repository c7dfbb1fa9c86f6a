//! Observing a derivation: a custom sink that prints each rule with the state
//! it saw, then the same run as JSON lines.
//!
//!     cargo run --example trace

use choose_lang::engine::{run_traced, ExecConfig, JsonlTrace, TraceEvent, TraceKind, TraceSink};
use choose_lang::parser::{parse_goal, parse_program};
use choose_lang::State;

struct Indented;

impl TraceSink for Indented {
    fn record(&mut self, event: &TraceEvent, state: &State) {
        let pad = "  ".repeat(event.depth);
        match event.kind {
            TraceKind::Enter => println!("{pad}> rule {} {}  {:?}", event.rule, event.stmt, state),
            TraceKind::Exit => println!("{pad}< rule {} {:?}", event.rule, event.outcome.unwrap()),
        }
    }
}

fn main() {
    let program = parse_program("proc bump(n) { x = x + n }").unwrap();
    let program = program.with_state(State::from_iter([("x".to_string(), 1.into())]));
    let goal = parse_goal(r#"choose(bump(10); f("undo"), bump(2))"#).unwrap();

    let done = run_traced(&program, &goal, ExecConfig::default(), &mut Indented);
    print!("{} steps, final:\n{}", done.steps, done.state);

    let mut jsonl = JsonlTrace::new(Vec::new());
    run_traced(&program, &goal, ExecConfig::default(), &mut jsonl);
    let bytes = jsonl.finish().unwrap();
    for line in String::from_utf8(bytes).unwrap().lines().take(4) {
        println!("{line}");
    }
}
