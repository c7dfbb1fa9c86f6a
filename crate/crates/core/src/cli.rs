//! The `choose` command-line tool.
//!
//! ```text
//! choose run FILE [--goal G] [--state a=1,b="x"] [--trace OUT.jsonl] [--report OUT.json] [--max-depth N]
//! choose translate INPUT.mj OUTPUT.ch
//! choose check A B [--goal G]... [--state ...] [--max-depth N]
//! ```
//!
//! Exit status: 0 success, 1 failure of the program (or a divergence for
//! `check`), 2 unreadable input, parse errors or bad flags, 3 call depth
//! exceeded. Files ending in `.mj` are translated before they are run or
//! compared; anything else is read as `choose` source.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::ast::{Outcome, Program};
use crate::desugar;
use crate::engine::{self, ExecConfig, JsonlTrace, Termination, DEFAULT_MAX_DEPTH};
use crate::parser::{self, ParseError};
use crate::state::State;

pub const EXIT_SUCCESS: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DEPTH: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "choose", version, about = "Run and translate programs built on choose(G1, ..., Gn)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a goal against a program and print the final state.
    Run {
        file: PathBuf,
        /// Statement to execute.
        #[arg(long, default_value = "main()")]
        goal: String,
        /// Initial bindings, e.g. `emp="tom",n=3`.
        #[arg(long)]
        state: Option<String>,
        /// Write the derivation trace as JSON lines.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write a JSON run report.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MAX_DEPTH as u64, value_parser = clap::value_parser!(u64).range(1..))]
        max_depth: u64,
    },
    /// Translate if/switch/try-catch source into choose form.
    Translate { input: PathBuf, output: PathBuf },
    /// Run the same goals against two programs and compare the results.
    Check {
        file_a: PathBuf,
        file_b: PathBuf,
        #[arg(long = "goal")]
        goals: Vec<String>,
        #[arg(long)]
        state: Option<String>,
        #[arg(long, default_value_t = DEFAULT_MAX_DEPTH as u64, value_parser = clap::value_parser!(u64).range(1..))]
        max_depth: u64,
    },
}

/// Summary of one run, as written by `--report`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub outcome: &'static str,
    pub error_codes: Vec<String>,
    pub final_state: Vec<(String, String)>,
    pub steps: u64,
}

impl RunReport {
    pub fn new(t: &Termination) -> Self {
        RunReport {
            outcome: if t.outcome.is_success() { "success" } else { "failure" },
            error_codes: t.outcome.codes().iter().map(|c| c.to_string()).collect(),
            final_state: t.state.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
            steps: t.steps,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

/// The text `run` prints for a finished run.
pub fn render(t: &Termination) -> String {
    match &t.outcome {
        Outcome::Success(state) => state.to_string(),
        Outcome::Failure(codes) => {
            let codes: Vec<&str> = codes.iter().map(|c| c.as_str()).collect();
            format!("FAIL [{}]\n{}", codes.join(", "), t.state)
        }
    }
}

pub fn exit_code(t: &Termination) -> i32 {
    if t.outcome.is_success() {
        EXIT_SUCCESS
    } else if t.depth_exceeded() {
        EXIT_DEPTH
    } else {
        EXIT_FAILURE
    }
}

#[derive(Debug)]
enum CliError {
    Io(PathBuf, io::Error),
    Parse(String, ParseError),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
            CliError::Parse(origin, e) => write!(f, "{origin}:{e}"),
        }
    }
}

/// Reads a program, translating `.mj` sources first.
pub fn load_program(path: &Path) -> Result<Program, String> {
    load(path).map_err(|e| e.to_string())
}

fn load(path: &Path) -> Result<Program, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_owned(), e))?;
    let origin = path.display().to_string();
    let parsed = if path.extension().is_some_and(|ext| ext == "mj") {
        desugar::translate(&text)
    } else {
        parser::parse_program(&text)
    };
    parsed.map_err(|e| CliError::Parse(origin, e))
}

fn initial_state(text: Option<&str>) -> Result<State, CliError> {
    text.map_or(Ok(State::new()), |t| {
        parser::parse_state(t).map_err(|e| CliError::Parse("--state".into(), e))
    })
}

fn goal(text: &str) -> Result<crate::ast::Stmt, CliError> {
    parser::parse_goal(text).map_err(|e| CliError::Parse("--goal".into(), e))
}

/// Entry point of the binary.
pub fn main() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_cli(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the tool with `args` (program name first) and returns the exit status.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(rendered.as_bytes());
                return EXIT_SUCCESS;
            }
            let _ = err.write_all(rendered.as_bytes());
            return EXIT_USAGE;
        }
    };
    let result = match cli.command {
        Command::Run {
            file,
            goal,
            state,
            trace,
            report,
            max_depth,
        } => cmd_run(&file, &goal, state.as_deref(), trace.as_deref(), report.as_deref(), max_depth, out),
        Command::Translate { input, output } => cmd_translate(&input, &output),
        Command::Check {
            file_a,
            file_b,
            goals,
            state,
            max_depth,
        } => cmd_check(&file_a, &file_b, &goals, state.as_deref(), max_depth, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn config(max_depth: u64) -> ExecConfig {
    ExecConfig::with_max_depth(usize::try_from(max_depth).unwrap_or(usize::MAX))
}

fn cmd_run(
    file: &Path,
    goal_text: &str,
    state: Option<&str>,
    trace: Option<&Path>,
    report: Option<&Path>,
    max_depth: u64,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let program = load(file)?.with_state(initial_state(state)?);
    let goal = goal(goal_text)?;
    let cfg = config(max_depth);
    let done = match trace {
        Some(path) => {
            let io_err = |e| CliError::Io(path.to_owned(), e);
            let mut sink = JsonlTrace::new(BufWriter::new(File::create(path).map_err(io_err)?));
            let done = engine::run_traced(&program, &goal, cfg, &mut sink);
            sink.finish().map_err(io_err)?;
            done
        }
        None => engine::run(&program, &goal, cfg),
    };
    if let Some(path) = report {
        std::fs::write(path, RunReport::new(&done).to_json()).map_err(|e| CliError::Io(path.to_owned(), e))?;
    }
    let _ = out.write_all(render(&done).as_bytes());
    Ok(exit_code(&done))
}

fn cmd_translate(input: &Path, output: &Path) -> Result<i32, CliError> {
    let text = std::fs::read_to_string(input).map_err(|e| CliError::Io(input.to_owned(), e))?;
    let program = desugar::translate(&text).map_err(|e| CliError::Parse(input.display().to_string(), e))?;
    std::fs::write(output, parser::print_program(&program)).map_err(|e| CliError::Io(output.to_owned(), e))?;
    Ok(EXIT_SUCCESS)
}

fn cmd_check(
    file_a: &Path,
    file_b: &Path,
    goals: &[String],
    state: Option<&str>,
    max_depth: u64,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let initial = initial_state(state)?;
    let a = load(file_a)?.with_state(initial.clone());
    let b = load(file_b)?.with_state(initial);
    let goals = goals.iter().map(|g| goal(g).map(|s| (g, s))).collect::<Result<Vec<_>, _>>()?;
    let cfg = config(max_depth);
    for (text, g) in &goals {
        let ra = engine::run(&a, g, cfg);
        let rb = engine::run(&b, g, cfg);
        if ra.outcome != rb.outcome || ra.state != rb.state {
            let _ = writeln!(out, "divergence on goal {text}");
            let _ = writeln!(out, "--- {}", file_a.display());
            let _ = out.write_all(render(&ra).as_bytes());
            let _ = writeln!(out, "--- {}", file_b.display());
            let _ = out.write_all(render(&rb).as_bytes());
            let _ = out.write_all(state_diff(&ra.state, &rb.state).as_bytes());
            return Ok(EXIT_FAILURE);
        }
    }
    let _ = writeln!(out, "{} goal(s) agree", goals.len());
    Ok(EXIT_SUCCESS)
}

/// `-name=value` for bindings only in `a` (or differing), `+name=value` for `b`.
fn state_diff(a: &State, b: &State) -> String {
    let mut names: Vec<&String> = a.bindings().keys().chain(b.bindings().keys()).collect();
    names.sort();
    names.dedup();
    let mut diff = String::new();
    for name in names {
        let (va, vb) = (a.get(name), b.get(name));
        if va == vb {
            continue;
        }
        if let Some(v) = va {
            diff.push_str(&format!("-{name}={v}\n"));
        }
        if let Some(v) = vb {
            diff.push_str(&format!("+{name}={v}\n"));
        }
    }
    diff
}
