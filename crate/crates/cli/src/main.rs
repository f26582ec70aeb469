use std::io::{self, BufRead, Write};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use strategem::engine::{Limits, DEFAULT_STEP_BUDGET};
use strategem::exercise::{default_registry, Difficulty, Exercise, POWER_EXERCISE};
use strategem::interactive::{Reply, Session};
use strategem::lint::{self, LeftRecursionMode};
use strategem::nav::Term;
use strategem::protocol::Server;
use strategem::services::Services;
use strategem::strategy::syntax;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// JSON-lines requests on stdin, one response line each on stdout
    Serve,
    /// A tutoring session driven by commands on stdin
    Interactive,
    /// Check a strategy for left recursion and left factors
    Lint,
    /// Print the worked solution for an expression
    Solve,
}

/// Stepwise feedback for rewriting exercises.
#[derive(Debug, Parser)]
#[command(name = "strategem", version)]
struct Cli {
    #[arg(long, value_enum, default_value = "serve")]
    mode: Mode,
    /// Exercise code
    #[arg(long, default_value = POWER_EXERCISE)]
    exercise: String,
    /// Seed for generated exercises
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Maximum number of transitions per service call
    #[arg(long, env = "STRATEGEM_BUDGET", default_value_t = DEFAULT_STEP_BUDGET)]
    budget: usize,
    /// Difficulty of generated exercises
    #[arg(long, default_value_t = Difficulty::default())]
    difficulty: Difficulty,
    /// Whether navigation counts as progress when looking for left recursion
    #[arg(long, default_value = "transparent")]
    lint_mode: LeftRecursionMode,
    /// lint: an exercise code or strategy text; solve and interactive: an
    /// expression (generated when absent)
    input: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("strategem: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, String> {
    let limits = Limits::with_budget(cli.budget).map_err(|e| e.to_string())?;
    let registry = default_registry();
    let ex = registry.lookup(&cli.exercise).map_err(|e| e.to_string())?;
    let stdin = io::stdin().lock();
    let stdout = io::stdout().lock();
    match cli.mode {
        Mode::Serve => {
            Server::new(&registry, &cli.exercise, cli.seed, limits)
                .serve(stdin, stdout)
                .map_err(|e| e.to_string())?;
            Ok(ExitCode::SUCCESS)
        }
        Mode::Lint => {
            let input = cli.input.as_deref().unwrap_or(&cli.exercise);
            let (ex, strategy) = match registry.lookup(input) {
                Ok(other) => (other, other.strategy.clone()),
                Err(_) => (ex, syntax::parse(input).map_err(|e| format!("strategy: {e}"))?),
            };
            let book = ex.rule_book();
            let report = lint::lint(&strategy, &|id| book.kind(id), cli.lint_mode);
            let mut out = stdout;
            for f in &report.findings {
                writeln!(out, "{f}").map_err(|e| e.to_string())?;
            }
            if report.is_clean() {
                writeln!(out, "clean").map_err(|e| e.to_string())?;
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        Mode::Solve => {
            let sv = Services::new(ex, limits).map_err(|e| e.to_string())?;
            let state = match &cli.input {
                Some(text) => ex.start(parse(ex, text)?),
                None => sv.generate(cli.difficulty, cli.seed).map_err(|e| e.to_string())?,
            };
            let mut out = stdout;
            writeln!(out, "{}", (ex.print)(state.term())).map_err(|e| e.to_string())?;
            for b in sv.derivation(&state).map_err(|e| format!("{} ({})", e, e.code()))? {
                writeln!(out, "{}: {}", b.rule, (ex.print)(b.state.term())).map_err(|e| e.to_string())?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Mode::Interactive => {
            let mut session = match &cli.input {
                Some(text) => Session::new(ex, limits, parse(ex, text)?, cli.seed),
                None => Session::generated(ex, limits, cli.difficulty, cli.seed),
            }
            .map_err(|e| e.to_string())?;
            interact(&mut session, stdin, stdout).map_err(|e| e.to_string())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn parse<T: Term>(ex: &Exercise<T>, text: &str) -> Result<T, String> {
    (ex.parse)(text).map_err(|e| format!("expression: {e}"))
}

fn interact<T: Term>(session: &mut Session<'_, T>, input: impl BufRead, mut out: impl Write) -> io::Result<()> {
    if let Reply::Text(t) = session.handle("show") {
        writeln!(out, "{t}")?;
    }
    for line in input.lines() {
        match session.handle(&line?) {
            Reply::Quit => break,
            Reply::Text(t) if t.is_empty() => {}
            Reply::Text(t) => writeln!(out, "{t}")?,
        }
        out.flush()?;
    }
    Ok(())
}
