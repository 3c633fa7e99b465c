//! Command-line front end for the `jetlie` engine.

pub mod args;
pub mod builtins;
mod commands;
pub mod problem;
pub mod report;

use std::fmt;

use clap::Parser;

use jetlie::par::Exec;

use args::{Cli, Command, Common};
use builtins::Problem;
use problem::Options;
pub use report::Report;

#[derive(Debug)]
pub enum CliError {
    Input(String),
}

impl CliError {
    pub fn input(e: impl fmt::Display) -> CliError {
        CliError::Input(e.to_string())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "{m}"),
        }
    }
}

/// Process outcome: exit code plus what goes to stdout and stderr.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub(crate) struct Ctx {
    pub problem: Problem,
    pub options: Options,
    pub exec: Exec,
}

impl Ctx {
    fn new(common: &Common) -> Result<Ctx, CliError> {
        let (problem, options) = match &common.problem {
            Some(path) => problem::load(path)?,
            None => (builtins::builtin_pde(&common.pde)?, Options::default()),
        };
        let exec = if common.sequential { Exec::Sequential } else { Exec::Parallel };
        Ok(Ctx { problem, options, exec })
    }
}

fn common(cmd: &Command) -> &Common {
    match cmd {
        Command::SolveHarrison(a) => &a.common,
        Command::SolveClassical(a) => &a.common,
        Command::VerifySymmetry(a) => &a.common,
        Command::Prolong(a) => &a.common,
        Command::Brackets(a) | Command::Solvable(a) => &a.common,
        Command::CheckSolution(a) => &a.common,
        Command::Flow(a) => &a.common,
        Command::Frobenius(a) => &a.common,
        Command::FirstIntegral(a) => &a.common,
        Command::ReduceCheck(a) => &a.common,
    }
}

fn dispatch(cmd: &Command, ctx: &Ctx) -> Result<Report, CliError> {
    match cmd {
        Command::SolveHarrison(a) => commands::solve_harrison(a, ctx),
        Command::SolveClassical(a) => commands::solve_classical(a, ctx),
        Command::VerifySymmetry(a) => commands::verify_symmetry(a, ctx),
        Command::Prolong(a) => commands::prolong(a, ctx),
        Command::Brackets(a) => commands::brackets(a, ctx),
        Command::Solvable(a) => commands::solvable(a, ctx),
        Command::CheckSolution(a) => commands::check_solution(a, ctx),
        Command::Flow(a) => commands::flow(a, ctx),
        Command::Frobenius(a) => commands::frobenius(a, ctx),
        Command::FirstIntegral(a) => commands::first_integral(a, ctx),
        Command::ReduceCheck(a) => commands::reduce_check(a, ctx),
    }
}

/// Runs one command line. Exit codes: 0 verified, 1 verification failed, 2 bad input.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let common = common(&cli.command);
    match Ctx::new(common).and_then(|ctx| dispatch(&cli.command, &ctx)) {
        Ok(r) => Outcome { code: r.code, stdout: r.render(common.json), stderr: String::new() },
        Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}
