//! `maxdelay`: command-line access to max-automata, their equivalence
//! classes and delay-game simulations.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use maxdelay::equivalence::bounds::DEFAULT_BIT_LIMIT;
use maxdelay::equivalence::DEFAULT_BUDGET;
use maxdelay::Error;

use commands::{Ctx, ReduceKind, SimulateArgs};
use report::{ExperimentReport, Outcome};

const EXIT_USAGE: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_BUDGET: u8 = 4;
const EXIT_CONTRACT: u8 = 5;
const EXIT_IO: u8 = 6;

#[derive(Parser)]
#[command(name = "maxdelay", version, about = "Max-automata, cap-m classes and delay games")]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide membership of the lasso u·v^ω.
    Member {
        #[arg(long)]
        automaton: PathBuf,
        #[arg(long, default_value = "")]
        u: String,
        #[arg(long)]
        v: String,
    },
    /// Enumerate the cap-m word classes, or the projected input classes.
    Classes {
        #[arg(long)]
        automaton: PathBuf,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long)]
        projected: bool,
    },
    /// Threshold d(m) past which every input word is in an infinite class.
    Threshold {
        #[arg(long)]
        automaton: PathBuf,
        #[arg(long, default_value_t = 1)]
        m: u32,
        /// Print the initial lookahead bound of the upper-bound theorem instead.
        #[arg(long)]
        theorem: bool,
        /// Refuse theorem bounds with more bits than this.
        #[arg(long, default_value_t = DEFAULT_BIT_LIMIT)]
        bit_limit: u64,
    },
    /// Play a delay game between two registered strategies.
    Simulate {
        #[arg(long, value_enum, default_value_t = Game::Block)]
        game: Game,
        /// Delay function, e.g. `6,1*` or `2*`.
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 100)]
        rounds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Player I strategy: `i-spoiler:<l>` or `i-random`.
        #[arg(long = "i", default_value = "i-random")]
        input: String,
        /// Player O strategy: `o-longest-block` or `o-random`.
        #[arg(long = "o", default_value = "o-longest-block")]
        output: String,
        /// Write the lookahead curve as CSV.
        #[arg(long)]
        curve: Option<PathBuf>,
    },
    /// Replay a scripted play of the class game.
    ClassGame {
        #[arg(long)]
        automaton: PathBuf,
        /// Move script, one move per line; `-` reads standard input.
        #[arg(long)]
        moves: PathBuf,
    },
    /// Translate a safety or parity automaton, or lift a max-automaton to Σ×Σ.
    Reduce {
        #[arg(long, value_enum)]
        kind: ReduceKind,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Show an automaton and, for a word, its cap-m signature tables.
    Inspect {
        #[arg(long)]
        automaton: PathBuf,
        #[arg(long)]
        word: Option<String>,
        #[arg(long, default_value_t = 1)]
        m: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Game {
    Block,
}

fn budget() -> Result<usize> {
    match std::env::var("MAXDELAY_BUDGET") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| anyhow::anyhow!(UsageError(format!("MAXDELAY_BUDGET must be a number, got `{v}`")))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<UsageError>() {
            return EXIT_USAGE;
        }
        if cause.is::<std::io::Error>() {
            return EXIT_IO;
        }
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::UnknownCounter(_)
                | Error::UnknownState(_)
                | Error::UnknownLetter(_)
                | Error::CounterOutOfRange { .. }
                | Error::Parse { .. }
                | Error::Structure(_)
                | Error::DelayFunction(_) => EXIT_INPUT,
                Error::BudgetExhausted { .. } | Error::IncompleteEnumeration | Error::BoundTooLarge { .. } => {
                    EXIT_BUDGET
                }
                _ => EXIT_CONTRACT,
            };
        }
    }
    1
}

fn run(cli: Cli) -> Result<(Outcome, Vec<report::InputFile>)> {
    let mut ctx = Ctx {
        inputs: Vec::new(),
        budget: budget()?,
    };
    let out = match cli.command {
        Command::Member { automaton, u, v } => commands::member(&mut ctx, &automaton, &u, &v),
        Command::Classes { automaton, m, projected } => commands::classes(&mut ctx, &automaton, m, projected),
        Command::Threshold {
            automaton,
            m,
            theorem,
            bit_limit,
        } => commands::threshold(&mut ctx, &automaton, m, theorem, bit_limit),
        Command::Simulate {
            game: Game::Block,
            f,
            rounds,
            seed,
            input,
            output,
            curve,
        } => commands::simulate(&SimulateArgs {
            f,
            rounds,
            seed,
            input,
            output,
            curve,
        }),
        Command::ClassGame { automaton, moves } => commands::class_game(&mut ctx, &automaton, &moves),
        Command::Reduce { kind, input, output } => commands::reduce(&mut ctx, kind, &input, output.as_deref()),
        Command::Inspect { automaton, word, m } => commands::inspect(&mut ctx, &automaton, word.as_deref(), m),
    }?;
    Ok((out, ctx.inputs))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let command: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok((out, inputs)) => {
            if json {
                let report = ExperimentReport {
                    command,
                    seed: out.seed,
                    inputs,
                    results: out.results,
                    elapsed_ms: start.elapsed().as_millis(),
                };
                match serde_json::to_string_pretty(&report).context("cannot encode report") {
                    Ok(s) => println!("{s}"),
                    Err(e) => {
                        eprintln!("error: {e:#}");
                        return ExitCode::from(1);
                    }
                }
            } else {
                print!("{}", out.text);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
