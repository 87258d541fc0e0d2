//! `identric`: evaluate the means, print the sharp thresholds, and verify,
//! falsify, sweep or certify the inequalities from the command line.
//!
//! Exit status: 0 when the inequality holds (or nothing was checked), 1 when
//! it is violated or could not be certified, 2 on usage errors, 3 when the
//! computation itself failed.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use identric_core::verify::{CheckArgs, CheckRegistry, GridSpec, DEFAULT_GRID_POINTS};
use identric_core::{DoubleDouble, Error, Side};

use commands::Range;
use output::{emit, render, Format, Render};

#[derive(Parser)]
#[command(
    name = "identric",
    version,
    about = "Identric-mean bounds through the Q_{t,s} family"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "human", global = true)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone, Copy)]
struct GridArgs {
    /// Number of grid points.
    #[arg(long = "grid", env = "IDENTRIC_GRID", default_value_t = DEFAULT_GRID_POINTS)]
    count: usize,
    /// Geometric accumulation towards both ends (default).
    #[arg(long, conflicts_with = "uniform")]
    refined: bool,
    #[arg(long)]
    uniform: bool,
}

impl GridArgs {
    fn spec(self) -> GridSpec {
        if self.uniform {
            GridSpec::uniform(self.count)
        } else {
            GridSpec::refined(self.count)
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// A, G, H, I (and Q_{t,s} with --t and --s) at a pair.
    Eval {
        #[arg(allow_negative_numbers = true)]
        a: f64,
        #[arg(allow_negative_numbers = true)]
        b: f64,
        #[arg(long, requires = "s")]
        t: Option<f64>,
        #[arg(long, requires = "t")]
        s: Option<f64>,
    },
    /// Sharp thresholds p_s and q_s.
    Thresholds {
        #[arg(allow_negative_numbers = true)]
        s: f64,
    },
    /// Check an inequality on a grid.
    Verify {
        /// Registered check; see `identric checks`.
        #[arg(long, default_value = "family")]
        check: String,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        s: Option<f64>,
        #[arg(long, value_parser = parse_side)]
        side: Option<Side>,
        /// Exponent of the convex-power checks.
        #[arg(long = "p-exp")]
        p_exp: Option<f64>,
        /// Weight of the convex-power check; fractions like 2/3 are exact
        /// to double-double.
        #[arg(long, value_parser = parse_weight)]
        weight: Option<DoubleDouble>,
        #[arg(long = "p-coef")]
        p_coef: Option<f64>,
        #[arg(long = "q-coef")]
        q_coef: Option<f64>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Find a pair where Q_{t,s} breaks the bound, for t outside the sharp set.
    Falsify {
        #[arg(long)]
        t: f64,
        #[arg(long)]
        s: f64,
        #[arg(long, value_parser = parse_side)]
        side: Side,
    },
    /// Thresholds, grid-recovered thresholds and margins for a range of s.
    Sweep {
        /// `start:end:step`, both ends included, or a single value.
        #[arg(long, value_parser = Range::parse)]
        s: Range,
        /// Bisection tolerance of the grid-recovered thresholds.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Prove the sign of the family margin on [from, to] by interval bisection.
    Certify {
        #[arg(long)]
        t: f64,
        #[arg(long)]
        s: f64,
        #[arg(long, value_parser = parse_side)]
        side: Side,
        #[arg(long, default_value_t = 0.01)]
        from: f64,
        #[arg(long, default_value_t = 0.99)]
        to: f64,
        /// Maximum number of subdivision nodes.
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
    },
    /// List the registered checks.
    Checks,
}

fn parse_side(s: &str) -> Result<Side, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A decimal or a fraction `n/d`; the fraction is divided in double-double.
fn parse_weight(s: &str) -> Result<DoubleDouble, String> {
    let num = |p: &str| {
        p.trim()
            .parse::<f64>()
            .map_err(|_| format!("`{p}` is not a number"))
    };
    let w = match s.split_once('/') {
        Some((n, d)) => {
            let d = num(d)?;
            if d == 0.0 {
                return Err("zero denominator".into());
            }
            DoubleDouble::from_f64(num(n)?) / d
        }
        None => DoubleDouble::from_f64(num(s)?),
    };
    Ok(w)
}

enum Outcome {
    Holds,
    Violated,
}

fn run(cli: Cli) -> Result<Outcome> {
    let registry = CheckRegistry::with_builtins();
    let (report, outcome): (Box<dyn Render>, Outcome) = match cli.command {
        Command::Eval { a, b, t, s } => (Box::new(commands::eval(a, b, t.zip(s))?), Outcome::Holds),
        Command::Thresholds { s } => (Box::new(commands::thresholds(s)?), Outcome::Holds),
        Command::Verify {
            check,
            t,
            s,
            side,
            p_exp,
            weight,
            p_coef,
            q_coef,
            grid,
        } => {
            let args = CheckArgs {
                t,
                s,
                side,
                p_exp,
                weight,
                p_coef,
                q_coef,
            };
            let v = commands::verify_check(&registry, &check, &args, &grid.spec())?;
            let outcome = if v.0.holds() {
                Outcome::Holds
            } else {
                Outcome::Violated
            };
            (Box::new(v), outcome)
        }
        Command::Falsify { t, s, side } => (
            Box::new(commands::falsify_family(t, s, side)?),
            Outcome::Violated,
        ),
        Command::Sweep { s, tol, grid } => {
            let sweep = commands::sweep(s, &grid.spec(), tol)?;
            let outcome = if sweep.all_hold() {
                Outcome::Holds
            } else {
                Outcome::Violated
            };
            (Box::new(sweep), outcome)
        }
        Command::Certify {
            t,
            s,
            side,
            from,
            to,
            budget,
        } => {
            let c = commands::certify(t, s, side, from, to, budget)?;
            let outcome = if c.proved() {
                Outcome::Holds
            } else {
                Outcome::Violated
            };
            (Box::new(c), outcome)
        }
        Command::Checks => {
            let list = registry
                .names()
                .map(|n| {
                    (
                        n.to_string(),
                        registry.summary(n).unwrap_or_default().to_string(),
                    )
                })
                .collect();
            (Box::new(commands::CheckList(list)), Outcome::Holds)
        }
    };
    let text = render(report.as_ref(), cli.out.format)?;
    emit(&text, cli.out.out.as_deref())?;
    Ok(outcome)
}

/// Parameter and domain errors are the caller's fault (2); anything else is
/// a failure of the computation or of the output (3).
fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(
            Error::NonPositivePair(..)
            | Error::GapOutOfRange(_)
            | Error::PointOutOfRange(_)
            | Error::WeightOutOfRange(_)
            | Error::ExponentOutOfRange(_)
            | Error::SquaredWeightOutOfRange(_)
            | Error::InvalidParameter { .. }
            | Error::NotOutsideSharpInterval { .. }
            | Error::UnknownCheck(_),
        ) => 2,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Outcome::Holds) => ExitCode::SUCCESS,
        Ok(Outcome::Violated) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
