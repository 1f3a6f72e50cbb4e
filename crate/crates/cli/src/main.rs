use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sharpbound::complex::parse_complex;
use sharpbound::extremal::{DerivSweep, Placement};
use sharpbound::harness::config::{BohrSweepConfig, IncrementSweepConfig};
use sharpbound::harness::{error_exit_code, run_experiment, ExperimentConfig, Inequality, Kind, SubjectSpec, SweepConfig};
use sharpbound::{Complex64, Error, Result};

/// Numerical checks of sharp real-part inequalities for holomorphic maps.
///
/// Every subcommand can start from a JSON config (`--config`); flags given
/// on the command line override the matching config fields. Exit status is
/// 0 when everything passes, 1 on a failed check, 2 on usage or config
/// errors and 3 on numerical failures.
#[derive(Parser, Debug)]
#[command(name = "sharpbound", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON experiment config
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Directory for report files; without it the main table goes to stdout
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Relative pass tolerance [default: 1e-6]
    #[arg(long, global = true, value_name = "X")]
    tol: Option<f64>,

    /// Worker threads [default: all cores]
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the inequality suite over the builtin corpus or selected entries
    Check(CheckArgs),
    /// Sharpness sweeps along the extremal families
    Sweep {
        #[command(subcommand)]
        family: SweepCommand,
    },
    /// Series extraction
    Coeffs {
        #[command(subcommand)]
        family: CoeffsCommand,
    },
    /// List and validate the builtin corpus
    Corpus,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Builtin entry to check (repeatable) [default: whole corpus]
    #[arg(long = "entry", value_name = "NAME")]
    entries: Vec<String>,

    /// Inequalities to run: deriv, deriv-centered, bohr, bohr-recentered, increment [default: all]
    #[arg(long, value_delimiter = ',', value_name = "IDS")]
    inequalities: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum SweepCommand {
    /// Derivative estimate along g_ξ with ρ ↓ R
    Deriv(DerivArgs),
    /// Bohr-type lower bound from the crescent map
    Bohr(BohrArgs),
    /// Increment estimate along g_ξ with ρ ↓ R
    Increment(IncrementArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PlacementArg {
    Aligned,
    Opposite,
}

#[derive(Args, Debug)]
struct DerivArgs {
    /// Derivative order [default: 2]
    #[arg(long)]
    n: Option<u32>,
    /// Disc radius R [default: 1]
    #[arg(long)]
    radius: Option<f64>,
    /// |z| [default: 0.5]
    #[arg(long)]
    r: Option<f64>,
    /// |a| [default: 0.25]
    #[arg(long = "r-a")]
    r_a: Option<f64>,
    /// Comma-separated values of ρ/R [default: 1.1,1.01,1.001]
    #[arg(long, value_delimiter = ',')]
    schedule: Vec<f64>,
    /// Evaluation points on the pole's ray or opposite it [default: aligned]
    #[arg(long, value_enum)]
    placement: Option<PlacementArg>,
}

#[derive(Args, Debug)]
struct BohrArgs {
    /// First index of the sum [default: 1]
    #[arg(long)]
    m: Option<u32>,
    /// Exponent q [default: 1]
    #[arg(long)]
    q: Option<f64>,
    /// Comma-separated values of r/|p| [default: 0.1,1/3,0.5,0.9]
    #[arg(long = "r-fraction", value_delimiter = ',', value_parser = fraction_arg)]
    r_fractions: Vec<f64>,
    /// Crescent scale a [default: 1]
    #[arg(long)]
    a: Option<f64>,
    /// Half-plane shift p, e.g. -i or 0-2i [default: -i]
    #[arg(long, allow_hyphen_values = true, value_parser = complex_arg)]
    p: Option<Complex64>,
    /// Truncation order [default: 256]
    #[arg(long)]
    order: Option<usize>,
}

#[derive(Args, Debug)]
struct IncrementArgs {
    /// Derivative order [default: 1]
    #[arg(long)]
    n: Option<u32>,
    /// Disc radius R [default: 1]
    #[arg(long)]
    radius: Option<f64>,
    /// |z| [default: 0.5]
    #[arg(long)]
    r: Option<f64>,
    /// Comma-separated values of ρ/R [default: 1.1,1.01,1.001]
    #[arg(long, value_delimiter = ',')]
    schedule: Vec<f64>,
}

#[derive(Subcommand, Debug)]
enum CoeffsCommand {
    /// Taylor coefficients of the crescent map at the origin
    Crescent {
        /// Crescent scale a [default: 1]
        #[arg(long)]
        a: Option<f64>,
        /// Half-plane shift p [default: -i]
        #[arg(long, allow_hyphen_values = true, value_parser = complex_arg)]
        p: Option<Complex64>,
        /// Truncation order [default: 8]
        #[arg(long)]
        order: Option<usize>,
    },
}

fn complex_arg(s: &str) -> std::result::Result<Complex64, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

/// Plain float or a ratio like `1/3`.
fn fraction_arg(s: &str) -> std::result::Result<f64, String> {
    let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    match s.split_once('/') {
        Some((num, den)) => Ok(parse(num)? / parse(den)?),
        None => parse(s),
    }
}

fn kind_of(command: &Command) -> Kind {
    match command {
        Command::Check(_) => Kind::Check,
        Command::Sweep { .. } => Kind::Sweep,
        Command::Coeffs { .. } => Kind::Coeffs,
        Command::Corpus => Kind::Corpus,
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn build_config(cli: Cli) -> Result<ExperimentConfig> {
    let kind = kind_of(&cli.command);
    let mut config = match &cli.config {
        Some(path) => ExperimentConfig::from_path(path)?,
        None => ExperimentConfig::new(kind),
    };
    if config.kind != kind {
        return Err(Error::Config(format!(
            "config kind {:?} does not match the subcommand",
            config.kind
        )));
    }
    set(&mut config.tolerance, cli.tol);
    if cli.out.is_some() {
        config.out = cli.out;
    }
    if cli.jobs.is_some() {
        config.jobs = cli.jobs;
    }
    match cli.command {
        Command::Check(args) => {
            if !args.entries.is_empty() {
                config.check.subjects = args.entries.into_iter().map(SubjectSpec::Name).collect();
            }
            if !args.inequalities.is_empty() {
                config.check.inequalities = args
                    .inequalities
                    .iter()
                    .map(|id| Inequality::from_id(id))
                    .collect::<Result<_>>()?;
            }
        }
        Command::Sweep { family } => match family {
            SweepCommand::Deriv(args) => {
                let mut s = match std::mem::take(&mut config.sweep) {
                    SweepConfig::Deriv(s) => s,
                    _ => DerivSweep::default(),
                };
                set(&mut s.n, args.n);
                set(&mut s.radius, args.radius);
                set(&mut s.r, args.r);
                set(&mut s.r_a, args.r_a);
                if !args.schedule.is_empty() {
                    s.schedule = args.schedule;
                }
                set(
                    &mut s.placement,
                    args.placement.map(|p| match p {
                        PlacementArg::Aligned => Placement::Aligned,
                        PlacementArg::Opposite => Placement::Opposite,
                    }),
                );
                config.sweep = SweepConfig::Deriv(s);
            }
            SweepCommand::Bohr(args) => {
                let mut s = match std::mem::take(&mut config.sweep) {
                    SweepConfig::Bohr(s) => s,
                    _ => BohrSweepConfig::default(),
                };
                set(&mut s.m, args.m);
                set(&mut s.q, args.q);
                set(&mut s.a, args.a);
                set(&mut s.p, args.p);
                set(&mut s.order, args.order);
                if !args.r_fractions.is_empty() {
                    s.r_fractions = args.r_fractions;
                }
                config.sweep = SweepConfig::Bohr(s);
            }
            SweepCommand::Increment(args) => {
                let mut s = match std::mem::take(&mut config.sweep) {
                    SweepConfig::Increment(s) => s,
                    _ => IncrementSweepConfig::default(),
                };
                set(&mut s.n, args.n);
                set(&mut s.radius, args.radius);
                set(&mut s.r, args.r);
                if !args.schedule.is_empty() {
                    s.schedule = args.schedule;
                }
                config.sweep = SweepConfig::Increment(s);
            }
        },
        Command::Coeffs {
            family: CoeffsCommand::Crescent { a, p, order },
        } => {
            config.coeffs.family = "crescent".into();
            set(&mut config.coeffs.a, a);
            set(&mut config.coeffs.p, p);
            set(&mut config.coeffs.order, order);
        }
        Command::Corpus => {}
    }
    config.validate()?;
    Ok(config)
}

fn run(cli: Cli) -> Result<i32> {
    let config = build_config(cli)?;
    let outcome = run_experiment(&config)?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match &config.out {
        Some(dir) => {
            for a in &outcome.artifacts {
                writeln!(out, "{}", dir.join(&a.name).display())?;
            }
        }
        None => {
            if let Some(main) = outcome.artifacts.first() {
                out.write_all(main.contents.as_bytes())?;
            }
        }
    }
    eprintln!("{}", outcome.summary);
    Ok(outcome.status.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_exit_code(&e) as u8)
        }
    }
}
