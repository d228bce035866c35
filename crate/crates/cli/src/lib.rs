//! The `irvzone` command line: exact and approximate exclusion zones of
//! graph electorates, small-graph censuses, and Monte-Carlo checks of
//! continuous electorates.
//!
//! Exit codes: 0 success, 1 a completed check with a negative answer, 2 bad
//! arguments or input, 3 a search budget exhausted.

mod commands;
mod error;
mod input;
mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand};

pub use error::{CliError, EXIT_BUDGET, EXIT_USAGE, EXIT_VERDICT};
pub use output::Format;

use commands::geo::GeoCommand;
use commands::graph::*;
use output::Outcome;

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 2024;

#[derive(Debug, Parser)]
#[command(name = "irvzone", version, about = "Exclusion zones of IRV elections on graphs and regions")]
pub struct Cli {
    /// Output format (default: csv for `census`, json otherwise).
    #[arg(long, global = true)]
    pub format: Option<Format>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run an IRV election on a graph electorate.
    Irv(IrvArgs),
    /// Head-to-head vote shares of two nodes.
    Pairwise(PairwiseArgs),
    /// Decide whether a node set is an exclusion zone.
    CheckZone(CheckZoneArgs),
    /// Find the minimal exclusion zone.
    MinZone(MinZoneArgs),
    /// List every exclusion zone of a small graph.
    AllZones(AllZonesArgs),
    /// Approximate the minimal zone by sampling elections.
    ApproxZone(ApproxArgs),
    /// Test a set against sampled elections.
    CheckApprox(CheckApproxArgs),
    /// Closed-form zone of a graph family.
    Family(FamilyArgs),
    /// Zone statistics over all connected graphs or trees of given orders.
    Census(CensusArgs),
    /// Build the graph encoding an exact-cover instance.
    Gadget(GadgetArgs),
    /// Continuous electorates.
    #[command(subcommand)]
    Geo(GeoCommand),
}

impl Cli {
    fn format(&self) -> Format {
        self.format.unwrap_or(match self.command {
            Command::Census(_) => Format::Csv,
            _ => Format::Json,
        })
    }

    fn execute(&self) -> Result<Outcome, CliError> {
        let seed = self.seed;
        match &self.command {
            Command::Irv(a) => irv(a, seed),
            Command::Pairwise(a) => pairwise(a),
            Command::CheckZone(a) => check_zone(a),
            Command::MinZone(a) => min_zone(a),
            Command::AllZones(a) => all_zones(a),
            Command::ApproxZone(a) => approx_zone(a, seed),
            Command::CheckApprox(a) => check_approx(a, seed),
            Command::Family(a) => family(a),
            Command::Census(a) => census(a),
            Command::Gadget(a) => gadget(a),
            Command::Geo(g) => commands::geo::run(g, seed),
        }
    }

    /// Runs the command on a thread pool of the requested size.
    pub fn run(&self) -> Result<Outcome, CliError> {
        match self.threads {
            None => self.execute(),
            Some(t) => rayon::ThreadPoolBuilder::new()
                .num_threads(t as usize)
                .build()
                .map_err(|e| CliError::Usage(format!("cannot start {t} threads: {e}")))?
                .install(|| self.execute()),
        }
    }
}

fn wants_json<T: AsRef<std::ffi::OsStr>>(args: &[T]) -> bool {
    args.windows(2).any(|w| w[0].as_ref() == "--format" && w[1].as_ref() == "json")
        || args.iter().any(|a| a.as_ref() == "--format=json")
}

/// Writes an error to `errw`: as a JSON object when JSON output was asked
/// for, as one line of text otherwise.
fn report_error(err: &CliError, json: bool, errw: &mut dyn Write) -> i32 {
    if json {
        let _ = writeln!(errw, "{}", err.to_json());
    } else {
        let _ = writeln!(errw, "error: {err}");
    }
    err.exit_code()
}

/// Parses `args` (program name first), runs the command and writes its
/// report to `out` and diagnostics to `err`. Returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            if wants_json(&args) {
                let message = e.to_string();
                let first = message.lines().next().unwrap_or_default();
                let first = first.strip_prefix("error: ").unwrap_or(first);
                return report_error(&CliError::Usage(first.to_string()), true, err);
            }
            let _ = write!(err, "{}", e.render());
            return EXIT_USAGE;
        }
    };
    let format = cli.format();
    let result = cli.run().and_then(|o| Ok((o.render(format)?, o.exit_code())));
    match result {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => report_error(&e, format == Format::Json, err),
    }
}

/// [`run_with`] on the process's standard streams.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}
