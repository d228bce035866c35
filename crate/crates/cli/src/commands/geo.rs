//! Monte-Carlo checks of continuous electorates.

use std::path::PathBuf;

use clap::{Args, Subcommand};
use irvzone_geometry::verify::ProjectionReport;
use irvzone_geometry::{
    builtin_chain, mc_irv_outcome, mc_vote_shares, verify_chain, verify_condorcet_hyperrect,
    verify_flag_zone, verify_projection, ChainName, ChainReport, ChainSpec, McIrvOutcome, Metric,
    Point, Region, Scene,
};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::input::read_file;
use crate::output::{csv_line, Outcome};

#[derive(Debug, Clone, Subcommand)]
pub enum GeoCommand {
    /// Replay an elimination chain from the centre to a corner.
    VerifyChain(ChainArgs),
    /// Random elections on the flag-shaped region, checking its zone.
    VerifyFlag(FlagArgs),
    /// The centre of a box beats random opponents and its corner loses.
    VerifyCondorcet(CondorcetArgs),
    /// Mid-plane elections in a box match the same election in the plane.
    VerifyProjection(ProjectionArgs),
    /// Plurality shares of given candidates.
    Shares(ElectionArgs),
    /// IRV with a significance margin on every elimination.
    Irv(ElectionArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Sampling {
    /// Number of uniformly sampled voters.
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    /// Required separation in standard errors.
    #[arg(long, default_value_t = 3.0)]
    pub margin: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ChainArgs {
    /// `square_l2`, `rect_l1(W)` or `rect_l2(W)`.
    #[arg(long, required_unless_present = "file", conflicts_with = "file")]
    pub chain: Option<String>,
    /// Chain description file.
    #[arg(long, value_name = "FILE")]
    pub file: Option<PathBuf>,
    #[command(flatten)]
    pub sampling: Sampling,
}

#[derive(Debug, Clone, Args)]
pub struct FlagArgs {
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub configs: u64,
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, default_value_t = 3.0)]
    pub margin: f64,
}

#[derive(Debug, Clone, Args)]
pub struct BoxArgs {
    /// Side lengths, e.g. `2,1,1`.
    #[arg(long, default_value = "1,1")]
    pub dims: String,
    /// Distance: 1 (L1) or 2 (Euclidean).
    #[arg(long, default_value_t = 2)]
    pub p: u32,
}

impl BoxArgs {
    fn sides(&self) -> Result<Vec<f64>, CliError> {
        parse_floats(&self.dims, ',')
    }

    fn metric(&self) -> Result<Metric, CliError> {
        Ok(Metric::from_p(self.p)?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct CondorcetArgs {
    #[command(flatten)]
    pub region: BoxArgs,
    #[arg(long, default_value_t = 1000)]
    pub opponents: usize,
    #[command(flatten)]
    pub sampling: Sampling,
}

#[derive(Debug, Clone, Args)]
pub struct ProjectionArgs {
    #[command(flatten)]
    pub region: BoxArgs,
    /// The two axes spanning the plane, 0-based like candidate indices.
    #[arg(long, default_value = "0,1")]
    pub axes: String,
    /// Candidate points separated by `;`, coordinates by spaces.
    #[arg(long)]
    pub candidates: String,
    #[command(flatten)]
    pub sampling: Sampling,
}

#[derive(Debug, Clone, Args)]
pub struct ElectionArgs {
    #[command(flatten)]
    pub region: BoxArgs,
    /// Use the flag-shaped region instead of a box.
    #[arg(long)]
    pub flag: bool,
    /// Candidate points separated by `;`, coordinates by spaces.
    #[arg(long)]
    pub candidates: String,
    #[command(flatten)]
    pub sampling: Sampling,
}

fn parse_floats(s: &str, sep: char) -> Result<Vec<f64>, CliError> {
    s.split(sep)
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| CliError::Usage(format!("not a number: {t:?}")))
        })
        .collect()
}

fn parse_points(s: &str) -> Result<Vec<Point>, CliError> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| parse_floats(p, ' '))
        .collect()
}

fn samples(n: u64) -> Result<usize, CliError> {
    usize::try_from(n).map_err(|_| CliError::Usage(format!("{n} samples is too many")))
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn pass(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn run(cmd: &GeoCommand, seed: u64) -> Result<Outcome, CliError> {
    match cmd {
        GeoCommand::VerifyChain(a) => chain(a, seed),
        GeoCommand::VerifyFlag(a) => flag(a, seed),
        GeoCommand::VerifyCondorcet(a) => condorcet(a, seed),
        GeoCommand::VerifyProjection(a) => projection(a, seed),
        GeoCommand::Shares(a) => shares(a, seed),
        GeoCommand::Irv(a) => irv(a, seed),
    }
}

fn chain(a: &ChainArgs, seed: u64) -> Result<Outcome, CliError> {
    let (label, spec) = match (&a.chain, &a.file) {
        (Some(name), _) => {
            let name: ChainName = name.parse()?;
            (name.to_string(), builtin_chain(name)?)
        }
        (None, Some(path)) => (path.display().to_string(), ChainSpec::parse(&read_file(path)?)?),
        (None, None) => unreachable!("clap requires one source"),
    };
    let r: ChainReport = verify_chain(&spec, samples(a.sampling.samples)?, seed, a.sampling.margin)?;
    let mut json = to_json(&r);
    json["chain"] = Value::from(label.clone());
    let mut text = format!("chain {label}: {} steps, {}\n", r.steps.len(), pass(r.passed));
    let mut csv = String::from("step,tag,eliminated,elimination_sigmas,winner,winner_confirmed,passed\n");
    for s in &r.steps {
        let elim = s.eliminated.map_or(String::from("-"), |e| e.to_string());
        let sig = s.elimination_sigmas.map_or(String::new(), |x| format!("{x:.2}"));
        text += &format!(
            "  step {} {}: eliminate {elim} ({sig} sigma), winner {} {}\n",
            s.step,
            s.tag.name(),
            s.winner,
            pass(s.passed)
        );
        csv += &csv_line([
            s.step.to_string(),
            s.tag.name().to_string(),
            elim,
            sig,
            (s.winner).to_string(),
            s.winner_confirmed.to_string(),
            s.passed.to_string(),
        ]);
        csv.push('\n');
    }
    Ok(Outcome::new(json, text).with_csv(csv).with_verdict(r.passed))
}

fn flag(a: &FlagArgs, seed: u64) -> Result<Outcome, CliError> {
    let configs = usize::try_from(a.configs).map_err(|_| CliError::Usage("too many configurations".into()))?;
    let r = verify_flag_zone(configs, samples(a.samples)?, seed, a.margin)?;
    let text = format!(
        "flag: {} configurations, {} conclusive, {} escapes; triangle area {:.4} (expected {}), flag area {:.4} (expected {}): {}\n",
        r.configs,
        r.conclusive,
        r.escapes,
        r.triangle_area.estimate,
        r.triangle_area.expected,
        r.flag_area.estimate,
        r.flag_area.expected,
        pass(r.passed)
    );
    Ok(Outcome::new(to_json(&r), text).with_verdict(r.passed))
}

fn condorcet(a: &CondorcetArgs, seed: u64) -> Result<Outcome, CliError> {
    let r = verify_condorcet_hyperrect(
        &a.region.sides()?,
        a.region.metric()?,
        a.opponents,
        samples(a.sampling.samples)?,
        seed,
        a.sampling.margin,
    )?;
    let text = format!(
        "centre min share {:.4}, corner max share {:.4} over {} opponents: {}\n",
        r.center_min_share,
        r.corner_max_share,
        r.opponents,
        pass(r.passed)
    );
    Ok(Outcome::new(to_json(&r), text).with_verdict(r.passed))
}

fn projection(a: &ProjectionArgs, seed: u64) -> Result<Outcome, CliError> {
    let axes: Vec<usize> = a
        .axes
        .split(',')
        .map(|t| t.trim().parse::<usize>().ok())
        .collect::<Option<_>>()
        .ok_or_else(|| CliError::Usage(format!("bad axes {:?} (expected two axis indices)", a.axes)))?;
    let [x, y] = axes[..] else {
        return Err(CliError::Usage("--axes takes exactly two indices".into()));
    };
    let r: ProjectionReport = verify_projection(
        &a.region.sides()?,
        a.region.metric()?,
        (x, y),
        &parse_points(&a.candidates)?,
        samples(a.sampling.samples)?,
        seed,
        a.sampling.margin,
    )?;
    let mut text = String::new();
    for (i, ((f, p), s)) in r.full.shares.iter().zip(&r.projected.shares).zip(&r.sigmas).enumerate() {
        text += &format!("candidate {}: box {f:.4}, plane {p:.4} ({s:.2} sigma)\n", i);
    }
    text += &format!("{}\n", pass(r.passed));
    Ok(Outcome::new(to_json(&r), text).with_verdict(r.passed))
}

fn scene(a: &ElectionArgs) -> Result<Scene, CliError> {
    let region = if a.flag {
        Region::Flag
    } else {
        Region::hyperrectangle(a.region.sides()?)?
    };
    Ok(Scene::new(region, a.region.metric()?)?)
}

fn shares(a: &ElectionArgs, seed: u64) -> Result<Outcome, CliError> {
    let cands = parse_points(&a.candidates)?;
    let r = mc_vote_shares(&scene(a)?, &cands, samples(a.sampling.samples)?, seed)?;
    let mut text = String::new();
    let mut csv = String::from("candidate,share,std_error\n");
    for (i, (s, e)) in r.shares.iter().zip(&r.std_errors).enumerate() {
        text += &format!("candidate {}: {s:.6} ± {e:.6}\n", i);
        csv += &csv_line([(i).to_string(), s.to_string(), e.to_string()]);
        csv.push('\n');
    }
    Ok(Outcome::new(to_json(&r), text).with_csv(csv))
}

fn irv(a: &ElectionArgs, seed: u64) -> Result<Outcome, CliError> {
    let cands = parse_points(&a.candidates)?;
    let r = mc_irv_outcome(&scene(a)?, &cands, samples(a.sampling.samples)?, seed, a.sampling.margin)?;
    let text = match &r {
        McIrvOutcome::Winner { winner, .. } => format!("winner: candidate {}\n", winner),
        McIrvOutcome::Inconclusive { round, ambiguous, .. } => format!(
            "inconclusive at round {round}: candidates {} too close to call\n",
            ambiguous.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
        ),
    };
    let mut json = to_json(&r);
    json["candidates"] = json!(cands);
    Ok(Outcome::new(json, text))
}
