//! Subcommands on graph electorates.

use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::Args;
use irvzone::approx::{approx_minimal_zone_with, check_approx_zone, ApproxCheck, ApproxOptions};
use irvzone::census::{census_of, graphs_of, CensusKind, CensusRow};
use irvzone::families::{family_zone, is_all_pairwise_ties, FamilySpec, FamilyZone};
use irvzone::graph::to_graph6;
use irvzone::irv::{pairwise_contest, run_irv, TiebreakPolicy};
use irvzone::shares::VoteShares;
use irvzone::zone::{
    all_exclusion_zones, is_exclusion_zone, is_exclusion_zone_pruned, minimal_exclusion_zone,
    rx3c_gadget, Counterexample, Rx3cInstance, SearchLimits, ZoneCheckResult, ZoneKind,
    DEFAULT_CHECKER_CAP, DEFAULT_PRUNED_BUDGET,
};
use irvzone::{Electorate, NodeSet};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::input::{read_file, GraphArgs, Labels};
use crate::output::{csv_line, Outcome};

/// Largest order the census runs without `--extended`.
const CENSUS_GRAPHS_MAX: usize = 7;
const CENSUS_TREES_MAX: usize = 12;

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Clone, Args)]
pub struct Budgets {
    /// Largest complement the exact 2^c zone checker will scan.
    #[arg(long = "budget-c", default_value_t = DEFAULT_CHECKER_CAP, value_parser = positive)]
    pub budget_c: usize,
    /// State budget of the possible-winner search.
    #[arg(long = "budget-nodes", default_value_t = 1 << 22, value_parser = positive)]
    pub budget_nodes: usize,
}

impl Budgets {
    fn limits(&self) -> SearchLimits {
        SearchLimits {
            checker_cap: self.budget_c,
            winner_budget: self.budget_nodes,
            ..SearchLimits::default()
        }
    }
}

fn shares_json(l: &Labels, s: &VoteShares) -> Value {
    Value::Array(
        s.iter()
            .map(|(v, r)| {
                json!({
                    "node": l.node(v),
                    "share": r.to_string(),
                    "value": s.share_f64(v),
                })
            })
            .collect(),
    )
}

fn shares_text(l: &Labels, s: &VoteShares) -> String {
    s.iter()
        .map(|(v, r)| format!("{}={}", l.text(v), r))
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Clone, Args)]
pub struct IrvArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Comma-separated candidate labels (default: every node).
    #[arg(long)]
    pub candidates: Option<String>,
    /// `branch`, `branch:LABEL` (steer ties toward LABEL), `seeded` (random
    /// ties drawn from --seed) or `order:L1,L2,...` (eliminate the earliest
    /// listed; must list every node).
    #[arg(long, default_value = "branch")]
    pub tiebreak: String,
}

pub fn irv(a: &IrvArgs, seed: u64) -> Result<Outcome, CliError> {
    let e = a.graph.electorate()?;
    let l = Labels::new(e.graph());
    let candidates = match &a.candidates {
        Some(c) => l.resolve_set(c)?,
        None => e.all_nodes(),
    };
    let t = a.tiebreak.trim();
    let policy = if t == "branch" {
        TiebreakPolicy::Branch(None)
    } else if let Some(target) = t.strip_prefix("branch:") {
        TiebreakPolicy::Branch(Some(l.resolve(target)?))
    } else if t == "seeded" {
        TiebreakPolicy::Seeded(seed)
    } else if let Some(order) = t.strip_prefix("order:") {
        TiebreakPolicy::FixedOrder(
            order.split(',').map(|x| l.resolve(x)).collect::<Result<_, _>>()?,
        )
    } else {
        return Err(CliError::Usage(format!("unknown tiebreak policy {t:?}")));
    };
    let out = run_irv(&e, &candidates, &policy)?;
    let rounds: Vec<Value> = out
        .rounds
        .iter()
        .map(|r| {
            json!({
                "remaining": l.set(&r.remaining),
                "shares": shares_json(&l, &r.shares),
                "tied_for_last": l.set(&r.shares.weakly_minimal()),
                "eliminated": l.node(r.eliminated),
            })
        })
        .collect();
    let tiebreaks: Vec<Value> = out
        .tiebreak_trace
        .iter()
        .map(|t| json!({"tied": l.set(&t.tied), "eliminated": l.node(t.eliminated)}))
        .collect();
    let policy_name = t.split(':').next().unwrap_or(t);
    let json = json!({
        "candidates": l.set(&candidates),
        "policy": policy_name,
        "rounds": rounds,
        "winner": l.node(out.winner),
        "tiebreaks": tiebreaks,
        "possible_winners": out.possible_winners.as_ref().map(|w| l.set(w)),
    });
    let mut text = String::new();
    for (i, r) in out.rounds.iter().enumerate() {
        text += &format!(
            "round {}: {}  -> eliminate {}\n",
            i + 1,
            shares_text(&l, &r.shares),
            l.text(r.eliminated)
        );
    }
    text += &format!("winner: {}\n", l.text(out.winner));
    if let Some(w) = &out.possible_winners {
        text += &format!("possible winners: {}\n", l.set_text(w));
    }
    Ok(Outcome::new(json, text))
}

#[derive(Debug, Clone, Args)]
pub struct PairwiseArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    pub u: String,
    pub v: String,
}

pub fn pairwise(a: &PairwiseArgs) -> Result<Outcome, CliError> {
    let e = a.graph.electorate()?;
    let l = Labels::new(e.graph());
    let (u, v) = (l.resolve(&a.u)?, l.resolve(&a.v)?);
    let (su, sv) = pairwise_contest(&e, u, v)?;
    let winner = match su.cmp(&sv) {
        std::cmp::Ordering::Greater => Some(u),
        std::cmp::Ordering::Less => Some(v),
        std::cmp::Ordering::Equal => None,
    };
    let json = json!({
        "u": l.node(u),
        "v": l.node(v),
        "share_u": su.to_string(),
        "share_v": sv.to_string(),
        "winner": winner.map(|w| l.node(w)),
    });
    let text = format!(
        "{} {} vs {} {}: {}\n",
        l.text(u),
        su,
        l.text(v),
        sv,
        winner.map_or("tie".to_string(), |w| format!("{} wins", l.text(w)))
    );
    Ok(Outcome::new(json, text))
}

fn counterexample_json(l: &Labels, cx: &Counterexample) -> Value {
    json!({
        "eliminated": l.node(cx.eliminated),
        "opponents": l.set(&cx.opponents),
        "configuration": l.set(&cx.configuration()),
        "shares": shares_json(l, &cx.shares),
    })
}

fn check_json(l: &Labels, set: &NodeSet, checker: &str, r: &ZoneCheckResult) -> (Value, String) {
    let verdict = if r.is_zone() { "is_zone" } else { "not_zone" };
    let json = json!({
        "set": l.set(set),
        "checker": checker,
        "verdict": verdict,
        "counterexample": r.counterexample.as_ref().map(|cx| counterexample_json(l, cx)),
    });
    let mut text = format!("{}: {verdict}\n", l.set_text(set));
    if let Some(cx) = &r.counterexample {
        text += &format!(
            "counterexample: {} can be eliminated against {} ({})\n",
            l.text(cx.eliminated),
            l.set_text(&cx.opponents),
            shares_text(l, &cx.shares)
        );
    }
    (json, text)
}

#[derive(Debug, Clone, Args)]
pub struct CheckZoneArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Comma-separated labels of the candidate zone.
    #[arg(long)]
    pub set: String,
    #[command(flatten)]
    pub budgets: Budgets,
    /// Use the branch-and-bound checker, which has no complement-size cap.
    #[arg(long)]
    pub pruned: bool,
    /// Search-node budget of the branch-and-bound checker.
    #[arg(long, default_value_t = DEFAULT_PRUNED_BUDGET, value_parser = positive)]
    pub search_budget: usize,
}

pub fn check_zone(a: &CheckZoneArgs) -> Result<Outcome, CliError> {
    let e = a.graph.electorate()?;
    let l = Labels::new(e.graph());
    let set = l.resolve_set(&a.set)?;
    let (r, checker) = if a.pruned {
        (is_exclusion_zone_pruned(&e, &set, a.search_budget)?, "pruned")
    } else {
        (is_exclusion_zone(&e, &set, a.budgets.budget_c)?, "fpt")
    };
    let (json, text) = check_json(&l, &set, checker, &r);
    Ok(Outcome::new(json, text).with_verdict(r.is_zone()))
}

#[derive(Debug, Clone, Args)]
pub struct MinZoneArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub budgets: Budgets,
}

fn kind_name(k: ZoneKind) -> &'static str {
    match k {
        ZoneKind::Minimal => "minimal",
        ZoneKind::Exact => "exact",
        ZoneKind::Trivial => "trivial",
    }
}

pub fn min_zone(a: &MinZoneArgs) -> Result<Outcome, CliError> {
    let e = a.graph.electorate()?;
    let l = Labels::new(e.graph());
    let r = minimal_exclusion_zone(&e, a.budgets.limits())?;
    let json = json!({
        "n": e.n(),
        "zone": l.set(&r.zone),
        "size": r.zone.len(),
        "kind": kind_name(r.kind),
        "seed_winners": l.set(&r.seed_winners),
        "condorcet_winners": l.set(&r.condorcet_winners),
        "condorcet_losers": l.set(&r.condorcet_losers),
    });
    let text = format!(
        "minimal zone ({}): {}\n",
        kind_name(r.kind),
        l.set_text(&r.zone)
    );
    Ok(Outcome::new(json, text))
}

#[derive(Debug, Clone, Args)]
pub struct AllZonesArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Refuse graphs with more nodes than this (the scan is exponential).
    #[arg(long, default_value_t = 16)]
    pub max_n: usize,
}

pub fn all_zones(a: &AllZonesArgs) -> Result<Outcome, CliError> {
    let e = a.graph.electorate()?;
    let l = Labels::new(e.graph());
    let zones = all_exclusion_zones(&e, a.max_n)?;
    let json = json!({
        "n": e.n(),
        "count": zones.len(),
        "zones": zones.iter().map(|z| l.set(z)).collect::<Vec<_>>(),
    });
    let text: String = zones.iter().map(|z| l.set_text(z) + "\n").collect();
    let mut csv = String::from("size,zone\n");
    for z in &zones {
        let members: Vec<String> = z.iter().map(|v| l.text(v)).collect();
        csv += &csv_line([z.len().to_string(), members.join(" ")]);
        csv.push('\n');
    }
    Ok(Outcome::new(json, text).with_csv(csv))
}

#[derive(Debug, Clone, Args)]
pub struct ApproxArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Accuracy: each returned zone fails for at most this fraction of
    /// sampled configurations.
    #[arg(long, default_value_t = 0.05)]
    pub epsilon: f64,
    /// Failure probability of that guarantee.
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
    /// Do not close the zone under the pairwise loss graph after each update.
    #[arg(long)]
    pub no_closure: bool,
}

pub fn approx_zone(a: &ApproxArgs, seed: u64) -> Result<Outcome, CliError> {
    let e = a.graph.electorate()?;
    let l = Labels::new(e.graph());
    let opts = ApproxOptions {
        loss_closure: !a.no_closure,
    };
    let r = approx_minimal_zone_with(&e, a.epsilon, a.delta, seed, opts)?;
    let updates: Vec<Value> = r
        .updates
        .iter()
        .map(|u| json!({"iteration": u.iteration, "winner": l.node(u.winner), "zone_size": u.zone_size}))
        .collect();
    let json = json!({
        "n": e.n(),
        "zone": l.set(&r.zone),
        "size": r.zone.len(),
        "certified_trivial": r.certified_trivial,
        "epsilon": r.epsilon,
        "delta": r.delta,
        "iterations_run": r.iterations_run,
        "quiet_streak_target": r.quiet_streak_target,
        "seed": r.rng_seed,
        "updates": updates,
    });
    let text = format!(
        "approximate zone ({} of {} nodes{}): {}\n",
        r.zone.len(),
        e.n(),
        if r.certified_trivial { ", certified trivial" } else { "" },
        l.set_text(&r.zone)
    );
    let mut csv = String::from("iteration,winner,zone_size\n");
    for u in &r.updates {
        let it = u.iteration.map_or(String::new(), |i| i.to_string());
        csv += &csv_line([it, l.text(u.winner), u.zone_size.to_string()]);
        csv.push('\n');
    }
    Ok(Outcome::new(json, text).with_csv(csv))
}

#[derive(Debug, Clone, Args)]
pub struct CheckApproxArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long)]
    pub set: String,
    #[arg(long, default_value_t = 0.05)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
}

pub fn check_approx(a: &CheckApproxArgs, seed: u64) -> Result<Outcome, CliError> {
    let e = a.graph.electorate()?;
    let l = Labels::new(e.graph());
    let set = l.resolve_set(&a.set)?;
    let r = check_approx_zone(&e, &set, a.epsilon, a.delta, seed)?;
    let (json, text, ok) = match &r {
        ApproxCheck::Pass { samples } => (
            json!({"set": l.set(&set), "result": "pass", "samples": samples}),
            format!("{}: pass ({samples} samples)\n", l.set_text(&set)),
            true,
        ),
        ApproxCheck::Fail {
            sample_index,
            configuration,
            winner,
        } => (
            json!({
                "set": l.set(&set),
                "result": "fail",
                "sample_index": sample_index,
                "configuration": l.set(configuration),
                "winner": l.node(*winner),
            }),
            format!(
                "{}: fail at sample {sample_index}: {} wins {}\n",
                l.set_text(&set),
                l.text(*winner),
                l.set_text(configuration)
            ),
            false,
        ),
    };
    Ok(Outcome::new(json, text).with_verdict(ok))
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    /// `path:N`, `bistar:K`, `binary-tree:H`, `cycle:N` or `complete:N`.
    pub spec: String,
    /// Also run the exact search and compare.
    #[arg(long)]
    pub verify: bool,
    #[command(flatten)]
    pub budgets: Budgets,
}

pub fn family(a: &FamilyArgs) -> Result<Outcome, CliError> {
    let spec: FamilySpec = a.spec.parse()?;
    let g = irvzone::families::build_family(spec)?;
    let e = Electorate::new(g)?;
    let l = Labels::new(e.graph());
    let zone = match family_zone(spec)? {
        FamilyZone::Nodes(z) => z,
        FamilyZone::Trivial => e.all_nodes(),
    };
    let trivial = zone.len() == e.n();
    let mut json = json!({
        "family": spec.to_string(),
        "n": e.n(),
        "zone": l.set(&zone),
        "trivial": trivial,
        "all_pairwise_ties": is_all_pairwise_ties(&e),
    });
    let mut text = format!("{spec}: {}{}\n", l.set_text(&zone), if trivial { " (trivial)" } else { "" });
    let mut ok = true;
    let mut exact_cell = String::new();
    if a.verify {
        let exact = minimal_exclusion_zone(&e, a.budgets.limits())?.zone;
        ok = exact == zone;
        json["exact_zone"] = l.set(&exact);
        json["agrees"] = Value::from(ok);
        text += &format!("exact search: {} ({})\n", l.set_text(&exact), if ok { "agrees" } else { "DISAGREES" });
        exact_cell = exact.iter().map(|v| l.text(v)).collect::<Vec<_>>().join(" ");
    }
    let members: Vec<String> = zone.iter().map(|v| l.text(v)).collect();
    let csv = format!(
        "family,n,zone,trivial,exact_zone\n{}\n",
        csv_line([spec.to_string(), e.n().to_string(), members.join(" "), trivial.to_string(), exact_cell])
    );
    Ok(Outcome::new(json, text).with_csv(csv).with_verdict(ok))
}

#[derive(Debug, Clone, Args)]
pub struct CensusArgs {
    /// `graphs` (connected graphs) or `trees`.
    #[arg(long)]
    pub kind: CensusKind,
    /// Order or inclusive range, e.g. `8` or `3..7`.
    #[arg(long, value_parser = parse_range)]
    pub n: RangeInclusive<usize>,
    /// Allow orders beyond the default limits (graphs above 7, trees above
    /// 12); these can take hours.
    #[arg(long)]
    pub extended: bool,
    #[command(flatten)]
    pub budgets: Budgets,
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad order {t:?}"));
    let r = match s.split_once("..") {
        Some((a, b)) => num(a)?..=num(b.strip_prefix('=').unwrap_or(b))?,
        None => num(s)?..=num(s)?,
    };
    if r.is_empty() || *r.start() == 0 {
        return Err(format!("empty or zero range {s:?}"));
    }
    Ok(r)
}

pub fn census(a: &CensusArgs) -> Result<Outcome, CliError> {
    let max = match a.kind {
        CensusKind::Graphs => CENSUS_GRAPHS_MAX,
        CensusKind::Trees => CENSUS_TREES_MAX,
    };
    if *a.n.end() > max && !a.extended {
        return Err(CliError::Usage(format!(
            "{} census above n = {max} needs --extended",
            a.kind
        )));
    }
    let mut rows: Vec<CensusRow> = Vec::new();
    let mut sizes = Vec::new();
    for n in a.n.clone() {
        let c = census_of(graphs_of(a.kind, n).map_err(|e| CliError::Input(e.to_string()))?, a.budgets.limits())?;
        rows.push(c.row);
        sizes.push(json!({"n": n, "zone_sizes": c.zone_sizes.iter().map(|(k, v)| json!([k, v])).collect::<Vec<_>>()}));
    }
    let json = json!({"kind": a.kind.to_string(), "rows": rows, "zone_size_histograms": sizes});
    let mut csv = format!("{}\n", CensusRow::CSV_HEADER);
    let mut text = String::new();
    for r in &rows {
        csv += &r.to_csv();
        csv.push('\n');
        text += &format!(
            "n={}: {} {}, {} with a nontrivial minimal zone, {} with a 2-node zone\n",
            r.n, r.universe, a.kind, r.nontrivial, r.two_node
        );
    }
    Ok(Outcome::new(json, text).with_csv(csv))
}

#[derive(Debug, Clone, Args)]
pub struct GadgetArgs {
    /// Instance file: a line with n, then 3n lines of three item labels.
    #[arg(long, value_name = "FILE")]
    pub instance: PathBuf,
    /// Check whether the two winning nodes form an exclusion zone (exact
    /// branch and bound).
    #[arg(long)]
    pub check: bool,
    #[arg(long, default_value_t = DEFAULT_PRUNED_BUDGET, value_parser = positive)]
    pub search_budget: usize,
    /// Include the gadget graph in graph6 form.
    #[arg(long)]
    pub graph6: bool,
}

pub fn gadget(a: &GadgetArgs) -> Result<Outcome, CliError> {
    let inst = Rx3cInstance::parse(&read_file(&a.instance)?)?;
    let g = rx3c_gadget(&inst)?;
    let covers = inst.exact_covers();
    let pair = g.winning_pair();
    let e = Electorate::new(g.graph.clone())?;
    let l = Labels::new(e.graph());
    let mut json = json!({
        "instance_n": inst.n(),
        "items": inst.items(),
        "exact_covers": covers.len(),
        "nodes": e.n(),
        "edges": e.graph().m(),
        "winning_pair": l.set(&pair),
    });
    let mut text = format!(
        "instance n={} with {} exact cover(s); gadget has {} nodes and {} edges\n",
        inst.n(),
        covers.len(),
        e.n(),
        e.graph().m()
    );
    if a.graph6 {
        // graph6 drops labels: node i of the encoding is labels[i-1].
        json["graph6"] = Value::from(to_graph6(e.graph()));
        json["labels"] = Value::from((0..e.n()).map(|v| l.text(v)).collect::<Vec<_>>());
    }
    let mut ok = true;
    if a.check {
        let r = is_exclusion_zone_pruned(&e, &pair, a.search_budget)?;
        let (check, t) = check_json(&l, &pair, "pruned", &r);
        json["check"] = check;
        text += &t;
        ok = r.is_zone();
    }
    Ok(Outcome::new(json, text).with_verdict(ok))
}
