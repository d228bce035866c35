//! Chains of elections that walk a possible winner from the centre of a
//! rectangle to a corner, each step's winner losing in the next step.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::ballots::{members, BallotTally};
use crate::cloud::VoterCloud;
use crate::error::GeoError;
use crate::mc::check_margin;
use crate::region::{Metric, Point, Region, Scene};

/// Distance within which a winner counts as reappearing in the next step.
const LINK_TOLERANCE: f64 = 1e-9;

/// What a chain step does.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepTag {
    /// The centre surrounded by four candidates, one toward each side.
    Cross,
    /// A candidate near the bottom edge against the midpoints of both sides.
    BottomVsSides,
    /// Three evenly spaced candidates on the left edge.
    EdgeTriple,
    /// A left-edge candidate squeezed between a lower left-edge candidate and
    /// one on the far side near the top.
    CornerSqueeze,
    /// A candidate flanked by two slightly to its left, one above and one
    /// below.
    Wedge,
    /// A flanking candidate against the point level with the old centre.
    Recenter,
    /// Two mirror-image candidates.
    Reflect,
    /// A top-edge candidate against a left-edge one just above the last.
    Return,
}

impl StepTag {
    const ALL: [StepTag; 8] = [
        StepTag::Cross,
        StepTag::BottomVsSides,
        StepTag::EdgeTriple,
        StepTag::CornerSqueeze,
        StepTag::Wedge,
        StepTag::Recenter,
        StepTag::Reflect,
        StepTag::Return,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StepTag::Cross => "cross",
            StepTag::BottomVsSides => "bottom-vs-sides",
            StepTag::EdgeTriple => "edge-triple",
            StepTag::CornerSqueeze => "corner-squeeze",
            StepTag::Wedge => "wedge",
            StepTag::Recenter => "recenter",
            StepTag::Reflect => "reflect",
            StepTag::Return => "return",
        }
    }
}

impl FromStr for StepTag {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        StepTag::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown step tag {s:?}"))
    }
}

/// One election of a chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainStep {
    pub tag: StepTag,
    pub candidates: Vec<Point>,
    /// Candidate that must be eliminated first, if the step designates one.
    /// Steps that open with an exact tie leave it unset.
    pub eliminated: Option<usize>,
    /// Candidate that must be a possible winner.
    pub winner: usize,
}

impl ChainStep {
    fn new(tag: StepTag, candidates: Vec<Point>, eliminated: Option<usize>, winner: usize) -> Self {
        ChainStep {
            tag,
            candidates,
            eliminated,
            winner,
        }
    }

    pub fn winner_point(&self) -> &Point {
        &self.candidates[self.winner]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainSpec {
    pub scene: Scene,
    pub steps: Vec<ChainStep>,
}

/// The built-in chains.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum ChainName {
    /// The unit square with Euclidean voters.
    SquareL2,
    /// `[0, w] × [0, 1]` with L1 voters.
    RectL1 { w: f64 },
    /// `[0, w] × [0, 1]` with Euclidean voters.
    RectL2 { w: f64 },
}

impl FromStr for ChainName {
    type Err = GeoError;
    /// Accepts `square_l2`, `rect_l1(W)` and `rect_l2(W)`.
    fn from_str(s: &str) -> Result<Self, GeoError> {
        let bad = || GeoError::Precondition(format!("unknown chain {s:?}"));
        let s = s.trim();
        if s == "square_l2" {
            return Ok(ChainName::SquareL2);
        }
        let (head, rest) = s.split_once('(').ok_or_else(bad)?;
        let w: f64 = rest
            .strip_suffix(')')
            .ok_or_else(bad)?
            .trim()
            .parse()
            .map_err(|_| bad())?;
        match head {
            "rect_l1" => Ok(ChainName::RectL1 { w }),
            "rect_l2" => Ok(ChainName::RectL2 { w }),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for ChainName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainName::SquareL2 => write!(f, "square_l2"),
            ChainName::RectL1 { w } => write!(f, "rect_l1({w})"),
            ChainName::RectL2 { w } => write!(f, "rect_l2({w})"),
        }
    }
}

fn p(x: f64, y: f64) -> Point {
    vec![x, y]
}

/// The chain with the given name, with coordinates computed from its
/// parameter schedule. Rectangles need `w ≥ 1`.
pub fn builtin_chain(name: ChainName) -> Result<ChainSpec, GeoError> {
    match name {
        ChainName::SquareL2 => Ok(square_l2()),
        ChainName::RectL1 { w } | ChainName::RectL2 { w } if !(w.is_finite() && w >= 1.0) => {
            Err(GeoError::Precondition(format!(
                "rectangle chains need a finite width w >= 1 (got {w})"
            )))
        }
        ChainName::RectL1 { w } => Ok(rect_l1(w)),
        ChainName::RectL2 { w: 1.0 } => Ok(square_l2()),
        ChainName::RectL2 { w } => Ok(rect_l2(w)),
    }
}

fn square_l2() -> ChainSpec {
    let x = 0.1;
    let y = 0.18;
    let steps = vec![
        // The centre loses to four candidates placed toward the sides.
        ChainStep::new(
            StepTag::Cross,
            vec![p(0.5, 0.5), p(x, 0.5), p(0.5, 1.0 - x), p(1.0 - x, 0.5), p(0.5, x)],
            Some(0),
            4,
        ),
        ChainStep::new(
            StepTag::BottomVsSides,
            vec![p(0.5, x), p(0.0, 0.5), p(1.0, 0.5)],
            Some(0),
            1,
        ),
        ChainStep::new(
            StepTag::EdgeTriple,
            vec![p(0.0, y), p(0.0, 0.5), p(0.0, 1.0 - y)],
            Some(1),
            2,
        ),
        ChainStep::new(
            StepTag::CornerSqueeze,
            vec![p(0.0, 1.0 - y), p(0.0, 0.0), p(1.0, 1.0)],
            Some(0),
            1,
        ),
    ];
    ChainSpec {
        scene: Scene {
            region: Region::Rectangle { w: 1.0, h: 1.0 },
            metric: Metric::L2,
        },
        steps,
    }
}

/// Walks a winner from the centre `(w/2, 1/2)` to `(0, 1/2)` in `pairs`
/// wedge/recenter pairs; `offset` is the vertical offset of the flanking
/// candidates given the horizontal step.
fn wedge_walk(w: f64, pairs: usize, offset: impl Fn(f64) -> f64) -> Vec<ChainStep> {
    let eps = (w / 2.0) / pairs as f64;
    let mut steps = Vec::with_capacity(2 * pairs);
    for j in 0..pairs {
        let x = w / 2.0 - j as f64 * eps;
        // Land exactly on the left edge at the end.
        let left = if j + 1 == pairs { 0.0 } else { w / 2.0 - (j + 1) as f64 * eps };
        let top = p(left, 0.5 + offset(eps));
        steps.push(ChainStep::new(
            StepTag::Wedge,
            vec![p(x, 0.5), top.clone(), p(left, 0.5 - offset(eps))],
            Some(0),
            1,
        ));
        steps.push(ChainStep::new(StepTag::Recenter, vec![top, p(left, 0.5)], Some(0), 1));
    }
    steps
}

fn edge_triple() -> ChainStep {
    // All three shares tie, so any of them may go first.
    ChainStep::new(
        StepTag::EdgeTriple,
        vec![p(0.0, 1.0 / 6.0), p(0.0, 0.5), p(0.0, 5.0 / 6.0)],
        None,
        2,
    )
}

fn rect_l1(w: f64) -> ChainSpec {
    // Steps of at most 1/12 keep the centre's share below the flanks' for
    // every w >= 1, and an integral number of them ends on the left edge.
    let pairs = (6.0 * w).ceil() as usize;
    let mut steps = wedge_walk(w, pairs, |eps| 2.0 * eps);
    steps.push(edge_triple());

    let eps = 1.0 / (10.0 * w);
    let rise = 1.0 / (11.0 * w);
    let mut y = 5.0 / 6.0;
    let mut i = 0usize;
    loop {
        let c = 1.0 / 6.0 - eps - i as f64 * rise;
        if c <= 0.0 {
            break;
        }
        steps.push(ChainStep::new(
            StepTag::CornerSqueeze,
            vec![p(0.0, y), p(0.0, c), p(w - c, 1.0)],
            Some(0),
            2,
        ));
        steps.push(ChainStep::new(
            StepTag::Reflect,
            vec![p(c, 1.0), p(w - c, 1.0)],
            None,
            0,
        ));
        i += 1;
        y = 5.0 / 6.0 + i as f64 * rise;
        steps.push(ChainStep::new(
            StepTag::Return,
            vec![p(c, 1.0), p(0.0, y)],
            Some(0),
            1,
        ));
    }
    // The last squeeze shrinks its gap so the far candidate sits in the
    // corner.
    steps.push(ChainStep::new(
        StepTag::CornerSqueeze,
        vec![p(0.0, y), p(0.0, 0.0), p(w, 1.0)],
        Some(0),
        2,
    ));
    ChainSpec {
        scene: Scene {
            region: Region::Rectangle { w, h: 1.0 },
            metric: Metric::L1,
        },
        steps,
    }
}

fn rect_l2(w: f64) -> ChainSpec {
    let pairs = (40.0 * w * w).ceil() as usize;
    let mut steps = wedge_walk(w, pairs, |_| 1.0 / 6.0);
    steps.push(edge_triple());

    let eps = 1.0 / (8.0 * w * w + 5.0);
    let mut top = 5.0 / 6.0;
    let mut i = 1usize;
    loop {
        let c = 1.0 / 6.0 - i as f64 * eps;
        if c <= 0.0 {
            break;
        }
        steps.push(ChainStep::new(
            StepTag::CornerSqueeze,
            vec![p(0.0, top), p(0.0, c), p(w, 1.0 - c)],
            Some(0),
            2,
        ));
        steps.push(ChainStep::new(
            StepTag::Reflect,
            vec![p(0.0, 1.0 - c), p(w, 1.0 - c)],
            None,
            0,
        ));
        top = 1.0 - c;
        i += 1;
    }
    steps.push(ChainStep::new(
        StepTag::CornerSqueeze,
        vec![p(0.0, top), p(0.0, 0.0), p(w, 1.0)],
        Some(0),
        2,
    ));
    ChainSpec {
        scene: Scene {
            region: Region::Rectangle { w, h: 1.0 },
            metric: Metric::L2,
        },
        steps,
    }
}

fn close(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= LINK_TOLERANCE)
}

impl ChainSpec {
    /// Checks region, candidates, designated indices and the linkage: every
    /// step's winner must be a candidate of the next step.
    pub fn validate(&self) -> Result<(), GeoError> {
        self.scene.region.validate()?;
        if self.steps.is_empty() {
            return Err(GeoError::Precondition("a chain needs at least one step".into()));
        }
        for (i, step) in self.steps.iter().enumerate() {
            self.scene.check_candidates(&step.candidates).map_err(|e| {
                GeoError::Precondition(format!("step {}: {e}", i + 1))
            })?;
            let k = step.candidates.len();
            if step.winner >= k || step.eliminated.is_some_and(|e| e >= k) {
                return Err(GeoError::Precondition(format!(
                    "step {}: designated candidate index out of range",
                    i + 1
                )));
            }
            if step.eliminated == Some(step.winner) {
                return Err(GeoError::Precondition(format!(
                    "step {}: the designated winner cannot be eliminated first",
                    i + 1
                )));
            }
            if step.candidates.len() < 2 {
                return Err(GeoError::Precondition(format!(
                    "step {}: a chain election needs at least two candidates",
                    i + 1
                )));
            }
        }
        for (i, pair) in self.steps.windows(2).enumerate() {
            let w = pair[0].winner_point();
            if !pair[1].candidates.iter().any(|c| close(c, w)) {
                return Err(GeoError::Precondition(format!(
                    "broken linkage: the winner {w:?} of step {} is not a candidate in step {}",
                    i + 1,
                    i + 2
                )));
            }
        }
        Ok(())
    }

    /// Parses the line format written by `Display`:
    ///
    /// ```text
    /// region rect 2 1          # or: region hyperrect 1 1 1 / region flag
    /// metric l1
    /// step wedge 0 1 : 1 0.5 ; 0.9 0.6 ; 0.9 0.4
    /// step edge-triple - 2 : 0 0.1667 ; 0 0.5 ; 0 0.8333
    /// ```
    ///
    /// Each step names its tag, the designated first elimination (`-` for
    /// none) and the designated winner, then the candidates.
    pub fn parse(text: &str) -> Result<Self, GeoError> {
        let mut region = None;
        let mut metric = None;
        let mut steps = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |message: String| GeoError::Parse { line, message };
            let l = raw.split('#').next().unwrap_or("").trim();
            if l.is_empty() {
                continue;
            }
            let (key, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
            let nums = |s: &str| -> Result<Vec<f64>, GeoError> {
                s.split_whitespace()
                    .map(|t| t.parse::<f64>().map_err(|_| err(format!("bad number {t:?}"))))
                    .collect()
            };
            match key {
                "region" => {
                    let (kind, args) = rest.trim().split_once(char::is_whitespace).unwrap_or((rest.trim(), ""));
                    let r = match kind {
                        "rect" => match nums(args)?[..] {
                            [w, h] => Region::Rectangle { w, h },
                            _ => return Err(err("rect takes a width and a height".into())),
                        },
                        "hyperrect" => Region::Hyperrectangle { sides: nums(args)? },
                        "flag" => Region::Flag,
                        other => return Err(err(format!("unknown region {other:?}"))),
                    };
                    r.validate().map_err(|e| err(e.to_string()))?;
                    region = Some(r);
                }
                "metric" => {
                    metric = Some(match rest.trim() {
                        "l1" => Metric::L1,
                        "l2" => Metric::L2,
                        other => return Err(err(format!("unknown metric {other:?}"))),
                    })
                }
                "step" => {
                    let (head, body) = rest
                        .split_once(':')
                        .ok_or_else(|| err("expected ':' before the candidates".into()))?;
                    let h: Vec<&str> = head.split_whitespace().collect();
                    let [tag, elim, win] = h[..] else {
                        return Err(err("expected: step TAG ELIMINATED|- WINNER : ...".into()));
                    };
                    let tag: StepTag = tag.parse().map_err(err)?;
                    let eliminated = match elim {
                        "-" => None,
                        e => Some(e.parse().map_err(|_| err(format!("bad index {e:?}")))?),
                    };
                    let winner = win.parse().map_err(|_| err(format!("bad index {win:?}")))?;
                    let candidates = body.split(';').map(nums).collect::<Result<Vec<_>, _>>()?;
                    steps.push(ChainStep::new(tag, candidates, eliminated, winner));
                }
                other => return Err(err(format!("unknown directive {other:?}"))),
            }
        }
        let region = region.ok_or(GeoError::Parse {
            line: 0,
            message: "missing region line".into(),
        })?;
        let metric = metric.ok_or(GeoError::Parse {
            line: 0,
            message: "missing metric line".into(),
        })?;
        Ok(ChainSpec {
            scene: Scene { region, metric },
            steps,
        })
    }
}

impl fmt::Display for ChainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        match &self.scene.region {
            Region::Rectangle { w, h } => writeln!(f, "region rect {w} {h}")?,
            Region::Hyperrectangle { sides } => writeln!(f, "region hyperrect {}", join(sides))?,
            Region::Flag => writeln!(f, "region flag")?,
        }
        writeln!(f, "metric {}", self.scene.metric)?;
        for s in &self.steps {
            let elim = s.eliminated.map_or("-".to_string(), |e| e.to_string());
            let cands: Vec<String> = s.candidates.iter().map(|c| join(c)).collect();
            writeln!(f, "step {} {elim} {} : {}", s.tag.name(), s.winner, cands.join(" ; "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepReport {
    pub step: usize,
    pub tag: StepTag,
    pub shares: Vec<f64>,
    pub eliminated: Option<usize>,
    /// Smallest gap, in standard errors, between the designated elimination
    /// and any other candidate (`None` if no elimination is designated or
    /// the gap has no sampling variance).
    pub elimination_sigmas: Option<f64>,
    pub elimination_confirmed: bool,
    pub winner: usize,
    /// Candidates that win some run in which each elimination is of a
    /// candidate not significantly above the lowest share.
    pub possible_winners: Vec<usize>,
    pub winner_confirmed: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    pub steps: Vec<StepReport>,
    pub samples: u64,
    pub seed: u64,
    pub margin_sigmas: f64,
    /// The first step includes the region's centre.
    pub starts_at_center: bool,
    /// The last step's winner is a corner of the region.
    pub ends_at_corner: bool,
    /// Every step passed and both endpoint conditions hold.
    pub passed: bool,
}

impl ChainReport {
    pub fn failed_steps(&self) -> impl Iterator<Item = &StepReport> {
        self.steps.iter().filter(|s| !s.passed)
    }
}

/// Replays every step on one shared sample of voters and checks that the
/// designated candidate is eliminated first by at least `margin_sigmas`
/// standard errors and that the designated winner can win.
pub fn verify_chain(
    chain: &ChainSpec,
    samples: usize,
    seed: u64,
    margin_sigmas: f64,
) -> Result<ChainReport, GeoError> {
    check_margin(margin_sigmas)?;
    chain.validate()?;
    if matches!(chain.scene.region, Region::Flag) {
        return Err(GeoError::Precondition(
            "chains run on rectangles and hyperrectangles only".into(),
        ));
    }
    let cloud = VoterCloud::sample(&chain.scene.region, samples, seed)?;
    let steps = chain
        .steps
        .iter()
        .enumerate()
        .map(|(i, step)| verify_step(chain.scene.metric, &cloud, i + 1, step, margin_sigmas))
        .collect::<Vec<_>>();
    let center = chain.scene.region.center().expect("rectangular region");
    let starts_at_center = chain.steps[0].candidates.iter().any(|c| close(c, &center));
    let last = chain.steps.last().expect("nonempty").winner_point();
    let ends_at_corner = chain.scene.region.corners().iter().any(|c| close(c, last));
    let passed = starts_at_center && ends_at_corner && steps.iter().all(|s| s.passed);
    Ok(ChainReport {
        steps,
        samples: samples as u64,
        seed,
        margin_sigmas,
        starts_at_center,
        ends_at_corner,
        passed,
    })
}

fn verify_step(
    metric: Metric,
    cloud: &VoterCloud,
    index: usize,
    step: &ChainStep,
    margin: f64,
) -> StepReport {
    let tally = BallotTally::new(metric, cloud, &step.candidates);
    let all = tally.all();
    let shares = tally.shares(all);
    let (elimination_sigmas, elimination_confirmed, after) = match step.eliminated {
        None => (None, true, all),
        Some(e) => {
            let gap = members(all)
                .filter(|&c| c != e)
                .map(|c| tally.separation(all, &shares, e, c))
                .fold(f64::INFINITY, f64::min);
            (gap.is_finite().then_some(gap), gap >= margin, all & !(1 << e))
        }
    };
    let winners = tally.possible_winners(after, margin);
    let winner_confirmed = winners >> step.winner & 1 == 1;
    StepReport {
        step: index,
        tag: step.tag,
        shares,
        eliminated: step.eliminated,
        elimination_sigmas,
        elimination_confirmed,
        winner: step.winner,
        possible_winners: members(winners).collect(),
        winner_confirmed,
        passed: elimination_confirmed && winner_confirmed,
    }
}
