//! Monte-Carlo IRV elections with voters spread uniformly over rectangles,
//! hyperrectangles and a flag-shaped polygon.
//!
//! ```
//! use irvzone_geometry::{mc_vote_shares, Metric, Region, Scene};
//!
//! let scene = Scene::new(Region::rectangle(1.0, 1.0).unwrap(), Metric::L2).unwrap();
//! let mc = mc_vote_shares(&scene, &[vec![0.25, 0.5], vec![0.75, 0.5]], 10_000, 7).unwrap();
//! assert!((mc.shares[0] - 0.5).abs() < 4.0 * mc.std_errors[0]);
//! ```

pub mod ballots;
pub mod chain;
pub mod cloud;
pub mod error;
pub mod mc;
pub mod region;
pub mod verify;

pub use ballots::{BallotTally, McIrvOutcome, McRound, MAX_CANDIDATES};
pub use chain::{builtin_chain, verify_chain, ChainName, ChainReport, ChainSpec, ChainStep, StepTag};
pub use cloud::VoterCloud;
pub use error::GeoError;
pub use mc::{mc_irv_outcome, mc_vote_shares, McShares};
pub use region::{Metric, Point, Region, Scene};
pub use verify::{verify_condorcet_hyperrect, verify_flag_zone, verify_projection};
