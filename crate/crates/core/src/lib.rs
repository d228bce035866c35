//! Split-IRV elections on graph-distance electorates and their exclusion
//! zones: exact tallies, elections with explicit tiebreaks, exact and
//! approximate exclusion-zone computation, closed forms for classic graph
//! families, and exhaustive enumeration of small graphs and trees.
//!
//! ```
//! use irvzone::{Electorate, NodeSet, families::{build_family, FamilySpec}};
//! use irvzone::zone::{minimal_exclusion_zone, SearchLimits};
//!
//! let e = Electorate::new(build_family(FamilySpec::Path(6)).unwrap()).unwrap();
//! let report = minimal_exclusion_zone(&e, SearchLimits::default()).unwrap();
//! assert_eq!(report.zone, NodeSet::from_iter([1, 2, 3, 4]));
//! ```

pub mod approx;
pub mod census;
pub mod enumerate;
pub mod families;
pub mod graph;
pub mod irv;
pub mod nodeset;
pub mod shares;
pub mod zone;

pub use graph::{Graph, Node};
pub use nodeset::NodeSet;
pub use shares::{Electorate, VoteShares};
