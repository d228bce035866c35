use std::fmt;

use serde::Serialize;

use crate::error::GeoError;

/// A position in the region, one coordinate per dimension.
pub type Point = Vec<f64>;

/// Distances closer than this (relative to their size) count as equal.
pub(crate) const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    /// `[0, w] × [0, h]`.
    Rectangle { w: f64, h: f64 },
    /// `[0, w_1] × … × [0, w_d]`.
    Hyperrectangle { sides: Vec<f64> },
    /// The 8 × 1/10 strip at the origin with a right isosceles triangle of
    /// leg 2 on its top-left and one of leg 1 below its bottom-right corner;
    /// the polygon (0,0), (0,2.1), (2,0.1), (8,0.1), (8,−1), (7,0).
    Flag,
}

/// Lower-left corner of the flag's bounding box.
pub const FLAG_BOX_LO: [f64; 2] = [0.0, -1.0];
/// Upper-right corner of the flag's bounding box.
pub const FLAG_BOX_HI: [f64; 2] = [8.0, 2.1];
/// Area of the flag.
pub const FLAG_AREA: f64 = 3.3;
/// Area of the flag's large triangle.
pub const FLAG_TRIANGLE_AREA: f64 = 2.0;

impl Region {
    pub fn rectangle(w: f64, h: f64) -> Result<Self, GeoError> {
        let r = Region::Rectangle { w, h };
        r.validate()?;
        Ok(r)
    }

    pub fn hyperrectangle(sides: Vec<f64>) -> Result<Self, GeoError> {
        let r = Region::Hyperrectangle { sides };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<(), GeoError> {
        let sides = match self {
            Region::Rectangle { w, h } => vec![*w, *h],
            Region::Hyperrectangle { sides } => sides.clone(),
            Region::Flag => return Ok(()),
        };
        if sides.is_empty() {
            return Err(GeoError::InvalidRegion("dimension must be at least 1".into()));
        }
        if let Some(s) = sides.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
            return Err(GeoError::InvalidRegion(format!(
                "side lengths must be positive and finite (got {s})"
            )));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        match self {
            Region::Rectangle { .. } | Region::Flag => 2,
            Region::Hyperrectangle { sides } => sides.len(),
        }
    }

    /// Axis-aligned bounding box `(lo, hi)`.
    pub fn bounding_box(&self) -> (Point, Point) {
        match self {
            Region::Rectangle { w, h } => (vec![0.0, 0.0], vec![*w, *h]),
            Region::Hyperrectangle { sides } => (vec![0.0; sides.len()], sides.clone()),
            Region::Flag => (FLAG_BOX_LO.to_vec(), FLAG_BOX_HI.to_vec()),
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            Region::Rectangle { w, h } => w * h,
            Region::Hyperrectangle { sides } => sides.iter().product(),
            Region::Flag => FLAG_AREA,
        }
    }

    /// Whether `p` lies in the closed region.
    pub fn contains(&self, p: &[f64]) -> bool {
        if p.len() != self.dim() || p.iter().any(|c| !c.is_finite()) {
            return false;
        }
        match self {
            Region::Flag => flag_contains(p[0], p[1]),
            _ => {
                let (lo, hi) = self.bounding_box();
                p.iter().zip(lo.iter().zip(&hi)).all(|(c, (l, h))| l <= c && c <= h)
            }
        }
    }

    /// The centre of a (hyper)rectangle.
    pub fn center(&self) -> Option<Point> {
        match self {
            Region::Flag => None,
            _ => {
                let (_, hi) = self.bounding_box();
                Some(hi.iter().map(|h| h / 2.0).collect())
            }
        }
    }

    /// The corners of a (hyper)rectangle.
    pub fn corners(&self) -> Vec<Point> {
        if matches!(self, Region::Flag) {
            return Vec::new();
        }
        let (_, hi) = self.bounding_box();
        (0..1usize << hi.len())
            .map(|bits| {
                hi.iter()
                    .enumerate()
                    .map(|(i, h)| if bits >> i & 1 == 1 { *h } else { 0.0 })
                    .collect()
            })
            .collect()
    }
}

fn flag_contains(x: f64, y: f64) -> bool {
    let strip = (0.0..=8.0).contains(&x) && (0.0..=0.1).contains(&y);
    let upper = x >= 0.0 && y >= 0.1 && x + y <= 2.1;
    let lower = x <= 8.0 && y <= 0.0 && x + y >= 7.0;
    strip || upper || lower
}

/// Whether a flag point lies in its large top-left triangle.
pub fn in_flag_triangle(p: &[f64]) -> bool {
    p[0] >= 0.0 && p[1] >= 0.1 && p[0] + p[1] <= 2.1
}

/// Whether a flag point lies in the candidate exclusion zone `x − y ≤ 6`.
pub fn in_flag_zone(p: &[f64]) -> bool {
    p[0] - p[1] <= 6.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    L1,
    L2,
}

impl Metric {
    pub fn from_p(p: u32) -> Result<Self, GeoError> {
        match p {
            1 => Ok(Metric::L1),
            2 => Ok(Metric::L2),
            _ => Err(GeoError::InvalidRegion(format!("metric p must be 1 or 2 (got {p})"))),
        }
    }

    pub fn p(self) -> u32 {
        match self {
            Metric::L1 => 1,
            Metric::L2 => 2,
        }
    }

    /// A monotone transform of the distance: the L1 distance, or the squared
    /// L2 distance. Comparisons are all the tally needs.
    #[inline]
    pub(crate) fn rank_distance(self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            Metric::L1 => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
            Metric::L2 => a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum(),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "l{}", self.p())
    }
}

/// A region with uniformly distributed voters who prefer nearer candidates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scene {
    pub region: Region,
    pub metric: Metric,
}

impl Scene {
    pub fn new(region: Region, metric: Metric) -> Result<Self, GeoError> {
        region.validate()?;
        Ok(Scene { region, metric })
    }

    /// Checks candidate count, dimensions, membership and distinctness.
    pub fn check_candidates(&self, candidates: &[Point]) -> Result<(), GeoError> {
        if candidates.is_empty() {
            return Err(GeoError::NoCandidates);
        }
        if candidates.len() > crate::ballots::MAX_CANDIDATES {
            return Err(GeoError::TooManyCandidates {
                max: crate::ballots::MAX_CANDIDATES,
                got: candidates.len(),
            });
        }
        let d = self.region.dim();
        for (index, p) in candidates.iter().enumerate() {
            if p.len() != d {
                return Err(GeoError::Dimension {
                    index,
                    expected: d,
                    got: p.len(),
                });
            }
            if !self.region.contains(p) {
                return Err(GeoError::OutsideRegion {
                    index,
                    point: p.clone(),
                });
            }
        }
        for (i, a) in candidates.iter().enumerate() {
            if let Some(j) = candidates[i + 1..].iter().position(|b| a == b) {
                return Err(GeoError::DuplicateCandidates {
                    first: i,
                    second: i + 1 + j,
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flag_membership() {
        let f = Region::Flag;
        for p in [[0.0, 0.0], [1.0, 1.0], [0.0, 2.1], [5.0, 0.05], [7.9, -0.8], [8.0, 0.1]] {
            assert!(f.contains(&p), "{p:?}");
        }
        for p in [[1.5, 1.0], [3.0, 0.2], [7.0, -0.5], [8.1, 0.0], [-0.1, 0.5]] {
            assert!(!f.contains(&p), "{p:?}");
        }
        assert!(in_flag_zone(&[6.05, 0.05]));
        assert!(!in_flag_zone(&[6.2, 0.1]));
    }

    #[test]
    fn corners_and_centre() {
        let r = Region::rectangle(2.0, 1.0).unwrap();
        assert_eq!(r.center(), Some(vec![1.0, 0.5]));
        assert_eq!(r.corners().len(), 4);
        assert!(r.corners().contains(&vec![2.0, 1.0]));
        assert!(Region::rectangle(0.0, 1.0).is_err());
        assert!(Region::hyperrectangle(vec![]).is_err());
    }

    #[test]
    fn candidate_checks() {
        let s = Scene::new(Region::rectangle(1.0, 1.0).unwrap(), Metric::L2).unwrap();
        assert!(s.check_candidates(&[vec![0.5, 0.5]]).is_ok());
        assert_eq!(s.check_candidates(&[]), Err(GeoError::NoCandidates));
        assert!(matches!(
            s.check_candidates(&[vec![0.5, 0.5], vec![0.5, 0.5]]),
            Err(GeoError::DuplicateCandidates { first: 0, second: 1 })
        ));
        assert!(matches!(
            s.check_candidates(&[vec![1.5, 0.5]]),
            Err(GeoError::OutsideRegion { index: 0, .. })
        ));
        assert!(matches!(
            s.check_candidates(&[vec![0.5]]),
            Err(GeoError::Dimension { .. })
        ));
    }
}
