//! Uniform voter samples.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::GeoError;
use crate::region::Region;

/// Voters drawn per random stream. Results depend on the seed and this batch
/// size only, never on the number of worker threads.
pub const BATCH: usize = 1 << 14;

/// Random stream `stream` of `seed`. Streams with distinct indices are
/// independent.
pub(crate) fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `n` voters drawn uniformly from a region, stored row by row.
#[derive(Debug, Clone)]
pub struct VoterCloud {
    dim: usize,
    coords: Vec<f64>,
}

impl VoterCloud {
    /// Draws `n` voters (rejection sampling from the bounding box for
    /// non-rectangular regions). Batch `i` uses random stream `i` of `seed`.
    pub fn sample(region: &Region, n: usize, seed: u64) -> Result<Self, GeoError> {
        region.validate()?;
        if n == 0 {
            return Err(GeoError::ZeroSamples);
        }
        let dim = region.dim();
        let (lo, hi) = region.bounding_box();
        let batches = n.div_ceil(BATCH);
        let chunks: Vec<Vec<f64>> = (0..batches)
            .into_par_iter()
            .map(|b| {
                let count = BATCH.min(n - b * BATCH);
                let mut rng = rng_for(seed, b as u64);
                let mut out = Vec::with_capacity(count * dim);
                let mut p = vec![0.0; dim];
                let mut accepted = 0;
                while accepted < count {
                    for (k, c) in p.iter_mut().enumerate() {
                        *c = lo[k] + (hi[k] - lo[k]) * rng.gen::<f64>();
                    }
                    if matches!(region, Region::Flag) && !region.contains(&p) {
                        continue;
                    }
                    out.extend_from_slice(&p);
                    accepted += 1;
                }
                out
            })
            .collect();
        Ok(VoterCloud {
            dim,
            coords: chunks.concat(),
        })
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub(crate) fn par_chunks(&self, voters: usize) -> rayon::slice::ChunksExact<'_, f64> {
        self.coords.par_chunks_exact(voters * self.dim)
    }

    pub(crate) fn remainder(&self, voters: usize) -> &[f64] {
        let whole = self.coords.len() / (voters * self.dim) * voters * self.dim;
        &self.coords[whole..]
    }
}

/// Fraction of the bounding box covered by `inside`, estimated from `n`
/// uniform points of the box, with its standard error, both scaled to area.
pub fn box_area_estimate(
    region: &Region,
    n: usize,
    seed: u64,
    inside: impl Fn(&[f64]) -> bool + Sync,
) -> Result<(f64, f64), GeoError> {
    if n == 0 {
        return Err(GeoError::ZeroSamples);
    }
    let (lo, hi) = region.bounding_box();
    let box_area: f64 = lo.iter().zip(&hi).map(|(l, h)| h - l).product();
    let hits: usize = (0..n.div_ceil(BATCH))
        .into_par_iter()
        .map(|b| {
            let count = BATCH.min(n - b * BATCH);
            let mut rng = rng_for(seed, b as u64);
            let mut p = vec![0.0; lo.len()];
            (0..count)
                .filter(|_| {
                    for (k, c) in p.iter_mut().enumerate() {
                        *c = lo[k] + (hi[k] - lo[k]) * rng.gen::<f64>();
                    }
                    inside(&p)
                })
                .count()
        })
        .sum();
    let frac = hits as f64 / n as f64;
    let se = (frac * (1.0 - frac) / n as f64).sqrt();
    Ok((frac * box_area, se * box_area))
}
