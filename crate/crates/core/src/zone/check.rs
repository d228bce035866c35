use super::{validate_zone, Counterexample, ZoneCheckResult, ZoneError};
use crate::nodeset::NodeSet;
use crate::shares::{Electorate, MASK_LIMIT};

/// Default largest complement size accepted by [`is_exclusion_zone`]. Caps
/// above 63 are clamped.
pub const DEFAULT_CHECKER_CAP: usize = 25;

/// Decides whether `s` is an exclusion zone by trying every `u` in `s`
/// against every nonempty subset `X` of the complement: `s` fails iff some
/// `u` is weakly last among `{u} ∪ X`. Runs in `O(2^c)` tallies for a
/// complement of size `c`, so `c` above `cap` is refused.
///
/// Counterexamples are the first in the order: `u` ascending, then `X` by
/// its bitmask over the complement listed in ascending node order.
pub fn is_exclusion_zone(
    e: &Electorate,
    s: &NodeSet,
    cap: usize,
) -> Result<ZoneCheckResult, ZoneError> {
    validate_zone(e, s)?;
    let outside = e.all_nodes().difference(s);
    let c = outside.len();
    let cap = cap.min(63);
    if c > cap {
        return Err(ZoneError::CapExceeded { c, cap });
    }
    if c == 0 {
        return Ok(ZoneCheckResult::pass());
    }
    if e.n() <= MASK_LIMIT {
        return Ok(check_small(e, s, &outside));
    }
    check_general(e, s, &outside)
}

fn counterexample(e: &Electorate, u: usize, x: NodeSet) -> Counterexample {
    let mut config = x.clone();
    config.insert(u);
    Counterexample {
        eliminated: u,
        opponents: x,
        shares: e.shares(&config).expect("valid configuration"),
    }
}

fn check_small(e: &Electorate, s: &NodeSet, outside: &NodeSet) -> ZoneCheckResult {
    let comp = outside.to_u128().expect("small graph") as u64;
    let mut numer = [0u128; MASK_LIMIT];
    for u in s {
        let ubit = 1u64 << u;
        // Subsets of `comp` in increasing numeric order, which matches the
        // compressed-bitmask order because bit positions are monotone.
        let mut x = comp & comp.wrapping_neg();
        while x != 0 {
            e.mask_tally(x | ubit, &mut numer);
            let mine = numer[u];
            let mut rest = x;
            let mut eliminable = true;
            while rest != 0 {
                let c = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if numer[c] < mine {
                    eliminable = false;
                    break;
                }
            }
            if eliminable {
                return ZoneCheckResult::fail(counterexample(
                    e,
                    u,
                    NodeSet::from_u128(x as u128),
                ));
            }
            x = (x.wrapping_sub(comp)) & comp;
        }
    }
    ZoneCheckResult::pass()
}

fn check_general(
    e: &Electorate,
    s: &NodeSet,
    outside: &NodeSet,
) -> Result<ZoneCheckResult, ZoneError> {
    let others = outside.to_vec();
    let c = others.len();
    for u in s {
        for mask in 1u64..(1u64 << c) {
            let mut config: NodeSet = (0..c)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| others[i])
                .collect();
            config.insert(u);
            if e.shares(&config)?.is_weakly_minimal(u) {
                config.remove(u);
                return Ok(ZoneCheckResult::fail(counterexample(e, u, config)));
            }
        }
    }
    Ok(ZoneCheckResult::pass())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    #[test]
    fn small_and_general_scans_agree() {
        // A 7-node tree with branching so that verdicts vary across subsets.
        let g = Graph::new(7, &[(0, 1), (1, 2), (2, 3), (1, 4), (4, 5), (4, 6)]).unwrap();
        let e = Electorate::new(g).unwrap();
        for mask in 1u128..(1 << 7) {
            let s = NodeSet::from_u128(mask);
            let outside = e.all_nodes().difference(&s);
            let fast = if outside.is_empty() {
                ZoneCheckResult::pass()
            } else {
                check_small(&e, &s, &outside)
            };
            let slow = if outside.is_empty() {
                ZoneCheckResult::pass()
            } else {
                check_general(&e, &s, &outside).unwrap()
            };
            assert_eq!(fast, slow, "S = {s:?}");
        }
    }
}
