//! Brute-force reference implementations used as oracles. They share no code
//! with the library: distances come from Floyd-Warshall on the edge list,
//! shares are integers over lcm(1..=n), and every tiebreak is branched.

#![allow(dead_code)]

use std::collections::HashMap;

use irvzone::{Graph, NodeSet};

pub struct Oracle {
    pub n: usize,
    dist: Vec<Vec<u32>>,
    unit: u64,
    winners: HashMap<u32, u32>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Oracle {
    pub fn new(g: &Graph) -> Self {
        let n = g.n();
        assert!(n <= 12, "oracle is for small graphs");
        let inf = u32::MAX / 4;
        let mut dist = vec![vec![inf; n]; n];
        for (v, row) in dist.iter_mut().enumerate() {
            row[v] = 0;
        }
        for (a, b) in g.edges() {
            dist[a][b] = 1;
            dist[b][a] = 1;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = dist[i][k] + dist[k][j];
                    if via < dist[i][j] {
                        dist[i][j] = via;
                    }
                }
            }
        }
        let unit = (1..=n as u64).fold(1, |l, k| l / gcd(l, k) * k);
        Oracle {
            n,
            dist,
            unit,
            winners: HashMap::new(),
        }
    }

    pub fn dist(&self, a: usize, b: usize) -> u32 {
        self.dist[a][b]
    }

    /// Share numerators over `unit()`, indexed by node (0 for non-candidates).
    pub fn shares(&self, config: u32) -> Vec<u64> {
        let mut out = vec![0; self.n];
        for v in 0..self.n {
            let best = (0..self.n)
                .filter(|&c| config >> c & 1 == 1)
                .map(|c| self.dist[v][c])
                .min()
                .expect("nonempty configuration");
            let closest: Vec<usize> = (0..self.n)
                .filter(|&c| config >> c & 1 == 1 && self.dist[v][c] == best)
                .collect();
            for &c in &closest {
                out[c] += self.unit / closest.len() as u64;
            }
        }
        out
    }

    pub fn unit(&self) -> u64 {
        self.unit
    }

    /// Candidates tied for the lowest share.
    pub fn last_place(&self, config: u32) -> u32 {
        let s = self.shares(config);
        let low = (0..self.n)
            .filter(|&c| config >> c & 1 == 1)
            .map(|c| s[c])
            .min()
            .unwrap();
        (0..self.n)
            .filter(|&c| config >> c & 1 == 1 && s[c] == low)
            .fold(0, |m, c| m | 1 << c)
    }

    /// Every winner reachable by some sequence of tiebreaks.
    pub fn possible_winners(&mut self, config: u32) -> u32 {
        if config.count_ones() == 1 {
            return config;
        }
        if let Some(&w) = self.winners.get(&config) {
            return w;
        }
        let last = self.last_place(config);
        let mut out = 0;
        for c in 0..self.n {
            if last >> c & 1 == 1 {
                out |= self.possible_winners(config & !(1 << c));
            }
        }
        self.winners.insert(config, out);
        out
    }

    /// Every configuration meeting `s` elects only inside `s`.
    pub fn is_zone(&mut self, s: u32) -> bool {
        (1..1u32 << self.n).all(|c| c & s == 0 || self.possible_winners(c) & !s == 0)
    }

    pub fn all_zones(&mut self) -> Vec<u32> {
        (1..1u32 << self.n).filter(|&s| self.is_zone(s)).collect()
    }

    pub fn minimal_zone(&mut self) -> u32 {
        self.all_zones()
            .into_iter()
            .min_by_key(|s| s.count_ones())
            .expect("the full set is a zone")
    }
}

pub fn mask_of(s: &NodeSet) -> u32 {
    s.iter().fold(0, |m, v| m | 1 << v)
}

pub fn set_of(mask: u32) -> NodeSet {
    (0..32).filter(|&v| mask >> v & 1 == 1).collect()
}
