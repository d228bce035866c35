//! Exhaustive generation of small connected graphs and free trees, one
//! representative per isomorphism class.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::{Graph, Node};

/// Largest order supported by [`enumerate_connected_graphs`].
pub const MAX_GRAPH_ORDER: usize = 8;
/// Largest order supported by [`enumerate_trees`].
pub const MAX_TREE_ORDER: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("built-in {what} enumeration supports 1 <= n <= {max} (got {n}); supply a graph6 file for other sizes")]
    OutOfRange {
        what: &'static str,
        n: usize,
        max: usize,
    },
}

/// Adjacency rows as bitmasks, for graphs with at most 16 nodes.
type Rows = Vec<u16>;

fn rows_of(g: &Graph) -> Rows {
    (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(0u16, |m, &w| m | 1 << w))
        .collect()
}

/// Upper-triangle adjacency bits in graph6 order (column by column), first
/// bit most significant, under the vertex order `order`.
fn code_under(rows: &[u16], order: &[usize]) -> u128 {
    let mut code = 0u128;
    for j in 1..order.len() {
        let row = rows[order[j]];
        for &i in &order[..j] {
            code = code << 1 | u128::from(row >> i & 1);
        }
    }
    code
}

/// Colour refinement started from degrees. Colours are ranks of sorted
/// signatures, so they are invariant under isomorphism.
fn refined_colours(rows: &[u16]) -> Vec<usize> {
    let n = rows.len();
    let mut colour: Vec<usize> = rows.iter().map(|r| r.count_ones() as usize).collect();
    let mut classes = colour.iter().collect::<BTreeSet<_>>().len();
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut around: Vec<usize> = (0..n)
                    .filter(|&w| rows[v] >> w & 1 == 1)
                    .map(|w| colour[w])
                    .collect();
                around.sort_unstable();
                (colour[v], around)
            })
            .collect();
        let ranked: Vec<&(usize, Vec<usize>)> = sigs.iter().collect::<BTreeSet<_>>().into_iter().collect();
        colour = sigs
            .iter()
            .map(|s| ranked.binary_search(&s).expect("present"))
            .collect();
        if ranked.len() == classes {
            return colour;
        }
        classes = ranked.len();
    }
}

/// Canonical code of a graph on at most 16 nodes: the smallest adjacency
/// bit string over all relabelings that list the colour-refinement classes
/// in colour order. Isomorphic graphs, and only they, share a code.
pub fn canonical_code(g: &Graph) -> u128 {
    canonical_code_rows(&rows_of(g))
}

fn canonical_code_rows(rows: &[u16]) -> u128 {
    let n = rows.len();
    assert!(n <= 16, "canonical codes support at most 16 nodes");
    let colour = refined_colours(rows);
    let mut cells: Vec<Vec<usize>> = vec![Vec::new(); colour.iter().max().map_or(0, |m| m + 1)];
    for v in 0..n {
        cells[colour[v]].push(v);
    }
    let mut order = Vec::with_capacity(n);
    let mut best = u128::MAX;
    permute_cells(rows, &cells, 0, &mut order, &mut best);
    best
}

fn permute_cells(rows: &[u16], cells: &[Vec<usize>], i: usize, order: &mut Vec<usize>, best: &mut u128) {
    if i == cells.len() {
        *best = (*best).min(code_under(rows, order));
        return;
    }
    let mut cell = cells[i].clone();
    heap_permutations(&mut cell, &mut |p| {
        let len = order.len();
        order.extend_from_slice(p);
        permute_cells(rows, cells, i + 1, order, best);
        order.truncate(len);
    });
}

/// Visits every permutation of `items` (Heap's algorithm).
fn heap_permutations(items: &mut [usize], visit: &mut dyn FnMut(&[usize])) {
    let n = items.len();
    let mut c = vec![0; n];
    visit(items);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            visit(items);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

fn graph_from_code(n: usize, code: u128) -> Graph {
    let total = n * n.saturating_sub(1) / 2;
    let mut edges = Vec::new();
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            if code >> (total - 1 - k) & 1 == 1 {
                edges.push((u, v));
            }
            k += 1;
        }
    }
    Graph::new(n, &edges).expect("enumerated graphs are connected")
}

fn rows_from_code(n: usize, code: u128) -> Rows {
    rows_of(&graph_from_code(n, code))
}

/// One representative of every isomorphism class of connected graphs on `n`
/// nodes, in increasing canonical-code order.
///
/// Graphs are grown one vertex at a time: every connected graph has a vertex
/// whose removal leaves it connected, so attaching a new vertex to every
/// nonempty neighbour set of every class on `n - 1` nodes reaches all
/// classes; duplicates are removed by canonical code.
pub fn enumerate_connected_graphs(n: usize) -> Result<impl Iterator<Item = Graph>, EnumerationError> {
    if !(1..=MAX_GRAPH_ORDER).contains(&n) {
        return Err(EnumerationError::OutOfRange {
            what: "connected graph",
            n,
            max: MAX_GRAPH_ORDER,
        });
    }
    let mut level: BTreeSet<u128> = BTreeSet::from([0]);
    for k in 2..=n {
        let mut next = BTreeSet::new();
        for &code in &level {
            let rows = rows_from_code(k - 1, code);
            for nbrs in 1u16..(1 << (k - 1)) {
                let mut grown = rows.clone();
                for (v, r) in grown.iter_mut().enumerate() {
                    *r |= (nbrs >> v & 1) << (k - 1);
                }
                grown.push(nbrs);
                next.insert(canonical_code_rows(&grown));
            }
        }
        level = next;
    }
    Ok(level.into_iter().map(move |code| graph_from_code(n, code)))
}

/// One representative of every free tree on `n` nodes.
///
/// Trees are generated as level sequences of trees rooted at a centre, in
/// the constant-amortized-time order of Wright, Richmond, Odlyzko and McKay
/// (successors of Beyer and Hedetniemi's rooted-tree order, skipping
/// sequences that are not the canonical centred rooting of a free tree).
pub fn enumerate_trees(n: usize) -> Result<impl Iterator<Item = Graph>, EnumerationError> {
    if !(1..=MAX_TREE_ORDER).contains(&n) {
        return Err(EnumerationError::OutOfRange {
            what: "tree",
            n,
            max: MAX_TREE_ORDER,
        });
    }
    let mut out = Vec::new();
    if n == 1 {
        out.push(Graph::new(1, &[]).expect("single node"));
        return Ok(out.into_iter());
    }
    // The path, rooted at its centre.
    let mut layout: Option<Vec<usize>> = Some((0..=n / 2).chain(1..n.div_ceil(2)).collect());
    while let Some(l) = layout {
        layout = next_free_tree(l);
        if let Some(l) = &layout {
            out.push(tree_from_levels(l));
            layout = next_rooted_tree(l, None);
        }
    }
    Ok(out.into_iter())
}

fn next_rooted_tree(pred: &[usize], p: Option<usize>) -> Option<Vec<usize>> {
    let p = match p {
        Some(p) => p,
        None => {
            let mut p = pred.len() - 1;
            while pred[p] == 1 {
                p -= 1;
            }
            p
        }
    };
    if p == 0 {
        return None;
    }
    let mut q = p - 1;
    while pred[q] != pred[p] - 1 {
        q -= 1;
    }
    let mut out = pred.to_vec();
    for i in p..out.len() {
        out[i] = out[i - p + q];
    }
    Some(out)
}

/// Splits a level sequence into the first subtree of the root (levels
/// shifted up by one) and the rest of the tree.
fn split_tree(layout: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let m = layout
        .iter()
        .enumerate()
        .filter(|(_, &d)| d == 1)
        .nth(1)
        .map_or(layout.len(), |(i, _)| i);
    let left = layout[1..m].iter().map(|d| d - 1).collect();
    let rest = std::iter::once(0).chain(layout[m..].iter().copied()).collect();
    (left, rest)
}

fn next_free_tree(candidate: Vec<usize>) -> Option<Vec<usize>> {
    let (left, rest) = split_tree(&candidate);
    let lh = left.iter().max().copied().unwrap_or(0);
    let rh = rest.iter().max().copied().unwrap_or(0);
    let mut valid = rh >= lh;
    if valid && rh == lh
        && (left.len() > rest.len() || (left.len() == rest.len() && left > rest)) {
            valid = false;
        }
    if valid {
        return Some(candidate);
    }
    let p = left.len();
    let mut next = next_rooted_tree(&candidate, Some(p))?;
    if candidate[p] > 2 {
        let (new_left, _) = split_tree(&next);
        let h = new_left.iter().max().copied().unwrap_or(0);
        let len = next.len();
        for (k, slot) in next[len - (h + 1)..].iter_mut().enumerate() {
            *slot = k + 1;
        }
    }
    Some(next)
}

fn tree_from_levels(levels: &[usize]) -> Graph {
    let mut stack: Vec<Node> = Vec::new();
    let mut edges = Vec::new();
    for (i, &d) in levels.iter().enumerate() {
        while let Some(&j) = stack.last() {
            if levels[j] >= d {
                stack.pop();
            } else {
                edges.push((j, i));
                break;
            }
        }
        stack.push(i);
    }
    Graph::new(levels.len(), &edges).expect("level sequences describe trees")
}
