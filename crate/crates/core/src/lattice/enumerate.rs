//! Enumeration of finite lattices up to isomorphism.
//!
//! Posets are grown one element at a time along a linear extension (bottom
//! first, top last); each new middle element picks a down-closed set of
//! earlier middle elements as its strict down-set. Orders in which some pair
//! lacks a least upper bound are discarded, the rest are canonicalized.

use std::collections::BTreeSet;

use rayon::prelude::*;

use super::iso::element_key;
use super::{join_from_order, FiniteLattice, LatticeError};

pub const DEFAULT_ENUMERATION_LIMIT: usize = 7;

pub fn enumerate_lattices(max_n: usize) -> Result<Vec<FiniteLattice>, LatticeError> {
    enumerate_lattices_with_limit(max_n, DEFAULT_ENUMERATION_LIMIT)
}

/// One lattice per isomorphism class with `1..=max_n` elements, each in
/// canonical labeling, ordered by size and then by canonical join table.
pub fn enumerate_lattices_with_limit(max_n: usize, limit: usize) -> Result<Vec<FiniteLattice>, LatticeError> {
    if max_n > limit {
        return Err(LatticeError::LimitExceeded { requested: max_n, limit });
    }
    let mut out = Vec::new();
    for n in 1..=max_n {
        out.extend(lattices_of_size(n));
    }
    Ok(out)
}

fn lattices_of_size(n: usize) -> Vec<FiniteLattice> {
    if n <= 2 {
        let covers: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        return vec![FiniteLattice::from_covers(n, &covers).expect("chain")];
    }
    let middle = n - 2;
    let mut down_sets: Vec<Vec<u32>> = Vec::new();
    grow(middle, &mut Vec::new(), &mut down_sets);
    let classes: BTreeSet<Vec<usize>> = down_sets
        .par_iter()
        .filter_map(|downs| {
            let leq = order_matrix(n, downs);
            let join = join_from_order(n, &leq).ok()?;
            let lat = FiniteLattice::derive(n, join, 0);
            Some(canonical_form(&lat).0.join_table().to_vec())
        })
        .collect();
    classes
        .into_iter()
        .map(|join| FiniteLattice::derive(n, join, 0))
        .collect()
}

/// `downs[i]` is the bit mask of middle elements strictly below middle
/// element `i`.
fn grow(middle: usize, downs: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    let i = downs.len();
    if i == middle {
        out.push(downs.clone());
        return;
    }
    for mask in 0u32..(1 << i) {
        let closed = (0..i)
            .filter(|&j| mask >> j & 1 == 1)
            .all(|j| downs[j] & !mask == 0);
        if closed {
            downs.push(mask);
            grow(middle, downs, out);
            downs.pop();
        }
    }
}

fn order_matrix(n: usize, downs: &[u32]) -> Vec<bool> {
    let top = n - 1;
    let mut leq = vec![false; n * n];
    for x in 0..n {
        leq[x] = true; // bottom below everything
        leq[x * n + top] = true;
        leq[x * n + x] = true;
    }
    for (i, &mask) in downs.iter().enumerate() {
        for j in 0..i {
            if mask >> j & 1 == 1 {
                leq[(j + 1) * n + (i + 1)] = true;
            }
        }
    }
    leq
}

/// Canonical representative of the isomorphism class of `l`, with the
/// relabeling (old index → canonical index) that produces it.
///
/// Elements are sorted by an isomorphism-invariant key (height, down-set and
/// up-set sizes, cover degrees); the canonical form is the lexicographically
/// least join table among all labelings that respect that sorting.
pub fn canonical_form(l: &FiniteLattice) -> (FiniteLattice, Vec<usize>) {
    let n = l.len();
    let keys: Vec<_> = l.elements().map(|x| element_key(l, x)).collect();
    let mut sorted: Vec<usize> = l.elements().collect();
    sorted.sort_by_key(|&x| (keys[x], x));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &x in &sorted {
        match groups.last_mut() {
            Some(g) if keys[g[0]] == keys[x] => g.push(x),
            _ => groups.push(vec![x]),
        }
    }
    let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
    let mut perm = vec![0usize; n];
    assign_groups(l, &groups, 0, 0, &mut perm, &mut best);
    let (table, perm) = best.expect("at least one labeling");
    let mut lat = FiniteLattice::derive(n, table, perm[l.zero()]);
    if let Some(name) = l.name() {
        lat = lat.with_name(name);
    }
    (lat, perm)
}

fn assign_groups(
    l: &FiniteLattice,
    groups: &[Vec<usize>],
    gi: usize,
    offset: usize,
    perm: &mut Vec<usize>,
    best: &mut Option<(Vec<usize>, Vec<usize>)>,
) {
    if gi == groups.len() {
        let n = l.len();
        let mut table = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                table[perm[x] * n + perm[y]] = perm[l.join(x, y)];
            }
        }
        if best.as_ref().is_none_or(|(b, _)| table < *b) {
            *best = Some((table, perm.clone()));
        }
        return;
    }
    let group = &groups[gi];
    let mut order = group.clone();
    permute(&mut order, 0, &mut |ord| {
        for (k, &x) in ord.iter().enumerate() {
            perm[x] = offset + k;
        }
        assign_groups(l, groups, gi + 1, offset + group.len(), perm, best);
    });
}

fn permute(items: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}
