//! Semiring congruences and the simplicity decision.

use rayon::prelude::*;

use super::{FiniteSemiring, SemiringError};
use crate::bitset::BitSet;
use crate::partition::{close_under, Congruence, UnionFind};

fn translations(r: &FiniteSemiring) -> impl FnMut(usize, usize, &mut Vec<(usize, usize)>) + '_ {
    move |x, y, out| {
        for a in r.elements() {
            out.push((r.add(a, x), r.add(a, y)));
            out.push((r.mul(a, x), r.mul(a, y)));
            out.push((r.mul(x, a), r.mul(y, a)));
        }
    }
}

/// Least congruence identifying `x` and `y`.
pub fn principal_congruence(r: &FiniteSemiring, x: usize, y: usize) -> Congruence {
    let mut uf = close_under(UnionFind::new(r.len()), &[(x, y)], translations(r), false);
    Congruence::from_labels(&uf.blocks())
}

fn principal_is_total(r: &FiniteSemiring, x: usize, y: usize) -> bool {
    close_under(UnionFind::new(r.len()), &[(x, y)], translations(r), true).classes() == 1
}

/// A pair whose principal congruence is proper, or `None` if every
/// principal congruence is total.
pub fn proper_congruence_witness(r: &FiniteSemiring) -> Option<(usize, usize)> {
    let n = r.len();
    (0..n).into_par_iter().find_map_first(|x| {
        (x + 1..n).find(|&y| !principal_is_total(r, x, y)).map(|y| (x, y))
    })
}

/// A proper congruence exists iff some principal congruence is proper, so
/// checking every pair decides simplicity.
pub fn is_congruence_simple(r: &FiniteSemiring) -> bool {
    proper_congruence_witness(r).is_none()
}

/// Checks compatibility of `c` with every translation `a+·`, `a·`, `·a`.
pub fn is_congruence(r: &FiniteSemiring, c: &Congruence) -> Result<(), SemiringError> {
    if c.len() != r.len() {
        return Err(SemiringError::PartitionSize { found: c.len(), n: r.len() });
    }
    for class in c.classes() {
        let x = class[0];
        for &y in &class[1..] {
            for a in r.elements() {
                if !c.related(r.add(a, x), r.add(a, y))
                    || !c.related(r.mul(a, x), r.mul(a, y))
                    || !c.related(r.mul(x, a), r.mul(y, a))
                {
                    return Err(SemiringError::NotCompatible { x, y, a });
                }
            }
        }
    }
    Ok(())
}

/// Semiring on the blocks of `c`; block `i` becomes element `i`.
pub fn quotient_semiring(r: &FiniteSemiring, c: &Congruence) -> Result<FiniteSemiring, SemiringError> {
    is_congruence(r, c)?;
    let reps = c.representatives();
    let k = reps.len();
    let mut add = Vec::with_capacity(k * k);
    let mut mul = Vec::with_capacity(k * k);
    for &x in &reps {
        for &y in &reps {
            add.push(c.block_of(r.add(x, y)));
            mul.push(c.block_of(r.mul(x, y)));
        }
    }
    Ok(FiniteSemiring::from_flat_unchecked(k, add, mul, c.block_of(r.zero())))
}

/// Row `x` holds every `y` with `∃ m, n ≥ 0: m·x ∈ R + y and n·y ∈ R + x`,
/// where `m·x` is the `m`-fold sum. Multipliers up to `|R|` suffice since the
/// sequence of multiples is eventually periodic within `|R|` steps.
pub fn monico_relation(r: &FiniteSemiring) -> Vec<BitSet> {
    let n = r.len();
    let multiples: Vec<BitSet> = r
        .elements()
        .map(|x| {
            let mut set = BitSet::new(n);
            let mut s = r.zero();
            set.insert(s);
            for _ in 0..n {
                s = r.add(s, x);
                set.insert(s);
            }
            set
        })
        .collect();
    let translates: Vec<BitSet> = r
        .elements()
        .map(|y| BitSet::from_indices(n, r.elements().map(|a| r.add(a, y))))
        .collect();
    let meets = |a: &BitSet, b: &BitSet| a.iter().any(|i| b.contains(i));
    r.elements()
        .map(|x| {
            BitSet::from_indices(
                n,
                r.elements()
                    .filter(|&y| meets(&multiples[x], &translates[y]) && meets(&multiples[y], &translates[x])),
            )
        })
        .collect()
}

/// [`monico_relation`] as a partition: elements with equal rows share a
/// block. This agrees with the relation whenever it is an equivalence.
pub fn monico_congruence(r: &FiniteSemiring) -> Congruence {
    Congruence::from_labels(&monico_relation(r))
}
