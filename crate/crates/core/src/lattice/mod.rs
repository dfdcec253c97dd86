//! Finite idempotent commutative monoids, viewed as lattices.
//!
//! A [`FiniteLattice`] is given by its join table over the indices `0..n`.
//! The order `x ≤ y ⟺ x ∨ y = y`, the meet table and the greatest element
//! are derived once at validation time.

mod enumerate;
pub mod fixtures;
mod iso;

use thiserror::Error;

pub use enumerate::{canonical_form, enumerate_lattices, enumerate_lattices_with_limit, DEFAULT_ENUMERATION_LIMIT};
pub use iso::{lattice_iso, LatticeIso};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("join table must be {n}x{n}, found a row of length {found}")]
    Shape { n: usize, found: usize },
    #[error("lattice must have at least one element")]
    Empty,
    #[error("entry {value} at ({x}, {y}) is out of range for {n} elements")]
    OutOfRange { x: usize, y: usize, value: usize, n: usize },
    #[error("zero index {zero} is out of range for {n} elements")]
    ZeroOutOfRange { zero: usize, n: usize },
    #[error("join is not commutative: {x} v {y} != {y} v {x}")]
    NotCommutative { x: usize, y: usize },
    #[error("join is not associative: ({x} v {y}) v {z} != {x} v ({y} v {z})")]
    NotAssociative { x: usize, y: usize, z: usize },
    #[error("join is not idempotent: {x} v {x} = {result}")]
    NotIdempotent { x: usize, result: usize },
    #[error("{zero} is not neutral: {zero} v {x} = {result}")]
    BadZero { zero: usize, x: usize, result: usize },
    #[error("lattice is not distributive")]
    NotDistributive,
    #[error("requested size {requested} exceeds the configured limit {limit}")]
    LimitExceeded { requested: usize, limit: usize },
    #[error("cover relation {lower} < {upper} is cyclic or out of range")]
    BadCovers { lower: usize, upper: usize },
    #[error("poset has no least upper bound for {x} and {y}")]
    NoJoin { x: usize, y: usize },
}

/// A finite join-semilattice with least element, stored as a join table.
#[derive(Clone, Debug)]
pub struct FiniteLattice {
    n: usize,
    join: Vec<usize>,
    meet: Vec<usize>,
    zero: usize,
    top: usize,
    name: Option<String>,
}

impl PartialEq for FiniteLattice {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.zero == other.zero && self.join == other.join
    }
}

impl Eq for FiniteLattice {}

impl std::hash::Hash for FiniteLattice {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.zero.hash(state);
        self.join.hash(state);
    }
}

/// Checks the idempotent commutative monoid axioms exhaustively and derives
/// order, meet and top.
pub fn validate_lattice(join_table: &[Vec<usize>], zero: usize) -> Result<FiniteLattice, LatticeError> {
    let n = join_table.len();
    if n == 0 {
        return Err(LatticeError::Empty);
    }
    let mut flat = Vec::with_capacity(n * n);
    for (x, row) in join_table.iter().enumerate() {
        if row.len() != n {
            return Err(LatticeError::Shape { n, found: row.len() });
        }
        for (y, &value) in row.iter().enumerate() {
            if value >= n {
                return Err(LatticeError::OutOfRange { x, y, value, n });
            }
        }
        flat.extend_from_slice(row);
    }
    FiniteLattice::from_flat(n, flat, zero)
}

impl FiniteLattice {
    /// Validates a row-major `n*n` join table.
    pub fn from_flat(n: usize, join: Vec<usize>, zero: usize) -> Result<Self, LatticeError> {
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        if join.len() != n * n {
            return Err(LatticeError::Shape { n, found: join.len() / n.max(1) });
        }
        if let Some(pos) = join.iter().position(|&v| v >= n) {
            return Err(LatticeError::OutOfRange { x: pos / n, y: pos % n, value: join[pos], n });
        }
        if zero >= n {
            return Err(LatticeError::ZeroOutOfRange { zero, n });
        }
        let j = |x: usize, y: usize| join[x * n + y];
        for x in 0..n {
            if j(x, x) != x {
                return Err(LatticeError::NotIdempotent { x, result: j(x, x) });
            }
        }
        for x in 0..n {
            for y in x + 1..n {
                if j(x, y) != j(y, x) {
                    return Err(LatticeError::NotCommutative { x, y });
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                let xy = j(x, y);
                for z in 0..n {
                    if j(xy, z) != j(x, j(y, z)) {
                        return Err(LatticeError::NotAssociative { x, y, z });
                    }
                }
            }
        }
        for x in 0..n {
            if j(zero, x) != x {
                return Err(LatticeError::BadZero { zero, x, result: j(zero, x) });
            }
        }
        Ok(Self::derive(n, join, zero))
    }

    /// Builds the derived tables for a join table already known to be valid.
    pub(crate) fn derive(n: usize, join: Vec<usize>, zero: usize) -> Self {
        let top = (0..n).fold(zero, |acc, x| join[acc * n + x]);
        let mut meet = vec![zero; n * n];
        for x in 0..n {
            for y in x..n {
                let m = (0..n)
                    .filter(|&z| join[z * n + x] == x && join[z * n + y] == y)
                    .fold(zero, |acc, z| join[acc * n + z]);
                meet[x * n + y] = m;
                meet[y * n + x] = m;
            }
        }
        FiniteLattice { n, join, meet, zero, top, name: None }
    }

    /// Builds a lattice from the cover pairs `(lower, upper)` of a Hasse
    /// diagram on `0..n`. Fails if the order is not a lattice.
    pub fn from_covers(n: usize, covers: &[(usize, usize)]) -> Result<Self, LatticeError> {
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        let mut leq = vec![false; n * n];
        for x in 0..n {
            leq[x * n + x] = true;
        }
        for &(lower, upper) in covers {
            if lower >= n || upper >= n || lower == upper {
                return Err(LatticeError::BadCovers { lower, upper });
            }
            leq[lower * n + upper] = true;
        }
        // Warshall
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for &(lower, upper) in covers {
            if leq[upper * n + lower] {
                return Err(LatticeError::BadCovers { lower, upper });
            }
        }
        let join = join_from_order(n, &leq)?;
        let zero = (0..n)
            .find(|&z| (0..n).all(|x| leq[z * n + x]))
            .ok_or(LatticeError::NoJoin { x: 0, y: 0 })?;
        FiniteLattice::from_flat(n, join, zero)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn top(&self) -> usize {
        self.top
    }

    #[inline]
    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.n + y]
    }

    /// Join of all common lower bounds.
    #[inline]
    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.n + y]
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.join(x, y) == y
    }

    pub fn join_table(&self) -> &[usize] {
        &self.join
    }

    pub fn meet_table(&self) -> &[usize] {
        &self.meet
    }

    pub fn join_rows(&self) -> Vec<Vec<usize>> {
        self.join.chunks(self.n).map(<[usize]>::to_vec).collect()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    /// Join over an iterator; the empty join is zero.
    pub fn join_all(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().fold(self.zero, |acc, x| self.join(acc, x))
    }

    /// Meet over an iterator; the empty meet is top.
    pub fn meet_all(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// The order-dual lattice: same element indices, join and meet
    /// exchanged, zero and top exchanged.
    pub fn dual(&self) -> FiniteLattice {
        FiniteLattice {
            n: self.n,
            join: self.meet.clone(),
            meet: self.join.clone(),
            zero: self.top,
            top: self.zero,
            name: self.name.as_ref().map(|s| format!("dual({s})")),
        }
    }

    /// Relabels so that zero becomes index 0 by swapping it with index 0.
    /// The text format requires this labeling.
    pub fn with_zero_first(&self) -> FiniteLattice {
        if self.zero == 0 {
            return self.clone();
        }
        let mut perm: Vec<usize> = (0..self.n).collect();
        perm.swap(0, self.zero);
        self.relabel(&perm)
    }

    /// Image of this lattice under the bijection `perm` (old index → new).
    pub fn relabel(&self, perm: &[usize]) -> FiniteLattice {
        let n = self.n;
        let mut join = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                join[perm[x] * n + perm[y]] = perm[self.join(x, y)];
            }
        }
        let mut lat = FiniteLattice::derive(n, join, perm[self.zero]);
        lat.name = self.name.clone();
        lat
    }

    /// Number of elements below or equal to `x`.
    pub fn down_set_size(&self, x: usize) -> usize {
        self.elements().filter(|&z| self.leq(z, x)).count()
    }

    pub fn up_set_size(&self, x: usize) -> usize {
        self.elements().filter(|&z| self.leq(x, z)).count()
    }

    /// Length of the longest chain from zero to `x`.
    pub fn height(&self, x: usize) -> usize {
        let mut order: Vec<usize> = self.elements().collect();
        order.sort_by_key(|&z| self.down_set_size(z));
        let mut h = vec![0usize; self.n];
        for &z in &order {
            h[z] = order
                .iter()
                .filter(|&&w| w != z && self.leq(w, z))
                .map(|&w| h[w] + 1)
                .max()
                .unwrap_or(0);
        }
        h[x]
    }

    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in self.elements() {
            for y in self.elements() {
                if x != y
                    && self.leq(x, y)
                    && !self
                        .elements()
                        .any(|z| z != x && z != y && self.leq(x, z) && self.leq(z, y))
                {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// All monoid homomorphisms into `({0,1}, max)` under pointwise max,
    /// together with the bijection `a ↦ e_a` where `e_a(x) = 0 ⟺ x ≤ a`.
    ///
    /// The homs are enumerated independently of the `e_a` formula: every
    /// 0/1 vector with `φ(zero) = 0` preserving joins is kept. Elements of
    /// the returned lattice are the homs in lexicographic order of their
    /// value vectors.
    pub fn hom_to_l2(&self) -> HomToL2 {
        let n = self.n;
        let mut homs: Vec<Vec<u8>> = Vec::new();
        let mut current = vec![0u8; n];
        self.extend_hom(0, &mut current, &mut homs);
        homs.sort();
        let index: std::collections::HashMap<Vec<u8>, usize> =
            homs.iter().cloned().enumerate().map(|(i, h)| (h, i)).collect();
        let k = homs.len();
        let mut join = vec![0; k * k];
        for i in 0..k {
            for j in 0..k {
                let max: Vec<u8> = homs[i].iter().zip(&homs[j]).map(|(a, b)| *a.max(b)).collect();
                join[i * k + j] = index[&max];
            }
        }
        let zero = index[&vec![0u8; n]];
        let lattice = FiniteLattice::derive(k, join, zero);
        let e: Vec<usize> = self
            .elements()
            .map(|a| {
                let v: Vec<u8> = self.elements().map(|x| u8::from(!self.leq(x, a))).collect();
                index[&v]
            })
            .collect();
        HomToL2 { lattice, homs, e }
    }

    fn extend_hom(&self, x: usize, current: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if x == self.n {
            let hom = self
                .elements()
                .all(|y| self.elements().all(|w| current[self.join(y, w)] == current[y].max(current[w])));
            if hom {
                out.push(current.clone());
            }
            return;
        }
        for v in [0u8, 1] {
            if x == self.zero && v == 1 {
                continue;
            }
            current[x] = v;
            // pairs whose join is already assigned
            let consistent = (0..=x).all(|y| {
                let j = self.join(x, y);
                j > x || current[j] == current[x].max(current[y])
            }) && (0..x).all(|y| (0..x).all(|w| self.join(y, w) != x || current[x] == current[y].max(current[w])));
            if consistent {
                self.extend_hom(x + 1, current, out);
            }
        }
    }

    pub fn is_distributive(&self) -> bool {
        self.elements().all(|x| {
            self.elements().all(|y| {
                self.elements().all(|z| {
                    self.meet(x, self.join(y, z)) == self.join(self.meet(x, y), self.meet(x, z))
                })
            })
        })
    }

    /// `b_a`: the meet of all `x` with `x ≰ a` (top if there is none).
    pub fn b_of(&self, a: usize) -> usize {
        self.meet_all(self.elements().filter(|&x| !self.leq(x, a)))
    }

    /// Evaluates `z = ⋁_{a: z≰a} b_a` for every `z`.
    pub fn condition_d(&self) -> bool {
        let b: Vec<usize> = self.elements().map(|a| self.b_of(a)).collect();
        self.elements()
            .all(|z| self.join_all(self.elements().filter(|&a| !self.leq(z, a)).map(|a| b[a])) == z)
    }

    /// The map `z ↦ {b_a | z ≰ a}` into subsets of `Ω`, the distinct values
    /// `b_a` for `a ≠ top`, with zero left out.
    ///
    /// Zero contributes nothing to the joins in condition (D); keeping it in
    /// `Ω` would put it in every nonzero image and break meet preservation.
    pub fn embed_ring_of_sets(&self) -> Result<RingOfSets, LatticeError> {
        if !self.condition_d() {
            return Err(LatticeError::NotDistributive);
        }
        let b: Vec<usize> = self.elements().map(|a| self.b_of(a)).collect();
        let in_omega = |a: usize| a != self.top && b[a] != self.zero;
        let mut omega: Vec<usize> = self.elements().filter(|&a| in_omega(a)).map(|a| b[a]).collect();
        omega.sort_unstable();
        omega.dedup();
        let images = self
            .elements()
            .map(|z| {
                let mut set: Vec<usize> = self
                    .elements()
                    .filter(|&a| in_omega(a) && !self.leq(z, a))
                    .map(|a| b[a])
                    .collect();
                set.sort_unstable();
                set.dedup();
                set
            })
            .collect();
        Ok(RingOfSets { omega, images })
    }
}

/// Result of [`FiniteLattice::hom_to_l2`].
#[derive(Clone, Debug)]
pub struct HomToL2 {
    /// The homs under pointwise max.
    pub lattice: FiniteLattice,
    /// Value vector of each hom, indexed like `lattice`.
    pub homs: Vec<Vec<u8>>,
    /// `e[a]` is the index of `e_a`.
    pub e: Vec<usize>,
}

/// A representation of a distributive lattice by subsets of `omega`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingOfSets {
    /// The distinct values `b_a`, sorted.
    pub omega: Vec<usize>,
    /// `images[z]` is the sorted subset of `omega` assigned to `z`.
    pub images: Vec<Vec<usize>>,
}

impl RingOfSets {
    /// The lattice of images under union, or `None` if the images are not
    /// distinct or not closed under union.
    pub fn union_lattice(&self) -> Option<FiniteLattice> {
        let n = self.images.len();
        let index: std::collections::HashMap<&Vec<usize>, usize> =
            self.images.iter().enumerate().map(|(i, s)| (s, i)).collect();
        if index.len() != n {
            return None;
        }
        let mut join = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut u: Vec<usize> = self.images[i].iter().chain(&self.images[j]).copied().collect();
                u.sort_unstable();
                u.dedup();
                join[i * n + j] = *index.get(&u)?;
            }
        }
        let zero = self.images.iter().position(Vec::is_empty)?;
        FiniteLattice::from_flat(n, join, zero).ok()
    }
}

/// Join table of a finite poset, failing if some pair lacks a least upper
/// bound. `leq` is row-major `n*n`.
pub(crate) fn join_from_order(n: usize, leq: &[bool]) -> Result<Vec<usize>, LatticeError> {
    let mut join = vec![0; n * n];
    for x in 0..n {
        for y in x..n {
            let upper: Vec<usize> = (0..n).filter(|&z| leq[x * n + z] && leq[y * n + z]).collect();
            let least = upper
                .iter()
                .copied()
                .find(|&u| upper.iter().all(|&w| leq[u * n + w]))
                .ok_or(LatticeError::NoJoin { x, y })?;
            join[x * n + y] = least;
            join[y * n + x] = least;
        }
    }
    Ok(join)
}
