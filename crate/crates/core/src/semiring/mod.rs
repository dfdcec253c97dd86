//! Finite semirings with zero, given by Cayley tables.

mod congruence;
mod iso;

use serde::Serialize;
use thiserror::Error;

use crate::lattice::FiniteLattice;

pub use congruence::{
    is_congruence, is_congruence_simple, monico_congruence, monico_relation, principal_congruence,
    proper_congruence_witness, quotient_semiring,
};
pub use iso::{semiring_anti_iso, semiring_iso};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemiringError {
    #[error("semiring must have at least one element")]
    Empty,
    #[error("{table} table must be {n}x{n}")]
    Shape { table: &'static str, n: usize },
    #[error("{table} entry {value} at ({x}, {y}) is out of range for {n} elements")]
    OutOfRange { table: &'static str, x: usize, y: usize, value: usize, n: usize },
    #[error("zero index {zero} is out of range for {n} elements")]
    ZeroOutOfRange { zero: usize, n: usize },
    #[error("zero is not additively neutral: 0 + {x} = {result}")]
    ZeroNotNeutral { x: usize, result: usize },
    #[error("addition is not commutative: {x} + {y} != {y} + {x}")]
    AddNotCommutative { x: usize, y: usize },
    #[error("addition is not associative at ({x}, {y}, {z})")]
    AddNotAssociative { x: usize, y: usize, z: usize },
    #[error("multiplication is not associative at ({x}, {y}, {z})")]
    MulNotAssociative { x: usize, y: usize, z: usize },
    #[error("left distributivity fails: {x}({y} + {z}) != {x}{y} + {x}{z}")]
    LeftDistFail { x: usize, y: usize, z: usize },
    #[error("right distributivity fails: ({x} + {y}){z} != {x}{z} + {y}{z}")]
    RightDistFail { x: usize, y: usize, z: usize },
    #[error("zero is not multiplicatively absorbing at {x}")]
    ZeroNotAbsorbing { x: usize },
    #[error("partition is not a congruence: {x} ~ {y} but translation by {a} separates them")]
    NotCompatible { x: usize, y: usize, a: usize },
    #[error("partition has {found} entries, semiring has {n} elements")]
    PartitionSize { found: usize, n: usize },
}

/// A finite semiring with zero: `(add, zero)` a commutative monoid, `mul`
/// a semigroup, both distributive laws, and zero multiplicatively absorbing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteSemiring {
    n: usize,
    add: Vec<u32>,
    mul: Vec<u32>,
    zero: usize,
    name: Option<String>,
}

/// Checks every semiring axiom exhaustively.
pub fn validate_semiring(
    add: &[Vec<usize>],
    mul: &[Vec<usize>],
    zero: usize,
) -> Result<FiniteSemiring, SemiringError> {
    let n = add.len();
    if n == 0 {
        return Err(SemiringError::Empty);
    }
    let flatten = |rows: &[Vec<usize>], table: &'static str| -> Result<Vec<usize>, SemiringError> {
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(SemiringError::Shape { table, n });
        }
        Ok(rows.concat())
    };
    FiniteSemiring::from_flat(n, flatten(add, "add")?, flatten(mul, "mul")?, zero)
}

impl FiniteSemiring {
    pub fn from_flat(n: usize, add: Vec<usize>, mul: Vec<usize>, zero: usize) -> Result<Self, SemiringError> {
        if n == 0 {
            return Err(SemiringError::Empty);
        }
        for (table, t) in [("add", &add), ("mul", &mul)] {
            if t.len() != n * n {
                return Err(SemiringError::Shape { table, n });
            }
            if let Some(pos) = t.iter().position(|&v| v >= n) {
                return Err(SemiringError::OutOfRange { table, x: pos / n, y: pos % n, value: t[pos], n });
            }
        }
        if zero >= n {
            return Err(SemiringError::ZeroOutOfRange { zero, n });
        }
        let r = Self::from_flat_unchecked(n, add, mul, zero);
        r.check_axioms()?;
        Ok(r)
    }

    /// Builds without checking the axioms. Callers construct the tables
    /// from operations already known to satisfy them.
    pub(crate) fn from_flat_unchecked(n: usize, add: Vec<usize>, mul: Vec<usize>, zero: usize) -> Self {
        FiniteSemiring {
            n,
            add: add.into_iter().map(|v| v as u32).collect(),
            mul: mul.into_iter().map(|v| v as u32).collect(),
            zero,
            name: None,
        }
    }

    fn check_axioms(&self) -> Result<(), SemiringError> {
        let n = self.n;
        let z = self.zero;
        for x in 0..n {
            if self.add(z, x) != x {
                return Err(SemiringError::ZeroNotNeutral { x, result: self.add(z, x) });
            }
            if self.mul(z, x) != z || self.mul(x, z) != z {
                return Err(SemiringError::ZeroNotAbsorbing { x });
            }
            for y in x + 1..n {
                if self.add(x, y) != self.add(y, x) {
                    return Err(SemiringError::AddNotCommutative { x, y });
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                let (xpy, xy) = (self.add(x, y), self.mul(x, y));
                for w in 0..n {
                    if self.add(xpy, w) != self.add(x, self.add(y, w)) {
                        return Err(SemiringError::AddNotAssociative { x, y, z: w });
                    }
                    if self.mul(xy, w) != self.mul(x, self.mul(y, w)) {
                        return Err(SemiringError::MulNotAssociative { x, y, z: w });
                    }
                    if self.mul(x, self.add(y, w)) != self.add(xy, self.mul(x, w)) {
                        return Err(SemiringError::LeftDistFail { x, y, z: w });
                    }
                    if self.mul(xpy, w) != self.add(self.mul(x, w), self.mul(y, w)) {
                        return Err(SemiringError::RightDistFail { x, y, z: w });
                    }
                }
            }
        }
        Ok(())
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

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    #[inline]
    pub fn add(&self, x: usize, y: usize) -> usize {
        self.add[x * self.n + y] as usize
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.n + y] as usize
    }

    pub fn add_rows(&self) -> Vec<Vec<usize>> {
        rows(&self.add, self.n)
    }

    pub fn mul_rows(&self) -> Vec<Vec<usize>> {
        rows(&self.mul, self.n)
    }

    /// Same addition, multiplication reversed.
    pub fn opposite(&self) -> FiniteSemiring {
        let n = self.n;
        let mut mul = vec![0u32; n * n];
        for x in 0..n {
            for y in 0..n {
                mul[x * n + y] = self.mul[y * n + x];
            }
        }
        FiniteSemiring {
            n,
            add: self.add.clone(),
            mul,
            zero: self.zero,
            name: self.name.as_ref().map(|s| format!("op({s})")),
        }
    }

    /// Componentwise product; `(a, b)` has index `a * other.len() + b`.
    pub fn direct_product(&self, other: &FiniteSemiring) -> FiniteSemiring {
        let (n1, n2) = (self.n, other.n);
        let n = n1 * n2;
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let (a1, a2, b1, b2) = (a / n2, a % n2, b / n2, b % n2);
                add[a * n + b] = self.add(a1, b1) * n2 + other.add(a2, b2);
                mul[a * n + b] = self.mul(a1, b1) * n2 + other.mul(a2, b2);
            }
        }
        FiniteSemiring::from_flat_unchecked(n, add, mul, self.zero * n2 + other.zero)
    }

    /// Restriction to a subset closed under both operations and containing
    /// zero. Elements are renumbered in the order given.
    pub fn restrict(&self, members: &[usize]) -> Option<FiniteSemiring> {
        let mut index = vec![usize::MAX; self.n];
        for (i, &m) in members.iter().enumerate() {
            index[m] = i;
        }
        let k = members.len();
        let zero = index[self.zero];
        if zero == usize::MAX {
            return None;
        }
        let mut add = Vec::with_capacity(k * k);
        let mut mul = Vec::with_capacity(k * k);
        for &x in members {
            for &y in members {
                let (s, p) = (index[self.add(x, y)], index[self.mul(x, y)]);
                if s == usize::MAX || p == usize::MAX {
                    return None;
                }
                add.push(s);
                mul.push(p);
            }
        }
        Some(FiniteSemiring::from_flat_unchecked(k, add, mul, zero))
    }

    /// Two-sided multiplicative identity, if any.
    pub fn one(&self) -> Option<usize> {
        self.elements()
            .find(|&e| self.elements().all(|x| self.mul(e, x) == x && self.mul(x, e) == x))
    }

    /// Additively absorbing element `z` (`z + x = z` for all `x`), if any.
    pub fn absorbing(&self) -> Option<usize> {
        self.elements()
            .find(|&z| self.elements().all(|x| self.add(z, x) == z))
    }

    pub fn is_add_idempotent(&self) -> bool {
        self.elements().all(|x| self.add(x, x) == x)
    }

    pub fn has_trivial_mul(&self) -> bool {
        self.mul.iter().all(|&v| v as usize == self.zero)
    }

    /// `(R, +)` is a group.
    pub fn is_ring(&self) -> bool {
        self.elements()
            .all(|x| self.elements().any(|y| self.add(x, y) == self.zero))
    }

    pub fn structure_flags(&self) -> StructureFlags {
        let one = self.one();
        StructureFlags {
            is_ring: self.is_ring(),
            add_idempotent: self.is_add_idempotent(),
            has_one: one.is_some(),
            one,
            trivial_mul: self.has_trivial_mul(),
            absorbing: self.absorbing(),
        }
    }

    /// `{x | xr = rx for all r}`.
    pub fn center(&self) -> Vec<usize> {
        self.elements()
            .filter(|&x| self.elements().all(|r| self.mul(x, r) == self.mul(r, x)))
            .collect()
    }

    /// The submonoid `R z` of `(R, +)` for the additively absorbing `z`, as
    /// a lattice with zero relabeled to index 0 and the remaining elements in
    /// increasing order of their semiring index.
    ///
    /// `None` when addition is not idempotent or no absorbing element exists.
    pub fn recover_monoid(&self) -> Option<FiniteLattice> {
        if !self.is_add_idempotent() {
            return None;
        }
        let z = self.absorbing()?;
        let mut elems: Vec<usize> = self.elements().map(|r| self.mul(r, z)).collect();
        elems.sort_unstable();
        elems.dedup();
        elems.retain(|&e| e != self.zero);
        elems.insert(0, self.zero);
        let k = elems.len();
        let mut index = vec![usize::MAX; self.n];
        for (i, &e) in elems.iter().enumerate() {
            index[e] = i;
        }
        let mut join = vec![0; k * k];
        for i in 0..k {
            for j in 0..k {
                join[i * k + j] = index[self.add(elems[i], elems[j])];
            }
        }
        FiniteLattice::from_flat(k, join, 0).ok()
    }
}

fn rows(t: &[u32], n: usize) -> Vec<Vec<usize>> {
    t.chunks(n).map(|r| r.iter().map(|&v| v as usize).collect()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureFlags {
    pub is_ring: bool,
    pub add_idempotent: bool,
    pub has_one: bool,
    pub one: Option<usize>,
    pub trivial_mul: bool,
    pub absorbing: Option<usize>,
}

/// The order-2 semiring with idempotent addition and trivial multiplication.
pub fn r2a() -> FiniteSemiring {
    validate_semiring(&[vec![0, 1], vec![1, 1]], &[vec![0, 0], vec![0, 0]], 0)
        .expect("R_2a")
        .with_name("R2a")
}

/// The Boolean semiring.
pub fn r2b() -> FiniteSemiring {
    validate_semiring(&[vec![0, 1], vec![1, 1]], &[vec![0, 0], vec![0, 1]], 0)
        .expect("R_2b")
        .with_name("R2b")
}

/// The field with two elements.
pub fn f2() -> FiniteSemiring {
    validate_semiring(&[vec![0, 1], vec![1, 0]], &[vec![0, 0], vec![0, 1]], 0)
        .expect("F_2")
        .with_name("F2")
}
