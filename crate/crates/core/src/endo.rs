//! Endomorphism semirings of finite lattices and their dense subsemirings.
//!
//! An endomorphism is a zero- and join-preserving self-map, stored as its
//! image array. `End(M)` numbers its elements in lexicographic order of the
//! image arrays, so element indices are stable across runs.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use thiserror::Error;

use crate::bitset::BitSet;
use crate::lattice::FiniteLattice;
use crate::semiring::FiniteSemiring;

/// Upper bound on `|End(M)|` for [`end_semiring`].
pub const DEFAULT_END_LIMIT: usize = 20_000;
/// Upper bound on `|End(M)|` for [`enumerate_sr`].
pub const DEFAULT_SR_BASE_LIMIT: usize = 512;
/// Upper bound on the number of closed sets visited by interval searches.
pub const DEFAULT_FAMILY_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EndoError {
    #[error("{what} has more than {limit} elements")]
    SizeLimit { what: &'static str, limit: usize },
    #[error("image array has length {found}, lattice has {n} elements")]
    BadLength { found: usize, n: usize },
    #[error("map is not a join- and zero-preserving endomorphism")]
    NotEndomorphism,
    #[error("member set is not closed under addition and composition or lacks the zero map")]
    NotClosed,
}

/// A zero- and join-preserving self-map of a finite lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Endomorphism(Vec<usize>);

pub fn is_endomorphism(l: &FiniteLattice, image: &[usize]) -> bool {
    image.len() == l.len()
        && image.iter().all(|&v| v < l.len())
        && image[l.zero()] == l.zero()
        && l.elements()
            .all(|x| l.elements().all(|y| image[l.join(x, y)] == l.join(image[x], image[y])))
}

/// `e_{a,b}`: zero on the down-set of `a`, `b` elsewhere.
pub fn elementary(l: &FiniteLattice, a: usize, b: usize) -> Endomorphism {
    Endomorphism(
        l.elements()
            .map(|x| if l.leq(x, a) { l.zero() } else { b })
            .collect(),
    )
}

impl Endomorphism {
    pub fn new(l: &FiniteLattice, image: Vec<usize>) -> Result<Self, EndoError> {
        if image.len() != l.len() {
            return Err(EndoError::BadLength { found: image.len(), n: l.len() });
        }
        if !is_endomorphism(l, &image) {
            return Err(EndoError::NotEndomorphism);
        }
        Ok(Endomorphism(image))
    }

    pub(crate) fn from_image_unchecked(image: Vec<usize>) -> Self {
        Endomorphism(image)
    }

    pub fn identity(l: &FiniteLattice) -> Self {
        Endomorphism(l.elements().collect())
    }

    pub fn zero_map(l: &FiniteLattice) -> Self {
        Endomorphism(vec![l.zero(); l.len()])
    }

    pub fn image(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    /// `self ∘ g`, i.e. `x ↦ self(g(x))`.
    pub fn compose(&self, g: &Endomorphism) -> Endomorphism {
        Endomorphism(g.0.iter().map(|&y| self.0[y]).collect())
    }

    /// Pointwise join.
    pub fn add(&self, l: &FiniteLattice, g: &Endomorphism) -> Endomorphism {
        Endomorphism(self.0.iter().zip(&g.0).map(|(&x, &y)| l.join(x, y)).collect())
    }

    /// Pointwise order.
    pub fn leq(&self, l: &FiniteLattice, g: &Endomorphism) -> bool {
        self.0.iter().zip(&g.0).all(|(&x, &y)| l.leq(x, y))
    }

    /// The adjoint map `a ↦ ⋁{x | f(x) ≤ a}`, an endomorphism of the dual
    /// lattice (which shares element indices with `l`).
    pub fn transpose(&self, l: &FiniteLattice) -> Endomorphism {
        Endomorphism(
            l.elements()
                .map(|a| l.join_all(l.elements().filter(|&x| l.leq(self.0[x], a))))
                .collect(),
        )
    }
}

/// See [`Endomorphism::transpose`].
pub fn transpose(l: &FiniteLattice, f: &Endomorphism) -> Endomorphism {
    f.transpose(l)
}

/// All endomorphisms of `l` in lexicographic order of image arrays.
pub fn enumerate_endomorphisms(l: &FiniteLattice, limit: usize) -> Result<Vec<Endomorphism>, EndoError> {
    let n = l.len();
    let mut order: Vec<usize> = l.elements().collect();
    order.sort_by_key(|&x| (l.down_set_size(x), x));
    let mut position = vec![0; n];
    for (i, &x) in order.iter().enumerate() {
        position[x] = i;
    }
    // decompositions x = y ∨ y' with y, y' strictly earlier than x
    let decompositions: Vec<Vec<(usize, usize)>> = l
        .elements()
        .map(|x| {
            let mut d = Vec::new();
            for y in l.elements() {
                for w in y + 1..n {
                    if l.join(y, w) == x && position[y] < position[x] && position[w] < position[x] {
                        d.push((y, w));
                    }
                }
            }
            d
        })
        .collect();
    let below: Vec<Vec<usize>> = l
        .elements()
        .map(|x| l.elements().filter(|&y| y != x && l.leq(y, x)).collect())
        .collect();
    let mut image = vec![usize::MAX; n];
    let mut out = Vec::new();
    extend(l, &order, 0, &decompositions, &below, &mut image, &mut out, limit)?;
    out.sort_unstable();
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn extend(
    l: &FiniteLattice,
    order: &[usize],
    depth: usize,
    decompositions: &[Vec<(usize, usize)>],
    below: &[Vec<usize>],
    image: &mut Vec<usize>,
    out: &mut Vec<Endomorphism>,
    limit: usize,
) -> Result<(), EndoError> {
    if depth == order.len() {
        if out.len() == limit {
            return Err(EndoError::SizeLimit { what: "End(M)", limit });
        }
        debug_assert!(is_endomorphism(l, image));
        out.push(Endomorphism(image.clone()));
        return Ok(());
    }
    let x = order[depth];
    let candidates: Vec<usize> = if x == l.zero() {
        vec![l.zero()]
    } else if let Some(&(y, w)) = decompositions[x].first() {
        vec![l.join(image[y], image[w])]
    } else {
        l.elements().collect()
    };
    for v in candidates {
        let ok = below[x].iter().all(|&y| l.leq(image[y], v))
            && decompositions[x]
                .iter()
                .all(|&(y, w)| l.join(image[y], image[w]) == v);
        if ok {
            image[x] = v;
            extend(l, order, depth + 1, decompositions, below, image, out, limit)?;
        }
    }
    image[x] = usize::MAX;
    Ok(())
}

/// `End(M)` as a Cayley-table semiring together with its elements.
#[derive(Clone, Debug)]
pub struct EndSemiring {
    pub lattice: FiniteLattice,
    elements: Vec<Endomorphism>,
    index: HashMap<Endomorphism, usize>,
    pub semiring: FiniteSemiring,
}

pub fn end_semiring(l: &FiniteLattice) -> Result<EndSemiring, EndoError> {
    end_semiring_with_limit(l, DEFAULT_END_LIMIT)
}

pub fn end_semiring_with_limit(l: &FiniteLattice, limit: usize) -> Result<EndSemiring, EndoError> {
    let elements = enumerate_endomorphisms(l, limit)?;
    Ok(EndSemiring::from_elements(l, elements))
}

impl EndSemiring {
    /// `elements` must be closed under pointwise join and composition and
    /// contain the zero map.
    fn from_elements(l: &FiniteLattice, elements: Vec<Endomorphism>) -> Self {
        let index: HashMap<Endomorphism, usize> =
            elements.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        let semiring = table_semiring(l, &elements, &index);
        let name = l.name().map(|s| format!("End({s})"));
        EndSemiring {
            lattice: l.clone(),
            elements,
            index,
            semiring: match name {
                Some(name) => semiring.with_name(name),
                None => semiring,
            },
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn elements(&self) -> &[Endomorphism] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Endomorphism {
        &self.elements[i]
    }

    pub fn index_of(&self, f: &Endomorphism) -> Option<usize> {
        self.index.get(f).copied()
    }

    pub fn identity_index(&self) -> usize {
        self.index[&Endomorphism::identity(&self.lattice)]
    }

    pub fn elementary_index(&self, a: usize, b: usize) -> usize {
        self.index[&elementary(&self.lattice, a, b)]
    }

    /// Indices of all `e_{a,b}`.
    pub fn elementary_set(&self) -> BitSet {
        let l = &self.lattice;
        BitSet::from_indices(
            self.len(),
            l.elements()
                .flat_map(|a| l.elements().map(move |b| (a, b)))
                .map(|(a, b)| self.elementary_index(a, b)),
        )
    }

    /// The whole of `End(M)` as a subsemiring.
    pub fn as_subsemiring(&self) -> EndoSubsemiring {
        EndoSubsemiring::from_sorted_unchecked(&self.lattice, self.elements.clone())
    }

    pub fn subsemiring(&self, members: &BitSet) -> EndoSubsemiring {
        EndoSubsemiring::from_sorted_unchecked(
            &self.lattice,
            members.iter().map(|i| self.elements[i].clone()).collect(),
        )
    }

    pub fn member_set(&self, s: &EndoSubsemiring) -> Option<BitSet> {
        let mut set = BitSet::new(self.len());
        for f in s.members() {
            set.insert(self.index_of(f)?);
        }
        Some(set)
    }
}

fn table_semiring(l: &FiniteLattice, elements: &[Endomorphism], index: &HashMap<Endomorphism, usize>) -> FiniteSemiring {
    let k = elements.len();
    let rows: Vec<(Vec<usize>, Vec<usize>)> = elements
        .par_iter()
        .map(|f| {
            let add = elements.iter().map(|g| index[&f.add(l, g)]).collect();
            let mul = elements.iter().map(|g| index[&f.compose(g)]).collect();
            (add, mul)
        })
        .collect();
    let (mut add, mut mul) = (Vec::with_capacity(k * k), Vec::with_capacity(k * k));
    for (a, m) in rows {
        add.extend(a);
        mul.extend(m);
    }
    let zero = index[&Endomorphism::zero_map(l)];
    FiniteSemiring::from_flat_unchecked(k, add, mul, zero)
}

/// A subsemiring of `End(M)`: members sorted by image array, closed under
/// pointwise join and composition, containing the zero map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndoSubsemiring {
    lattice: FiniteLattice,
    members: Vec<Endomorphism>,
    dense: bool,
}

impl EndoSubsemiring {
    /// Validates closure and zero membership.
    pub fn new(l: &FiniteLattice, mut members: Vec<Endomorphism>) -> Result<Self, EndoError> {
        for f in &members {
            if f.image().len() != l.len() {
                return Err(EndoError::BadLength { found: f.image().len(), n: l.len() });
            }
            if !is_endomorphism(l, f.image()) {
                return Err(EndoError::NotEndomorphism);
            }
        }
        members.sort_unstable();
        members.dedup();
        let set: HashSet<&Endomorphism> = members.iter().collect();
        let closed = set.contains(&Endomorphism::zero_map(l))
            && members.iter().all(|f| {
                members
                    .iter()
                    .all(|g| set.contains(&f.add(l, g)) && set.contains(&f.compose(g)))
            });
        if !closed {
            return Err(EndoError::NotClosed);
        }
        Ok(Self::from_sorted_unchecked(l, members))
    }

    fn from_sorted_unchecked(l: &FiniteLattice, members: Vec<Endomorphism>) -> Self {
        let set: HashSet<&Endomorphism> = members.iter().collect();
        let dense = l
            .elements()
            .all(|a| l.elements().all(|b| set.contains(&elementary(l, a, b))));
        EndoSubsemiring {
            lattice: l.clone(),
            members,
            dense,
        }
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn members(&self) -> &[Endomorphism] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, f: &Endomorphism) -> bool {
        self.members.binary_search(f).is_ok()
    }

    pub fn is_dense(&self) -> bool {
        self.dense
    }

    /// Cayley tables over the members in stored order.
    pub fn to_semiring(&self) -> FiniteSemiring {
        let index: HashMap<Endomorphism, usize> =
            self.members.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        table_semiring(&self.lattice, &self.members, &index)
    }
}

/// Contains every `e_{a,b}`.
pub fn is_dense(s: &EndoSubsemiring) -> bool {
    s.is_dense()
}

pub fn dense_closure(l: &FiniteLattice) -> Result<EndoSubsemiring, EndoError> {
    dense_closure_with_limit(l, DEFAULT_END_LIMIT)
}

/// Least subsemiring containing every `e_{a,b}`, by worklist closure under
/// pointwise join and composition.
pub fn dense_closure_with_limit(l: &FiniteLattice, limit: usize) -> Result<EndoSubsemiring, EndoError> {
    let generators = l
        .elements()
        .flat_map(|a| l.elements().map(move |b| (a, b)))
        .map(|(a, b)| elementary(l, a, b));
    let members = close_maps(l, generators, limit)?;
    Ok(EndoSubsemiring::from_sorted_unchecked(l, members))
}

fn close_maps(
    l: &FiniteLattice,
    generators: impl IntoIterator<Item = Endomorphism>,
    limit: usize,
) -> Result<Vec<Endomorphism>, EndoError> {
    let mut seen: HashSet<Endomorphism> = HashSet::new();
    let mut members: Vec<Endomorphism> = Vec::new();
    let push = |f: Endomorphism, seen: &mut HashSet<Endomorphism>, members: &mut Vec<Endomorphism>| {
        if seen.insert(f.clone()) {
            members.push(f);
            if members.len() > limit {
                return Err(EndoError::SizeLimit { what: "subsemiring closure", limit });
            }
        }
        Ok(())
    };
    push(Endomorphism::zero_map(l), &mut seen, &mut members)?;
    for g in generators {
        push(g, &mut seen, &mut members)?;
    }
    let mut next = 0;
    while next < members.len() {
        let u = members[next].clone();
        next += 1;
        let mut i = 0;
        while i < members.len() {
            let v = members[i].clone();
            i += 1;
            for w in [u.add(l, &v), u.compose(&v), v.compose(&u)] {
                push(w, &mut seen, &mut members)?;
            }
        }
    }
    members.sort_unstable();
    Ok(members)
}

/// Subsemiring generated by `generators`.
pub fn generated_subsemiring(
    l: &FiniteLattice,
    generators: impl IntoIterator<Item = Endomorphism>,
) -> Result<EndoSubsemiring, EndoError> {
    let members = close_maps(l, generators, DEFAULT_END_LIMIT)?;
    Ok(EndoSubsemiring::from_sorted_unchecked(l, members))
}

/// Closure of `base ∪ {extra}` under both operations of `r`. `base` must
/// already be closed.
pub fn close_with(r: &FiniteSemiring, base: &BitSet, extra: usize) -> BitSet {
    let mut set = base.clone();
    let mut members: Vec<usize> = base.iter().collect();
    if !set.insert(extra) {
        return set;
    }
    let mut frontier = members.len();
    members.push(extra);
    while frontier < members.len() {
        let u = members[frontier];
        frontier += 1;
        let mut i = 0;
        while i < members.len() {
            let v = members[i];
            i += 1;
            for w in [r.add(u, v), r.mul(u, v), r.mul(v, u)] {
                if set.insert(w) {
                    members.push(w);
                }
            }
        }
    }
    set
}

/// All closed subsets of `r` containing the closed set `base`, ordered by
/// size descending and then by member list.
pub fn closed_supersets(r: &FiniteSemiring, base: &BitSet, limit: usize) -> Result<Vec<BitSet>, EndoError> {
    let mut visited: HashSet<BitSet> = HashSet::new();
    visited.insert(base.clone());
    let mut stack = vec![base.clone()];
    while let Some(s) = stack.pop() {
        let children: Vec<BitSet> = r
            .elements()
            .filter(|&x| !s.contains(x))
            .map(|x| close_with(r, &s, x))
            .collect();
        for c in children {
            if !visited.contains(&c) {
                if visited.len() >= limit {
                    return Err(EndoError::SizeLimit { what: "subsemiring family", limit });
                }
                visited.insert(c.clone());
                stack.push(c);
            }
        }
    }
    let mut out: Vec<BitSet> = visited.into_iter().collect();
    out.sort_by(|a, b| {
        b.count()
            .cmp(&a.count())
            .then_with(|| a.iter().cmp(b.iter()))
    });
    Ok(out)
}

/// Every subsemiring of `r` (every closed set containing zero).
pub fn all_subsemirings(r: &FiniteSemiring, limit: usize) -> Result<Vec<BitSet>, EndoError> {
    closed_supersets(r, &BitSet::from_indices(r.len(), [r.zero()]), limit)
}

#[derive(Clone, Copy, Debug)]
pub struct SrLimits {
    pub base: usize,
    pub family: usize,
}

impl Default for SrLimits {
    fn default() -> Self {
        SrLimits {
            base: DEFAULT_SR_BASE_LIMIT,
            family: DEFAULT_FAMILY_LIMIT,
        }
    }
}

/// The dense subsemirings of `End(M)` with their member sets in `end`.
pub fn enumerate_sr_in(end: &EndSemiring, limits: SrLimits) -> Result<Vec<BitSet>, EndoError> {
    if end.len() > limits.base {
        return Err(EndoError::SizeLimit { what: "End(M) for SR enumeration", limit: limits.base });
    }
    let dense = dense_closure_with_limit(&end.lattice, end.len())?;
    let base = end.member_set(&dense).expect("dense closure lies in End(M)");
    closed_supersets(&end.semiring, &base, limits.family)
}

/// Every dense subsemiring of `End(M)`: the closed sets between the dense
/// closure and `End(M)`, largest first.
pub fn enumerate_sr(l: &FiniteLattice) -> Result<Vec<EndoSubsemiring>, EndoError> {
    let end = end_semiring_with_limit(l, DEFAULT_SR_BASE_LIMIT)
        .map_err(|_| EndoError::SizeLimit { what: "End(M) for SR enumeration", limit: DEFAULT_SR_BASE_LIMIT })?;
    let sets = enumerate_sr_in(&end, SrLimits::default())?;
    Ok(sets.iter().map(|s| end.subsemiring(s)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::fixtures::*;

    #[test]
    fn endomorphism_checks() {
        let d = diamond();
        assert!(is_endomorphism(&d, &[0, 1, 2, 3]));
        assert!(!is_endomorphism(&d, &[3, 3, 3, 3]));
        assert!(is_endomorphism(&d, &[0, 2, 1, 3]));
        assert!(!is_endomorphism(&d, &[0, 1, 1, 3]));
        let trivial = FiniteLattice::from_covers(1, &[]).unwrap();
        assert!(is_endomorphism(&trivial, &[0]));
    }

    #[test]
    fn end_orders() {
        assert_eq!(end_semiring(&chain(3)).unwrap().len(), 6);
        assert_eq!(end_semiring(&diamond()).unwrap().len(), 16);
        assert_eq!(end_semiring(&chain(4)).unwrap().len(), 20);
        assert_eq!(end_semiring(&chain(5)).unwrap().len(), 70);
    }

    #[test]
    fn end_limit() {
        assert_eq!(
            end_semiring_with_limit(&chain(4), 19).unwrap_err(),
            EndoError::SizeLimit { what: "End(M)", limit: 19 }
        );
        assert!(end_semiring_with_limit(&chain(4), 20).is_ok());
    }

    #[test]
    fn end_has_identity_and_is_valid() {
        let e = end_semiring(&chain(3)).unwrap();
        assert_eq!(e.semiring.one(), Some(e.identity_index()));
        let r = &e.semiring;
        assert!(FiniteSemiring::from_flat(r.len(), r.add_rows().concat(), r.mul_rows().concat(), r.zero()).is_ok());
        // lexicographic numbering puts the zero map first
        assert_eq!(r.zero(), 0);
    }

    #[test]
    fn elementary_maps() {
        for l in all_fixtures() {
            for b in l.elements() {
                assert_eq!(elementary(&l, l.top(), b), Endomorphism::zero_map(&l));
            }
            let e = end_semiring(&l).unwrap();
            let absorbing = elementary(&l, l.zero(), l.top());
            for h in e.elements() {
                assert_eq!(absorbing.add(&l, h), absorbing);
            }
            assert_eq!(e.semiring.absorbing(), e.index_of(&absorbing));
        }
    }

    #[test]
    fn dense_closure_sizes() {
        assert_eq!(dense_closure(&chain(3)).unwrap().len(), 6);
        assert_eq!(dense_closure(&m3()).unwrap().len(), 44);
        assert_eq!(dense_closure(&n5()).unwrap().len(), 42);
    }

    #[test]
    fn density_flags() {
        for l in all_fixtures() {
            assert!(dense_closure(&l).unwrap().is_dense());
            assert!(end_semiring(&l).unwrap().as_subsemiring().is_dense());
        }
        let c3 = chain(3);
        let s = EndoSubsemiring::new(&c3, vec![Endomorphism::zero_map(&c3), Endomorphism::identity(&c3)]).unwrap();
        assert!(!is_dense(&s));
        assert_eq!(
            EndoSubsemiring::new(&c3, vec![Endomorphism::identity(&c3)]).unwrap_err(),
            EndoError::NotClosed
        );
    }

    #[test]
    fn sr_families() {
        let orders = |l: &FiniteLattice| enumerate_sr(l).unwrap().iter().map(EndoSubsemiring::len).collect::<Vec<_>>();
        assert_eq!(orders(&chain(5)), vec![70]);
        assert_eq!(orders(&n5()), vec![43, 42]);
        assert_eq!(orders(&m3()), vec![50, 47, 46, 46, 46, 45, 44]);
    }

    #[test]
    fn transpose_identity_and_bijection() {
        let d = diamond();
        assert_eq!(Endomorphism::identity(&d).transpose(&d), Endomorphism::identity(&d));
        let e = end_semiring(&d).unwrap();
        let dual = d.dual();
        let images: HashSet<Endomorphism> = e.elements().iter().map(|f| f.transpose(&d)).collect();
        assert_eq!(images.len(), e.len());
        assert!(images.iter().all(|g| is_endomorphism(&dual, g.image())));
        assert_eq!(end_semiring(&dual).unwrap().len(), e.len());
    }
}
