//! Left semimodules over finite semirings and the construction of an
//! irreducible semimodule for a congruence-simple semiring.

use std::sync::Arc;

use thiserror::Error;

use crate::bitset::BitSet;
use crate::endo::{enumerate_endomorphisms, EndSemiring, EndoSubsemiring, Endomorphism, DEFAULT_END_LIMIT};
use crate::lattice::FiniteLattice;
use crate::partition::{close_under, Congruence, ModuleCongruence, UnionFind};
use crate::semiring::{is_congruence_simple, FiniteSemiring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemimoduleError {
    #[error("semimodule must have at least one element")]
    Empty,
    #[error("{table} table has the wrong shape")]
    Shape { table: &'static str },
    #[error("{table} entry {value} is out of range")]
    OutOfRange { table: &'static str, value: usize },
    #[error("addition has no neutral element")]
    NoZero,
    #[error("addition is not commutative at ({x}, {y})")]
    AddNotCommutative { x: usize, y: usize },
    #[error("addition is not associative at ({x}, {y}, {z})")]
    AddNotAssociative { x: usize, y: usize, z: usize },
    #[error("r(sx) != (rs)x for r={r}, s={s}, x={x}")]
    ActNotAssociative { r: usize, s: usize, x: usize },
    #[error("0x != 0 for x={x}")]
    ZeroActsNonzero { x: usize },
    #[error("r0 != 0 for r={r}")]
    ActionMovesZero { r: usize },
    #[error("(r+s)x != rx+sx for r={r}, s={s}, x={x}")]
    RingAddDistFail { r: usize, s: usize, x: usize },
    #[error("r(x+y) != rx+ry for r={r}, x={x}, y={y}")]
    ModuleAddDistFail { r: usize, x: usize, y: usize },
    #[error("semimodule addition is not idempotent")]
    NotALattice,
    #[error("precondition failed: {0}")]
    PreconditionFailed(&'static str),
    #[error("every element is annihilated by the whole semiring")]
    AnnulatorIsEverything,
    #[error("partition is not a semimodule congruence")]
    NotCompatible,
    #[error("more than {limit} {what}")]
    SizeLimit { what: &'static str, limit: usize },
    #[error("descent failed to shrink the semimodule at step {step}")]
    DescentStalled { step: usize },
}

/// A left semimodule: a finite commutative monoid with an action of `ring`.
#[derive(Clone, Debug)]
pub struct Semimodule {
    ring: Arc<FiniteSemiring>,
    m: usize,
    madd: Vec<usize>,
    act: Vec<usize>,
    zero: usize,
}

impl PartialEq for Semimodule {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.madd == other.madd && self.act == other.act
    }
}

/// Checks all semimodule axioms. The zero is the neutral element of `madd`.
pub fn validate_semimodule(
    ring: Arc<FiniteSemiring>,
    madd: &[Vec<usize>],
    act: &[Vec<usize>],
) -> Result<Semimodule, SemimoduleError> {
    let m = madd.len();
    if m == 0 {
        return Err(SemimoduleError::Empty);
    }
    if madd.iter().any(|r| r.len() != m) {
        return Err(SemimoduleError::Shape { table: "madd" });
    }
    if act.len() != ring.len() || act.iter().any(|r| r.len() != m) {
        return Err(SemimoduleError::Shape { table: "act" });
    }
    for (table, rows) in [("madd", madd), ("act", act)] {
        if let Some(&value) = rows.iter().flatten().find(|&&v| v >= m) {
            return Err(SemimoduleError::OutOfRange { table, value });
        }
    }
    Semimodule::from_flat(ring, m, madd.concat(), act.concat())
}

impl Semimodule {
    pub fn from_flat(
        ring: Arc<FiniteSemiring>,
        m: usize,
        madd: Vec<usize>,
        act: Vec<usize>,
    ) -> Result<Self, SemimoduleError> {
        let add = |x: usize, y: usize| madd[x * m + y];
        let zero = (0..m)
            .find(|&z| (0..m).all(|x| add(z, x) == x && add(x, z) == x))
            .ok_or(SemimoduleError::NoZero)?;
        let module = Semimodule { ring, m, madd, act, zero };
        module.check_axioms()?;
        Ok(module)
    }

    pub(crate) fn from_parts_unchecked(
        ring: Arc<FiniteSemiring>,
        m: usize,
        madd: Vec<usize>,
        act: Vec<usize>,
        zero: usize,
    ) -> Self {
        Semimodule { ring, m, madd, act, zero }
    }

    fn check_axioms(&self) -> Result<(), SemimoduleError> {
        let r = &*self.ring;
        let m = self.m;
        for x in 0..m {
            for y in 0..m {
                if self.add(x, y) != self.add(y, x) {
                    return Err(SemimoduleError::AddNotCommutative { x, y });
                }
                for z in 0..m {
                    if self.add(self.add(x, y), z) != self.add(x, self.add(y, z)) {
                        return Err(SemimoduleError::AddNotAssociative { x, y, z });
                    }
                }
            }
        }
        for x in 0..m {
            if self.act(r.zero(), x) != self.zero {
                return Err(SemimoduleError::ZeroActsNonzero { x });
            }
        }
        for a in r.elements() {
            if self.act(a, self.zero) != self.zero {
                return Err(SemimoduleError::ActionMovesZero { r: a });
            }
            for s in r.elements() {
                for x in 0..m {
                    if self.act(a, self.act(s, x)) != self.act(r.mul(a, s), x) {
                        return Err(SemimoduleError::ActNotAssociative { r: a, s, x });
                    }
                    if self.act(r.add(a, s), x) != self.add(self.act(a, x), self.act(s, x)) {
                        return Err(SemimoduleError::RingAddDistFail { r: a, s, x });
                    }
                }
            }
            for x in 0..m {
                for y in 0..m {
                    if self.act(a, self.add(x, y)) != self.add(self.act(a, x), self.act(a, y)) {
                        return Err(SemimoduleError::ModuleAddDistFail { r: a, x, y });
                    }
                }
            }
        }
        Ok(())
    }

    /// `R` acting on itself by left multiplication.
    pub fn regular(ring: Arc<FiniteSemiring>) -> Self {
        let n = ring.len();
        let madd = ring.add_rows().concat();
        let act = ring.mul_rows().concat();
        let zero = ring.zero();
        Semimodule { ring, m: n, madd, act, zero }
    }

    /// The lattice `l` with ring element `i` acting as `maps[i]`.
    pub fn natural(l: &FiniteLattice, ring: Arc<FiniteSemiring>, maps: &[Endomorphism]) -> Result<Self, SemimoduleError> {
        if maps.len() != ring.len() {
            return Err(SemimoduleError::Shape { table: "act" });
        }
        let madd = l.join_table().to_vec();
        let act = maps.iter().flat_map(|f| f.image().iter().copied()).collect();
        Semimodule::from_flat(ring, l.len(), madd, act)
    }

    /// `M` acted on by `End(M)`.
    pub fn natural_for_end(end: &EndSemiring) -> Self {
        let l = &end.lattice;
        let act = end.elements().iter().flat_map(|f| f.image().iter().copied()).collect();
        Semimodule::from_parts_unchecked(Arc::new(end.semiring.clone()), l.len(), l.join_table().to_vec(), act, l.zero())
    }

    /// `M` acted on by a subsemiring of `End(M)`, ring elements numbered as
    /// in [`EndoSubsemiring::to_semiring`].
    pub fn natural_for_subsemiring(s: &EndoSubsemiring) -> Self {
        let l = s.lattice();
        let act = s.members().iter().flat_map(|f| f.image().iter().copied()).collect();
        Semimodule::from_parts_unchecked(Arc::new(s.to_semiring()), l.len(), l.join_table().to_vec(), act, l.zero())
    }

    /// The monoid `madd` with every ring element acting as zero.
    pub fn zero_action(ring: Arc<FiniteSemiring>, madd: &[Vec<usize>]) -> Result<Self, SemimoduleError> {
        let m = madd.len();
        let zero = (0..m)
            .find(|&z| (0..m).all(|x| madd[z].get(x) == Some(&x)))
            .ok_or(SemimoduleError::NoZero)?;
        let act = vec![vec![zero; m]; ring.len()];
        validate_semimodule(ring, madd, &act)
    }

    pub fn ring(&self) -> &Arc<FiniteSemiring> {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.m
    }

    #[inline]
    pub fn add(&self, x: usize, y: usize) -> usize {
        self.madd[x * self.m + y]
    }

    #[inline]
    pub fn act(&self, r: usize, x: usize) -> usize {
        self.act[r * self.m + x]
    }

    pub fn madd_rows(&self) -> Vec<Vec<usize>> {
        self.madd.chunks(self.m).map(<[usize]>::to_vec).collect()
    }

    pub fn act_rows(&self) -> Vec<Vec<usize>> {
        self.act.chunks(self.m).map(<[usize]>::to_vec).collect()
    }

    /// `R M ≠ {0}`.
    pub fn acts_nonzero(&self) -> bool {
        self.act.iter().any(|&v| v != self.zero)
    }

    pub fn is_add_idempotent(&self) -> bool {
        self.elements().all(|x| self.add(x, x) == x)
    }

    /// `(M, +)` as a lattice; requires idempotent addition.
    pub fn to_lattice(&self) -> Result<FiniteLattice, SemimoduleError> {
        if !self.is_add_idempotent() {
            return Err(SemimoduleError::NotALattice);
        }
        FiniteLattice::from_flat(self.m, self.madd.clone(), self.zero).map_err(|_| SemimoduleError::NotALattice)
    }

    /// The action map `x ↦ r x`.
    pub fn action_map(&self, r: usize) -> Endomorphism {
        Endomorphism::from_image_unchecked(self.act[r * self.m..(r + 1) * self.m].to_vec())
    }

    /// Least subsemimodule containing `generators`.
    pub fn submodule_closure(&self, generators: impl IntoIterator<Item = usize>) -> BitSet {
        let mut set = BitSet::from_indices(self.m, [self.zero]);
        let mut members = vec![self.zero];
        for g in generators {
            if set.insert(g) {
                members.push(g);
            }
        }
        let mut next = 0;
        while next < members.len() {
            let u = members[next];
            next += 1;
            let mut fresh: Vec<usize> = self.ring.elements().map(|r| self.act(r, u)).collect();
            let mut i = 0;
            while i < members.len() {
                fresh.push(self.add(u, members[i]));
                i += 1;
            }
            for w in fresh {
                if set.insert(w) {
                    members.push(w);
                }
            }
        }
        set
    }

    /// The subsemimodule on `members` (closed, containing zero), renumbered
    /// in increasing order.
    pub fn restrict(&self, members: &BitSet) -> Semimodule {
        let elems: Vec<usize> = members.iter().collect();
        let mut index = vec![usize::MAX; self.m];
        for (i, &e) in elems.iter().enumerate() {
            index[e] = i;
        }
        let k = elems.len();
        let mut madd = Vec::with_capacity(k * k);
        for &x in &elems {
            for &y in &elems {
                madd.push(index[self.add(x, y)]);
            }
        }
        let mut act = Vec::with_capacity(self.ring.len() * k);
        for r in self.ring.elements() {
            for &x in &elems {
                act.push(index[self.act(r, x)]);
            }
        }
        debug_assert!(madd.iter().chain(&act).all(|&v| v != usize::MAX));
        Semimodule::from_parts_unchecked(self.ring.clone(), k, madd, act, index[self.zero])
    }

    pub fn is_congruence(&self, c: &ModuleCongruence) -> bool {
        c.len() == self.m
            && c.classes().iter().all(|class| {
                class[1..].iter().all(|&y| {
                    let x = class[0];
                    self.elements().all(|a| c.related(self.add(a, x), self.add(a, y)))
                        && self.ring.elements().all(|r| c.related(self.act(r, x), self.act(r, y)))
                })
            })
    }

    /// Quotient by a congruence; block `i` becomes element `i`.
    pub fn quotient(&self, c: &ModuleCongruence) -> Result<Semimodule, SemimoduleError> {
        if !self.is_congruence(c) {
            return Err(SemimoduleError::NotCompatible);
        }
        let reps = c.representatives();
        let k = reps.len();
        let mut madd = Vec::with_capacity(k * k);
        for &x in &reps {
            for &y in &reps {
                madd.push(c.block_of(self.add(x, y)));
            }
        }
        let mut act = Vec::with_capacity(self.ring.len() * k);
        for r in self.ring.elements() {
            for &x in &reps {
                act.push(c.block_of(self.act(r, x)));
            }
        }
        Ok(Semimodule::from_parts_unchecked(self.ring.clone(), k, madd, act, c.block_of(self.zero)))
    }

    fn translations(&self) -> impl FnMut(usize, usize, &mut Vec<(usize, usize)>) + '_ {
        move |x, y, out| {
            for a in self.elements() {
                out.push((self.add(a, x), self.add(a, y)));
            }
            for r in self.ring.elements() {
                out.push((self.act(r, x), self.act(r, y)));
            }
        }
    }
}

/// Every subsemimodule as a member set, ordered by size and then members.
pub fn subsemimodules(module: &Semimodule, limit: usize) -> Result<Vec<BitSet>, SemimoduleError> {
    let bottom = module.submodule_closure([]);
    let mut seen = std::collections::HashSet::new();
    seen.insert(bottom.clone());
    let mut stack = vec![bottom];
    while let Some(s) = stack.pop() {
        for x in module.elements().filter(|&x| !s.contains(x)) {
            let t = module.submodule_closure(s.iter().chain([x]));
            if !seen.contains(&t) {
                if seen.len() >= limit {
                    return Err(SemimoduleError::SizeLimit { what: "subsemimodules", limit });
                }
                seen.insert(t.clone());
                stack.push(t);
            }
        }
    }
    let mut out: Vec<BitSet> = seen.into_iter().collect();
    out.sort_by(|a, b| a.count().cmp(&b.count()).then_with(|| a.iter().cmp(b.iter())));
    Ok(out)
}

/// Least congruence identifying `x` and `y`.
pub fn module_principal(module: &Semimodule, x: usize, y: usize) -> ModuleCongruence {
    let mut uf = close_under(UnionFind::new(module.len()), &[(x, y)], module.translations(), false);
    Congruence::from_labels(&uf.blocks())
}

/// Least congruence containing `c` (a congruence) and the pair `(x, y)`.
fn extend_congruence(module: &Semimodule, c: &ModuleCongruence, x: usize, y: usize) -> ModuleCongruence {
    let mut uf = close_under(UnionFind::from_blocks(c.blocks()), &[(x, y)], module.translations(), false);
    Congruence::from_labels(&uf.blocks())
}

/// Every congruence, as joins of principal congruences, in canonical
/// partition order.
pub fn module_congruences(module: &Semimodule, limit: usize) -> Result<Vec<ModuleCongruence>, SemimoduleError> {
    let m = module.len();
    let mut principals: Vec<ModuleCongruence> = Vec::new();
    for x in 0..m {
        for y in x + 1..m {
            principals.push(module_principal(module, x, y));
        }
    }
    principals.sort();
    principals.dedup();
    let mut seen = std::collections::BTreeSet::new();
    seen.insert(Congruence::identity(m));
    let mut stack = vec![Congruence::identity(m)];
    while let Some(c) = stack.pop() {
        for p in &principals {
            let j = c.join(p);
            if !seen.contains(&j) {
                if seen.len() >= limit {
                    return Err(SemimoduleError::SizeLimit { what: "module congruences", limit });
                }
                seen.insert(j.clone());
                stack.push(j);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// A maximal congruence other than the total one.
///
/// Starting from the identity, each pair `(x, y)` in lexicographic order is
/// added whenever the congruence it generates together with the current one
/// stays nontotal. A pair rejected once stays rejected as the current
/// congruence grows, so one pass yields a maximal element.
pub fn maximal_nontotal_congruence(module: &Semimodule) -> ModuleCongruence {
    let m = module.len();
    let mut c = Congruence::identity(m);
    for x in 0..m {
        for y in x + 1..m {
            if c.related(x, y) {
                continue;
            }
            let d = extend_congruence(module, &c, x, y);
            if !d.is_total() {
                c = d;
            }
        }
    }
    c
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Irreducibility {
    pub acts_nonzero: bool,
    pub sub_irreducible: bool,
    pub quotient_irreducible: bool,
    pub irreducible: bool,
}

pub fn irreducibility(module: &Semimodule) -> Irreducibility {
    let acts_nonzero = module.acts_nonzero();
    let m = module.len();
    let sub = acts_nonzero
        && module
            .elements()
            .filter(|&x| x != module.zero())
            .all(|x| module.submodule_closure([x]).count() == m);
    let quotient = acts_nonzero
        && (0..m).all(|x| (x + 1..m).all(|y| module_principal(module, x, y).is_total()));
    Irreducibility {
        acts_nonzero,
        sub_irreducible: sub,
        quotient_irreducible: quotient,
        irreducible: sub && quotient,
    }
}

/// Smallest subsemimodule generated by one nonzero element; ties go to the
/// least generator. Such a subsemimodule is minimal among nonzero ones.
pub fn minimal_nonzero_subsemimodule(module: &Semimodule) -> Option<BitSet> {
    module
        .elements()
        .filter(|&x| x != module.zero())
        .map(|x| module.submodule_closure([x]))
        .min_by_key(BitSet::count)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DescentStep {
    /// `R` as a module over itself.
    Regular,
    /// Quotient by a maximal nontotal congruence.
    Quotient,
    /// Restriction to a minimal nonzero subsemimodule.
    Submodule,
}

/// The sequence of semimodules visited by [`find_irreducible`].
#[derive(Clone, Debug)]
pub struct Descent {
    pub steps: Vec<(DescentStep, Semimodule)>,
}

impl Descent {
    pub fn result(&self) -> &Semimodule {
        &self.steps.last().expect("descent has at least one step").1
    }
}

/// Runs the descent from the regular module down to an irreducible one.
pub fn irreducible_descent(ring: Arc<FiniteSemiring>) -> Result<Descent, SemimoduleError> {
    if ring.has_trivial_mul() {
        return Err(SemimoduleError::PreconditionFailed("multiplication is trivial"));
    }
    if !is_congruence_simple(&ring) {
        return Err(SemimoduleError::PreconditionFailed("semiring is not congruence-simple"));
    }
    let m0 = Semimodule::regular(ring);
    let m1 = m0.quotient(&maximal_nontotal_congruence(&m0))?;
    let mut steps = vec![(DescentStep::Regular, m0), (DescentStep::Quotient, m1)];
    loop {
        let current = &steps.last().expect("nonempty").1;
        let flags = irreducibility(current);
        if flags.irreducible {
            return Ok(Descent { steps });
        }
        if !flags.acts_nonzero {
            return Err(SemimoduleError::DescentStalled { step: steps.len() });
        }
        let (kind, next) = if !flags.sub_irreducible {
            let sub = minimal_nonzero_subsemimodule(current).expect("nonzero element exists");
            (DescentStep::Submodule, current.restrict(&sub))
        } else {
            (DescentStep::Quotient, current.quotient(&maximal_nontotal_congruence(current))?)
        };
        if next.len() >= current.len() {
            return Err(SemimoduleError::DescentStalled { step: steps.len() });
        }
        steps.push((kind, next));
    }
}

/// A finite irreducible semimodule over a congruence-simple semiring with
/// nontrivial multiplication.
pub fn find_irreducible(ring: Arc<FiniteSemiring>) -> Result<Semimodule, SemimoduleError> {
    irreducible_descent(ring).map(|d| d.result().clone())
}

/// The image of `r ↦ T_r` in `End(M)`.
#[derive(Clone, Debug)]
pub struct Representation {
    pub lattice: FiniteLattice,
    /// `maps[r]` is `T_r`.
    pub maps: Vec<Endomorphism>,
    pub image: EndoSubsemiring,
    pub faithful: bool,
    pub dense: bool,
}

pub fn representation(module: &Semimodule) -> Result<Representation, SemimoduleError> {
    let lattice = module.to_lattice()?;
    let maps: Vec<Endomorphism> = module.ring.elements().map(|r| module.action_map(r)).collect();
    let mut distinct = maps.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let faithful = distinct.len() == maps.len();
    let image = EndoSubsemiring::new(&lattice, distinct).map_err(|_| SemimoduleError::NotCompatible)?;
    let dense = image.is_dense();
    Ok(Representation { lattice, maps, image, faithful, dense })
}

/// `I_x = {r | r x = 0}`.
pub fn annihilator(module: &Semimodule, x: usize) -> BitSet {
    BitSet::from_indices(
        module.ring.len(),
        module.ring.elements().filter(|&r| module.act(r, x) == module.zero()),
    )
}

/// Elements are related when their annihilators coincide.
pub fn annihilator_congruence(module: &Semimodule) -> ModuleCongruence {
    let sets: Vec<BitSet> = module.elements().map(|x| annihilator(module, x)).collect();
    Congruence::from_labels(&sets)
}

/// `A = {x | R x = {0}}`.
pub fn annulator(module: &Semimodule) -> Vec<usize> {
    module
        .elements()
        .filter(|&x| module.ring.elements().all(|r| module.act(r, x) == module.zero()))
        .collect()
}

/// Congruence `x ~ y ⟺ ∃ a, b ∈ A: x + a = y + b` for the annulator `A`,
/// and the quotient by it.
pub fn annulator_quotient(module: &Semimodule) -> Result<(Semimodule, ModuleCongruence), SemimoduleError> {
    let a = annulator(module);
    if a.len() == module.len() {
        return Err(SemimoduleError::AnnulatorIsEverything);
    }
    let shifted: Vec<BitSet> = module
        .elements()
        .map(|x| BitSet::from_indices(module.len(), a.iter().map(|&s| module.add(x, s))))
        .collect();
    let mut uf = UnionFind::new(module.len());
    for x in module.elements() {
        for y in x + 1..module.len() {
            if shifted[x].iter().any(|v| shifted[y].contains(v)) {
                uf.union(x, y);
            }
        }
    }
    let c = Congruence::from_labels(&uf.blocks());
    let q = module.quotient(&c)?;
    Ok((q, c))
}

/// Endomorphisms of `(M, +)` commuting with every action map.
#[derive(Clone, Debug)]
pub struct Commutant {
    pub members: EndoSubsemiring,
    /// Every nonzero member is bijective with inverse in the commutant.
    pub is_semifield: bool,
    /// Exactly the zero map and the identity.
    pub is_trivial: bool,
}

pub fn commutant(module: &Semimodule) -> Result<Commutant, SemimoduleError> {
    let lattice = module.to_lattice()?;
    let mut actions: Vec<Endomorphism> = module.ring.elements().map(|r| module.action_map(r)).collect();
    actions.sort_unstable();
    actions.dedup();
    let all = enumerate_endomorphisms(&lattice, DEFAULT_END_LIMIT)
        .map_err(|_| SemimoduleError::SizeLimit { what: "endomorphisms", limit: DEFAULT_END_LIMIT })?;
    let members: Vec<Endomorphism> = all
        .into_iter()
        .filter(|f| actions.iter().all(|t| f.compose(t) == t.compose(f)))
        .collect();
    let zero = Endomorphism::zero_map(&lattice);
    let id = Endomorphism::identity(&lattice);
    let is_semifield = members.iter().filter(|f| **f != zero).all(|f| {
        members.iter().any(|g| f.compose(g) == id && g.compose(f) == id)
    });
    let is_trivial = members.len() == 2 && members.contains(&zero) && members.contains(&id)
        || lattice.len() == 1;
    let members = EndoSubsemiring::new(&lattice, members).map_err(|_| SemimoduleError::NotCompatible)?;
    Ok(Commutant { members, is_semifield, is_trivial })
}
