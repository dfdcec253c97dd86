//! Union-find over element indices and the congruence closure built on it.

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    classes: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
            classes: n,
        }
    }

    /// Starts from an existing partition given as block ids.
    pub fn from_blocks(blocks: &[usize]) -> Self {
        let mut uf = UnionFind::new(blocks.len());
        let mut first: Vec<Option<usize>> = vec![None; blocks.len()];
        for (x, &b) in blocks.iter().enumerate() {
            match first[b] {
                Some(rep) => {
                    uf.union(rep, x);
                }
                None => first[b] = Some(x),
            }
        }
        uf
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `true` if two distinct classes were merged.
    pub fn union(&mut self, x: usize, y: usize) -> bool {
        let (mut rx, mut ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        if self.size[rx] < self.size[ry] {
            std::mem::swap(&mut rx, &mut ry);
        }
        self.parent[ry] = rx;
        self.size[rx] += self.size[ry];
        self.classes -= 1;
        true
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    /// Block ids numbered by first occurrence.
    pub fn blocks(&mut self) -> Vec<usize> {
        let n = self.parent.len();
        let mut id_of_root = vec![usize::MAX; n];
        let mut next = 0;
        (0..n)
            .map(|x| {
                let r = self.find(x);
                if id_of_root[r] == usize::MAX {
                    id_of_root[r] = next;
                    next += 1;
                }
                id_of_root[r]
            })
            .collect()
    }
}

/// A partition of `0..n`, stored as block ids numbered by first occurrence.
///
/// Semiring congruences and semimodule congruences share this type; which
/// operations it is compatible with is checked by the owning structure.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence {
    blocks: Vec<usize>,
}

/// Congruence of a semimodule. Same representation as [`Congruence`].
pub type ModuleCongruence = Congruence;

impl Congruence {
    pub fn identity(n: usize) -> Self {
        Congruence {
            blocks: (0..n).collect(),
        }
    }

    pub fn total(n: usize) -> Self {
        Congruence { blocks: vec![0; n] }
    }

    /// Normalizes arbitrary block labels to first-occurrence numbering.
    pub fn from_labels<T: Eq + std::hash::Hash + Clone>(labels: &[T]) -> Self {
        let mut ids = std::collections::HashMap::new();
        let blocks = labels
            .iter()
            .map(|l| {
                let next = ids.len();
                *ids.entry(l.clone()).or_insert(next)
            })
            .collect();
        Congruence { blocks }
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.blocks[x]
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.iter().max().map_or(0, |m| m + 1)
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.blocks[x] == self.blocks[y]
    }

    pub fn is_identity(&self) -> bool {
        self.num_blocks() == self.blocks.len()
    }

    pub fn is_total(&self) -> bool {
        self.num_blocks() <= 1
    }

    /// One representative (the least element) per block, in block order.
    pub fn representatives(&self) -> Vec<usize> {
        let mut reps = vec![usize::MAX; self.num_blocks()];
        for (x, &b) in self.blocks.iter().enumerate() {
            if reps[b] == usize::MAX {
                reps[b] = x;
            }
        }
        reps
    }

    /// Members of each block, in block order.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.num_blocks()];
        for (x, &b) in self.blocks.iter().enumerate() {
            classes[b].push(x);
        }
        classes
    }

    /// Least partition coarser than both.
    pub fn join(&self, other: &Congruence) -> Congruence {
        let mut uf = UnionFind::from_blocks(&self.blocks);
        for (x, y) in pairs_of(&other.blocks) {
            uf.union(x, y);
        }
        Congruence { blocks: uf.blocks() }
    }

    /// `self ⊆ other` as relations.
    pub fn refines(&self, other: &Congruence) -> bool {
        pairs_of(&self.blocks).all(|(x, y)| other.related(x, y))
    }
}

/// Spanning pairs (representative, member) of every block.
fn pairs_of(blocks: &[usize]) -> impl Iterator<Item = (usize, usize)> + '_ {
    let mut rep = vec![usize::MAX; blocks.len()];
    blocks.iter().enumerate().filter_map(move |(x, &b)| {
        if rep[b] == usize::MAX {
            rep[b] = x;
            None
        } else {
            Some((rep[b], x))
        }
    })
}

/// Least equivalence containing `start` and the `seeds` pairs that is closed
/// under the unary translations produced by `translate`.
///
/// `start` must already be closed under the translations; only merges made
/// here are propagated. `translate(x, y, out)` pushes the image pairs of
/// `(x, y)` under every basic translation.
pub(crate) fn close_under<F>(
    start: UnionFind,
    seeds: &[(usize, usize)],
    mut translate: F,
    stop_when_total: bool,
) -> UnionFind
where
    F: FnMut(usize, usize, &mut Vec<(usize, usize)>),
{
    let mut uf = start;
    let mut pending: Vec<(usize, usize)> = seeds.to_vec();
    let mut images = Vec::new();
    while let Some((x, y)) = pending.pop() {
        if uf.union(x, y) {
            if stop_when_total && uf.classes() == 1 {
                break;
            }
            images.clear();
            translate(x, y, &mut images);
            pending.extend(images.iter().copied().filter(|(a, b)| a != b));
        }
    }
    uf
}
