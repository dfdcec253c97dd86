use super::FiniteLattice;

/// A join- and zero-preserving bijection between two lattices.
#[derive(Clone, Debug)]
pub struct LatticeIso {
    pub source: FiniteLattice,
    pub target: FiniteLattice,
    pub map: Vec<usize>,
}

impl LatticeIso {
    pub fn verify(&self) -> bool {
        let (s, t) = (&self.source, &self.target);
        if s.len() != t.len() || self.map.len() != s.len() {
            return false;
        }
        let mut seen = vec![false; t.len()];
        for &y in &self.map {
            if y >= t.len() || std::mem::replace(&mut seen[y], true) {
                return false;
            }
        }
        self.map[s.zero()] == t.zero()
            && s.elements().all(|x| {
                s.elements()
                    .all(|y| self.map[s.join(x, y)] == t.join(self.map[x], self.map[y]))
            })
    }

    pub fn inverse(&self) -> LatticeIso {
        let mut inv = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y] = x;
        }
        LatticeIso {
            source: self.target.clone(),
            target: self.source.clone(),
            map: inv,
        }
    }
}

/// Iso-invariant key used to prune candidate images.
pub(crate) fn element_key(l: &FiniteLattice, x: usize) -> (usize, usize, usize, usize, usize) {
    let lower_covers = l
        .elements()
        .filter(|&y| y != x && l.leq(y, x) && !l.elements().any(|z| z != x && z != y && l.leq(y, z) && l.leq(z, x)))
        .count();
    let upper_covers = l
        .elements()
        .filter(|&y| y != x && l.leq(x, y) && !l.elements().any(|z| z != x && z != y && l.leq(x, z) && l.leq(z, y)))
        .count();
    (l.height(x), l.down_set_size(x), l.up_set_size(x), lower_covers, upper_covers)
}

/// Searches for an isomorphism `a → b` by backtracking over elements in
/// increasing down-set size, pairing only elements with equal invariants.
pub fn lattice_iso(a: &FiniteLattice, b: &FiniteLattice) -> Option<LatticeIso> {
    let n = a.len();
    if n != b.len() {
        return None;
    }
    let ka: Vec<_> = a.elements().map(|x| element_key(a, x)).collect();
    let kb: Vec<_> = b.elements().map(|x| element_key(b, x)).collect();
    let mut sa = ka.clone();
    let mut sb = kb.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return None;
    }
    let mut order: Vec<usize> = a.elements().collect();
    order.sort_by_key(|&x| (ka[x].1, x));
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if search(a, b, &ka, &kb, &order, 0, &mut map, &mut used) {
        let iso = LatticeIso {
            source: a.clone(),
            target: b.clone(),
            map,
        };
        debug_assert!(iso.verify());
        Some(iso)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn search(
    a: &FiniteLattice,
    b: &FiniteLattice,
    ka: &[(usize, usize, usize, usize, usize)],
    kb: &[(usize, usize, usize, usize, usize)],
    order: &[usize],
    depth: usize,
    map: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    if depth == order.len() {
        return a
            .elements()
            .all(|x| a.elements().all(|y| map[a.join(x, y)] == b.join(map[x], map[y])));
    }
    let x = order[depth];
    for y in b.elements() {
        if used[y] || kb[y] != ka[x] {
            continue;
        }
        let consistent = order[..depth].iter().all(|&w| {
            let (mw, j) = (map[w], a.join(x, w));
            a.leq(w, x) == b.leq(mw, y)
                && a.leq(x, w) == b.leq(y, mw)
                && (map[j] == usize::MAX || map[j] == b.join(y, mw))
        });
        if !consistent {
            continue;
        }
        map[x] = y;
        used[y] = true;
        if search(a, b, ka, kb, order, depth + 1, map, used) {
            return true;
        }
        map[x] = usize::MAX;
        used[y] = false;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    #[test]
    fn identity_iso() {
        for l in all_fixtures() {
            let iso = lattice_iso(&l, &l).unwrap();
            assert!(iso.verify());
        }
        // the chain has only the identity automorphism
        let c = chain(4);
        assert_eq!(lattice_iso(&c, &c).unwrap().map, vec![0, 1, 2, 3]);
    }

    #[test]
    fn non_isomorphic_pairs() {
        assert!(lattice_iso(&chain(3), &diamond()).is_none());
        assert!(lattice_iso(&chain(4), &diamond()).is_none());
        assert!(lattice_iso(&n5(), &m3()).is_none());
    }

    #[test]
    fn symmetric() {
        let fx = all_fixtures();
        for x in &fx {
            for y in &fx {
                assert_eq!(lattice_iso(x, y).is_some(), lattice_iso(y, x).is_some());
            }
        }
    }

    #[test]
    fn relabeled_copies_are_found() {
        let l = n5();
        let perm = vec![3, 0, 4, 1, 2];
        let r = l.relabel(&perm);
        let iso = lattice_iso(&l, &r).unwrap();
        assert!(iso.verify());
        assert!(iso.inverse().verify());
    }
}
