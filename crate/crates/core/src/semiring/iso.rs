//! Isomorphism search between finite semirings.
//!
//! Elements of both semirings are first colored by iso-invariant
//! statistics and the coloring is refined jointly until stable. A generating
//! set of the source is then chosen greedily (smallest color classes first)
//! and the search backtracks over images of the generators only; every other
//! image is forced by the operations. Each generator step closes the source
//! subsemiring generated so far and checks the partial map on it.

use std::collections::BTreeMap;

use super::FiniteSemiring;

/// A bijection `a → b` preserving `+`, `·` and zero.
pub fn semiring_iso(a: &FiniteSemiring, b: &FiniteSemiring) -> Option<Vec<usize>> {
    if a.len() != b.len() {
        return None;
    }
    let (ca, cb) = joint_colors(a, b)?;
    let plan = Plan::new(a, &ca);
    let mut state = Search {
        a,
        b,
        ca: &ca,
        cb: &cb,
        map: vec![usize::MAX; a.len()],
        used: vec![false; b.len()],
    };
    state.map[a.zero()] = b.zero();
    state.used[b.zero()] = true;
    if ca[a.zero()] != cb[b.zero()] {
        return None;
    }
    if state.run(&plan, 0) {
        debug_assert!(is_iso(a, b, &state.map));
        Some(state.map)
    } else {
        None
    }
}

/// A bijection `a → b` preserving `+` and zero and reversing `·`.
pub fn semiring_anti_iso(a: &FiniteSemiring, b: &FiniteSemiring) -> Option<Vec<usize>> {
    semiring_iso(a, &b.opposite())
}

fn is_iso(a: &FiniteSemiring, b: &FiniteSemiring, map: &[usize]) -> bool {
    map[a.zero()] == b.zero()
        && a.elements().all(|x| {
            a.elements().all(|y| {
                map[a.add(x, y)] == b.add(map[x], map[y]) && map[a.mul(x, y)] == b.mul(map[x], map[y])
            })
        })
}

fn initial_key(r: &FiniteSemiring, x: usize) -> Vec<usize> {
    let count = |f: &dyn Fn(usize) -> bool| r.elements().filter(|&y| f(y)).count();
    let distinct = |f: &dyn Fn(usize) -> usize| {
        let mut v: Vec<usize> = r.elements().map(f).collect();
        v.sort_unstable();
        v.dedup();
        v.len()
    };
    vec![
        usize::from(x == r.zero()),
        usize::from(r.add(x, x) == x),
        usize::from(r.mul(x, x) == x),
        count(&|y| r.add(x, y) == x),
        count(&|y| r.add(x, y) == y),
        count(&|y| r.mul(x, y) == r.zero()),
        count(&|y| r.mul(y, x) == r.zero()),
        count(&|y| r.mul(x, y) == y),
        count(&|y| r.mul(y, x) == y),
        distinct(&|y| r.mul(x, y)),
        distinct(&|y| r.mul(y, x)),
    ]
}

/// Jointly refined colors; `None` if the color histograms differ.
fn joint_colors(a: &FiniteSemiring, b: &FiniteSemiring) -> Option<(Vec<usize>, Vec<usize>)> {
    let ka: Vec<Vec<usize>> = a.elements().map(|x| initial_key(a, x)).collect();
    let kb: Vec<Vec<usize>> = b.elements().map(|x| initial_key(b, x)).collect();
    let (mut ca, mut cb) = number_jointly(&ka, &kb)?;
    let mut classes = count_colors(&ca);
    loop {
        let sa: Vec<_> = a.elements().map(|x| signature(a, &ca, x)).collect();
        let sb: Vec<_> = b.elements().map(|x| signature(b, &cb, x)).collect();
        let (na, nb) = number_jointly(&sa, &sb)?;
        let refined = count_colors(&na);
        ca = na;
        cb = nb;
        if refined == classes {
            return Some((ca, cb));
        }
        classes = refined;
    }
}

fn signature(r: &FiniteSemiring, c: &[usize], x: usize) -> (usize, Vec<[usize; 4]>) {
    let mut rows: Vec<[usize; 4]> = r
        .elements()
        .map(|y| [c[y], c[r.add(x, y)], c[r.mul(x, y)], c[r.mul(y, x)]])
        .collect();
    rows.sort_unstable();
    (c[x], rows)
}

fn number_jointly<K: Ord + Clone>(ka: &[K], kb: &[K]) -> Option<(Vec<usize>, Vec<usize>)> {
    let mut hist: BTreeMap<&K, (usize, usize)> = BTreeMap::new();
    for k in ka {
        hist.entry(k).or_default().0 += 1;
    }
    for k in kb {
        hist.entry(k).or_default().1 += 1;
    }
    if hist.values().any(|(x, y)| x != y) {
        return None;
    }
    let ids: BTreeMap<&K, usize> = hist.keys().enumerate().map(|(i, k)| (*k, i)).collect();
    Some((ka.iter().map(|k| ids[k]).collect(), kb.iter().map(|k| ids[k]).collect()))
}

fn count_colors(c: &[usize]) -> usize {
    c.iter().max().map_or(0, |m| m + 1)
}

#[derive(Clone, Copy)]
enum Op {
    Add,
    Mul,
}

/// Generators of the source in search order, each followed by the
/// derivation steps `(z, op, x, y)` that close the generated subsemiring.
struct Plan {
    levels: Vec<(usize, Vec<(usize, Op, usize, usize)>)>,
}

impl Plan {
    fn new(a: &FiniteSemiring, colors: &[usize]) -> Self {
        let n = a.len();
        let mut class_size = vec![0usize; n];
        for &c in colors {
            class_size[c] += 1;
        }
        let mut known = vec![false; n];
        known[a.zero()] = true;
        let mut members = vec![a.zero()];
        let mut levels = Vec::new();
        while members.len() < n {
            let g = (0..n)
                .filter(|&x| !known[x])
                .min_by_key(|&x| (class_size[colors[x]], x))
                .expect("unknown element remains");
            known[g] = true;
            members.push(g);
            let mut steps = Vec::new();
            let mut frontier = members.len() - 1;
            while frontier < members.len() {
                let u = members[frontier];
                frontier += 1;
                let mut i = 0;
                while i < members.len() {
                    let v = members[i];
                    i += 1;
                    for (z, op, x, y) in [
                        (a.add(u, v), Op::Add, u, v),
                        (a.mul(u, v), Op::Mul, u, v),
                        (a.mul(v, u), Op::Mul, v, u),
                    ] {
                        if !known[z] {
                            known[z] = true;
                            members.push(z);
                            steps.push((z, op, x, y));
                        }
                    }
                }
            }
            levels.push((g, steps));
        }
        Plan { levels }
    }
}

struct Search<'a> {
    a: &'a FiniteSemiring,
    b: &'a FiniteSemiring,
    ca: &'a [usize],
    cb: &'a [usize],
    map: Vec<usize>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn run(&mut self, plan: &Plan, level: usize) -> bool {
        if level == plan.levels.len() {
            return true;
        }
        let (g, steps) = &plan.levels[level];
        for cand in self.b.elements() {
            if self.used[cand] || self.cb[cand] != self.ca[*g] {
                continue;
            }
            let mut assigned = vec![*g];
            self.map[*g] = cand;
            self.used[cand] = true;
            let mut ok = true;
            for &(z, op, x, y) in steps {
                let img = match op {
                    Op::Add => self.b.add(self.map[x], self.map[y]),
                    Op::Mul => self.b.mul(self.map[x], self.map[y]),
                };
                if self.used[img] || self.cb[img] != self.ca[z] {
                    ok = false;
                    break;
                }
                self.map[z] = img;
                self.used[img] = true;
                assigned.push(z);
            }
            if ok && self.consistent(&assigned) && self.run(plan, level + 1) {
                return true;
            }
            for &z in &assigned {
                self.used[self.map[z]] = false;
                self.map[z] = usize::MAX;
            }
        }
        false
    }

    /// Checks the map on all pairs involving a newly assigned element. The
    /// mapped set is closed in the source, so every result is mapped.
    fn consistent(&self, fresh: &[usize]) -> bool {
        let (a, b, map) = (self.a, self.b, &self.map);
        fresh.iter().all(|&x| {
            a.elements().filter(|&y| map[y] != usize::MAX).all(|y| {
                map[a.add(x, y)] == b.add(map[x], map[y])
                    && map[a.mul(x, y)] == b.mul(map[x], map[y])
                    && map[a.mul(y, x)] == b.mul(map[y], map[x])
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::{f2, r2a, r2b};
    use super::*;

    fn permuted(r: &FiniteSemiring, perm: &[usize]) -> FiniteSemiring {
        let n = r.len();
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                add[perm[x] * n + perm[y]] = perm[r.add(x, y)];
                mul[perm[x] * n + perm[y]] = perm[r.mul(x, y)];
            }
        }
        FiniteSemiring::from_flat(n, add, mul, perm[r.zero()]).unwrap()
    }

    #[test]
    fn finds_relabelings() {
        let p = r2b().direct_product(&r2b()).direct_product(&r2a());
        let perm = vec![5, 2, 7, 0, 1, 6, 3, 4];
        let q = permuted(&p, &perm);
        let map = semiring_iso(&p, &q).unwrap();
        assert!(is_iso(&p, &q, &map));
    }

    #[test]
    fn distinguishes_order_two() {
        assert!(semiring_iso(&r2a(), &r2b()).is_none());
        assert!(semiring_iso(&r2b(), &f2()).is_none());
        assert!(semiring_iso(&r2b(), &r2b()).is_some());
        assert!(semiring_anti_iso(&r2b(), &r2b()).is_some());
    }
}
