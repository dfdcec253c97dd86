use dense_semirings::lattice::fixtures::all_fixtures;
use dense_semirings::lattice::{canonical_form, enumerate_lattices, lattice_iso};
use dense_semirings::FiniteLattice;
use proptest::prelude::*;

/// All permutations of `0..n` (Heap's algorithm).
fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(p.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, p, out);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            p.swap(j, k - 1);
        }
    }
    let mut out = Vec::new();
    heap(n, &mut (0..n).collect(), &mut out);
    out
}

fn isomorphic_brute(a: &[usize], b: &[usize], n: usize) -> bool {
    permutations(n)
        .iter()
        .any(|p| (0..n).all(|x| (0..n).all(|y| p[a[x * n + y]] == b[p[x] * n + p[y]])))
}

/// Every order relation on `0..n` with bottom 0 and top n-1 whose pairs all
/// have a least upper bound, as join tables, one per isomorphism class.
fn brute_force_lattices(n: usize) -> Vec<Vec<usize>> {
    if n == 1 {
        return vec![vec![0]];
    }
    let middle: Vec<(usize, usize)> =
        (1..n - 1).flat_map(|i| (1..n - 1).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for mask in 0u32..(1 << middle.len()) {
        let mut leq = vec![false; n * n];
        for x in 0..n {
            leq[x * n + x] = true;
            leq[x] = true;
            leq[x * n + n - 1] = true;
        }
        for (k, &(i, j)) in middle.iter().enumerate() {
            if mask >> k & 1 == 1 {
                leq[i * n + j] = true;
            }
        }
        let antisym = (0..n).all(|x| (0..n).all(|y| x == y || !(leq[x * n + y] && leq[y * n + x])));
        let trans = (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| !(leq[x * n + y] && leq[y * n + z]) || leq[x * n + z])));
        if !antisym || !trans {
            continue;
        }
        let mut join = vec![0; n * n];
        let mut ok = true;
        'pairs: for x in 0..n {
            for y in 0..n {
                let ubs: Vec<usize> = (0..n).filter(|&z| leq[x * n + z] && leq[y * n + z]).collect();
                match ubs.iter().find(|&&u| ubs.iter().all(|&v| leq[u * n + v])) {
                    Some(&u) => join[x * n + y] = u,
                    None => {
                        ok = false;
                        break 'pairs;
                    }
                }
            }
        }
        if ok && !classes.iter().any(|c| isomorphic_brute(c, &join, n)) {
            classes.push(join);
        }
    }
    classes
}

#[test]
fn enumeration_matches_brute_force_up_to_five() {
    let all = enumerate_lattices(5).unwrap();
    for n in 1..=5 {
        let oracle = brute_force_lattices(n);
        let ours: Vec<&FiniteLattice> = all.iter().filter(|l| l.len() == n).collect();
        assert_eq!(ours.len(), oracle.len(), "size {n}");
        for table in &oracle {
            let hits = ours.iter().filter(|l| isomorphic_brute(l.join_table(), table, n)).count();
            assert_eq!(hits, 1, "size {n}: oracle class matched {hits} times");
        }
    }
}

#[test]
fn enumeration_counts_to_seven() {
    let all = enumerate_lattices(7).unwrap();
    let counts: Vec<usize> = (1..=7).map(|n| all.iter().filter(|l| l.len() == n).count()).collect();
    assert_eq!(counts, vec![1, 1, 1, 2, 5, 15, 53]);
}

#[test]
fn condition_d_iff_distributive_to_six() {
    for l in enumerate_lattices(6).unwrap() {
        assert_eq!(l.condition_d(), l.is_distributive(), "{:?}", l.covers());
    }
}

#[test]
fn meets_are_infima_on_all_small_lattices() {
    for l in enumerate_lattices(6).unwrap() {
        for x in l.elements() {
            for y in l.elements() {
                let m = l.meet(x, y);
                assert!(l.leq(m, x) && l.leq(m, y));
                assert!(l.elements().filter(|&z| l.leq(z, x) && l.leq(z, y)).all(|z| l.leq(z, m)));
            }
        }
    }
}

#[test]
fn hom_to_l2_turns_meets_into_joins() {
    for l in enumerate_lattices(6).unwrap() {
        let h = l.hom_to_l2();
        assert_eq!(h.lattice.len(), l.len());
        for a in l.elements() {
            for b in l.elements() {
                assert_eq!(h.e[l.meet(a, b)], h.lattice.join(h.e[a], h.e[b]));
            }
        }
    }
}

#[test]
fn ring_of_sets_embedding_for_distributive_lattices() {
    for l in enumerate_lattices(6).unwrap().into_iter().filter(FiniteLattice::is_distributive) {
        let r = l.embed_ring_of_sets().unwrap();
        let u = r.union_lattice().expect("images closed under union");
        assert!(lattice_iso(&u, &l).is_some());
    }
}

fn lattice_and_perm() -> impl Strategy<Value = (FiniteLattice, Vec<usize>)> {
    let lattices = enumerate_lattices(6).unwrap();
    (0..lattices.len()).prop_flat_map(move |i| {
        let l = lattices[i].clone();
        let n = l.len();
        (Just(l), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

proptest! {
    #[test]
    fn canonical_form_ignores_labels((l, perm) in lattice_and_perm()) {
        let relabelled = l.relabel(&perm);
        let (a, b) = (canonical_form(&relabelled).0, canonical_form(&l).0);
        prop_assert_eq!(a.join_table(), b.join_table());
        let iso = lattice_iso(&l, &relabelled).unwrap();
        prop_assert!(iso.verify());
    }

    #[test]
    fn dual_swaps_tables((l, perm) in lattice_and_perm()) {
        let l = l.relabel(&perm);
        let d = l.dual();
        prop_assert_eq!(d.join_table(), l.meet_table());
        prop_assert_eq!(d.meet_table(), l.join_table());
        let dd = d.dual();
        prop_assert_eq!(dd.join_table(), l.join_table());
    }
}

#[test]
fn fixtures_are_pairwise_distinct() {
    let f = all_fixtures();
    for i in 0..f.len() {
        for j in i + 1..f.len() {
            assert!(lattice_iso(&f[i], &f[j]).is_none());
        }
    }
}
