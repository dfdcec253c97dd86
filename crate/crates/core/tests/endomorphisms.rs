use dense_semirings::bitset::BitSet;
use dense_semirings::endo::{
    all_subsemirings, dense_closure, elementary, end_semiring, enumerate_sr, is_endomorphism, transpose, Endomorphism,
};
use dense_semirings::lattice::enumerate_lattices;
use dense_semirings::lattice::fixtures::{all_fixtures, chain, diamond};
use dense_semirings::FiniteLattice;
use proptest::prelude::*;

/// Every map fixing zero, filtered by the join-preservation test.
fn brute_force_end(l: &FiniteLattice) -> Vec<Vec<usize>> {
    let n = l.len();
    let mut out = Vec::new();
    let mut img = vec![0; n];
    let total = n.pow((n - 1) as u32);
    for code in 0..total {
        let mut c = code;
        for x in 0..n {
            if x == l.zero() {
                img[x] = l.zero();
            } else {
                img[x] = c % n;
                c /= n;
            }
        }
        let preserves = l.elements().all(|x| l.elements().all(|y| img[l.join(x, y)] == l.join(img[x], img[y])));
        if preserves {
            out.push(img.clone());
        }
    }
    out.sort();
    out
}

#[test]
fn end_matches_brute_force() {
    for l in enumerate_lattices(5).unwrap() {
        let end = end_semiring(&l).unwrap();
        let ours: Vec<Vec<usize>> = end.elements().iter().map(|f| f.image().to_vec()).collect();
        assert_eq!(ours, brute_force_end(&l));
        assert!(ours.iter().all(|f| is_endomorphism(&l, f)));
    }
}

/// Every sum of elementary maps, by saturating under pointwise join; the
/// set of such sums is closed under composition by the triple law.
fn sums_of_elementary(l: &FiniteLattice) -> Vec<Vec<usize>> {
    let mut set: std::collections::BTreeSet<Vec<usize>> =
        l.elements().flat_map(|a| l.elements().map(move |b| (a, b))).map(|(a, b)| elementary(l, a, b).image().to_vec()).collect();
    loop {
        let items: Vec<Vec<usize>> = set.iter().cloned().collect();
        let mut grew = false;
        for f in &items {
            for g in &items {
                let h: Vec<usize> = (0..l.len()).map(|x| l.join(f[x], g[x])).collect();
                grew |= set.insert(h);
            }
        }
        if !grew {
            return set.into_iter().collect();
        }
    }
}

#[test]
fn dense_closure_is_sums_of_elementary_maps() {
    for l in enumerate_lattices(5).unwrap().into_iter().filter(|l| l.len() > 1) {
        let closure: Vec<Vec<usize>> = dense_closure(&l).unwrap().members().iter().map(|f| f.image().to_vec()).collect();
        assert_eq!(closure, sums_of_elementary(&l));
    }
}

#[test]
fn all_subsemirings_of_end_diamond_brute_force() {
    let end = end_semiring(&diamond()).unwrap();
    let r = &end.semiring;
    let n = r.len();
    let others: Vec<usize> = r.elements().filter(|&x| x != r.zero()).collect();
    let mut oracle = Vec::new();
    for mask in 0u32..(1 << others.len()) {
        let mut members = vec![r.zero()];
        members.extend(others.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x));
        let set = BitSet::from_indices(n, members.iter().copied());
        let closed = members.iter().all(|&x| members.iter().all(|&y| set.contains(r.add(x, y)) && set.contains(r.mul(x, y))));
        if closed {
            oracle.push(set);
        }
    }
    let mut ours = all_subsemirings(r, 100_000).unwrap();
    ours.sort();
    oracle.sort();
    assert_eq!(ours.len(), 222);
    assert_eq!(ours, oracle);
}

#[test]
fn triple_law_and_absorbing_map_on_fixtures() {
    for l in all_fixtures() {
        let end = end_semiring(&l).unwrap();
        let top_map = elementary(&l, l.zero(), l.top());
        for f in end.elements() {
            assert_eq!(top_map.add(&l, f), top_map);
            for a in l.elements() {
                for b in l.elements() {
                    let fe = f.compose(&elementary(&l, a, b));
                    assert_eq!(fe, elementary(&l, a, f.apply(b)));
                    for c in l.elements() {
                        for d in l.elements() {
                            let expected = if l.leq(f.apply(b), c) { Endomorphism::zero_map(&l) } else { elementary(&l, a, d) };
                            assert_eq!(elementary(&l, c, d).compose(&fe), expected);
                        }
                    }
                }
            }
        }
    }
}

/// The criterion from the proof that condition (D) forces `SR(M)` to be a
/// singleton: the sum of all `e_{a,b} ≤ id` is the identity.
#[test]
fn singleton_family_iff_elementary_maps_below_identity_sum_to_it() {
    for l in enumerate_lattices(5).unwrap().into_iter().filter(|l| l.len() > 1) {
        let id = Endomorphism::identity(&l);
        let mut sum = Endomorphism::zero_map(&l);
        for a in l.elements() {
            for b in l.elements() {
                let e = elementary(&l, a, b);
                if e.leq(&l, &id) {
                    sum = sum.add(&l, &e);
                }
            }
        }
        let singleton = enumerate_sr(&l).unwrap().len() == 1;
        assert_eq!(sum == id, singleton, "{:?}", l.covers());
        assert_eq!(singleton, l.condition_d());
    }
}

#[test]
fn every_dense_subsemiring_of_small_lattices_is_dense_and_simple() {
    use dense_semirings::semiring::is_congruence_simple;
    for l in enumerate_lattices(5).unwrap().into_iter().filter(|l| l.len() > 1) {
        for s in enumerate_sr(&l).unwrap() {
            assert!(s.is_dense());
            assert!(is_congruence_simple(&s.to_semiring()));
        }
    }
}

/// `e_a ∘ f = e_{f*(a)}` for the homs `e_a : M → {0,1}`, computed from the
/// enumerated homs rather than the adjoint formula.
fn transpose_via_homs(l: &FiniteLattice, f: &Endomorphism) -> Vec<usize> {
    let h = l.hom_to_l2();
    l.elements()
        .map(|a| {
            let ea = &h.homs[h.e[a]];
            let composed: Vec<u8> = l.elements().map(|x| ea[f.apply(x)]).collect();
            let idx = h.homs.iter().position(|v| *v == composed).expect("composite is a hom");
            h.e.iter().position(|&i| i == idx).expect("every hom is some e_b")
        })
        .collect()
}

fn fixture_and_maps() -> impl Strategy<Value = (usize, usize, usize)> {
    (0..9usize).prop_flat_map(|i| {
        let n = end_semiring(&all_fixtures()[i]).unwrap().len();
        (Just(i), 0..n, 0..n)
    })
}

proptest! {
    #[test]
    fn transpose_is_an_additive_anti_homomorphism((i, fi, gi) in fixture_and_maps()) {
        let l = &all_fixtures()[i];
        let end = end_semiring(l).unwrap();
        let d = l.dual();
        let (f, g) = (end.element(fi), end.element(gi));
        let (ft, gt) = (transpose(l, f), transpose(l, g));
        prop_assert!(is_endomorphism(&d, ft.image()));
        prop_assert_eq!(ft.image().to_vec(), transpose_via_homs(l, f));
        prop_assert_eq!(transpose(l, &f.compose(g)), gt.compose(&ft));
        prop_assert_eq!(transpose(l, &f.add(l, g)), ft.add(&d, &gt));
        prop_assert_eq!(transpose(&d, &ft), f.clone());
    }
}

#[test]
fn transpose_is_a_bijection_onto_end_of_dual() {
    for l in all_fixtures().into_iter().chain([chain(6)]) {
        let end = end_semiring(&l).unwrap();
        let dual_end = end_semiring(&l.dual()).unwrap();
        let mut images: Vec<Endomorphism> = end.elements().iter().map(|f| transpose(&l, f)).collect();
        images.sort();
        images.dedup();
        assert_eq!(images.as_slice(), dual_end.elements());
    }
}
