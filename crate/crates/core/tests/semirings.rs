use dense_semirings::endo::{end_semiring, enumerate_sr};
use dense_semirings::lattice::fixtures::{all_fixtures, chain, diamond};
use dense_semirings::lattice::lattice_iso;
use dense_semirings::semiring::{
    f2, is_congruence, is_congruence_simple, monico_congruence, principal_congruence, quotient_semiring, r2a, r2b,
    semiring_anti_iso, semiring_iso,
};
use dense_semirings::{Congruence, FiniteSemiring};
use proptest::prelude::*;

/// All set partitions of `0..n` as restricted growth strings.
fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max + 1 {
            cur.push(b);
            go(i + 1, n, cur, max.max(b), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        go(1, n, &mut vec![0], 0, &mut out);
    }
    out
}

fn compatible(r: &FiniteSemiring, labels: &[usize]) -> bool {
    r.elements().all(|x| {
        r.elements().all(|y| {
            labels[x] != labels[y]
                || r.elements().all(|a| {
                    labels[r.add(a, x)] == labels[r.add(a, y)]
                        && labels[r.mul(a, x)] == labels[r.mul(a, y)]
                        && labels[r.mul(x, a)] == labels[r.mul(y, a)]
                })
        })
    })
}

fn small_semirings() -> Vec<FiniteSemiring> {
    let b = r2b();
    vec![
        r2a(),
        r2b(),
        f2(),
        b.direct_product(&b),
        r2a().direct_product(&r2b()),
        f2().direct_product(&r2b()),
        end_semiring(&chain(3)).unwrap().semiring,
        b.direct_product(&r2a()).direct_product(&r2a()),
    ]
}

#[test]
fn simplicity_matches_exhaustive_partition_search() {
    for r in small_semirings() {
        let proper: Vec<Vec<usize>> = partitions(r.len())
            .into_iter()
            .filter(|p| p.iter().any(|&b| b != p[0]) && p.iter().enumerate().any(|(i, &b)| p[..i].contains(&b)))
            .filter(|p| compatible(&r, p))
            .collect();
        assert_eq!(is_congruence_simple(&r), proper.is_empty(), "order {}", r.len());
        for p in &proper {
            let c = Congruence::from_labels(p);
            assert!(is_congruence(&r, &c).is_ok());
            let q = quotient_semiring(&r, &c).unwrap();
            assert!(q.len() > 1 && q.len() < r.len());
            for x in r.elements() {
                for y in r.elements() {
                    let (bx, by) = (c.block_of(x), c.block_of(y));
                    assert_eq!(q.add(bx, by), c.block_of(r.add(x, y)));
                    assert_eq!(q.mul(bx, by), c.block_of(r.mul(x, y)));
                }
            }
        }
    }
}

#[test]
fn principal_congruences_are_least() {
    for r in small_semirings() {
        for x in r.elements() {
            for y in r.elements() {
                let c = principal_congruence(&r, x, y);
                assert!(c.related(x, y));
                assert!(is_congruence(&r, &c).is_ok());
                for p in partitions(r.len()).into_iter().filter(|p| p[x] == p[y] && compatible(&r, p)) {
                    assert!(c.refines(&Congruence::from_labels(&p)));
                }
            }
        }
    }
}

fn family_semirings() -> Vec<(String, Vec<FiniteSemiring>)> {
    all_fixtures()
        .iter()
        .map(|l| (l.name().unwrap().to_string(), enumerate_sr(l).unwrap().iter().map(|s| s.to_semiring()).collect()))
        .collect()
}

#[test]
fn structure_of_simple_semirings() {
    for (name, rings) in family_semirings() {
        for r in &rings {
            assert!(!r.is_ring());
            assert!(r.is_add_idempotent(), "{name}/{}", r.len());
            let c = monico_congruence(r);
            assert!(is_congruence(r, &c).is_ok());
            assert!(c.is_identity(), "{name}/{}", r.len());
            let allowed: Vec<usize> = std::iter::once(r.zero()).chain(r.one()).collect();
            assert!(r.center().iter().all(|z| allowed.contains(z)), "{name}/{}: center {:?}", r.len(), r.center());
        }
    }
    for r in small_semirings() {
        let c = monico_congruence(&r);
        assert!(is_congruence(&r, &c).is_ok());
        if is_congruence_simple(&r) && r.has_trivial_mul() {
            assert!(r.len() <= 2);
        }
    }
    let trivial4 = r2a().direct_product(&r2a());
    assert!(trivial4.has_trivial_mul() && !is_congruence_simple(&trivial4));
}

#[test]
fn isomorphic_members_have_isomorphic_monoids() {
    let all: Vec<FiniteSemiring> = family_semirings().into_iter().flat_map(|(_, r)| r).collect();
    for a in &all {
        for b in &all {
            if a.len() == b.len() && semiring_iso(a, b).is_some() {
                let (ma, mb) = (a.recover_monoid().unwrap(), b.recover_monoid().unwrap());
                assert!(lattice_iso(&ma, &mb).is_some());
            }
        }
    }
}

#[test]
fn recovered_monoid_of_end_is_the_lattice() {
    for l in all_fixtures().into_iter().chain([diamond()]) {
        let r = end_semiring(&l).unwrap().semiring;
        assert!(lattice_iso(&r.recover_monoid().unwrap(), &l).is_some());
    }
}

fn permuted(r: &FiniteSemiring, p: &[usize]) -> FiniteSemiring {
    let n = r.len();
    let mut add = vec![0; n * n];
    let mut mul = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            add[p[x] * n + p[y]] = p[r.add(x, y)];
            mul[p[x] * n + p[y]] = p[r.mul(x, y)];
        }
    }
    FiniteSemiring::from_flat(n, add, mul, p[r.zero()]).unwrap()
}

fn is_iso(a: &FiniteSemiring, b: &FiniteSemiring, f: &[usize]) -> bool {
    a.elements().all(|x| a.elements().all(|y| f[a.add(x, y)] == b.add(f[x], f[y]) && f[a.mul(x, y)] == b.mul(f[x], f[y])))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn iso_search_finds_relabellings(which in 0..3usize, seed in Just((0..20usize).collect::<Vec<_>>()).prop_shuffle()) {
        let r = match which {
            0 => end_semiring(&chain(4)).unwrap().semiring,
            1 => end_semiring(&diamond()).unwrap().semiring,
            _ => r2b().direct_product(&end_semiring(&chain(3)).unwrap().semiring),
        };
        let p: Vec<usize> = {
            let mut order: Vec<usize> = seed.into_iter().filter(|&i| i < r.len()).collect();
            order.extend(20..r.len());
            order
        };
        let s = permuted(&r, &p);
        let f = semiring_iso(&r, &s).expect("relabelling is an isomorphism");
        prop_assert!(is_iso(&r, &s, &f));
        let g = semiring_anti_iso(&r, &s.opposite()).expect("opposite of a relabelling");
        prop_assert!(is_iso(&r, &s, &g));
    }
}

#[test]
fn non_isomorphic_pairs_are_rejected() {
    let a = end_semiring(&all_fixtures()[5]).unwrap().semiring;
    let b = end_semiring(&all_fixtures()[6]).unwrap().semiring;
    assert!(semiring_iso(&a, &b).is_none());
    assert!(semiring_anti_iso(&a, &a).is_none());
    assert!(semiring_iso(&r2a(), &r2b()).is_none());
}
