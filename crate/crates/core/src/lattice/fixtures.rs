//! The nine smallest nontrivial lattices, in the order of the
//! classification table, built from their Hasse diagrams.

use super::FiniteLattice;

fn named(n: usize, covers: &[(usize, usize)], name: &str) -> FiniteLattice {
    FiniteLattice::from_covers(n, covers)
        .expect("fixture diagram is a lattice")
        .with_name(name)
}

/// The two-element lattice `({0,1}, max)`.
pub fn l2() -> FiniteLattice {
    named(2, &[(0, 1)], "L2")
}

/// The chain `0 < 1 < … < k-1`.
pub fn chain(k: usize) -> FiniteLattice {
    let covers: Vec<(usize, usize)> = (1..k).map(|i| (i - 1, i)).collect();
    let name = if k == 2 { "L2".to_string() } else { format!("CHAIN{k}") };
    named(k, &covers, &name)
}

/// `0 < 1, 2 < 3`.
pub fn diamond() -> FiniteLattice {
    named(4, &[(0, 1), (0, 2), (1, 3), (2, 3)], "DIAMOND")
}

/// Diamond stacked above a two-element chain: `0 < 1 < 2, 3 < 4`.
pub fn lat50a() -> FiniteLattice {
    named(5, &[(0, 1), (1, 2), (1, 3), (2, 4), (3, 4)], "LAT50A")
}

/// Diamond below a two-element chain: `0 < 1, 2 < 3 < 4`.
pub fn lat50b() -> FiniteLattice {
    named(5, &[(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)], "LAT50B")
}

/// The pentagon: `0 < 1 < 2 < 4` and `0 < 3 < 4`.
pub fn n5() -> FiniteLattice {
    named(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)], "N5")
}

/// Three atoms under a common top.
pub fn m3() -> FiniteLattice {
    named(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)], "M3")
}

/// All nine fixtures in table order.
pub fn all_fixtures() -> Vec<FiniteLattice> {
    vec![l2(), chain(3), chain(4), diamond(), chain(5), lat50a(), lat50b(), n5(), m3()]
}

pub const FIXTURE_NAMES: [&str; 9] = ["L2", "CHAIN3", "CHAIN4", "DIAMOND", "CHAIN5", "LAT50A", "LAT50B", "N5", "M3"];

pub fn by_name(name: &str) -> Option<FiniteLattice> {
    all_fixtures().into_iter().find(|l| l.name() == Some(name))
}
