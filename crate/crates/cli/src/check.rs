use std::path::Path;
use std::sync::Arc;

use serde::Serialize;

use dense_semirings::catalog::{lattice_label, Limits};
use dense_semirings::endo::{dense_closure_with_limit, end_semiring_with_limit, enumerate_sr_in};
use dense_semirings::format::{parse_lattice, parse_semimodule, parse_semiring, parse_subsemiring, FormatError};
use dense_semirings::lattice::lattice_iso;
use dense_semirings::semimodule::{find_irreducible, irreducibility, representation, Irreducibility};
use dense_semirings::semiring::{is_congruence_simple, proper_congruence_witness, StructureFlags};
use dense_semirings::FiniteSemiring;

use crate::{emit_json, read_file, Failure, Outcome};

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum CheckReport {
    Lattice(LatticeCheck),
    Semiring(SemiringCheck),
    Subsemiring(SubsemiringCheck),
    Semimodule(SemimoduleCheck),
}

#[derive(Serialize)]
struct LatticeCheck {
    name: Option<String>,
    size: usize,
    label: String,
    distributive: bool,
    condition_d: bool,
    end_order: usize,
    dense_closure_order: usize,
    /// `None` when `End(M)` exceeds the SR enumeration limit.
    sr_orders: Option<Vec<usize>>,
}

#[derive(Serialize)]
struct SemiringCheck {
    name: Option<String>,
    order: usize,
    flags: StructureFlags,
    congruence_simple: bool,
    /// A pair generating a proper nonidentity congruence.
    congruence_witness: Option<(usize, usize)>,
    verdict: String,
    dense_witness: Option<DenseWitness>,
}

/// An irreducible module for a simple semiring and the image of the
/// semiring in `End` of that module.
#[derive(Serialize)]
struct DenseWitness {
    recovered_lattice: String,
    module_size: usize,
    module_matches_recovered: bool,
    faithful: bool,
    dense: bool,
}

#[derive(Serialize)]
struct SubsemiringCheck {
    lattice: String,
    order: usize,
    end_order: usize,
    dense: bool,
    congruence_simple: bool,
    flags: StructureFlags,
}

#[derive(Serialize)]
struct SemimoduleCheck {
    semiring: String,
    ring_order: usize,
    size: usize,
    irreducibility: Irreducibility,
    faithful: Option<bool>,
    dense: Option<bool>,
}

fn parse_failure(path: &Path, e: FormatError) -> Failure {
    Failure::usage(format!("{}: {e}", path.display()))
}

fn sibling(path: &Path, reference: &str, extension: &str) -> std::path::PathBuf {
    let base = path.parent().unwrap_or(Path::new("."));
    let p = base.join(reference);
    if p.extension().is_some() {
        p
    } else {
        p.with_extension(extension)
    }
}

pub(crate) fn cmd_check(path: &Path, limits: Limits, json: bool) -> Outcome {
    let text = read_file(path)?;
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or_default();
    let report = match ext {
        "lat" => CheckReport::Lattice(check_lattice(path, &text, limits)?),
        "sr" => {
            let r = parse_semiring(&text).map_err(|e| parse_failure(path, e))?;
            CheckReport::Semiring(check_semiring(&r))
        }
        "srs" => CheckReport::Subsemiring(check_subsemiring(path, &text, limits)?),
        "smod" => CheckReport::Semimodule(check_semimodule(path, &text)?),
        _ => return Err(Failure::usage(format!("{}: expected a .lat, .sr, .srs or .smod file", path.display()))),
    };
    if json {
        emit_json("check", &report);
    } else {
        print_report(&report);
    }
    Ok(0)
}

fn check_lattice(path: &Path, text: &str, limits: Limits) -> Result<LatticeCheck, Failure> {
    let l = parse_lattice(text).map_err(|e| parse_failure(path, e))?;
    let end = end_semiring_with_limit(&l, limits.end).map_err(|e| Failure::usage(e.to_string()))?;
    let dense = dense_closure_with_limit(&l, limits.end).map_err(|e| Failure::usage(e.to_string()))?;
    let sr_orders = enumerate_sr_in(&end, limits.sr).ok().map(|sets| sets.iter().map(|s| s.count()).collect());
    Ok(LatticeCheck {
        name: l.name().map(str::to_string),
        size: l.len(),
        label: lattice_label(&l),
        distributive: l.is_distributive(),
        condition_d: l.condition_d(),
        end_order: end.len(),
        dense_closure_order: dense.len(),
        sr_orders,
    })
}

fn check_semiring(r: &FiniteSemiring) -> SemiringCheck {
    let flags = r.structure_flags();
    let congruence_witness = proper_congruence_witness(r);
    let simple = congruence_witness.is_none();
    let verdict = if simple {
        format!("congruence-simple, {}, |R| = {}", if flags.is_ring { "a ring" } else { "not a ring" }, r.len())
    } else {
        format!("not congruence-simple, |R| = {}", r.len())
    };
    let dense_witness = (simple && !flags.is_ring && !flags.trivial_mul)
        .then(|| r.recover_monoid())
        .flatten()
        .and_then(|recovered| {
            let m = find_irreducible(Arc::new(r.clone())).ok()?;
            let rep = representation(&m).ok()?;
            Some(DenseWitness {
                recovered_lattice: lattice_label(&recovered),
                module_size: m.len(),
                module_matches_recovered: lattice_iso(&rep.lattice, &recovered).is_some(),
                faithful: rep.faithful,
                dense: rep.dense,
            })
        });
    SemiringCheck {
        name: r.name().map(str::to_string),
        order: r.len(),
        flags,
        congruence_simple: simple,
        congruence_witness,
        verdict,
        dense_witness,
    }
}

fn check_subsemiring(path: &Path, text: &str, limits: Limits) -> Result<SubsemiringCheck, Failure> {
    let srs = parse_subsemiring(text).map_err(|e| parse_failure(path, e))?;
    let lat_path = sibling(path, &srs.lattice, "lat");
    let l = parse_lattice(&read_file(&lat_path)?).map_err(|e| parse_failure(&lat_path, e))?;
    let s = srs.resolve(&l).map_err(|e| parse_failure(path, e))?;
    let end = end_semiring_with_limit(&l, limits.end).map_err(|e| Failure::usage(e.to_string()))?;
    let r = s.to_semiring();
    Ok(SubsemiringCheck {
        lattice: srs.lattice,
        order: s.len(),
        end_order: end.len(),
        dense: s.is_dense(),
        congruence_simple: is_congruence_simple(&r),
        flags: r.structure_flags(),
    })
}

fn check_semimodule(path: &Path, text: &str) -> Result<SemimoduleCheck, Failure> {
    let smod = parse_semimodule(text).map_err(|e| parse_failure(path, e))?;
    let sr_path = sibling(path, &smod.semiring, "sr");
    let r = parse_semiring(&read_file(&sr_path)?).map_err(|e| parse_failure(&sr_path, e))?;
    let m = smod.resolve(Arc::new(r)).map_err(|e| parse_failure(path, e))?;
    let rep = representation(&m).ok();
    Ok(SemimoduleCheck {
        semiring: smod.semiring,
        ring_order: m.ring().len(),
        size: m.len(),
        irreducibility: irreducibility(&m),
        faithful: rep.as_ref().map(|r| r.faithful),
        dense: rep.as_ref().map(|r| r.dense),
    })
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn print_report(report: &CheckReport) {
    match report {
        CheckReport::Lattice(c) => {
            println!("lattice {} with {} elements ({})", c.name.as_deref().unwrap_or("(unnamed)"), c.size, c.label);
            println!("distributive: {}", yes(c.distributive));
            println!("condition (D): {}", yes(c.condition_d));
            println!("|End| = {}, dense closure order {}", c.end_order, c.dense_closure_order);
            match &c.sr_orders {
                Some(o) => println!("SR orders: {o:?}"),
                None => println!("SR orders: not enumerated (End exceeds --max-sr-base)"),
            }
        }
        CheckReport::Semiring(c) => {
            println!("semiring {} of order {}", c.name.as_deref().unwrap_or("(unnamed)"), c.order);
            let f = &c.flags;
            println!("additively idempotent: {}", yes(f.add_idempotent));
            println!("one: {}", f.one.map_or("none".to_string(), |v| v.to_string()));
            println!("absorbing element: {}", f.absorbing.map_or("none".to_string(), |v| v.to_string()));
            println!("trivial multiplication: {}", yes(f.trivial_mul));
            if let Some((x, y)) = c.congruence_witness {
                println!("proper congruence generated by ({x}, {y})");
            }
            println!("{}", c.verdict);
            if let Some(w) = &c.dense_witness {
                println!("recovered lattice: {}", w.recovered_lattice);
                println!(
                    "irreducible module of size {} ({} to the recovered lattice)",
                    w.module_size,
                    if w.module_matches_recovered { "isomorphic" } else { "not isomorphic" }
                );
                println!("representation: faithful {}, dense {}", yes(w.faithful), yes(w.dense));
            }
        }
        CheckReport::Subsemiring(c) => {
            println!("subsemiring of End({}) of order {} (|End| = {})", c.lattice, c.order, c.end_order);
            println!("dense: {}", yes(c.dense));
            println!("congruence-simple: {}", yes(c.congruence_simple));
            println!("one: {}", yes(c.flags.has_one));
        }
        CheckReport::Semimodule(c) => {
            println!("semimodule of size {} over {} (order {})", c.size, c.semiring, c.ring_order);
            let i = &c.irreducibility;
            println!(
                "acts nonzero: {}, sub-irreducible: {}, quotient-irreducible: {}, irreducible: {}",
                yes(i.acts_nonzero),
                yes(i.sub_irreducible),
                yes(i.quotient_irreducible),
                yes(i.irreducible)
            );
            if let (Some(f), Some(d)) = (c.faithful, c.dense) {
                println!("representation: faithful {}, dense {}", yes(f), yes(d));
            }
        }
    }
}
