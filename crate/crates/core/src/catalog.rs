//! Classification experiments over small lattices and the on-disk catalog.
//!
//! A catalog directory holds a `VERSION` file and one record per lattice
//! isomorphism class under `records/`, named by the SHA-256 of the canonical
//! `.lat` serialization. Records are `key value` lines in sorted key order.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::endo::{dense_closure_with_limit, end_semiring_with_limit, enumerate_sr_in, EndoError, SrLimits, DEFAULT_END_LIMIT};
use crate::format::write_lattice;
use crate::lattice::fixtures::all_fixtures;
use crate::lattice::{canonical_form, enumerate_lattices, lattice_iso, FiniteLattice, LatticeError};
use crate::semiring::{is_congruence_simple, semiring_anti_iso, semiring_iso, FiniteSemiring};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const RECORD_FORMAT: u32 = 1;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Endo(#[from] EndoError),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("no catalog at {0}")]
    CatalogMissing(PathBuf),
    #[error("catalog was written by version {found}, this is {expected}")]
    StaleVersion { found: String, expected: String },
    #[error("{path}, line {line}: {message}")]
    BadRecord { path: PathBuf, line: usize, message: String },
    #[error("time budget exhausted after {} of {} lattices", .0.lattices_checked, .0.lattices_total)]
    BudgetExceeded(Box<MinOrderReport>),
    #[error("expected data line {line}: {message}")]
    BadExpected { line: usize, message: String },
}

fn io_error(path: &Path, e: std::io::Error) -> CatalogError {
    CatalogError::Io { path: path.to_path_buf(), message: e.to_string() }
}

#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub end: usize,
    pub sr: SrLimits,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { end: DEFAULT_END_LIMIT, sr: SrLimits::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MemberReport {
    pub order: usize,
    pub has_one: bool,
    pub simple: bool,
    pub self_anti_iso: bool,
    /// Members with equal ids are isomorphic; ids count up from 0 in
    /// member order.
    pub iso_class: usize,
}

/// `End(M)` and `SR(M)` for one lattice, members largest first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub name: String,
    pub size: usize,
    pub end_order: usize,
    pub members: Vec<MemberReport>,
}

impl FamilyReport {
    pub fn orders(&self) -> Vec<usize> {
        self.members.iter().map(|m| m.order).collect()
    }

    pub fn orders_without_one(&self) -> Vec<usize> {
        self.members.iter().filter(|m| !m.has_one).map(|m| m.order).collect()
    }

    /// Positions of isomorphic members, only groups of two or more.
    pub fn iso_groups(&self) -> Vec<Vec<usize>> {
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, m) in self.members.iter().enumerate() {
            groups.entry(m.iso_class).or_default().push(i);
        }
        groups.into_values().filter(|g| g.len() > 1).collect()
    }
}

/// Computes the family and the member semirings (largest first).
pub fn analyze_family(l: &FiniteLattice, limits: Limits) -> Result<(FamilyReport, Vec<FiniteSemiring>), CatalogError> {
    let end = end_semiring_with_limit(l, limits.end)?;
    let sets = enumerate_sr_in(&end, limits.sr)?;
    let rings: Vec<FiniteSemiring> = sets.par_iter().map(|s| end.subsemiring(s).to_semiring()).collect();
    let flags: Vec<(bool, bool)> = rings
        .par_iter()
        .map(|r| (is_congruence_simple(r), semiring_anti_iso(r, r).is_some()))
        .collect();
    let mut classes: Vec<usize> = Vec::with_capacity(rings.len());
    let mut reps: Vec<usize> = Vec::new();
    for (i, r) in rings.iter().enumerate() {
        let found = reps
            .iter()
            .position(|&j| rings[j].len() == r.len() && semiring_iso(&rings[j], r).is_some());
        classes.push(found.unwrap_or_else(|| {
            reps.push(i);
            reps.len() - 1
        }));
    }
    let members = rings
        .iter()
        .zip(flags)
        .zip(classes)
        .map(|((r, (simple, self_anti_iso)), iso_class)| MemberReport {
            order: r.len(),
            has_one: r.one().is_some(),
            simple,
            self_anti_iso,
            iso_class,
        })
        .collect();
    let report = FamilyReport {
        name: l.name().map_or_else(|| lattice_label(l), str::to_string),
        size: l.len(),
        end_order: end.len(),
        members,
    };
    Ok((report, rings))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table1Row {
    #[serde(flatten)]
    pub family: FamilyReport,
    /// First fixture whose `End` is anti-isomorphic to this one's.
    pub anti_partner: Option<String>,
}

impl Table1Row {
    /// The row in the expected-data line format.
    pub fn expected_line(&self) -> String {
        let list = |v: &[usize]| {
            if v.is_empty() {
                "-".to_string()
            } else {
                v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
            }
        };
        let flags = |f: &dyn Fn(&MemberReport) -> bool| {
            self.family.members.iter().map(|m| if f(m) { 'y' } else { 'n' }).collect::<String>()
        };
        let groups = self.family.iso_groups();
        let iso = if groups.is_empty() {
            "-".to_string()
        } else {
            groups.iter().map(|g| list(g)).collect::<Vec<_>>().join(";")
        };
        format!(
            "{} end={} sr={} no-one={} iso={} simple={} self-anti={} anti={}",
            self.family.name,
            self.family.end_order,
            list(&self.family.orders()),
            list(&self.family.orders_without_one()),
            iso,
            flags(&|m| m.simple),
            flags(&|m| m.self_anti_iso),
            self.anti_partner.as_deref().unwrap_or("-"),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table1Report {
    pub rows: Vec<Table1Row>,
}

/// `End` and `SR` of the nine fixture lattices with isomorphism and
/// anti-isomorphism relations.
pub fn table1(limits: Limits) -> Result<Table1Report, CatalogError> {
    table1_for(&all_fixtures(), limits)
}

/// [`table1`] over the given named lattices.
pub fn table1_for(fixtures: &[FiniteLattice], limits: Limits) -> Result<Table1Report, CatalogError> {
    let ends: Vec<FiniteSemiring> = fixtures
        .par_iter()
        .map(|l| end_semiring_with_limit(l, limits.end).map(|e| e.semiring))
        .collect::<Result<_, _>>()?;
    let families: Vec<FamilyReport> = fixtures
        .par_iter()
        .map(|l| analyze_family(l, limits).map(|(f, _)| f))
        .collect::<Result<_, _>>()?;
    let rows = families
        .into_par_iter()
        .enumerate()
        .map(|(i, family)| {
            let order = std::iter::once(i).chain((0..fixtures.len()).filter(|&j| j != i));
            let anti_partner = order
                .filter(|&j| ends[j].len() == ends[i].len())
                .find(|&j| semiring_anti_iso(&ends[i], &ends[j]).is_some())
                .map(|j| fixtures[j].name().unwrap_or_default().to_string());
            Table1Row { family, anti_partner }
        })
        .collect();
    Ok(Table1Report { rows })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub lattice: String,
    pub expected: Option<String>,
    pub found: Option<String>,
}

/// Expected lines keyed by lattice name; `#` comments and blank lines are
/// skipped.
pub fn parse_expected(text: &str) -> Result<Vec<(String, String)>, CatalogError> {
    let mut out: Vec<(String, String)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let name = line.split(' ').next().unwrap_or_default().to_string();
        if out.iter().any(|(n, _)| *n == name) {
            return Err(CatalogError::BadExpected { line: i + 1, message: format!("duplicate lattice {name}") });
        }
        out.push((name, line.to_string()));
    }
    Ok(out)
}

/// Rows that differ from the expected data, in fixture order.
pub fn compare_table1(report: &Table1Report, expected: &[(String, String)]) -> Vec<Mismatch> {
    let mut out = Vec::new();
    for row in &report.rows {
        let found = row.expected_line();
        let exp = expected.iter().find(|(n, _)| *n == row.family.name).map(|(_, l)| l.clone());
        if exp.as_deref() != Some(found.as_str()) {
            out.push(Mismatch { lattice: row.family.name.clone(), expected: exp, found: Some(found) });
        }
    }
    for (name, line) in expected {
        if !report.rows.iter().any(|r| r.family.name == *name) {
            out.push(Mismatch { lattice: name.clone(), expected: Some(line.clone()), found: None });
        }
    }
    out
}

/// Compact description of a lattice by its covering pairs.
pub fn lattice_label(l: &FiniteLattice) -> String {
    let (c, _) = canonical_form(l);
    let covers: Vec<String> = c.covers().iter().map(|(a, b)| format!("{a}<{b}")).collect();
    format!("n{}:{}", c.len(), covers.join(","))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepProgress {
    pub done: usize,
    pub total: usize,
    pub current_min: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SizeSummary {
    pub size: usize,
    pub lattices: usize,
    pub min_order: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinOrderReport {
    pub max_size: usize,
    pub lattices_total: usize,
    pub lattices_checked: usize,
    pub complete: bool,
    /// Least order of a dense subsemiring over lattices of size 6 or more.
    pub minimum: Option<usize>,
    /// Lattices attaining the minimum.
    pub witnesses: Vec<String>,
    pub per_size: Vec<SizeSummary>,
}

/// Smallest order of a member of `SR(M)` over lattices `M` with
/// `6 ≤ |M| ≤ max_size`. Lattices up to size 5 are the fixtures.
///
/// The least member of `SR(M)` is the dense closure, so one closure per
/// lattice suffices.
pub fn min_order(
    max_size: usize,
    end_limit: usize,
    deadline: Option<Instant>,
    progress: &(dyn Fn(&SweepProgress) + Sync),
) -> Result<MinOrderReport, CatalogError> {
    let lattices: Vec<FiniteLattice> = if max_size >= 6 {
        enumerate_lattices(max_size)?.into_iter().filter(|l| l.len() >= 6).collect()
    } else {
        Vec::new()
    };
    let total = lattices.len();
    let done = AtomicUsize::new(0);
    let best = Mutex::new(None::<usize>);
    let results: Vec<Option<usize>> = lattices
        .par_iter()
        .map(|l| {
            if deadline.is_some_and(|d| Instant::now() >= d) {
                return Ok(None);
            }
            let order = dense_closure_with_limit(l, end_limit)?.len();
            let current_min = {
                let mut b = best.lock().unwrap();
                *b = Some(b.map_or(order, |v: usize| v.min(order)));
                *b
            };
            let done = done.fetch_add(1, Ordering::SeqCst) + 1;
            progress(&SweepProgress { done, total, current_min });
            Ok(Some(order))
        })
        .collect::<Result<_, EndoError>>()?;
    let checked = results.iter().filter(|r| r.is_some()).count();
    let minimum = results.iter().flatten().copied().min();
    let mut witnesses: Vec<String> = lattices
        .iter()
        .zip(&results)
        .filter(|(_, r)| r.is_some() && **r == minimum)
        .map(|(l, _)| lattice_label(l))
        .collect();
    witnesses.sort();
    let per_size = (6..=max_size)
        .map(|size| {
            let of_size = lattices.iter().zip(&results).filter(|(l, _)| l.len() == size);
            SizeSummary {
                size,
                lattices: of_size.clone().count(),
                min_order: of_size.filter_map(|(_, r)| *r).min(),
            }
        })
        .collect();
    let report = MinOrderReport {
        max_size,
        lattices_total: total,
        lattices_checked: checked,
        complete: checked == total,
        minimum,
        witnesses,
        per_size,
    };
    if report.complete {
        Ok(report)
    } else {
        Err(CatalogError::BudgetExceeded(Box::new(report)))
    }
}

/// One catalog record: a lattice isomorphism class and its family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub key: String,
    pub version: String,
    #[serde(flatten)]
    pub family: FamilyReport,
    /// Join table of the canonical form, rows separated by `,`.
    pub canonical: String,
}

impl CatalogEntry {
    pub fn new(l: &FiniteLattice, limits: Limits) -> Result<Self, CatalogError> {
        let (canonical, _) = canonical_form(l);
        let key = hex::encode(Sha256::digest(write_lattice(&canonical).as_bytes()));
        let name = l.name().map(str::to_string).or_else(|| {
            all_fixtures()
                .into_iter()
                .find(|f| f.len() == l.len() && lattice_iso(f, l).is_some())
                .and_then(|f| f.name().map(str::to_string))
        });
        let named = match name {
            Some(n) => canonical.clone().with_name(n),
            None => canonical.clone(),
        };
        let (family, _) = analyze_family(&named, limits)?;
        let rows: Vec<String> = canonical
            .join_rows()
            .iter()
            .map(|r| r.iter().map(usize::to_string).collect::<Vec<_>>().join(" "))
            .collect();
        Ok(CatalogEntry { key, version: TOOL_VERSION.to_string(), family, canonical: rows.join(",") })
    }

    pub fn to_record(&self) -> String {
        let list = |f: &dyn Fn(&MemberReport) -> String| {
            self.family.members.iter().map(f).collect::<Vec<_>>().join(",")
        };
        let bit = |b: bool| if b { "1" } else { "0" }.to_string();
        let mut fields = BTreeMap::new();
        fields.insert("canonical", self.canonical.clone());
        fields.insert("end_order", self.family.end_order.to_string());
        fields.insert("format", RECORD_FORMAT.to_string());
        fields.insert("has_one", list(&|m| bit(m.has_one)));
        fields.insert("iso_class", list(&|m| m.iso_class.to_string()));
        fields.insert("key", self.key.clone());
        fields.insert("name", self.family.name.clone());
        fields.insert("orders", list(&|m| m.order.to_string()));
        fields.insert("self_anti_iso", list(&|m| bit(m.self_anti_iso)));
        fields.insert("simple", list(&|m| bit(m.simple)));
        fields.insert("size", self.family.size.to_string());
        fields.insert("version", self.version.clone());
        fields.into_iter().map(|(k, v)| format!("{k} {v}\n")).collect()
    }

    pub fn from_record(path: &Path, text: &str) -> Result<Self, CatalogError> {
        let bad = |line: usize, message: String| CatalogError::BadRecord { path: path.to_path_buf(), line, message };
        let mut fields: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let (k, v) = line.split_once(' ').ok_or_else(|| bad(i + 1, "expected `key value`".into()))?;
            fields.insert(k, (i + 1, v));
        }
        let get = |k: &str| fields.get(k).copied().ok_or_else(|| bad(0, format!("missing key `{k}`")));
        let num = |k: &str| -> Result<usize, CatalogError> {
            let (line, v) = get(k)?;
            v.parse().map_err(|_| bad(line, format!("`{k}` is not a number")))
        };
        let nums = |k: &str| -> Result<Vec<usize>, CatalogError> {
            let (line, v) = get(k)?;
            v.split(',').map(|t| t.parse().map_err(|_| bad(line, format!("bad entry in `{k}`")))).collect()
        };
        let orders = nums("orders")?;
        let (has_one, simple, anti, iso) = (nums("has_one")?, nums("simple")?, nums("self_anti_iso")?, nums("iso_class")?);
        if [has_one.len(), simple.len(), anti.len(), iso.len()].iter().any(|&k| k != orders.len()) {
            return Err(bad(0, "member lists differ in length".into()));
        }
        let members = (0..orders.len())
            .map(|i| MemberReport {
                order: orders[i],
                has_one: has_one[i] == 1,
                simple: simple[i] == 1,
                self_anti_iso: anti[i] == 1,
                iso_class: iso[i],
            })
            .collect();
        Ok(CatalogEntry {
            key: get("key")?.1.to_string(),
            version: get("version")?.1.to_string(),
            family: FamilyReport {
                name: get("name")?.1.to_string(),
                size: num("size")?,
                end_order: num("end_order")?,
                members,
            },
            canonical: get("canonical")?.1.to_string(),
        })
    }
}

fn version_text() -> String {
    format!("dense-semirings {TOOL_VERSION}\nformat {RECORD_FORMAT}\n")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BuildSummary {
    pub entries: usize,
    pub removed: usize,
}

/// Writes one record per lattice class of size `2..=max_size`. Records from
/// earlier builds that are not regenerated are removed.
pub fn build_catalog(max_size: usize, out: &Path, limits: Limits) -> Result<BuildSummary, CatalogError> {
    let lattices: Vec<FiniteLattice> = enumerate_lattices(max_size)?.into_iter().filter(|l| l.len() >= 2).collect();
    let entries: Vec<CatalogEntry> =
        lattices.par_iter().map(|l| CatalogEntry::new(l, limits)).collect::<Result<_, _>>()?;
    let records = out.join("records");
    fs::create_dir_all(&records).map_err(|e| io_error(&records, e))?;
    let mut keep = std::collections::BTreeSet::new();
    for e in &entries {
        let path = records.join(format!("{}.rec", e.key));
        fs::write(&path, e.to_record()).map_err(|err| io_error(&path, err))?;
        keep.insert(path);
    }
    let mut removed = 0;
    for item in fs::read_dir(&records).map_err(|e| io_error(&records, e))? {
        let path = item.map_err(|e| io_error(&records, e))?.path();
        if path.extension().is_some_and(|x| x == "rec") && !keep.contains(&path) {
            fs::remove_file(&path).map_err(|e| io_error(&path, e))?;
            removed += 1;
        }
    }
    let version = out.join("VERSION");
    fs::write(&version, version_text()).map_err(|e| io_error(&version, e))?;
    Ok(BuildSummary { entries: entries.len(), removed })
}

/// All records, ordered by lattice size and then key.
pub fn load_catalog(dir: &Path) -> Result<Vec<CatalogEntry>, CatalogError> {
    let version = dir.join("VERSION");
    let text = fs::read_to_string(&version).map_err(|_| CatalogError::CatalogMissing(dir.to_path_buf()))?;
    if text != version_text() {
        let found = text.lines().next().unwrap_or_default().trim_start_matches("dense-semirings ").to_string();
        return Err(CatalogError::StaleVersion { found, expected: TOOL_VERSION.to_string() });
    }
    let records = dir.join("records");
    let mut paths: Vec<PathBuf> = fs::read_dir(&records)
        .map_err(|_| CatalogError::CatalogMissing(dir.to_path_buf()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "rec"))
        .collect();
    paths.sort();
    let mut out = paths
        .iter()
        .map(|p| {
            let text = fs::read_to_string(p).map_err(|e| io_error(p, e))?;
            let entry = CatalogEntry::from_record(p, &text)?;
            if entry.version != TOOL_VERSION {
                return Err(CatalogError::StaleVersion { found: entry.version, expected: TOOL_VERSION.to_string() });
            }
            Ok(entry)
        })
        .collect::<Result<Vec<_>, CatalogError>>()?;
    out.sort_by(|a, b| (a.family.size, &a.key).cmp(&(b.family.size, &b.key)));
    Ok(out)
}

/// Member filter; `None` fields match everything.
#[derive(Clone, Debug, Default)]
pub struct Query {
    pub min_order: Option<usize>,
    pub max_order: Option<usize>,
    pub size: Option<usize>,
    pub has_one: Option<bool>,
    pub self_anti_iso: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QueryRow {
    pub lattice: String,
    pub key: String,
    pub size: usize,
    pub member: usize,
    #[serde(flatten)]
    pub flags: MemberReport,
}

pub fn query_catalog(dir: &Path, q: &Query) -> Result<Vec<QueryRow>, CatalogError> {
    let mut rows = Vec::new();
    for e in load_catalog(dir)? {
        if q.size.is_some_and(|s| s != e.family.size) {
            continue;
        }
        for (i, m) in e.family.members.iter().enumerate() {
            let keep = q.min_order.is_none_or(|v| m.order >= v)
                && q.max_order.is_none_or(|v| m.order <= v)
                && q.has_one.is_none_or(|v| m.has_one == v)
                && q.self_anti_iso.is_none_or(|v| m.self_anti_iso == v);
            if keep {
                rows.push(QueryRow {
                    lattice: e.family.name.clone(),
                    key: e.key.clone(),
                    size: e.family.size,
                    member: i,
                    flags: m.clone(),
                });
            }
        }
    }
    Ok(rows)
}
