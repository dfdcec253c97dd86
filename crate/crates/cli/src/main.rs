//! `dsr`: reproduce the classification of small congruence-simple semirings,
//! check semiring and lattice files, and maintain a catalog.
//!
//! Exit status: 0 on success, 1 when a result does not match the expected
//! data (or a sweep ran out of budget), 2 on usage, parse or validation
//! errors.

mod check;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dense_semirings::catalog::{
    build_catalog, compare_table1, min_order, parse_expected, query_catalog, table1_for, CatalogError, Limits,
    MinOrderReport, Query, SweepProgress, Table1Report,
};
use dense_semirings::endo::{SrLimits, DEFAULT_END_LIMIT, DEFAULT_FAMILY_LIMIT, DEFAULT_SR_BASE_LIMIT};
use dense_semirings::format::parse_lattice;
use dense_semirings::lattice::fixtures::FIXTURE_NAMES;
use dense_semirings::FiniteLattice;

#[derive(Parser)]
#[command(name = "dsr", version, about = "Dense subsemirings of endomorphism semirings of finite lattices")]
struct Cli {
    /// Largest |End(M)| that may be materialized.
    #[arg(long, global = true, default_value_t = DEFAULT_END_LIMIT)]
    max_end_size: usize,
    /// Largest |End(M)| whose dense subsemirings are enumerated.
    #[arg(long, global = true, default_value_t = DEFAULT_SR_BASE_LIMIT)]
    max_sr_base: usize,
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Compute End and SR for the nine fixture lattices and compare with the
    /// expected data.
    Table1 {
        /// Directory holding the fixture `.lat` files.
        #[arg(long, default_value = "fixtures")]
        fixtures: PathBuf,
        /// Expected data file; defaults to `table1.expected` in the fixture
        /// directory.
        #[arg(long)]
        expected: Option<PathBuf>,
    },
    /// Least order of a dense subsemiring over lattices of size 6 to N.
    MinOrder {
        #[arg(long)]
        max_size: usize,
        /// Wall-clock budget in seconds; required for sizes above 6.
        #[arg(long)]
        budget: Option<u64>,
        /// Suppress progress lines on stderr.
        #[arg(long)]
        quiet: bool,
    },
    /// Validate a `.lat`, `.sr`, `.srs` or `.smod` file and report on it.
    Check { file: PathBuf },
    /// Build or query the on-disk catalog.
    Catalog {
        #[command(subcommand)]
        action: CatalogCommand,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// Write one record per lattice class of size 2 to N.
    Build {
        #[arg(long)]
        max_size: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// List SR members matching all given filters.
    Query {
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        min_order: Option<usize>,
        #[arg(long)]
        max_order: Option<usize>,
        /// Lattice size.
        #[arg(long)]
        size: Option<usize>,
        #[arg(long)]
        has_one: Option<bool>,
        #[arg(long)]
        self_anti_iso: Option<bool>,
    },
}

pub(crate) struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub(crate) fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<CatalogError> for Failure {
    fn from(e: CatalogError) -> Self {
        Failure::usage(e.to_string())
    }
}

pub(crate) type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global() {
            eprintln!("dsr: {e}");
            return ExitCode::from(2);
        }
    }
    let limits = Limits {
        end: cli.max_end_size,
        sr: SrLimits { base: cli.max_sr_base, family: DEFAULT_FAMILY_LIMIT },
    };
    let json = cli.format == OutputFormat::Json;
    let outcome = match cli.command {
        Command::Table1 { fixtures, expected } => cmd_table1(&fixtures, expected.as_deref(), limits, json),
        Command::MinOrder { max_size, budget, quiet } => cmd_min_order(max_size, budget, quiet, limits, json),
        Command::Check { file } => check::cmd_check(&file, limits, json),
        Command::Catalog { action } => cmd_catalog(action, limits, json),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("dsr: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

pub(crate) fn emit_json<T: Serialize>(command: &str, value: &T) {
    #[derive(Serialize)]
    struct Envelope<'a, T> {
        command: &'a str,
        version: &'a str,
        result: &'a T,
    }
    let env = Envelope { command, version: env!("CARGO_PKG_VERSION"), result: value };
    println!("{}", serde_json::to_string_pretty(&env).expect("report serializes"));
}

pub(crate) fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_fixtures(dir: &Path) -> Result<Vec<FiniteLattice>, Failure> {
    FIXTURE_NAMES
        .iter()
        .map(|name| {
            let path = dir.join(format!("{name}.lat"));
            let l = parse_lattice(&read_file(&path)?)
                .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            Ok(if l.name().is_some() { l } else { l.with_name(*name) })
        })
        .collect()
}

#[derive(Serialize)]
struct Table1Output<'a> {
    #[serde(flatten)]
    report: &'a Table1Report,
    matches: bool,
    mismatches: Vec<dense_semirings::catalog::Mismatch>,
}

fn cmd_table1(fixtures: &Path, expected: Option<&Path>, limits: Limits, json: bool) -> Outcome {
    let lattices = load_fixtures(fixtures)?;
    let expected_path = expected.map_or_else(|| fixtures.join("table1.expected"), Path::to_path_buf);
    let expected = parse_expected(&read_file(&expected_path)?)?;
    let report = table1_for(&lattices, limits)?;
    let mismatches = compare_table1(&report, &expected);
    if json {
        emit_json("table1", &Table1Output { report: &report, matches: mismatches.is_empty(), mismatches: mismatches.clone() });
    } else {
        println!("lattice   |M| |End|  SR orders                    no one   anti-iso End");
        for row in &report.rows {
            let f = &row.family;
            let orders: Vec<String> = f.orders().iter().map(usize::to_string).collect();
            let no_one: Vec<String> = f.orders_without_one().iter().map(usize::to_string).collect();
            println!(
                "{:<8} {:>4} {:>5}  {:<28} {:<8} {}",
                f.name,
                f.size,
                f.end_order,
                format!("{{{}}}", orders.join(",")),
                if no_one.is_empty() { "-".to_string() } else { no_one.join(",") },
                row.anti_partner.as_deref().unwrap_or("-"),
            );
            for g in f.iso_groups() {
                let pos: Vec<String> = g.iter().map(|i| format!("{}#{}", f.members[*i].order, i)).collect();
                println!("{:<8} isomorphic members: {}", "", pos.join(" ~ "));
            }
        }
        if mismatches.is_empty() {
            println!("all {} rows match {}", report.rows.len(), expected_path.display());
        }
        for m in &mismatches {
            println!("MISMATCH {}", m.lattice);
            println!("  expected: {}", m.expected.as_deref().unwrap_or("(no row)"));
            println!("  found:    {}", m.found.as_deref().unwrap_or("(no row)"));
        }
    }
    Ok(if mismatches.is_empty() { 0 } else { 1 })
}

fn print_min_order(r: &MinOrderReport) {
    for s in &r.per_size {
        let m = s.min_order.map_or("-".to_string(), |v| v.to_string());
        println!("size {}: {} lattices, least dense subsemiring order {}", s.size, s.lattices, m);
    }
    println!("checked {} of {} lattices", r.lattices_checked, r.lattices_total);
    match r.minimum {
        Some(v) => {
            println!("minimum order: {v}");
            for w in &r.witnesses {
                println!("  attained by {w}");
            }
        }
        None => println!("minimum order: none (no lattices of size 6 or more in range)"),
    }
}

fn cmd_min_order(max_size: usize, budget: Option<u64>, quiet: bool, limits: Limits, json: bool) -> Outcome {
    if max_size > 6 && budget.is_none() {
        return Err(Failure::usage("sizes above 6 require --budget SECONDS"));
    }
    let deadline = budget.map(|s| Instant::now() + Duration::from_secs(s));
    let progress = |p: &SweepProgress| {
        if !quiet {
            let m = p.current_min.map_or("-".to_string(), |v| v.to_string());
            eprintln!("[{}/{}] current minimum {}", p.done, p.total, m);
        }
    };
    let (report, code) = match min_order(max_size, limits.end, deadline, &progress) {
        Ok(r) => (r, 0),
        Err(CatalogError::BudgetExceeded(r)) => (*r, 1),
        Err(e) => return Err(e.into()),
    };
    if json {
        emit_json("min-order", &report);
    } else {
        print_min_order(&report);
        if code != 0 {
            println!("budget exhausted: partial result");
        }
    }
    Ok(code)
}

fn cmd_catalog(action: CatalogCommand, limits: Limits, json: bool) -> Outcome {
    match action {
        CatalogCommand::Build { max_size, out } => {
            let summary = build_catalog(max_size, &out, limits)?;
            if json {
                emit_json("catalog build", &summary);
            } else {
                println!("wrote {} records to {}", summary.entries, out.display());
                if summary.removed > 0 {
                    println!("removed {} outdated records", summary.removed);
                }
            }
        }
        CatalogCommand::Query { out, min_order, max_order, size, has_one, self_anti_iso } => {
            let q = Query { min_order, max_order, size, has_one, self_anti_iso };
            let rows = query_catalog(&out, &q)?;
            if json {
                emit_json("catalog query", &rows);
            } else {
                println!("lattice     |M| member order  has one self-anti key");
                for r in &rows {
                    println!(
                        "{:<10} {:>4} {:>6} {:>5}  {:<7} {:<9} {}",
                        r.lattice,
                        r.size,
                        r.member,
                        r.flags.order,
                        if r.flags.has_one { "yes" } else { "no" },
                        if r.flags.self_anti_iso { "yes" } else { "no" },
                        &r.key[..12],
                    );
                }
                println!("{} members", rows.len());
            }
        }
    }
    Ok(0)
}
