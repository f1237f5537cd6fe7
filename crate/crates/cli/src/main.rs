mod config;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use plexus::basis::Parity;
use plexus::clifford::{car_check, rotation_suite, so_closure_check};
use plexus::contraction::{self, SectorPolicy};
use plexus::grassmann::{single_monomial, Element};
use plexus::pauli::{check_skew_symmetrization, TransposeMode};
use plexus::report::Report;
use plexus::scalar::int;
use plexus::tables;
use plexus::yang;
use plexus::PlexusError;

use config::{parse_list, Format, GlobalArgs, RunConfig};

const DEFAULT_SWEEP: [u64; 5] = [16, 64, 256, 1024, 4096];
const DEFAULT_ROTATION_TOLERANCE: f64 = 1e-12;
const DEFAULT_SLOPE_TOLERANCE: f64 = 0.05;

#[derive(Debug, Parser)]
#[command(name = "plexus", version, about = "Recursive Grassmann algebra, spinor ladder and Yang contraction toolkit")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reconstruct a reference table, annotated where it departs from the printed one.
    Tables {
        #[arg(value_enum)]
        kind: TableKind,
        /// Compare against the shipped transcription; exit 1 on mismatch.
        #[arg(long)]
        check: bool,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Transpose used by the Pauli suite.
        #[arg(long, default_value = "hilbert")]
        transpose: String,
    },
    /// Parse an element and print its attributes.
    Elem {
        expr: String,
        /// Comma-separated subset of serial,rank,degree,parity,canonical,stage.
        #[arg(long, default_value = "serial,rank,degree,parity,canonical")]
        show: String,
    },
    /// Contraction sweep over cell counts, with log-log slope fits.
    Contract {
        /// Comma-separated cell counts (at least five for a fit).
        #[arg(long = "n")]
        n: Option<String>,
        /// Write the sweep table as CSV here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "half-root-ceiling")]
        policy: Policy,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TableKind {
    Polyadics,
    Monadics,
    Tree,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Suite {
    Car,
    Pauli,
    Yang,
    Closure,
    Rotation,
    ContractionSmall,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Policy {
    HalfRootCeiling,
    StrictBand,
}

/// Why a command did not succeed.
enum Failure {
    /// Exit 2: bad arguments, configuration, or an out-of-range request.
    Usage(String),
    /// Exit 1: a check ran and failed.
    Verification,
}

impl From<PlexusError> for Failure {
    fn from(e: PlexusError) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = RunConfig::resolve(&cli.global).map_err(Failure::Usage).and_then(|cfg| run(cli.command, &cfg));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command, cfg: &RunConfig) -> Outcome {
    match command {
        Command::Tables { kind, check } => cmd_tables(kind, check, cfg),
        Command::Verify { suite, transpose } => cmd_verify(suite, &transpose, cfg),
        Command::Elem { expr, show } => cmd_elem(&expr, &show, cfg),
        Command::Contract { n, out, policy } => cmd_contract(n.as_deref(), out, policy, cfg),
    }
}

fn csv_line(fields: &[String]) -> String {
    fields
        .iter()
        .map(|f| if f.contains([',', '"', '\n']) { format!("\"{}\"", f.replace('"', "\"\"")) } else { f.clone() })
        .collect::<Vec<_>>()
        .join(",")
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

fn emit_report(report: &Report, format: Format) -> Outcome {
    match format {
        Format::Json => print_json(&report.to_json()),
        Format::Text => print!("{report}"),
        Format::Csv => {
            println!("relation,lhs,rhs,status,max_deviation");
            for c in &report.checks {
                println!(
                    "{}",
                    csv_line(&[c.relation.clone(), c.lhs.clone(), c.rhs.clone(), c.status.to_string(), c.max_deviation.to_string()])
                );
            }
        }
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn cmd_tables(kind: TableKind, check: bool, cfg: &RunConfig) -> Outcome {
    let (json, text, csv, diff) = match kind {
        TableKind::Polyadics => {
            let rows = tables::polyadics_table(tables::MAX_TABLE_RANK, cfg.bit_budget)?;
            let csv: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.rank.to_string(),
                        r.label.clone(),
                        r.degree.to_string(),
                        r.rule.to_string(),
                        r.printed.to_string(),
                        r.expr.clone(),
                        r.note.clone().unwrap_or_default(),
                    ]
                })
                .collect();
            let diff = tables::diff_polyadics(&rows, &tables::parse_golden(tables::GOLDEN_POLYADICS));
            (tables::to_json("polyadics", &rows), tables::render_polyadics(&rows), (vec!["rank", "serial", "degree", "rule", "printed", "element", "note"], csv), diff)
        }
        TableKind::Monadics => {
            let rows = tables::monadics_table();
            let csv = rows
                .iter()
                .map(|r| vec![r.log2_serial.to_string(), r.serial.to_string(), r.rank.to_string(), r.expr.clone()])
                .collect();
            let diff = tables::diff_monadics(&rows, &tables::parse_golden(tables::GOLDEN_MONADICS));
            (tables::to_json("monadics", &rows), tables::render_monadics(&rows), (vec!["log2_q", "serial", "rank", "element"], csv), diff)
        }
        TableKind::Tree => {
            let rows = tables::tree_table(3)?;
            let csv = rows
                .iter()
                .map(|r| {
                    vec![
                        r.level.to_string(),
                        r.fermi_modes.to_string(),
                        r.spinors.to_string(),
                        r.vectors.to_string(),
                        r.group.clone(),
                        r.note.clone().unwrap_or_default(),
                    ]
                })
                .collect();
            let diff = tables::diff_tree(&rows, &tables::parse_golden(tables::GOLDEN_TREE));
            (tables::to_json("tree", &rows), tables::render_tree(&rows), (vec!["level", "fermi_modes", "spinors", "vectors", "group", "note"], csv), diff)
        }
    };
    match cfg.format {
        Format::Text => {
            print!("{text}");
            if check {
                print!("{diff}");
            }
        }
        Format::Json => {
            let mut v = json;
            if check {
                v["check"] = diff.to_json();
            }
            print_json(&v);
        }
        Format::Csv => {
            let (header, rows) = csv;
            println!("{}", header.join(","));
            for r in rows {
                println!("{}", csv_line(&r));
            }
        }
    }
    if check && !diff.passed() {
        return Err(Failure::Verification);
    }
    Ok(())
}

fn cmd_verify(suite: Suite, transpose: &str, cfg: &RunConfig) -> Outcome {
    let seed = cfg.seed;
    let mut report = match suite {
        Suite::Car => car_check(cfg.stage.unwrap_or(3), seed)?,
        Suite::Pauli => {
            let mode: TransposeMode = transpose.parse()?;
            check_skew_symmetrization(cfg.stage.unwrap_or(3), seed, mode)?
        }
        Suite::Closure => so_closure_check(cfg.stage.unwrap_or(2), seed)?,
        Suite::Rotation => {
            rotation_suite(cfg.stage.unwrap_or(2), cfg.tolerance.unwrap_or(DEFAULT_ROTATION_TOLERANCE))?
        }
        Suite::Yang => yang_suite(cfg)?,
        Suite::ContractionSmall => contraction_small(cfg)?,
    };
    report.set_param("seed", seed);
    emit_report(&report, cfg.format)
}

fn yang_suite(cfg: &RunConfig) -> Result<Report, PlexusError> {
    let rep = yang::build_yang_rep(cfg.signature);
    let mut report = yang::structure_check(&rep, cfg.seed);
    report.suite = "yang".into();
    let (_, killing) = yang::killing_form(&rep)?;
    report.extend(killing);
    match yang::chiral_check(&rep) {
        Ok(chiral) => report.extend(chiral),
        Err(PlexusError::NoRealChiralSplit(mode)) => report.set_param("chiral_split", format!("none (signature {mode})")),
        Err(e) => return Err(e),
    }
    let atoms = yang::orbital_atoms(&rep, &int(1), &int(1), &int(1))?;
    // (γ^6γ^5)² = -g_55 g_66: under alt it is +1 and there is no quantized imaginary.
    if rep.g(5) * rep.g(6) > 0 {
        report.extend(yang::atoms_check(&rep, &atoms));
    } else {
        report.set_param("atoms", "skipped: γ^6γ^5 is not a complex structure under this signature");
    }
    let layout = yang::yang_matrix_layout(&rep, &atoms);
    report.extend(yang::layout_check(&rep, &layout));
    Ok(report)
}

fn contraction_small(cfg: &RunConfig) -> Result<Report, PlexusError> {
    let rep = yang::build_yang_rep(cfg.signature);
    let atoms = yang::orbital_atoms(&rep, &int(1), &int(1), &int(1))?;
    let mut report = Report::new("contraction-small").param("seed", cfg.seed);
    report.extend(contraction::spectrum_oracle_check(&rep, &[2, 3])?);
    report.extend(contraction::lie_hom_suite(&[2], cfg.seed)?);
    for n in [10, 100] {
        report.extend(contraction::commutator_ledger(&rep, &atoms, n)?.report);
    }
    report.extend(contraction::band_census(100)?);
    let system = contraction::CumulantSystem::new(rep.clone(), atoms.clone(), 2)?;
    report.extend(contraction::lorentz_sector_check(&system)?);
    let sweep = contraction::contraction_sweep(&DEFAULT_SWEEP, SectorPolicy::default(), &int(1), &int(1))?;
    report.extend(sweep.report(cfg.tolerance.unwrap_or(DEFAULT_SLOPE_TOLERANCE)));
    Ok(report)
}

fn parity_value(p: Parity) -> i64 {
    p.sign() as i64
}

fn cmd_elem(expr: &str, show: &str, cfg: &RunConfig) -> Outcome {
    let element = plexus::expr::parse(expr)?;
    let fields: Vec<&str> = show.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    for f in &fields {
        if !["serial", "rank", "degree", "parity", "canonical", "stage"].contains(f) {
            return Err(Failure::Usage(format!("unknown attribute `{f}` in --show")));
        }
    }
    let out = elem_attributes(&element, &fields, cfg.bit_budget)?;
    match cfg.format {
        Format::Json => print_json(&Value::Object(out)),
        Format::Text | Format::Csv => {
            for (k, v) in &out {
                let v = match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                match cfg.format {
                    Format::Csv => println!("{}", csv_line(&[k.clone(), v])),
                    _ => println!("{k}: {v}"),
                }
            }
        }
    }
    Ok(())
}

fn elem_attributes(element: &Element, fields: &[&str], budget: u64) -> Result<Map<String, Value>, Failure> {
    let mut out = Map::new();
    let want = |f: &str| fields.contains(&f);
    if want("canonical") {
        out.insert("canonical".into(), json!(if element.is_zero() { "0".to_string() } else { element.to_string() }));
    }
    if want("stage") {
        out.insert("stage".into(), json!(element.min_stage()));
    }
    if element.is_zero() {
        out.insert("zero".into(), json!(true));
        return Ok(out);
    }
    let monomial_attrs = |m: &plexus::basis::BasisMonomial, out: &mut Map<String, Value>| -> Result<(), Failure> {
        if want("serial") {
            let q = m.serial_with_budget(budget)?;
            let v = match q.to_u64() {
                Some(x) => json!(x),
                None => json!(q.0.to_string()),
            };
            out.insert("serial".into(), v);
        }
        if want("rank") {
            out.insert("rank".into(), json!(m.rank()));
        }
        if want("degree") {
            out.insert("degree".into(), json!(m.degree()));
        }
        if want("parity") {
            out.insert("parity".into(), json!(parity_value(m.parity())));
        }
        Ok(())
    };
    match single_monomial(element) {
        Some((m, c)) if *c == int(1) => monomial_attrs(m, &mut out)?,
        _ => {
            let mut terms = Vec::new();
            for (m, c) in element.terms() {
                let mut t = Map::new();
                t.insert("coefficient".into(), json!(c.to_string()));
                monomial_attrs(m, &mut t)?;
                terms.push(Value::Object(t));
            }
            out.insert("terms".into(), Value::Array(terms));
        }
    }
    Ok(out)
}

fn cmd_contract(n: Option<&str>, out: Option<PathBuf>, policy: Policy, cfg: &RunConfig) -> Outcome {
    let ns = match n {
        Some(list) => parse_list(list).map_err(Failure::Usage)?,
        None if !cfg.sweep.is_empty() => cfg.sweep.clone(),
        None => DEFAULT_SWEEP.to_vec(),
    };
    if ns.is_empty() {
        return Err(PlexusError::EmptySweep.into());
    }
    if ns.len() < contraction::MIN_FIT_POINTS {
        return Err(PlexusError::TooFewPoints { got: ns.len(), need: contraction::MIN_FIT_POINTS }.into());
    }
    let policy = match policy {
        Policy::HalfRootCeiling => SectorPolicy::HalfRootCeiling,
        Policy::StrictBand => SectorPolicy::StrictBand,
    };
    let sweep = contraction::contraction_sweep(&ns, policy, &int(1), &int(1))?;
    let csv = sweep.to_csv();
    if let Some(path) = &out {
        fs::write(path, &csv).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    let report = sweep.report(cfg.tolerance.unwrap_or(DEFAULT_SLOPE_TOLERANCE));
    match cfg.format {
        Format::Json => print_json(&json!({ "fits": sweep.fits_json(), "report": report.to_json() })),
        Format::Csv if out.is_none() => print!("{csv}"),
        _ => {
            for f in &sweep.fits {
                println!("{}: slope {:.6}, intercept {:.6}, r² {:.6}", f.quantity, f.slope, f.intercept, f.r_squared);
            }
            print!("{report}");
        }
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}
