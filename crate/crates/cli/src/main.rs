//! Command-line front end for exact atom enumeration of root-closed
//! submonoids of ℤ².
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 parse or argument
//! error, 3 insufficient expansion precision, 4 degenerate cone,
//! 5 oracle refused a non-strictly-convex cone, 6 I/O error.

mod output;
mod spec_file;
mod svg;

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use coneatoms_core::cone::{
    atoms_of_cone, classify, monoid_properties, ConeError, ConeSpec,
};
use coneatoms_core::contfrac::{cf_expand, normalize_even, CfExpansion, ConvergentTable};
use coneatoms_core::monoid::{
    closed_atom_count, enumerate_atoms, AtomsError, Family, SpecialMonoid,
};
use coneatoms_core::oracle::{oracle_atoms_in_box, OracleError};
use coneatoms_core::{ExactReal, LatticePoint};

use output::{
    atoms_csv, big_number, point_list, AtomsOutput, CfOutput, ClassificationJson, ConeOutput,
    PeriodicOutput, PropertiesJson,
};

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub msg: String,
}

impl CliError {
    pub fn new(code: u8, msg: impl Into<String>) -> CliError {
        CliError {
            code,
            msg: msg.into(),
        }
    }

    pub fn parse(msg: impl Into<String>) -> CliError {
        CliError::new(2, msg)
    }

    fn io(e: std::io::Error, path: &Path) -> CliError {
        CliError::new(6, format!("{}: {e}", path.display()))
    }
}

impl From<AtomsError> for CliError {
    fn from(e: AtomsError) -> CliError {
        let code = match e {
            AtomsError::InsufficientPrecision => 3,
            _ => 2,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<ConeError> for CliError {
    fn from(e: ConeError) -> CliError {
        let code = match e {
            ConeError::DegenerateCone => 4,
            ConeError::InsufficientPrecision => 3,
            _ => 2,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> CliError {
        let code = match e {
            OracleError::NotStrictlyConvex => 5,
            OracleError::RegionTooLarge => 3,
            OracleError::NotMember => 2,
        };
        CliError::new(code, e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "coneatoms",
    version,
    about = "Exact atoms of root-closed submonoids of Z^2"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    #[value(name = "M")]
    M,
    #[value(name = "Mo")]
    Mo,
    #[value(name = "Mgt0")]
    Mgt0,
    #[value(name = "Mogt0")]
    Mogt0,
}

impl FamilyArg {
    fn family(self) -> Family {
        match self {
            FamilyArg::M => Family::M,
            FamilyArg::Mo => Family::MCirc,
            FamilyArg::Mgt0 => Family::MGt0,
            FamilyArg::Mogt0 => Family::MCircGt0,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Continued fraction expansion, convergents and second convergents.
    Cf {
        /// Number literal: INT, INT/POSINT, or (INT+INT*sqrt(POSINT))/POSINT.
        #[arg(long, allow_hyphen_values = true)]
        value: String,
        /// Number of partial quotients to report (expansion of a rational
        /// value is always complete).
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        terms: u32,
        /// Rewrite a finite expansion to even length first.
        #[arg(long)]
        even: bool,
    },
    /// Atoms of one slope-bounded family inside a box.
    Atoms {
        #[arg(long)]
        family: FamilyArg,
        /// Slope literal, must be positive.
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
        bound: i64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Classification, property flags and atoms of an arbitrary cone.
    Cone {
        /// Path to a JSON cone spec.
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
        bound: i64,
        /// Emit the classification section (default: all sections).
        #[arg(long)]
        classify: bool,
        /// Emit the property flags section.
        #[arg(long)]
        properties: bool,
        /// Emit the atom listing section.
        #[arg(long)]
        atoms: bool,
    },
    /// Compare the closed-form enumeration against the exhaustive oracle.
    Verify {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
        bound: i64,
    },
    /// Render the cone, lattice and atoms as a deterministic SVG.
    Plot {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
        bound: i64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_value(text: &str) -> Result<ExactReal, CliError> {
    text.parse::<ExactReal>()
        .map_err(|e| CliError::parse(e.to_string()))
}

fn load_cone(path: &Path) -> Result<ConeSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(e, path))?;
    let (cone, warnings) = spec_file::parse_cone_file(&text)?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    Ok(cone)
}

fn print_json<T: serde::Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string(value).expect("output serializes")
    );
}

fn cmd_cf(value: &str, terms: u32, even: bool) -> Result<u8, CliError> {
    let value = parse_value(value)?;
    let mut cf = cf_expand(&value, terms as usize);
    // Even-length normalization only applies to finite expansions.
    if even && cf.is_finite() {
        cf = normalize_even(&cf).expect("finite expansion normalizes");
    }
    let quotient_count = match cf.term_count() {
        Some(n) => n,
        None => terms as usize,
    };
    let mut table = ConvergentTable::new(cf.clone());
    let mut quotients = Vec::new();
    let mut convergents = Vec::new();
    for n in 0..quotient_count as i64 {
        quotients.push(big_number(&table.quotient(n).expect("within expansion")));
        let (p, q) = table.convergent(n).expect("within expansion");
        convergents.push([big_number(&p), big_number(&q)]);
    }
    let mut second = Map::new();
    let mut n = -2i64;
    while n + 2 < quotient_count as i64 {
        match table.second_convergents(n) {
            Ok(row) => {
                let json_row: Vec<Value> = row
                    .iter()
                    .map(|(p, q)| {
                        Value::Array(vec![
                            Value::Number(big_number(p)),
                            Value::Number(big_number(q)),
                        ])
                    })
                    .collect();
                second.insert(n.to_string(), Value::Array(json_row));
            }
            Err(_) => {
                // Seed-level rows are undefined for nonpositive values.
            }
        }
        n += 2;
    }
    let periodic = match &cf {
        CfExpansion::Periodic { preperiod, period } => Some(PeriodicOutput {
            preperiod: preperiod.iter().map(big_number).collect(),
            period: period.iter().map(big_number).collect(),
        }),
        _ => None,
    };
    let truncated = matches!(cf, CfExpansion::Truncated(_)).then_some(true);
    print_json(&CfOutput {
        value: value.to_string(),
        partial_quotients: quotients,
        periodic,
        truncated,
        convergents,
        second_convergents: second,
    });
    Ok(0)
}

fn cmd_atoms(family: FamilyArg, alpha: &str, bound: i64, format: Format) -> Result<u8, CliError> {
    let alpha = parse_value(alpha)?;
    let spec = SpecialMonoid::new(family.family(), alpha.clone())?;
    let report = enumerate_atoms(&spec, bound)?;
    match format {
        Format::Json => {
            let count_formula = if matches!(family, FamilyArg::M) {
                closed_atom_count(&alpha).map(|c| big_number(&c))
            } else {
                None
            };
            print_json(&AtomsOutput {
                family: family.family().to_string(),
                alpha: alpha.to_string(),
                bound,
                atoms: point_list(&report.atoms),
                complete: report.complete_up_to_bound,
                count_formula,
            });
        }
        Format::Csv => print!("{}", atoms_csv(&report)),
    }
    Ok(0)
}

fn cmd_cone(
    path: &Path,
    bound: i64,
    want_classify: bool,
    want_properties: bool,
    want_atoms: bool,
) -> Result<u8, CliError> {
    let cone = load_cone(path)?;
    let all = !(want_classify || want_properties || want_atoms);
    let mut out = ConeOutput {
        classification: None,
        properties: None,
        atoms: None,
        bound: None,
        complete: None,
        atomic: None,
        note: None,
    };
    if all || want_classify {
        let class = classify(&cone)?;
        out.classification = Some(ClassificationJson::of(&class));
    }
    if all || want_properties {
        out.properties = Some(PropertiesJson::of(&monoid_properties(&cone)));
    }
    if all || want_atoms {
        let report = atoms_of_cone(&cone, bound)?;
        out.atoms = Some(point_list(&report.atoms));
        out.bound = Some(report.bound);
        out.complete = Some(report.complete_up_to_bound);
        if !report.atomic {
            out.atomic = Some(false);
        }
        out.note = report.note.clone();
    }
    print_json(&out);
    Ok(0)
}

fn format_points(points: &BTreeSet<LatticePoint>) -> String {
    let mut sorted: Vec<&LatticePoint> = points.iter().collect();
    sorted.sort_by_key(|p| p.report_key());
    let body: Vec<String> = sorted.iter().map(|p| format!("[{},{}]", p.x, p.y)).collect();
    format!("[{}]", body.join(","))
}

fn cmd_verify(path: &Path, bound: i64) -> Result<u8, CliError> {
    let cone = load_cone(path)?;
    let theorem = atoms_of_cone(&cone, bound)?;
    let oracle = oracle_atoms_in_box(&cone, bound)?;
    let t: BTreeSet<LatticePoint> = theorem.atom_set();
    let o: BTreeSet<LatticePoint> = oracle.atom_set();
    if t == o {
        println!("verify ok: {} atoms within bound {}", t.len(), bound);
        Ok(0)
    } else {
        let only_t: BTreeSet<LatticePoint> = t.difference(&o).copied().collect();
        let only_o: BTreeSet<LatticePoint> = o.difference(&t).copied().collect();
        println!("verify mismatch within bound {bound}");
        println!("theorem: {}", format_points(&t));
        println!("oracle: {}", format_points(&o));
        println!("only_theorem: {}", format_points(&only_t));
        println!("only_oracle: {}", format_points(&only_o));
        Ok(1)
    }
}

fn cmd_plot(path: &Path, bound: i64, out_path: &Path) -> Result<u8, CliError> {
    let cone = load_cone(path)?;
    let report = atoms_of_cone(&cone, bound)?;
    let rendered = svg::render(&cone, bound, &report.atoms);
    std::fs::write(out_path, rendered).map_err(|e| CliError::io(e, out_path))?;
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.cmd {
        Cmd::Cf { value, terms, even } => cmd_cf(&value, terms, even),
        Cmd::Atoms {
            family,
            alpha,
            bound,
            format,
        } => cmd_atoms(family, &alpha, bound, format),
        Cmd::Cone {
            spec,
            bound,
            classify,
            properties,
            atoms,
        } => cmd_cone(&spec, bound, classify, properties, atoms),
        Cmd::Verify { spec, bound } => cmd_verify(&spec, bound),
        Cmd::Plot { spec, bound, out } => cmd_plot(&spec, bound, &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}
