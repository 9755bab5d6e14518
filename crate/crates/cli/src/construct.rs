use std::path::{Path, PathBuf};

use clap::Args;
use k3lab::constructions::{
    build_genus4, build_genus6, build_genus8_nine, build_genus8_secant, extend_genus4_curve, verify_report_with,
    ConstructionError, ConstructionReport,
};
use k3lab::exactlin::FiniteField;
use k3lab::grassmann::{GradedIdeal, IdealDump};
use k3lab::k3lattice::SCHEMA;
use serde_json::json;

use crate::{emit, CmdResult, Config, Exit, Failure, FieldSpec};

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(4..=8))]
    genus: u32,
    /// Number of elliptic pencils (genus 8: 1..6 or 9)
    #[arg(long)]
    pencils: Option<usize>,
    /// Field characteristic p
    #[arg(long)]
    field: Option<u32>,
    /// Work over F_{p^k}
    #[arg(long, default_value_t = 1)]
    field_degree: u32,
    #[arg(long)]
    seed: Option<u64>,
    /// Genus 4 only: extend the curve V(Q', Y') in P^3 given as an ideal dump
    #[arg(long)]
    curve: Option<PathBuf>,
    /// Also write the report here
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    report: PathBuf,
    /// Replay over F_p instead of the recorded field
    #[arg(long)]
    field: Option<u32>,
    #[arg(long, default_value_t = 1, requires = "field")]
    field_degree: u32,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    report: PathBuf,
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::malformed(msg.into())
}

fn construction_failure(e: ConstructionError) -> Failure {
    let code = match e {
        ConstructionError::RetryExhausted { .. } => Exit::Exhausted,
        ConstructionError::SeedMismatch { .. } => Exit::Fail,
        _ => Exit::Malformed,
    };
    Failure { code, message: e.to_string() }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn summarize(r: &ConstructionReport) {
    let failed: Vec<_> = r.failed_checks().collect();
    eprintln!(
        "genus {} ({:?}) over F_{}^{} seed {} attempt {}: {} pencils, {}/{} checks passed -> {:?}",
        r.genus,
        r.pipeline,
        r.field.p,
        r.field.k,
        r.seed,
        r.attempt,
        r.pencil_count,
        r.checks.len() - failed.len(),
        r.checks.len(),
        r.status,
    );
    for c in failed {
        eprintln!("  FAIL {}: expected {}, got {}", c.name, c.expected, c.got);
    }
}

pub fn construct(args: ConstructArgs, config: &Config) -> CmdResult {
    let pencils = match (args.genus, args.pencils) {
        (4, None | Some(2)) => 2,
        (6, None | Some(5)) => 5,
        (8, Some(i @ (1..=6 | 9))) => i,
        (8, Some(i @ (7 | 8))) => {
            return Err(usage(format!("genus 8 with {i} pencils is not supported: no construction is known")))
        }
        (8, None) => return Err(usage("genus 8 needs --pencils (1..6 or 9)")),
        (4 | 6, Some(i)) => return Err(usage(format!("genus {} carries exactly {} pencils, not {i}", args.genus, if args.genus == 4 { 2 } else { 5 }))),
        (8, Some(i)) => return Err(usage(format!("unsupported pencil count {i} for genus 8"))),
        (g, _) => return Err(usage(format!("unsupported genus {g}; use 4, 6 or 8"))),
    };
    if args.curve.is_some() && args.genus != 4 {
        return Err(usage("--curve applies to genus 4 only"));
    }
    let default_p = match args.genus {
        4 if args.curve.is_none() => 7,
        4 | 6 => 11,
        _ => 13,
    };
    let spec = match args.field {
        Some(p) => FieldSpec { p, k: args.field_degree },
        None => config.field.unwrap_or(FieldSpec { p: default_p, k: 1 }),
    };
    let field = FiniteField::new(spec.p, spec.k).map_err(Failure::malformed)?;
    let seed = args.seed.or(config.seed).unwrap_or(1);
    let cfg = config.construction();

    let result = match (args.genus, &args.curve) {
        (4, Some(path)) => {
            let dump: IdealDump = read_json(path)?;
            let curve = GradedIdeal::from_dump(&dump).map_err(Failure::malformed)?;
            if curve.field().descriptor() != field.descriptor() {
                return Err(usage("the curve is defined over a different field than --field"));
            }
            let [q, y] = curve.generators() else {
                return Err(usage("curve ideal needs exactly a quadric and a cubic"));
            };
            extend_genus4_curve(&field, q, y, seed, &cfg)
        }
        (4, None) => build_genus4(&field, seed, &cfg),
        (6, _) => build_genus6(&field, seed, &cfg),
        (_, _) if pencils == 9 => build_genus8_nine(&field, seed, &cfg),
        _ => build_genus8_secant(pencils, &field, seed, &cfg),
    };
    let report = result.map_err(construction_failure)?;
    summarize(&report);
    let text = report.to_json();
    if let Some(path) = args.output.as_ref().or(config.output.as_ref()) {
        std::fs::write(path, format!("{text}\n")).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }
    println!("{text}");
    Ok(if report.passed() { Exit::Ok } else { Exit::Fail })
}

pub fn verify(args: VerifyArgs, config: &Config) -> CmdResult {
    let report: ConstructionReport = read_json(&args.report)?;
    let field = match args.field {
        Some(p) => Some(FiniteField::new(p, args.field_degree).map_err(Failure::malformed)?.descriptor()),
        None => None,
    };
    let ok = verify_report_with(&report, field.as_ref(), &config.construction()).map_err(construction_failure)?;
    eprintln!("{}: {}", args.report.display(), if ok { "reproduced" } else { "MISMATCH" });
    emit(&json!({
        "schema": SCHEMA,
        "report": args.report.display().to_string(),
        "pipeline": report.pipeline,
        "seed": report.seed,
        "reproduced": ok,
    }));
    Ok(if ok { Exit::Ok } else { Exit::Fail })
}

pub fn report(args: ReportArgs) -> CmdResult {
    let r: ConstructionReport = read_json(&args.report)?;
    summarize(&r);
    let failed: Vec<_> = r.failed_checks().collect();
    emit(&json!({
        "schema": SCHEMA,
        "pipeline": r.pipeline,
        "genus": r.genus,
        "field": { "p": r.field.p, "k": r.field.k },
        "seed": r.seed,
        "status": r.status,
        "pencil_count": r.pencil_count,
        "checks": r.checks.len(),
        "failed": failed,
        "hilbert": r.hilbert,
        "smoothness": r.smoothness,
        "notes": r.notes,
    }));
    Ok(if r.passed() { Exit::Ok } else { Exit::Fail })
}
