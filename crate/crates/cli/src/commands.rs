use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use atiyah_core::atiyah::{
    build_class_chern1, build_classical_atiyah, build_trunc_chern1, build_truncated_atiyah, check_cofactor_identity,
    check_det_trace, check_thm44, check_thm45, check_thm46, verify_classical_atiyah, verify_truncated_atiyah,
    AtiyahError, ChainMapReport,
};
use atiyah_core::complexes::{BundleComplex, ComplexError, LineBundle};
use atiyah_core::corpus::{double_line, nodal_cubic};
use atiyah_core::geometry::CoveredScheme;

use crate::criteria;
use crate::problem::{read_problem, Problem};
use crate::report::{self, status, Format, Report};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "atiyah", version, about = "Atiyah and Chern cocycles of bundle complexes")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the lift conditions of every complex in a problem file.
    Validate { file: PathBuf },
    /// Print the Atiyah cocycle of a complex.
    Atiyah {
        file: PathBuf,
        #[arg(long)]
        complex: String,
        #[arg(long)]
        classical: bool,
    },
    /// Print the first Chern cocycle of a complex.
    Chern {
        file: PathBuf,
        #[arg(long)]
        complex: String,
        #[arg(long)]
        classical: bool,
    },
    /// Run one identity check on a complex.
    Verify {
        file: PathBuf,
        #[arg(long)]
        complex: String,
        #[arg(long, value_parser = parse_check)]
        check: Check,
    },
    /// Matrix identities on random or generic matrices.
    Identity {
        #[arg(long, value_enum)]
        check: IdentityCheck,
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Run every acceptance criterion.
    Demo,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Check {
    ChainMap,
    ClassicalChainMap,
    Thm44(String),
    Thm45,
    Thm46(String),
}

fn parse_check(text: &str) -> Result<Check, String> {
    match text {
        "chain-map" => return Ok(Check::ChainMap),
        "classical-chain-map" => return Ok(Check::ClassicalChainMap),
        "thm45" => return Ok(Check::Thm45),
        _ => {}
    }
    match text.split_once(':') {
        Some(("thm44", other)) if !other.is_empty() => Ok(Check::Thm44(other.into())),
        Some(("thm46", other)) if !other.is_empty() => Ok(Check::Thm46(other.into())),
        _ => Err(format!(
            "unknown check `{text}`; expected chain-map, classical-chain-map, thm44:OTHER, thm45 or thm46:OTHER"
        )),
    }
}

impl Check {
    fn label(&self) -> String {
        match self {
            Check::ChainMap => "chain-map".into(),
            Check::ClassicalChainMap => "classical-chain-map".into(),
            Check::Thm44(o) => format!("thm44:{o}"),
            Check::Thm45 => "thm45".into(),
            Check::Thm46(o) => format!("thm46:{o}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IdentityCheck {
    DetTrace,
    Cofactor,
}

pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Validate { file } => validate(file),
        Command::Atiyah { file, complex, classical } => atiyah(file, complex, *classical),
        Command::Chern { file, complex, classical } => chern(file, complex, *classical),
        Command::Verify { file, complex, check } => verify(file, complex, check),
        Command::Identity { check, size, samples } => identity(*check, *size, *samples, cli.seed),
        Command::Demo => Ok(demo(cli.seed)),
    }
}

pub(crate) fn atiyah_error(e: AtiyahError) -> CliError {
    match e {
        AtiyahError::NonConstantRank
        | AtiyahError::SizeOutOfRange(_)
        | AtiyahError::Complex(ComplexError::NotALineBundle(_) | ComplexError::CoverMismatch) => {
            CliError::Usage(e.to_string())
        }
        other => CliError::Internal(other.to_string()),
    }
}

fn validate(file: &Path) -> Result<Report, CliError> {
    let problem = read_problem(file)?;
    let scheme = &problem.scheme;
    let mut passed = true;
    let mut entries = Vec::new();
    let mut text = String::new();
    for (name, r) in problem.validate() {
        passed &= r.is_valid();
        let failures: Vec<Value> = r.failures.iter().map(|f| report::validation_failure_json(scheme, f)).collect();
        entries.push(json!({"name": name, "valid": r.is_valid(), "failures": failures}));
        if r.is_valid() {
            text.push_str(&format!("{name}: valid\n"));
        } else {
            text.push_str(&format!("{name}: invalid, {} failing entries\n", r.failures.len()));
            for f in &r.failures {
                text.push_str(&format!("  {}\n", report::validation_failure_text(scheme, f)));
            }
        }
    }
    let json = json!({
        "command": "validate",
        "file": file.display().to_string(),
        "status": status(passed),
        "complexes": entries,
    });
    Ok(Report { passed, json, text })
}

/// Loads the file and checks that the named complexes are valid; an invalid
/// one yields a failing report instead of a problem.
fn load(file: &Path, command: &str, names: &[&str]) -> Result<Result<Problem, Report>, CliError> {
    let problem = read_problem(file)?;
    for name in names {
        let e = problem.complex(name)?;
        let r = atiyah_core::complexes::validate_complex(e);
        if !r.is_valid() {
            let scheme = &problem.scheme;
            let failures: Vec<Value> = r.failures.iter().map(|f| report::validation_failure_json(scheme, f)).collect();
            let mut text = format!("{name}: invalid complex\n");
            for f in &r.failures {
                text.push_str(&format!("  {}\n", report::validation_failure_text(scheme, f)));
            }
            let json = json!({"command": command, "complex": name, "status": "invalid", "failures": failures});
            return Ok(Err(Report { passed: false, json, text }));
        }
    }
    Ok(Ok(problem))
}

fn atiyah(file: &Path, name: &str, classical: bool) -> Result<Report, CliError> {
    let problem = match load(file, "atiyah", &[name])? {
        Ok(p) => p,
        Err(r) => return Ok(r),
    };
    let e = problem.complex(name)?;
    let scheme = &problem.scheme;
    if classical {
        let rep = build_classical_atiyah(e).map_err(atiyah_error)?;
        Ok(Report { passed: true, json: report::classical_json(scheme, name, &rep), text: report::classical_text(scheme, name, &rep) })
    } else {
        let rep = build_truncated_atiyah(e).map_err(atiyah_error)?;
        Ok(Report { passed: true, json: report::truncated_json(scheme, name, &rep), text: report::truncated_text(scheme, name, &rep) })
    }
}

fn chern(file: &Path, name: &str, classical: bool) -> Result<Report, CliError> {
    let problem = match load(file, "chern", &[name])? {
        Ok(p) => p,
        Err(r) => return Ok(r),
    };
    let e = problem.complex(name)?;
    if classical {
        Ok(report::class_chern_report(&problem.scheme, name, &build_class_chern1(e).map_err(atiyah_error)?))
    } else {
        Ok(report::trunc_chern_report(&problem.scheme, name, &build_trunc_chern1(e).map_err(atiyah_error)?))
    }
}

fn chain_report(scheme: &CoveredScheme, name: &str, check: &str, r: &ChainMapReport) -> Report {
    let failures: Vec<Value> = r.failures.iter().map(|f| report::chain_failure_json(scheme, f)).collect();
    let json = json!({
        "command": "verify",
        "complex": name,
        "check": check,
        "status": status(r.passed()),
        "identities": r.checked,
        "failures": failures,
    });
    let mut text = format!("{check} on {name}: {} ({} identities)\n", status(r.passed()), r.checked);
    for f in &r.failures {
        text.push_str(&format!("  {}\n", report::chain_failure_text(scheme, f)));
    }
    Report { passed: r.passed(), json, text }
}

fn line_bundle(e: &BundleComplex, name: &str) -> Result<LineBundle, CliError> {
    LineBundle::new(e.clone()).map_err(|err| CliError::Usage(format!("`{name}`: {err}")))
}

fn verify(file: &Path, name: &str, check: &Check) -> Result<Report, CliError> {
    let other = match check {
        Check::Thm44(o) | Check::Thm46(o) => Some(o.as_str()),
        _ => None,
    };
    let names: Vec<&str> = std::iter::once(name).chain(other).collect();
    let problem = match load(file, "verify", &names)? {
        Ok(p) => p,
        Err(r) => return Ok(r),
    };
    let scheme = &problem.scheme;
    let e = problem.complex(name)?;
    let label = check.label();
    let simple = |passed: bool, fields: Value| {
        let mut json = json!({"command": "verify", "complex": name, "check": label, "status": status(passed)});
        if let (Value::Object(out), Value::Object(extra)) = (&mut json, fields) {
            out.extend(extra);
        }
        Report { passed, json, text: format!("{label} on {name}: {}\n", status(passed)) }
    };
    match check {
        Check::ChainMap => {
            let rep = build_truncated_atiyah(e).map_err(atiyah_error)?;
            Ok(chain_report(scheme, name, &label, &verify_truncated_atiyah(e, &rep).map_err(atiyah_error)?))
        }
        Check::ClassicalChainMap => {
            let rep = build_classical_atiyah(e).map_err(atiyah_error)?;
            Ok(chain_report(scheme, name, &label, &verify_classical_atiyah(e, &rep).map_err(atiyah_error)?))
        }
        Check::Thm44(o) => {
            let l = line_bundle(e, name)?;
            let m = line_bundle(problem.complex(o)?, o)?;
            let passed = check_thm44(&l, &m).map_err(atiyah_error)?;
            Ok(simple(passed, json!({"other": o})))
        }
        Check::Thm45 => Ok(simple(check_thm45(e).map_err(atiyah_error)?, json!({}))),
        Check::Thm46(o) => {
            let r = check_thm46(e, problem.complex(o)?).map_err(atiyah_error)?;
            let fields = json!({
                "other": o,
                "dual": r.dual,
                "sum": r.sum,
                "tensor": r.tensor,
                "hom": r.hom,
                "det_tensor": r.det_tensor,
            });
            let mut report = simple(r.all(), fields);
            for (k, v) in [("dual", r.dual), ("sum", r.sum), ("tensor", r.tensor), ("hom", r.hom), ("det_tensor", r.det_tensor)] {
                report.text.push_str(&format!("  {k}: {}\n", status(v)));
            }
            Ok(report)
        }
    }
}

fn identity(check: IdentityCheck, size: usize, samples: usize, seed: u64) -> Result<Report, CliError> {
    match check {
        IdentityCheck::DetTrace => {
            if size == 0 {
                return Err(CliError::Usage("--size must be at least 1".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut passed = true;
            let mut schemes = Vec::new();
            let mut text = String::new();
            for (label, s) in [("nodal", nodal_cubic(false)), ("double", double_line(false))] {
                let chart = s.chart_set(&[0, 1]).map_err(|e| CliError::Internal(e.to_string()))?;
                let ok = check_det_trace(size, &s, &chart, samples, &mut rng).map_err(atiyah_error)?;
                passed &= ok;
                schemes.push(json!({"scheme": label, "status": status(ok)}));
                text.push_str(&format!("det-trace m = {size} on {label}: {} ({samples} samples)\n", status(ok)));
            }
            let json = json!({
                "command": "identity",
                "check": "det-trace",
                "size": size,
                "samples": samples,
                "seed": seed,
                "status": status(passed),
                "schemes": schemes,
            });
            Ok(Report { passed, json, text })
        }
        IdentityCheck::Cofactor => {
            let passed = check_cofactor_identity(size).map_err(atiyah_error)?;
            let json = json!({"command": "identity", "check": "cofactor", "size": size, "status": status(passed)});
            Ok(Report { passed, json, text: format!("cofactor m = {size}: {}\n", status(passed)) })
        }
    }
}

fn demo(seed: u64) -> Report {
    let results = criteria::run_all(seed);
    let passed = results.iter().all(|c| c.passed);
    let mut text = String::new();
    for c in &results {
        text.push_str(&c.line());
        text.push('\n');
    }
    text.push_str(&format!("demo: {}\n", status(passed)));
    let list: Vec<Value> = results
        .iter()
        .map(|c| json!({"id": c.id, "name": c.name, "status": status(c.passed), "detail": c.detail}))
        .collect();
    let json = json!({"command": "demo", "seed": seed, "status": status(passed), "criteria": list});
    Report { passed, json, text }
}
