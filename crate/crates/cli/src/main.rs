//! `nilstab`: validate groups and cocycles, sweep multiplicativity defects,
//! and certify non-perturbability of the phase-shift representations.
//!
//! Exit status: 0 on success, 1 when a check or certificate fails, 2 on
//! usage or parse errors.

mod sources;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use nilstab_core::cohomology::{cocycle_check, skinny_check, CheckMode};
use nilstab_core::group::validate_group;
use nilstab_core::obstruction::certify_nonperturbability;
use nilstab_core::report::{random_element, SampleConfig, ValidationReport, DEFAULT_SEED};
use nilstab_core::representation::{sweep, SWEEP_CSV_HEADER};
use nilstab_core::Error;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) => Failure::Usage(e.to_string()),
            _ => Failure::Check(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "nilstab", version, about = "Asymptotic representations of nilpotent groups and their winding-number obstruction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the group axioms and, with --cocycle, the cocycle and skinniness identities.
    Validate(CommonArgs),
    /// Certify that rho_n pairs to -<sigma, c> with the cycle for every admissible n.
    Certify(CommonArgs),
    /// Tabulate multiplicativity defects against their bounds.
    Sweep(CommonArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// lattice:<m>, heisenberg3, or a group JSON file
    #[arg(long)]
    group: String,
    /// builtin:z2_skinny, builtin:heisenberg_skinny, zero, or a cocycle JSON file
    #[arg(long)]
    cocycle: Option<String>,
    /// builtin:voiculescu, builtin:c1, builtin:c:<k>, or a chain JSON file
    #[arg(long)]
    cycle: Option<String>,
    /// Comma-separated matrix dimensions
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 3)]
    bound: i64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Also run the exhaustive cocycle check on [-2, 2]^m
    #[arg(long)]
    grid: bool,
}

const DEFAULT_CERTIFY_N: &[usize] = &[16, 17, 32, 33, 64, 65];
const DEFAULT_SWEEP_N: &[usize] = &[8, 16, 32, 64, 128, 256];
const DEFAULT_SWEEP_PAIRS: usize = 10;

impl CommonArgs {
    fn check(&self) -> Result<(), Failure> {
        if self.bound < 1 {
            return Err(Failure::Usage("--bound must be at least 1".into()));
        }
        if self.n.contains(&0) {
            return Err(Failure::Usage("--n entries must be positive".into()));
        }
        Ok(())
    }

    fn n_list(&self, default: &[usize]) -> Vec<usize> {
        if self.n.is_empty() {
            default.to_vec()
        } else {
            self.n.clone()
        }
    }

    fn config(&self, default: SampleConfig) -> SampleConfig {
        SampleConfig::new(self.samples.unwrap_or(default.samples), self.bound, self.seed)
    }

    fn require_cocycle(&self) -> Result<&str, Failure> {
        self.cocycle
            .as_deref()
            .ok_or_else(|| Failure::Usage("--cocycle is required".into()))
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Usage(format!("cannot write output: {e}")))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialises");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct ValidateOutput<'a> {
    command: &'static str,
    group: &'a str,
    cocycle: Option<&'a str>,
    seed: u64,
    bound: i64,
    passed: bool,
    reports: Vec<ValidationReport>,
}

fn cmd_validate(args: &CommonArgs) -> Result<bool, Failure> {
    let group = sources::raw_group(&args.group)?;
    let mut reports = vec![validate_group(&group, &args.config(SampleConfig::group_default()))];
    if let Some(spec) = &args.cocycle {
        let sigma = sources::cocycle(spec, &group)?;
        let cfg = args.config(SampleConfig::cocycle_default());
        reports.push(cocycle_check(&sigma, CheckMode::Sampled(cfg)));
        if args.grid {
            reports.push(cocycle_check(&sigma, CheckMode::grid()));
        }
        reports.push(skinny_check(&sigma, &cfg));
    }
    let passed = reports.iter().all(|r| r.passed());
    let output = ValidateOutput {
        command: "validate",
        group: &args.group,
        cocycle: args.cocycle.as_deref(),
        seed: args.seed,
        bound: args.bound,
        passed,
        reports,
    };
    let text: String = output.reports.iter().map(|r| r.to_string()).collect();
    let text = format!("{text}seed {}\n{}\n", args.seed, if passed { "all checks passed" } else { "checks failed" });
    match (args.format, &args.out) {
        (Some(Format::Json), out) => emit(out, &to_json(&output))?,
        (_, Some(_)) => {
            emit(&args.out, &to_json(&output))?;
            emit(&None, &text)?;
        }
        (_, None) => emit(&None, &text)?,
    }
    Ok(passed)
}

#[derive(Serialize)]
struct CertifyOutput<'a> {
    command: &'static str,
    group: &'a str,
    cocycle: &'a str,
    cycle: &'a str,
    seed: u64,
    certificate: nilstab_core::obstruction::CertificateReport,
}

fn cmd_certify(args: &CommonArgs) -> Result<bool, Failure> {
    let group = sources::validated_group(&args.group)?;
    let cocycle_spec = args.require_cocycle()?;
    let sigma = sources::cocycle(cocycle_spec, &group)?;
    let chain = match &args.cycle {
        Some(spec) => sources::cycle(spec, group.hirsch())?,
        None => sources::default_cycle(group.hirsch())?,
    };
    let report = certify_nonperturbability(&sigma, &chain, &args.n_list(DEFAULT_CERTIFY_N))?;
    let mut summary = String::new();
    for entry in &report.entries {
        match &entry.pairing {
            Some(p) => summary.push_str(&format!(
                "n = {}: pairing {} (raw {}, residual {:e})\n",
                entry.n,
                p.rounded.map(|r| r.to_string()).unwrap_or_default(),
                p.raw,
                p.residual
            )),
            None => summary.push_str(&format!("n = {}: {}\n", entry.n, entry.status)),
        }
    }
    summary.push_str(&format!("<sigma, c> = {}\n{}\n", report.cocycle_pairing, report.statement));
    let output = CertifyOutput {
        command: "certify",
        group: &args.group,
        cocycle: cocycle_spec,
        cycle: args.cycle.as_deref().unwrap_or("default"),
        seed: args.seed,
        certificate: report,
    };
    match (args.format, &args.out) {
        (Some(Format::Text), None) => emit(&None, &summary)?,
        (_, Some(_)) => {
            emit(&args.out, &to_json(&output))?;
            emit(&None, &summary)?;
        }
        (_, None) => emit(&None, &to_json(&output))?,
    }
    Ok(true)
}

#[derive(Serialize)]
struct SweepOutput<'a> {
    command: &'static str,
    group: &'a str,
    cocycle: &'a str,
    seed: u64,
    bound: i64,
    rows: Vec<nilstab_core::representation::SweepRow>,
}

fn cmd_sweep(args: &CommonArgs) -> Result<bool, Failure> {
    let group = sources::validated_group(&args.group)?;
    let cocycle_spec = args.require_cocycle()?;
    let sigma = sources::cocycle(cocycle_spec, &group)?;
    let cfg = SampleConfig::new(args.samples.unwrap_or(DEFAULT_SWEEP_PAIRS), args.bound, args.seed);
    let mut rng = cfg.rng();
    let m = group.hirsch();
    let pairs: Vec<_> = (0..cfg.samples)
        .map(|_| {
            let x = random_element(&mut rng, m, cfg.bound);
            let y = random_element(&mut rng, m, cfg.bound);
            (x, y)
        })
        .collect();
    let rows = sweep(&sigma, &args.n_list(DEFAULT_SWEEP_N), &pairs)?;
    let text = match args.format.unwrap_or(Format::Csv) {
        Format::Json => to_json(&SweepOutput {
            command: "sweep",
            group: &args.group,
            cocycle: cocycle_spec,
            seed: args.seed,
            bound: args.bound,
            rows,
        }),
        _ => {
            let mut s = format!(
                "# nilstab sweep group={} cocycle={} seed={} bound={}\n{SWEEP_CSV_HEADER}\n",
                args.group, cocycle_spec, args.seed, args.bound
            );
            for row in &rows {
                s.push_str(&row.to_csv());
                s.push('\n');
            }
            s
        }
    };
    emit(&args.out, &text)?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, run): (&CommonArgs, fn(&CommonArgs) -> Result<bool, Failure>) = match &cli.command {
        Command::Validate(a) => (a, cmd_validate),
        Command::Certify(a) => (a, cmd_certify),
        Command::Sweep(a) => (a, cmd_sweep),
    };
    match args.check().and_then(|_| run(args)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
