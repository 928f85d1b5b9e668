#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod report;

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use foliate_core::bending::{self, complex_radial_bending, torus_bending, Bending, BendingResult, FoliationSpec};
use foliate_core::bounds::{
    self, complex_radial_integral_check, einstein_bound, integral_formula_check, lower_bound, minimizer_report,
    table1_report, BoundCase,
};
use foliate_core::{
    FocalVariety, FoliateError, ModelSpace, QuadratureConfig, SplitDims, TorsionCoefficients, TubeProfile,
};
use serde::Serialize;

use report::{
    BendingRecord, BoundRecord, IntegralRecord, MinimizerRecord, Table1Record, Table1Report, TorusRecord,
    SCHEMA_VERSION,
};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_UNDECIDED: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "foliate",
    version,
    about = "Total bending and energy of singular foliations on rank-one symmetric spaces"
)]
struct Cli {
    /// Curvature scale λ.
    #[arg(long, global = true, env = "FOLIATE_LAMBDA", default_value_t = 1.0)]
    lambda: f64,

    /// Relative quadrature tolerance.
    #[arg(long, global = true, env = "FOLIATE_REL_TOL", default_value_t = 1e-10)]
    rel_tol: f64,

    /// Absolute quadrature tolerance.
    #[arg(long, global = true, env = "FOLIATE_ABS_TOL", default_value_t = 1e-12)]
    abs_tol: f64,

    /// Maximum bisection depth of the adaptive quadrature.
    #[arg(long, global = true, default_value_t = 40)]
    max_depth: usize,

    /// Emit JSON instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Total bending of a tubular (radial) foliation or its ε-deformation.
    Bending {
        /// Ambient space: S:m, RP:m, CP:m, HP:m or CaP2.
        #[arg(long)]
        space: String,
        /// Focal variety: point, or sub:FAMILY:k.
        #[arg(long)]
        focal: String,
        /// Half-angle of the ε-deformation window, in [0, π/2].
        #[arg(long)]
        epsilon: Option<f64>,
        /// Emit a CSV record instead of human-readable text.
        #[arg(long)]
        csv: bool,
        /// Write the sampled radial profile (r, α_i, θ) as CSV to this path.
        #[arg(long)]
        emit_profile: Option<PathBuf>,
        /// Number of profile samples.
        #[arg(long, default_value_t = 200)]
        profile_samples: usize,
    },
    /// Height-function foliation of a rotational torus.
    Torus {
        #[arg(long = "R")]
        big_r: f64,
        #[arg(long = "r")]
        small_r: f64,
        /// Include the area element r(R + r cos θ) in the integrand.
        #[arg(long)]
        area_weighted: bool,
    },
    /// Complex radial foliation around a point of CP^m.
    ComplexRadial {
        #[arg(long)]
        m: usize,
    },
    /// Reproduce the catalog of closed-form bendings.
    Table1,
    /// Compare ∫ s_mix with 2∫(μ_V + μ_H).
    CheckIntegral {
        #[arg(long)]
        space: String,
        /// Focal variety, or `complex-radial` for the complex radial foliation on CP^m.
        #[arg(long)]
        focal: String,
    },
    /// Lower bound for the bending of a q-dimensional distribution.
    Bounds {
        #[arg(long)]
        space: String,
        #[arg(long)]
        q: usize,
        #[arg(long, value_enum)]
        case: CaseLabel,
    },
    /// Compare the radial foliation with the case-I lower bound.
    Minimizer {
        #[arg(long)]
        space: String,
    },
    /// Run the invariant checks on seeded random data.
    Selfcheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CaseLabel {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    Ii,
    #[value(name = "III")]
    Iii,
}

impl CaseLabel {
    fn as_str(self) -> &'static str {
        match self {
            CaseLabel::I => "I",
            CaseLabel::Ii => "II",
            CaseLabel::Iii => "III",
        }
    }
}

#[derive(Debug)]
enum CliError {
    Core(FoliateError),
    Io(io::Error),
    Failed(String),
}

impl From<FoliateError> for CliError {
    fn from(e: FoliateError) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(io::Error::other(e))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(io::Error::other(e))
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(FoliateError::Undecided { .. }) => EXIT_UNDECIDED,
            CliError::Core(
                FoliateError::InvalidSpace(_)
                | FoliateError::OutOfCatalog { .. }
                | FoliateError::NotComputable { .. }
                | FoliateError::NotInvariant { .. }
                | FoliateError::InvalidArgument(_)
                | FoliateError::InvalidBoundCase { .. }
                | FoliateError::Parse(_)
                | FoliateError::InvalidDims { .. },
            ) => EXIT_USAGE,
            _ => EXIT_FAILURE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::Failed(m) => f.write_str(m),
        }
    }
}

type CliResult = Result<(), CliError>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn quad_config(cli: &Cli) -> Result<QuadratureConfig<f64>, CliError> {
    let cfg =
        QuadratureConfig::default().with_rel_tol(cli.rel_tol).with_abs_tol(cli.abs_tol).with_max_depth(cli.max_depth);
    cfg.validate()?;
    Ok(cfg)
}

fn emit_json<T: Serialize>(value: &T) -> CliResult {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn run(cli: &Cli) -> CliResult {
    let cfg = quad_config(cli)?;
    let lambda = cli.lambda;
    match &cli.command {
        Command::Bending { space, focal, epsilon, csv, emit_profile, profile_samples } => {
            let space = ModelSpace::parse(space, lambda)?;
            let focal = FocalVariety::parse(focal)?;
            let profile = TubeProfile::new(space, focal)?;
            let spec = match epsilon {
                Some(eps) => FoliationSpec::EpsilonDeformation { space, focal, epsilon: *eps },
                None => FoliationSpec::RadialOrTubular { space, focal },
            };
            let result = bending::bending(&spec, &cfg)?;
            let mut record = BendingRecord::new(spec.to_string(), &result, space.dim(), Some(&profile));
            if epsilon.is_none() {
                record.closed_form = bounds::closed_form(&space, &focal).ok().map(|c| c.to_string());
            }
            if let Some(path) = emit_profile {
                write_profile(&profile, *profile_samples, path)?;
            }
            if *csv && cli.json {
                return Err(FoliateError::InvalidArgument("--json and --csv are mutually exclusive".into()).into());
            }
            if *csv {
                let mut w = csv::Writer::from_writer(io::stdout());
                w.write_record(BendingRecord::csv_header())?;
                w.write_record(record.csv_row())?;
                w.flush()?;
                Ok(())
            } else if cli.json {
                emit_json(&record)
            } else {
                print!("{}", record.human());
                Ok(())
            }
        }
        Command::Torus { big_r, small_r, area_weighted } => {
            let t = torus_bending(*big_r, *small_r, *area_weighted, &cfg)?;
            let record = TorusRecord {
                schema_version: SCHEMA_VERSION,
                big_r: *big_r,
                small_r: *small_r,
                area_weighted: *area_weighted,
                value: t.value,
                error_estimate: t.error_estimate,
                upper_bound: t.upper_bound,
                within_bound: t.value <= t.upper_bound,
            };
            if cli.json {
                return emit_json(&record);
            }
            let weighting = if *area_weighted { " (area-weighted)" } else { "" };
            println!("torus R={big_r} r={small_r}{weighting}");
            println!("B = {:.6}", t.value);
            println!("upper bound 2(π/(R−r))² = {:.6}", t.upper_bound);
            Ok(())
        }
        Command::ComplexRadial { m } => {
            let result = complex_radial_bending(*m, lambda, &cfg)?;
            let spec = FoliationSpec::ComplexRadial { m: *m, lambda };
            let profile = TubeProfile::new(ModelSpace::complex_projective(*m, lambda)?, FocalVariety::Point)?;
            let mut record = BendingRecord::new(spec.to_string(), &result, 2 * m, Some(&profile));
            if *m == 2 {
                record.closed_form = Some("2·λ".into());
            }
            if cli.json {
                emit_json(&record)
            } else {
                print!("{}", record.human());
                Ok(())
            }
        }
        Command::Table1 => {
            if !(lambda > 0.0) {
                return Err(FoliateError::InvalidArgument(format!("lambda must be positive, got {lambda}")).into());
            }
            let rows = table1_report(lambda, &cfg)?;
            let failed = rows.iter().filter(|r| r.status.is_failure()).count();
            let report = Table1Report {
                schema_version: SCHEMA_VERSION,
                lambda,
                rows: rows.iter().map(Table1Record::new).collect(),
            };
            if cli.json {
                emit_json(&report)?;
            } else {
                println!("{:<6} {:<10} {:<14} {:<22} status", "space", "focal", "closed form", "B/Vol");
                for r in &report.rows {
                    println!("{}", r.human());
                }
            }
            if failed > 0 {
                return Err(CliError::Failed(format!("{failed} catalog row(s) not reproduced")));
            }
            Ok(())
        }
        Command::CheckIntegral { space, focal } => {
            let (label, check) = if focal == "complex-radial" {
                let s = ModelSpace::parse(space, lambda)?;
                if s.family() != foliate_core::Family::ComplexProjective {
                    return Err(FoliateError::InvalidArgument("complex-radial needs a CP:m space".into()).into());
                }
                (format!("complex-radial {s}"), complex_radial_integral_check(s.m(), lambda, &cfg)?)
            } else {
                let s = ModelSpace::parse(space, lambda)?;
                let f = FocalVariety::parse(focal)?;
                (format!("radial {s} {f}"), integral_formula_check(&TubeProfile::new(s, f)?, &cfg)?)
            };
            let record = IntegralRecord::new(label, &check);
            if cli.json {
                return emit_json(&record);
            }
            println!("{}", record.spec);
            match (record.lhs, record.rhs, record.relative_gap) {
                (Some(l), Some(r), Some(g)) => {
                    println!("∫s_mix/Vol = {l:.9}");
                    println!("2∫(μ_V+μ_H)/Vol = {r:.9}");
                    println!("relative gap = {g:.3e}");
                }
                _ => println!("not applicable: {}", record.reason.unwrap_or_default()),
            }
            Ok(())
        }
        Command::Bounds { space, q, case } => {
            let s = ModelSpace::parse(space, lambda)?;
            let bc = BoundCase::from_label(case.as_str(), s, *q)?;
            let b = lower_bound(&bc)?;
            let einstein = if *q == 1 { Some(einstein_bound(&s)?) } else { None };
            let record = BoundRecord {
                schema_version: SCHEMA_VERSION,
                space: s.to_string(),
                q: *q,
                case: bc.kind().to_string(),
                coefficient: b.coefficient,
                s_mix: b.s_mix,
                bound_per_volume: b.value,
                einstein_bound_per_volume: einstein,
                hypothesis_assumed: b.hypothesis_assumed,
            };
            if cli.json {
                return emit_json(&record);
            }
            println!("{} q={} case {}", record.space, q, record.case);
            println!("B/Vol >= {:.6} (coefficient {:.6} × s_mix {:.6})", b.value, b.coefficient, b.s_mix);
            if let Some(e) = einstein {
                println!("Einstein bound τ/(2n(n−2)) = {e:.6}");
            }
            if b.hypothesis_assumed {
                println!("hypothesis assumed: umbilicity of the distribution is not verified");
            }
            Ok(())
        }
        Command::Minimizer { space } => {
            let s = ModelSpace::parse(space, lambda)?;
            let r = minimizer_report(s, &cfg)?;
            let record = MinimizerRecord::new(&r);
            if cli.json {
                return emit_json(&record);
            }
            println!("{}", record.space);
            println!("case-I bound B/Vol >= {:.9}", record.bound_per_volume);
            match record.value_per_volume {
                Some(v) => println!("radial foliation B/Vol = {v:.9}"),
                None => println!("radial foliation B/Vol = ∞"),
            }
            println!("umbilical: {}, integrable: {}", record.umbilical, record.integrable);
            println!("verdict: {}", record.verdict);
            Ok(())
        }
        Command::Selfcheck { seed } => selfcheck(*seed, &cfg, cli.json),
    }
}

fn write_profile(profile: &TubeProfile<f64>, samples: usize, path: &PathBuf) -> CliResult {
    if samples == 0 {
        return Err(FoliateError::InvalidArgument("profile needs at least one sample".into()).into());
    }
    let mut w = csv::Writer::from_writer(File::create(path)?);
    let mut header = vec!["r".to_string()];
    header.extend((1..=profile.branches().len()).map(|i| format!("alpha_{i}")));
    header.push("theta".into());
    w.write_record(&header)?;
    for s in profile.sample(samples) {
        let mut row = vec![s.r.to_string()];
        row.extend(s.alphas.iter().map(|a| a.to_string()));
        row.push(s.theta.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct SelfcheckLine {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn selfcheck(seed: u64, cfg: &QuadratureConfig<f64>, json: bool) -> CliResult {
    let mut lines = Vec::new();
    let mut worst = 0.0f64;
    let mut ok = true;
    for i in 0..1000u64 {
        let q = 1 + (i % 5) as usize;
        let h = 1 + ((i / 5) % 5) as usize;
        let xi = TorsionCoefficients::<f64>::random(SplitDims::new(q + h, q)?, seed.wrapping_add(i));
        let tol = 64.0 * f64::EPSILON * xi.roundoff_scale().max(1.0);
        let (rv, rh) = xi.mu_identity_residual();
        let (sv, sh) = xi.sigma_inequality_slack();
        let (bv, bh) = xi.block_mean_curvature_slacks();
        worst = worst.max(rv.abs()).max(rh.abs());
        ok &= rv.abs() <= tol && rh.abs() <= tol;
        ok &= sv >= -tol && sh >= -tol && bv >= -tol && bh >= -tol;
        ok &= xi.mean_curvature_bound_slack() >= -tol;
    }
    lines.push(SelfcheckLine {
        name: "torsion identities and slacks",
        passed: ok,
        detail: format!("1000 arrays, worst residual {worst:.1e}"),
    });
    let rows = table1_report(1.0, cfg)?;
    let failures = rows.iter().filter(|r| r.status.is_failure()).count();
    lines.push(SelfcheckLine {
        name: "catalog reproduction",
        passed: failures == 0,
        detail: format!("{} rows, {failures} mismatches", rows.len()),
    });
    let cr: Bending<f64> = complex_radial_bending(2, 1.0, cfg)?;
    let cr_ok = matches!(cr.per_volume, BendingResult::Finite { value, .. } if (value - 2.0).abs() < 1e-6);
    lines.push(SelfcheckLine {
        name: "complex radial on CP:2",
        passed: cr_ok,
        detail: format!("{:?}", cr.per_volume.value()),
    });
    let all = lines.iter().all(|l| l.passed);
    if json {
        emit_json(&lines)?;
    } else {
        for l in &lines {
            println!("{} {}: {}", if l.passed { "PASS" } else { "FAIL" }, l.name, l.detail);
        }
    }
    if all {
        Ok(())
    } else {
        Err(CliError::Failed("self-check failed".into()))
    }
}
