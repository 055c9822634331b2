use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use homport::fock::{full_distribution_with, Caps, FockConfig};
use homport::hom::{parity_sweep_with, verify_cyclic_symmetry, DipReport, CYCLIC_CHECK_CAP, SWEEP_CAP};
use homport::matrixfn::MAX_PERMANENT_DIM;
use homport::multiport::{build_dft, ensure_unitary, random_unitary, EPS_UNITARY};
use homport::oracle::expand_output_state;
use homport::{ComplexMatrix, ParticleStatistics};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;
use serde_json::json;

use crate::args::{Format, MatrixSource, Stats};
use crate::error::CliError;
use crate::output::{num, write_csv, write_json, RunManifest};

/// Largest port count accepted by `dft`.
pub const DFT_MAX_N: usize = 64;

/// Largest DFT size built for the physics subcommands.
const PHYSICS_MAX_N: usize = 1024;

const ORACLE_CHECK_MAX_N: usize = 5;
const PARITY_CHECK_MAX_N: usize = 16;
const VERIFY_SEED: u64 = 0x0048_4f4d;

fn caps(force: bool) -> Caps {
    if force {
        Caps::forced()
    } else {
        Caps::default()
    }
}

pub fn dft(n: usize, out_path: Option<&Path>, stdout: &mut impl Write) -> Result<(), CliError> {
    if !(1..=DFT_MAX_N).contains(&n) {
        return Err(CliError::Usage(format!("--n must lie in 1..={DFT_MAX_N}, got {n}")));
    }
    let text = build_dft(n)?.to_text();
    match out_path {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(CliError::from),
    }
}

/// Resolves `--n` / `--matrix` into a validated unitary.
fn load_source(source: &MatrixSource) -> Result<(ComplexMatrix, serde_json::Value), CliError> {
    match (source.n, &source.matrix) {
        (Some(n), None) => {
            if !(1..=PHYSICS_MAX_N).contains(&n) {
                return Err(CliError::Usage(format!("--n must lie in 1..={PHYSICS_MAX_N}, got {n}")));
            }
            Ok((build_dft(n)?, json!({ "n": n })))
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let m = ComplexMatrix::parse_text(&text)?;
            ensure_unitary(&m, EPS_UNITARY)?;
            Ok((m, json!({ "matrix": path.display().to_string() })))
        }
        _ => Err(CliError::Usage("exactly one of --n or --matrix is required".into())),
    }
}

pub fn coincidence(
    source: &MatrixSource,
    stats: Stats,
    as_json: bool,
    force: bool,
    out: &mut impl Write,
) -> Result<(), CliError> {
    let started = Instant::now();
    let (u, mut params) = load_source(source)?;
    let stats = ParticleStatistics::from(stats);
    let report = DipReport::for_matrix(&u, stats, &caps(force))?;
    if as_json {
        params["stats"] = json!(stats);
        params["force"] = json!(force);
        let manifest = RunManifest::new("coincidence", params, started);
        return write_json(out, manifest, json!({ "report": report }));
    }
    let label = match stats {
        ParticleStatistics::Boson => "permanent",
        ParticleStatistics::Fermion => "determinant",
    };
    let value = report.permanent_or_determinant_value;
    writeln!(out, "n: {}", report.n)?;
    writeln!(out, "stats: {stats}")?;
    writeln!(out, "coincidence_probability: {}", num(report.coincidence_probability))?;
    writeln!(out, "{label}: {} {}", num(value.re), num(value.im))?;
    writeln!(out, "is_dip: {}", report.is_dip)?;
    Ok(())
}

#[derive(Serialize)]
struct DistributionRow {
    config: FockConfig,
    probability: f64,
    amp_re: f64,
    amp_im: f64,
}

pub fn distribution(
    source: &MatrixSource,
    stats: Stats,
    format: Format,
    force: bool,
    out: &mut impl Write,
) -> Result<(), CliError> {
    let started = Instant::now();
    let (u, mut params) = load_source(source)?;
    let stats = ParticleStatistics::from(stats);
    let dist = full_distribution_with(&u, stats, &caps(force))?;
    match format {
        Format::Csv => {
            let rows = dist
                .entries()
                .iter()
                .map(|e| vec![e.config.to_string(), num(e.probability), num(e.amplitude.re), num(e.amplitude.im)])
                .collect();
            write_csv(out, &["config", "probability", "amp_re", "amp_im"], rows)
        }
        Format::Json => {
            let entries: Vec<DistributionRow> = dist
                .entries()
                .iter()
                .map(|e| DistributionRow {
                    config: e.config.clone(),
                    probability: e.probability,
                    amp_re: e.amplitude.re,
                    amp_im: e.amplitude.im,
                })
                .collect();
            params["stats"] = json!(stats);
            params["force"] = json!(force);
            let manifest = RunManifest::new("distribution", params, started);
            write_json(
                out,
                manifest,
                json!({ "n": dist.n(), "stats": stats, "entries": entries }),
            )
        }
    }
}

pub fn sweep(
    min: usize,
    max: usize,
    stats: Stats,
    format: Format,
    force: bool,
    out: &mut impl Write,
) -> Result<(), CliError> {
    let started = Instant::now();
    let stats = ParticleStatistics::from(stats);
    let cap = if force { MAX_PERMANENT_DIM } else { SWEEP_CAP };
    let reports = parity_sweep_with(min, max, stats, cap)?;
    match format {
        Format::Csv => {
            let rows = reports
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        json!(r.parity).as_str().unwrap_or_default().to_string(),
                        num(r.coincidence_probability),
                        num(r.permanent_or_determinant_value.norm()),
                        r.is_dip.to_string(),
                    ]
                })
                .collect();
            write_csv(out, &["n", "parity", "coincidence_probability", "abs_amplitude", "is_dip"], rows)
        }
        Format::Json => {
            let params = json!({ "min": min, "max": max, "stats": stats, "force": force });
            let manifest = RunManifest::new("sweep", params, started);
            write_json(out, manifest, json!({ "reports": reports }))
        }
    }
}

struct Check {
    name: String,
    deviation: f64,
    tolerance: f64,
    passed: bool,
}

impl Check {
    fn within(name: String, deviation: f64, tolerance: f64) -> Self {
        Self {
            name,
            deviation,
            tolerance,
            passed: deviation <= tolerance,
        }
    }
}

pub fn verify(n_max: usize, out: &mut impl Write) -> Result<(), CliError> {
    if n_max == 0 {
        return Err(CliError::Usage("--n-max must be at least 1".into()));
    }
    let mut checks = Vec::new();

    for n in 1..=n_max.min(CYCLIC_CHECK_CAP) {
        let c = verify_cyclic_symmetry(n)?;
        let deviation = c
            .cyclic_permanent_deviation
            .max(c.multiplicativity_deviation)
            .max(c.parity_deviation);
        checks.push(Check {
            name: format!(
                "cyclic-symmetry n={n} (column cycle {:e}, perm Λ = {})",
                c.column_cycle_deviation,
                num(c.perm_lambda.re)
            ),
            deviation: deviation.max(c.column_cycle_deviation),
            tolerance: homport::hom::PERMANENT_IDENTITY_TOL,
            passed: c.passed(),
        });
    }

    let parity_caps = Caps::default();
    for n in 1..=n_max.min(PARITY_CHECK_MAX_N) {
        let u = build_dft(n)?;
        let boson = DipReport::for_matrix(&u, ParticleStatistics::Boson, &parity_caps)?;
        let expect_dip = n % 2 == 0;
        checks.push(Check {
            name: format!("boson parity n={n} (P = {:e}, dip expected {expect_dip})", boson.coincidence_probability),
            deviation: if boson.is_dip == expect_dip { 0.0 } else { 1.0 },
            tolerance: 0.0,
            passed: boson.is_dip == expect_dip,
        });
        let fermion = DipReport::for_matrix(&u, ParticleStatistics::Fermion, &parity_caps)?;
        checks.push(Check::within(
            format!("fermion coincidence n={n}"),
            (fermion.coincidence_probability - 1.0).abs(),
            1e-12,
        ));
    }

    if n_max >= 2 {
        let u = build_dft(2)?;
        let boson = homport::fock::full_distribution(&u, ParticleStatistics::Boson)?;
        let expected = [([2, 0], 0.5), ([1, 1], 0.0), ([0, 2], 0.5)];
        let deviation = expected
            .iter()
            .map(|(c, p)| {
                let got = boson.probability(&FockConfig::new(c.to_vec())).unwrap_or(f64::INFINITY);
                (got - p).abs()
            })
            .fold(0.0, f64::max);
        checks.push(Check::within("two-port boson distribution {2 0: 1/2, 1 1: 0, 0 2: 1/2}".into(), deviation, 1e-12));
        let fermion = homport::fock::full_distribution(&u, ParticleStatistics::Fermion)?;
        let p = fermion.probability(&FockConfig::coincidence(2)).unwrap_or(f64::INFINITY);
        let deviation = if fermion.entries().len() == 1 { (p - 1.0).abs() } else { f64::INFINITY };
        checks.push(Check::within("two-port fermion distribution {1 1: 1}".into(), deviation, 1e-12));
    }

    let mut rng = StdRng::seed_from_u64(VERIFY_SEED);
    for n in 1..=n_max.min(ORACLE_CHECK_MAX_N) {
        let matrices = [
            ("dft", build_dft(n)?),
            ("random#1", random_unitary(n, &mut rng)?),
            ("random#2", random_unitary(n, &mut rng)?),
        ];
        for (label, u) in &matrices {
            for stats in [ParticleStatistics::Boson, ParticleStatistics::Fermion] {
                let form = expand_output_state(u, stats)?;
                let dist = full_distribution_with(u, stats, &Caps::default())?;
                let gap = dist
                    .entries()
                    .iter()
                    .map(|e| (form.amplitude(&e.config) - e.amplitude).norm())
                    .fold(0.0, f64::max);
                let norm_gap = (form.total_probability() - 1.0).abs().max((dist.total() - 1.0).abs());
                checks.push(Check::within(
                    format!("oracle vs fock n={n} {label} {stats} (normalization {norm_gap:e})"),
                    gap.max(norm_gap),
                    1e-10,
                ));
            }
        }
    }

    let failed = checks.iter().filter(|c| !c.passed).count();
    for c in &checks {
        writeln!(
            out,
            "{} {} deviation={:e} tol={:e}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.deviation,
            c.tolerance
        )?;
    }
    writeln!(out, "{} checks, {} failed", checks.len(), failed)?;
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::Verification(failed))
    }
}
