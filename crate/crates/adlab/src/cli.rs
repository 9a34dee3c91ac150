//! Subcommand grammar and dispatch.
//!
//! Exit codes: 0 success, 1 domain error (short error name on stderr),
//! 2 usage error.

use std::path::{Path, PathBuf};

use adlab_core::groups::{self, GroupKind};
use adlab_core::model::{self, Signal};
use adlab_core::wavelet::Wavelet;
use adlab_core::{estimator, gevp, residual, studies, transforms, HermitianOperator};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::formats;
use crate::report;

#[derive(Parser)]
#[command(
    name = "adlab",
    version,
    about = "Group-averaged covariance estimation experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Emit model covariances and signals to CSV files
    Gen(GenArgs),
    /// Group-averaged estimator and its spectrum
    Estimate(EstimateArgs),
    /// Signal transforms: periodogram, dct, autocorr, ambiguity, scalogram, reconstruct
    Transform(TransformArgs),
    /// Classify a covariance against candidate generators
    Classify(ClassifyArgs),
    /// Three-class residual table (stationary / self-similar / chirp)
    Fig3(Fig3Args),
    /// Best-commuting generator in a basis via the double-commutator eigenproblem
    #[command(name = "match")]
    Match(MatchArgs),
    /// Discretization convergence study on a closed-form tone signal
    Converge(ConvergeArgs),
    /// Time-frequency uncertainty product and generator commutator check
    Uncertainty(UncertaintyArgs),
    /// Monte-Carlo SNR sweep of subspace alignment
    Replacement(ReplacementArgs),
    /// Exploratory scale-family noise-floor experiment
    Noisefloor(NoisefloorArgs),
    /// Run the built-in invariant suite
    Selftest,
}

#[derive(Args)]
struct GenArgs {
    /// circulant | fbm | chirp | noise
    #[arg(long)]
    kind: String,
    #[arg(long, default_value_t = 64)]
    m: usize,
    /// Sample step; defaults to 1/M
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long, default_value_t = 0.7)]
    hurst: f64,
    #[arg(long, default_value_t = 0.02)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma2: f64,
    /// Chirp envelope width; defaults to M*dt/16
    #[arg(long)]
    width: Option<f64>,
    /// Circulant PSD as a comma list; defaults to 1/(1+k)
    #[arg(long)]
    psd: Option<String>,
    /// Required for randomized kinds
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EstimateArgs {
    #[arg(long)]
    signal: PathBuf,
    /// trivial | cyclic | dihedral | reversal | tf-lattice
    #[arg(long)]
    group: String,
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the estimated operator as a matrix CSV
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct TransformArgs {
    /// periodogram | dct | autocorr | ambiguity | scalogram | reconstruct
    #[arg(long)]
    kind: String,
    #[arg(long)]
    signal: PathBuf,
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Reconstructed signal output (reconstruct only)
    #[arg(long)]
    out: Option<PathBuf>,
    /// mexican-hat | morlet | gaussian
    #[arg(long, default_value = "mexican-hat")]
    wavelet: String,
    /// Smallest scale; defaults to 2*dt
    #[arg(long)]
    a0: Option<f64>,
    #[arg(long, default_value_t = 5)]
    octaves: u32,
    #[arg(long, default_value_t = 8)]
    voices: u32,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    covariance: PathBuf,
    #[arg(long, default_value = "shift,logdiag,chirpshift")]
    generators: String,
    #[arg(long, default_value_t = 0.02)]
    beta: f64,
    /// Sample step; defaults to 1/M
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct Fig3Args {
    #[arg(long, default_value_t = 64)]
    m: usize,
    #[arg(long, default_value_t = 0.7)]
    hurst: f64,
    #[arg(long, default_value_t = 0.02)]
    beta: f64,
    /// Sample step; defaults to 1/M
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct MatchArgs {
    #[arg(long)]
    covariance: PathBuf,
    /// circulant-hermitian | chirp-circulant | diagonal-real | full-hermitian
    #[arg(long, default_value = "circulant-hermitian")]
    basis: String,
    #[arg(long, default_value_t = 0.02)]
    beta: f64,
    /// Sample step; defaults to 1/M
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct ConvergeArgs {
    /// Ascending grid sizes, comma-separated
    #[arg(long, default_value = "64,128,256,512")]
    m_list: String,
    /// Tone frequencies in cycles per unit time, comma-separated.
    /// Off-grid frequencies exercise the discretization error.
    #[arg(long, default_value = "5.3,12.7")]
    freqs: String,
    /// Tone amplitudes; defaults to all 1
    #[arg(long)]
    amps: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    duration: f64,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct UncertaintyArgs {
    /// Analyze this signal file instead of the built-in Gaussian pulse
    #[arg(long)]
    signal: Option<PathBuf>,
    #[arg(long, default_value_t = 512)]
    m: usize,
    /// Sample step; defaults to 1/M
    #[arg(long)]
    dt: Option<f64>,
    /// Gaussian pulse time spread (built-in signal only)
    #[arg(long, default_value_t = 0.035)]
    sigma: f64,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct ReplacementArgs {
    #[arg(long, default_value_t = 64)]
    m: usize,
    /// Sample step; defaults to 1/M
    #[arg(long)]
    dt: Option<f64>,
    /// DFT bin of the unit test tone
    #[arg(long, default_value_t = 3)]
    tone_bin: usize,
    #[arg(long, default_value = "-20,-10,0,10,20")]
    snr_list: String,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct NoisefloorArgs {
    #[arg(long, default_value_t = 128)]
    m: usize,
    /// Sample step; defaults to 1/M
    #[arg(long)]
    dt: Option<f64>,
    /// Smallest scale; defaults to 4*dt
    #[arg(long)]
    a0: Option<f64>,
    #[arg(long, default_value_t = 2)]
    octaves: u32,
    #[arg(long, default_value_t = 4)]
    voices: u32,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    json: Option<PathBuf>,
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return if code == 0 { 0 } else { 2 };
        }
    };
    match dispatch(cli.cmd) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            2
        }
        Err(e) => {
            eprintln!("{}", e.name());
            eprintln!("{e}");
            1
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<(), CliError> {
    match cmd {
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Estimate(a) => cmd_estimate(a),
        Cmd::Transform(a) => cmd_transform(a),
        Cmd::Classify(a) => cmd_classify(a),
        Cmd::Fig3(a) => cmd_fig3(a),
        Cmd::Match(a) => cmd_match(a),
        Cmd::Converge(a) => cmd_converge(a),
        Cmd::Uncertainty(a) => cmd_uncertainty(a),
        Cmd::Replacement(a) => cmd_replacement(a),
        Cmd::Noisefloor(a) => cmd_noisefloor(a),
        Cmd::Selftest => cmd_selftest(),
    }
}

/// Dense group-element storage cap, in matrix entries (16 bytes each).
fn group_entry_cap() -> usize {
    std::env::var("ADLAB_MAX_GROUP_BYTES")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .map(|bytes| bytes / 16)
        .unwrap_or(groups::DEFAULT_MAX_DENSE_ENTRIES)
}

fn parse_f64_list(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("bad {what} entry: {t:?}")))
        })
        .collect()
}

fn parse_wavelet(name: &str) -> Result<Wavelet, CliError> {
    match name {
        "mexican-hat" => Ok(Wavelet::MexicanHat),
        "morlet" => Ok(Wavelet::morlet_default()),
        "gaussian" => Ok(Wavelet::Gaussian),
        other => Err(CliError::Usage(format!("unknown wavelet: {other}"))),
    }
}

fn read_covariance(path: &Path) -> Result<HermitianOperator, CliError> {
    let mat = formats::read_matrix(path)?;
    HermitianOperator::new(mat).map_err(CliError::Core)
}

fn resolve_dt(dt: Option<f64>, m: usize) -> f64 {
    dt.unwrap_or(1.0 / m as f64)
}

fn cmd_gen(a: GenArgs) -> Result<(), CliError> {
    let dt = resolve_dt(a.dt, a.m);
    match a.kind.as_str() {
        "circulant" => {
            let psd = match &a.psd {
                Some(s) => parse_f64_list(s, "psd")?,
                None => (0..a.m).map(|k| 1.0 / (1.0 + k as f64)).collect(),
            };
            let r = model::make_circulant_covariance(&psd)?;
            formats::write_matrix(&a.out, r.matrix())?;
        }
        "fbm" => {
            let r = model::make_fbm_covariance(a.m, dt, a.hurst, a.sigma2)?;
            formats::write_matrix(&a.out, r.matrix())?;
        }
        "chirp" => {
            let width = a.width.unwrap_or(a.m as f64 * dt / 16.0);
            let r = model::make_chirp_covariance(a.m, dt, a.beta, width, a.sigma2)?;
            formats::write_matrix(&a.out, r.matrix())?;
        }
        "noise" => {
            let seed = a
                .seed
                .ok_or_else(|| CliError::Usage("--seed is required for --kind noise".into()))?;
            let x = model::white_noise_with_dt(a.m, a.sigma2, seed, dt)?;
            formats::write_signal(&a.out, &x)?;
        }
        other => return Err(CliError::Usage(format!("unknown gen kind: {other}"))),
    }
    println!("wrote {}", a.out.display());
    Ok(())
}

fn cmd_estimate(a: EstimateArgs) -> Result<(), CliError> {
    let x = formats::read_signal(&a.signal)?;
    let kind = GroupKind::parse(&a.group)
        .ok_or_else(|| CliError::Usage(format!("unknown group: {}", a.group)))?;
    let group = groups::group_with_cap(kind, x.len(), group_entry_cap())?;
    let est = estimator::group_averaged_estimate(&x, &group)?;
    println!(
        "group={} trace={:.6e} top-eigenvalue={:.6e}",
        est.group_name, est.operator.trace(), est.eigenvalues[0]
    );
    if let Some(path) = &a.csv {
        formats::write_matrix(path, est.operator.matrix())?;
    }
    if let Some(path) = &a.json {
        let config = json!({
            "signal": a.signal.display().to_string(),
            "group": kind.name(),
            "m": x.len(),
            "dt": x.dt,
        });
        let result = json!({
            "group": est.group_name,
            "trace": est.operator.trace(),
            "eigenvalues": est.eigenvalues,
        });
        report::write_report(path, "estimate", config, result)?;
    }
    Ok(())
}

fn cmd_transform(a: TransformArgs) -> Result<(), CliError> {
    let x = formats::read_signal(&a.signal)?;
    let m = x.len();
    let config = json!({
        "kind": a.kind,
        "signal": a.signal.display().to_string(),
        "m": m,
        "dt": x.dt,
        "wavelet": a.wavelet,
        "a0": a.a0.unwrap_or(2.0 * x.dt),
        "octaves": a.octaves,
        "voices": a.voices,
    });
    let result: Value = match a.kind.as_str() {
        "periodogram" => {
            let p = transforms::periodogram(&x);
            if let Some(path) = &a.csv {
                formats::write_real_grid(path, &[p.clone()], "none", "bin")?;
            }
            json!({ "total": p.iter().sum::<f64>(), "bins": m })
        }
        "dct" => {
            let p = transforms::dct_spectrum(&x)?;
            if let Some(path) = &a.csv {
                formats::write_real_grid(path, &[p.clone()], "none", "bin")?;
            }
            json!({ "total": p.iter().sum::<f64>(), "bins": m })
        }
        "autocorr" => {
            let r = transforms::autocorrelation(&x);
            if let Some(path) = &a.csv {
                formats::write_complex_grid(path, &[r.clone()], "none", "lag")?;
            }
            json!({ "zero_lag": r[0].re, "lags": m })
        }
        "ambiguity" => {
            let amb = transforms::ambiguity(&x);
            if let Some(path) = &a.csv {
                formats::write_complex_grid(path, &amb.values, "lag", "doppler")?;
            }
            json!({ "moyal_ratio": amb.moyal_ratio(), "df": amb.df })
        }
        "scalogram" => {
            let psi = parse_wavelet(&a.wavelet)?;
            let scales =
                transforms::log_scale_grid(a.a0.unwrap_or(2.0 * x.dt), a.octaves, a.voices);
            let sg = transforms::scalogram(&x, &psi, &scales)?;
            if let Some(path) = &a.csv {
                formats::write_real_grid(path, &sg.values, "scale", "time")?;
            }
            let (j, n) = sg.argmax();
            json!({
                "scales": sg.scales,
                "argmax": { "scale": sg.scales[j], "time": n as f64 * sg.dt },
            })
        }
        "reconstruct" => {
            let psi = parse_wavelet(&a.wavelet)?;
            let scales =
                transforms::log_scale_grid(a.a0.unwrap_or(2.0 * x.dt), a.octaves, a.voices);
            let (xhat, rel) = transforms::calderon_reconstruct(&x, &psi, &scales)?;
            if let Some(path) = &a.out {
                formats::write_signal(path, &xhat)?;
            }
            println!("relative error {rel:.3e}");
            json!({ "relative_error": rel, "scales": scales })
        }
        other => return Err(CliError::Usage(format!("unknown transform kind: {other}"))),
    };
    if let Some(path) = &a.json {
        report::write_report(path, "transform", config, result)?;
    }
    Ok(())
}

fn residual_row_json(row: &residual::ResidualRow) -> Value {
    json!({
        "class": row.class_name,
        "cells": row
            .cells
            .iter()
            .map(|(name, delta)| json!({ "generator": name, "delta": delta }))
            .collect::<Vec<_>>(),
        "matched": row.matched,
        "tie": row.tie,
    })
}

fn cmd_classify(a: ClassifyArgs) -> Result<(), CliError> {
    let r = read_covariance(&a.covariance)?;
    let m = r.dim();
    let dt = resolve_dt(a.dt, m);
    let mut cands = Vec::new();
    for name in a.generators.split(',') {
        let name = name.trim();
        let g = groups::generator_by_name(name, m, a.beta, dt)
            .ok_or_else(|| CliError::Usage(format!("unknown generator: {name}")))?;
        cands.push(g);
    }
    let row = residual::classify(&r, &cands, "input")?;
    for (name, delta) in &row.cells {
        println!("{name}: {delta:.6e}");
    }
    println!("matched: {}{}", row.matched, if row.tie { " (tie)" } else { "" });
    if let Some(path) = &a.json {
        let config = json!({
            "covariance": a.covariance.display().to_string(),
            "generators": a.generators,
            "m": m,
            "beta": a.beta,
            "dt": dt,
        });
        report::write_report(path, "classify", config, residual_row_json(&row))?;
    }
    Ok(())
}

fn cmd_fig3(a: Fig3Args) -> Result<(), CliError> {
    let dt = resolve_dt(a.dt, a.m);
    let table = residual::fig3_table(a.m, a.hurst, a.beta, dt)?;
    for row in &table.rows {
        let cells: Vec<String> = row
            .cells
            .iter()
            .map(|(name, d)| format!("{name}={d:.3e}"))
            .collect();
        println!("{:<12} {}  -> {}", row.class_name, cells.join("  "), row.matched);
    }
    if let Some(path) = &a.json {
        let config = json!({ "m": a.m, "hurst": a.hurst, "beta": a.beta, "dt": dt });
        let result = json!({
            "rows": table.rows.iter().map(residual_row_json).collect::<Vec<_>>(),
        });
        report::write_report(path, "fig3", config, result)?;
    }
    Ok(())
}

fn cmd_match(a: MatchArgs) -> Result<(), CliError> {
    let r = read_covariance(&a.covariance)?;
    let m = r.dim();
    let dt = resolve_dt(a.dt, m);
    let sol = gevp::match_group(&r, &a.basis, a.beta, dt)?;
    println!(
        "basis={} lambda_min={:.6e} delta={:.6e} interpretation={}{}",
        sol.basis_name,
        sol.lambda_min,
        sol.delta,
        sol.interpretation,
        if sol.degenerate { " (degenerate)" } else { "" }
    );
    if let Some(path) = &a.json {
        let config = json!({
            "covariance": a.covariance.display().to_string(),
            "basis": a.basis,
            "m": m,
            "beta": a.beta,
            "dt": dt,
        });
        let result = json!({
            "lambda_min": sol.lambda_min,
            "delta": sol.delta,
            "degenerate": sol.degenerate,
            "interpretation": sol.interpretation,
            "coeffs": sol.coeffs,
        });
        report::write_report(path, "match", config, result)?;
    }
    Ok(())
}

fn cmd_converge(a: ConvergeArgs) -> Result<(), CliError> {
    let sizes: Vec<usize> = a
        .m_list
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("bad m-list entry: {t:?}")))
        })
        .collect::<Result<_, _>>()?;
    let freqs = parse_f64_list(&a.freqs, "freqs")?;
    let amps = match &a.amps {
        Some(s) => parse_f64_list(s, "amps")?,
        None => vec![1.0; freqs.len()],
    };
    if amps.len() != freqs.len() {
        return Err(CliError::Usage("--amps length must match --freqs".into()));
    }
    let signal = studies::ToneSignal {
        tones: freqs
            .iter()
            .zip(amps.iter())
            .map(|(&f, &amp)| (Complex64::new(amp, 0.0), f))
            .collect(),
        duration: a.duration,
    };
    let res = studies::discretization_study(&signal, &sizes)?;
    for (m, e) in res.sizes.iter().zip(res.errors.iter()) {
        println!("M={m:<6} error={e:.6e}");
    }
    println!("slope={:.4} fit-rms={:.3e}", res.slope, res.fit_rms);
    if let Some(path) = &a.json {
        let config = json!({
            "m_list": res.sizes,
            "freqs": freqs,
            "amps": amps,
            "duration": a.duration,
        });
        let result = json!({
            "errors": res.errors,
            "slope": res.slope,
            "intercept": res.intercept,
            "fit_rms": res.fit_rms,
        });
        report::write_report(path, "converge", config, result)?;
    }
    Ok(())
}

fn gaussian_pulse(m: usize, dt: f64, sigma: f64) -> Result<Signal, CliError> {
    let center = 0.5 * m as f64 * dt;
    let samples: Vec<Complex64> = (0..m)
        .map(|n| {
            let t = n as f64 * dt - center;
            Complex64::new((-t * t / (4.0 * sigma * sigma)).exp(), 0.0)
        })
        .collect();
    Signal::new(samples, dt, 0.0).map_err(CliError::Core)
}

fn cmd_uncertainty(a: UncertaintyArgs) -> Result<(), CliError> {
    let x = match &a.signal {
        Some(path) => formats::read_signal(path)?,
        None => gaussian_pulse(a.m, resolve_dt(a.dt, a.m), a.sigma)?,
    };
    let res = studies::uncertainty_check(&x)?;
    println!(
        "delta_t={:.6e} delta_omega={:.6e} product={:.6}{}",
        res.delta_t,
        res.delta_omega,
        res.product,
        if res.grid_artifact { " (grid artifact)" } else { "" }
    );
    let commutator = if x.len() >= 32 {
        let c = studies::commutator_generator_check(x.len(), x.dt)?;
        println!(
            "commutator interior={:.3e} boundary={:.3e}",
            c.interior_deviation, c.boundary_deviation
        );
        json!({
            "interior_deviation": c.interior_deviation,
            "boundary_deviation": c.boundary_deviation,
        })
    } else {
        Value::Null
    };
    if let Some(path) = &a.json {
        let config = json!({
            "signal": a.signal.as_ref().map(|p| p.display().to_string()),
            "m": x.len(),
            "dt": x.dt,
            "sigma": a.sigma,
        });
        let result = json!({
            "delta_t": res.delta_t,
            "delta_omega": res.delta_omega,
            "product": res.product,
            "grid_artifact": res.grid_artifact,
            "commutator": commutator,
        });
        report::write_report(path, "uncertainty", config, result)?;
    }
    Ok(())
}

fn cmd_replacement(a: ReplacementArgs) -> Result<(), CliError> {
    let m = a.m;
    if a.tone_bin >= m {
        return Err(CliError::Usage("--tone-bin must be below --m".into()));
    }
    let dt = resolve_dt(a.dt, m);
    let samples: Vec<Complex64> = (0..m)
        .map(|n| {
            Complex64::from_polar(
                1.0,
                2.0 * std::f64::consts::PI * a.tone_bin as f64 * n as f64 / m as f64,
            )
        })
        .collect();
    let s = Signal::new(samples, dt, 0.0)?;
    let snr = parse_f64_list(&a.snr_list, "snr-list")?;
    let points = studies::replacement_snr_sweep(&s, &snr, a.trials, a.seed)?;
    for p in &points {
        println!("snr={:>6.1} dB  alignment={:.6}", p.snr_db, p.mean_alignment);
    }
    if let Some(path) = &a.json {
        let config = json!({
            "m": m,
            "dt": dt,
            "tone_bin": a.tone_bin,
            "snr_list": snr,
            "trials": a.trials,
            "seed": a.seed,
        });
        let result = json!({
            "points": points
                .iter()
                .map(|p| json!({ "snr_db": p.snr_db, "mean_alignment": p.mean_alignment }))
                .collect::<Vec<_>>(),
        });
        report::write_report(path, "replacement", config, result)?;
    }
    Ok(())
}

fn cmd_noisefloor(a: NoisefloorArgs) -> Result<(), CliError> {
    let dt = resolve_dt(a.dt, a.m);
    let a0 = a.a0.unwrap_or(4.0 * dt);
    let scales = transforms::log_scale_grid(a0, a.octaves, a.voices);
    let rep = studies::affine_noise_floor_experiment(a.m, dt, &scales, a.trials, a.seed)?;
    println!(
        "slope_vs_omega={:.4} band=[{},{}] linear-scaling-observed={}",
        rep.slope_vs_omega, rep.band.0, rep.band.1, rep.omega_scaling_observed
    );
    if let Some(path) = &a.json {
        let config = json!({
            "m": a.m,
            "dt": dt,
            "a0": a0,
            "octaves": a.octaves,
            "voices": a.voices,
            "trials": a.trials,
            "seed": a.seed,
        });
        let result = json!({
            "scales": rep.scales,
            "per_scale_mean": rep.per_scale_mean,
            "frame_diag": rep.frame_diag,
            "cyclic_diag": rep.cyclic_diag,
            "slope_vs_omega": rep.slope_vs_omega,
            "band": [rep.band.0, rep.band.1],
            "omega_scaling_observed": rep.omega_scaling_observed,
        });
        report::write_report(path, "noisefloor", config, result)?;
    }
    Ok(())
}

fn cmd_selftest() -> Result<(), CliError> {
    use adlab_core::Error;

    let check = |name: &str, ok: bool| -> Result<(), CliError> {
        if ok {
            println!("ok {name}");
            Ok(())
        } else {
            Err(CliError::Core(Error::NumericalFailure("selftest failed")))
        }
    };

    let m = 16;
    let x = model::white_noise(m, 1.0, 11)?;
    for kind in [
        GroupKind::Trivial,
        GroupKind::Cyclic,
        GroupKind::Dihedral,
        GroupKind::Reversal,
        GroupKind::TfLattice,
    ] {
        let g = groups::group_with_cap(kind, m, group_entry_cap())?;
        let est = estimator::group_averaged_estimate(&x, &g)?;
        let trace_ok = (est.operator.trace() - x.norm_sq()).abs() <= 1e-10 * x.norm_sq();
        est.operator.check_psd()?;
        check(&format!("estimator-trace-{}", kind.name()), trace_ok)?;
    }

    let y = model::white_noise_with_dt(24, 1.0, 5, 0.05)?;
    let lhs = adlab_core::linalg::dft(&transforms::autocorrelation(&y));
    let p = transforms::periodogram(&y);
    let wk_ok = lhs.iter().enumerate().all(|(k, v)| {
        let want = p[k] * y.len() as f64;
        (v - Complex64::new(want, 0.0)).norm() <= 1e-9 * want.max(1e-12)
    });
    check("wiener-khinchin", wk_ok)?;

    let ratio = transforms::ambiguity(&y).moyal_ratio();
    check("moyal-ratio", (ratio - 24.0).abs() <= 1e-9 * 24.0)?;

    let table = residual::fig3_table(32, 0.7, 0.02, 1.0 / 32.0)?;
    let matched: Vec<&str> = table.rows.iter().map(|r| r.matched.as_str()).collect();
    check("residual-table", matched == ["shift", "logdiag", "chirpshift"])?;

    check(
        "wavelet-admissibility",
        adlab_core::wavelet::calderon_constant(&Wavelet::Gaussian, 12.0, 256).is_err(),
    )?;

    println!("selftest passed");
    Ok(())
}
