use super::Experiment;
use crate::grid::TimeGrid;
use crate::llcore::Variant;
use crate::weakmc::{estimate_weak_error, simulate_path, stream_id, trajectory_rng, Method, WeakErrorReport, SUMMARY_HEADER};
use crate::{Error, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Environment variable overriding the output directory of the config.
pub const OUT_DIR_ENV: &str = "WEAK_LL_OUT";
const DEFAULT_OUT_DIR: &str = "weak-ll-out";

/// A file produced by a command, held in memory until every step succeeded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputFile {
    pub name: String,
    pub contents: String,
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    crate_version: &'a str,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    h: Option<f64>,
    config_sha256: String,
    schemes: Vec<String>,
    files: Vec<ManifestEntry>,
    config: &'a str,
}

#[derive(Serialize)]
struct ManifestEntry {
    name: String,
    sha256: String,
}

/// `--out` first, then `WEAK_LL_OUT`, then the config, then `weak-ll-out`.
pub fn resolve_output_dir(cli: Option<&Path>, config: Option<&Path>) -> PathBuf {
    if let Some(p) = cli {
        return p.to_path_buf();
    }
    if let Some(p) = std::env::var_os(OUT_DIR_ENV).filter(|p| !p.is_empty()) {
        return PathBuf::from(p);
    }
    config.map_or_else(|| PathBuf::from(DEFAULT_OUT_DIR), Path::to_path_buf)
}

/// Runs every scheme of the experiment and renders the per-scheme CSVs,
/// `summary.csv` and `manifest.toml`.
pub fn convergence(exp: &Experiment) -> Result<(Vec<WeakErrorReport>, Vec<OutputFile>)> {
    let mut reports = Vec::with_capacity(exp.methods.len());
    for m in &exp.methods {
        log::info!("running {} on {}", m.label(), exp.problem.name);
        reports.push(estimate_weak_error(&exp.plan, m, &exp.problem)?);
    }
    let mut files: Vec<OutputFile> = reports
        .iter()
        .map(|r| OutputFile {
            name: format!("{}.csv", r.scheme),
            contents: r.to_csv(),
        })
        .collect();
    let mut summary = format!("{SUMMARY_HEADER}\n");
    for r in &reports {
        for row in r.summary_rows() {
            summary.push_str(&row);
            summary.push('\n');
        }
    }
    files.push(OutputFile {
        name: "summary.csv".into(),
        contents: summary,
    });
    files.push(manifest(exp, "run-convergence", exp.config.seed, None, &files, "manifest.toml")?);
    Ok((reports, files))
}

/// Simulates one path of the first scheme with optional seed and step
/// overrides. The step defaults to the smallest plan step size.
pub fn trajectory(exp: &Experiment, seed: Option<u64>, h: Option<f64>) -> Result<Vec<OutputFile>> {
    let p = &exp.problem;
    let span = p.t_end - p.t0;
    let h = h.unwrap_or_else(|| exp.plan.step_sizes.last().copied().expect("validated"));
    if !(h > 0.0 && h.is_finite()) || h > span * (1.0 + 1e-12) {
        return Err(Error::InvalidConfig(format!("step {h} must lie in (0, {span}]")));
    }
    let seed = seed.unwrap_or(exp.config.seed);
    let method = &exp.methods[0];
    let grid = TimeGrid::uniform(p.t0, p.t_end, h)?;
    let mut rng = trajectory_rng(seed, stream_id(0, 0));
    let x0 = p.initial.draw(&mut rng);
    let path = simulate_path(method, p.model.as_ref(), p.jumps.as_ref(), &x0, &grid, &mut rng)?;

    let mut csv = String::from("t");
    for i in 1..=p.model.dim() {
        let _ = write!(csv, ",x{i}");
    }
    csv.push_str(",jumps\n");
    for pt in &path {
        let _ = write!(csv, "{:e}", pt.t);
        for v in pt.x.iter() {
            let _ = write!(csv, ",{v:e}");
        }
        let jumps: Vec<String> = pt.jumps.iter().map(usize::to_string).collect();
        let _ = writeln!(csv, ",{}", jumps.join(";"));
    }
    let mut files = vec![OutputFile {
        name: "trajectory.csv".into(),
        contents: csv,
    }];
    let m = manifest(exp, "run-trajectory", seed, Some(h), &files, "trajectory.manifest.toml")?;
    files.push(m);
    Ok(files)
}

fn manifest(
    exp: &Experiment,
    command: &str,
    seed: u64,
    h: Option<f64>,
    files: &[OutputFile],
    name: &str,
) -> Result<OutputFile> {
    let m = Manifest {
        command,
        crate_version: env!("CARGO_PKG_VERSION"),
        seed,
        h,
        config_sha256: exp.config_hash(),
        schemes: exp.methods.iter().map(Method::label).collect(),
        files: files
            .iter()
            .map(|f| ManifestEntry {
                name: f.name.clone(),
                sha256: hex::encode(Sha256::digest(f.contents.as_bytes())),
            })
            .collect(),
        config: exp.source(),
    };
    Ok(OutputFile {
        name: name.into(),
        contents: toml::to_string(&m).map_err(|e| Error::Config(e.to_string()))?,
    })
}

fn write_all(dir: &Path, files: &[OutputFile]) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    files
        .iter()
        .map(|f| {
            let path = dir.join(&f.name);
            std::fs::write(&path, &f.contents)?;
            Ok(path)
        })
        .collect()
}

/// Loads, validates and runs a convergence study; nothing is written unless
/// every scheme finished.
pub fn run_convergence(config: &Path, out: Option<&Path>) -> Result<(Vec<WeakErrorReport>, Vec<PathBuf>)> {
    let exp = Experiment::load(config)?;
    let dir = resolve_output_dir(out, exp.output().map(PathBuf::as_path));
    let (reports, files) = convergence(&exp)?;
    Ok((reports, write_all(&dir, &files)?))
}

pub fn run_trajectory(config: &Path, seed: Option<u64>, h: Option<f64>, out: Option<&Path>) -> Result<Vec<PathBuf>> {
    let exp = Experiment::load(config)?;
    let dir = resolve_output_dir(out, exp.output().map(PathBuf::as_path));
    let files = trajectory(&exp, seed, h)?;
    write_all(&dir, &files)
}

/// Scheme names with their constructions and preconditions.
pub fn list_schemes() -> String {
    let mut s = String::new();
    for v in Variant::ALL {
        let (what, pre) = match v {
            Variant::PadeGeneral => (
                "Pade exponential of the A_beta block matrix",
                "any model; beta 1 or 2",
            ),
            Variant::PadeConstG => (
                "Pade exponential of the C_beta block matrix",
                "constant diffusion only; beta 1 or 2",
            ),
            Variant::Krylov => (
                "Arnoldi/Pade action of the block-matrix exponential",
                "any model; advisory: Krylov dimension m >= 2h*||M||_2, a warning is logged otherwise",
            ),
            Variant::OzakiShoji => (
                "closed-form increment with a Lyapunov pencil covariance",
                "autonomous, constant diffusion, invertible Jacobian",
            ),
            Variant::Midpoint => (
                "midpoint-rule quadrature of the increment and covariance integrals",
                "beta = 2 only",
            ),
        };
        let _ = writeln!(s, "{:<14}{what}\n{:<14}requires: {pre}", v.name(), "");
    }
    let _ = writeln!(s, "{:<14}Euler-Maruyama baseline\n{:<14}requires: nothing", "euler", "");
    s
}
