//! Command-line surface for the eikonal spectral-dynamics library:
//! reproducible runs from a single config + seed, plot-ready CSV/JSON out.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::json;

use eikonal::characteristics::{caustic_edges, pastur_solve, quaternionic_field};
use eikonal::ensemble::EnsembleSpec;
use eikonal::error::EikonalError;
use eikonal::hciz::{bridge_density_field, euler_match_velocity, HCIZProblem};
use eikonal::measure::{AngularMeasure, SpectralMeasure};
use eikonal::mc;
use eikonal::spectra::{
    density_1d, density_2d, overlap_correlator, sample_field_grid, support_boundary,
};
use eikonal::unitary::unitary_density;
use eikonal::validate::{run_case, CaseParams, CASE_NAMES};

#[derive(Parser)]
#[command(name = "rmt", about = "Spectral dynamics of large random matrix models", version)]
struct Cli {
    /// JSON config file supplying defaults; explicit flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalue density on a real grid (CSV: x,rho).
    Density(DensityArgs),
    /// Two-dimensional spectral density (CSV: re_z,im_z,value).
    Field2d(Field2dArgs),
    /// Eigenvector-overlap correlator on a 2D grid (CSV: re_z,im_z,value).
    Overlap(Field2dArgs),
    /// Spectral support boundary contour (CSV: re_z,im_z).
    Boundary(BoundaryArgs),
    /// Spectral support edges (CSV: x).
    Edges(EdgesArgs),
    /// Eigenphase density of the unitary diffusion (CSV: theta,rho,re_J,im_J).
    Unitary(UnitaryArgs),
    /// Brownian-bridge fluid fields (CSV: x,t,rho,mu).
    Hciz(HcizArgs),
    /// Finite-N Monte-Carlo sampling (CSV: re,im[,o_ii]).
    Mc(McArgs),
    /// Run named validation cases; exit 2 when a tolerance is exceeded.
    Validate(ValidateArgs),
}

/// File-config schema; every field optional, flags take precedence.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    ensemble: Option<serde_json::Value>,
    initial: Option<serde_json::Value>,
    t: Option<f64>,
    grid: Option<String>,
    epsilon: Option<f64>,
    seed: Option<u64>,
    out: Option<String>,
    n: Option<usize>,
    seeds: Option<usize>,
    bins: Option<usize>,
    rays: Option<usize>,
    variance: Option<f64>,
    problem: Option<serde_json::Value>,
    t_grid: Option<String>,
    case: Option<String>,
}

#[derive(Args)]
struct DensityArgs {
    /// Ensemble name or EnsembleSpec JSON.
    #[arg(long)]
    ensemble: Option<String>,
    /// Initial spectral measure JSON ({"atoms":[[[re,im],w],...]}).
    #[arg(long)]
    initial: Option<String>,
    #[arg(long)]
    t: Option<f64>,
    /// Real grid min:max:points.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct Field2dArgs {
    #[arg(long)]
    ensemble: Option<String>,
    #[arg(long)]
    initial: Option<String>,
    #[arg(long)]
    t: Option<f64>,
    /// 2D box "x0:x1:nx,y0:y1:ny" (a single range is used for both axes).
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct BoundaryArgs {
    #[arg(long)]
    ensemble: Option<String>,
    #[arg(long)]
    initial: Option<String>,
    #[arg(long)]
    t: Option<f64>,
    /// Number of boundary rays.
    #[arg(long)]
    rays: Option<usize>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct EdgesArgs {
    #[arg(long)]
    ensemble: Option<String>,
    #[arg(long)]
    initial: Option<String>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct UnitaryArgs {
    /// Initial angular measure JSON ({"phases":[[theta,w],...]}).
    #[arg(long)]
    initial: Option<String>,
    #[arg(long)]
    t: Option<f64>,
    /// Theta grid min:max:points (default -pi:pi:721).
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct HcizArgs {
    /// Bridge problem JSON: {"atoms_a":[[x,w],...],"atoms_b":...,"beta":2}.
    #[arg(long)]
    problem: Option<String>,
    /// Spatial grid min:max:points.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Time grid min:max:points (within (0,1)).
    #[arg(long, allow_hyphen_values = true)]
    t_grid: Option<String>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct McArgs {
    #[arg(long)]
    ensemble: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seeds: Option<usize>,
    #[arg(long)]
    variance: Option<f64>,
    #[arg(long)]
    bins: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Case name; omit to run every case.
    #[arg(long)]
    case: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seeds: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<String>,
}

struct CliError {
    exit: i32,
    message: String,
}

impl CliError {
    fn config(field: &str, message: impl std::fmt::Display) -> Self {
        CliError {
            exit: 1,
            message: format!("config error in \"{field}\": {message}"),
        }
    }
}

impl From<EikonalError> for CliError {
    fn from(e: EikonalError) -> Self {
        let exit = 1;
        match e {
            EikonalError::Config { field, message } => CliError::config(&field, message),
            other => CliError {
                exit,
                message: other.to_string(),
            },
        }
    }
}

fn main() {
    if let Ok(v) = std::env::var("RMT_THREADS") {
        if let Ok(k) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(k.max(1))
                .build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(exit) => std::process::exit(exit),
        Err(e) => {
            eprintln!("error: {}", e.message);
            std::process::exit(e.exit);
        }
    }
}

fn load_config(path: &Option<PathBuf>) -> Result<FileConfig, CliError> {
    match path {
        None => Ok(FileConfig::default()),
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| CliError::config("config", format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| CliError::config("config", e))
        }
    }
}

fn parse_ensemble(flag: &Option<String>, file: &FileConfig, default: &str) -> Result<EnsembleSpec, CliError> {
    let value: serde_json::Value = match (flag, &file.ensemble) {
        (Some(s), _) => {
            if s.trim_start().starts_with('{') {
                serde_json::from_str(s).map_err(|e| CliError::config("ensemble", e))?
            } else {
                json!({ "variant": s })
            }
        }
        (None, Some(v)) => v.clone(),
        (None, None) => json!({ "variant": default }),
    };
    let spec: EnsembleSpec =
        serde_json::from_value(value).map_err(|e| CliError::config("ensemble", e))?;
    spec.validate()?;
    Ok(spec)
}

fn parse_initial(flag: &Option<String>, file: &FileConfig) -> Result<SpectralMeasure, CliError> {
    let value: serde_json::Value = match (flag, &file.initial) {
        (Some(s), _) => serde_json::from_str(s).map_err(|e| CliError::config("initial", e))?,
        (None, Some(v)) => v.clone(),
        (None, None) => return Ok(SpectralMeasure::delta(Complex64::new(0.0, 0.0))),
    };
    serde_json::from_value(value).map_err(|e| CliError::config("initial", e))
}

fn parse_angular(flag: &Option<String>, file: &FileConfig) -> Result<AngularMeasure, CliError> {
    let value: serde_json::Value = match (flag, &file.initial) {
        (Some(s), _) => serde_json::from_str(s).map_err(|e| CliError::config("initial", e))?,
        (None, Some(v)) => v.clone(),
        (None, None) => return Ok(AngularMeasure::delta(0.0)),
    };
    serde_json::from_value(value).map_err(|e| CliError::config("initial", e))
}

/// Parses "min:max:points" into a uniform grid.
fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::config(
            "grid",
            format!("expected min:max:points, got {text:?}"),
        ));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|e| CliError::config("grid", format!("bad min: {e}")))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|e| CliError::config("grid", format!("bad max: {e}")))?;
    let n: usize = parts[2]
        .parse()
        .map_err(|e| CliError::config("grid", format!("bad points: {e}")))?;
    if n < 2 || !hi.is_finite() || !lo.is_finite() || hi <= lo {
        return Err(CliError::config(
            "grid",
            format!("need at least 2 points and max > min, got {text:?}"),
        ));
    }
    Ok((0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect())
}

/// Parses a 2D box: either one range used for both axes or two
/// comma-separated ranges.
fn parse_grid_2d(text: &str) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    match text.split_once(',') {
        Some((a, b)) => Ok((parse_grid(a)?, parse_grid(b)?)),
        None => {
            let g = parse_grid(text)?;
            Ok((g.clone(), g))
        }
    }
}

/// Atomic file write: temp file in the same directory, then rename.
fn write_atomic(path: &str, body: &str) -> Result<(), CliError> {
    let target = Path::new(path);
    let tmp = target.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)
            .map_err(|e| CliError::config("out", format!("{path}: {e}")))?;
        f.write_all(body.as_bytes())
            .map_err(|e| CliError::config("out", format!("{path}: {e}")))?;
    }
    fs::rename(&tmp, target).map_err(|e| CliError::config("out", format!("{path}: {e}")))?;
    Ok(())
}

fn fmt(v: f64) -> String {
    format!("{v:.12e}")
}

fn summary(command: &str, fields: serde_json::Value, runtime_ms: u128) {
    let mut obj = json!({
        "schema": "1",
        "command": command,
        "runtime_ms": runtime_ms as u64,
    });
    if let (Some(dst), Some(src)) = (obj.as_object_mut(), fields.as_object()) {
        for (k, v) in src {
            dst.insert(k.clone(), v.clone());
        }
    }
    println!("{obj}");
}

fn run_field2d(
    a: Field2dArgs,
    file: &FileConfig,
    is_overlap: bool,
    start: std::time::Instant,
) -> Result<i32, CliError> {
    let spec = parse_ensemble(&a.ensemble, file, "ginibre")?;
    let initial = parse_initial(&a.initial, file)?;
    let t = a.t.or(file.t).unwrap_or(1.0);
    let (gx, gy) = parse_grid_2d(
        a.grid.as_deref().or(file.grid.as_deref()).unwrap_or("-1.5:1.5:201"),
    )?;
    let default_name = if is_overlap { "overlap.csv" } else { "field2d.csv" };
    let out = a.out.or(file.out.clone()).unwrap_or_else(|| default_name.into());
    let h = gx[1] - gx[0];
    let hy = gy[1] - gy[0];
    if (h - hy).abs() > 1e-12 * h.abs() {
        return Err(CliError::config(
            "grid",
            "2D sampling requires equal spacing on both axes",
        ));
    }
    let field = sample_field_grid(&initial, &spec, gx[0], gy[0], h, gx.len(), gy.len(), t)?;
    let values = if is_overlap {
        overlap_correlator(&field)
    } else {
        density_2d(&field)?
    };
    let mut body = String::from("re_z,im_z,value\n");
    for j in 0..values.ny {
        for i in 0..values.nx {
            let z = values.z(i, j);
            body.push_str(&format!(
                "{},{},{}\n",
                fmt(z.re),
                fmt(z.im),
                fmt(values.value(i, j))
            ));
        }
    }
    write_atomic(&out, &body)?;
    summary(
        if is_overlap { "overlap" } else { "field2d" },
        json!({"nx": values.nx, "ny": values.ny, "t": t, "mass": values.mass(), "out": out}),
        start.elapsed().as_millis(),
    );
    Ok(0)
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let file = load_config(&cli.config)?;
    let start = std::time::Instant::now();
    match cli.command {
        Command::Density(a) => {
            let spec = parse_ensemble(&a.ensemble, &file, "gue")?;
            let initial = parse_initial(&a.initial, &file)?;
            let t = a.t.or(file.t).unwrap_or(1.0);
            let grid = parse_grid(a.grid.as_deref().or(file.grid.as_deref()).unwrap_or("-3:3:601"))?;
            let epsilon = a.epsilon.or(file.epsilon).unwrap_or(1e-6);
            let out = a.out.or(file.out.clone()).unwrap_or_else(|| "density.csv".into());
            let dens = density_1d(|z| pastur_solve(&initial, &spec, z, t), &grid, epsilon)?;
            let mut body = String::from("x,rho\n");
            for (x, r) in dens.x.iter().zip(&dens.rho) {
                body.push_str(&format!("{},{}\n", fmt(*x), fmt(*r)));
            }
            write_atomic(&out, &body)?;
            summary(
                "density",
                json!({"points": grid.len(), "t": t, "mass": dens.mass(), "out": out}),
                start.elapsed().as_millis(),
            );
            Ok(0)
        }
        Command::Field2d(a) => run_field2d(a, &file, false, start),
        Command::Overlap(a) => run_field2d(a, &file, true, start),
        Command::Boundary(a) => {
            let spec = parse_ensemble(&a.ensemble, &file, "ginibre")?;
            let initial = parse_initial(&a.initial, &file)?;
            let t = a.t.or(file.t).unwrap_or(1.0);
            let rays = a.rays.or(file.rays).unwrap_or(256);
            let out = a.out.or(file.out.clone()).unwrap_or_else(|| "boundary.csv".into());
            let contour = support_boundary(
                |z| quaternionic_field(&initial, &spec, z, t),
                t,
                1e-9,
                rays,
            )?;
            let mut body = String::from("re_z,im_z\n");
            for z in &contour {
                body.push_str(&format!("{},{}\n", fmt(z.re), fmt(z.im)));
            }
            write_atomic(&out, &body)?;
            summary(
                "boundary",
                json!({"rays": rays, "t": t, "out": out}),
                start.elapsed().as_millis(),
            );
            Ok(0)
        }
        Command::Edges(a) => {
            let spec = parse_ensemble(&a.ensemble, &file, "gue")?;
            let initial = parse_initial(&a.initial, &file)?;
            let t = a.t.or(file.t).unwrap_or(1.0);
            let out = a.out.or(file.out.clone()).unwrap_or_else(|| "edges.csv".into());
            let edges = caustic_edges(&initial, &spec, t)?;
            let mut body = String::from("x\n");
            for e in &edges {
                body.push_str(&format!("{}\n", fmt(*e)));
            }
            write_atomic(&out, &body)?;
            summary(
                "edges",
                json!({"t": t, "edges": edges, "out": out}),
                start.elapsed().as_millis(),
            );
            Ok(0)
        }
        Command::Unitary(a) => {
            let initial = parse_angular(&a.initial, &file)?;
            let t = a.t.or(file.t).unwrap_or(1.0);
            let grid = parse_grid(
                a.grid
                    .as_deref()
                    .or(file.grid.as_deref())
                    .unwrap_or("-3.141592653589793:3.141592653589793:721"),
            )?;
            let epsilon = a.epsilon.or(file.epsilon).unwrap_or(1e-8);
            let out = a.out.or(file.out.clone()).unwrap_or_else(|| "unitary.csv".into());
            let field = unitary_density(&initial, &grid, t, epsilon)?;
            let mut body = String::from("theta,rho,re_J,im_J\n");
            for i in 0..grid.len() {
                body.push_str(&format!(
                    "{},{},{},{}\n",
                    fmt(field.theta[i]),
                    fmt(field.rho[i]),
                    fmt(field.j[i].re),
                    fmt(field.j[i].im)
                ));
            }
            write_atomic(&out, &body)?;
            summary(
                "unitary",
                json!({"points": grid.len(), "t": t, "mass": field.mass(), "out": out}),
                start.elapsed().as_millis(),
            );
            Ok(0)
        }
        Command::Hciz(a) => {
            let problem: HCIZProblem = match (&a.problem, &file.problem) {
                (Some(s), _) => serde_json::from_str(s).map_err(|e| CliError::config("problem", e))?,
                (None, Some(v)) => {
                    serde_json::from_value(v.clone()).map_err(|e| CliError::config("problem", e))?
                }
                (None, None) => HCIZProblem {
                    atoms_a: vec![(0.0, 1.0)],
                    atoms_b: vec![(0.0, 1.0)],
                    beta: 2.0,
                },
            };
            let grid = parse_grid(a.grid.as_deref().or(file.grid.as_deref()).unwrap_or("-2:2:201"))?;
            let t_grid = parse_grid(
                a.t_grid.as_deref().or(file.t_grid.as_deref()).unwrap_or("0.2:0.8:61"),
            )?;
            let epsilon = a.epsilon.or(file.epsilon).unwrap_or(1e-9);
            let out = a.out.or(file.out.clone()).unwrap_or_else(|| "hciz.csv".into());
            let field = euler_match_velocity(&bridge_density_field(
                &problem, &grid, &t_grid, epsilon,
            )?)?;
            let mut body = String::from("x,t,rho,mu\n");
            for (ti, tv) in t_grid.iter().enumerate() {
                for (xi, xv) in grid.iter().enumerate() {
                    body.push_str(&format!(
                        "{},{},{},{}\n",
                        fmt(*xv),
                        fmt(*tv),
                        fmt(field.rho[ti][xi]),
                        fmt(field.mu[ti][xi])
                    ));
                }
            }
            write_atomic(&out, &body)?;
            summary(
                "hciz",
                json!({"nx": grid.len(), "nt": t_grid.len(), "out": out}),
                start.elapsed().as_millis(),
            );
            Ok(0)
        }
        Command::Mc(a) => {
            let spec = parse_ensemble(&a.ensemble, &file, "gue")?;
            let n = a.n.or(file.n).unwrap_or(256);
            let seeds = a.seeds.or(file.seeds).unwrap_or(5);
            let variance = a.variance.or(file.variance).unwrap_or(1.0);
            let bins = a.bins.or(file.bins).unwrap_or(64);
            let seed = a.seed.or(file.seed).unwrap_or(1);
            let out = a.out.or(file.out.clone()).unwrap_or_else(|| "mc.csv".into());
            let general = matches!(
                spec,
                EnsembleSpec::Ginibre | EnsembleSpec::Elliptic { .. }
            );
            let mut rows: Vec<(Complex64, Option<f64>)> = Vec::new();
            for k in 0..seeds {
                let sample = mc::sample_ensemble(&spec, n, variance, mc::split_seed(seed, k as u64))?;
                if general {
                    let rec = mc::overlap_stats(&sample)?;
                    for (lam, &o) in rec.eigenvalues.iter().zip(&rec.o_diag) {
                        rows.push((*lam, Some(o)));
                    }
                } else {
                    let (vals, _) = mc::spectral_stats(&sample, bins)?;
                    for lam in vals {
                        rows.push((lam, None));
                    }
                }
            }
            let mut body = String::from(if general { "re,im,o_ii\n" } else { "re,im\n" });
            for (lam, o) in &rows {
                match o {
                    Some(o) => body.push_str(&format!(
                        "{},{},{}\n",
                        fmt(lam.re),
                        fmt(lam.im),
                        fmt(*o)
                    )),
                    None => body.push_str(&format!("{},{}\n", fmt(lam.re), fmt(lam.im))),
                }
            }
            write_atomic(&out, &body)?;
            // distribution distances against the closed-form laws where known
            let (ks, l1) = match spec {
                EnsembleSpec::Gue => {
                    let reals: Vec<f64> = rows.iter().map(|(l, _)| l.re).collect();
                    let ks = mc::ks_distance(&reals, |x| mc::semicircle_cdf(x, variance));
                    let hist = mc::EmpiricalDensity::from_samples(
                        &reals,
                        bins,
                        -2.0 * variance.sqrt(),
                        2.0 * variance.sqrt(),
                    );
                    let mut l1 = 0.0;
                    for k in 0..bins {
                        let x = 0.5 * (hist.edges[k] + hist.edges[k + 1]);
                        let w = hist.edges[k + 1] - hist.edges[k];
                        let th = (4.0 * variance - x * x).max(0.0).sqrt()
                            / (2.0 * std::f64::consts::PI * variance);
                        l1 += (hist.density(k) - th).abs() * w;
                    }
                    (Some(ks), Some(l1))
                }
                EnsembleSpec::Ginibre => {
                    let radii: Vec<f64> = rows.iter().map(|(l, _)| l.norm()).collect();
                    let ks = mc::ks_distance(&radii, |r| (r * r / variance).clamp(0.0, 1.0));
                    (Some(ks), None)
                }
                _ => (None, None),
            };
            summary(
                "mc",
                json!({"n": n, "seeds": seeds, "ks": ks, "l1": l1, "out": out}),
                start.elapsed().as_millis(),
            );
            Ok(0)
        }
        Command::Validate(a) => {
            let params = CaseParams {
                n: a.n.or(file.n),
                seeds: a.seeds.or(file.seeds),
                seed: a.seed.or(file.seed).unwrap_or(CaseParams::default().seed),
            };
            let names: Vec<String> = match a.case.or(file.case.clone()) {
                Some(c) => vec![c],
                None => CASE_NAMES.iter().map(|s| s.to_string()).collect(),
            };
            let out = a.out.or(file.out.clone()).unwrap_or_else(|| "validate.json".into());
            let mut reports = Vec::new();
            let mut all_passed = true;
            for name in &names {
                let rep = run_case(name, &params)?;
                all_passed &= rep.passed;
                reports.push(rep);
            }
            let body = serde_json::to_string_pretty(&reports)
                .map_err(|e| CliError::config("out", e))?;
            write_atomic(&out, &(body + "\n"))?;
            let case_summaries: Vec<serde_json::Value> = reports
                .iter()
                .map(|r| json!({"case": r.case, "passed": r.passed, "runtime_ms": r.runtime_ms as u64}))
                .collect();
            summary(
                "validate",
                json!({"passed": all_passed, "cases": case_summaries, "out": out}),
                start.elapsed().as_millis(),
            );
            Ok(if all_passed { 0 } else { 2 })
        }
    }
}
