//! Command-line front end: argument parsing, configuration precedence,
//! caching, and output emission for each subcommand.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{validate_z_list, BoundsRow, BoundsSetup, ConvergenceTable, FitSummary};
use crate::cache::{cache_key, Cache};
use crate::config::{OutputFormat, RunConfig};
use crate::density::DensityProfile;
use crate::error::{Error, Result};
use crate::output::{
    fmt_f64, write_bounds_csv, write_json, write_levels_csv, write_phi_csv, write_plot_data,
};
use crate::spectrum::{full_spectrum, RadialPotential, SpectrumSummary};
use crate::tf_energy::{energy_breakdown_with, minimize_tf_functional};
use crate::tf_model::{solve_tf, TfSolution, DEFAULT_TAIL_MATCH_X};

#[derive(Debug, Parser)]
#[command(name = "tfbound", version, about = "Thomas-Fermi screening, one-body spectra and large-Z energy bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Tabulate the screening function φ(x) and φ'(x).
    TfSolve,
    /// Kinetic, attraction and Hartree terms of the Thomas-Fermi density.
    Energy,
    /// Minimize the Thomas-Fermi functional directly from an exponential guess.
    Minimize,
    /// Bound levels of the Thomas-Fermi potential at one nuclear charge.
    Spectrum,
    /// Upper and lower energy bounds at one nuclear charge.
    Bounds,
    /// Bounds over a sweep of nuclear charges, with the Z^(-1/3) fit.
    Converge,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// TOML configuration file; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Nuclear charge for `spectrum` and `bounds`.
    #[arg(long = "Z", global = true)]
    pub z: Option<u32>,
    /// Comma-separated ascending nuclear charges for `converge`.
    #[arg(long, global = true, value_delimiter = ',')]
    pub z_list: Option<Vec<u32>>,
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Node count of the scaled density grid (4k+1).
    #[arg(long, global = true)]
    pub grid_nodes: Option<usize>,
    /// Outer edge of the scaled density grid.
    #[arg(long, global = true)]
    pub r_max: Option<f64>,
    #[arg(long, global = true)]
    pub tol_ode: Option<f64>,
    #[arg(long, global = true)]
    pub tol_eigen: Option<f64>,
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Disable reading and writing the cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Output file (standard output if absent; `converge` writes sibling
    /// files next to it).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (defaults to all cores; results do not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

impl Flags {
    /// Defaults, then the config file, then these flags.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut c = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        if let Some(z) = self.z {
            c.z_list = vec![z];
        }
        if let Some(list) = &self.z_list {
            c.z_list = list.clone();
        }
        if let Some(a) = self.alpha {
            c.alpha = a;
        }
        if let Some(n) = self.grid_nodes {
            c.grid.nodes = n;
        }
        if let Some(r) = self.r_max {
            c.grid.r_max = r;
        }
        if let Some(t) = self.tol_ode {
            c.tolerances.ode = t;
        }
        if let Some(t) = self.tol_eigen {
            c.tolerances.eigen = t;
        }
        if let Some(d) = &self.cache_dir {
            c.cache_dir = Some(d.clone());
        }
        if let Some(f) = self.format {
            c.format = f;
        }
        if let Some(o) = &self.out {
            c.out = Some(o.clone());
        }
        c.validate()?;
        Ok(c)
    }
}

/// Process exit status for an error: 2 configuration, 3 numerical failure,
/// 4 corrupt cache.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::CacheCorrupt { .. } => 4,
        Error::Config(_) | Error::Argument(_) | Error::Io(_) => 2,
        Error::AtCharge { source, .. } | Error::Channel { source, .. } => match exit_code(source) {
            4 => 4,
            _ => 3,
        },
        _ => 3,
    }
}

/// User-facing message for an error.
pub fn error_message(err: &Error) -> String {
    let mut msg = format!("error [{}]: {err}", err.module());
    if exit_code(err) == 4 {
        msg.push_str("\nthe corrupt cache entry has been removed; rerun the command");
    }
    msg
}

pub fn run(cli: &Cli) -> Result<()> {
    let config = cli.flags.resolve()?;
    let cache = (!cli.flags.no_cache).then(|| Cache::new(config.resolved_cache_dir()));
    let go = || run_subcommand(cli.command, &config, cache.as_ref());
    match cli.flags.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(go),
        None => go(),
    }
}

pub fn run_subcommand(command: Command, config: &RunConfig, cache: Option<&Cache>) -> Result<()> {
    let tf = Arc::new(load_tf(config, cache)?);
    match command {
        Command::TfSolve => emit(config, |w| match config.format {
            OutputFormat::Csv => write_phi_csv(w, &tf.phi_table),
            OutputFormat::Json => write_json(w, tf.as_ref()),
        }),
        Command::Energy => {
            let rho = DensityProfile::thomas_fermi(&tf, config.scaled_grid()?)?;
            let e = energy_breakdown_with(&rho, config.tolerances.quadrature)?;
            emit(config, |w| match config.format {
                OutputFormat::Json => write_json(w, &e),
                OutputFormat::Csv => {
                    writeln!(w, "kinetic,attraction,hartree,total,eigensum_semiclassical")?;
                    let vals = [e.kinetic, e.attraction, e.hartree, e.total, e.eigensum_semiclassical];
                    writeln!(w, "{}", vals.map(fmt_f64).join(","))?;
                    Ok(())
                }
            })
        }
        Command::Minimize => minimize(config, &tf),
        Command::Spectrum => {
            let z = single_z(config)?;
            let summary = spectrum(config, cache, tf, z)?;
            emit(config, |w| match config.format {
                OutputFormat::Csv => write_levels_csv(w, &summary.levels),
                OutputFormat::Json => write_json(w, &summary),
            })
        }
        Command::Bounds => {
            let z = single_z(config)?;
            let setup = config.bounds_setup(tf)?;
            let row = bounds_row(config, cache, &setup, z)?;
            emit(config, |w| match config.format {
                OutputFormat::Csv => write_bounds_csv(w, std::slice::from_ref(&row)),
                OutputFormat::Json => write_json(w, &row),
            })
        }
        Command::Converge => converge(config, cache, tf),
    }
}

fn single_z(config: &RunConfig) -> Result<u32> {
    match config.z_list.as_slice() {
        [z] => Ok(*z),
        _ => Err(Error::Config("this subcommand needs a single nuclear charge (--Z)".into())),
    }
}

fn emit(config: &RunConfig, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match &config.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            body(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            body(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn tolerance_key(config: &RunConfig) -> String {
    let t = &config.tolerances;
    format!("{}:{}:{}", fmt_f64(t.ode), fmt_f64(t.eigen), fmt_f64(t.quadrature))
}

/// Loads a cached entry, or computes and stores it. Storage failures are
/// logged, not fatal.
fn cached<T>(
    cache: Option<&Cache>,
    kind: &str,
    key: &str,
    compute: impl FnOnce() -> Result<T>,
) -> Result<T>
where
    T: Serialize + serde::de::DeserializeOwned,
{
    if let Some(c) = cache {
        if let Some(v) = c.load_json(kind, key)? {
            return Ok(v);
        }
    }
    let v = compute()?;
    if let Some(c) = cache {
        if let Err(e) = c.store_json(kind, key, &v) {
            log::warn!("could not write cache entry: {e}");
        }
    }
    Ok(v)
}

fn load_tf(config: &RunConfig, cache: Option<&Cache>) -> Result<TfSolution> {
    let key = cache_key(&["tf", &fmt_f64(config.tolerances.ode), &fmt_f64(DEFAULT_TAIL_MATCH_X)]);
    cached(cache, "tf", &key, || solve_tf(config.tolerances.ode))
}

fn spectrum(config: &RunConfig, cache: Option<&Cache>, tf: Arc<TfSolution>, z: u32) -> Result<SpectrumSummary> {
    let potential = RadialPotential::thomas_fermi(tf, f64::from(z));
    let opts = config.spectrum_options();
    let grid_sig = opts.grid_for(&potential)?.signature();
    let key = cache_key(&[
        "spectrum",
        &grid_sig,
        &tolerance_key(config),
        &fmt_f64(opts.energy_ceiling),
        potential.tag(),
        &z.to_string(),
    ]);
    if let Some(c) = cache {
        if let Some(levels) = c.load_levels(&key)? {
            return Ok(SpectrumSummary::from_levels(potential.tag(), levels));
        }
    }
    let summary = full_spectrum(&potential, &opts).map_err(|e| e.at_charge(z))?;
    if let Some(c) = cache {
        if let Err(e) = c.store_levels(&key, &summary.levels) {
            log::warn!("could not write cache entry: {e}");
        }
    }
    Ok(summary)
}

fn bounds_key(config: &RunConfig, setup: &BoundsSetup, z: u32) -> String {
    let s = &setup.spectrum;
    cache_key(&[
        "bounds",
        &setup.scaled_grid.signature(),
        &format!(
            "{}:{}:{}:{}",
            fmt_f64(s.r_min_scaled),
            fmt_f64(s.r_max),
            fmt_f64(s.log_step),
            fmt_f64(s.energy_ceiling)
        ),
        &tolerance_key(config),
        &fmt_f64(config.alpha),
        &z.to_string(),
    ])
}

fn bounds_row(config: &RunConfig, cache: Option<&Cache>, setup: &BoundsSetup, z: u32) -> Result<BoundsRow> {
    cached(cache, "bounds", &bounds_key(config, setup, z), || {
        BoundsRow::compute(z, config.alpha, setup).map_err(|e| e.at_charge(z))
    })
}

#[derive(Serialize)]
struct ConvergeJson<'a> {
    rows: &'a [BoundsRow],
    fit: &'a FitSummary,
}

/// `stem_suffix` next to `path`, e.g. `out/converge.csv` → `out/converge_fit.json`.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("converge");
    path.with_file_name(format!("{stem}{suffix}"))
}

fn converge(config: &RunConfig, cache: Option<&Cache>, tf: Arc<TfSolution>) -> Result<()> {
    validate_z_list(&config.z_list)?;
    let setup = config.bounds_setup(tf)?;
    // rows come from the cache where possible; the fit is always recomputed
    let rows = config
        .z_list
        .par_iter()
        .map(|&z| bounds_row(config, cache, &setup, z))
        .collect::<Result<Vec<_>>>()?;
    let table = ConvergenceTable::from_rows(rows);
    let main = config.out.clone().unwrap_or_else(|| PathBuf::from("converge.csv"));
    let cfg = RunConfig {
        out: Some(main.clone()),
        ..config.clone()
    };
    emit(&cfg, |w| match config.format {
        OutputFormat::Csv => write_bounds_csv(w, &table.rows),
        OutputFormat::Json => write_json(
            w,
            &ConvergeJson {
                rows: &table.rows,
                fit: &table.fit,
            },
        ),
    })?;
    let mut fit = BufWriter::new(File::create(sibling(&main, "_fit.json"))?);
    write_json(&mut fit, &table.fit)?;
    fit.flush()?;
    for (suffix, label, pick) in [
        ("_upper.dat", "upper_scaled", (|r: &BoundsRow| r.upper.scaled) as fn(&BoundsRow) -> f64),
        ("_lower.dat", "lower_scaled", |r: &BoundsRow| r.lower.scaled),
    ] {
        let points = table.rows.iter().map(|r| (r.z, pick(r))).collect::<Vec<_>>();
        let mut f = BufWriter::new(File::create(sibling(&main, suffix))?);
        write_plot_data(&mut f, label, &points)?;
        f.flush()?;
    }
    Ok(())
}

#[derive(Serialize)]
struct MinimizeSummary {
    chemical_potential: f64,
    energy: f64,
    iterations: usize,
    converged: bool,
    gradient_norm: f64,
    l1_to_ode_density: f64,
}

#[derive(Serialize)]
struct ProfilePoint {
    r: f64,
    rho: f64,
}

fn minimize(config: &RunConfig, tf: &TfSolution) -> Result<()> {
    let grid = config.scaled_grid()?;
    let guess = DensityProfile::from_fn(grid.clone(), |r| (-r).exp(), 0.0, f64::NEG_INFINITY)?;
    let guess = guess.scaled(1.0 / guess.total_norm())?;
    let out = minimize_tf_functional(&grid, &guess, config.minimize.step, config.minimize.max_iter)?;
    let reference = DensityProfile::thomas_fermi(tf, grid.clone())?;
    let summary = MinimizeSummary {
        chemical_potential: out.chemical_potential,
        energy: out.energy,
        iterations: out.iterations,
        converged: out.converged,
        gradient_norm: out.gradient_norm,
        l1_to_ode_density: out.density.l1_distance(&reference)?,
    };
    let nodes = grid.nodes();
    let values = out.density.values();
    match config.format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Full<'a> {
                #[serde(flatten)]
                summary: &'a MinimizeSummary,
                profile: Vec<ProfilePoint>,
            }
            let profile = nodes
                .iter()
                .zip(values)
                .map(|(&r, &rho)| ProfilePoint { r, rho })
                .collect();
            emit(config, |w| write_json(w, &Full { summary: &summary, profile }))
        }
        OutputFormat::Csv => {
            emit(config, |w| {
                writeln!(w, "R,rho,rho_tf")?;
                for ((r, rho), tf) in nodes.iter().zip(values).zip(reference.values()) {
                    writeln!(w, "{},{},{}", fmt_f64(*r), fmt_f64(*rho), fmt_f64(*tf))?;
                }
                Ok(())
            })?;
            match &config.out {
                Some(path) => {
                    let mut f = BufWriter::new(File::create(sibling(path, "_summary.json"))?);
                    write_json(&mut f, &summary)?;
                    f.flush()?;
                }
                None => write_json(io::stderr().lock(), &summary)?,
            }
            Ok(())
        }
    }
}
