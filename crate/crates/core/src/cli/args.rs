use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use super::config::{BRange, RunConfig};
use super::pipeline::{execute, write_run, Stage};
use crate::{Error, Result};

/// Casimir-Polder potentials of atoms near spheres and the Poisson spot
/// they modify.
#[derive(Debug, Parser)]
#[command(name = "poisson-cp", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Response functions and C3 for the configured sphere and atom.
    Material,
    /// Stitched sphere potential.
    Potential,
    /// Eikonal phase profile and CP annulus.
    Phase,
    /// Radial profiles and images at a single detector distance.
    Diffract,
    /// Radial profiles over a range of detector distances.
    Scan,
}

/// Lengths are in metres.
#[derive(Debug, Args)]
pub struct Common {
    /// TOML run configuration; built-in defaults when omitted
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// output directory
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// sphere radius, m
    #[arg(long, global = true)]
    pub radius: Option<f64>,
    /// sphere to detector distance, m
    #[arg(long, global = true)]
    pub b: Option<f64>,
    /// detector distances as lo:hi:n
    #[arg(long = "b-range", global = true)]
    pub b_range: Option<String>,
    /// source aperture diameter, m
    #[arg(long = "source-diameter", global = true)]
    pub source_diameter: Option<f64>,
    /// leave out the CP phase
    #[arg(long = "no-cp", global = true)]
    pub no_cp: bool,
    /// repeat the diffraction for the C3 factors in corridor.factors
    #[arg(long, global = true)]
    pub corridor: bool,
    /// worker threads for the pixel loop
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// run twice and fail unless every output is byte-identical
    #[arg(long, global = true)]
    pub seedless: bool,
    /// override any config key, e.g. --set solver.n_theta=1999
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    pub set: Vec<String>,
}

/// Detector distances scanned when neither the config nor the flags name
/// a range: 0.05 to 1.05 mm in 0.05 mm steps.
const DEFAULT_SCAN: BRange = BRange {
    lo: 0.05e-3,
    hi: 1.05e-3,
    n: 21,
};

impl Cli {
    /// Final configuration: file (or defaults), `--set` overrides, then
    /// the dedicated flags.
    pub fn config(&self) -> Result<RunConfig> {
        let c = &self.common;
        let (text, base) = match &c.config {
            Some(p) => (
                std::fs::read_to_string(p)?,
                p.parent().unwrap_or(Path::new(".")).to_path_buf(),
            ),
            None => (String::new(), PathBuf::from(".")),
        };
        let mut cfg = RunConfig::parse_with_overrides(&text, &base, &c.set)?;
        if let Some(o) = &c.out {
            cfg.output.directory = o.clone();
        }
        if let Some(r) = c.radius {
            cfg.geometry.radius = r;
        }
        if let Some(b) = c.b {
            cfg.geometry.b = b;
        }
        if let Some(r) = &c.b_range {
            cfg.geometry.b_range = Some(r.parse()?);
        }
        if let Some(d) = c.source_diameter {
            cfg.geometry.source_diameter = d;
        }
        if c.no_cp {
            cfg.corridor.no_cp = true;
        }
        if c.corridor {
            cfg.corridor.enabled = true;
        }
        if let Some(t) = c.threads {
            cfg.solver.threads = t;
        }
        match self.command {
            Command::Diffract => {
                if c.b_range.is_some() {
                    return Err(Error::Config(
                        "diffract takes --b; use scan for --b-range".into(),
                    ));
                }
                cfg.geometry.b_range = None;
                if !cfg.wants("images") {
                    cfg.output.artifacts.push("images".into());
                }
            }
            Command::Scan if cfg.geometry.b_range.is_none() => {
                cfg.geometry.b_range = Some(DEFAULT_SCAN);
            }
            _ => {}
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn target(&self) -> Stage {
        match self.command {
            Command::Material => Stage::Material,
            Command::Potential => Stage::Potential,
            Command::Phase => Stage::Phase,
            Command::Diffract | Command::Scan => Stage::Diffraction,
        }
    }
}

/// Parses `args`, runs the requested stages and writes the outputs.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run_cli(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn run_cli(cli: &Cli) -> Result<()> {
    let cfg = cli.config()?;
    let target = cli.target();
    let dir = cfg.output.directory.clone();
    let out = match execute(&cfg, target) {
        Ok(out) => out,
        Err(failed) => {
            let (partial, e) = *failed;
            let path = write_run(&partial, &dir)?;
            eprintln!("partial manifest written to {}", path.display());
            return Err(e);
        }
    };
    if cli.common.seedless {
        let again = execute(&cfg, target).map_err(|failed| failed.1)?;
        if again.manifest.output_hashes() != out.manifest.output_hashes() {
            return Err(Error::Config(
                "outputs differ between two identical runs".into(),
            ));
        }
        eprintln!(
            "determinism check passed: {} outputs identical",
            out.artifacts.len()
        );
    }
    let path = write_run(&out, &dir)?;
    for (k, v) in &out.manifest.summary {
        println!("{k} = {v:e}");
    }
    for n in &out.manifest.notes {
        println!("note: {n}");
    }
    println!("manifest: {}", path.display());
    Ok(())
}
