use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::beam::{beam_from_temperature, boltzmann_excited_fraction};
use super::config::RunConfig;
use crate::constants::CONSTANTS_VERSION;
use crate::cp_potential::{c3_halfspace, stitched_potential, PotentialCurve, SphereSystem};
use crate::eikonal::{capture_impact_parameter, default_grazing_grid, Beam, PhaseProfile};
use crate::fresnel::{
    assemble_image, convolve_source, fresnel_zone_width, radial_profile, RadialProfile, Scene,
};
use crate::materials::{
    fit_drude_lorentz, DrudeLorentzModel, OpticalDataTable, PolarizabilityModel,
};
use crate::{Error, Result};

/// Pipeline stages in execution order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Material,
    Potential,
    Phase,
    Diffraction,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Material => "material",
            Stage::Potential => "potential",
            Stage::Phase => "phase",
            Stage::Diffraction => "diffraction",
        }
    }
}

/// One output file, held in memory until the run is written out.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub file: String,
    pub sha256: String,
    pub bytes: usize,
}

/// Machine-readable account of a run, written as `manifest.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    /// `complete` or `failed`
    pub status: String,
    pub failed_stage: Option<String>,
    pub error: Option<String>,
    pub package_version: String,
    pub constants_version: String,
    /// SHA-256 of the canonical TOML form of the configuration
    pub input_hash: String,
    pub config: String,
    pub stages: Vec<StageRecord>,
    pub outputs: Vec<OutputRecord>,
    pub summary: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl Manifest {
    fn new(config: &RunConfig) -> Self {
        let text = config.to_toml();
        Manifest {
            status: "running".into(),
            failed_stage: None,
            error: None,
            package_version: env!("CARGO_PKG_VERSION").into(),
            constants_version: CONSTANTS_VERSION.into(),
            input_hash: sha256_hex(text.as_bytes()),
            config: text,
            stages: Vec::new(),
            outputs: Vec::new(),
            summary: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    /// Output file hashes, the part of the manifest that must repeat
    /// exactly between runs of one configuration.
    pub fn output_hashes(&self) -> Vec<(String, String)> {
        self.outputs
            .iter()
            .map(|o| (o.file.clone(), o.sha256.clone()))
            .collect()
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// A finished (or aborted) run held in memory.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub manifest: Manifest,
    pub artifacts: Vec<Artifact>,
}

struct Run<'a> {
    config: &'a RunConfig,
    manifest: Manifest,
    artifacts: Vec<Artifact>,
}

impl Run<'_> {
    fn stage<T>(&mut self, stage: Stage, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        let start = Instant::now();
        let out = f(self).map_err(|e| Error::Stage {
            stage: stage.name(),
            source: Box::new(e),
        });
        self.manifest.stages.push(StageRecord {
            stage: stage.name().into(),
            seconds: start.elapsed().as_secs_f64(),
        });
        out
    }

    fn emit(&mut self, name: String, bytes: Vec<u8>) {
        self.manifest.outputs.push(OutputRecord {
            file: name.clone(),
            sha256: sha256_hex(&bytes),
            bytes: bytes.len(),
        });
        self.artifacts.push(Artifact { name, bytes });
    }

    fn note(&mut self, key: &str, value: f64) {
        self.manifest.summary.insert(key.into(), value);
    }
}

struct Materials {
    sphere: DrudeLorentzModel,
    atom: PolarizabilityModel,
    beam: Beam,
    c3: f64,
}

fn material_stage(run: &mut Run) -> Result<Materials> {
    let cfg = run.config;
    let sphere = match cfg.sphere.model.as_str() {
        "silica" => DrudeLorentzModel::silica(),
        "drude-lorentz" => DrudeLorentzModel::new(cfg.sphere.resonances.clone())?,
        _ => {
            let path = cfg.sphere.optical_data.as_ref().expect("validated");
            let table = OpticalDataTable::from_path(path)?;
            let xi: Vec<f64> = (0..60)
                .map(|k| 10f64.powf(12.0 + 6.0 * k as f64 / 59.0))
                .collect();
            let mut samples = Vec::with_capacity(xi.len());
            for &x in &xi {
                let eps = crate::materials::kramers_kronig_imag_axis(&table, x)?;
                for w in eps.warnings {
                    if !run.manifest.notes.contains(&w) {
                        run.manifest.notes.push(w);
                    }
                }
                samples.push((x, eps.value));
            }
            let report = fit_drude_lorentz(&samples, cfg.sphere.fit_lines)?;
            run.note("fit_residual_norm", report.residual_norm);
            report.model
        }
    };
    let atom = match cfg.atom.model.as_str() {
        "indium" => PolarizabilityModel::indium(),
        _ => PolarizabilityModel::new(cfg.atom.j0, cfg.atom.transitions.clone())?,
    };
    let b = &cfg.beam;
    let beam = match (b.temperature, b.speed, b.wavelength) {
        (Some(t), _, _) => {
            run.note("excited_fraction", boltzmann_excited_fraction(&atom, t));
            beam_from_temperature(t, b.mass)?
        }
        (_, Some(v), _) => Beam::new(b.mass, v)?,
        (_, _, Some(l)) => Beam::from_wavelength(b.mass, l)?,
        _ => unreachable!("validated"),
    };
    let c3 = c3_halfspace(&sphere, &atom)?;
    run.note("c3", c3);
    run.note("speed", beam.speed);
    run.note("wavelength", beam.wavelength);
    run.note("static_permittivity", sphere.static_permittivity());
    if cfg.wants("material") {
        let mut text = String::new();
        let _ = writeln!(text, "# C3 = {c3:e} J m^3");
        for r in &sphere.resonances {
            let _ = writeln!(
                text,
                "# line: wP = {:e} rad/s, wT = {:e} rad/s, gamma = {:e} rad/s",
                r.plasma, r.transverse, r.damping
            );
        }
        let _ = writeln!(text, "# xi[rad/s] eps(i xi) alpha(i xi)[C^2 m^2/J]");
        for k in 0..=80 {
            let xi = 10f64.powf(11.0 + 8.0 * k as f64 / 80.0);
            let _ = writeln!(
                text,
                "{:.10e} {:.10e} {:.10e}",
                xi,
                sphere.eps_imag(xi),
                atom.alpha(xi)
            );
        }
        run.emit("material.txt".into(), text.into_bytes());
    }
    Ok(Materials {
        sphere,
        atom,
        beam,
        c3,
    })
}

/// Surface distances for the stitched curve: 0.2 nm up to `max(10 R, 1 um)`.
fn potential_grid(radius: f64) -> Vec<f64> {
    let lo = 0.2e-9f64.ln();
    let hi = (10.0 * radius).max(1e-6).ln();
    (0..48)
        .map(|k| radius + (lo + (hi - lo) * k as f64 / 47.0).exp())
        .collect()
}

fn potential_stage(run: &mut Run, m: &Materials) -> Result<PotentialCurve> {
    let cfg = run.config;
    let sys = SphereSystem::new(
        cfg.geometry.radius,
        m.sphere.clone(),
        m.atom.clone(),
        cfg.solver.l_max,
    )?
    .with_stitch_tol(cfg.solver.stitch_tol)?;
    let curve = stitched_potential(&sys, &potential_grid(cfg.geometry.radius))?;
    run.note("r_stitch", curve.r_stitch);
    run.note("joint_mismatch", curve.joint_mismatch);
    if curve.joint_mismatch > cfg.solver.stitch_tol {
        run.manifest.notes.push(format!(
            "series at l_max = {} never reached the stitch tolerance; best mismatch {:.4}",
            cfg.solver.l_max, curve.joint_mismatch
        ));
    }
    if cfg.wants("potential") {
        run.emit("potential.txt".into(), curve.to_text().into_bytes());
    }
    Ok(curve)
}

fn factor_tag(f: f64) -> String {
    format!("x{f}")
}

fn phase_stage(
    run: &mut Run,
    m: &Materials,
    curve: Option<&PotentialCurve>,
) -> Result<Vec<(f64, PhaseProfile)>> {
    let cfg = run.config;
    let radius = cfg.geometry.radius;
    let grid = default_grazing_grid(radius);
    let base = match curve {
        Some(c) => {
            let u = |x: f64, rho: f64| c.lateral(x, rho);
            PhaseProfile::numeric(radius, m.c3, &m.beam, &grid, &u)?
        }
        None => PhaseProfile::analytic(radius, m.c3, &m.beam, &grid)?,
    };
    run.note("c52", base.c52);
    run.note("r_inner", base.r_inner);
    run.note("r_outer", base.r_outer);
    run.note(
        "capture_impact_parameter",
        capture_impact_parameter(radius, m.c3, &m.beam)?,
    );
    let factors = if cfg.corridor.enabled {
        cfg.corridor.factors.clone()
    } else {
        vec![1.0]
    };
    let mut out = Vec::with_capacity(factors.len());
    for f in factors {
        let p = base.scaled(f)?;
        if cfg.wants("phase") {
            let name = if cfg.corridor.enabled {
                format!("phase_{}.txt", factor_tag(f))
            } else {
                "phase.txt".into()
            };
            run.emit(name, p.to_text().into_bytes());
        }
        out.push((f, p));
    }
    Ok(out)
}

fn b_tag(b: f64) -> String {
    format!("b{:.4}mm", b * 1e3)
}

fn diffraction_stage(run: &mut Run, m: &Materials, phases: &[(f64, PhaseProfile)]) -> Result<()> {
    let cfg = run.config;
    let s = &cfg.solver;
    let mut on_axis = String::new();
    let _ = write!(on_axis, "# b[m] no_cp");
    for (f, _) in phases {
        let _ = write!(on_axis, " cp_{}", factor_tag(*f));
    }
    let _ = writeln!(on_axis);
    for b in cfg.b_values() {
        let mut scene = Scene::new(cfg.geometry.radius, cfg.geometry.g, b, m.beam)?
            .with_resolution(s.n_theta, s.pixels)?
            .with_source_diameter(cfg.geometry.source_diameter)?;
        scene.cp_step = s.cp_step;
        if let Some(e) = s.extent {
            scene.extent = e;
        }
        scene.validate()?;
        if cfg.geometry.radius > 0.0 {
            run.note(&format!("w_fz_{}", b_tag(b)), fresnel_zone_width(&scene));
        }
        let mut variants: Vec<(String, Scene)> = vec![("nocp".into(), scene.clone())];
        for (f, p) in phases {
            let name = if cfg.corridor.enabled {
                format!("cp_{}", factor_tag(*f))
            } else {
                "cp".into()
            };
            variants.push((name, scene.clone().with_phase(p.clone())?));
        }
        let _ = write!(on_axis, "{b:.10e}");
        for (name, sc) in &variants {
            let point = radial_profile(sc)?;
            let profile = if s.convolve {
                convolve_source(&point, sc)?
            } else {
                point
            };
            let _ = write!(on_axis, " {:.10e}", profile.on_axis());
            if cfg.wants("profiles") {
                run.emit(
                    format!("profile_{}_{}.txt", b_tag(b), name),
                    profile.to_text().into_bytes(),
                );
            }
            if cfg.wants("images") {
                emit_image(run, &profile, &format!("image_{}_{}", b_tag(b), name));
            }
        }
        let _ = writeln!(on_axis);
    }
    if cfg.wants("profiles") {
        run.emit("on_axis.txt".into(), on_axis.into_bytes());
    }
    Ok(())
}

fn emit_image(run: &mut Run, profile: &RadialProfile, stem: &str) {
    let img = assemble_image(profile, run.config.solver.image_pixels);
    let sidecar = img.sidecar(profile);
    run.emit(format!("{stem}.pgm"), img.to_pgm());
    run.emit(format!("{stem}.txt"), sidecar.into_bytes());
}

fn execute_inner(run: &mut Run, target: Stage) -> Result<()> {
    let cfg = run.config;
    let m = run.stage(Stage::Material, material_stage)?;
    if target == Stage::Material {
        return Ok(());
    }
    let obstacle = cfg.geometry.radius > 0.0;
    let cp = obstacle && !cfg.corridor.no_cp;
    let wants_curve =
        target == Stage::Potential || cfg.solver.phase_model == "full" || cfg.wants("potential");
    let curve = if obstacle && wants_curve {
        Some(run.stage(Stage::Potential, |r| potential_stage(r, &m))?)
    } else {
        if !obstacle {
            run.manifest
                .notes
                .push("no obstacle: potential and phase stages skipped".into());
        }
        None
    };
    if target == Stage::Potential {
        return Ok(());
    }
    let phases = if cp {
        let source = if cfg.solver.phase_model == "full" {
            curve.as_ref()
        } else {
            None
        };
        run.stage(Stage::Phase, |r| phase_stage(r, &m, source))?
    } else {
        Vec::new()
    };
    if target == Stage::Phase {
        return Ok(());
    }
    run.stage(Stage::Diffraction, |r| diffraction_stage(r, &m, &phases))
}

/// Runs the stages up to and including `target` without touching the
/// file system. On failure the manifest is marked and returned with the
/// artifacts produced so far.
/// Failed run: the partial output together with the error that stopped it.
pub type FailedRun = Box<(RunOutput, Error)>;

pub fn execute(config: &RunConfig, target: Stage) -> std::result::Result<RunOutput, FailedRun> {
    let mut run = Run {
        config,
        manifest: Manifest::new(config),
        artifacts: Vec::new(),
    };
    let result = match config.validate() {
        Ok(()) => with_pool(config.solver.threads, || execute_inner(&mut run, target)),
        Err(e) => Err(e),
    };
    match result {
        Ok(()) => {
            run.manifest.status = "complete".into();
            Ok(RunOutput {
                manifest: run.manifest,
                artifacts: run.artifacts,
            })
        }
        Err(e) => {
            run.manifest.status = "failed".into();
            if let Error::Stage { stage, .. } = &e {
                run.manifest.failed_stage = Some(stage.to_string());
            }
            run.manifest.error = Some(e.to_string());
            Err(Box::new((
                RunOutput {
                    manifest: run.manifest,
                    artifacts: run.artifacts,
                },
                e,
            )))
        }
    }
}

fn with_pool<T: Send>(threads: usize, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    if threads == 0 {
        return f();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(f)
}

/// Writes artifacts and `manifest.json` into `dir`.
pub fn write_run(out: &RunOutput, dir: &Path) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    for a in &out.artifacts {
        std::fs::write(dir.join(&a.name), &a.bytes)?;
    }
    let path = dir.join("manifest.json");
    std::fs::write(&path, out.manifest.to_json())?;
    Ok(path)
}

/// Executes the pipeline up to `target` and writes everything to
/// `config.output.directory`. A failing run still leaves its partial
/// artifacts and a manifest naming the stage that failed.
pub fn run_pipeline(config: &RunConfig, target: Stage) -> Result<Manifest> {
    let dir = &config.output.directory;
    match execute(config, target) {
        Ok(out) => {
            write_run(&out, dir)?;
            Ok(out.manifest)
        }
        Err(failed) => {
            let (partial, e) = *failed;
            write_run(&partial, dir)?;
            Err(e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> RunConfig {
        let mut c = RunConfig::default();
        c.solver.n_theta = 61;
        c.solver.pixels = 8;
        c.solver.image_pixels = 16;
        c.solver.l_max = 60;
        c.output.artifacts = vec!["material".into(), "phase".into(), "profiles".into()];
        c
    }

    #[test]
    fn stages_stop_at_target() {
        let out = execute(&quick(), Stage::Material).unwrap();
        assert_eq!(out.manifest.stages.len(), 1);
        assert_eq!(out.artifacts[0].name, "material.txt");
        let c3 = out.manifest.summary["c3"];
        assert!((c3 / 9.77e-50 - 1.0).abs() < 0.02, "{c3}");
    }

    #[test]
    fn no_obstacle_gives_flat_profiles() {
        let mut c = quick();
        c.geometry.radius = 0.0;
        let out = execute(&c, Stage::Diffraction).unwrap();
        let profile = out
            .artifacts
            .iter()
            .find(|a| a.name.starts_with("profile_"))
            .unwrap();
        let text = String::from_utf8(profile.bytes.clone()).unwrap();
        for line in text.lines().filter(|l| !l.starts_with('#')) {
            let i: f64 = line.split_whitespace().nth(1).unwrap().parse().unwrap();
            assert!((i - 1.0).abs() < 1e-12, "{line}");
        }
    }

    #[test]
    fn corridor_emits_three_sets() {
        let mut c = quick();
        c.corridor.enabled = true;
        let out = execute(&c, Stage::Diffraction).unwrap();
        let names: Vec<&str> = out.artifacts.iter().map(|a| a.name.as_str()).collect();
        for f in ["x0.8", "x1", "x1.8"] {
            assert!(
                names.contains(&format!("phase_{f}.txt").as_str()),
                "{names:?}"
            );
            assert!(names.contains(&format!("profile_b0.1000mm_cp_{f}.txt").as_str()));
        }
    }

    #[test]
    fn failures_name_the_stage() {
        let mut c = quick();
        c.solver.n_theta = 1;
        let (partial, err) = *execute(&c, Stage::Diffraction).unwrap_err();
        assert!(
            matches!(
                err,
                Error::Stage {
                    stage: "diffraction",
                    ..
                }
            ),
            "{err}"
        );
        assert_eq!(
            partial.manifest.failed_stage.as_deref(),
            Some("diffraction")
        );
        assert_eq!(partial.manifest.status, "failed");
        assert!(!partial.artifacts.is_empty());
    }

    #[test]
    fn reruns_are_byte_identical() {
        let c = quick();
        let a = execute(&c, Stage::Diffraction).unwrap();
        let b = execute(&c, Stage::Diffraction).unwrap();
        assert_eq!(a.manifest.output_hashes(), b.manifest.output_hashes());
        assert_eq!(a.manifest.input_hash, b.manifest.input_hash);
    }
}
