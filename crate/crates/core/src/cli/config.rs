use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::constants::ATOMIC_MASS_UNIT;
use crate::materials::{DrudeLorentzModel, PolarizabilityModel, Resonance, Transition};
use crate::{Error, Result};

/// Everything one run needs, read from a TOML file.
///
/// Every section and key is optional; the defaults describe an indium beam
/// from a 1200 °C oven, 600 mm upstream of a 50 nm silica sphere.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
#[derive(Default)]
pub struct RunConfig {
    pub sphere: SphereConfig,
    pub atom: AtomConfig,
    pub geometry: GeometryConfig,
    pub beam: BeamConfig,
    pub solver: SolverConfig,
    pub output: OutputConfig,
    pub corridor: CorridorConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SphereConfig {
    /// `"silica"`, `"drude-lorentz"` (uses `resonances`) or `"optical-data"`
    /// (fits `fit_lines` lines to the table at `optical_data`)
    pub model: String,
    pub resonances: Vec<Resonance>,
    pub optical_data: Option<PathBuf>,
    pub fit_lines: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AtomConfig {
    /// `"indium"` or `"table"` (uses `j0` and `transitions`)
    pub model: String,
    pub j0: f64,
    pub transitions: Vec<Transition>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometryConfig {
    /// sphere radius, m; 0 removes the obstacle
    pub radius: f64,
    /// source to sphere, m
    pub g: f64,
    /// sphere to detector, m
    pub b: f64,
    /// detector distances for a scan; replaces `b` when present
    pub b_range: Option<BRange>,
    pub source_diameter: f64,
}

/// `n` equally spaced values from `lo` to `hi` inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BRange {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl BRange {
    pub fn values(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        (0..self.n)
            .map(|k| self.lo + (self.hi - self.lo) * k as f64 / (self.n - 1) as f64)
            .collect()
    }
}

impl std::str::FromStr for BRange {
    type Err = Error;

    /// `lo:hi:n`
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::Config(format!("b-range `{s}` is not of the form lo:hi:n"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let range = BRange {
            lo: parts[0].trim().parse().map_err(|_| bad())?,
            hi: parts[1].trim().parse().map_err(|_| bad())?,
            n: parts[2].trim().parse().map_err(|_| bad())?,
        };
        Ok(range)
    }
}

/// Exactly one of `temperature`, `speed` and `wavelength` must be set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BeamConfig {
    /// kg
    pub mass: f64,
    /// oven temperature, K; the beam moves at the mean thermal speed
    pub temperature: Option<f64>,
    /// m/s
    pub speed: Option<f64>,
    /// m
    pub wavelength: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub l_max: usize,
    pub stitch_tol: f64,
    /// `"half-space"` (power-law phase from `C3`) or `"full"` (numeric
    /// eikonal through the stitched sphere potential)
    pub phase_model: String,
    pub n_theta: usize,
    /// m
    pub cp_step: f64,
    pub pixels: usize,
    /// radial extent of profiles, m; defaults to the sphere radius
    pub extent: Option<f64>,
    pub image_pixels: usize,
    /// worker threads for the pixel loop; 0 lets the pool decide
    pub threads: usize,
    /// blur profiles with the source image
    pub convolve: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub directory: PathBuf,
    /// any of `material`, `potential`, `phase`, `profiles`, `images`;
    /// images are left out by default (the `diffract` command adds them)
    pub artifacts: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorridorConfig {
    pub enabled: bool,
    pub factors: Vec<f64>,
    /// compute the diffraction stage without any CP phase
    pub no_cp: bool,
}

pub const ARTIFACTS: [&str; 5] = ["material", "potential", "phase", "profiles", "images"];

impl Default for SphereConfig {
    fn default() -> Self {
        SphereConfig {
            model: "silica".into(),
            resonances: Vec::new(),
            optical_data: None,
            fit_lines: 2,
        }
    }
}

impl Default for AtomConfig {
    fn default() -> Self {
        AtomConfig {
            model: "indium".into(),
            j0: 0.5,
            transitions: Vec::new(),
        }
    }
}

impl Default for GeometryConfig {
    fn default() -> Self {
        GeometryConfig {
            radius: 50e-9,
            g: 0.6,
            b: 0.1e-3,
            b_range: None,
            source_diameter: crate::fresnel::DEFAULT_SOURCE_DIAMETER,
        }
    }
}

impl Default for BeamConfig {
    fn default() -> Self {
        BeamConfig {
            mass: 114.8 * ATOMIC_MASS_UNIT,
            temperature: Some(1473.15),
            speed: None,
            wavelength: None,
        }
    }
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            l_max: 800,
            stitch_tol: crate::cp_potential::DEFAULT_STITCH_TOL,
            phase_model: "half-space".into(),
            n_theta: crate::fresnel::DEFAULT_N_THETA,
            cp_step: crate::fresnel::DEFAULT_CP_STEP,
            pixels: crate::fresnel::DEFAULT_PIXELS_RADIAL,
            extent: None,
            image_pixels: 4000,
            threads: 0,
            convolve: true,
        }
    }
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            directory: PathBuf::from("out"),
            artifacts: ["material", "potential", "phase", "profiles"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
        }
    }
}

impl Default for CorridorConfig {
    fn default() -> Self {
        CorridorConfig {
            enabled: false,
            factors: vec![0.8, 1.0, 1.8],
            no_cp: false,
        }
    }
}

impl RunConfig {
    /// Parses and validates; relative paths are resolved against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let value: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        Self::from_table(value, base)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base)
    }

    /// Parses `text` after applying `key.path=value` overrides.
    pub fn parse_with_overrides(text: &str, base: &Path, overrides: &[String]) -> Result<Self> {
        let mut table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        for o in overrides {
            apply_override(&mut table, o)?;
        }
        Self::from_table(table, base)
    }

    fn from_table(table: toml::Table, base: &Path) -> Result<Self> {
        let mut cfg: RunConfig = toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        if let Some(p) = &cfg.sphere.optical_data {
            if p.is_relative() {
                cfg.sphere.optical_data = Some(base.join(p));
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let b = &self.beam;
        let set = [
            b.temperature.is_some(),
            b.speed.is_some(),
            b.wavelength.is_some(),
        ]
        .iter()
        .filter(|&&x| x)
        .count();
        if set != 1 {
            return Err(Error::Config(
                "give exactly one of beam.temperature, beam.speed, beam.wavelength".into(),
            ));
        }
        if !(b.mass > 0.0) {
            return Err(Error::Config(format!(
                "beam.mass must be positive, got {}",
                b.mass
            )));
        }
        match self.sphere.model.as_str() {
            "silica" => {}
            "drude-lorentz" => {
                DrudeLorentzModel::new(self.sphere.resonances.clone())?;
            }
            "optical-data" => match &self.sphere.optical_data {
                Some(p) if p.is_file() => {}
                Some(p) => {
                    return Err(Error::Config(format!(
                        "sphere.optical_data `{}` does not exist",
                        p.display()
                    )))
                }
                None => return Err(Error::Config("sphere.optical_data is required".into())),
            },
            other => return Err(Error::Config(format!("unknown sphere.model `{other}`"))),
        }
        match self.atom.model.as_str() {
            "indium" => {}
            "table" => {
                if self.atom.transitions.is_empty() {
                    return Err(Error::Config("atom.transitions is empty".into()));
                }
                PolarizabilityModel::new(self.atom.j0, self.atom.transitions.clone())?;
            }
            other => return Err(Error::Config(format!("unknown atom.model `{other}`"))),
        }
        let g = &self.geometry;
        if !(g.radius >= 0.0) || !(g.g > 0.0) || !(g.b > 0.0) || !(g.source_diameter >= 0.0) {
            return Err(Error::Config("geometry lengths must be positive".into()));
        }
        if let Some(r) = &g.b_range {
            if r.n == 0 || !(r.lo > 0.0) || !(r.hi >= r.lo) {
                return Err(Error::Config(format!(
                    "b_range needs 0 < lo <= hi and n >= 1, got {}:{}:{}",
                    r.lo, r.hi, r.n
                )));
            }
        }
        if !matches!(self.solver.phase_model.as_str(), "half-space" | "full") {
            return Err(Error::Config(format!(
                "unknown solver.phase_model `{}`",
                self.solver.phase_model
            )));
        }
        for a in &self.output.artifacts {
            if !ARTIFACTS.contains(&a.as_str()) {
                return Err(Error::Config(format!("unknown artifact `{a}`")));
            }
        }
        if self.corridor.factors.iter().any(|f| !(*f >= 0.0)) {
            return Err(Error::Config(
                "corridor factors must be non-negative".into(),
            ));
        }
        Ok(())
    }

    /// Detector distances this run covers.
    pub fn b_values(&self) -> Vec<f64> {
        match &self.geometry.b_range {
            Some(r) => r.values(),
            None => vec![self.geometry.b],
        }
    }

    pub fn wants(&self, artifact: &str) -> bool {
        self.output.artifacts.iter().any(|a| a == artifact)
    }
}

/// Sets `a.b.c = value` in a TOML table; the value is parsed as TOML and
/// taken as a bare string when that fails.
fn apply_override(table: &mut toml::Table, spec: &str) -> Result<()> {
    let (key, raw) = spec
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override `{spec}` is not key=value")))?;
    let value: toml::Value = format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.trim().to_string()));
    let path: Vec<&str> = key.trim().split('.').collect();
    let (last, parents) = path.split_last().expect("split yields one item");
    let mut cur = table;
    for p in parents {
        let entry = cur
            .entry(p.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = entry
            .as_table_mut()
            .ok_or_else(|| Error::Config(format!("`{p}` in `{key}` is not a section")))?;
    }
    cur.insert(last.to_string(), value);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid_and_round_trip() {
        let cfg = RunConfig::default();
        cfg.validate().unwrap();
        let text = cfg.to_toml();
        let back = RunConfig::parse(&text, Path::new(".")).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.to_toml(), text);
    }

    #[test]
    fn beam_needs_exactly_one_source() {
        let both = "[beam]\ntemperature = 1000.0\nspeed = 500.0\n";
        assert!(matches!(
            RunConfig::parse(both, Path::new(".")),
            Err(Error::Config(_))
        ));
        let speed = "[beam]\nspeed = 500.0\n";
        let cfg = RunConfig::parse_with_overrides(
            speed,
            Path::new("."),
            &["beam.temperature=1473.15".into()],
        );
        assert!(cfg.is_err());
        // an explicit speed alone is fine once the default temperature is dropped
        let mut cfg = RunConfig::default();
        cfg.beam.temperature = None;
        cfg.beam.speed = Some(500.0);
        cfg.validate().unwrap();
    }

    #[test]
    fn missing_optical_data_is_rejected() {
        let text = "[sphere]\nmodel = \"optical-data\"\noptical_data = \"no/such/file.txt\"\n";
        let err = RunConfig::parse(text, Path::new("/nonexistent")).unwrap_err();
        assert!(err.to_string().contains("does not exist"), "{err}");
    }

    #[test]
    fn overrides_and_ranges() {
        let cfg = RunConfig::parse_with_overrides(
            "",
            Path::new("."),
            &[
                "geometry.radius=1e-7".into(),
                "solver.phase_model=full".into(),
                "geometry.b_range={ lo = 5e-5, hi = 1.05e-3, n = 5 }".into(),
            ],
        )
        .unwrap();
        assert_eq!(cfg.geometry.radius, 1e-7);
        assert_eq!(cfg.solver.phase_model, "full");
        let b = cfg.b_values();
        assert_eq!(b.len(), 5);
        assert!((b[4] - 1.05e-3).abs() < 1e-18);
        let r: BRange = "1e-4:2e-4:3".parse().unwrap();
        for (v, want) in r.values().iter().zip([1e-4, 1.5e-4, 2e-4]) {
            assert!((v - want).abs() < 1e-18);
        }
        assert!("1e-4:2e-4".parse::<BRange>().is_err());
    }

    #[test]
    fn unknown_keys_are_errors() {
        assert!(RunConfig::parse("[geometry]\nradiuss = 1.0\n", Path::new(".")).is_err());
    }
}
