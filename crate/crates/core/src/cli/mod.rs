//! Run configuration, beam thermodynamics and the staged pipeline behind
//! the `poisson-cp` binary.

mod args;
mod beam;
mod config;
mod pipeline;

pub use args::{run, Cli, Command, Common};
pub use beam::{beam_from_temperature, boltzmann_excited_fraction};
pub use config::{
    AtomConfig, BRange, BeamConfig, CorridorConfig, GeometryConfig, OutputConfig, RunConfig,
    SolverConfig, SphereConfig, ARTIFACTS,
};
pub use pipeline::{
    execute, run_pipeline, sha256_hex, write_run, Artifact, FailedRun, Manifest, OutputRecord,
    RunOutput, Stage, StageRecord,
};
