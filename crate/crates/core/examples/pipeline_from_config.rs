//! The staged pipeline driven from a TOML configuration, as the binary
//! runs it, with the manifest of hashed outputs.

use std::path::Path;

use poisson_cp::cli::{run_pipeline, RunConfig, Stage};

const CONFIG: &str = r#"
[geometry]
radius = 5e-8
b_range = { lo = 5e-5, hi = 1.5e-4, n = 3 }

[solver]
n_theta = 501
pixels = 16
l_max = 200

[corridor]
enabled = true
"#;

fn main() -> poisson_cp::Result<()> {
    let mut config = RunConfig::parse(CONFIG, Path::new("."))?;
    config.output.directory = std::env::temp_dir().join("poisson-cp-run");
    let manifest = run_pipeline(&config, Stage::Diffraction)?;
    println!(
        "status {} in {}",
        manifest.status,
        config.output.directory.display()
    );
    for stage in &manifest.stages {
        println!("  {:<12} {:.3} s", stage.stage, stage.seconds);
    }
    for out in &manifest.outputs {
        println!(
            "  {:<36} {} {} bytes",
            out.file,
            &out.sha256[..16],
            out.bytes
        );
    }
    for (key, value) in &manifest.summary {
        println!("  {key} = {value:e}");
    }
    Ok(())
}
