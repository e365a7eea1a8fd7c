use std::fs;

use poisson_cp::cli::{run, Manifest, RunConfig};

fn quick_config(dir: &std::path::Path) -> std::path::PathBuf {
    let text = r#"
[geometry]
radius = 5e-8
b = 1e-4

[solver]
n_theta = 101
pixels = 12
image_pixels = 24
l_max = 60
"#;
    let path = dir.join("run.toml");
    fs::write(&path, text).unwrap();
    path
}

fn manifest(dir: &std::path::Path) -> Manifest {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn diffract_writes_profiles_images_and_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = quick_config(tmp.path());
    let out = tmp.path().join("out");
    let code = run([
        "poisson-cp",
        "diffract",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--seedless",
    ]);
    assert_eq!(code, 0);
    let m = manifest(&out);
    assert_eq!(m.status, "complete");
    assert_eq!(m.stages.len(), 4);
    for rec in &m.outputs {
        let bytes = fs::read(out.join(&rec.file)).unwrap();
        assert_eq!(
            poisson_cp::cli::sha256_hex(&bytes),
            rec.sha256,
            "{}",
            rec.file
        );
    }
    let names: Vec<&str> = m.outputs.iter().map(|o| o.file.as_str()).collect();
    assert!(names.contains(&"image_b0.1000mm_cp.pgm"));
    assert!(names.contains(&"image_b0.1000mm_nocp.txt"));
    assert!(names.contains(&"on_axis.txt"));
    // the recorded configuration parses back to itself
    let echoed = RunConfig::parse(&m.config, tmp.path()).unwrap();
    assert_eq!(echoed.to_toml(), m.config);
}

#[test]
fn identical_runs_hash_identically() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = quick_config(tmp.path());
    let mut hashes = Vec::new();
    for name in ["a", "b"] {
        let out = tmp.path().join(name);
        let code = run([
            "poisson-cp",
            "scan",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--b-range",
            "1e-4:3e-4:2",
            "--corridor",
        ]);
        assert_eq!(code, 0);
        let m = manifest(&out);
        hashes.push(m.output_hashes());
    }
    assert_eq!(hashes[0], hashes[1]);
    assert!(hashes[0]
        .iter()
        .any(|(f, _)| f == "profile_b0.3000mm_cp_x1.8.txt"));
}

#[test]
fn failing_stage_leaves_partial_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = quick_config(tmp.path());
    let out = tmp.path().join("out");
    let code = run([
        "poisson-cp",
        "diffract",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--set",
        "solver.cp_step=-1.0",
    ]);
    assert_eq!(code, 1);
    let m = manifest(&out);
    assert_eq!(m.status, "failed");
    assert_eq!(m.failed_stage.as_deref(), Some("diffraction"));
    assert!(m.outputs.iter().any(|o| o.file == "phase.txt"));
}

#[test]
fn optical_data_path_is_resolved_against_the_config() {
    let tmp = tempfile::tempdir().unwrap();
    let table: String = (0..400)
        .map(|i| {
            let w = 1e11 * 1e9f64.powf(i as f64 / 399.0);
            format!(
                "{w:e} 1.5 {:e}\n",
                0.01 * (-((w.ln() - 37.0) / 1.5).powi(2)).exp()
            )
        })
        .collect();
    fs::write(tmp.path().join("nk.txt"), table).unwrap();
    let cfg = tmp.path().join("run.toml");
    fs::write(
        &cfg,
        "[sphere]\nmodel = \"optical-data\"\noptical_data = \"nk.txt\"\nfit_lines = 1\n",
    )
    .unwrap();
    let parsed = RunConfig::from_path(&cfg).unwrap();
    assert_eq!(
        parsed.sphere.optical_data.unwrap(),
        tmp.path().join("nk.txt")
    );
}
