use std::path::{Path, PathBuf};
use std::process::Command;

use casimir::cli::{Report, RunConfig};

const MIRRORS: &str = r#"
task = "force"
temperature = "zero"

[materials.mirror]
kind = "perfect-mirror"

[materials.vacuum]
kind = "vacuum"

[[stack]]
material = "mirror"
thickness = "semi-infinite"

[[stack]]
material = "vacuum"
thickness = 1e-6

[[stack]]
material = "mirror"
thickness = "semi-infinite"

[sweep]
parameter = "stack.1.thickness"
start = 2e-7
stop = 1e-6
points = 5
spacing = "log"

[profile]
points_per_side = 3
"#;

const GOLD: &str = r#"
temperature = 300

[materials.gold]
kind = "drude"
plasma_frequency = 1.37e16
damping = 5.32e13

[materials.vacuum]
kind = "vacuum"

[[stack]]
material = "gold"
thickness = "semi-infinite"

[[stack]]
material = "vacuum"
thickness = 5e-7

[[stack]]
material = "gold"
thickness = "semi-infinite"

[spectra]
z = 2e-7
omega = { start = 1e14, stop = 1e15, points = 3, spacing = "log" }
"#;

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn casimir(args: &[&str], config: &Path, out: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_casimir"))
        .args(args)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .env_remove("CASIMIR_OUT_DIR")
        .output()
        .unwrap()
}

fn data_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

#[test]
fn minimal_force_task() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.toml", MIRRORS);
    let out = dir.path().join("out");
    let o = casimir(&["compute"], &cfg, &out);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = data_rows(&std::fs::read_to_string(out.join("force.csv")).unwrap());
    assert_eq!(rows.len(), 1);
    assert!((rows[0][1] / -1.300e-3 - 1.0).abs() < 1e-3, "{}", rows[0][1]);
    assert!(out.join("manifest.json").exists());
}

#[test]
fn unknown_material_names_the_reference() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.toml", &MIRRORS.replacen("material = \"vacuum\"", "material = \"glass\"", 1));
    let o = casimir(&["compute"], &cfg, &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("glass") && err.contains("stack.1.material"), "{err}");
}

#[test]
fn malformed_values_exit_with_validation_status() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.toml", &MIRRORS.replace("thickness = 1e-6", "thickness = -1e-6"));
    assert_eq!(casimir(&["compute"], &cfg, &dir.path().join("out")).status.code(), Some(1));
    let cfg = write_config(dir.path(), "tol.toml", MIRRORS);
    let o = Command::new(env!("CARGO_BIN_EXE_casimir"))
        .args(["compute", "--tolerance=-1", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("tolerances.relative"));
}

#[test]
fn truncation_failure_exits_with_numerical_status() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!("{GOLD}\n[tolerances]\nmax_matsubara_terms = 2\n");
    let cfg = write_config(dir.path(), "run.toml", &text);
    let o = casimir(&["compute"], &cfg, &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn sweep_has_one_row_per_point() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.toml", MIRRORS);
    let out = dir.path().join("out");
    assert_eq!(casimir(&["sweep"], &cfg, &out).status.code(), Some(0));
    let text = std::fs::read_to_string(out.join("sweep.csv")).unwrap();
    assert_eq!(text.lines().count(), 6);
    for row in data_rows(&text) {
        let expect = casimir::oracles::ideal_mirror_pressure_t0(row[0]);
        assert!((row[1] / expect - 1.0).abs() < 1e-6);
    }
    let plot = std::fs::read_to_string(out.join("sweep.dat")).unwrap();
    let data: Vec<&str> = plot.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data.len(), 5);
    assert!(data.iter().all(|l| l.split_whitespace().count() == 2));
}

#[test]
fn profile_plot_has_four_columns() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.toml", &MIRRORS.replace("task = \"force\"", "task = \"profile\""));
    let out = dir.path().join("out");
    assert_eq!(casimir(&["compute"], &cfg, &out).status.code(), Some(0));
    let plot = std::fs::read_to_string(out.join("profile.dat")).unwrap();
    assert!(plot.lines().next().unwrap().starts_with('#'));
    let data: Vec<&str> = plot.lines().filter(|l| !l.starts_with('#')).collect();
    assert!(!data.is_empty());
    assert!(data.iter().all(|l| l.split_whitespace().count() == 4));
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.toml", GOLD);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(casimir(&["spectra", "--threads", "1"], &cfg, &a).status.code(), Some(0));
    assert_eq!(casimir(&["spectra", "--threads", "4"], &cfg, &b).status.code(), Some(0));
    for f in ["spectra.csv", "spectra.dat", "manifest.json"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn json_report_round_trips_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.toml", GOLD);
    let out = dir.path().join("out");
    assert_eq!(casimir(&["spectra", "--format", "json"], &cfg, &out).status.code(), Some(0));
    let text = std::fs::read_to_string(out.join("spectra.json")).unwrap();
    let report: Report = serde_json::from_str(&text).unwrap();
    assert_eq!(report.rows.len(), 3);
    let again = serde_json::to_string_pretty(&report).unwrap();
    assert_eq!(again.trim_end(), text.trim_end());
    let back: Report = serde_json::from_str(&again).unwrap();
    assert_eq!(back, report);
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.toml", MIRRORS);
    let env_out = dir.path().join("from-env");
    let o = Command::new(env!("CARGO_BIN_EXE_casimir"))
        .args(["compute", "--config"])
        .arg(&cfg)
        .env("CASIMIR_OUT_DIR", &env_out)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(env_out.join("force.csv").exists());
}

#[test]
fn oracle_and_validation_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.toml", GOLD);
    let out = dir.path().join("out");
    assert_eq!(casimir(&["oracle"], &cfg, &out).status.code(), Some(0));
    let text = std::fs::read_to_string(out.join("oracle-compare.csv")).unwrap();
    let rel: f64 = text.lines().nth(1).unwrap().split(',').nth(4).unwrap().parse().unwrap();
    assert!(rel < 1e-5, "{text}");
    assert_eq!(casimir(&["validate-material"], &cfg, &out).status.code(), Some(0));

    let bad = GOLD.replace("damping = 5.32e13", "damping = -5.32e13");
    let cfg = write_config(dir.path(), "bad.toml", &bad);
    let o = casimir(&["validate-material"], &cfg, &out);
    assert_eq!(o.status.code(), Some(1));
    let report = std::fs::read_to_string(out.join("validate.csv")).unwrap();
    assert!(report.contains("gold,fail,materials.gold.epsilon"), "{report}");
}

#[test]
fn sweep_over_material_parameter() {
    let dir = tempfile::tempdir().unwrap();
    let text = GOLD.replace("temperature = 300", "temperature = \"zero\"")
        + "\n[sweep]\nparameter = \"materials.gold.plasma_frequency\"\nstart = 5e15\nstop = 2e16\npoints = 3\n";
    let cfg = write_config(dir.path(), "run.toml", &text);
    let out = dir.path().join("out");
    assert_eq!(casimir(&["sweep"], &cfg, &out).status.code(), Some(0));
    let rows = data_rows(&std::fs::read_to_string(out.join("sweep.csv")).unwrap());
    assert!(rows.windows(2).all(|w| w[1][1] < w[0][1]), "better conductors attract harder");
}

#[test]
fn config_parses_tabulated_and_graded_materials() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("eps.txt"), "# xi eps\n0 4.0\n1e15 3.0\n1e16 1.5\n1e17 1.0\n").unwrap();
    let text = r#"
temperature = "zero"
[materials.film]
kind = "tabulated"
file = "eps.txt"
[materials.a]
kind = "constant"
value = 2.0
[materials.b]
kind = "constant"
value = 3.0
mu = { kind = "constant", value = 1.5 }
[materials.vacuum]
kind = "vacuum"
[[stack]]
material = "film"
thickness = "semi-infinite"
[[stack]]
material = "vacuum"
thickness = 1e-7
[[stack]]
material = "film"
thickness = "semi-infinite"
[graded]
position = 2
thickness = 1e-7
from = "a"
to = "b"
shape = "cosine"
steps = 4
"#;
    let config = RunConfig::parse(text).unwrap();
    let g = config.geometry(dir.path()).unwrap();
    assert_eq!(g.stack().len(), 7);
    assert!(config.gap_layer(g.stack()).is_err());
}
