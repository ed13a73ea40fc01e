use circlelab_cli::{render_svg, PlotKind};
use std::path::Path;
use std::process::{Command, Output};

fn circlelab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_circlelab")).current_dir(dir).args(args).output().unwrap()
}

fn files(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> =
        std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    v.sort();
    v
}

#[test]
fn slice_writes_one_row_per_angle() {
    let dir = tempfile::tempdir().unwrap();
    let o = circlelab(
        dir.path(),
        &["slice", "--map", "f", "--fiber", "0.05", "--thetas", "64", "--tol", "1e-6", "--out", "slice.csv"],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(dir.path().join("slice.csv")).unwrap();
    assert_eq!(text.lines().next(), Some("theta,radius"));
    assert_eq!(text.lines().count(), 65);
    assert_eq!(files(dir.path()), vec!["slice.csv"]);
}

#[test]
fn exact_series_carries_minus_two_thirds() {
    let dir = tempfile::tempdir().unwrap();
    let o = circlelab(dir.path(), &["series", "--map", "f", "--order", "24", "--exact", "--out", "series.csv"]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(dir.path().join("series.csv")).unwrap();
    assert_eq!(text.lines().next(), Some("j,mode,coeff_re,coeff_im"));
    assert!(text.lines().any(|l| l == "1,0,-2/3,0"), "{text}");
}

#[test]
fn usage_errors_exit_2_without_writing() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["bogus", "--out", "x.csv"],
        vec!["slice", "--tol", "-1", "--out", "x.csv"],
        vec!["slice", "--method", "guess", "--out", "x.csv"],
        vec!["slice", "--map", "nope", "--out", "x.csv"],
        vec!["phi", "--out", "x.csv"],
    ] {
        let o = circlelab(dir.path(), &args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
    assert!(files(dir.path()).is_empty());
}

#[test]
fn domain_errors_exit_1_with_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let o = circlelab(dir.path(), &["slice", "--map", "f", "--fiber", "0.9", "--thetas", "4", "--out", "x.csv"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert_eq!(err.lines().count(), 1);
    assert!(err.contains("bracket failure"), "{err}");
    let o = circlelab(dir.path(), &["tension", "--eps", "0.5", "--k", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(files(dir.path()).is_empty());
}

#[test]
fn config_round_trips_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let o =
        circlelab(dir.path(), &["ly-density", "--t0", "0.02", "--leaves", "800", "--out", "d.csv", "--dump-config"]);
    assert!(o.status.success());
    let cfg = String::from_utf8(o.stdout).unwrap();
    let v: serde_json::Value = serde_json::from_str(&cfg).unwrap();
    assert_eq!(v["subcommand"], "ly-density");
    assert_eq!(v["params"]["leaves"], 800);
    assert_eq!(v["rng_seed"], 0);
    assert!(files(dir.path()).is_empty());
    std::fs::write(dir.path().join("run.json"), &cfg).unwrap();

    // the dumped config reproduces the run
    assert!(circlelab(dir.path(), &["ly-density", "--t0", "0.02", "--leaves", "800", "--out", "a.csv"])
        .status
        .success());
    assert!(circlelab(dir.path(), &["ly-density", "--config", "run.json"]).status.success());
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    assert_eq!(std::fs::read(dir.path().join("d.csv")).unwrap(), a);

    // a flag overrides the file
    let o = circlelab(dir.path(), &["ly-density", "--config", "run.json", "--leaves", "6400", "--dump-config"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["params"]["leaves"], 6400);
    assert_eq!(v["params"]["t0"], 0.02);

    // a config for another subcommand is a usage error
    assert_eq!(circlelab(dir.path(), &["slice", "--config", "run.json"]).status.code(), Some(2));
}

#[test]
fn svg_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for out in ["a.csv", "b.csv"] {
        let o = circlelab(dir.path(), &["ly-density", "--t0", "0.05", "--leaves", "3200", "--out", out, "--svg"]);
        assert!(o.status.success());
    }
    let a = std::fs::read(dir.path().join("a.csv.svg")).unwrap();
    assert_eq!(a, std::fs::read(dir.path().join("b.csv.svg")).unwrap());
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("<svg") && text.contains(r#"width="800""#));
    assert_eq!(text.matches("fill=\"steelblue\"").count(), 32);
    assert_eq!(files(dir.path()), vec!["a.csv", "a.csv.svg", "b.csv", "b.csv.svg"]);
}

#[test]
fn slice_plot_is_a_closed_curve_near_the_circle() {
    let rows: String = (0..16).map(|k| format!("{},{}\n", k as f64 * 0.39, 1.0)).collect();
    let svg = render_svg(&format!("theta,radius\n{rows}"), PlotKind::Slice).unwrap();
    assert!(svg.contains("<polygon"));
    assert!(svg.contains(r#"r="250""#));
    assert!(render_svg("theta,radius\n", PlotKind::Density).is_err());
}

#[test]
fn zeros_and_preimages_from_the_command_line() {
    let dir = tempfile::tempdir().unwrap();
    let o = circlelab(dir.path(), &["ly-zeros", "--level", "2", "--seed-points", "16", "--out", "z.csv", "--svg"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(dir.path().join("z.csv")).unwrap();
    assert_eq!(text.lines().next(), Some("level,theta,t"));
    assert!(text.lines().skip(1).all(|l| l.starts_with("2,")));
    let o = circlelab(
        dir.path(),
        &["preimages", "--map", "R", "--chart", "physical-zt", "--c1", "0.3,0.2", "--c2", "0.4,-0.1"],
    );
    assert!(o.status.success());
    let out = String::from_utf8(o.stdout).unwrap();
    assert_eq!(out.lines().count(), 9);
}
