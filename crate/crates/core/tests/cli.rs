use std::path::Path;
use std::process::Command;

use hlmono::cli::{
    self, RadiiSpec, RunConfig, Suite, VerificationReport, EXIT_ERROR, EXIT_FAIL, EXIT_PASS,
};
use hlmono::mesh::load_mesh;
use hlmono::zoo::{ClassicalKind, Potential, ZooSpec};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hlmono"))
}

fn plane_spec(angular: usize) -> ZooSpec {
    ZooSpec::LagrangianPlane {
        basis: hlmono::zoo::STANDARD_BASIS,
        offset: None,
        extent: 2.5,
        angular,
    }
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn plane_with_all_suites_passes() {
    let cfg = RunConfig::for_surface(plane_spec(64), Suite::ALL.to_vec());
    let out = cli::run(&cfg, 0).unwrap();
    assert_eq!(out.exit_code(), EXIT_PASS, "{}", out.report.render());
    let t = out.report.theta0.values().next().copied().unwrap();
    assert!((t / std::f64::consts::TAU - 1.0).abs() < 1e-2);
    assert!(out
        .report
        .entries
        .iter()
        .any(|e| e.name == "theta0_error_0"));
    assert_eq!(out.report.suites, Suite::ALL.to_vec());
    assert!(out.report.pass == out.report.entries.iter().all(|e| e.pass));
}

#[test]
fn cubic_graph_fails_the_angle_suite() {
    let spec = ZooSpec::LagrangianGraph {
        potential: Potential::Cubic { amp: 1.0 },
        extent: 1.0,
        half_cells: 16,
    };
    let out = cli::run(&RunConfig::for_surface(spec, vec![Suite::Angle]), 0).unwrap();
    assert_eq!(out.exit_code(), EXIT_FAIL);
    let f: Vec<_> = out.report.failures().map(|e| e.name.clone()).collect();
    assert_eq!(f, ["el_residual"]);
}

#[test]
fn catenoid_classical_suite_reports_monotone_density() {
    let spec = ZooSpec::EuclideanMinimal {
        shape: ClassicalKind::Catenoid { neck: 1.0 },
        extent: 2.5,
        angular: 64,
    };
    let mut cfg = RunConfig::for_surface(spec, vec![Suite::Classical]);
    cfg.radii = RadiiSpec::Sweep {
        start: 0.5,
        stop: 5.0,
        count: 10,
        spacing: Default::default(),
    };
    let out = cli::run(&cfg, 0).unwrap();
    let e = out
        .report
        .entries
        .iter()
        .find(|e| e.name == "density_monotone")
        .unwrap();
    assert!(e.pass);
    assert_eq!(out.exit_code(), EXIT_PASS, "{}", out.report.render());
}

#[test]
fn config_errors() {
    let base = "surface = { kind = \"lagrangian_plane\", extent = 2.5, angular = 16 }\n";
    assert!(RunConfig::from_toml(&format!("{base}suites = []\n")).is_err());
    assert!(
        RunConfig::from_toml(&format!("{base}suites = [\"angle\"]\nradii = [1.0, 0.5]\n")).is_err()
    );
    assert!(
        RunConfig::from_toml(&format!("{base}suites = [\"angle\"]\nradii = [0.0, 0.5]\n")).is_err()
    );
    assert!(RunConfig::from_toml(&format!("{base}suites = [\"nope\"]\n")).is_err());
    assert!(
        RunConfig::from_toml(&format!("{base}suites = [\"angle\"]\nunknown_key = 1\n")).is_err()
    );
    assert!(RunConfig::from_toml("suites = [\"angle\"]\n").is_err());
    assert!(RunConfig::from_toml(&format!(
        "{base}mesh = \"x.hlmesh\"\nsuites = [\"angle\"]\n"
    ))
    .is_err());
    let ok = RunConfig::from_toml(&format!(
        "{base}suites = [\"bernstein\", \"angle\"]\nradii = {{ start = 0.1, stop = 1.6, count = 5, spacing = \"geometric\" }}\n[tolerances]\nel_residual = 0.5\n"
    ))
    .unwrap();
    let r = ok.radii.values();
    assert_eq!(r.len(), 5);
    assert!((r[2] - 0.4).abs() < 1e-12);
    assert_eq!(ok.tolerances["el_residual"], 0.5);
}

#[test]
fn tolerance_overrides_apply() {
    let spec = ZooSpec::LagrangianGraph {
        potential: Potential::Cubic { amp: 1.0 },
        extent: 1.0,
        half_cells: 16,
    };
    let mut cfg = RunConfig::for_surface(spec, vec![Suite::Angle]);
    cfg.override_tolerance("el_residual=100").unwrap();
    let out = cli::run(&cfg, 0).unwrap();
    assert_eq!(out.exit_code(), EXIT_PASS);
    assert_eq!(out.report.entries[0].tolerance, 100.0);
    assert!(cfg.override_tolerance("el_residual").is_err());
    assert!(cfg.override_tolerance("el_residual=-1").is_err());
}

#[test]
fn precondition_errors_name_the_suite() {
    // A Euclidean mesh has no Lagrangian angle.
    let spec = ZooSpec::EuclideanMinimal {
        shape: ClassicalKind::Plane,
        extent: 2.5,
        angular: 16,
    };
    let err = cli::run(&RunConfig::for_surface(spec, vec![Suite::Identities]), 0)
        .err()
        .unwrap();
    assert_eq!(err.exit_code(), EXIT_ERROR);
    assert!(err.to_string().contains("identities"), "{err}");
}

#[test]
fn reports_round_trip_and_are_thread_independent() {
    let mut cfg = RunConfig::for_surface(plane_spec(48), Suite::ALL.to_vec());
    cfg.radii = RadiiSpec::List(vec![0.5, 1.0, 2.0]);
    let a = cli::run(&cfg, 1).unwrap();
    let b = cli::run(&cfg, 8).unwrap();
    assert_eq!(a.report.to_json(), b.report.to_json());
    assert_eq!(a.report.identities_csv(), b.report.identities_csv());
    let back = VerificationReport::from_json(&a.report.to_json()).unwrap();
    assert_eq!(back.to_json(), a.report.to_json());
    let csv = a.report.identities_csv();
    assert!(csv.starts_with("name,value,tolerance,pass\n"));
    assert_eq!(csv.lines().count(), a.report.entries.len() + 1);
}

#[test]
fn gen_writes_a_loadable_mesh() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cone.hlmesh");
    let st = bin()
        .args(["gen", "sw_cone", "p=2", "q=1", "angular=32", "--out"])
        .arg(&path)
        .status()
        .unwrap();
    assert!(st.success());
    let m = load_mesh(&path).unwrap();
    assert!(m.ambient.is_heisenberg());
    assert_eq!(m.origin_preimages().len(), 1);
    let st = bin()
        .args(["gen", "no_such_kind", "--out"])
        .arg(dir.path().join("x"))
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(EXIT_ERROR));
}

#[test]
fn density_subcommand_writes_pi() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "plane.toml",
        "surface = { kind = \"lagrangian_plane\", extent = 2.5, angular = 128 }\nsuites = [\"monotonicity\"]\nradii = { start = 0.1, stop = 2.0, count = 20 }\n",
    );
    let out = dir.path().join("out");
    let st = bin()
        .args(["density", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(st.success());
    let text = std::fs::read_to_string(out.join("density.csv")).unwrap();
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rows.headers().unwrap(), vec!["r", "density", "area"]);
    let mut n = 0;
    for rec in rows.records() {
        let d: f64 = rec.unwrap()[1].parse().unwrap();
        assert!((d - std::f64::consts::PI).abs() < 1e-2, "{d}");
        n += 1;
    }
    assert_eq!(n, 20);
}

#[test]
fn verify_exit_codes_and_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(
        dir.path(),
        "good.toml",
        "surface = { kind = \"lagrangian_plane\", extent = 2.5, angular = 48 }\nsuites = [\"angle\", \"monotonicity\"]\n",
    );
    let out = dir.path().join("good");
    let st = bin()
        .args(["verify", "--config"])
        .arg(&good)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(EXIT_PASS));
    for f in [
        "report.json",
        "identities.csv",
        "density.csv",
        "timings.json",
    ] {
        assert!(out.join(f).exists(), "{f}");
    }
    let report = std::fs::read_to_string(out.join("report.json")).unwrap();
    assert!(!report.contains("seconds") && !report.contains("timings"));
    let st = bin()
        .arg("report")
        .arg(out.join("report.json"))
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(EXIT_PASS));

    let graph = write(
        dir.path(),
        "graph.toml",
        "surface = { kind = \"lagrangian_graph\", potential = \"cubic\", amp = 1.0, extent = 1.0, half_cells = 16 }\nsuites = [\"angle\"]\n",
    );
    let st = bin()
        .args(["verify", "--config"])
        .arg(&graph)
        .arg("--out")
        .arg(dir.path().join("g"))
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(EXIT_FAIL));
    let st = bin()
        .args(["verify", "--tolerance", "el_residual=1e3", "--config"])
        .arg(&graph)
        .arg("--out")
        .arg(dir.path().join("g2"))
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(EXIT_PASS));

    let bad = write(
        dir.path(),
        "bad.toml",
        "surface = { kind = \"lagrangian_plane\", extent = 2.5, angular = 16 }\nsuites = [\"angle\"]\nradii = [2.0, 1.0]\n",
    );
    let st = bin()
        .args(["verify", "--config"])
        .arg(&bad)
        .arg("--out")
        .arg(dir.path().join("b"))
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(EXIT_ERROR));
    let st = bin()
        .args(["verify", "--config"])
        .arg(dir.path().join("missing.toml"))
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(EXIT_ERROR));
    let st = bin()
        .args(["verify", "--suite", "bogus", "--config"])
        .arg(&good)
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(EXIT_ERROR));
}

#[test]
fn mesh_paths_resolve_against_the_config() {
    let dir = tempfile::tempdir().unwrap();
    cli::generate(&plane_spec(32), &dir.path().join("p.hlmesh")).unwrap();
    let cfg = write(
        dir.path(),
        "c.toml",
        "mesh = \"p.hlmesh\"\nsuites = [\"monotonicity\"]\n",
    );
    let out = dir.path().join("o");
    let st = bin()
        .args(["verify", "--threads", "2", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(EXIT_PASS));
    // HLMESH stores no conformal chart, so the EL residual is unavailable.
    let o = bin()
        .args(["verify", "--suite", "angle", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(EXIT_ERROR));
    assert!(String::from_utf8_lossy(&o.stderr).contains("suite angle, entry el_residual"));
}

#[test]
fn env_threads_fallback() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.toml",
        "surface = { kind = \"lagrangian_plane\", extent = 2.5, angular = 32 }\nsuites = [\"monotonicity\"]\n",
    );
    let run = |env: &str, name: &str| {
        let out = dir.path().join(name);
        let st = bin()
            .env("HLMONO_THREADS", env)
            .args(["verify", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(&out)
            .status()
            .unwrap();
        assert!(st.success());
        std::fs::read_to_string(out.join("report.json")).unwrap()
    };
    assert_eq!(run("1", "a"), run("3", "b"));
}
