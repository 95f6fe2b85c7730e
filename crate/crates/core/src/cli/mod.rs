//! Configuration-driven runs: build or load a mesh, execute the requested
//! suites, and write the report.
//!
//! Exit statuses: 0 when every entry passes, 1 on a tolerance failure, 2 on
//! input, configuration or precondition errors.

mod config;
mod report;

use std::path::{Path, PathBuf};
use std::time::Instant;

pub use config::{env_threads, zoo_from_args, RadiiSpec, RunConfig, Spacing, Suite};
pub use report::{density_csv, DensityRow, Entry, MeshMeta, Timings, VerificationReport};

use crate::angle::{el_residual, lagrangian_angle_form, AngleForm};
use crate::error::Error;
use crate::identities::{check_pointwise_identities, default_tolerance, NormKind};
use crate::mesh::{load_mesh, save_mesh, SurfaceMesh};
use crate::monotonicity::{self as mono, CutoffKind, MONOTONE_SLACK};
use crate::parallel;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Input(#[from] Error),
    #[error("suite {suite}, entry {entry}: {source}")]
    Suite {
        suite: &'static str,
        entry: &'static str,
        #[source]
        source: Error,
    },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        EXIT_ERROR
    }
}

pub struct Outcome {
    pub report: VerificationReport,
    pub timings: Timings,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.report.pass {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }
}

fn suite_err(suite: Suite, entry: &'static str) -> impl FnOnce(Error) -> RunError {
    move |source| RunError::Suite {
        suite: suite.name(),
        entry,
        source,
    }
}

/// Threads: explicit value, else the config, else `HLMONO_THREADS`, else all cores.
pub fn resolve_threads(cli: Option<usize>, config: &RunConfig) -> usize {
    cli.or(config.threads).or_else(env_threads).unwrap_or(0)
}

pub fn build_mesh(config: &RunConfig) -> Result<(SurfaceMesh, String), RunError> {
    match (&config.surface, &config.mesh) {
        (Some(spec), _) => {
            let m = spec.build()?;
            let source = serde_json::to_string(spec).unwrap_or_default();
            Ok((m, source))
        }
        (None, Some(path)) => Ok((load_mesh(path)?, path.display().to_string())),
        (None, None) => Err(Error::Config("no surface given".into()).into()),
    }
}

fn mesh_meta(mesh: &SurfaceMesh, source: String) -> MeshMeta {
    MeshMeta {
        source,
        heisenberg: mesh.ambient.is_heisenberg(),
        nodes: mesh.node_count(),
        triangles: mesh.triangle_count(),
        h: mesh.param_h(),
        gauge_support: mesh.gauge_support(),
        origin_preimages: mesh.origin_preimages().len(),
    }
}

struct Runner<'a> {
    config: &'a RunConfig,
    mesh: SurfaceMesh,
    form: Option<AngleForm>,
    report: VerificationReport,
}

impl Runner<'_> {
    fn tol(&self, name: &str, default: f64) -> f64 {
        self.config.tolerances.get(name).copied().unwrap_or(default)
    }

    fn push(&mut self, suite: Suite, name: &str, value: f64, default: f64) {
        let t = self.tol(name, default);
        self.report.push(suite, name, value, t);
    }

    fn form(&mut self, suite: Suite) -> Result<&AngleForm, RunError> {
        if self.form.is_none() {
            self.form =
                Some(lagrangian_angle_form(&self.mesh).map_err(suite_err(suite, "angle_form"))?);
        }
        Ok(self.form.as_ref().expect("just set"))
    }

    fn run_suite(&mut self, suite: Suite) -> Result<(), RunError> {
        match suite {
            Suite::Angle => self.angle(),
            Suite::Identities => self.identities(),
            Suite::Monotonicity => self.monotonicity(),
            Suite::Classical => self.classical(),
            Suite::Bernstein => self.bernstein(),
        }
    }

    fn angle(&mut self) -> Result<(), RunError> {
        let s = Suite::Angle;
        let h = self.mesh.param_h();
        let form = self.form(s)?.clone();
        let r = el_residual(&self.mesh, &form).map_err(suite_err(s, "el_residual"))?;
        self.push(
            s,
            "el_residual",
            r.total(),
            default_tolerance(NormKind::WeightedL2, h),
        );
        self.report.constants.insert("el_norm".into(), r.el_norm);
        self.report
            .constants
            .insert("harmonic_norm".into(), r.harmonic_norm);
        Ok(())
    }

    fn identities(&mut self) -> Result<(), RunError> {
        let s = Suite::Identities;
        let form = self.form(s)?.clone();
        let rep = check_pointwise_identities(&self.mesh, Some(&form))
            .map_err(suite_err(s, "pointwise"))?;
        for (name, r) in &rep.residuals {
            self.push(s, name, r.value, r.tolerance);
        }
        self.report
            .constants
            .insert("excision_radius".into(), rep.excision_radius);
        Ok(())
    }

    fn monotonicity(&mut self) -> Result<(), RunError> {
        let s = Suite::Monotonicity;
        let radii = self.config.radii.values();
        let curve = mono::density_curve(&self.mesh, &radii).map_err(suite_err(s, "density"))?;
        self.report.density = (0..radii.len())
            .filter(|&k| curve.reliable[k])
            .map(|k| DensityRow {
                r: radii[k],
                density: curve.density[k],
                area: curve.area[k],
            })
            .collect();
        if self.report.density.len() < radii.len() {
            self.report
                .skipped
                .push("density radii beyond the meshed range".into());
        }
        let theta = mono::total_theta0(&self.mesh).map_err(suite_err(s, "theta0"))?;
        let truth = self
            .mesh
            .truth
            .as_ref()
            .map(|t| t.origin_weights.clone())
            .unwrap_or_default();
        for (k, (&p, &t)) in theta.iter().enumerate() {
            self.report.theta0.insert(p, t);
            if let Some(&w) = self
                .mesh
                .origins
                .iter()
                .position(|&o| o == p)
                .and_then(|i| truth.get(i))
            {
                self.push(
                    s,
                    &format!("theta0_error_{k}"),
                    (t.abs() / w - 1.0).abs(),
                    1e-2,
                );
            }
        }
        let theta_sum: f64 = theta.values().sum();
        let support = self.report.mesh.gauge_support;
        let heis = self.mesh.ambient.is_heisenberg();

        let r = self.config.balance_radius;
        if heis && 2.0 * r <= support {
            let cut = mono::make_cutoff(CutoffKind::Main).map_err(suite_err(s, "cutoff"))?;
            let b = mono::k10_balance_with_theta(&self.mesh, r, &cut, theta_sum)
                .map_err(suite_err(s, "balance"))?;
            let h = self.report.mesh.h;
            self.push(
                s,
                "balance_residual",
                b.residual,
                default_tolerance(NormKind::WeightedL2, h),
            );
            self.report.constants.insert("balance_lhs".into(), b.lhs);
            self.report.constants.insert("balance_rhs".into(), b.rhs);
        } else {
            self.report.skipped.push(format!(
                "balance_residual: needs a Heisenberg mesh covering gauge < {}",
                2.0 * r
            ));
        }

        if support >= 2.0 {
            let l = mono::lemma_density_bound(&self.mesh).map_err(suite_err(s, "lemma"))?;
            self.report.constants.insert("lemma_lhs".into(), l.lhs);
            self.report
                .constants
                .insert("lemma_annulus_area".into(), l.rhs_area);
            self.report.constants.insert("lemma_ratio".into(), l.ratio);
            let tr = self
                .config
                .theorem_radii
                .as_ref()
                .map_or_else(|| vec![0.1, 0.2, 0.4, 0.8], RadiiSpec::values);
            let c =
                mono::main_theorem_check(&self.mesh, &tr).map_err(suite_err(s, "main_theorem"))?;
            self.push(s, "theorem_constant", c.sup_product, 10.0);
            let max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let min = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
            self.report
                .constants
                .insert("c_upper_max".into(), max(&c.c_upper));
            self.report
                .constants
                .insert("c_lower_min".into(), min(&c.c_lower));
        } else {
            self.report
                .skipped
                .push("lemma and theorem constants: mesh must cover gauge < 2".into());
        }

        if heis {
            let rd = support.min(1.0);
            let d =
                mono::dirichlet_sigma(&self.mesh, rd).map_err(suite_err(s, "dirichlet_sigma"))?;
            self.report
                .constants
                .insert("dirichlet_sigma".into(), d.phase);
            let h = self.report.mesh.h;
            self.push(
                s,
                "dirichlet_discrepancy",
                d.discrepancy / (1.0 + d.phase),
                default_tolerance(NormKind::WeightedL2, h),
            );
        }
        Ok(())
    }

    fn classical(&mut self) -> Result<(), RunError> {
        let s = Suite::Classical;
        let euclid = if self.mesh.ambient.is_heisenberg() {
            self.mesh.euclidean_projection()
        } else {
            self.mesh.clone()
        };
        let support = euclid.gauge_support();
        let radii: Vec<f64> = self
            .config
            .radii
            .values()
            .into_iter()
            .filter(|&r| r <= support)
            .collect();
        if radii.is_empty() {
            self.report
                .skipped
                .push("classical: no radius inside the meshed ball".into());
            return Ok(());
        }
        let gate = self.tol("minimality_gate", mono::MINIMALITY_GATE);
        let c = mono::classical_monotonicity_with_gate(&euclid, &radii, gate)
            .map_err(suite_err(s, "minimality_gate"))?;
        self.push(s, "classical_residual", c.max_residual, 1e-2);
        let drop = c
            .lhs
            .windows(2)
            .map(|w| (w[0] - w[1]) / w[0].abs().max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max);
        self.push(s, "density_monotone", drop, MONOTONE_SLACK);
        self.report
            .constants
            .insert("minimality_defect".into(), c.minimality_defect);
        self.report
            .constants
            .insert("classical_cardinality".into(), c.cardinality as f64);
        Ok(())
    }

    fn bernstein(&mut self) -> Result<(), RunError> {
        let s = Suite::Bernstein;
        let support = self.report.mesh.gauge_support;
        let radii = match &self.config.bernstein_radii {
            Some(r) => r.values(),
            None => std::iter::successors(Some(0.1), |r| Some(r * 2.0))
                .take_while(|r| 2.0 * r <= support)
                .collect(),
        };
        if radii.is_empty() || !self.mesh.ambient.is_heisenberg() {
            self.report
                .skipped
                .push("bernstein: needs a Heisenberg mesh covering gauge < 0.2".into());
            return Ok(());
        }
        let tol = mono::BernsteinTolerances {
            f: self.tol("plane_like_f", 1e-2),
            s: self.tol("plane_like_s", 1e-2),
            conclusion: self.tol("bernstein_conclusion", 1e-6),
            eps: 0.1,
        };
        let b = mono::bernstein_check_with(&self.mesh, &radii, &tol)
            .map_err(suite_err(s, "bernstein"))?;
        let worst = b.terms.iter().map(|t| t.residual).fold(0.0, f64::max);
        let h = self.report.mesh.h;
        self.push(
            s,
            "bernstein_balance",
            worst,
            default_tolerance(NormKind::WeightedL2, h),
        );
        for (k, r) in radii.iter().enumerate() {
            self.report.constants.insert(format!("bernstein_r_{k}"), *r);
            self.report
                .constants
                .insert(format!("bernstein_f_{k}"), b.f[k]);
            self.report
                .constants
                .insert(format!("bernstein_s_{k}"), b.s[k]);
            self.report
                .constants
                .insert(format!("bernstein_d_{k}"), b.d[k]);
        }
        self.report
            .verdicts
            .insert("plane_like".into(), b.plane_like);
        if let Some(c) = b.conclusion {
            self.report
                .push(s, "bernstein_conclusion", c, tol.conclusion);
        }
        Ok(())
    }
}

/// Runs the configured suites with the given thread count (0 = all cores).
pub fn run(config: &RunConfig, threads: usize) -> Result<Outcome, RunError> {
    config.validate()?;
    parallel::with_threads(threads, || run_inner(config))
}

fn run_inner(config: &RunConfig) -> Result<Outcome, RunError> {
    let mut timings = Timings::default();
    let t0 = Instant::now();
    let (mesh, source) = build_mesh(config)?;
    timings.mesh = t0.elapsed().as_secs_f64();
    let mut suites = config.suites.clone();
    suites.sort();
    suites.dedup();
    let mut runner = Runner {
        config,
        report: VerificationReport {
            mesh: mesh_meta(&mesh, source),
            suites: suites.clone(),
            ..Default::default()
        },
        mesh,
        form: None,
    };
    for s in suites {
        let t = Instant::now();
        runner.run_suite(s)?;
        timings
            .suites
            .insert(s.name().into(), t.elapsed().as_secs_f64());
    }
    runner.report.finish();
    Ok(Outcome {
        report: runner.report,
        timings,
    })
}

/// Density table only.
pub fn density(config: &RunConfig, threads: usize) -> Result<Vec<DensityRow>, RunError> {
    config.validate()?;
    parallel::with_threads(threads, || {
        let (mesh, _) = build_mesh(config)?;
        let radii = config.radii.values();
        let c = mono::density_curve(&mesh, &radii)
            .map_err(suite_err(Suite::Monotonicity, "density"))?;
        Ok(radii
            .iter()
            .enumerate()
            .map(|(k, &r)| DensityRow {
                r,
                density: c.density[k],
                area: c.area[k],
            })
            .collect())
    })
}

fn write(path: &Path, text: &str) -> Result<(), Error> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Writes `report.json`, `identities.csv`, `density.csv` and `timings.json`.
pub fn write_outputs(outcome: &Outcome, dir: &Path) -> Result<Vec<PathBuf>, Error> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let files = [
        ("report.json", outcome.report.to_json()),
        ("identities.csv", outcome.report.identities_csv()),
        ("density.csv", outcome.report.density_csv()),
        (
            "timings.json",
            serde_json::to_string_pretty(&outcome.timings).unwrap_or_default(),
        ),
    ];
    let mut out = Vec::new();
    for (name, text) in files {
        let p = dir.join(name);
        write(&p, &text)?;
        out.push(p);
    }
    Ok(out)
}

/// Builds the zoo surface and writes it as HLMESH.
pub fn generate(spec: &crate::zoo::ZooSpec, path: &Path) -> Result<SurfaceMesh, Error> {
    let m = spec.build()?;
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    save_mesh(&m, path)?;
    Ok(m)
}
