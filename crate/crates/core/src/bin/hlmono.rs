use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hlmono::cli::{self, RunConfig, VerificationReport, EXIT_ERROR};

#[derive(Parser)]
#[command(
    name = "hlmono",
    version,
    about = "Density and conservation-law checks for Legendrian surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output directory (default: `out` from the config, else `./hlmono-out`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated suites overriding the config.
    #[arg(long)]
    suite: Option<String>,
    #[arg(long)]
    threads: Option<usize>,
    /// `name=value`, repeatable.
    #[arg(long = "tolerance")]
    tolerances: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Write a zoo surface as HLMESH: `gen sw_cone p=2 q=1 --out cone.hlmesh`.
    Gen {
        /// Surface kind (lagrangian_plane, sw_cone, lagrangian_graph, euclidean_minimal).
        kind: Option<String>,
        /// `key=value` generator parameters.
        params: Vec<String>,
        /// Take the surface from a run config instead.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Run the verification suites and write the report.
    Verify(RunArgs),
    /// Write the density table `r, density, area`.
    Density(RunArgs),
    /// Print a stored report.
    Report { path: PathBuf },
}

fn load(args: &RunArgs) -> Result<RunConfig, hlmono::Error> {
    let mut cfg = RunConfig::load(&args.config)?;
    if let Some(s) = &args.suite {
        cfg.restrict_suites(s)?;
    }
    for t in &args.tolerances {
        cfg.override_tolerance(t)?;
    }
    Ok(cfg)
}

fn out_dir(args: &RunArgs, cfg: &RunConfig) -> PathBuf {
    args.out
        .clone()
        .or_else(|| cfg.out.clone())
        .unwrap_or_else(|| PathBuf::from("hlmono-out"))
}

fn fail(msg: impl std::fmt::Display) -> i32 {
    eprintln!("error: {msg}");
    EXIT_ERROR
}

fn main() -> ExitCode {
    let code = match Cli::parse().command {
        Command::Gen {
            kind,
            params,
            config,
            out,
            threads,
        } => {
            let spec = match (kind, config) {
                (Some(k), None) => cli::zoo_from_args(&k, &params),
                (None, Some(c)) => RunConfig::load(c).and_then(|c| {
                    c.surface
                        .ok_or_else(|| hlmono::Error::Config("config has no 'surface'".into()))
                }),
                _ => Err(hlmono::Error::Config(
                    "give a surface kind or --config".into(),
                )),
            };
            let threads = threads.or_else(cli::env_threads).unwrap_or(0);
            match spec
                .and_then(|s| hlmono::parallel::with_threads(threads, || cli::generate(&s, &out)))
            {
                Ok(m) => {
                    println!(
                        "wrote {} ({} nodes, {} triangles)",
                        out.display(),
                        m.node_count(),
                        m.triangle_count()
                    );
                    0
                }
                Err(e) => fail(e),
            }
        }
        Command::Verify(args) => match load(&args) {
            Err(e) => fail(e),
            Ok(cfg) => match cli::run(&cfg, cli::resolve_threads(args.threads, &cfg)) {
                Err(e) => fail(e),
                Ok(outcome) => match cli::write_outputs(&outcome, &out_dir(&args, &cfg)) {
                    Err(e) => fail(e),
                    Ok(_) => {
                        print!("{}", outcome.report.render());
                        for e in outcome.report.failures() {
                            eprintln!(
                                "failed: {}.{} = {:e} > {:e}",
                                e.suite.name(),
                                e.name,
                                e.value,
                                e.tolerance
                            );
                        }
                        outcome.exit_code()
                    }
                },
            },
        },
        Command::Density(args) => match load(&args) {
            Err(e) => fail(e),
            Ok(cfg) => match cli::density(&cfg, cli::resolve_threads(args.threads, &cfg)) {
                Err(e) => fail(e),
                Ok(rows) => {
                    let dir = out_dir(&args, &cfg);
                    let path = dir.join("density.csv");
                    let res = std::fs::create_dir_all(&dir)
                        .and_then(|_| std::fs::write(&path, cli::density_csv(&rows)));
                    match res {
                        Ok(()) => {
                            println!("wrote {}", path.display());
                            0
                        }
                        Err(e) => fail(format!("{}: {e}", path.display())),
                    }
                }
            },
        },
        Command::Report { path } => match VerificationReport::load(&path) {
            Ok(r) => {
                print!("{}", r.render());
                0
            }
            Err(e) => fail(e),
        },
    };
    ExitCode::from(code as u8)
}
