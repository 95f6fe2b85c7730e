//! A configured verification run, as `hlmono verify` performs it.

use hlmono::cli::{self, RunConfig};

const CONFIG: &str = r#"
surface = { kind = "sw_cone", p = 2, q = 1, s_min = 0.015625, s_max = 2.5, angular = 64 }
suites = ["angle", "identities", "monotonicity", "bernstein"]
radii = { start = 0.1, stop = 2.0, count = 8, spacing = "geometric" }
"#;

fn main() -> hlmono::Result<()> {
    let cfg = RunConfig::from_toml(CONFIG)?;
    let outcome = cli::run(&cfg, 0).map_err(|e| hlmono::Error::Config(e.to_string()))?;
    print!("{}", outcome.report.render());
    let dir = std::env::temp_dir().join("hlmono-verify");
    cli::write_outputs(&outcome, &dir)?;
    println!(
        "outputs in {}, exit status {}",
        dir.display(),
        outcome.exit_code()
    );
    Ok(())
}
