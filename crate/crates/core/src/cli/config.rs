//! Run configuration, read from a flat TOML file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zoo::ZooSpec;

/// Verification suites, in execution order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Angle,
    Identities,
    Monotonicity,
    Classical,
    Bernstein,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Angle,
        Suite::Identities,
        Suite::Monotonicity,
        Suite::Classical,
        Suite::Bernstein,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Angle => "angle",
            Suite::Identities => "identities",
            Suite::Monotonicity => "monotonicity",
            Suite::Classical => "classical",
            Suite::Bernstein => "bernstein",
        }
    }

    pub fn parse(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s.trim())
            .ok_or_else(|| Error::Config(format!("unknown suite '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Geometric,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RadiiSpec {
    List(Vec<f64>),
    Sweep {
        start: f64,
        stop: f64,
        count: usize,
        #[serde(default)]
        spacing: Spacing,
    },
}

impl RadiiSpec {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            RadiiSpec::List(ref v) => v.clone(),
            RadiiSpec::Sweep {
                start,
                stop,
                count,
                spacing,
            } => {
                if count < 2 {
                    return vec![start];
                }
                (0..count)
                    .map(|k| {
                        let s = k as f64 / (count - 1) as f64;
                        match spacing {
                            Spacing::Linear => start + s * (stop - start),
                            Spacing::Geometric => start * (stop / start).powf(s),
                        }
                    })
                    .collect()
            }
        }
    }

    fn validate(&self, key: &str) -> Result<()> {
        let v = self.values();
        if v.is_empty()
            || v.iter().any(|r| !(r.is_finite() && *r > 0.0))
            || v.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(Error::Config(format!(
                "{key}: radii must be positive and strictly increasing"
            )));
        }
        Ok(())
    }
}

fn default_radii() -> RadiiSpec {
    RadiiSpec::Sweep {
        start: 0.1,
        stop: 2.0,
        count: 20,
        spacing: Spacing::Linear,
    }
}

fn default_balance_radius() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Zoo surface; exclusive with `mesh`.
    #[serde(default)]
    pub surface: Option<ZooSpec>,
    /// HLMESH file, relative paths resolved against the config file.
    #[serde(default)]
    pub mesh: Option<PathBuf>,
    pub suites: Vec<Suite>,
    /// Density sweep, also used by the classical suite.
    #[serde(default = "default_radii")]
    pub radii: RadiiSpec,
    #[serde(default)]
    pub bernstein_radii: Option<RadiiSpec>,
    #[serde(default)]
    pub theorem_radii: Option<RadiiSpec>,
    #[serde(default = "default_balance_radius")]
    pub balance_radius: f64,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn for_surface(surface: ZooSpec, suites: Vec<Suite>) -> Self {
        RunConfig {
            surface: Some(surface),
            mesh: None,
            suites,
            radii: default_radii(),
            bernstein_radii: None,
            theorem_radii: None,
            balance_radius: default_balance_radius(),
            tolerances: BTreeMap::new(),
            threads: None,
            out: None,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_toml(&text)?;
        if let (Some(m), Some(dir)) = (&cfg.mesh, path.parent()) {
            if m.is_relative() {
                cfg.mesh = Some(dir.join(m));
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.suites.is_empty() {
            return Err(Error::Config("at least one suite is required".into()));
        }
        match (&self.surface, &self.mesh) {
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "give either 'surface' or 'mesh', not both".into(),
                ))
            }
            (None, None) => {
                return Err(Error::Config(
                    "one of 'surface' or 'mesh' is required".into(),
                ))
            }
            _ => {}
        }
        self.radii.validate("radii")?;
        if let Some(r) = &self.bernstein_radii {
            r.validate("bernstein_radii")?;
        }
        if let Some(r) = &self.theorem_radii {
            r.validate("theorem_radii")?;
        }
        if !(self.balance_radius.is_finite() && self.balance_radius > 0.0) {
            return Err(Error::Config("balance_radius must be positive".into()));
        }
        if let Some((k, _)) = self.tolerances.iter().find(|(_, v)| !(**v >= 0.0)) {
            return Err(Error::Config(format!(
                "tolerance '{k}' must be non-negative"
            )));
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        Ok(())
    }

    /// Keeps only the suites in `list` (comma separated).
    pub fn restrict_suites(&mut self, list: &str) -> Result<()> {
        let mut suites = list
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(Suite::parse)
            .collect::<Result<Vec<_>>>()?;
        suites.sort();
        suites.dedup();
        self.suites = suites;
        self.validate()
    }

    /// Applies `name=value`.
    pub fn override_tolerance(&mut self, spec: &str) -> Result<()> {
        let (k, v) = spec
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected name=value, got '{spec}'")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("tolerance '{k}' is not a number")))?;
        self.tolerances.insert(k.trim().to_string(), v);
        self.validate()
    }
}

/// `HLMONO_THREADS` if set and valid.
pub fn env_threads() -> Option<usize> {
    std::env::var("HLMONO_THREADS")
        .ok()?
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
}

/// Zoo spec from `kind key=value ...`, filling unset sizes with defaults.
pub fn zoo_from_args(kind: &str, params: &[String]) -> Result<ZooSpec> {
    let kind = match kind {
        "plane" => "lagrangian_plane",
        "cone" => "sw_cone",
        "graph" => "lagrangian_graph",
        "minimal" => "euclidean_minimal",
        k => k,
    };
    let mut table = toml::Table::new();
    table.insert("kind".into(), toml::Value::String(kind.into()));
    for p in params {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected key=value, got '{p}'")))?;
        let snippet = format!("v = {v}");
        let value = match toml::from_str::<toml::Table>(&snippet) {
            Ok(mut t) => t.remove("v").unwrap_or(toml::Value::String(v.into())),
            Err(_) => toml::Value::String(v.into()),
        };
        table.insert(k.trim().into(), value);
    }
    let defaults: &[(&str, toml::Value)] = match kind {
        "lagrangian_plane" => &[
            ("extent", toml::Value::Float(2.5)),
            ("angular", toml::Value::Integer(64)),
        ],
        "sw_cone" => &[
            ("s_min", toml::Value::Float(1.0 / 64.0)),
            ("s_max", toml::Value::Float(2.5)),
            ("angular", toml::Value::Integer(64)),
        ],
        "lagrangian_graph" => &[
            ("extent", toml::Value::Float(1.0)),
            ("half_cells", toml::Value::Integer(32)),
        ],
        "euclidean_minimal" => &[
            ("extent", toml::Value::Float(2.5)),
            ("angular", toml::Value::Integer(64)),
        ],
        other => return Err(Error::Config(format!("unknown surface kind '{other}'"))),
    };
    for (k, v) in defaults {
        table.entry(k.to_string()).or_insert_with(|| v.clone());
    }
    toml::Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| Error::Config(e.message().to_string()))
}
