//! Flat `key = value` configuration for simulation runs.
//!
//! ```text
//! # comments start with '#'
//! scenario   = I            # I (uniform) or II (gaussian)
//! k          = 0.2, 0.8     # comma-separated list
//! n          = 50, 500, 5000
//! methods    = mifs:0, mifs:1, mrmr, maxmifs
//! replicates = 100          # default 100
//! seed       = 42           # default 0
//! delta      = 0.5          # optional scenario parameters
//! a = 3
//! b = 1
//! d = 2
//! grid       = total-cells  # or per-axis
//! traces     = false
//! ```
//!
//! `scenario`, `k`, `n` and `methods` are required; unknown or repeated
//! keys are errors.

use std::collections::HashSet;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::estimation::Grid2d;
use crate::oracle::{Scenario, ScenarioSpec};
use crate::selection::MethodSpec;
use crate::simlab::ExperimentConfig;

pub const DEFAULT_REPLICATES: usize = 100;

const KEYS: [&str; 12] = [
    "scenario", "k", "n", "methods", "replicates", "seed", "delta", "a", "b", "d", "grid", "traces",
];

fn list<T: FromStr>(value: &str, line: usize, key: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<T>().map_err(|_| Error::Config {
                line,
                msg: format!("bad value `{s}` for `{key}`"),
            })
        })
        .collect()
}

fn one<T: FromStr>(value: &str, line: usize, key: &str) -> Result<T> {
    value.trim().parse::<T>().map_err(|_| Error::Config {
        line,
        msg: format!("bad value `{}` for `{key}`", value.trim()),
    })
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut seen = HashSet::new();
    let mut scenario = None;
    let mut ks = None;
    let mut ns = None;
    let mut methods = None;
    let mut replicates = DEFAULT_REPLICATES;
    let mut seed = 0u64;
    let mut delta = 0.5;
    let (mut a, mut b, mut d) = (3.0, 1.0, 2.0);
    let mut grid = Grid2d::default();
    let mut traces = false;
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| Error::Config {
            line,
            msg: format!("expected `key = value`, got `{content}`"),
        })?;
        let key = key.trim().to_ascii_lowercase();
        if !KEYS.contains(&key.as_str()) {
            return Err(Error::Config {
                line,
                msg: format!("unknown key `{key}` (valid keys: {})", KEYS.join(", ")),
            });
        }
        if !seen.insert(key.clone()) {
            return Err(Error::Config {
                line,
                msg: format!("duplicate key `{key}`"),
            });
        }
        let at = |e: Error| match e {
            Error::Config { .. } => e,
            other => Error::Config {
                line,
                msg: other.to_string(),
            },
        };
        match key.as_str() {
            "scenario" => scenario = Some(value.parse::<Scenario>().map_err(at)?),
            "k" => ks = Some(list::<f64>(value, line, &key)?),
            "n" => ns = Some(list::<usize>(value, line, &key)?),
            "methods" => {
                methods = Some(
                    value
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(|s| s.parse::<MethodSpec>().map_err(at))
                        .collect::<Result<Vec<_>>>()?,
                )
            }
            "replicates" => replicates = one(value, line, &key)?,
            "seed" => seed = one(value, line, &key)?,
            "delta" => delta = one(value, line, &key)?,
            "a" => a = one(value, line, &key)?,
            "b" => b = one(value, line, &key)?,
            "d" => d = one(value, line, &key)?,
            "grid" => {
                grid = match value.trim().to_ascii_lowercase().as_str() {
                    "total-cells" | "total" => Grid2d::TotalCells,
                    "per-axis" | "axis" => Grid2d::PerAxis,
                    other => {
                        return Err(Error::Config {
                            line,
                            msg: format!("grid must be total-cells or per-axis, got `{other}`"),
                        })
                    }
                }
            }
            "traces" => traces = one(value, line, &key)?,
            _ => unreachable!(),
        }
    }

    let missing = |key: &str| Error::Config {
        line: last_line,
        msg: format!("missing required key `{key}`"),
    };
    let scenario = scenario.ok_or_else(|| missing("scenario"))?;
    let ks = ks.ok_or_else(|| missing("k"))?;
    let ns = ns.ok_or_else(|| missing("n"))?;
    let methods = methods.ok_or_else(|| missing("methods"))?;
    let spec = ScenarioSpec {
        scenario,
        delta,
        a,
        b,
        d,
        k: ks.first().copied().unwrap_or(0.5),
    };
    let mut config = ExperimentConfig::new(spec, ks, ns, methods, replicates, seed);
    config.grid = grid;
    config.keep_traces = traces;
    config.validate()?;
    Ok(config)
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    parse_config(&std::fs::read_to_string(path)?)
}
