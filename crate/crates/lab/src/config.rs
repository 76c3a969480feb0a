//! Flat `key = value` run configuration. Command-line flags take
//! precedence over file values.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Serialize;

use crate::io::InputError;

/// Keys accepted in config files, matching the long flag names.
pub const KEYS: [&str; 18] = [
    "N", "k", "l", "alpha", "l-prime", "seed", "samples", "format", "out", "threads", "tolerance",
    "h", "radius", "profile", "mesh", "problem", "function", "rhs",
];

pub fn parse_config(text: &str) -> Result<BTreeMap<String, (usize, String)>, InputError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| InputError {
            line: ln,
            message: format!("expected 'key = value', got '{line}'"),
        })?;
        let key = key.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(InputError {
                line: ln,
                message: format!("unknown key '{key}'"),
            });
        }
        if out.insert(key.clone(), (ln, value.trim().to_string())).is_some() {
            return Err(InputError {
                line: ln,
                message: format!("key '{key}' given twice"),
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Every setting after merging flags over the config file. Optional
/// entries stay `None` when neither source gave them; commands decide
/// which are required. Threads and the output directory are left out of
/// reports so they cannot change report bytes.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Resolved {
    #[serde(rename = "N")]
    pub dim: Option<usize>,
    pub k: Option<f64>,
    pub l: Option<f64>,
    pub alpha: Option<f64>,
    pub l_prime: Option<f64>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub tolerance: Option<f64>,
    pub h: Option<f64>,
    pub radius: Option<f64>,
    pub profile: Option<PathBuf>,
    pub mesh: Option<PathBuf>,
    pub problem: Option<PathBuf>,
    pub function: Option<String>,
    pub rhs: Option<String>,
    #[serde(skip)]
    pub format: Option<Format>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl Resolved {
    /// Fills every unset field from config entries.
    pub fn fill_from(&mut self, cfg: &BTreeMap<String, (usize, String)>) -> Result<(), InputError> {
        fn num<T: std::str::FromStr>(slot: &mut Option<T>, entry: Option<&(usize, String)>, key: &str) -> Result<(), InputError> {
            if slot.is_none() {
                if let Some((ln, v)) = entry {
                    *slot = Some(v.parse().map_err(|_| InputError {
                        line: *ln,
                        message: format!("cannot parse value '{v}' for key '{key}'"),
                    })?);
                }
            }
            Ok(())
        }
        num(&mut self.dim, cfg.get("N"), "N")?;
        num(&mut self.k, cfg.get("k"), "k")?;
        num(&mut self.l, cfg.get("l"), "l")?;
        num(&mut self.alpha, cfg.get("alpha"), "alpha")?;
        num(&mut self.l_prime, cfg.get("l-prime"), "l-prime")?;
        num(&mut self.seed, cfg.get("seed"), "seed")?;
        num(&mut self.samples, cfg.get("samples"), "samples")?;
        num(&mut self.tolerance, cfg.get("tolerance"), "tolerance")?;
        num(&mut self.h, cfg.get("h"), "h")?;
        num(&mut self.radius, cfg.get("radius"), "radius")?;
        num(&mut self.threads, cfg.get("threads"), "threads")?;
        num(&mut self.profile, cfg.get("profile"), "profile")?;
        num(&mut self.mesh, cfg.get("mesh"), "mesh")?;
        num(&mut self.problem, cfg.get("problem"), "problem")?;
        num(&mut self.out, cfg.get("out"), "out")?;
        num(&mut self.function, cfg.get("function"), "function")?;
        num(&mut self.rhs, cfg.get("rhs"), "rhs")?;
        if self.format.is_none() {
            if let Some((ln, v)) = cfg.get("format") {
                self.format = Some(match v.as_str() {
                    "json" => Format::Json,
                    "csv" => Format::Csv,
                    _ => {
                        return Err(InputError {
                            line: *ln,
                            message: format!("format must be json or csv, got '{v}'"),
                        })
                    }
                });
            }
        }
        Ok(())
    }
}
