//! Run configuration and parameter files (both TOML).

use std::path::{Path, PathBuf};

use odoni_core::arith::FactorBudget;
use odoni_core::params::OdoniParams;
use odoni_core::{Prime, Rational};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SEED_VAR: &str = "ODONI_SEED";

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    /// Worker threads for sampling; `None` lets rayon decide.
    pub workers: Option<usize>,
    pub output: Option<PathBuf>,
    pub budget: FactorBudget,
    pub certify: CertifyConfig,
    pub search: SearchConfig,
    pub sample: SampleConfig,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CertifyConfig {
    pub k_max: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchConfig {
    pub count: usize,
    pub height_bound: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SampleConfig {
    pub k: u32,
    pub p_max: u64,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig { k_max: 2 }
    }
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            count: 3,
            height_bound: 1_000_000,
        }
    }
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig { k: 2, p_max: 100_000 }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = read(path)?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Applies `ODONI_SEED` if it is set.
    pub fn apply_env(&mut self) -> Result<(), CliError> {
        if let Ok(s) = std::env::var(SEED_VAR) {
            self.seed = s
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{SEED_VAR}={s} is not an unsigned integer")))?;
        }
        Ok(())
    }
}

/// `n`, optional `a` (defaults to the exponent rule's choice), `A` as a
/// `"num/den"` string and the ramified primes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsFile {
    pub n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<u32>,
    #[serde(rename = "A")]
    pub big_a: String,
    #[serde(default)]
    pub s_ram: Vec<u64>,
}

impl ParamsFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = read(path)?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    pub fn to_params(&self) -> Result<OdoniParams, CliError> {
        let big_a = parse_rational(&self.big_a)?;
        let s_ram = parse_primes(&self.s_ram)?;
        let params = match self.a {
            Some(a) => OdoniParams::new(self.n, a, big_a, s_ram),
            None => OdoniParams::with_default_a(self.n, big_a, s_ram),
        };
        params.map_err(|e| CliError::Usage(e.to_string()))
    }
}

impl From<&OdoniParams> for ParamsFile {
    fn from(p: &OdoniParams) -> Self {
        ParamsFile {
            n: p.n,
            a: Some(p.a),
            big_a: p.big_a.to_string(),
            s_ram: p.s_ram.iter().filter_map(Prime::to_u64).collect(),
        }
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, CliError> {
    let s = s.trim();
    s.parse()
        .map_err(|e| CliError::Usage(format!("'{s}' is not a rational number: {e}")))
}

pub fn parse_primes(ps: &[u64]) -> Result<Vec<Prime>, CliError> {
    ps.iter()
        .map(|&p| Prime::new(p).map_err(|e| CliError::Usage(e.to_string())))
        .collect()
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}
