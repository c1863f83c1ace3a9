//! Experiment configuration.
//!
//! ```toml
//! field = "cubic9"              # built-in name or path to a field spec
//! x = [50, 100, 200, 400]       # ascending
//! delta = 2
//! p0 = 1000
//! seed = 1
//! output = "out"
//!
//! [region]                      # defaults to [1/2, 3/2] × [−1/2, 1/2]^{k−2}
//! lo = ["1/2", "-1/2"]
//! hi = ["3/2", "1/2"]
//!
//! [budgets]
//! segment = 4194304             # integers per sieve segment
//! points = 1000000000           # lattice points per enumeration
//! volume_cells = 20000000
//! volume_tolerance = 1e-6
//! direct = 125000000            # residues per direct density count
//! ```

use std::path::{Path, PathBuf};
use std::str::FromStr;

use normdiv_core::{FieldSpec, Region};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{LabError, LabResult};

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Budgets {
    #[serde(default = "default_segment")]
    pub segment: u64,
    #[serde(default = "default_points")]
    pub points: u64,
    #[serde(default = "default_cells")]
    pub volume_cells: u64,
    #[serde(default = "default_tolerance")]
    pub volume_tolerance: f64,
    #[serde(default = "default_direct")]
    pub direct: u64,
}

fn default_segment() -> u64 {
    normdiv_core::divisor::SEGMENT as u64
}
fn default_points() -> u64 {
    1_000_000_000
}
fn default_cells() -> u64 {
    20_000_000
}
fn default_tolerance() -> f64 {
    1e-6
}
fn default_direct() -> u64 {
    normdiv_core::density::DIRECT_BUDGET as u64
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            segment: default_segment(),
            points: default_points(),
            volume_cells: default_cells(),
            volume_tolerance: default_tolerance(),
            direct: default_direct(),
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RegionBox {
    pub lo: Vec<String>,
    pub hi: Vec<String>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_field")]
    pub field: String,
    #[serde(default)]
    pub region: Option<RegionBox>,
    #[serde(default = "default_x")]
    pub x: Vec<u64>,
    #[serde(default = "default_delta")]
    pub delta: u64,
    #[serde(default = "default_p0")]
    pub p0: u64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub budgets: Budgets,
}

fn default_field() -> String {
    "cubic9".into()
}
fn default_x() -> Vec<u64> {
    vec![50, 100, 200, 400]
}
fn default_delta() -> u64 {
    2
}
fn default_p0() -> u64 {
    1000
}
fn default_seed() -> u64 {
    1
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            field: default_field(),
            region: None,
            x: default_x(),
            delta: default_delta(),
            p0: default_p0(),
            seed: default_seed(),
            output: None,
            budgets: Budgets::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> LabResult<ExperimentConfig> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| LabError::Config(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> LabResult<ExperimentConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LabError::io(path.display().to_string(), e))?;
        ExperimentConfig::parse(&text)
    }

    pub fn validate(&self) -> LabResult<()> {
        let b = &self.budgets;
        if b.segment == 0 || b.points == 0 || b.volume_cells == 0 || b.direct == 0 {
            return Err(LabError::Config("budgets must be positive".into()));
        }
        if !(b.volume_tolerance > 0.0) {
            return Err(LabError::Config("volume_tolerance must be positive".into()));
        }
        if b.segment > u32::MAX as u64 {
            return Err(LabError::Config("segment must fit in 32 bits".into()));
        }
        if self.x.windows(2).any(|w| w[0] >= w[1]) {
            return Err(LabError::Config("x must be strictly ascending".into()));
        }
        if self.x.first() == Some(&0) {
            return Err(LabError::Config("x must be positive".into()));
        }
        if self.delta < 2 {
            return Err(LabError::Config("delta must be at least 2".into()));
        }
        if self.p0 < 2 {
            return Err(LabError::Config("p0 must be at least 2".into()));
        }
        Ok(())
    }

    pub fn field_spec(&self) -> LabResult<FieldSpec> {
        crate::spec_file::resolve_field(&self.field)
    }

    pub fn region(&self, k: usize) -> LabResult<Region> {
        let Some(b) = &self.region else {
            return Ok(Region::standard(k));
        };
        let parse = |v: &[String]| -> LabResult<Vec<BigRational>> {
            v.iter()
                .map(|s| {
                    BigRational::from_str(s.trim())
                        .or_else(|_| {
                            num_bigint::BigInt::from_str(s.trim()).map(BigRational::from_integer)
                        })
                        .map_err(|_| LabError::Config(format!("region: bad number {s:?}")))
                })
                .collect()
        };
        let region = Region::new(parse(&b.lo)?, parse(&b.hi)?)
            .map_err(|e| LabError::Config(e.to_string()))?;
        if region.dim() + 1 != k {
            return Err(LabError::Config(format!(
                "region has dimension {} but the field needs {}",
                region.dim(),
                k - 1
            )));
        }
        Ok(region)
    }

    /// SHA-256 of the canonical JSON form.
    pub fn digest(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }
}
