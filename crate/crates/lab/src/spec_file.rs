//! Field specifications as TOML.
//!
//! ```toml
//! name = "cubic9"
//! degree = 3
//! min_poly = [-1, -3, 0, 1]          # constant term first, monic
//! basis = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]   # rows: ω_i in powers of θ
//! discriminant = "81"
//! class_number = 1
//! units = [[0, 1, 0], [1, 1, 0]]      # coordinates in the integral basis
//! precision_bits = 100
//! tensor = [...]                      # optional, checked if present
//! ```
//!
//! Basis entries may be integers or strings such as `"1/2"`.

use std::path::Path;
use std::str::FromStr;

use normdiv_core::field::tensor_from_basis;
use normdiv_core::FieldSpec;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, LabResult};

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Text(String),
}

impl Number {
    fn rational(&self) -> LabResult<BigRational> {
        match self {
            Number::Int(v) => Ok(BigRational::from_integer(BigInt::from(*v))),
            Number::Text(s) => BigRational::from_str(s.trim())
                .or_else(|_| BigInt::from_str(s.trim()).map(BigRational::from_integer))
                .map_err(|_| LabError::Config(format!("not a rational number: {s:?}"))),
        }
    }

    fn integer(&self) -> LabResult<BigInt> {
        let r = self.rational()?;
        if !r.is_integer() {
            return Err(LabError::Config(format!("expected an integer, got {r}")));
        }
        Ok(r.to_integer())
    }

    fn from_rational(r: &BigRational) -> Number {
        match (r.is_integer(), i64::try_from(r.to_integer())) {
            (true, Ok(v)) => Number::Int(v),
            _ => Number::Text(r.to_string()),
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpecFile {
    pub name: String,
    pub degree: usize,
    pub min_poly: Vec<Number>,
    pub basis: Vec<Vec<Number>>,
    pub discriminant: Number,
    #[serde(default = "one")]
    pub class_number: u32,
    pub units: Vec<Vec<i64>>,
    #[serde(default = "default_precision")]
    pub precision_bits: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tensor: Option<Vec<i64>>,
}

fn one() -> u32 {
    1
}

fn default_precision() -> u32 {
    100
}

impl FieldSpecFile {
    pub fn into_spec(self) -> LabResult<FieldSpec> {
        let k = self.degree;
        if self.min_poly.len() != k + 1 || self.basis.len() != k {
            return Err(LabError::Config(format!(
                "degree {k} needs {} polynomial coefficients and {k} basis rows",
                k + 1
            )));
        }
        let min_poly = self
            .min_poly
            .iter()
            .map(Number::integer)
            .collect::<LabResult<Vec<_>>>()?;
        let basis = self
            .basis
            .iter()
            .map(|row| row.iter().map(Number::rational).collect::<LabResult<Vec<_>>>())
            .collect::<LabResult<Vec<_>>>()?;
        if basis.iter().any(|r| r.len() != k) {
            return Err(LabError::Config("basis rows must have length degree".into()));
        }
        let tensor = tensor_from_basis(&min_poly, &basis)?;
        if let Some(given) = &self.tensor {
            if *given != tensor {
                return Err(LabError::Config(
                    "tensor does not match the one derived from the basis".into(),
                ));
            }
        }
        Ok(FieldSpec {
            name: self.name,
            degree: k,
            min_poly,
            basis,
            tensor,
            discriminant: self.discriminant.integer()?,
            class_number: self.class_number,
            units: self.units,
            precision_bits: self.precision_bits,
        })
    }

    pub fn from_spec(spec: &FieldSpec) -> FieldSpecFile {
        FieldSpecFile {
            name: spec.name.clone(),
            degree: spec.degree,
            min_poly: spec
                .min_poly
                .iter()
                .map(|c| Number::from_rational(&BigRational::from_integer(c.clone())))
                .collect(),
            basis: spec
                .basis
                .iter()
                .map(|r| r.iter().map(Number::from_rational).collect())
                .collect(),
            discriminant: Number::Text(spec.discriminant.to_string()),
            class_number: spec.class_number,
            units: spec.units.clone(),
            precision_bits: spec.precision_bits,
            tensor: Some(spec.tensor.clone()),
        }
    }
}

pub fn parse_spec(text: &str) -> LabResult<FieldSpec> {
    let file: FieldSpecFile =
        toml::from_str(text).map_err(|e| LabError::Config(format!("field spec: {e}")))?;
    file.into_spec()
}

pub fn load_spec(path: &Path) -> LabResult<FieldSpec> {
    let text =
        std::fs::read_to_string(path).map_err(|e| LabError::io(path.display().to_string(), e))?;
    parse_spec(&text)
}

pub fn spec_to_toml(spec: &FieldSpec) -> String {
    toml::to_string(&FieldSpecFile::from_spec(spec)).expect("field spec serializes")
}

/// A built-in field name, or a path to a TOML spec.
pub fn resolve_field(name_or_path: &str) -> LabResult<FieldSpec> {
    if let Some(spec) = FieldSpec::builtin(name_or_path) {
        return Ok(spec);
    }
    let path = Path::new(name_or_path);
    if path.exists() {
        return load_spec(path);
    }
    Err(LabError::Config(format!(
        "unknown field {name_or_path:?}; use cubic9, q_sqrt2_i or a spec file"
    )))
}
