//! Plain-text (TOML) family files.
//!
//! ```toml
//! base = 3                      # optional; checked against the ratios
//! interval = ["0", "10"]
//! weights = ["1/8", "1/8", ...]
//!
//! [[maps]]
//! ratio = ["1/3"]               # coefficients of u^0, u^1, ...
//! translation = ["0", "1"]
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ifs::{AffineMapSpec, FamilySpec};
use crate::presets::preset_by_name;
use crate::rational::RationalScalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<u64>,
    pub interval: Vec<RationalScalar>,
    pub weights: Vec<RationalScalar>,
    pub maps: Vec<AffineMapSpec>,
}

impl FamilyFile {
    pub fn from_family(f: &FamilySpec) -> Self {
        FamilyFile {
            base: f.homogeneous_base(),
            interval: vec![f.interval().0.clone(), f.interval().1.clone()],
            weights: f.weights().to_vec(),
            maps: f.maps().to_vec(),
        }
    }

    pub fn into_family(self) -> Result<FamilySpec> {
        let [lo, hi]: [RationalScalar; 2] = self
            .interval
            .try_into()
            .map_err(|_| Error::Parse("interval must have exactly two entries".into()))?;
        let f = FamilySpec::new(self.maps, (lo, hi), self.weights)?;
        if let Some(base) = self.base {
            if f.homogeneous_base() != Some(base) {
                return Err(Error::InvalidFamily(format!(
                    "declared base {base} but ratios are not all 1/{base}"
                )));
            }
        }
        Ok(f)
    }
}

pub fn family_to_toml(f: &FamilySpec) -> String {
    toml::to_string(&FamilyFile::from_family(f)).expect("family files always serialize")
}

pub fn family_from_toml(text: &str) -> Result<FamilySpec> {
    let file: FamilyFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.into_family()
}

/// Resolves a preset name, falling back to reading a family file.
pub fn load_family(arg: &str) -> Result<FamilySpec> {
    match preset_by_name(arg) {
        Ok(f) => Ok(f),
        Err(preset_err) => {
            let path = Path::new(arg);
            if path.exists() {
                family_from_toml(&std::fs::read_to_string(path)?)
            } else {
                Err(preset_err)
            }
        }
    }
}
