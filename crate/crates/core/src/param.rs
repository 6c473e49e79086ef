use std::fmt;

use serde::{Deserialize, Serialize};

use crate::rational::RationalScalar;

/// A family parameter value. Exact values carry every exact-overlap and
/// collision claim; float values only ever produce numerical evidence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum Param {
    Exact(RationalScalar),
    Float(f64),
}

impl Param {
    pub fn to_f64(&self) -> f64 {
        match self {
            Param::Exact(r) => r.to_f64(),
            Param::Float(x) => *x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Param::Exact(_))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Param::Exact(_) => "rational",
            Param::Float(_) => "float",
        }
    }

    pub fn as_exact(&self) -> Option<&RationalScalar> {
        match self {
            Param::Exact(r) => Some(r),
            Param::Float(_) => None,
        }
    }
}

impl From<RationalScalar> for Param {
    fn from(r: RationalScalar) -> Self {
        Param::Exact(r)
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Exact(r) => write!(f, "{r}"),
            Param::Float(x) => write!(f, "{x:?}"),
        }
    }
}
