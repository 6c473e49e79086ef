//! Membership checks for the rational-coefficient homogeneous class.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::ifs::{similarity_dimension, FamilySpec};
use crate::linalg::rational_rank;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassCheck {
    pub name: String,
    pub passed: bool,
    pub witness: String,
}

/// Independent pass/fail entries; a failing check is a report entry, not an error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub map_count: usize,
    pub base: Option<u64>,
    pub similarity_dim: Option<f64>,
    pub weight_lcm: String,
    pub translation_rank: usize,
    pub checks: Vec<ClassCheck>,
}

impl ClassReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&ClassCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Rank over the rationals of the `m x (d+1)` matrix of translation coefficients.
pub fn translation_rank(f: &FamilySpec) -> usize {
    rational_rank(
        f.maps()
            .iter()
            .map(|m| m.translation.coeffs().to_vec())
            .collect(),
    )
}

pub fn validate_rational_class(f: &FamilySpec) -> ClassReport {
    let m = f.map_count();
    let base = f.homogeneous_base();
    let mut checks = Vec::with_capacity(5);
    let mut push = |name: &str, passed: bool, witness: String| {
        checks.push(ClassCheck {
            name: name.to_string(),
            passed,
            witness,
        })
    };

    push("map_count", m >= 4, format!("m = {m}"));

    match base {
        Some(l) => push(
            "homogeneous_base",
            3 <= l && (l as usize) < m,
            format!("L = {l}, need 3 <= L <= {}", m - 1),
        ),
        None => push(
            "homogeneous_base",
            false,
            "ratios are not a common constant 1/L".into(),
        ),
    }

    // Homogeneous families have a parameter-free dimension; otherwise use the midpoint.
    let similarity_dim = similarity_dimension(f, &f.midpoint()).ok();
    match similarity_dim {
        Some(s) => push("similarity_dim", s > 1.0, format!("s = {s:.10}")),
        None => push(
            "similarity_dim",
            false,
            "degenerate ratio at the midpoint".into(),
        ),
    }

    let lcm = f.weight_lcm();
    match base {
        Some(l) => {
            let divides = lcm.mod_floor(&BigInt::from(l)).is_zero();
            push(
                "base_not_dividing_lcm",
                !divides,
                format!("L = {l}, lcm of weight denominators = {lcm}"),
            )
        }
        None => push(
            "base_not_dividing_lcm",
            false,
            format!("no base; lcm = {lcm}"),
        ),
    }

    let rank = translation_rank(f);
    push(
        "independent_translations",
        rank == m,
        format!("rank {rank} of {m} translation polynomials"),
    );

    ClassReport {
        map_count: m,
        base,
        similarity_dim,
        weight_lcm: lcm.to_string(),
        translation_rank: rank,
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::AffineMapSpec;
    use crate::poly::ParamPoly;
    use crate::presets::{carpet_family, poly4_family};
    use crate::rational::RationalScalar;

    #[test]
    fn carpet_report() {
        let rep = validate_rational_class(&carpet_family());
        let passed: Vec<bool> = rep.checks.iter().map(|c| c.passed).collect();
        assert_eq!(passed, vec![true, true, true, true, false]);
        assert_eq!(rep.translation_rank, 2);
        assert!((rep.similarity_dim.unwrap() - 1.8927892607).abs() < 1e-9);
    }

    #[test]
    fn lcm_divisible_by_base_fails() {
        let third = ParamPoly::from_ratios(&[(1, 3)]);
        let maps = (0..5)
            .map(|k| {
                AffineMapSpec::new(third.clone(), ParamPoly::monomial(RationalScalar::one(), k))
            })
            .collect();
        let w = |q| RationalScalar::new(1, q);
        let f = FamilySpec::new(
            maps,
            (RationalScalar::zero(), RationalScalar::one()),
            vec![w(3), w(3), w(9), w(9), w(9)],
        )
        .unwrap();
        let rep = validate_rational_class(&f);
        assert!(!rep.check("base_not_dividing_lcm").unwrap().passed);
        assert_eq!(rep.weight_lcm, "9");
    }

    #[test]
    fn poly4_report() {
        let rep = validate_rational_class(&poly4_family());
        assert!(rep.check("base_not_dividing_lcm").unwrap().passed);
        assert!(rep.check("independent_translations").unwrap().passed);
        assert_eq!(rep.translation_rank, 4);
        assert!(rep.passed());
    }
}
