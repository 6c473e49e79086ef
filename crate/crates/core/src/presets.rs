//! Named families.

use crate::error::{Error, Result};
use crate::ifs::{AffineMapSpec, FamilySpec};
use crate::poly::ParamPoly;
use crate::rational::RationalScalar;

/// Lattice digits `{0,1,2}^2 \ {(1,1)}` in lexicographic order. Map `i` of the
/// carpet family uses digit `CARPET_DIGITS[i - 1]`.
pub const CARPET_DIGITS: [(i64, i64); 8] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (1, 0),
    (1, 2),
    (2, 0),
    (2, 1),
    (2, 2),
];

pub fn carpet_family() -> FamilySpec {
    carpet_family_on(RationalScalar::zero(), RationalScalar::integer(10))
        .expect("default carpet interval is valid")
}

/// Projections of the Sierpiński carpet in slope coordinates `u = tan(angle)`:
/// ratio `1/3` and translation `a + b u` for each digit `(a, b)`, uniform weights.
/// The common factor `cos(angle)` is dropped; it only rescales the line.
pub fn carpet_family_on(lo: RationalScalar, hi: RationalScalar) -> Result<FamilySpec> {
    let third = ParamPoly::from_ratios(&[(1, 3)]);
    let maps = CARPET_DIGITS
        .iter()
        .map(|&(a, b)| {
            AffineMapSpec::new(
                third.clone(),
                ParamPoly::new(vec![RationalScalar::integer(a), RationalScalar::integer(b)]),
            )
        })
        .collect();
    FamilySpec::new(maps, (lo, hi), vec![RationalScalar::new(1, 8); 8])
}

/// Three maps `S_i(x) = λ_i(u) (x + 1)` with `(λ_1, λ_2, λ_3) = (u/(1+ε), u, u+ε)`,
/// which satisfy `S_1∘S_3∘S_2 = S_2∘S_1∘S_3` identically in `u`.
///
/// Parameter interval: `[1/3 + ε/3, 1/3 + ε/3 + 1/100]`. Accepts `0 < ε <= 1/100`.
pub fn sandor_family(epsilon: &RationalScalar) -> Result<FamilySpec> {
    if !epsilon.is_positive() || epsilon > &RationalScalar::new(1, 100) {
        return Err(Error::InvalidFamily(format!(
            "epsilon = {epsilon} outside (0, 1/100]"
        )));
    }
    let one = RationalScalar::one();
    let lambdas = [
        ParamPoly::new(vec![RationalScalar::zero(), (&one + epsilon).recip()]),
        ParamPoly::var(),
        ParamPoly::new(vec![epsilon.clone(), one.clone()]),
    ];
    let maps = lambdas
        .into_iter()
        .map(|l| AffineMapSpec::new(l.clone(), l))
        .collect();
    let third = RationalScalar::new(1, 3);
    let lo = &third + &(epsilon * &third);
    let hi = &lo + &RationalScalar::new(1, 100);
    FamilySpec::new(maps, (lo, hi), vec![third.clone(), third.clone(), third])
}

/// Four maps of ratio 1/3 with linearly independent translations `1, u, u^2, u^3`
/// and weights `(1/2, 1/4, 1/8, 1/8)` on `[0, 1]`.
pub fn poly4_family() -> FamilySpec {
    let third = ParamPoly::from_ratios(&[(1, 3)]);
    let maps = (0..4)
        .map(|k| AffineMapSpec::new(third.clone(), ParamPoly::monomial(RationalScalar::one(), k)))
        .collect();
    let weights = vec![
        RationalScalar::new(1, 2),
        RationalScalar::new(1, 4),
        RationalScalar::new(1, 8),
        RationalScalar::new(1, 8),
    ];
    FamilySpec::new(
        maps,
        (RationalScalar::zero(), RationalScalar::one()),
        weights,
    )
    .expect("poly4 family is valid")
}

pub const PRESET_HELP: &[(&str, &str)] = &[
    (
        "carpet",
        "Sierpinski carpet projections, slope u in [0, 10], 8 maps, L = 3",
    ),
    (
        "sandor:eps=p/q",
        "three-map family with an identical exact overlap, 0 < eps <= 1/100",
    ),
    (
        "poly4",
        "4 maps, L = 3, translations 1, u, u^2, u^3, weights 1/2, 1/4, 1/8, 1/8",
    ),
];

/// Resolves `carpet`, `poly4`, `sandor:ε=p/q`, `sandor:eps=p/q` or `sandor:p/q`.
pub fn preset_by_name(name: &str) -> Result<FamilySpec> {
    let name = name.trim();
    match name {
        "carpet" => return Ok(carpet_family()),
        "poly4" => return Ok(poly4_family()),
        "sandor" => return sandor_family(&RationalScalar::new(1, 100)),
        _ => {}
    }
    if let Some(rest) = name.strip_prefix("sandor:") {
        let value = rest.split_once('=').map(|(_, v)| v).unwrap_or(rest);
        return sandor_family(&value.parse()?);
    }
    Err(Error::Parse(format!("unknown preset {name:?}")))
}
