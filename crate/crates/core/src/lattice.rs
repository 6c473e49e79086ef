//! Integer lattice coordinates for homogeneous families at a rational parameter,
//! and the sorted sparse convolution shared by the separation and measure code.
//!
//! With common denominator `q` for the translations `t_i(u)` and digits
//! `d_i = q t_i(u)`, a level-n word has base point `V / (q L^(n-1))` where
//! `V = Σ_k d_{i_k} L^(n-k)`, i.e. `V_n = L V_(n-1) + d_(i_n)`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::ifs::FamilySpec;
use crate::rational::{lcm_of_denominators, RationalScalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerDigits {
    pub base: u64,
    /// Common denominator `q` of the translation values.
    pub denom: u64,
    /// `d_i` for map `i + 1`.
    pub digits: Vec<i64>,
}

impl IntegerDigits {
    pub fn new(f: &FamilySpec, u: &RationalScalar) -> Result<Self> {
        let base = f.require_base()?;
        f.check_param(u)?;
        let values = f.translations_at(u);
        let q = lcm_of_denominators(&values);
        let too_big = || Error::BudgetExceeded {
            depth: 1,
            feasible: 0,
            reason: format!("translation lattice at u = {u} does not fit 64-bit integers"),
        };
        let denom = q.to_u64().ok_or_else(too_big)?;
        let digits = values
            .iter()
            .map(|t| {
                let d: BigInt = t.numer() * (&q / t.denom());
                d.to_i64().ok_or_else(too_big)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IntegerDigits {
            base,
            denom,
            digits,
        })
    }

    /// Lattice denominator `q L^(n-1)` at depth `n`.
    pub fn lattice_denominator(&self, n: usize) -> Option<u128> {
        let pow = (self.base as u128).checked_pow(n.checked_sub(1)? as u32)?;
        (self.denom as u128).checked_mul(pow)
    }

    pub fn lattice_denominator_big(&self, n: usize) -> BigInt {
        BigInt::from(self.denom) * num_traits::pow(BigInt::from(self.base), n.saturating_sub(1))
    }

    /// Distinct digit values, ascending, each with the indices of the maps using it.
    pub fn grouped(&self) -> Vec<(i64, Vec<usize>)> {
        let mut out: Vec<(i64, Vec<usize>)> = Vec::new();
        let mut order: Vec<usize> = (0..self.digits.len()).collect();
        order.sort_by_key(|&i| (self.digits[i], i));
        for i in order {
            match out.last_mut() {
                Some((d, maps)) if *d == self.digits[i] => maps.push(i),
                _ => out.push((self.digits[i], vec![i])),
            }
        }
        out
    }
}

/// Checks that `base * v + d` cannot overflow for `v` in `[lo, hi]` and the given digits.
pub(crate) fn step_fits(lo: i64, hi: i64, base: i64, dmin: i64, dmax: i64) -> bool {
    let a = (lo as i128) * (base as i128) + dmin as i128;
    let b = (hi as i128) * (base as i128) + dmax as i128;
    a >= i64::MIN as i128 && b <= i64::MAX as i128
}

/// One convolution pass over a sorted sparse vector: every atom `(k, mass)` spawns
/// `(base * k + d, scale(mass, weight_d))` for each digit; equal offsets merge
/// with `add`. Runs for a fixed digit are already sorted, so a k-way merge keeps
/// the output sorted and deterministic.
pub(crate) fn convolve_sorted<M, W>(
    offsets: &[i64],
    masses: &[M],
    base: i64,
    digits: &[(i64, W)],
    scale: impl Fn(&M, &W) -> M,
    add: impl Fn(&mut M, M),
) -> (Vec<i64>, Vec<M>) {
    let mut out_off = Vec::with_capacity(offsets.len() * digits.len().min(4));
    let mut out_mass: Vec<M> = Vec::with_capacity(out_off.capacity());
    let mut cursor = vec![0usize; digits.len()];
    let mut heap: BinaryHeap<Reverse<(i64, usize)>> = BinaryHeap::with_capacity(digits.len());
    if !offsets.is_empty() {
        for (j, (d, _)) in digits.iter().enumerate() {
            heap.push(Reverse((base * offsets[0] + d, j)));
        }
    }
    while let Some(Reverse((off, j))) = heap.pop() {
        let pos = cursor[j];
        let mass = scale(&masses[pos], &digits[j].1);
        match out_off.last() {
            Some(&last) if last == off => add(out_mass.last_mut().unwrap(), mass),
            _ => {
                out_off.push(off);
                out_mass.push(mass);
            }
        }
        cursor[j] += 1;
        if cursor[j] < offsets.len() {
            heap.push(Reverse((base * offsets[cursor[j]] + digits[j].0, j)));
        }
    }
    (out_off, out_mass)
}
