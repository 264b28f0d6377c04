//! Finite-`n` ratios for the limit statements about `e`, `e*`, `u` and `Q`.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{IpInstance, Variant};
use crate::combinatorics::{big_ratio_f64, erf_inv_std, mms};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticReport {
    pub n: u64,
    pub k: u64,
    pub variant: Variant,
    pub d: u64,
    pub u: i64,
    pub q: BigInt,
    pub mms: BigRational,
    /// `e*_l / ((k-1) e_l)` for `l <= ceil(sqrt(d))`.
    pub estar_ratios: Vec<f64>,
    /// `e_l / (e_0 exp(-k l^2 / (d (k-1))))` for the same `l`.
    pub gaussian_ratios: Vec<f64>,
    /// `u / (erf_inv(1/2) sqrt(d (k-1) / k))`.
    pub u_ratio: f64,
    pub q_over_mms: f64,
}

pub fn asymptotic_report(inst: &IpInstance) -> Result<AsymptoticReport> {
    let k = inst.ctx.k;
    let d = inst.d;
    let km1 = BigInt::from(k - 1);
    let top = ((d as f64).sqrt().ceil() as u64).min(d);
    let mut estar_ratios = Vec::new();
    let mut gaussian_ratios = Vec::new();
    for l in 0..=top as usize {
        estar_ratios.push(big_ratio_f64(&inst.estar[l], &(&km1 * &inst.e[l])));
        let damp = (-(k as f64) * (l * l) as f64 / (d as f64 * (k - 1) as f64)).exp();
        gaussian_ratios.push(big_ratio_f64(&inst.e[l], &inst.e[0]) / damp);
    }
    let scale = erf_inv_std(0.5)? * (d as f64 * (k - 1) as f64 / k as f64).sqrt();
    let bound = mms(&inst.ctx)?;
    let q_over_mms = big_ratio_f64(&(&inst.q * bound.denom()), bound.numer());
    Ok(AsymptoticReport {
        n: inst.ctx.n,
        k,
        variant: inst.variant,
        d,
        u: inst.u,
        q: inst.q.clone(),
        mms: bound,
        estar_ratios,
        gaussian_ratios,
        u_ratio: inst.u as f64 / scale,
        q_over_mms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ip::instance_secB;

    #[test]
    fn small_case() {
        let rep = asymptotic_report(&instance_secB(26, 3).unwrap()).unwrap();
        assert!((rep.estar_ratios[0] - 920205.0 / 1022450.0).abs() < 1e-12);
        assert_eq!(rep.gaussian_ratios[0], 1.0);
        // MMS(26, 3) = binom(26, 8) / 2
        assert!((rep.q_over_mms - 511224.0 / 781137.5).abs() < 1e-12);
        assert_eq!(rep.u_ratio, 0.0);
    }
}
