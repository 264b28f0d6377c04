//! Exact and real-valued combinatorial primitives.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Result};

/// `(n, k)` together with the unique decomposition `n = c*k + r`, `0 <= r < k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ParamCtx {
    pub n: u64,
    pub k: u64,
    pub c: u64,
    pub r: u64,
}

impl ParamCtx {
    pub fn new(n: u64, k: u64) -> Result<Self> {
        decompose(n, k)
    }

    /// Number of parts of size `c + 1` in an almost-uniform partition.
    pub fn large_parts(&self) -> u64 {
        self.r
    }

    /// Number of parts of size `c` in an almost-uniform partition.
    pub fn small_parts(&self) -> u64 {
        self.k - self.r
    }
}

pub fn decompose(n: u64, k: u64) -> Result<ParamCtx> {
    if k < 1 {
        return invalid("k must be at least 1");
    }
    if n < k {
        return invalid(format!("n = {n} is smaller than k = {k}"));
    }
    let (c, r) = n.div_rem(&k);
    Ok(ParamCtx { n, k, c, r })
}

/// Exact binomial coefficient; zero when `y < 0` or `y > x`.
pub fn binom_exact(x: u64, y: i64) -> BigUint {
    if y < 0 || y as u64 > x {
        return BigUint::zero();
    }
    let y = (y as u64).min(x - y as u64);
    let mut acc = BigUint::one();
    for i in 1..=y {
        acc *= x - y + i;
        acc /= i;
    }
    acc
}

/// Signed convenience wrapper around [`binom_exact`].
pub fn binom_int(x: u64, y: i64) -> BigInt {
    BigInt::from(binom_exact(x, y))
}

/// Pascal triangle up to a fixed row, immutable once built and therefore
/// shareable between threads.
#[derive(Debug, Clone)]
pub struct BigBinomialTable {
    rows: Vec<Vec<BigUint>>,
}

impl BigBinomialTable {
    pub fn new(max_x: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(max_x + 1);
        for x in 0..=max_x {
            let mut row = vec![BigUint::one(); x + 1];
            for y in 1..x {
                row[y] = &rows[x - 1][y - 1] + &rows[x - 1][y];
            }
            rows.push(row);
        }
        Self { rows }
    }

    pub fn max_x(&self) -> usize {
        self.rows.len() - 1
    }

    /// Falls back to direct evaluation past the precomputed range.
    pub fn get(&self, x: u64, y: i64) -> BigUint {
        if y < 0 || y as u64 > x {
            return BigUint::zero();
        }
        match self.rows.get(x as usize) {
            Some(row) => row[y as usize].clone(),
            None => binom_exact(x, y),
        }
    }
}

/// `(1/t!) * prod_{i<t} (q - i)` for real `q >= t`.
pub fn binom_real(q: f64, t: u32) -> Result<f64> {
    if !(q >= t as f64) {
        return invalid(format!("binom_real needs q >= t, got q = {q}, t = {t}"));
    }
    Ok(falling(q, t))
}

fn falling(q: f64, t: u32) -> f64 {
    let mut acc = 1.0;
    for i in 0..t {
        acc *= (q - i as f64) / (i + 1) as f64;
    }
    acc
}

/// The LYM bound `binom(n,c) / (k - r + r(c+1)/(n-c))` as an exact rational.
pub fn mms(ctx: &ParamCtx) -> Result<BigRational> {
    let ParamCtx { n, k, c, r } = *ctx;
    if n <= c {
        return invalid("mms needs n > c");
    }
    let num = binom_int(n, c as i64) * BigInt::from(n - c);
    let den = BigInt::from((k - r) * (n - c) + r * (c + 1));
    Ok(BigRational::new(num, den))
}

/// Real root `q` of `binom(q, c) = x` on the branch used by [`l_func`].
///
/// For `x >= 1` the root is the unique one with `q >= c`; for `0 < x < 1` it is
/// the root in `[c-1, c]`, where `binom(q, c)` still increases.
pub fn l_root(c: u32, x: f64) -> Result<f64> {
    if c < 2 {
        return invalid("l_func needs c >= 2");
    }
    if !(x >= 0.0) || !x.is_finite() {
        return invalid(format!("l_func needs finite x >= 0, got {x}"));
    }
    let cf = c as f64;
    let (mut lo, mut hi) = if x >= 1.0 { (cf, cf + x + 2.0) } else { (cf - 1.0, cf) };
    for _ in 0..4000 {
        if hi - lo <= 1e-12 * lo.max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if falling(mid, c) < x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let q = 0.5 * (lo + hi);
    if c == 2 {
        let closed = 0.5 * (1.0 + (1.0 + 8.0 * x).sqrt());
        debug_assert!(
            (closed - q).abs() <= 1e-9 * q.max(1.0),
            "quadratic root {closed} disagrees with bisection {q}"
        );
    }
    Ok(q)
}

/// `L_c(x) = binom(q, c-1)` where `binom(q, c) = x`.
///
/// `L_c(0) = 0`: the empty family has an empty shadow.
pub fn l_func(c: u32, x: f64) -> Result<f64> {
    let q = l_root(c, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(falling(q, c - 1))
}

/// Exact decision of `L_c(y) <= t` for integers `y >= 0` and `t`.
///
/// With `g(q) = binom(q, c-1)` and `q0 = c*y/t + c - 1`, monotonicity of both
/// `binom(q, c)` and `g` on `q >= c - 1` gives `L_c(y) <= t  <=>  g(q0) <= t`
/// whenever `t >= c` (and `L_c(y) >= c` for `y >= 1`).
pub fn l_func_le(c: u32, y: &BigUint, t: &BigInt) -> bool {
    assert!(c >= 2, "l_func_le needs c >= 2");
    if y.is_zero() {
        return !t.is_negative();
    }
    if *t < BigInt::from(c) {
        return false;
    }
    let cb = BigInt::from(c);
    let yb = BigInt::from(y.clone());
    // prod_{i=0}^{c-2} (c*y + (c-1-i)*t)  <=  (c-1)! * t^c
    let mut lhs = BigInt::one();
    for i in 0..(c - 1) {
        lhs *= &cb * &yb + BigInt::from(c - 1 - i) * t;
    }
    let fact: BigInt = (1..c).map(BigInt::from).product();
    let rhs = fact * num_traits::pow(t.clone(), c as usize);
    lhs <= rhs
}

/// Smallest integer `t` with `L_c(y) <= t`, i.e. the exact ceiling of `L_c(y)`.
pub fn l_func_ceil(c: u32, y: &BigUint) -> BigInt {
    if y.is_zero() {
        return BigInt::zero();
    }
    let approx = l_func(c, y.to_f64().unwrap_or(f64::MAX)).unwrap_or(0.0);
    let mut t = BigInt::from(approx.ceil().max(0.0) as u64);
    while t > BigInt::zero() && l_func_le(c, y, &(&t - 1)) {
        t -= 1;
    }
    while !l_func_le(c, y, &t) {
        t += 1;
    }
    t
}

/// Stirling approximation of `binom(x, y)`; overflows to infinity past `f64`.
pub fn stirling_a(x: f64, y: f64) -> Result<f64> {
    Ok(stirling_ln_a(x, y)?.exp())
}

/// Natural logarithm of [`stirling_a`].
pub fn stirling_ln_a(x: f64, y: f64) -> Result<f64> {
    if !(0.0 < y && y < x) {
        return invalid(format!("stirling_a needs 0 < y < x, got x = {x}, y = {y}"));
    }
    let z = x - y;
    Ok((x + 0.5) * x.ln()
        - 0.5 * (2.0 * std::f64::consts::PI).ln()
        - (y + 0.5) * y.ln()
        - (z + 0.5) * z.ln())
}

/// Standard error function `(2/sqrt(pi)) * int_0^x exp(-t^2) dt`.
pub fn erf_std(x: f64) -> f64 {
    statrs::function::erf::erf(x)
}

/// Inverse of [`erf_std`] on `(-1, 1)`, polished by two Newton steps.
pub fn erf_inv_std(p: f64) -> Result<f64> {
    if !(p > -1.0 && p < 1.0) {
        return invalid(format!("erf_inv_std needs |p| < 1, got {p}"));
    }
    let mut x = statrs::function::erf::erf_inv(p);
    let slope = 2.0 / std::f64::consts::PI.sqrt();
    for _ in 0..2 {
        let err = erf_std(x) - p;
        x -= err / (slope * (-x * x).exp());
    }
    Ok(x)
}

/// Natural logarithm of a positive big integer of any size.
pub fn ln_biguint(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().unwrap_or(0.0).ln();
    }
    let shift = bits - 64;
    (v >> shift).to_f64().unwrap_or(0.0).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Floating-point value of a big rational; saturates to infinity on overflow.
pub fn ratio_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// `num / den` in floating point, robust to operands far beyond `f64` range.
pub fn big_ratio_f64(num: &BigInt, den: &BigInt) -> f64 {
    ratio_f64(&BigRational::new(num.clone(), den.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn decompose_examples() {
        let p = decompose(36, 15).unwrap();
        assert_eq!((p.c, p.r), (2, 6));
        let p = decompose(26, 3).unwrap();
        assert_eq!((p.c, p.r), (8, 2));
        let p = decompose(9, 1).unwrap();
        assert_eq!((p.c, p.r), (9, 0));
        assert!(decompose(3, 4).is_err());
        assert!(decompose(3, 0).is_err());
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binom_exact(5, 1), big(5));
        assert_eq!(binom_exact(1000, 2), big(1000 * 999 / 2));
        assert_eq!(binom_exact(13, 5), big(1287));
        assert_eq!(binom_exact(4, -1), big(0));
        assert_eq!(binom_exact(4, 5), big(0));
        assert_eq!(binom_exact(0, 0), big(1));
    }

    #[test]
    fn pascal_rule_and_table_agree() {
        let table = BigBinomialTable::new(60);
        for x in 1..=60u64 {
            for y in 0..=x as i64 {
                let direct = binom_exact(x, y);
                assert_eq!(direct, binom_exact(x - 1, y - 1) + binom_exact(x - 1, y));
                assert_eq!(direct, table.get(x, y));
                assert_eq!(direct, binom_exact(x, x as i64 - y));
            }
        }
        assert_eq!(table.get(100, 3), binom_exact(100, 3));
    }

    #[test]
    fn binom_real_values() {
        assert_eq!(binom_real(7.0, 2).unwrap(), 21.0);
        assert_eq!(binom_real(0.0, 0).unwrap(), 1.0);
        assert_eq!(binom_real(3.5, 0).unwrap(), 1.0);
        assert!((binom_real(7.8654, 2).unwrap() - 27.0).abs() < 1e-3);
        assert!(binom_real(1.0, 2).is_err());
        for x in 2..30u64 {
            for t in 0..=x as u32 {
                let exact = binom_exact(x, t as i64).to_f64().unwrap();
                assert!((binom_real(x as f64, t).unwrap() - exact).abs() <= 1e-9 * exact);
            }
        }
    }

    #[test]
    fn mms_values() {
        let m = mms(&decompose(6, 3).unwrap()).unwrap();
        assert_eq!(m, BigRational::from_integer(5.into()));
        let m = mms(&decompose(36, 15).unwrap()).unwrap();
        assert_eq!(m, BigRational::new(595.into(), 9.into()));
        // c = 3, r = 1: 120 / (2 + 4/7).
        let m = mms(&decompose(10, 3).unwrap()).unwrap();
        assert_eq!(m, BigRational::new(140.into(), 3.into()));
        assert!(mms(&decompose(3, 1).unwrap()).is_err());
    }

    #[test]
    fn mms_uniform_case_is_binomial() {
        for k in 1..=20u64 {
            for c in 1..=10u64 {
                let ctx = decompose(c * k, k).unwrap();
                if ctx.n <= ctx.c {
                    continue;
                }
                let expected = BigRational::from_integer(binom_int(c * k - 1, c as i64 - 1));
                assert_eq!(mms(&ctx).unwrap(), expected, "c={c} k={k}");
            }
        }
    }

    #[test]
    fn l_func_values() {
        let q = (1.0 + 217f64.sqrt()) / 2.0;
        assert!((l_func(2, 27.0).unwrap() - q).abs() < 1e-9);
        assert!((l_func(2, 27.0).unwrap() - 7.8654).abs() < 1e-4);
        assert!((l_func(2, 1.0).unwrap() - 2.0).abs() < 1e-9);
        assert!((l_func(2, 9.0).unwrap() - (1.0 + 73f64.sqrt()) / 2.0).abs() < 1e-9);
        assert_eq!(l_func(3, 0.0).unwrap(), 0.0);
        assert!(l_func(1, 3.0).is_err());
        assert!(l_func(2, -1.0).is_err());
    }

    #[test]
    fn l_func_ceil_examples() {
        assert_eq!(l_func_ceil(2, &big(9)), BigInt::from(5));
        assert_eq!(l_func_ceil(2, &big(12)), BigInt::from(6));
        assert_eq!(l_func_ceil(2, &big(10)), BigInt::from(5));
        assert_eq!(l_func_ceil(2, &big(0)), BigInt::from(0));
        // binom(5,3) = 10, so L_3(10) = binom(5,2) = 10 exactly.
        assert_eq!(l_func_ceil(3, &big(10)), BigInt::from(10));
    }

    #[test]
    fn l_func_le_matches_quadratic_for_c2() {
        // L_2(y) <= t  <=>  1 + 8y <= (2t - 1)^2 for y >= 1, t >= 1.
        for y in 0..300u64 {
            for t in -2..60i64 {
                let exact = l_func_le(2, &big(y), &BigInt::from(t));
                let expected = if y == 0 {
                    t >= 0
                } else {
                    t >= 1 && 1 + 8 * y as i64 <= (2 * t - 1) * (2 * t - 1)
                };
                assert_eq!(exact, expected, "y={y} t={t}");
            }
        }
    }

    #[test]
    fn l_func_le_at_integer_roots() {
        // At integer q the value L_c(binom(q,c)) = binom(q,c-1) is attained exactly.
        for c in 2..7u32 {
            for q in c as u64..(c as u64 + 25) {
                let y = binom_exact(q, c as i64);
                let l = BigInt::from(binom_exact(q, c as i64 - 1));
                assert!(l_func_le(c, &y, &l));
                assert!(!l_func_le(c, &y, &(&l - 1)));
            }
        }
    }

    #[test]
    fn stirling_examples() {
        let exact = binom_exact(100, 50).to_f64().unwrap();
        let ratio = stirling_a(100.0, 50.0).unwrap() / exact;
        assert!((0.99..=1.01).contains(&ratio));
        let exact = binom_exact(1000, 100).to_f64().unwrap();
        let rel = (stirling_a(1000.0, 100.0).unwrap() / exact - 1.0).abs();
        assert!(rel < 1e-3);
        let a = stirling_a(30.0, 7.0).unwrap();
        let b = stirling_a(30.0, 23.0).unwrap();
        assert!((a - b).abs() <= 1e-12 * a);
        assert!(stirling_a(5.0, 5.0).is_err());
    }

    #[test]
    fn stirling_tracks_binomials() {
        for x in (200..=2000u64).step_by(200) {
            for y in [x / 2, x / 10] {
                let ln_exact = ln_biguint(&binom_exact(x, y as i64));
                let approx = stirling_ln_a(x as f64, y as f64).unwrap();
                assert!((approx - ln_exact).abs() < 0.01, "x={x} y={y}");
            }
        }
    }

    #[test]
    fn erf_examples() {
        assert_eq!(erf_std(0.0), 0.0);
        let half = erf_inv_std(0.5).unwrap();
        assert!(half < 0.477 && (half - 0.476_936).abs() < 1e-5);
        assert!((erf_std(erf_inv_std(0.3).unwrap()) - 0.3).abs() < 1e-12);
        assert!(erf_inv_std(1.0).is_err());
    }

    proptest! {
        #[test]
        fn l_func_round_trip(c in 2u32..7, x in 1.0f64..1e9) {
            let q = l_root(c, x).unwrap();
            let back = binom_real(q, c).unwrap();
            prop_assert!((back - x).abs() <= 1e-9 * x);
        }

        #[test]
        fn binom_real_increasing(t in 1u32..8, q in 8.0f64..200.0, dq in 1e-3f64..5.0) {
            prop_assert!(binom_real(q + dq, t).unwrap() > binom_real(q, t).unwrap());
        }

        #[test]
        fn erf_round_trip(p in -0.999f64..0.999) {
            prop_assert!((erf_std(erf_inv_std(p).unwrap()) - p).abs() < 1e-12);
        }

        #[test]
        fn l_func_le_agrees_with_float(c in 2u32..6, y in 1u64..100_000, t in 1i64..5_000) {
            let l = l_func(c, y as f64).unwrap();
            if (l - t as f64).abs() > 1e-6 * l.max(1.0) {
                prop_assert_eq!(l_func_le(c, &big(y), &BigInt::from(t)), l <= t as f64);
            }
        }
    }
}
