use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use sperner_core::combinatorics::ParamCtx;
use sperner_core::verify::{
    check_almost_uniform, check_certificate, check_partition_system, check_sperner_with_limit, to_detecting_array,
    Certificate,
};
use sperner_core::PartitionSystem;

use crate::failure::Failure;
use crate::{Emit, SystemOut};

/// `q` rounded half away from zero to `digits` decimals.
pub fn decimal(q: &BigRational, digits: usize) -> String {
    let scale = BigInt::from(10).pow(digits as u32);
    let num: BigInt = q.numer().abs() * &scale * 2 + q.denom();
    let scaled = num.div_floor(&(q.denom() * 2));
    let (int, frac) = scaled.div_rem(&scale);
    let sign = if q.is_negative() && !scaled.is_zero() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{int}");
    }
    format!("{sign}{int}.{frac:0>digits$}")
}

pub fn write_or_print(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Runs the structural checks on a freshly built system, writes it if asked,
/// and prints one line per check. `cert` is checked when given; the pairwise
/// test runs whenever the system is small enough, and may only be skipped
/// when a certificate (here or, via `certified`, upstream) passed.
pub fn check_and_emit(
    sys: &PartitionSystem,
    ctx: &ParamCtx,
    cert: Option<&Certificate>,
    certified: bool,
    opts: &SystemOut,
) -> Result<(), Failure> {
    println!("partitions={}", sys.len());
    let mut failed = Vec::new();
    let mut line = |name: &str, pass: bool, detail: &str| {
        println!("{name}: {}{detail}", if pass { "pass" } else { "FAIL" });
        if !pass {
            failed.push(name.to_string());
        }
    };
    let valid = check_partition_system(sys);
    line("partition validity", valid.pass(), "");
    let uniform = check_almost_uniform(sys, ctx);
    line("almost uniform", uniform.pass(), "");
    let mut certified = certified;
    if let Some(cert) = cert {
        let rep = check_certificate(sys, cert);
        certified |= rep.pass();
        line("certificate", rep.pass(), "");
    }
    match check_sperner_with_limit(sys, opts.check_limit) {
        Ok(rep) => line("sperner (pairwise)", rep.pass(), ""),
        Err(_) if certified => println!("sperner (pairwise): skipped, {} parts", sys.part_count()),
        Err(e) => line("sperner (pairwise)", false, &format!(" ({e})")),
    }
    if let Some(path) = &opts.out {
        let text = match opts.emit {
            Emit::Sps => sys.to_sps(),
            Emit::Da => to_detecting_array(sys)?.to_text(),
        };
        write_or_print(Some(path), &text)?;
        println!("wrote {}", path.display());
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(format!("failed checks: {}", failed.join(", "))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn decimals() {
        assert_eq!(decimal(&q(595, 9), 6), "66.111111");
        assert_eq!(decimal(&q(140, 3), 3), "46.667");
        assert_eq!(decimal(&q(1, 2), 0), "1");
        assert_eq!(decimal(&q(-1, 8), 2), "-0.13");
        assert_eq!(decimal(&q(-1, 1000), 2), "0.00");
        assert_eq!(decimal(&q(5, 1), 2), "5.00");
    }
}
