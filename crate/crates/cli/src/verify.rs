use num_traits::Signed;
use sperner_core::combinatorics::decompose;
use sperner_core::ip::{gap, IpInstance, Variant};
use sperner_core::verify::{
    check_almost_uniform, check_detecting_array, check_partition_system, check_sperner_with_limit, DetectingArray,
    VerificationReport,
};
use sperner_core::{Error, PartitionSystem};

use crate::failure::Failure;
use crate::VerifyArgs;

fn finish(report: &VerificationReport) -> Result<(), Failure> {
    print!("{}", report.summary());
    if report.pass() {
        Ok(())
    } else {
        Err(Failure::Verification(format!("{} violation(s)", report.violations.len())))
    }
}

fn uniformity_note(n: usize, k: usize, sys: &PartitionSystem) {
    if let Ok(ctx) = decompose(n as u64, k as u64) {
        let almost = check_almost_uniform(sys, &ctx).pass();
        println!("almost uniform: {}", if almost { "yes" } else { "no" });
    }
}

fn verify_sps(text: &str, limit: usize) -> Result<(), Failure> {
    let sys = PartitionSystem::from_sps(text)?;
    println!("SPS n={} k={} partitions={}", sys.n, sys.k, sys.len());
    let mut report = check_partition_system(&sys);
    if report.pass() {
        uniformity_note(sys.n, sys.k, &sys);
        match check_sperner_with_limit(&sys, limit) {
            Ok(rep) => report.merge(rep),
            Err(e) => return Err(Failure::Verification(format!("not verified: {e}"))),
        }
    }
    finish(&report)
}

fn verify_da(text: &str, limit: usize) -> Result<(), Failure> {
    let arr = DetectingArray::from_text(text)?;
    println!("DA n={} k={} columns={}", arr.n, arr.k, arr.p);
    if arr.p * arr.k > limit {
        return Err(Failure::Verification(format!(
            "not verified: {} row sets exceed the limit {limit}",
            arr.p * arr.k
        )));
    }
    let report = check_detecting_array(&arr);
    if report.pass() {
        if let Ok(sys) = sperner_core::verify::from_detecting_array(&arr) {
            uniformity_note(arr.n, arr.k, &sys);
        }
    }
    finish(&report)
}

fn verify_ip(text: &str, header: &str) -> Result<(), Failure> {
    let fields: Vec<&str> = header.split_whitespace().collect();
    let bad = || Failure::Verification("line 1: expected `IP <variant> <n> <k> <d> <u> <Q>`".into());
    if fields.len() != 7 {
        return Err(bad());
    }
    let variant: Variant = fields[1].parse().map_err(|_| bad())?;
    let n: u64 = fields[2].parse().map_err(|_| bad())?;
    let k: u64 = fields[3].parse().map_err(|_| bad())?;
    let inst = IpInstance::new(variant, n, k).map_err(|e| Failure::Verification(format!("line 1: {e}")))?;
    let sol = inst.parse_solution(text)?;
    println!("IP {variant} n={n} k={k} Q={} objective={} gap={}", inst.q, sol.objective, gap(&inst, &sol));
    let mut report = VerificationReport::new();
    report.checks.push("every constraint has nonnegative slack".into());
    if sol.slacks.diag.is_negative() {
        report.violations.push(format!("diagonal cap exceeded by {}", -&sol.slacks.diag));
    }
    for (l, s) in sol.slacks.off.iter().enumerate() {
        if s.is_negative() {
            report.violations.push(format!("off-diagonal {} cap exceeded by {}", l + 1, -s));
        }
    }
    for (idx, s) in sol.slacks.row.iter().enumerate() {
        if s.is_negative() {
            report.violations.push(format!("row {} cap exceeded by {}", inst.u + 1 + idx as i64, -s));
        }
    }
    finish(&report)
}

pub fn run(a: &VerifyArgs) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&a.path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", a.path.display())))?;
    let header = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
    match header.split_whitespace().next() {
        Some("SPS") => verify_sps(&text, a.check_limit),
        Some("DA") => verify_da(&text, a.check_limit),
        Some("IP") => verify_ip(&text, header),
        _ => Err(Error::Parse { line: 1, msg: "unknown format; expected an SPS, DA or IP header".into() }.into()),
    }
}
