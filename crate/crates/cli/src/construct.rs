use sperner_core::bounds::{bounds_report, LowerWitness};
use sperner_core::combinatorics::decompose;
use sperner_core::construction::{
    construct_lemma4, construct_uniform, extend_system, lemma4_certificate, plan_lemma4, uniform_certificate, Case,
};
use sperner_core::resolution::resolve;
use sperner_core::verify::{check_certificate, Certificate};
use sperner_core::PartitionSystem;

use crate::failure::Failure;
use crate::output::check_and_emit;
use crate::ConstructArgs;

fn group_construction(n: u64, k: u64, m: u64, h: u64, case: Case, seed: u64) -> Result<(PartitionSystem, Certificate), Failure> {
    let plan = plan_lemma4(n, k, m, h, case)?;
    println!(
        "plan n={n} k={k} m={m} h={h} case={} p={} size={}",
        if case == Case::A { "a" } else { "b" },
        plan.p,
        plan.size()
    );
    let res = resolve(m as usize, plan.ctx.c as usize)?;
    let sys = construct_lemma4(&plan, &res, seed)?;
    Ok((sys, lemma4_certificate(&plan)?))
}

/// One almost-uniform partition: consecutive blocks, the large ones first.
fn single_partition(n: u64, k: u64) -> Result<PartitionSystem, Failure> {
    let ctx = decompose(n, k)?;
    let mut next = 0u32;
    let parts = (0..k)
        .map(|i| {
            let size = ctx.c + u64::from(i < ctx.r);
            let part: Vec<u32> = (next..next + size as u32).collect();
            next += size as u32;
            part
        })
        .collect();
    Ok(PartitionSystem::new(n as usize, k as usize, vec![parts]).canonical())
}

pub fn run(a: &ConstructArgs) -> Result<(), Failure> {
    let (n, k) = (a.n, a.k);
    let ctx = decompose(n, k)?;
    let (base, cert, extra) = match (a.m, a.h) {
        (Some(m), Some(h)) => {
            let (sys, cert) = group_construction(n, k, m, h, a.case, a.sys.seed)?;
            (sys, Some(cert), 0)
        }
        _ if ctx.r == 0 => {
            println!("uniform n={n} k={k}");
            (construct_uniform(n, k)?, Some(uniform_certificate(n, k)?), 0)
        }
        _ => {
            let rep = bounds_report(n, k)?;
            println!("best witness: {}", rep.witness);
            match rep.witness {
                LowerWitness::Trivial => (single_partition(n, k)?, None, 0),
                LowerWitness::Uniform { extra } => {
                    let base = n - extra;
                    (construct_uniform(base, k)?, Some(uniform_certificate(base, k)?), extra)
                }
                LowerWitness::Lemma4 { m, h, case, extra } => {
                    let (sys, cert) = group_construction(n - extra, k, m, h, case, a.sys.seed)?;
                    (sys, Some(cert), extra)
                }
            }
        }
    };
    if extra == 0 {
        return check_and_emit(&base, &ctx, cert.as_ref(), false, &a.sys);
    }
    // Adding a point to a smallest part keeps the Sperner property, so the
    // base certificate still settles it.
    let mut certified = false;
    if let Some(cert) = &cert {
        let rep = check_certificate(&base, cert);
        println!("certificate on {} points: {}", n - extra, if rep.pass() { "pass" } else { "FAIL" });
        if !rep.pass() {
            return Err(Failure::Verification("base certificate failed".into()));
        }
        certified = true;
    }
    let mut sys = base;
    for _ in 0..extra {
        sys = extend_system(&sys);
    }
    println!("extended by {extra}");
    check_and_emit(&sys, &ctx, None, certified, &a.sys)
}
