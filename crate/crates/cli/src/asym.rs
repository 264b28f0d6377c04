use num_rational::BigRational;
use rayon::prelude::*;
use sperner_core::ip::{asymptotic_report, greedy_secA, greedy_secA_steps, lemma7_gap, lp_relax, IpInstance, Variant};
use sperner_core::Error;

use crate::failure::Failure;
use crate::output::{decimal, write_or_print};
use crate::AsymArgs;

const HEADER: &str = "n,k,variant,d,u,q,mms,q_over_mms,estar0_ratio,u_ratio,lp_opt,lp_equals_q,greedy_steps,greedy,gap_bound,greedy_within_bound\n";

fn row(inst: &IpInstance, a: &AsymArgs) -> Result<String, Error> {
    let rep = asymptotic_report(inst)?;
    let (lp_opt, lp_eq) = if a.no_lp || inst.phi.len() > a.lp_limit {
        (String::new(), String::new())
    } else {
        let lp = lp_relax(inst, a.lp_limit)?;
        let eq = lp.objective == BigRational::from_integer(inst.q.clone());
        (lp.objective.to_string(), eq.to_string())
    };
    let (steps, greedy, bound, within) = if inst.variant == Variant::SecA {
        let steps = greedy_secA_steps(inst)?;
        let full = greedy_secA(inst)?;
        let bound = lemma7_gap(inst);
        let shortfall = BigRational::from_integer(&inst.q - &steps.objective);
        (steps.objective.to_string(), full.objective.to_string(), decimal(&bound, 6), (shortfall <= bound).to_string())
    } else {
        Default::default()
    };
    Ok(format!(
        "{},{},{},{},{},{},{},{:.12},{:.12},{:.12},{lp_opt},{lp_eq},{steps},{greedy},{bound},{within}\n",
        rep.n,
        rep.k,
        rep.variant,
        rep.d,
        rep.u,
        rep.q,
        rep.mms,
        rep.q_over_mms,
        rep.estar_ratios[0],
        rep.u_ratio,
    ))
}

pub fn run(a: &AsymArgs) -> Result<(), Failure> {
    let k = a.k;
    if k < 3 || k % 2 == 0 {
        return Err(Failure::Usage(format!("k must be odd and at least 3, got {k}")));
    }
    let residue = match a.variant {
        Variant::SecA => k + 1,
        Variant::SecB => k - 1,
    };
    let ns: Vec<u64> = (a.n_min.max(2 * k + 1)..=a.n_max).filter(|n| n % (2 * k) == residue).collect();
    let rows = ns
        .par_iter()
        .map(|&n| IpInstance::new(a.variant, n, k).and_then(|inst| row(&inst, a)))
        .collect::<Result<Vec<String>, Error>>()?;
    let mut out = String::from(HEADER);
    out.extend(rows);
    write_or_print(a.out.as_deref(), &out)
}
