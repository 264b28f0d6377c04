//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Tolerances are fixed here; exact criteria compare exact integers or
//! rationals.

use std::process::Command;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sperner_core::bounds::theorem5_upper;
use sperner_core::combinatorics::{decompose, erf_inv_std, mms};
use sperner_core::construction::{
    construct_lemma4, construct_uniform, lemma4_certificate, plan_lemma4, uniform_certificate, Case,
};
use sperner_core::ip::{
    asymptotic_report, build_system, build_system_secA, closedform_secB, exact_solve, greedy_secA, greedy_secA_steps,
    instance_secA, instance_secB, ip_certificate, lemma7_gap, lp_relax, ClosedForm, IpInstance, DEFAULT_EXACT_LIMIT,
    DEFAULT_LP_LIMIT,
};
use sperner_core::resolution::resolve;
use sperner_core::verify::{
    check_certificate, check_detecting_array, check_partition_system, check_sperner, to_detecting_array,
};
use sperner_core::PartitionSystem;

const TABLE1: &str = include_str!("golden/table1.csv");
const TABLE2: &str = include_str!("golden/table2.csv");

/// Wall-clock budget for the table 1 scan.
const TABLE1_SECONDS: f64 = 600.0;
/// Criterion 10 bands.
const ESTAR_BAND: (f64, f64) = (0.97, 1.03);
const U_REL_TOL: f64 = 0.10;
const Q_MMS_BAND: (f64, f64) = (0.9, 1.0);
/// Largest secB instances for the limit diagnostics, per k.
const ASYM_CASES: [(u64, u64); 2] = [(12002, 3), (12004, 5)];

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rat(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

/// `binom(x, y)` by the product formula in `u128`.
fn binom_u128(x: u64, y: u64) -> u128 {
    if y > x {
        return 0;
    }
    let y = y.min(x - y);
    (0..y).fold(1u128, |acc, i| acc * (x - i) as u128 / (i + 1) as u128)
}

fn sperner_ok(sys: &PartitionSystem) -> Result<bool, String> {
    Ok(check_partition_system(sys).pass() && check_sperner(sys).map_err(|e| e.to_string())?.pass())
}

fn cli(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_sperner")).args(args).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("`sperner {}` exited with {}", args.join(" "), out.status));
    }
    String::from_utf8(out.stdout).map_err(|e| e.to_string())
}

fn exact_scan() -> Outcome {
    let start = Instant::now();
    let csv = cli(&["scan", "--table", "1", "--n-max", "1000"])?;
    let secs = start.elapsed().as_secs_f64();
    ensure(csv == TABLE1, || "scan output differs from the golden table".into())?;
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    ensure(rows.len() == 66, || format!("{} rows", rows.len()))?;
    for row in &rows {
        let f: Vec<u64> = row.split(',').map(|v| v.parse().unwrap()).collect();
        let (n, k, m, h, sp) = (f[0], f[1], f[2], f[3], f[4]);
        let plan = plan_lemma4(n, k, m, h, Case::B).map_err(|e| format!("({n},{k}): {e}"))?;
        let upper = theorem5_upper(&decompose(n, k).unwrap()).map_err(|e| e.to_string())?;
        ensure(plan.size() == upper && upper == BigInt::from(sp), || {
            format!("({n},{k}) witness ({m},{h}) gives {} against bound {upper}", plan.size())
        })?;
    }
    ensure(secs < TABLE1_SECONDS, || format!("took {secs:.1}s"))?;
    Ok(format!("66 rows match, every witness meets the bound, {secs:.1}s"))
}

fn explicit_thresholds() -> Outcome {
    let expected = [(3, 17, 6), (4, 35, 9), (5, 32, 13), (6, 97, 16), (7, 71, 20), (8, 189, 23), (9, 253, 27), (10, 311, 30)];
    let csv = cli(&["scan", "--table", "2"])?;
    ensure(csv == TABLE2, || "scan output differs from the golden table".into())?;
    let got: Vec<String> = csv.lines().skip(1).map(str::to_string).collect();
    let want: Vec<String> = expected.iter().map(|(r, k, o)| format!("{r},{k},2k+{o}")).collect();
    ensure(got == want, || format!("got {got:?}"))?;
    Ok("r = 3..10 thresholds and offsets match".into())
}

fn uniform() -> Outcome {
    let mut done = Vec::new();
    for c in 2..=4u64 {
        for k in 3..=5u64 {
            if c * k > 16 {
                continue;
            }
            let sys = construct_uniform(c * k, k).map_err(|e| e.to_string())?;
            let want = binom_u128(c * k - 1, c - 1);
            ensure(sys.len() as u128 == want, || format!("(c,k)=({c},{k}): {} partitions, want {want}", sys.len()))?;
            ensure(sperner_ok(&sys)?, || format!("(c,k)=({c},{k}) not Sperner"))?;
            done.push(format!("{}:{}", c * k, sys.len()));
        }
    }
    Ok(format!("n:size {}", done.join(" ")))
}

fn three_k_minus_two() -> Outcome {
    let mut done = Vec::new();
    for k in [4u64, 6, 8, 10] {
        let n = 3 * k - 2;
        let h = n / 2;
        let plan = plan_lemma4(n, k, 2, h, Case::B).map_err(|e| e.to_string())?;
        let res = resolve(2, plan.ctx.c as usize).map_err(|e| e.to_string())?;
        let sys = construct_lemma4(&plan, &res, 0).map_err(|e| e.to_string())?;
        let lo = binom_u128(h, 2);
        ensure(sys.len() as u128 == lo, || format!("k={k}: {} partitions, want {lo}", sys.len()))?;
        if k <= 6 {
            ensure(sperner_ok(&sys)?, || format!("k={k} not Sperner"))?;
        } else {
            let cert = lemma4_certificate(&plan).map_err(|e| e.to_string())?;
            ensure(check_certificate(&sys, &cert).pass(), || format!("k={k} certificate failed"))?;
        }
        let upper = theorem5_upper(&decompose(n, k).unwrap()).map_err(|e| e.to_string())?;
        ensure(upper == BigInt::from(lo + 1), || format!("k={k}: upper bound {upper}, want {}", lo + 1))?;
        done.push(format!("k={k}:{{{lo},{}}}", lo + 1));
    }
    Ok(done.join(" "))
}

fn ip_first() -> Outcome {
    let inst = instance_secA(22, 3).map_err(|e| e.to_string())?;
    ensure(inst.u == 0 && inst.q == 30822.into(), || format!("(u,Q) = ({}, {})", inst.u, inst.q))?;
    let g = greedy_secA(&inst).map_err(|e| e.to_string())?;
    ensure(g.objective == 30822.into(), || format!("greedy {}", g.objective))?;
    let ex = exact_solve(&inst, 10_000, DEFAULT_EXACT_LIMIT).map_err(|e| e.to_string())?;
    ensure(ex.optimal && ex.solution.objective == 30822.into(), || format!("exact {}", ex.solution.objective))?;
    let small = instance_secA(10, 3).map_err(|e| e.to_string())?;
    let g = greedy_secA(&small).map_err(|e| e.to_string())?;
    ensure(g.objective == 10.into(), || format!("(10,3) greedy {}", g.objective))?;
    let sys = build_system_secA(&small, &g, 0).map_err(|e| e.to_string())?;
    ensure(sys.len() == 10 && sperner_ok(&sys)?, || format!("(10,3) system of {} partitions", sys.len()))?;
    Ok("(22,3): u=0 Q=30822 greedy=exact=30822; (10,3): 10 partitions, Sperner".into())
}

fn ip_second() -> Outcome {
    let inst = instance_secB(26, 3).map_err(|e| e.to_string())?;
    let q = BigInt::from(511224);
    ensure(inst.u == 0 && inst.q == q, || format!("(u,Q) = ({}, {})", inst.u, inst.q))?;
    let ex = exact_solve(&inst, 10_000, DEFAULT_EXACT_LIMIT).map_err(|e| e.to_string())?;
    ensure(ex.solution.objective == q, || format!("exact {}", ex.solution.objective))?;
    let closed = closedform_secB(&inst).map_err(|e| e.to_string())?;
    let ClosedForm::Infeasible(rep) = closed else {
        return Err("closed form unexpectedly feasible".into());
    };
    let lp = lp_relax(&inst, DEFAULT_LP_LIMIT).map_err(|e| e.to_string())?;
    ensure(lp.objective == rat(&q), || format!("LP {}", lp.objective))?;
    Ok(format!("u=0 Q=511224 exact=511224 LP=511224, closed form violates {}", rep.violations[0].0))
}

fn instances(secb: bool, ks: &[u64], n_max: u64) -> Vec<IpInstance> {
    let mut out = Vec::new();
    for &k in ks {
        let residue = if secb { k - 1 } else { k + 1 };
        for n in (2 * k + 1..=n_max).filter(|n| n % (2 * k) == residue) {
            out.push(if secb { instance_secB(n, k) } else { instance_secA(n, k) }.expect("valid class"));
        }
    }
    out
}

fn greedy_gap() -> Outcome {
    let mut count = 0;
    for inst in instances(false, &[3, 5, 7], 600) {
        let (n, k) = (inst.ctx.n, inst.ctx.k);
        let gap = lemma7_gap(&inst);
        let floor = rat(&inst.q) - &gap;
        let steps = greedy_secA_steps(&inst).map_err(|e| format!("({n},{k}): {e}"))?;
        let full = greedy_secA(&inst).map_err(|e| format!("({n},{k}): {e}"))?;
        for (name, v) in [("steps", &steps.objective), ("greedy", &full.objective)] {
            ensure(rat(v) >= floor, || format!("({n},{k}) {name} {v} below {floor}"))?;
        }
        let ex = exact_solve(&inst, 2000, DEFAULT_EXACT_LIMIT).map_err(|e| format!("({n},{k}): {e}"))?;
        ensure(rat(&steps.objective) >= rat(&ex.solution.objective) - &gap, || {
            format!("({n},{k}) greedy {} more than the gap below exact {}", steps.objective, ex.solution.objective)
        })?;
        count += 1;
    }
    Ok(format!("{count} instances, k in {{3,5,7}}, n <= 600"))
}

fn lp_sandwich() -> Outcome {
    let mut count = 0;
    let all = instances(false, &[3, 5, 7], 600).into_iter().chain(instances(true, &[3, 5, 7], 600));
    for inst in all {
        let (n, k) = (inst.ctx.n, inst.ctx.k);
        let lp = lp_relax(&inst, DEFAULT_LP_LIMIT).map_err(|e| format!("({n},{k}): {e}"))?;
        let ex = exact_solve(&inst, 2000, DEFAULT_EXACT_LIMIT).map_err(|e| format!("({n},{k}): {e}"))?;
        let e = rat(&ex.solution.objective);
        let slack = BigRational::from_integer(BigInt::from(2 * inst.phi.len()));
        ensure(e <= lp.objective && lp.objective <= &e + slack, || {
            format!("({n},{k}) {} {}: exact {e}, LP {}", inst.variant, inst.phi.len(), lp.objective)
        })?;
        ensure(lp.floor.feasible(), || format!("({n},{k}) LP floor infeasible"))?;
        count += 1;
    }
    Ok(format!("{count} instances of both programs, k in {{3,5,7}}, n <= 600"))
}

fn k3_lp_equals_q() -> Outcome {
    let mut count = 0;
    for n in (26..=500u64).filter(|n| n % 6 == 2) {
        let inst = instance_secB(n, 3).map_err(|e| e.to_string())?;
        let lp = lp_relax(&inst, DEFAULT_LP_LIMIT).map_err(|e| format!("n={n}: {e}"))?;
        ensure(lp.objective == rat(&inst.q), || format!("n={n}: LP {} vs Q {}", lp.objective, inst.q))?;
        count += 1;
    }
    Ok(format!("LP optimum equals Q exactly for all {count} values n = 2 mod 6 in [26, 500]"))
}

fn asymptotics() -> Outcome {
    let mut parts = Vec::new();
    for (n, k) in ASYM_CASES {
        let inst = instance_secB(n, k).map_err(|e| e.to_string())?;
        let rep = asymptotic_report(&inst).map_err(|e| e.to_string())?;
        let e0 = rep.estar_ratios[0];
        // Independent recomputation of the scale for u.
        let scale = erf_inv_std(0.5).unwrap() * (inst.d as f64 * (k - 1) as f64 / k as f64).sqrt();
        let u_rel = inst.u as f64 / scale;
        let q_mms = rep.q_over_mms;
        let bound = mms(&inst.ctx).map_err(|e| e.to_string())?;
        ensure(rat(&inst.q) <= bound, || format!("({n},{k}) Q above MMS"))?;
        ensure((ESTAR_BAND.0..=ESTAR_BAND.1).contains(&e0), || format!("({n},{k}) e*_0 ratio {e0}"))?;
        ensure((u_rel - 1.0).abs() <= U_REL_TOL, || format!("({n},{k}) u/scale = {u_rel}"))?;
        ensure((Q_MMS_BAND.0..=Q_MMS_BAND.1).contains(&q_mms), || format!("({n},{k}) Q/MMS = {q_mms}"))?;
        parts.push(format!("({n},{k}): e*0 {e0:.4} u/scale {u_rel:.4} Q/MMS {q_mms:.4}"));
    }
    Ok(parts.join("; "))
}

/// Random partitions of `n` points into `k` nonempty blocks.
fn random_system(rng: &mut ChaCha8Rng, n: usize, k: usize, p: usize) -> PartitionSystem {
    let partitions = (0..p)
        .map(|_| {
            let mut labels: Vec<usize> = (0..n).map(|i| if i < k { i } else { rng.gen_range(0..k) }).collect();
            for i in (1..n).rev() {
                labels.swap(i, rng.gen_range(0..=i));
            }
            let mut parts = vec![Vec::new(); k];
            for (e, &l) in labels.iter().enumerate() {
                parts[l].push(e as u32);
            }
            parts
        })
        .collect();
    PartitionSystem::new(n, k, partitions)
}

fn verifier() -> Outcome {
    // certificate pass => pairwise pass, on every buildable system with n <= 40
    let mut dual = 0;
    let mut small: Vec<PartitionSystem> = Vec::new();
    for n in 4..=40u64 {
        for k in 2..=n / 2 {
            for m in 2..=n {
                if n % m != 0 {
                    continue;
                }
                for case in [Case::A, Case::B] {
                    let Ok(plan) = plan_lemma4(n, k, m, n / m, case) else { continue };
                    if plan.p == 0 || plan.size() * k > BigInt::from(12_000) {
                        continue;
                    }
                    let res = resolve(m as usize, plan.ctx.c as usize).map_err(|e| e.to_string())?;
                    let sys = construct_lemma4(&plan, &res, n).map_err(|e| e.to_string())?;
                    let cert = check_certificate(&sys, &lemma4_certificate(&plan).unwrap()).pass();
                    ensure(!cert || sperner_ok(&sys)?, || format!("plan ({n},{k},{m},{case:?}) certificate without Sperner"))?;
                    dual += 1;
                    if n <= 16 {
                        small.push(sys);
                    }
                }
            }
        }
        for k in 2..=n / 2 {
            let c = n / k;
            if n % k == 0 && binom_u128(n - 1, c - 1) * k as u128 <= 12_000 {
                let sys = construct_uniform(n, k).map_err(|e| e.to_string())?;
                let cert = check_certificate(&sys, &uniform_certificate(n, k).unwrap()).pass();
                ensure(!cert || sperner_ok(&sys)?, || format!("uniform ({n},{k}) certificate without Sperner"))?;
                dual += 1;
                if n <= 16 {
                    small.push(sys);
                }
            }
        }
    }
    for (n, k, secb) in [(10u64, 3u64, false), (16, 3, false), (16, 5, false), (22, 7, false), (26, 3, true)] {
        let inst = if secb { instance_secB(n, k) } else { instance_secA(n, k) }.map_err(|e| e.to_string())?;
        let sol = if inst.q <= BigInt::from(2000) {
            exact_solve(&inst, 1000, DEFAULT_EXACT_LIMIT).map_err(|e| e.to_string())?.solution
        } else {
            let mut x = vec![BigInt::from(0); inst.phi.len()];
            x[0] = 50.into();
            inst.solution(x).map_err(|e| e.to_string())?
        };
        let sys = build_system(&inst, &sol, 3).map_err(|e| e.to_string())?;
        let cert = check_certificate(&sys, &ip_certificate(&inst)).pass();
        ensure(!cert || sperner_ok(&sys)?, || format!("IP ({n},{k}) certificate without Sperner"))?;
        dual += 1;
        if n <= 16 {
            small.push(sys);
        }
    }

    // detecting array <=> Sperner, on built systems, their prefixes with a
    // duplicated partition, and random systems
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut planted = Vec::new();
    for sys in &small {
        let mut dup = sys.clone();
        dup.partitions.push(sys.partitions[0].clone());
        planted.push(dup);
    }
    for _ in 0..400 {
        let n = rng.gen_range(4..=16);
        let k = rng.gen_range(2..=n / 2);
        let p = rng.gen_range(1..=6);
        planted.push(random_system(&mut rng, n, k, p));
    }
    let (mut agree, mut yes, mut no) = (0, 0, 0);
    for sys in small.iter().chain(&planted) {
        let arr = to_detecting_array(sys).map_err(|e| e.to_string())?;
        let a = check_detecting_array(&arr).pass();
        let s = sperner_ok(sys)?;
        ensure(a == s, || format!("array check {a} but pairwise check {s} on n = {}", sys.n))?;
        agree += 1;
        if s {
            yes += 1;
        } else {
            no += 1;
        }
    }
    ensure(yes > 0 && no > 0, || "cross-check saw only one outcome".into())?;
    Ok(format!("{dual} dual-checked systems (n <= 40); {agree} array/pairwise agreements ({yes} Sperner, {no} not)"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("exact-value scan", exact_scan),
        ("explicit-bound thresholds", explicit_thresholds),
        ("uniform case", uniform),
        ("3k-2 sandwich", three_k_minus_two),
        ("first integer program", ip_first),
        ("second integer program", ip_second),
        ("greedy gap bound", greedy_gap),
        ("LP sandwich", lp_sandwich),
        ("k=3 LP equals Q", k3_lp_equals_q),
        ("asymptotic surrogates", asymptotics),
        ("verifier soundness", verifier),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] criterion {}: {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] criterion {}: {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
