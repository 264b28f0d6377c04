use num_bigint::BigInt;
use sperner_core::ip::{
    build_system, closedform_secB, exact_solve, gap, greedy_fill, greedy_secA, ip_certificate, lp_relax, ClosedForm,
    IpInstance, IpSolution, Variant,
};

use crate::failure::Failure;
use crate::output::{check_and_emit, decimal, write_or_print};
use crate::{Format, IpArgs, Solver};

/// Variant whose congruence class contains `n`.
fn infer_variant(n: u64, k: u64) -> Result<Variant, Failure> {
    if k >= 3 && k % 2 == 1 {
        let m = n % (2 * k);
        if m == k + 1 {
            return Ok(Variant::SecA);
        }
        if m == k - 1 {
            return Ok(Variant::SecB);
        }
    }
    Err(Failure::Usage(format!(
        "n = {n} is in neither congruence class for k = {k} (needs k odd and n = k+1 or k-1 mod 2k)"
    )))
}

/// Result of one solver run, as printed.
struct Solved {
    solver: &'static str,
    solution: IpSolution,
    /// False when optimality is unknown.
    optimal: bool,
    notes: Vec<String>,
}

fn run_exact(inst: &IpInstance, a: &IpArgs) -> Result<Solved, Failure> {
    let out = exact_solve(inst, a.budget, a.exact_limit)?;
    Ok(Solved {
        solver: "exact",
        notes: vec![format!("nodes={}", out.nodes), format!("pivots={}", out.pivots)],
        optimal: out.optimal,
        solution: out.solution,
    })
}

fn run_lp(inst: &IpInstance, a: &IpArgs) -> Result<Solved, Failure> {
    let lp = lp_relax(inst, a.lp_limit)?;
    let mut notes = vec![format!("lp_opt={} ({})", lp.objective, decimal(&lp.objective, 3)), format!("pivots={}", lp.pivots)];
    let filled = greedy_fill(inst, lp.floor.x.clone())?;
    notes.push(format!("lp_floor={}", lp.floor.objective));
    Ok(Solved {
        solver: "lp",
        optimal: filled.objective == inst.q,
        notes,
        solution: filled,
    })
}

fn run_closed(inst: &IpInstance) -> Result<Result<Solved, Vec<String>>, Failure> {
    if inst.is_trivial() {
        return Ok(Ok(Solved { solver: "closed", solution: inst.zero_solution(), optimal: true, notes: vec![] }));
    }
    match closedform_secB(inst)? {
        ClosedForm::Feasible(sol) => Ok(Ok(Solved { solver: "closed", solution: sol, optimal: true, notes: vec![] })),
        ClosedForm::Infeasible(rep) => {
            Ok(Err(rep.violations.iter().map(|(name, slack)| format!("{name} slack {slack}")).collect()))
        }
    }
}

fn solve(inst: &IpInstance, a: &IpArgs) -> Result<Solved, Failure> {
    match (a.solver, inst.variant) {
        (Solver::Greedy, Variant::SecA) => {
            let sol = greedy_secA(inst)?;
            let optimal = sol.objective == inst.q;
            Ok(Solved { solver: "greedy", solution: sol, optimal, notes: vec![] })
        }
        (Solver::Greedy, Variant::SecB) => {
            let sol = greedy_fill(inst, vec![BigInt::from(0); inst.phi.len()])?;
            let optimal = sol.objective == inst.q;
            Ok(Solved { solver: "greedy-fill", solution: sol, optimal, notes: vec![] })
        }
        (Solver::Closed, Variant::SecA) => Err(Failure::Usage("the closed form exists only for secB".into())),
        (Solver::Closed, Variant::SecB) => match run_closed(inst)? {
            Ok(s) => Ok(s),
            Err(violations) => Err(Failure::Verification(format!("closed form infeasible: {}", violations.join("; ")))),
        },
        (Solver::Exact, _) => run_exact(inst, a),
        (Solver::Lp, _) => run_lp(inst, a),
        (Solver::Auto, Variant::SecA) => {
            if inst.phi.len() <= a.exact_limit {
                run_exact(inst, a)
            } else {
                let sol = greedy_secA(inst)?;
                let optimal = sol.objective == inst.q;
                Ok(Solved { solver: "greedy", solution: sol, optimal, notes: vec![] })
            }
        }
        (Solver::Auto, Variant::SecB) => {
            let violations = match run_closed(inst)? {
                Ok(s) => return Ok(s),
                Err(v) => v,
            };
            let mut s = if inst.phi.len() <= a.exact_limit { run_exact(inst, a)? } else { run_lp(inst, a)? };
            s.notes.insert(0, format!("closed form infeasible ({})", violations.join("; ")));
            Ok(s)
        }
    }
}

pub fn run(a: &IpArgs) -> Result<(), Failure> {
    let variant = match a.variant {
        Some(v) => v,
        None => infer_variant(a.n, a.k)?,
    };
    let inst = IpInstance::new(variant, a.n, a.k)?;
    let solved = solve(&inst, a)?;
    let sol = &solved.solution;
    if !sol.feasible() {
        return Err(Failure::Verification(format!("{} produced an infeasible assignment", solved.solver)));
    }
    let optimal = if solved.optimal { "yes" } else { "unknown" };
    let g = gap(&inst, sol);
    match a.format {
        Format::Text => {
            println!(
                "instance {variant} n={} k={} d={} u={} Q={} vars={}",
                a.n,
                a.k,
                inst.d,
                inst.u,
                inst.q,
                inst.phi.len()
            );
            if inst.is_trivial() {
                println!("trivial instance (u = -1)");
            }
            for note in &solved.notes {
                println!("{note}");
            }
            println!("solver={} objective={} gap={g} optimal={optimal}", solved.solver, sol.objective);
        }
        Format::Csv => {
            println!("variant,n,k,d,u,q,solver,objective,gap,optimal");
            println!(
                "{variant},{},{},{},{},{},{},{},{g},{optimal}",
                a.n, a.k, inst.d, inst.u, inst.q, solved.solver, sol.objective
            );
        }
    }
    if let Some(path) = &a.dump {
        write_or_print(Some(path), &inst.dump(Some(sol)))?;
        println!("wrote {}", path.display());
    }
    if a.sys.out.is_some() {
        let sys = build_system(&inst, sol, a.sys.seed)?;
        check_and_emit(&sys, &inst.ctx, Some(&ip_certificate(&inst)), false, &a.sys)?;
    }
    Ok(())
}
