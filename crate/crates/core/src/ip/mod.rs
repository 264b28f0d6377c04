//! Structured integer programs for two congruence classes of `n` with odd `k`.
//!
//! Both programs live on a ground set split into halves `X1`, `X2` of size
//! `n/2`. A `c`-set or `(c+1)`-set is described by how many elements it takes
//! from `X1`. Variables `x[i][j]`, `(i, j)` in `phi`, count triples of such
//! sets; every triple is later padded to a full partition.
//!
//! * [`Variant::SecA`]: `n = ck + 1`, `c = 2d + 1`.
//! * [`Variant::SecB`]: `n = ck + k - 1`, `c = 2d`.
//!
//! Both share one constraint shape: a cap `D` on the diagonal sum, caps `O_l`
//! on each off-diagonal `j - i = l`, and caps `R_l` on the row/column sums
//! (a diagonal variable counts twice there).

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::combinatorics::{binom_int, decompose, mms, ParamCtx};
use crate::error::{invalid, Error, Result};

mod asym;
mod bnb;
mod build;
mod greedy;
mod simplex;

pub use asym::{asymptotic_report, AsymptoticReport};
pub use bnb::{exact_solve, lp_relax, ExactOutcome, LpOutcome, DEFAULT_EXACT_LIMIT, DEFAULT_LP_LIMIT, EXACT_PIVOT_BUDGET};
pub use build::{build_system, build_system_secA, build_system_secB, ip_certificate};
pub use greedy::{closedform_secB, greedy_fill, greedy_secA, greedy_secA_steps, lemma7_gap, ClosedForm, ClosedFormReport};
pub use simplex::{maximize, LpProblem, LpResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    SecA,
    SecB,
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Variant::SecA => "secA",
            Variant::SecB => "secB",
        })
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "seca" | "a" => Ok(Variant::SecA),
            "secb" | "b" => Ok(Variant::SecB),
            _ => invalid(format!("unknown variant `{s}` (expected secA or secB)")),
        }
    }
}

/// How the truncated sequence `eta*` ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtaShape {
    /// `eta*_l = e*_l` before `x`, strictly smaller at `x`, zero after.
    Partial { x: usize },
    /// Every term equals `e*_l`; no index satisfies the strict inequality.
    Saturated,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IpInstance {
    pub variant: Variant,
    pub ctx: ParamCtx,
    pub d: u64,
    pub e: Vec<BigInt>,
    pub estar: Vec<BigInt>,
    pub u: i64,
    pub a_u: BigInt,
    pub b_u: BigInt,
    pub q: BigInt,
    /// Empty for [`Variant::SecB`].
    pub etastar: Vec<BigInt>,
    pub eta_shape: Option<EtaShape>,
    pub phi: Vec<(u64, u64)>,
    pub diag_cap: BigInt,
    /// `O_l` at index `l - 1`.
    pub off_caps: Vec<BigInt>,
    /// `R_l` at index `l - u - 1`.
    pub row_caps: Vec<BigInt>,
}

/// `binom(h, t)` for `t` in `lo..=hi`, by the ratio recurrence.
fn binom_run(h: u64, lo: u64, hi: u64) -> Vec<BigInt> {
    let mut out = Vec::with_capacity((hi + 1).saturating_sub(lo) as usize);
    let mut cur = binom_int(h, lo as i64);
    for t in lo..=hi {
        out.push(cur.clone());
        if t >= h {
            cur = BigInt::zero();
        } else {
            cur = cur * BigInt::from(h - t) / BigInt::from(t + 1);
        }
    }
    out
}

fn check_class(n: u64, k: u64, residue: u64) -> Result<ParamCtx> {
    if k < 3 || k % 2 == 0 {
        return invalid(format!("k must be odd and at least 3, got {k}"));
    }
    if n <= 2 * k || n % (2 * k) != residue % (2 * k) {
        return invalid(format!("needs n > 2k and n = {residue} mod {}, got n = {n}", 2 * k));
    }
    decompose(n, k)
}

fn phi_for(u: i64, d: u64) -> Vec<(u64, u64)> {
    if u < 0 {
        return Vec::new();
    }
    let u = u as u64;
    let mut phi = Vec::new();
    for i in u + 1..=d {
        for j in i..=d.min(i + u) {
            phi.push((i, j));
        }
    }
    phi
}

impl IpInstance {
    /// Instance for `n = ck + 1`, `c = 2d + 1`.
    pub fn sec_a(n: u64, k: u64) -> Result<Self> {
        let ctx = check_class(n, k, k + 1)?;
        let d = (ctx.c - 1) / 2;
        let h = n / 2;
        let lower = binom_run(h, 0, d + 1);
        let upper = binom_run(h, d + 1, 2 * d + 2);
        // binom(h, d-l) * binom(h, d+1+l)
        let e: Vec<BigInt> = (0..=d).map(|l| &lower[(d - l) as usize] * &upper[l as usize]).collect();
        // binom(h, d+1-l) * binom(h, d+1+l)
        let estar: Vec<BigInt> = (0..=d + 1).map(|l| &lower[(d + 1 - l) as usize] * &upper[l as usize]).collect();
        let km1 = BigInt::from(k - 1);
        // a(x) = 2 * sum_{l > x} e_l, b(x) = e*_0 + sum_{1 <= l <= x} e*_l
        let mut suffix = vec![BigInt::zero(); d as usize + 2];
        for l in (0..=d as usize).rev() {
            suffix[l] = &suffix[l + 1] + &e[l];
        }
        let mut b = estar[0].clone();
        let mut found = None;
        for x in 0..=d as usize {
            if x > 0 {
                b += &estar[x];
            }
            let a = BigInt::from(2) * &suffix[x + 1];
            if a <= &km1 * &b {
                found = Some((x, a, b.clone()));
                break;
            }
        }
        let (u, a_u, b_u) = found.ok_or_else(|| Error::Invariant("no admissible u".into()))?;
        if u as u64 > d.saturating_sub(1) && d > 0 {
            return Err(Error::Invariant(format!("u = {u} exceeds d - 1 = {}", d - 1)));
        }
        let mut q = a_u.div_floor(&km1);
        if q.is_odd() {
            q -= 1;
        }
        let (etastar, shape) = eta_sequence(&estar[..=u], &q)?;
        let diag_cap = etastar[0].div_floor(&BigInt::from(2));
        let off_caps = etastar[1..].to_vec();
        let row_caps = e[u + 1..].to_vec();
        let inst = IpInstance {
            variant: Variant::SecA,
            ctx,
            d,
            e,
            estar,
            u: u as i64,
            a_u,
            b_u,
            q,
            etastar,
            eta_shape: Some(shape),
            phi: phi_for(u as i64, d),
            diag_cap,
            off_caps,
            row_caps,
        };
        inst.check_q_below_mms()?;
        Ok(inst)
    }

    /// `n = ck + k - 1`, `c = 2d`.
    pub fn sec_b(n: u64, k: u64) -> Result<Self> {
        let ctx = check_class(n, k, k - 1)?;
        let d = ctx.c / 2;
        let h = n / 2;
        let lower = binom_run(h, 0, d);
        let upper = binom_run(h, d, 2 * d + 1);
        // binom(h, d-l) * binom(h, d+l) and binom(h, d-l) * binom(h, d+1+l)
        let e: Vec<BigInt> = (0..=d).map(|l| &lower[(d - l) as usize] * &upper[l as usize]).collect();
        let estar: Vec<BigInt> = (0..=d).map(|l| &lower[(d - l) as usize] * &upper[l as usize + 1]).collect();
        let km1 = BigInt::from(k - 1);
        let mut suffix = vec![BigInt::zero(); d as usize + 2];
        for l in (0..=d as usize).rev() {
            suffix[l] = &suffix[l + 1] + &estar[l];
        }
        let mut u: i64 = -1;
        let mut a_u = BigInt::zero();
        let mut b_u = binom_int(n, 2 * d as i64 + 1);
        let mut a = BigInt::zero();
        for x in 0..d as usize {
            a += if x == 0 { e[0].clone() } else { BigInt::from(2) * &e[x] };
            let b = BigInt::from(2) * &suffix[x + 1];
            if &km1 * &a <= b {
                u = x as i64;
                a_u = a.clone();
                b_u = b;
            }
        }
        let q = if a_u.is_odd() { &a_u - 1 } else { a_u.clone() };
        let (diag_cap, off_caps, row_caps) = if u >= 0 {
            let uu = u as usize;
            (e[0].div_floor(&BigInt::from(2)), e[1..=uu].to_vec(), estar[uu + 1..].to_vec())
        } else {
            (BigInt::zero(), Vec::new(), Vec::new())
        };
        let inst = IpInstance {
            variant: Variant::SecB,
            ctx,
            d,
            e,
            estar,
            u,
            a_u,
            b_u,
            q,
            etastar: Vec::new(),
            eta_shape: None,
            phi: phi_for(u, d),
            diag_cap,
            off_caps,
            row_caps,
        };
        inst.check_q_below_mms()?;
        Ok(inst)
    }

    pub fn new(variant: Variant, n: u64, k: u64) -> Result<Self> {
        match variant {
            Variant::SecA => Self::sec_a(n, k),
            Variant::SecB => Self::sec_b(n, k),
        }
    }

    fn check_q_below_mms(&self) -> Result<()> {
        let bound = mms(&self.ctx)?;
        if BigRational::from_integer(self.q.clone()) > bound {
            return Err(Error::Invariant(format!("Q = {} exceeds MMS = {bound}", self.q)));
        }
        Ok(())
    }

    pub fn is_trivial(&self) -> bool {
        self.phi.is_empty()
    }

    /// Off-diagonal cap `O_l`, `1 <= l <= u`.
    pub fn off_cap(&self, l: u64) -> &BigInt {
        &self.off_caps[l as usize - 1]
    }

    /// Row cap `R_l`, `u < l <= d`.
    pub fn row_cap(&self, l: u64) -> &BigInt {
        &self.row_caps[(l as i64 - self.u - 1) as usize]
    }

    pub fn index_of(&self, i: u64, j: u64) -> Option<usize> {
        self.phi.binary_search(&(i, j)).ok()
    }

    /// Constraints `A x <= b` in the order: off-diagonals `1..=u`, diagonal,
    /// rows `u+1..=d`. Each row lists `(variable, coefficient)`.
    pub fn constraints(&self) -> (Vec<Vec<(usize, u32)>>, Vec<BigInt>) {
        if self.is_trivial() {
            return (Vec::new(), Vec::new());
        }
        let u = self.u as u64;
        let rows = u as usize + 1 + (self.d - u) as usize;
        let mut a: Vec<Vec<(usize, u32)>> = vec![Vec::new(); rows];
        for (v, &(i, j)) in self.phi.iter().enumerate() {
            if i == j {
                a[u as usize].push((v, 1));
                a[u as usize + 1 + (i - u - 1) as usize].push((v, 2));
            } else {
                a[(j - i - 1) as usize].push((v, 1));
                a[u as usize + 1 + (i - u - 1) as usize].push((v, 1));
                a[u as usize + 1 + (j - u - 1) as usize].push((v, 1));
            }
        }
        let mut b = self.off_caps.clone();
        b.push(self.diag_cap.clone());
        b.extend(self.row_caps.iter().cloned());
        (a, b)
    }

    /// Slacks of every constraint for an assignment over `phi`.
    pub fn slacks(&self, x: &[BigInt]) -> Slacks {
        let mut off = self.off_caps.clone();
        let mut diag = self.diag_cap.clone();
        let mut row = self.row_caps.clone();
        if self.is_trivial() {
            return Slacks { diag, off, row };
        }
        let u = self.u as u64;
        for (&(i, j), v) in self.phi.iter().zip(x) {
            if i == j {
                diag -= v;
                row[(i - u - 1) as usize] -= v * 2;
            } else {
                off[(j - i - 1) as usize] -= v;
                row[(i - u - 1) as usize] -= v;
                row[(j - u - 1) as usize] -= v;
            }
        }
        Slacks { diag, off, row }
    }

    pub fn solution(&self, x: Vec<BigInt>) -> Result<IpSolution> {
        if x.len() != self.phi.len() {
            return invalid(format!("solution has {} values for {} variables", x.len(), self.phi.len()));
        }
        if x.iter().any(Signed::is_negative) {
            return invalid("negative variable");
        }
        let slacks = self.slacks(&x);
        let objective = BigInt::from(2) * x.iter().sum::<BigInt>();
        Ok(IpSolution { x, objective, slacks })
    }

    pub fn zero_solution(&self) -> IpSolution {
        self.solution(vec![BigInt::zero(); self.phi.len()]).expect("zero is valid")
    }

    /// Header, caps and (optionally) a solution in the line-based dump format.
    pub fn dump(&self, sol: Option<&IpSolution>) -> String {
        let mut out = String::new();
        let ParamCtx { n, k, .. } = self.ctx;
        writeln!(out, "IP {} {n} {k} {} {} {}", self.variant, self.d, self.u, self.q).unwrap();
        writeln!(out, "cap D {}", self.diag_cap).unwrap();
        for (l, v) in self.off_caps.iter().enumerate() {
            writeln!(out, "cap O {} {v}", l + 1).unwrap();
        }
        for (idx, v) in self.row_caps.iter().enumerate() {
            writeln!(out, "cap R {} {v}", self.u + 1 + idx as i64).unwrap();
        }
        if let Some(sol) = sol {
            for (&(i, j), v) in self.phi.iter().zip(&sol.x) {
                writeln!(out, "x {i} {j} {v}").unwrap();
            }
        }
        out
    }

    /// Reads an assignment from the `x i j v` lines of a dump; other lines are
    /// checked against this instance.
    pub fn parse_solution(&self, text: &str) -> Result<IpSolution> {
        let mut x = vec![BigInt::zero(); self.phi.len()];
        let mut header_seen = false;
        for (idx, line) in text.lines().enumerate() {
            let toks: Vec<&str> = line.split_whitespace().collect();
            let err = |msg: String| Error::Parse { line: idx + 1, msg };
            match toks.first().copied() {
                None => continue,
                Some("IP") => {
                    let want = format!("IP {} {} {} {} {} {}", self.variant, self.ctx.n, self.ctx.k, self.d, self.u, self.q);
                    if toks.join(" ") != want {
                        return Err(err(format!("header does not match `{want}`")));
                    }
                    header_seen = true;
                }
                Some("cap") => {}
                Some("x") if toks.len() == 4 => {
                    let parse = |t: &str| t.parse::<u64>().map_err(|_| err(format!("bad index `{t}`")));
                    let (i, j) = (parse(toks[1])?, parse(toks[2])?);
                    let v: BigInt = toks[3].parse().map_err(|_| err(format!("bad value `{}`", toks[3])))?;
                    let slot = self.index_of(i, j).ok_or_else(|| err(format!("({i},{j}) is not a variable")))?;
                    x[slot] = v;
                }
                Some(other) => return Err(err(format!("unexpected line starting with `{other}`"))),
            }
        }
        if !header_seen {
            return Err(Error::Parse { line: 1, msg: "missing IP header".into() });
        }
        self.solution(x).map_err(|e| Error::Parse { line: 0, msg: e.to_string() })
    }
}

#[allow(non_snake_case)]
pub fn instance_secA(n: u64, k: u64) -> Result<IpInstance> {
    IpInstance::sec_a(n, k)
}

#[allow(non_snake_case)]
pub fn instance_secB(n: u64, k: u64) -> Result<IpInstance> {
    IpInstance::sec_b(n, k)
}

/// Truncates `e*_0, .., e*_u` so that `floor(eta_0/2) + sum_{l>=1} eta_l = Q/2`.
fn eta_sequence(estar: &[BigInt], q: &BigInt) -> Result<(Vec<BigInt>, EtaShape)> {
    let two = BigInt::from(2);
    let half = q / &two;
    let mut eta = vec![BigInt::zero(); estar.len()];
    let first = q + estar[0].mod_floor(&two);
    if first < estar[0] {
        eta[0] = first;
        return Ok((eta, EtaShape::Partial { x: 0 }));
    }
    eta[0] = estar[0].clone();
    let mut rem = &half - estar[0].div_floor(&two);
    for l in 1..estar.len() {
        if rem < estar[l] {
            eta[l] = rem;
            return Ok((eta, EtaShape::Partial { x: l }));
        }
        eta[l] = estar[l].clone();
        rem -= &estar[l];
    }
    if rem.is_zero() {
        Ok((eta, EtaShape::Saturated))
    } else {
        Err(Error::Invariant(format!("eta* cannot reach Q/2; {rem} left over")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slacks {
    pub diag: BigInt,
    /// Index `l - 1`.
    pub off: Vec<BigInt>,
    /// Index `l - u - 1`.
    pub row: Vec<BigInt>,
}

impl Slacks {
    pub fn feasible(&self) -> bool {
        !self.diag.is_negative() && self.off.iter().chain(&self.row).all(|s| !s.is_negative())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IpSolution {
    /// Aligned with the instance's `phi`.
    pub x: Vec<BigInt>,
    pub objective: BigInt,
    pub slacks: Slacks,
}

impl IpSolution {
    pub fn feasible(&self) -> bool {
        self.slacks.feasible()
    }

    /// Sum of the variables, i.e. half the objective.
    pub fn half(&self) -> BigInt {
        &self.objective / 2
    }

    pub fn is_zero(&self) -> bool {
        self.x.iter().all(Zero::is_zero)
    }
}

/// `Q - objective`.
pub fn gap(inst: &IpInstance, sol: &IpSolution) -> BigInt {
    &inst.q - &sol.objective
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[u64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn sec_a_22_3() {
        let inst = instance_secA(22, 3).unwrap();
        assert_eq!(inst.d, 3);
        assert_eq!(inst.e, ints(&[54450, 25410, 5082, 330]));
        assert_eq!(inst.estar, ints(&[108900, 76230, 25410, 3630, 165]));
        assert_eq!((inst.u, inst.q.clone()), (0, 30822.into()));
        assert_eq!(inst.etastar, ints(&[30822]));
        assert_eq!(inst.eta_shape, Some(EtaShape::Partial { x: 0 }));
        assert_eq!(inst.phi, vec![(1, 1), (2, 2), (3, 3)]);
        assert_eq!(inst.diag_cap, 15411.into());
        assert_eq!(inst.row_caps, ints(&[25410, 5082, 330]));
    }

    #[test]
    fn sec_a_small() {
        let inst = instance_secA(10, 3).unwrap();
        assert_eq!((inst.d, inst.u), (1, 0));
        assert_eq!(inst.e, ints(&[50, 10]));
        assert_eq!(inst.estar, ints(&[100, 50, 5]));
        assert_eq!(inst.q, 10.into());
        assert_eq!(inst.phi, vec![(1, 1)]);
        let inst = instance_secA(16, 3).unwrap();
        assert_eq!(inst.d, 2);
        assert!(instance_secA(12, 3).is_err());
        assert!(instance_secA(10, 4).is_err());
    }

    #[test]
    fn sec_b_26_3() {
        let inst = instance_secB(26, 3).unwrap();
        assert_eq!(inst.d, 4);
        assert_eq!(inst.e, ints(&[511225, 368082, 133848, 22308, 1287]));
        assert_eq!(inst.estar, ints(&[920205, 490776, 133848, 16731, 715]));
        assert_eq!((inst.u, inst.q.clone()), (0, 511224.into()));
        assert_eq!(inst.phi, vec![(1, 1), (2, 2), (3, 3), (4, 4)]);
        assert_eq!(inst.diag_cap, 255612.into());
    }

    #[test]
    fn sec_b_trivial() {
        let inst = instance_secB(24, 5).unwrap();
        assert_eq!((inst.d, inst.u), (2, -1));
        assert!(inst.is_trivial());
        assert_eq!(inst.q, 0.into());
        let inst = instance_secB(14, 3).unwrap();
        assert_eq!(inst.u, -1);
        assert!(instance_secB(16, 3).is_err());
    }

    #[test]
    fn binom_run_matches_direct() {
        let run = binom_run(13, 2, 15);
        for (t, v) in (2..=15).zip(&run) {
            assert_eq!(*v, binom_int(13, t as i64));
        }
    }

    #[test]
    fn eta_shapes() {
        // x = 0 with parity: e*_0 odd keeps eta_0 odd.
        let (eta, s) = eta_sequence(&ints(&[11, 7]), &4.into()).unwrap();
        assert_eq!((eta, s), (ints(&[5, 0]), EtaShape::Partial { x: 0 }));
        // Q + 0 = e*_0 even: spills to the next term.
        let (eta, s) = eta_sequence(&ints(&[10, 7]), &10.into()).unwrap();
        assert_eq!((eta, s), (ints(&[10, 0]), EtaShape::Partial { x: 1 }));
        let (eta, s) = eta_sequence(&ints(&[10, 7]), &24.into()).unwrap();
        assert_eq!((eta, s), (ints(&[10, 7]), EtaShape::Saturated));
        assert!(eta_sequence(&ints(&[10, 7]), &26.into()).is_err());
    }

    #[test]
    fn invariants_over_ranges() {
        for k in [3u64, 5, 7] {
            for n in (2 * k + 1..=400).filter(|n| n % (2 * k) == (k + 1) % (2 * k)) {
                let inst = instance_secA(n, k).unwrap();
                assert!(inst.q.is_even());
                assert!(inst.u <= inst.d as i64 - 1);
                let half: BigInt = inst.etastar[0].div_floor(&BigInt::from(2)) + inst.etastar[1..].iter().sum::<BigInt>();
                assert_eq!(half * 2, inst.q);
                assert!(inst.etastar.iter().zip(&inst.estar).all(|(a, b)| a <= b));
            }
            for n in (2 * k + 1..=400).filter(|n| n % (2 * k) == k - 1) {
                let inst = instance_secB(n, k).unwrap();
                assert!(inst.q.is_even());
                assert!(inst.q == inst.a_u || inst.q == &inst.a_u - 1);
            }
        }
    }

    #[test]
    fn dump_round_trip() {
        let inst = instance_secA(22, 3).unwrap();
        let sol = inst.solution(ints(&[100, 7, 3])).unwrap();
        let text = inst.dump(Some(&sol));
        assert!(text.starts_with("IP secA 22 3 3 0 30822\ncap D 15411\ncap R 1 25410\n"));
        assert_eq!(inst.parse_solution(&text).unwrap(), sol);
        assert!(matches!(inst.parse_solution("IP secA 22 3 3 0 30822\nx 9 9 1\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn constraint_rows() {
        let inst = instance_secA(22, 3).unwrap();
        let (a, b) = inst.constraints();
        assert_eq!(a.len(), 4);
        assert_eq!(a[0], vec![(0, 1), (1, 1), (2, 1)]);
        assert_eq!(a[1], vec![(0, 2)]);
        assert_eq!(b[0], 15411.into());
    }
}
