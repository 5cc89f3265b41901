//! Enumeration of the fine gradings of `sl_n`, `so_n` and `sp_n`: one
//! constructed grading per equivalence class, with its universal group and type.

use std::fmt;
use std::str::FromStr;
use std::thread;

use serde::Serialize;

use crate::abgroup::FinAbGroup;
use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::graded::{cartan_grading, pauli_grading, tensor_grading, universal_group_of, MatGrading};
use crate::invariants::{i2_classes, i_classes, I2Tuple, ITuple};
use crate::involutions::{GradedInvolution, InvolutionKind, QuatPower};
use crate::liealg::{outer_sl_grading, skew_grading, sl_restriction, verify_lie};
use crate::sesquilinear::FormSpec;

pub const DEFAULT_MAX_N: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Sl,
    So,
    Sp,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Sl => "sl",
            Family::So => "so",
            Family::Sp => "sp",
        })
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sl" => Ok(Family::Sl),
            "so" => Ok(Family::So),
            "sp" => Ok(Family::Sp),
            _ => Err(Error::Parse(format!("unknown family `{s}` (expected sl, so or sp)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Inner,
    Outer,
    Involution,
    Triality,
    Merged,
}

#[derive(Clone, Debug)]
pub struct Options {
    /// Enumerate `so_8` as an ordinary orthogonal algebra, before triality merges classes.
    pub premerge: bool,
    pub max_n: usize,
    /// Worker threads for the constructions; `0` picks the available parallelism.
    pub workers: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { premerge: false, max_n: DEFAULT_MAX_N, workers: 0 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GradingReport {
    pub family: Family,
    pub n: usize,
    pub division: String,
    pub tuple: String,
    pub group: String,
    pub free_rank: usize,
    pub torsion: Vec<i64>,
    #[serde(rename = "type")]
    pub type_: Vec<usize>,
    pub provenance: Provenance,
    pub dim: usize,
    pub verified: bool,
}

impl GradingReport {
    pub fn from_grading(
        family: Family,
        n: usize,
        division: &str,
        tuple: &str,
        provenance: Provenance,
        grading: &MatGrading,
    ) -> Self {
        GradingReport {
            family,
            n,
            division: division.to_string(),
            tuple: tuple.to_string(),
            group: grading.group.to_string(),
            free_rank: grading.group.free_rank(),
            torsion: grading.group.torsion(),
            type_: grading.type_of(),
            provenance,
            dim: grading.dim(),
            verified: verify_lie(grading).is_empty(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Class {
    pub report: GradingReport,
    pub grading: MatGrading,
    /// The sesquilinear form behind outer and involution classes.
    pub spec: Option<FormSpec>,
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub family: Family,
    pub n: usize,
    pub premerge: bool,
    /// Known count for this algebra, when one is established independently.
    pub golden: Option<usize>,
    pub classes: Vec<Class>,
}

impl Enumeration {
    pub fn count(&self) -> usize {
        self.classes.len()
    }

    pub fn reports(&self) -> Vec<&GradingReport> {
        self.classes.iter().map(|c| &c.report).collect()
    }

    /// `"unverified count"` when no independent count exists for this algebra.
    pub fn count_tag(&self) -> &'static str {
        match self.golden {
            Some(g) if g == self.count() => "verified count",
            Some(_) => "count mismatch",
            None => "unverified count",
        }
    }
}

fn golden(family: Family, n: usize, premerge: bool) -> Option<usize> {
    match (family, n) {
        (Family::Sl, 2) => Some(2),
        (Family::Sl, 3) => Some(4),
        (Family::Sl, 8) => Some(21),
        (Family::Sp, 8) => Some(7),
        (Family::So, 5) => Some(3),
        (Family::So, 7) => Some(4),
        (Family::So, 8) if premerge => Some(15),
        _ => None,
    }
}

/// One class waiting to be constructed.
enum Job {
    Inner { k: usize, factors: Vec<i64> },
    Outer(ITuple),
    Involution(I2Tuple),
}

impl Job {
    fn order_key(&self) -> (u64, u8, String) {
        match self {
            Job::Inner { factors, .. } => {
                let d: i64 = factors.iter().product();
                ((d * d) as u64, 0, support_of(factors).to_string())
            }
            Job::Outer(t) => (1 << (2 * t.m), 1, t.to_string()),
            Job::Involution(t) => (1 << (2 * t.m), 1, t.to_string()),
        }
    }
}

fn support_of(factors: &[i64]) -> FinAbGroup {
    let twice: Vec<i64> = factors.iter().chain(factors).copied().collect();
    FinAbGroup::product(&twice)
}

fn prime_factors(mut d: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= d {
        let mut e = 0;
        while d.is_multiple_of(p) {
            d /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if d > 1 {
        out.push((d, 1));
    }
    out
}

fn partitions(n: u32, max: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Abelian groups of order `d`, each given by its elementary divisors.
pub fn abelian_groups(d: u64) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![vec![]];
    for (p, e) in prime_factors(d) {
        let mut next = Vec::new();
        for prefix in &out {
            for part in partitions(e, e) {
                let mut g = prefix.clone();
                g.extend(part.iter().map(|&k| p.pow(k) as i64));
                next.push(g);
            }
        }
        out = next;
    }
    for g in &mut out {
        g.sort_unstable();
    }
    out
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Exponents `m` with `2^m | n`.
fn quaternion_powers(n: usize) -> Vec<usize> {
    (0..usize::BITS as usize).take_while(|&m| n.is_multiple_of(1 << m)).collect()
}

fn is_degenerate(k: usize, labels: &[u32]) -> bool {
    k == 2 && labels.len() == 2 && labels[0] == labels[1]
}

fn check_bound(n: usize, opts: &Options) -> Result<()> {
    if n > opts.max_n {
        return Err(Error::Invalid(format!("n = {n} exceeds the bound {} (raise it explicitly)", opts.max_n)));
    }
    Ok(())
}

fn sl_jobs(n: usize) -> Vec<Job> {
    let mut jobs = Vec::new();
    for d in divisors(n) {
        for factors in abelian_groups(d as u64) {
            let elementary2 = factors.iter().all(|&f| f == 2);
            let size = 1usize << factors.len();
            if n > 2 && elementary2 && (size == n || 2 * size == n) {
                continue;
            }
            jobs.push(Job::Inner { k: n / d, factors });
        }
    }
    if n > 2 {
        for m in quaternion_powers(n) {
            let k = n >> m;
            for p in (k % 2..=k).step_by(2) {
                jobs.extend(i_classes(m, p).into_iter().filter(|t| !is_degenerate(k, &t.labels)).map(Job::Outer));
            }
        }
    }
    jobs
}

fn involution_jobs(n: usize, kind: InvolutionKind) -> Vec<Job> {
    let mut jobs = Vec::new();
    for m in quaternion_powers(n) {
        let k = n >> m;
        for p in (k % 2..=k).step_by(2) {
            jobs.extend(
                i2_classes(m, p, kind).into_iter().filter(|t| !is_degenerate(k, &t.labels)).map(Job::Involution),
            );
        }
    }
    jobs
}

fn hyperbolic(k: usize, p: usize, nu: CycNum) -> Vec<CycNum> {
    vec![nu; (k - p) / 2]
}

fn construct(job: &Job, n: usize) -> Result<(MatGrading, String, String, Provenance, Option<FormSpec>)> {
    match job {
        Job::Inner { k, factors } => {
            let mut d = pauli_grading(1);
            for &f in factors {
                d = tensor_grading(&d, &pauli_grading(f as usize))?;
            }
            let r = tensor_grading(&cartan_grading(*k), &d)?;
            let g = universal_group_of(&sl_restriction(&r))?;
            Ok((g, support_of(factors).to_string(), "-".into(), Provenance::Inner, None))
        }
        Job::Outer(t) => {
            let k = n >> t.m;
            let spec = FormSpec::new(
                t.m,
                GradedInvolution::transpose(t.m),
                t.labels.clone(),
                hyperbolic(k, t.labels.len(), CycNum::one()),
            )?;
            let g = outer_sl_grading(&spec)?;
            Ok((g, QuatPower::new(t.m).name(), t.to_string(), Provenance::Outer, Some(spec)))
        }
        Job::Involution(t) => {
            let k = n >> t.m;
            let qp = QuatPower::new(t.m);
            let tau = GradedInvolution::transpose(t.m).twist_label(&qp, t.twist);
            let hermitian = t.hermitian().unwrap_or(tau.kind()? == t.phi_kind);
            let nu = if hermitian { CycNum::one() } else { CycNum::root_of_unity(4, 1) };
            let spec = FormSpec::new(t.m, tau, t.labels.clone(), hyperbolic(k, t.labels.len(), nu))?;
            let g = skew_grading(&spec)?;
            Ok((g, qp.name(), t.to_string(), Provenance::Involution, Some(spec)))
        }
    }
}

fn build(family: Family, n: usize, premerge: bool, mut jobs: Vec<Job>, opts: &Options) -> Result<Enumeration> {
    jobs.sort_by_key(|j| j.order_key());
    let workers = match opts.workers {
        0 => thread::available_parallelism().map(|w| w.get()).unwrap_or(1),
        w => w,
    }
    .min(jobs.len().max(1));
    let run = |job: &Job| -> Result<Class> {
        let (grading, division, tuple, provenance, spec) = construct(job, n)?;
        let report = GradingReport::from_grading(family, n, &division, &tuple, provenance, &grading);
        Ok(Class { report, grading, spec })
    };
    let results: Vec<Result<Class>> = if workers <= 1 {
        // no threads: also the path taken on targets without thread support
        jobs.iter().map(run).collect()
    } else {
        let chunk = jobs.len().div_ceil(workers).max(1);
        thread::scope(|s| {
            let handles: Vec<_> =
                jobs.chunks(chunk).map(|part| s.spawn(|| part.iter().map(run).collect::<Vec<_>>())).collect();
            handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
        })
    };
    let classes = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(Enumeration { family, n, premerge, golden: golden(family, n, premerge), classes })
}

pub fn fine_gradings_sl(n: usize, opts: &Options) -> Result<Enumeration> {
    if n < 2 {
        return Err(Error::Invalid("sl_n needs n >= 2".into()));
    }
    check_bound(n, opts)?;
    build(Family::Sl, n, false, sl_jobs(n), opts)
}

pub fn fine_gradings_sp(n: usize, opts: &Options) -> Result<Enumeration> {
    if n % 2 == 1 || n < 6 {
        return Err(Error::Invalid("sp_n needs n even and n >= 6 (sp_4 is so_5, sp_2 is sl_2)".into()));
    }
    check_bound(n, opts)?;
    build(Family::Sp, n, false, involution_jobs(n, InvolutionKind::Symplectic), opts)
}

pub fn fine_gradings_so(n: usize, opts: &Options) -> Result<Enumeration> {
    match n {
        _ if n < 5 => return Err(Error::Invalid("so_n needs n >= 5 (smaller cases are sl_2 or sl_2 x sl_2)".into())),
        6 => return Err(Error::Unsupported("so_6 is isomorphic to sl_4; enumerate sl with n = 4".into())),
        8 if !opts.premerge => {
            return Err(Error::Unsupported(
                "so_8 has outer automorphisms of order 3; use the d4 table or request the pre-merge list".into(),
            ))
        }
        _ => {}
    }
    check_bound(n, opts)?;
    build(Family::So, n, n == 8, involution_jobs(n, InvolutionKind::Orthogonal), opts)
}

pub fn fine_gradings(family: Family, n: usize, opts: &Options) -> Result<Enumeration> {
    match family {
        Family::Sl => fine_gradings_sl(n, opts),
        Family::So => fine_gradings_so(n, opts),
        Family::Sp => fine_gradings_sp(n, opts),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn groups(e: &Enumeration) -> Vec<String> {
        let mut v: Vec<String> = e.classes.iter().map(|c| c.report.group.clone()).collect();
        v.sort();
        v
    }

    #[test]
    fn abelian_group_counts() {
        assert_eq!(abelian_groups(1), vec![Vec::<i64>::new()]);
        assert_eq!(abelian_groups(8).len(), 3);
        assert_eq!(abelian_groups(16).len(), 5);
        assert_eq!(abelian_groups(12).len(), 2);
    }

    #[test]
    fn small_sl() {
        let e = fine_gradings_sl(2, &Options::default()).unwrap();
        assert_eq!(e.count(), 2);
        let e = fine_gradings_sl(3, &Options::default()).unwrap();
        assert_eq!(e.count(), 4);
        assert!(e.classes.iter().all(|c| c.report.verified));
    }

    #[test]
    fn small_so() {
        let e = fine_gradings_so(5, &Options::default()).unwrap();
        assert_eq!(e.count(), 3);
        assert_eq!(e.count_tag(), "verified count");
        assert!(matches!(fine_gradings_so(6, &Options::default()), Err(Error::Unsupported(_))));
        assert!(matches!(fine_gradings_so(8, &Options::default()), Err(Error::Unsupported(_))));
        assert!(fine_gradings_sp(5, &Options::default()).is_err());
        assert!(fine_gradings_sl(1, &Options::default()).is_err());
    }

    #[test]
    fn sp8_groups() {
        let e = fine_gradings_sp(8, &Options::default()).unwrap();
        eprintln!("{:?}", groups(&e));
        assert_eq!(e.count(), 7);
    }
}
