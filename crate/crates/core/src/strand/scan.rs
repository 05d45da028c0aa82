//! Experimental scan of `E_a = Ext^a_R(S_a M, S_{c-a} M)` over a grid of
//! generic determinantal schemes: Hilbert function, operational rank, maximal
//! Cohen-Macaulay and Ulrich evidence. Records are evidence, never proofs.

use std::collections::{BTreeMap, HashSet};
use std::time::Instant;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{build_d, hilbert_from_betti, minimize, ChainComplex};
use crate::cone::{ext1_resolution, ConeOptions};
use crate::det::{DegreeMatrix, DetScheme};
use crate::error::{Error, Result};
use crate::field::{Field, Fp};
use crate::graded::GradedFreeModule;
use crate::poly::binomial;
use crate::strand::detmod::{d_module, quotient_ring};
use crate::strand::gate::{depth_j_gate, DepthJGate};
use crate::strand::hilbert::{fit_hilbert_polynomial, rank_estimate, HilbertFit};
use crate::strand::hom::ext_strand;

/// Instances `(t, c, n)` and exponents `a` to scan. An empty `n` list means
/// `n = c + 3`, the smallest `n` with generic `depth_J A >= 4`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanGrid {
    pub t: Vec<usize>,
    pub c: Vec<usize>,
    pub n: Vec<usize>,
    pub a: Vec<usize>,
    /// Only linear matrices; otherwise each shape also gets a matrix whose
    /// last column has degree 2.
    pub linear_only: bool,
    pub seeds: Vec<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanOptions {
    pub prime: u32,
    /// Hilbert values beyond the minimum needed for a fit.
    pub window_extra: usize,
    /// Degrees scanned looking for the first nonzero piece.
    pub max_lead: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            prime: 32003,
            window_extra: 0,
            max_lead: 12,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanMode {
    /// `a <= c/2` and the sampled gate `depth_J A >= 2a + 2` holds.
    Verification,
    /// Outside the gated range; recorded separately.
    Exploration,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanStatus {
    Consistent,
    Inconsistent,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanCheck {
    pub name: String,
    pub expected: String,
    pub found: String,
    pub verdict: Verdict,
}

/// The shape of one scanned instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanUnit {
    pub t: usize,
    pub c: usize,
    pub n: usize,
    pub a: usize,
    pub linear: bool,
    pub seed: u64,
}

impl ScanUnit {
    pub fn degrees(&self) -> Result<DegreeMatrix> {
        if self.linear {
            DegreeMatrix::linear(self.t, self.c, self.n)
        } else {
            let mut a = vec![1; self.t + self.c - 1];
            if let Some(last) = a.last_mut() {
                *last = 2;
            }
            DegreeMatrix::new(self.t, self.c, self.n, a, vec![0; self.t])?.with_positive_entries()
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub key: String,
    pub version: String,
    pub unit: ScanUnit,
    pub prime: u64,
    /// Number of Hilbert values examined past the first nonzero degree.
    pub bound: usize,
    pub gate: DepthJGate,
    pub gate_required: i64,
    pub mode: ScanMode,
    pub first_degree: Option<i32>,
    pub hilbert: Vec<(i32, i64)>,
    pub fit: Option<HilbertFit>,
    pub ring_fit: Option<HilbertFit>,
    pub rank: Option<String>,
    pub rank_target: u64,
    pub checks: Vec<ScanCheck>,
    pub status: ScanStatus,
    pub note: Option<String>,
    /// Wall-clock milliseconds per phase; not part of the reproducible data.
    pub timing: BTreeMap<String, u64>,
}

pub fn unit_key(u: &ScanUnit, opts: &ScanOptions) -> String {
    format!(
        "t{}-c{}-n{}-a{}-{}-seed{}-p{}-w{}",
        u.t,
        u.c,
        u.n,
        u.a,
        if u.linear { "linear" } else { "mixed" },
        u.seed,
        opts.prime,
        opts.window_extra
    )
}

impl ScanGrid {
    pub fn units(&self) -> Vec<ScanUnit> {
        let mut out = Vec::new();
        for &t in &self.t {
            for &c in &self.c {
                let ns = if self.n.is_empty() {
                    vec![c + 3]
                } else {
                    self.n.clone()
                };
                for &n in &ns {
                    if n < c || t == 0 || c == 0 {
                        continue;
                    }
                    let kinds: &[bool] = if self.linear_only {
                        &[true]
                    } else {
                        &[true, false]
                    };
                    for &linear in kinds {
                        for &seed in &self.seeds {
                            for &a in self.a.iter().filter(|&&a| a <= c) {
                                out.push(ScanUnit {
                                    t,
                                    c,
                                    n,
                                    a,
                                    linear,
                                    seed,
                                });
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// Keys of the records already present in a JSON-lines log.
pub fn done_keys(jsonl: &str) -> HashSet<String> {
    jsonl
        .lines()
        .filter_map(|l| serde_json::from_str::<serde_json::Value>(l).ok())
        .filter_map(|v| v.get("key").and_then(|k| k.as_str()).map(str::to_string))
        .collect()
}

/// Scans every unit of `grid` whose key is not in `done`, handing each
/// record to `emit` as soon as it is complete.
pub fn conjecture_scan(
    grid: &ScanGrid,
    opts: &ScanOptions,
    done: &HashSet<String>,
    emit: &mut dyn FnMut(&ConjectureReport) -> Result<()>,
) -> Result<usize> {
    let field = Fp::new(opts.prime)?;
    let mut count = 0;
    for u in grid.units() {
        let key = unit_key(&u, opts);
        if done.contains(&key) {
            continue;
        }
        let report = scan_unit(&field, &u, opts)?;
        emit(&report)?;
        count += 1;
    }
    Ok(count)
}

fn check(name: &str, expected: impl ToString, found: impl ToString, pass: bool) -> ScanCheck {
    ScanCheck {
        name: name.to_string(),
        expected: expected.to_string(),
        found: found.to_string(),
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
    }
}

fn not_applicable(name: &str, why: &str) -> ScanCheck {
    ScanCheck {
        name: name.to_string(),
        expected: String::new(),
        found: why.to_string(),
        verdict: Verdict::NotApplicable,
    }
}

fn ms(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

/// A minimal free resolution of `E_a` over `R` for `a <= 1`, positioned from 0.
fn ext_resolution<F: Field>(s: &DetScheme<F>, a: usize) -> Result<ChainComplex<F>> {
    let c = s.c();
    let cx = match a {
        0 => minimize(&build_d(c as i32, &s.phi)?).trimmed(),
        1 => {
            ext1_resolution(&s.phi, c - 1, ConeOptions::default())?
                .1
                .complex
        }
        _ => {
            return Err(Error::InvalidInput(format!(
                "no closed resolution of E_{a}"
            )))
        }
    };
    Ok(cx.reindexed(0))
}

/// Verification iff `2a <= c` and the sampled `depth_J A >= 2a + 2`.
pub fn scan_mode(c: usize, a: usize, gate: &DepthJGate) -> ScanMode {
    if 2 * a <= c && gate.at_least(2 * a as i64 + 2) {
        ScanMode::Verification
    } else {
        ScanMode::Exploration
    }
}

/// Scans one unit.
pub fn scan_unit<F: Field>(
    field: &F,
    u: &ScanUnit,
    opts: &ScanOptions,
) -> Result<ConjectureReport> {
    let start = Instant::now();
    let mut timing = BTreeMap::new();
    let s = DetScheme::generic(field, u.degrees()?, u.seed)?;
    let (t, c, a) = (u.t, u.c, u.a);
    let gate = depth_j_gate(&s, u.seed ^ 0x5eed)?;
    let gate_required = 2 * a as i64 + 2;
    let mode = scan_mode(c, a, &gate);
    timing.insert("gate".into(), ms(start));

    // Hilbert function of E_a, from the first nonzero degree on.
    let t0 = Instant::now();
    let ring = quotient_ring(&s.phi)?;
    let target = d_module(&s.phi, (c - a) as i32, ring.clone())?;
    let da = build_d(a as i32, &s.phi)?;
    let dim_a = s.nvars() - c;
    let width = dim_a + 2 + opts.window_extra;
    let top = |g: &GradedFreeModule| g.twists.iter().copied().max().unwrap_or(0);
    let floor = target.min_degree().unwrap_or(0) - top(&da.term(a as i32));
    // Ext^0_R(A, N) = N for an A-module N.
    let strand = |e: i32| -> Result<usize> {
        if a == 0 {
            Ok(target.dim(e))
        } else {
            ext_strand(&da, &target, a as i32, e)
        }
    };
    let mut first = None;
    for e in floor..floor + opts.max_lead as i32 {
        if strand(e)? > 0 {
            first = Some(e);
            break;
        }
    }
    let mut report = ConjectureReport {
        key: unit_key(u, opts),
        version: env!("CARGO_PKG_VERSION").to_string(),
        unit: u.clone(),
        prime: field.characteristic(),
        bound: width,
        gate,
        gate_required,
        mode,
        first_degree: first,
        hilbert: vec![],
        fit: None,
        ring_fit: None,
        rank: None,
        rank_target: binomial(c as u64, a as u64),
        checks: vec![],
        status: ScanStatus::Inconclusive,
        note: None,
        timing: BTreeMap::new(),
    };
    let Some(e0) = first else {
        report.note = Some(format!(
            "no nonzero piece in degrees {floor}..{}",
            floor + opts.max_lead as i32
        ));
        report.timing = timing;
        return Ok(report);
    };
    let hilbert: Vec<(i32, i64)> = (e0..e0 + width as i32)
        .into_par_iter()
        .map(|e| strand(e).map(|d| (e, d as i64)))
        .collect::<Result<_>>()?;
    timing.insert("hilbert".into(), ms(t0));
    report.hilbert = hilbert.clone();

    // Rank against A, read off fitted Hilbert polynomials.
    // The Hilbert function of A agrees with its polynomial past the
    // a-invariant; slide the window up until a fit is found.
    let ring_fit = (0..=opts.max_lead as i32)
        .map(|lo| {
            let vals: Vec<(i32, i64)> = (lo..lo + width as i32)
                .map(|d| (d, ring.dim(d) as i64))
                .collect();
            fit_hilbert_polynomial(&vals)
        })
        .find(|f| f.as_ref().is_ok_and(|f| f.degree + 1 == dim_a))
        .unwrap_or_else(|| {
            Err(Error::Truncation(
                "no window fits the Hilbert polynomial of A".into(),
            ))
        });
    let fits = (fit_hilbert_polynomial(&hilbert), ring_fit);
    let mut checks = Vec::new();
    match fits {
        (Ok(fe), Ok(fa)) => {
            let rank = rank_estimate(&fe, &fa);
            let target_rank = Ratio::from_integer(report.rank_target as i64);
            checks.push(check(
                "rank",
                report.rank_target,
                rank.map_or("undefined".into(), |r| r.to_string()),
                rank == Some(target_rank),
            ));
            report.rank = rank.map(|r| r.to_string());
            report.fit = Some(fe);
            report.ring_fit = Some(fa);
        }
        (Err(e), _) | (_, Err(e)) => {
            report.note = Some(e.to_string());
        }
    }

    // Maximal Cohen-Macaulay evidence and the Hilbert function bridge.
    let linear = s.degrees.is_linear();
    let initial = binomial(c as u64, a as u64) * binomial((t + c - 1) as u64, c as u64);
    let mut pure_linear = None;
    if a <= 1 && c >= 1 && !(a == 1 && c < 2 && t < 2) {
        let t1 = Instant::now();
        match ext_resolution(&s, a) {
            Ok(cx) => {
                let length = if cx.is_zero() { 0 } else { cx.hi() - cx.lo() };
                checks.push(check("resolution length", c, length, length == c as i32));
                let hd = hilbert_from_betti(&cx.betti(), s.nvars(), e0 + width as i32);
                let agree = hilbert.iter().all(|&(e, v)| hd.value(e) == v);
                checks.push(check(
                    "Hilbert function of the resolution",
                    "equal to the Ext strands",
                    if agree { "equal" } else { "different" },
                    agree,
                ));
                pure_linear = Some(cx.betti().is_pure_linear(e0));
            }
            Err(e) => checks.push(not_applicable("resolution length", &e.to_string())),
        }
        timing.insert("resolution".into(), ms(t1));
    } else {
        checks.push(not_applicable(
            "resolution length",
            "no closed resolution for a >= 2",
        ));
    }

    // Ulrich evidence in the linear case.
    if linear {
        let init = hilbert[0].1;
        checks.push(check(
            "initial piece",
            initial,
            init,
            init == initial as i64,
        ));
        let d = dim_a as i64;
        let shape = hilbert
            .iter()
            .enumerate()
            .all(|(k, &(_, v))| v == init * crate::poly::binomial_i(k as i64 + d - 1, d - 1));
        checks.push(check(
            "Hilbert series init/(1-z)^dim A",
            "equal",
            if shape { "equal" } else { "different" },
            shape,
        ));
        if let Some(p) = pure_linear {
            checks.push(check("pure linear resolution", true, p, p));
        }
    } else {
        checks.push(not_applicable("initial piece", "not linear"));
    }

    report.status = if checks.iter().any(|x| x.verdict == Verdict::Fail) {
        ScanStatus::Inconsistent
    } else if report.fit.is_none() {
        ScanStatus::Inconclusive
    } else {
        ScanStatus::Consistent
    };
    report.checks = checks;
    timing.insert("total".into(), ms(start));
    report.timing = timing;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(t: usize, c: usize, n: usize, a: usize) -> ScanUnit {
        ScanUnit {
            t,
            c,
            n,
            a,
            linear: true,
            seed: 1,
        }
    }

    #[test]
    fn twisted_cubic_family_is_consistent() {
        let f = Fp::default_prime();
        let opts = ScanOptions::default();
        for a in 0..=1 {
            let r = scan_unit(&f, &unit(2, 2, 5, a), &opts).unwrap();
            assert_eq!(r.status, ScanStatus::Consistent, "{r:#?}");
            assert_eq!(r.mode, ScanMode::Verification);
            assert_eq!(r.rank.as_deref(), Some(if a == 0 { "1" } else { "2" }));
        }
    }

    #[test]
    fn ungated_units_are_exploration() {
        let f = Fp::default_prime();
        let r = scan_unit(&f, &unit(2, 2, 3, 1), &ScanOptions::default()).unwrap();
        assert_eq!(r.mode, ScanMode::Exploration);
    }

    #[test]
    fn codimension_four_second_module_is_exploration() {
        let f = Fp::default_prime();
        let u = unit(2, 4, 7, 2);
        let s = DetScheme::generic(&f, u.degrees().unwrap(), u.seed).unwrap();
        let gate = depth_j_gate(&s, 9).unwrap();
        assert_eq!(gate.sampled, 4);
        assert_eq!(scan_mode(4, 2, &gate), ScanMode::Exploration);
        assert_eq!(scan_mode(4, 1, &gate), ScanMode::Verification);
    }

    #[test]
    fn grid_and_resume() {
        let grid = ScanGrid {
            t: vec![2],
            c: vec![2],
            n: vec![],
            a: vec![0, 1, 3],
            linear_only: true,
            seeds: vec![4],
        };
        assert_eq!(grid.units().len(), 2);
        let opts = ScanOptions::default();
        let key = unit_key(&grid.units()[0], &opts);
        let log = format!("{}\n", serde_json::json!({ "key": key }));
        let done = done_keys(&log);
        let mut seen = Vec::new();
        let n = conjecture_scan(&grid, &opts, &done, &mut |r| {
            seen.push(r.key.clone());
            Ok(())
        })
        .unwrap();
        assert_eq!(n, 1);
        assert_ne!(seen[0], key);
    }
}
