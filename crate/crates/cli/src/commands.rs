//! The subcommands. Each returns a human-readable report, JSON records and
//! whether a hard assertion failed.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use detres_core::chern::{chern_closed_form, chern_from_sequence, exclude_cases};
use detres_core::complex::{build_d, canonical_twist, hilbert_from_resolution, minimize};
use detres_core::cone::{
    cone_exactness, diagram_a, ext1_resolution, five_identities, triple_cone, ulrich_certificate,
    ConeOptions,
};
use detres_core::det::DetScheme;
use detres_core::strand::{
    conjecture_scan, depth_j_gate, done_keys, hyperplane_restrict, simplicity_check,
    symmetry_suite, vanishing_suite, ScanGrid, ScanMode, ScanOptions, ScanStatus,
};
use detres_core::Fp;
use serde_json::{json, Value};

use crate::config::Config;
use crate::fixtures::{select, Fixture};
use crate::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Resolved global settings.
#[derive(Clone, Debug)]
pub struct Context {
    pub cfg: Config,
    pub prime: u32,
    pub seed: u64,
    pub bound: Option<i32>,
    pub out: Option<PathBuf>,
}

impl Context {
    pub fn new(cfg: Config) -> Result<Self, CliError> {
        Ok(Context {
            prime: cfg.parsed("prime")?.unwrap_or(32003),
            seed: cfg.parsed("seed")?.unwrap_or(1),
            bound: cfg.parsed("bound")?,
            out: cfg.get("out").map(PathBuf::from),
            cfg,
        })
    }

    pub fn field(&self) -> Result<Fp, CliError> {
        Ok(Fp::new(self.prime)?)
    }

    /// The common header of every record.
    fn envelope(
        &self,
        command: &str,
        bound: Value,
        result: Value,
        timing: &BTreeMap<String, u64>,
    ) -> Value {
        json!({
            "tool": "detres",
            "version": VERSION,
            "command": command,
            "seed": self.seed,
            "prime": self.prime,
            "bound": bound,
            "result": result,
            "timing": timing,
        })
    }
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub text: String,
    pub records: Vec<Value>,
    pub failed: bool,
}

impl Outcome {
    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }
}

fn ms(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

/// Degree of the scheme from the Hilbert numerator `N(z)`:
/// `N(z) = (1 - z)^c h(z)` and the degree is `h(1)`.
pub fn multiplicity(numerator: &BTreeMap<i32, i64>, c: usize) -> Option<i64> {
    let lo = *numerator.keys().next()?;
    let hi = *numerator.keys().last()?;
    let mut coeffs: Vec<i64> = (lo..=hi)
        .map(|k| numerator.get(&k).copied().unwrap_or(0))
        .collect();
    for _ in 0..c {
        // Divide by (1 - z): h_k = sum_{j <= k} N_j, remainder must vanish.
        let mut acc = 0;
        let mut q = Vec::with_capacity(coeffs.len());
        for &x in &coeffs {
            acc += x;
            q.push(acc);
        }
        if q.pop() != Some(0) {
            return None;
        }
        coeffs = q;
    }
    Some(coeffs.iter().sum())
}

fn scheme_json(s: &DetScheme<Fp>) -> Value {
    json!({
        "t": s.t(), "c": s.c(), "n": s.n(),
        "column_degrees": s.degrees.a, "row_degrees": s.degrees.b,
        "entries": (0..s.t()).map(|i| (0..s.ncols()).map(|j| s.entry(i, j).render()).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

fn scheme_of(ctx: &Context) -> Result<(Fixture, DetScheme<Fp>), CliError> {
    let fx = select(&ctx.cfg)?;
    let s = fx.scheme(&ctx.field()?, ctx.seed)?;
    Ok((fx, s))
}

/// Minors, Betti tables of `D_i` and Hilbert data of `A`.
pub fn build(ctx: &Context) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let (fx, s) = scheme_of(ctx)?;
    let c = s.c();
    let mut out = Outcome::default();
    out.line(format!(
        "scheme {}: t = {}, c = {c}, n = {}",
        fx.name,
        s.t(),
        s.n()
    ));
    let minors: Vec<String> = s.minors.iter().map(|p| p.render()).collect();
    out.line(format!("minors ({}):", minors.len()));
    for m in &minors {
        out.line(format!("  {m}"));
    }
    let mut tables = Vec::new();
    let mut max_twist_dc = 0;
    for i in -1..=c as i32 {
        let cx = minimize(&build_d(i, &s.phi)?);
        if i == c as i32 {
            max_twist_dc = cx
                .terms()
                .iter()
                .flat_map(|t| t.twists.iter().copied())
                .max()
                .unwrap_or(0);
        }
        let b = cx.betti();
        out.line(format!("D_{i}:"));
        out.line(b.render());
        tables.push(json!({ "i": i, "betti": b.to_json() }));
    }
    let bound = ctx.bound.unwrap_or(2 * max_twist_dc + c as i32);
    let res = minimize(&build_d(0, &s.phi)?);
    let hd = hilbert_from_resolution(&res, s.n(), bound);
    let degree = multiplicity(&hd.numerator, c);
    out.line(format!(
        "Hilbert function of A through degree {bound}: {:?}",
        hd.values
            .iter()
            .filter(|v| v.0 >= 0)
            .map(|v| v.1)
            .collect::<Vec<_>>()
    ));
    if let Some(d) = degree {
        out.line(format!("degree {d}"));
    }
    let v = canonical_twist(&s.phi)?;
    out.line(format!("canonical module: K_A({v}) = S_{}M", c as i32 - 1));
    let mut timing = BTreeMap::new();
    timing.insert("total".to_string(), ms(start));
    let result = json!({
        "fixture": fx.name,
        "scheme": scheme_json(&s),
        "minors": minors,
        "d_complexes": tables,
        "hilbert": { "numerator": hd.numerator, "values": hd.values, "degree": degree },
        "canonical_twist": v,
    });
    out.records
        .push(ctx.envelope("build", json!(bound), result, &timing));
    Ok(out)
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

/// Identities, cones, the Ulrich certificate, simplicity and vanishing.
pub fn verify(ctx: &Context) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let (fx, s) = scheme_of(ctx)?;
    let c = s.c();
    let points: usize = ctx.cfg.parsed("cone_points")?.unwrap_or(10);
    let width = ctx.bound.map(|b| b.max(1) as usize).unwrap_or(c + 3);
    let mut out = Outcome::default();
    let mut result = serde_json::Map::new();
    let mut timing = BTreeMap::new();
    out.line(format!(
        "verify {}: t = {}, c = {c}, n = {}",
        fx.name,
        s.t(),
        s.n()
    ));
    result.insert("fixture".into(), json!(fx.name));
    result.insert("scheme".into(), scheme_json(&s));

    if c >= 2 {
        let t0 = Instant::now();
        let ids = five_identities(&s.phi)?;
        for id in &ids {
            out.line(format!("  identity {}: {}", id.name, verdict(id.holds)));
            out.failed |= !id.holds;
        }
        result.insert(
            "identities".into(),
            serde_json::to_value(&ids).map_err(CliError::json)?,
        );
        let mut cones = Vec::new();
        for i in 0..=c {
            let input = diagram_a(&s.phi, i, ConeOptions::default())?;
            let cone = triple_cone(&input)?;
            let d2 = cone.check_d2().is_ok();
            let ex = cone_exactness(&cone, points, ctx.seed);
            let pass = d2 && ex.passed();
            out.line(format!(
                "  cone i = {i}: d^2 = 0 {}, exactness {} ({})",
                verdict(d2),
                verdict(ex.passed()),
                ex.label()
            ));
            out.failed |= !pass;
            cones.push(json!({ "i": i, "d_squared_zero": d2, "exact": ex.passed(), "betti": cone.betti().to_json() }));
        }
        result.insert("cones".into(), json!(cones));
        timing.insert("cones".into(), ms(t0));
    } else {
        out.line("  identities and cones: not applicable for c < 2");
    }

    if s.degrees.is_linear() && c >= 2 {
        let t0 = Instant::now();
        let u = ulrich_certificate(&s.phi)?;
        for item in &u.items {
            out.line(format!(
                "  ulrich {}: expected {}, found {}: {}",
                item.name,
                item.expected,
                item.found,
                verdict(item.pass)
            ));
        }
        out.failed |= !u.passed();
        result.insert(
            "ulrich".into(),
            serde_json::to_value(&u).map_err(CliError::json)?,
        );
        timing.insert("ulrich".into(), ms(t0));
    }

    if s.t() >= 2 {
        let t0 = Instant::now();
        let simp = simplicity_check(&s.phi)?;
        out.line(format!(
            "  simplicity: n1 = {:?}, n2 = {:?}, gate {}, dim 0Hom(I/I^2, I/I^2) = {}",
            simp.n1,
            simp.n2,
            if simp.gate_passes { "passes" } else { "fails" },
            simp.endo_dim
        ));
        let mut expectation = Vec::new();
        if let Some(g) = fx.expect.gate {
            let ok = g == simp.gate_passes;
            out.line(format!(
                "    expected gate {}: {}",
                if g { "pass" } else { "failure" },
                verdict(ok)
            ));
            out.failed |= !ok;
            expectation.push(json!({ "gate": g, "matches": ok }));
        }
        if let Some(e) = fx.expect.simple {
            let ok = e == simp.simple;
            out.line(format!(
                "    expected {}: {}",
                if e { "simple" } else { "not simple" },
                verdict(ok)
            ));
            out.failed |= !ok;
            expectation.push(json!({ "simple": e, "matches": ok }));
        }
        result.insert(
            "simplicity".into(),
            json!({ "report": simp, "expectations": expectation }),
        );
        timing.insert("simplicity".into(), ms(t0));

        let t0 = Instant::now();
        let gate = depth_j_gate(&s, ctx.seed)?;
        let van = vanishing_suite(&s, &gate, width)?;
        for v in &van {
            let state = match v.holds {
                None => "gate failed, not applicable".to_string(),
                Some(h) => verdict(h).to_string(),
            };
            out.line(format!(
                "  vanishing {} (depth_J A >= {}): {state}",
                v.claim, v.gate_required
            ));
            out.failed |= v.holds == Some(false);
        }
        result.insert(
            "depth_j".into(),
            serde_json::to_value(&gate).map_err(CliError::json)?,
        );
        result.insert(
            "vanishing".into(),
            serde_json::to_value(&van).map_err(CliError::json)?,
        );
        timing.insert("vanishing".into(), ms(t0));

        let t0 = Instant::now();
        let sym = symmetry_suite(&s, &[0, 1], width)?;
        for ch in &sym {
            let shift = ch
                .shift
                .map_or("both zero".to_string(), |v| format!("shift {v}"));
            out.line(format!(
                "  symmetry {} ({shift}): {}",
                ch.claim,
                verdict(ch.holds)
            ));
            out.failed |= !ch.holds;
        }
        result.insert(
            "symmetry".into(),
            serde_json::to_value(&sym).map_err(CliError::json)?,
        );
        timing.insert("symmetry".into(), ms(t0));
    }
    timing.insert("total".into(), ms(start));
    out.line(format!(
        "verdict: {}",
        if out.failed { "FAIL" } else { "pass" }
    ));
    result.insert("failed".into(), json!(out.failed));
    out.records
        .push(ctx.envelope("verify", json!(width), Value::Object(result), &timing));
    Ok(out)
}

/// Chern classes of the normal sequence and the four excluded extensions.
pub fn chern(ctx: &Context) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let ts = ctx
        .cfg
        .list("chern_t")?
        .unwrap_or_else(|| (2..=10).collect());
    let mut out = Outcome::default();
    let mut reports = Vec::new();
    for &t in &ts {
        let t = u32::try_from(t).map_err(|_| CliError::Usage(format!("t = {t} out of range")))?;
        let seq = chern_from_sequence(t)?;
        let closed = seq == chern_closed_form(t);
        let ex = exclude_cases(t)?;
        out.line(format!(
            "t = {t}: c1 = {}, c2 = {}, closed form {}",
            seq.c1,
            seq.c2,
            verdict(closed)
        ));
        for case in &ex.cases {
            let show = |label: &str, ms: &[detres_core::chern::Mismatch]| {
                ms.iter()
                    .map(|m| format!("{label} at {}: {} vs {}", m.monomial, m.got, m.expected))
                    .collect::<Vec<_>>()
            };
            let mut parts = show("c1", &case.c1_mismatch);
            parts.extend(show("c2", &case.c2_mismatch));
            let why = if parts.is_empty() {
                "not excluded".to_string()
            } else {
                format!("differs: {}", parts.join("; "))
            };
            out.line(format!("  case {}: {why}", case.index));
        }
        out.failed |= !closed || !ex.all_excluded;
        reports.push(json!({ "t": t, "closed_form_matches": closed, "exclusion": ex }));
    }
    let mut timing = BTreeMap::new();
    timing.insert("total".into(), ms(start));
    out.records
        .push(ctx.envelope("chern", Value::Null, json!(reports), &timing));
    Ok(out)
}

/// Restriction to a general hyperplane with the Betti tables of the
/// resolutions of `Ext^1(M, S_i M)` before and after.
pub fn restrict(ctx: &Context) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let (fx, s) = scheme_of(ctx)?;
    let r = hyperplane_restrict(&s, ctx.seed)?;
    let c = s.c();
    let mut out = Outcome::default();
    out.line(format!(
        "restrict {}: P^{} -> P^{} ({} samples rejected)",
        fx.name,
        s.n(),
        r.scheme.n(),
        r.resampled
    ));
    for i in 0..r.scheme.t() {
        let row: Vec<String> = (0..r.scheme.ncols())
            .map(|j| r.scheme.entry(i, j).render())
            .collect();
        out.line(format!("  [{}]", row.join(", ")));
    }
    let gate = if s.t() >= 2 {
        Some(depth_j_gate(&s, ctx.seed)?)
    } else {
        None
    };
    let gated = gate.as_ref().is_some_and(|g| g.at_least(3));
    let mut tables = Vec::new();
    if c >= 2 {
        for i in 0..=c {
            let before = ext1_resolution(&s.phi, i, ConeOptions::default())?
                .1
                .betti();
            let after = ext1_resolution(&r.scheme.phi, i, ConeOptions::default())?
                .1
                .betti();
            let same = before == after;
            out.line(format!(
                "  Ext^1(M, S_{i}M) Betti tables {}{}",
                if same { "agree" } else { "differ" },
                if gated {
                    ""
                } else {
                    " (depth_J A >= 3 not sampled; informational)"
                }
            ));
            out.failed |= gated && !same;
            tables.push(json!({ "i": i, "before": before.to_json(), "after": after.to_json(), "agree": same }));
        }
    }
    let mut timing = BTreeMap::new();
    timing.insert("total".into(), ms(start));
    let result = json!({
        "fixture": fx.name,
        "summary": r.summary(),
        "restricted": scheme_json(&r.scheme),
        "depth_j": gate,
        "gated": gated,
        "ext1_betti": tables,
    });
    out.records
        .push(ctx.envelope("restrict", Value::Null, result, &timing));
    Ok(out)
}

/// Resumable conjecture scan; records are appended to `out` (default
/// `scan.jsonl`) one per line.
pub fn scan(ctx: &Context) -> Result<Outcome, CliError> {
    let cfg = &ctx.cfg;
    let as_usize = |v: Vec<u64>| v.into_iter().map(|x| x as usize).collect::<Vec<_>>();
    let grid = ScanGrid {
        t: as_usize(cfg.list("scan_t")?.unwrap_or_else(|| (1..=3).collect())),
        c: as_usize(cfg.list("scan_c")?.unwrap_or_else(|| (1..=3).collect())),
        n: as_usize(cfg.list("scan_n")?.unwrap_or_default()),
        a: as_usize(cfg.list("scan_a")?.unwrap_or_else(|| vec![0, 1])),
        linear_only: cfg.flag("linear_only")?.unwrap_or(true),
        seeds: cfg.list("scan_seeds")?.unwrap_or_else(|| vec![ctx.seed]),
    };
    let opts = ScanOptions {
        prime: ctx.prime,
        window_extra: ctx.bound.map(|b| b.max(0) as usize).unwrap_or(0),
        ..ScanOptions::default()
    };
    let path = ctx
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("scan.jsonl"));
    let existing = match std::fs::read_to_string(&path) {
        Ok(s) => s,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => String::new(),
        Err(e) => return Err(CliError::Io(format!("{}: {e}", path.display()))),
    };
    let done = done_keys(&existing);
    let mut file = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(&path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut out = Outcome::default();
    let mut lines = Vec::new();
    let mut bad = false;
    let written = conjecture_scan(&grid, &opts, &done, &mut |r| {
        let line = serde_json::to_string(r)
            .map_err(|e| detres_core::Error::InvalidInput(e.to_string()))?;
        writeln!(file, "{line}")
            .and_then(|_| file.flush())
            .map_err(|e| detres_core::Error::ResourceLimit(format!("write failed: {e}")))?;
        let u = &r.unit;
        lines.push(format!(
            "t={} c={} n={} a={} {}: {:?} ({:?}), rank {}",
            u.t,
            u.c,
            u.n,
            u.a,
            if u.linear { "linear" } else { "mixed" },
            r.status,
            r.mode,
            r.rank.as_deref().unwrap_or("?")
        ));
        bad |= r.mode == ScanMode::Verification && u.a <= 1 && r.status == ScanStatus::Inconsistent;
        Ok(())
    })?;
    for l in lines {
        out.line(l);
    }
    out.line(format!(
        "{written} new records, {} already present, log {}",
        grid.units().len() - written,
        path.display()
    ));
    out.failed = bad;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplicity_of_twisted_cubic() {
        let num: BTreeMap<i32, i64> = [(0, 1), (2, -3), (3, 2)].into_iter().collect();
        assert_eq!(multiplicity(&num, 2), Some(3));
        assert_eq!(multiplicity(&num, 3), None);
    }
}
