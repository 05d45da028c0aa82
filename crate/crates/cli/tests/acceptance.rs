//! End-to-end acceptance criteria, run in order with per-criterion budgets.
//! Each criterion prints one PASS/FAIL line; the test fails if any does.

use std::collections::{HashMap, HashSet};
use std::time::{Duration, Instant};

use detres::fixtures;
use detres_core::chern::{chern_closed_form, chern_from_sequence, exclude_cases};
use detres_core::complex::{build_d, hilbert_from_resolution, minimize};
use detres_core::cone::{
    cone_exactness, diagram_a, ext1_resolution, five_identities, ulrich_certificate, ConeOptions,
};
use detres_core::det::{DegreeMatrix, DetScheme};
use detres_core::poly::{binomial, monomials};
use detres_core::strand::detmod::{d_module, quotient_ring};
use detres_core::strand::resolution::{truncated_min_resolution, ResolutionOptions, ResolveSource};
use detres_core::strand::{
    conjecture_scan, conormal_bounds, conormal_depth, depth_j_gate, done_keys, hyperplane_restrict,
    iso_suite, simplicity_check, vanishing_suite, Ring, ScanGrid, ScanOptions, ScanStatus,
};
use detres_core::{Field, Fp, Poly};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

struct Harness {
    lines: Vec<String>,
    failed: usize,
}

impl Harness {
    fn run(&mut self, id: &str, budget: Duration, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let res = f();
        let took = start.elapsed();
        let (ok, detail) = match res {
            Ok(d) if took <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over budget {budget:?}")),
            Err(e) => (false, e),
        };
        let line = format!(
            "{id}: {} ({:.1}s) {detail}",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
        println!("{line}");
        self.failed += usize::from(!ok);
        self.lines.push(line);
    }
}

/// Generic instance with every entry linear, or with the last `heavy`
/// columns quadratic.
fn instance(f: &Fp, t: usize, c: usize, n: usize, heavy: usize, seed: u64) -> DetScheme<Fp> {
    let m = t + c - 1;
    let dm = if heavy == 0 {
        DegreeMatrix::linear(t, c, n).unwrap()
    } else {
        let row: Vec<i32> = (0..m).map(|j| if j + heavy >= m { 2 } else { 1 }).collect();
        DegreeMatrix::from_entry_degrees(n, &vec![row; t]).unwrap()
    };
    DetScheme::generic(f, dm, seed).unwrap()
}

/// Twenty instances over t in {2,3}, c in {2,3,4}, linear and mixed, each
/// with the diagram index it exercises.
fn cone_instances(f: &Fp) -> Vec<(String, DetScheme<Fp>, usize)> {
    let mut out = Vec::new();
    let mut k = 0u64;
    for round in 0..2 {
        for t in [2usize, 3] {
            for c in [2usize, 3, 4] {
                for heavy in [0usize, 1 + round] {
                    if out.len() == 20 {
                        return out;
                    }
                    k += 1;
                    let n = c + 1;
                    let i = (k as usize) % (c + 1);
                    let s = instance(f, t, c, n, heavy.min(t + c - 2), 100 + k);
                    out.push((format!("t{t}c{c}h{heavy}i{i}"), s, i));
                }
            }
        }
    }
    out
}

/// Rank of `vectors` over F_p by dense elimination.
fn rank_mod_p(p: u64, mut rows: Vec<Vec<u64>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = modpow(rows[rank][col], p - 2, p);
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let m = rows[r][col];
                for j in 0..ncols {
                    rows[r][j] = (rows[r][j] + p - m * rows[rank][j] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn modpow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// `dim (R/I)_d` by counting monomials and the span of `monomial * generator`.
fn brute_hilbert(f: &Fp, nvars: usize, gens: &[Poly<Fp>], d: i32) -> usize {
    let basis = monomials(nvars, d as u32);
    let index: HashMap<_, _> = basis
        .iter()
        .enumerate()
        .map(|(k, m)| (m.clone(), k))
        .collect();
    let mut rows = Vec::new();
    for g in gens {
        let gd = g.degree().unwrap() as i32;
        if gd > d {
            continue;
        }
        for m in monomials(nvars, (d - gd) as u32) {
            let mut row = vec![0u64; basis.len()];
            for (mono, c) in g.terms() {
                row[index[&mono.mul(&m)]] = u64::from(*c);
            }
            rows.push(row);
        }
    }
    basis.len() - rank_mod_p(u64::from(f.characteristic()), rows)
}

#[test]
fn acceptance() {
    let f = Fp::default_prime();
    let mut h = Harness {
        lines: Vec::new(),
        failed: 0,
    };
    let instances = cone_instances(&f);

    h.run("AC1 diagram identities", Duration::from_secs(60), || {
        for (name, s, i) in &instances {
            let checks = five_identities(&s.phi).map_err(e2s)?;
            ensure(checks.len() == 5, || {
                format!("{name}: {} identities", checks.len())
            })?;
            if let Some(bad) = checks.iter().find(|c| !c.holds) {
                return Err(format!("{name}: {} fails", bad.name));
            }
            // Construction checks the chain maps and the homotopy identity.
            diagram_a(&s.phi, *i, ConeOptions::default())
                .map_err(|e| format!("{name}: {e}"))?
                .check()
                .map_err(|e| format!("{name}: {e}"))?;
        }
        Ok(format!("{} instances", instances.len()))
    });

    h.run("AC2 cone exactness", Duration::from_secs(120), || {
        for (k, (name, s, i)) in instances.iter().enumerate() {
            let (_, res) = ext1_resolution(&s.phi, *i, ConeOptions::default())
                .map_err(|e| format!("{name}: {e}"))?;
            res.cone.check_d2().map_err(|e| format!("{name}: {e}"))?;
            let rep = cone_exactness(&res.cone, 10, 1000 + k as u64);
            ensure(rep.passed(), || {
                format!("{name}: failures {:?}", rep.failures)
            })?;
        }
        Ok(format!("{} cones, 10 points each", instances.len()))
    });

    h.run("AC3 Ulrich numbers", Duration::from_secs(60), || {
        let cases: [(usize, usize, &[u64]); 3] = [
            (2, 2, &[6, 12, 6]),
            (2, 3, &[12, 36, 36, 12]),
            (3, 2, &[12, 24, 12]),
        ];
        let mut seen = Vec::new();
        for (t, c, want) in cases {
            let s = instance(&f, t, c, c + 1, 0, 31);
            let rep = ulrich_certificate(&s.phi).map_err(e2s)?;
            ensure(rep.passed(), || format!("t{t}c{c}: {:?}", rep.items))?;
            let (_, res) = ext1_resolution(&s.phi, c - 1, ConeOptions::default()).map_err(e2s)?;
            let b = res.betti();
            let got: Vec<u64> = (0..=c as i32).map(|k| b.total(k)).collect();
            ensure(got == want, || format!("t{t}c{c}: betti {got:?}"))?;
            let init = (t + c - 1) as u64 * binomial((t + c - 2) as u64, (c - 1) as u64);
            let item = rep
                .items
                .iter()
                .find(|x| x.name == "initial piece")
                .unwrap();
            ensure(item.found == init.to_string(), || {
                format!("t{t}c{c}: initial piece {}", item.found)
            })?;
            seen.push(format!("{got:?}"));
        }
        Ok(seen.join(" "))
    });

    h.run("AC4 split-offs", Duration::from_secs(30 * 6), || {
        let picks = [
            (2usize, 2usize, 0usize),
            (2, 3, 0),
            (3, 2, 0),
            (2, 2, 1),
            (2, 3, 1),
            (2, 4, 0),
        ];
        let mut lens = Vec::new();
        for (t, c, heavy) in picks {
            let start = Instant::now();
            let s = instance(&f, t, c, c + 1, heavy, 57);
            let mut row = Vec::new();
            for i in 0..=c {
                let (_, res) = ext1_resolution(&s.phi, i, ConeOptions::default()).map_err(e2s)?;
                let l = res.length as usize;
                let ok = if i == c {
                    l == c + 2
                } else if i + 1 == c {
                    l == c
                } else if i <= 1 {
                    l <= c + 1
                } else {
                    l <= c + 2
                };
                ensure(ok, || format!("t{t}c{c}h{heavy} i={i}: length {l}"))?;
                row.push(l);
            }
            ensure(start.elapsed() < Duration::from_secs(30), || {
                format!("t{t}c{c}h{heavy}: {:?}", start.elapsed())
            })?;
            lens.push(format!("t{t}c{c}h{heavy}:{row:?}"));
        }
        Ok(lens.join(" "))
    });

    h.run("AC5 conormal depth", Duration::from_secs(300), || {
        let mut got = Vec::new();
        for (c, n) in [(2usize, 4usize), (2, 5), (2, 6), (3, 6)] {
            let s = instance(&f, 2, c, n, 0, 5);
            let (md, rb) = conormal_bounds(&s);
            let rep = conormal_depth(&s, md, rb).map_err(e2s)?;
            let want = n as i64 - 2 * c as i64 + 2;
            ensure(rep.depth == Some(want), || {
                format!("c{c} n{n}: {:?}, expected {want}", rep)
            })?;
            got.push(format!("(c{c},n{n})={want}"));
        }
        Ok(got.join(" "))
    });

    h.run("AC6 simplicity", Duration::from_secs(120), || {
        let all = fixtures::builtin();
        let by_name = |n: &str| all.iter().find(|x| x.name == n).unwrap();
        let mut notes = Vec::new();
        for (name, simple) in [
            ("p3-curve-222", true),
            ("p4-curve-2222", true),
            ("p3-curve-112", false),
        ] {
            let s = by_name(name).scheme(&f, 7).map_err(e2s)?;
            let rep = simplicity_check(&s.phi).map_err(e2s)?;
            ensure(
                rep.simple == simple && (rep.endo_dim == 1) == simple,
                || format!("{name}: endo {}", rep.endo_dim),
            )?;
            notes.push(format!("{name}:{}", rep.endo_dim));
        }
        for fx in &all {
            let Some(expect) = fx.expect.gate else {
                continue;
            };
            let s = fx.scheme(&f, 7).map_err(e2s)?;
            let d0 = minimize(&build_d(0, &s.phi).map_err(e2s)?);
            let lo = *d0.term(1).twists.iter().min().unwrap();
            let hi = *d0.term(2).twists.iter().max().unwrap();
            let gate = hi < 2 * lo;
            ensure(gate == expect, || format!("{}: gate {gate}", fx.name))?;
            if s.degrees.is_linear() {
                ensure(gate, || format!("{}: linear gate fails", fx.name))?;
            }
        }
        Ok(notes.join(" "))
    });

    h.run("AC7 isomorphism strands", Duration::from_secs(300), || {
        let specs = [
            (2usize, 2usize, 5usize, 0usize, 1u64),
            (2, 2, 5, 0, 2),
            (2, 2, 5, 1, 3),
            (2, 2, 6, 0, 4),
            (3, 2, 5, 0, 5),
            (3, 2, 5, 1, 6),
            (2, 3, 6, 0, 7),
            (2, 2, 4, 0, 8),
            (2, 2, 4, 1, 9),
            (3, 2, 4, 0, 10),
        ];
        let mut applicable = 0;
        for (t, c, n, heavy, seed) in specs {
            let s = instance(&f, t, c, n, heavy, seed);
            let gate = depth_j_gate(&s, seed ^ 0x5eed).map_err(e2s)?;
            ensure(gate.at_least(2), || {
                format!("t{t}c{c}n{n}: ungated {gate:?}")
            })?;
            for r in iso_suite(&s, &gate, c + 3).map_err(e2s)? {
                if r.applicable {
                    applicable += 1;
                    ensure(r.lhs.len() >= c + 3, || {
                        format!("{}: window {}", r.claim, r.lhs.len())
                    })?;
                    ensure(r.holds == Some(true), || {
                        format!(
                            "t{t}c{c}n{n}h{heavy}: {} lhs {:?} rhs {:?}",
                            r.claim, r.lhs, r.rhs
                        )
                    })?;
                }
            }
        }
        Ok(format!("{applicable} applicable comparisons"))
    });

    h.run("AC8 vanishing strands", Duration::from_secs(120), || {
        let mut claims = HashSet::new();
        for (t, c, n) in [(2usize, 2usize, 5usize), (2, 3, 7)] {
            let s = instance(&f, t, c, n, 0, 21);
            let gate = depth_j_gate(&s, 3).map_err(e2s)?;
            for v in vanishing_suite(&s, &gate, c + 3).map_err(e2s)? {
                if v.applicable {
                    ensure(v.holds == Some(true), || {
                        format!("t{t}c{c}n{n}: {} {:?}", v.claim, v.dims)
                    })?;
                    claims.insert(v.claim);
                }
            }
        }
        ensure(claims.len() == 2, || format!("only {claims:?} applicable"))?;
        Ok("both claims hold".into())
    });

    h.run("AC9 Chern classes", Duration::from_secs(5), || {
        for t in 2..=10u32 {
            let got = chern_from_sequence(t).map_err(e2s)?;
            ensure(got == chern_closed_form(t), || format!("t={t}: {got:?}"))?;
            let rep = exclude_cases(t).map_err(e2s)?;
            ensure(rep.all_excluded && rep.cases.len() == 4, || {
                format!("t={t}: {rep:?}")
            })?;
        }
        Ok("t = 2..10".into())
    });

    h.run("AC10 resolution oracle", Duration::from_secs(120), || {
        let specs = [
            (2usize, 2usize, 3usize, 0usize),
            (2, 2, 4, 1),
            (3, 2, 4, 0),
            (2, 3, 4, 0),
            (2, 3, 5, 2),
            (3, 2, 5, 1),
            (2, 2, 3, 2),
            (3, 3, 5, 0),
            (2, 4, 5, 0),
            (3, 2, 4, 2),
        ];
        for (k, (t, c, n, heavy)) in specs.into_iter().enumerate() {
            let s = instance(&f, t, c, n, heavy, 300 + k as u64);
            let d0 = build_d(0, &s.phi).map_err(e2s)?;
            let top = d0.term(d0.hi()).twists.iter().copied().max().unwrap();
            let a = quotient_ring(&s.phi).map_err(e2s)?;
            let module = d_module(&s.phi, 0, a).map_err(e2s)?;
            let r = Ring::polynomial(&f, s.nvars());
            let opts = ResolutionOptions::new(top, top, c + 1);
            let res =
                truncated_min_resolution(ResolveSource::Module(&module), r, opts).map_err(e2s)?;
            let min = minimize(&d0);
            ensure(res.betti() == min.betti(), || {
                format!("t{t}c{c}n{n}:\n{}\nvs\n{}", res.betti(), min.betti())
            })?;
            let bound = top + 1;
            let hd = hilbert_from_resolution(&min, s.n(), bound);
            for d in 0..=bound {
                let want = brute_hilbert(&f, s.nvars(), &s.minors, d);
                ensure(hd.value(d) == want as i64, || {
                    format!("t{t}c{c}n{n} degree {d}: {} vs {want}", hd.value(d))
                })?;
            }
        }
        Ok(format!("{} instances", specs.len()))
    });

    h.run(
        "AC11 hyperplane restriction",
        Duration::from_secs(120),
        || {
            let specs = [
                (2usize, 2usize, 4usize, 0usize, 1u64),
                (2, 2, 4, 0, 2),
                (2, 2, 4, 1, 3),
                (3, 2, 4, 0, 4),
                (2, 2, 5, 0, 5),
            ];
            for (t, c, n, heavy, seed) in specs {
                let s = instance(&f, t, c, n, heavy, seed);
                let gate = depth_j_gate(&s, seed).map_err(e2s)?;
                ensure(gate.at_least(3), || format!("t{t}c{c}n{n}: {gate:?}"))?;
                let r = hyperplane_restrict(&s, seed).map_err(e2s)?;
                for i in 0..=c {
                    let before = ext1_resolution(&s.phi, i, ConeOptions::default())
                        .map_err(e2s)?
                        .1
                        .betti();
                    let after = ext1_resolution(&r.scheme.phi, i, ConeOptions::default())
                        .map_err(e2s)?
                        .1
                        .betti();
                    ensure(before == after, || {
                        format!("t{t}c{c}n{n} i={i}:\n{before}\nvs\n{after}")
                    })?;
                }
            }
            Ok(format!("{} instances", specs.len()))
        },
    );

    h.run("AC12 scan grid", Duration::from_secs(600), || {
        let grid = ScanGrid {
            t: vec![1, 2, 3],
            c: vec![1, 2, 3],
            n: vec![],
            a: vec![0, 1],
            linear_only: true,
            seeds: vec![7],
        };
        let opts = ScanOptions::default();
        let dir = tempfile::tempdir().map_err(e2s)?;
        let path = dir.path().join("scan.jsonl");
        let mut log = String::new();
        let mut bad = Vec::new();
        let mut emit = |r: &detres_core::strand::ConjectureReport, log: &mut String| {
            if r.status != ScanStatus::Consistent {
                bad.push(r.key.clone());
            }
            log.push_str(&serde_json::to_string(r).unwrap());
            log.push('\n');
        };
        // Interrupted run: the sink refuses the fourth record.
        let mut taken = 0;
        let first = conjecture_scan(&grid, &opts, &HashSet::new(), &mut |r| {
            if taken == 3 {
                return Err(detres_core::Error::ResourceLimit("interrupted".into()));
            }
            taken += 1;
            emit(r, &mut log);
            Ok(())
        });
        ensure(first.is_err(), || "interruption not propagated".into())?;
        std::fs::write(&path, &log).map_err(e2s)?;
        let done = done_keys(&std::fs::read_to_string(&path).map_err(e2s)?);
        let resumed = conjecture_scan(&grid, &opts, &done, &mut |r| {
            emit(r, &mut log);
            Ok(())
        })
        .map_err(e2s)?;
        std::fs::write(&path, &log).map_err(e2s)?;
        let total = log.lines().count();
        let keys: HashSet<_> = done_keys(&log);
        ensure(keys.len() == total, || {
            "duplicate records after resume".into()
        })?;
        let again = conjecture_scan(&grid, &opts, &keys, &mut |_| Ok(())).map_err(e2s)?;
        ensure(again == 0, || format!("rerun emitted {again}"))?;
        ensure(bad.is_empty(), || format!("not consistent: {bad:?}"))?;
        Ok(format!("{total} records ({resumed} after resume)"))
    });

    println!("---");
    for l in &h.lines {
        println!("{l}");
    }
    assert_eq!(h.failed, 0, "{} criteria failed", h.failed);
}
