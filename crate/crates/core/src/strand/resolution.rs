//! Degree-by-degree minimal free resolutions with degree and row bounds.

use serde::{Deserialize, Serialize};

use crate::complex::{BettiTable, ChainComplex};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{GradedFreeModule, GradedMap};
use crate::linalg::{kernel_of, rank_of, ColumnSolver, Echelon, Inserted, SparseVec};
use crate::poly::Poly;
use crate::strand::module::{push_product, FreeCover, ModuleMap, PresentedModule};
use crate::strand::ring::{Ring, SparseAcc};
use std::sync::Arc;

/// Bounds for [`truncated_min_resolution`].
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ResolutionOptions {
    /// Largest internal degree examined.
    pub max_degree: i32,
    /// Largest Betti row (`degree - level - min generator degree`) examined.
    pub row_bound: i32,
    /// Largest homological level computed.
    pub max_level: usize,
}

impl ResolutionOptions {
    pub fn new(max_degree: i32, row_bound: i32, max_level: usize) -> Self {
        ResolutionOptions {
            max_degree,
            row_bound,
            max_level,
        }
    }
}

/// What is being resolved.
pub enum ResolveSource<'a, F: Field> {
    Module(&'a PresentedModule<F>),
    /// The kernel of a degree-preserving map.
    Kernel(&'a ModuleMap<'a, F>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DepthFlag {
    /// The level after the last nonzero one was scanned and found empty in
    /// every examined degree.
    ExactWithinBound,
    /// The scan stopped at `max_level` with generators still appearing.
    Censored,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DepthReport {
    pub pd: usize,
    /// `nvars - pd` when the base ring is polynomial.
    pub depth: Option<i64>,
    pub max_degree: i32,
    pub row_bound: i32,
    pub flag: DepthFlag,
}

/// One homological level: generator degrees and the map to the previous level
/// (for level 0, to the generators of the resolved module).
#[derive(Clone, Debug)]
pub struct Level<F: Field> {
    pub twists: Vec<i32>,
    pub map: GradedMap<F>,
}

pub struct TruncatedResolution<F: Field> {
    pub base: Arc<Ring<F>>,
    pub levels: Vec<Level<F>>,
    pub opts: ResolutionOptions,
    pub report: DepthReport,
}

impl<F: Field> TruncatedResolution<F> {
    /// The free complex `F_0 <- F_1 <- ...` (without the augmentation).
    pub fn complex(&self) -> Result<ChainComplex<F>> {
        let f = self.base.field();
        let n = self.base.nvars();
        let mut top = self.levels.len();
        while top > 1 && self.levels[top - 1].twists.is_empty() {
            top -= 1;
        }
        let terms = self.levels[..top]
            .iter()
            .map(|l| GradedFreeModule::new(l.twists.clone()))
            .collect();
        let diffs = self.levels[1..top].iter().map(|l| l.map.clone()).collect();
        ChainComplex::new(f, n, 0, terms, diffs)
    }

    pub fn augmentation(&self) -> &GradedMap<F> {
        &self.levels[0].map
    }

    pub fn betti(&self) -> BettiTable {
        let mut b = BettiTable::default();
        for (k, l) in self.levels.iter().enumerate() {
            for &w in &l.twists {
                *b.entries.entry((k as i32, w)).or_insert(0) += 1;
            }
        }
        b
    }

    /// `Σ_k (-1)^k dim (F_k)_d` over the base ring.
    pub fn euler_dim(&self, d: i32) -> i64 {
        self.levels
            .iter()
            .enumerate()
            .map(|(k, l)| {
                let s: i64 = l.twists.iter().map(|&w| self.base.dim(d - w) as i64).sum();
                if k % 2 == 0 {
                    s
                } else {
                    -s
                }
            })
            .sum()
    }
}

/// Target of one level's map: the resolved module (or kernel ambient) or a
/// free module over the base ring.
enum Target<'a, F: Field> {
    Module(&'a PresentedModule<F>),
    Free(&'a [i32]),
}

struct Strand<F: Field> {
    columns: Vec<SparseVec<F>>,
    nrows: usize,
    rank: usize,
}

/// Images at degree `d` of the basis of `⊕ base(-w)` under `cols`.
fn strand_columns<F: Field>(
    base: &Ring<F>,
    twists: &[i32],
    cols: &[Vec<(usize, Poly<F>)>],
    target: &Target<'_, F>,
    d: i32,
) -> (Vec<SparseVec<F>>, usize) {
    let f = base.field();
    let one = f.one();
    match target {
        Target::Module(m) => {
            let nrows = m.dim(d);
            let mut out = Vec::new();
            for (g, &w) in twists.iter().enumerate() {
                let Some(p) = base.piece(d - w) else { continue };
                for b in 0..p.dim() {
                    out.push(m.image_of(d, &cols[g], &p.basis_mono(b), &one));
                }
            }
            (out, nrows)
        }
        Target::Free(tw) => {
            let cover = FreeCover::new(base, tw, d);
            let mut acc = SparseAcc::new(f);
            let mut out = Vec::new();
            for (g, &w) in twists.iter().enumerate() {
                let Some(p) = base.piece(d - w) else { continue };
                for b in 0..p.dim() {
                    let m = p.basis_mono(b);
                    for (r, q) in &cols[g] {
                        push_product(base, &cover, tw, *r, q, &m, &one, &mut acc);
                    }
                    out.push(acc.take());
                }
            }
            (out, cover.dim)
        }
    }
}

fn column_from_vector<F: Field>(
    base: &Ring<F>,
    target: &Target<'_, F>,
    d: i32,
    v: &[(u32, F::Elem)],
) -> Vec<(usize, Poly<F>)> {
    match target {
        Target::Module(m) => m.column_of(d, v),
        Target::Free(tw) => {
            let f = base.field();
            let cover = FreeCover::new(base, tw, d);
            let mut per: std::collections::BTreeMap<usize, Vec<_>> = Default::default();
            for (c, x) in v {
                let (g, b) = cover.locate(*c as usize);
                let m = base.piece(d - tw[g]).expect("nonempty block").basis_mono(b);
                per.entry(g).or_default().push((m, x.clone()));
            }
            per.into_iter()
                .map(|(g, t)| {
                    (
                        g,
                        Poly::from_terms(f, base.nvars(), t).expect("homogeneous"),
                    )
                })
                .filter(|(_, p)| !p.is_zero())
                .collect()
        }
    }
}

/// Minimal free resolution over `base` computed in internal degrees up to
/// `max_degree` and Betti rows up to `row_bound`.
///
/// Every generator in the examined region is found; the result is a full
/// minimal resolution whenever all Betti numbers lie in that region.
pub fn truncated_min_resolution<F: Field>(
    source: ResolveSource<'_, F>,
    base: Arc<Ring<F>>,
    opts: ResolutionOptions,
) -> Result<TruncatedResolution<F>> {
    let (top, kernel_of_map) = match &source {
        ResolveSource::Module(m) => (*m, None),
        ResolveSource::Kernel(phi) => (phi.source, Some(*phi)),
    };
    if !base.maps_onto(&top.ring) {
        return Err(Error::Incompatible(
            "base ring does not map onto the module's ring".into(),
        ));
    }
    let f = base.field().clone();
    let g0 = top.min_degree().unwrap_or(0);
    let nlev = opts.max_level + 1;
    let mut twists: Vec<Vec<i32>> = vec![Vec::new(); nlev + 1];
    let mut cols: Vec<Vec<Vec<(usize, Poly<F>)>>> = vec![Vec::new(); nlev + 1];
    let mut saw_gen_at_top = false;

    for d in g0..=opts.max_degree {
        // Strand of the previous level's map at degree d (all gens final).
        let mut prev: Option<Strand<F>> = match kernel_of_map {
            Some(phi) => {
                let s = phi.strand(d);
                let rank = s.rank(&f);
                Some(Strand {
                    nrows: s.target_dim,
                    columns: s.columns,
                    rank,
                })
            }
            None => None,
        };
        for k in 0..=nlev {
            let row = d - k as i32 - g0;
            let active = k < nlev && row <= opts.row_bound;
            let next_active = k + 1 < nlev && row - 1 <= opts.row_bound;
            if !active && !next_active {
                prev = None;
                if row < 0 {
                    break;
                }
                continue;
            }
            let tw_prev: Vec<i32>;
            let target = if k == 0 {
                Target::Module(top)
            } else {
                tw_prev = twists[k - 1].clone();
                Target::Free(&tw_prev)
            };
            let (mut columns, nrows) = strand_columns(&base, &twists[k], &cols[k], &target, d);
            let old_rank = rank_of(&f, nrows, &columns);
            if active {
                let vdim = match &prev {
                    Some(p) => p.columns.len() - p.rank,
                    None if k == 0 => nrows,
                    None => {
                        // Previous level was inactive at this degree.
                        let (pc, pr) = strand_columns(
                            &base,
                            &twists[k - 1],
                            &cols[k - 1],
                            &if k == 1 {
                                Target::Module(top)
                            } else {
                                Target::Free(&twists[k - 2])
                            },
                            d,
                        );
                        let rank = rank_of(&f, pr, &pc);
                        prev = Some(Strand {
                            columns: pc,
                            nrows: pr,
                            rank,
                        });
                        nrows - rank
                    }
                };
                let new = vdim - old_rank;
                if new > 0 {
                    let candidates: Vec<SparseVec<F>> = match &prev {
                        Some(p) => kernel_of(&f, p.nrows, &p.columns),
                        None => (0..nrows as u32).map(|i| vec![(i, f.one())]).collect(),
                    };
                    let mut ech = Echelon::new(&f, nrows);
                    for c in &columns {
                        ech.insert(c);
                    }
                    let mut added = 0;
                    for v in candidates {
                        if added == new {
                            break;
                        }
                        if let Inserted::Pivot(_) = ech.insert(&v) {
                            cols[k].push(column_from_vector(&base, &target, d, &v));
                            twists[k].push(d);
                            columns.push(v);
                            added += 1;
                        }
                    }
                    if added != new {
                        return Err(Error::Unsolvable(format!(
                            "level {k}, degree {d}: found {added} of {new} new generators"
                        )));
                    }
                    if k == nlev - 1 {
                        saw_gen_at_top = true;
                    }
                }
                prev = Some(Strand {
                    rank: old_rank + new,
                    columns,
                    nrows,
                });
            } else {
                prev = Some(Strand {
                    rank: old_rank,
                    columns,
                    nrows,
                });
            }
        }
    }

    let mut levels = Vec::with_capacity(nlev);
    for k in 0..nlev {
        let source = GradedFreeModule::new(twists[k].clone());
        let target = if k == 0 {
            top.gens.clone()
        } else {
            GradedFreeModule::new(twists[k - 1].clone())
        };
        let map = GradedMap::from_columns(
            &f,
            base.nvars(),
            source,
            target,
            std::mem::take(&mut cols[k]),
        )?;
        levels.push(Level {
            twists: twists[k].clone(),
            map,
        });
    }
    let pd = levels
        .iter()
        .rposition(|l| !l.twists.is_empty())
        .unwrap_or(0);
    let flag = if saw_gen_at_top || pd + 1 >= nlev {
        DepthFlag::Censored
    } else {
        DepthFlag::ExactWithinBound
    };
    let depth = base
        .is_polynomial()
        .then(|| base.nvars() as i64 - pd as i64);
    Ok(TruncatedResolution {
        base,
        levels,
        opts,
        report: DepthReport {
            pd,
            depth,
            max_degree: opts.max_degree,
            row_bound: opts.row_bound,
            flag,
        },
    })
}

/// Solve `d ∘ x = rhs` for a map `x: X -> A` of free modules over `ring`,
/// strand by strand in each source degree of `X`.
pub fn solve_lift<F: Field>(
    ring: &Arc<Ring<F>>,
    d: &GradedMap<F>,
    rhs: &GradedMap<F>,
) -> Result<GradedMap<F>> {
    if d.target != rhs.target {
        return Err(Error::Incompatible("lift: targets differ".into()));
    }
    let f = ring.field().clone();
    let mut out: Vec<Vec<(usize, Poly<F>)>> = vec![Vec::new(); rhs.ncols()];
    let mut degrees: Vec<i32> = rhs.source.twists.clone();
    degrees.sort_unstable();
    degrees.dedup();
    let src = Target::Free(&d.target.twists);
    for w in degrees {
        let (columns, nrows) = strand_columns(ring, &d.source.twists, d.columns(), &src, w);
        let solver = ColumnSolver::new(&f, nrows, &columns);
        let cover = FreeCover::new(ring, &d.target.twists, w);
        let one = f.one();
        for (j, &tw) in rhs.source.twists.iter().enumerate() {
            if tw != w {
                continue;
            }
            let mut acc = SparseAcc::new(&f);
            for (r, q) in rhs.col(j) {
                push_product(
                    ring,
                    &cover,
                    &d.target.twists,
                    *r,
                    q,
                    &crate::poly::Mono::one(),
                    &one,
                    &mut acc,
                );
            }
            let y = acc.take();
            let x = solver
                .solve(&y)
                .map_err(|e| Error::Unsolvable(format!("lift of column {j}: {e}")))?;
            out[j] = column_from_vector(ring, &Target::Free(&d.source.twists), w, &x);
        }
    }
    GradedMap::from_columns(&f, ring.nvars(), rhs.source.clone(), d.source.clone(), out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;

    fn cubic(f: &Fp) -> Vec<Poly<Fp>> {
        let x = |i| Poly::var(f, 4, i);
        vec![
            x(0).mul(&x(2)).sub(&x(1).mul(&x(1))),
            x(0).mul(&x(3)).sub(&x(1).mul(&x(2))),
            x(1).mul(&x(3)).sub(&x(2).mul(&x(2))),
        ]
    }

    #[test]
    fn resolves_twisted_cubic_coordinate_ring() {
        let f = Fp::default_prime();
        let r = Ring::polynomial(&f, 4);
        let rels = GradedMap::from_rows(
            &f,
            4,
            GradedFreeModule::new(vec![2, 2, 2]),
            GradedFreeModule::new(vec![0]),
            &[cubic(&f)],
        )
        .unwrap();
        let a = PresentedModule::new("A", r.clone(), rels).unwrap();
        let res = truncated_min_resolution(
            ResolveSource::Module(&a),
            r,
            ResolutionOptions::new(8, 4, 5),
        )
        .unwrap();
        let b = res.betti();
        assert_eq!(b.get(0, 0), 1);
        assert_eq!(b.get(1, 2), 3);
        assert_eq!(b.get(2, 3), 2);
        assert_eq!(res.report.pd, 2);
        assert_eq!(res.report.depth, Some(2));
        assert_eq!(res.report.flag, DepthFlag::ExactWithinBound);
        let cx = res.complex().unwrap();
        cx.check_d2().unwrap();
        for d in 0..8 {
            assert_eq!(res.euler_dim(d), a.dim(d) as i64);
        }
    }

    #[test]
    fn lift_through_surjection() {
        let f = Fp::default_prime();
        let r = Ring::polynomial(&f, 2);
        let x = |i| Poly::var(&f, 2, i);
        let d = GradedMap::from_rows(
            &f,
            2,
            GradedFreeModule::new(vec![1, 1]),
            GradedFreeModule::new(vec![0]),
            &[vec![x(0), x(1)]],
        )
        .unwrap();
        let rhs = GradedMap::from_rows(
            &f,
            2,
            GradedFreeModule::new(vec![2]),
            GradedFreeModule::new(vec![0]),
            &[vec![x(0).mul(&x(1)).add(&x(1).mul(&x(1)))]],
        )
        .unwrap();
        let l = solve_lift(&r, &d, &rhs).unwrap();
        assert_eq!(d.compose(&l).unwrap(), rhs);
    }
}
