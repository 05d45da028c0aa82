//! Chain complexes of graded free modules and the determinantal family `D_i`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::det::minor_laplace;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{contract, contract_many, exterior_basis, label_index, symmetric_basis};
use crate::graded::{GradedFreeModule, GradedMap, MapBuilder};
use crate::linalg::rank_of;
use crate::poly::{binomial_i, Poly};

/// Terms at positions `lo..=hi` with differentials `d_p: term_p -> term_{p-1}`.
#[derive(Clone, Debug)]
pub struct ChainComplex<F: Field> {
    field: F,
    nvars: usize,
    lo: i32,
    terms: Vec<GradedFreeModule>,
    /// `diffs[k]` maps `terms[k + 1]` to `terms[k]`.
    diffs: Vec<GradedMap<F>>,
    /// Built under a sampled (not certified) depth hypothesis.
    pub conditional: bool,
}

impl<F: Field> PartialEq for ChainComplex<F> {
    fn eq(&self, other: &Self) -> bool {
        self.lo == other.lo && self.terms == other.terms && self.diffs == other.diffs
    }
}

impl<F: Field> ChainComplex<F> {
    pub fn new(
        field: &F,
        nvars: usize,
        lo: i32,
        terms: Vec<GradedFreeModule>,
        diffs: Vec<GradedMap<F>>,
    ) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidInput(
                "a complex needs at least one term".into(),
            ));
        }
        if diffs.len() + 1 != terms.len() {
            return Err(Error::Incompatible(format!(
                "{} terms need {} differentials, got {}",
                terms.len(),
                terms.len() - 1,
                diffs.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.source != terms[k + 1] || d.target != terms[k] {
                return Err(Error::Incompatible(format!(
                    "differential at position {} has the wrong shape",
                    lo + k as i32 + 1
                )));
            }
            if d.nvars() != nvars {
                return Err(Error::Incompatible(
                    "variable count of a differential".into(),
                ));
            }
            d.check_degrees()?;
        }
        Ok(ChainComplex {
            field: field.clone(),
            nvars,
            lo,
            terms,
            diffs,
            conditional: false,
        })
    }

    /// Build and check `d ∘ d = 0`.
    pub fn new_checked(
        field: &F,
        nvars: usize,
        lo: i32,
        terms: Vec<GradedFreeModule>,
        diffs: Vec<GradedMap<F>>,
    ) -> Result<Self> {
        let cx = Self::new(field, nvars, lo, terms, diffs)?;
        cx.check_d2()?;
        Ok(cx)
    }

    /// The complex with a single term.
    pub fn single(field: &F, nvars: usize, pos: i32, m: GradedFreeModule) -> Self {
        ChainComplex {
            field: field.clone(),
            nvars,
            lo: pos,
            terms: vec![m],
            diffs: Vec::new(),
            conditional: false,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn nvars(&self) -> usize {
        self.nvars
    }
    pub fn lo(&self) -> i32 {
        self.lo
    }
    pub fn hi(&self) -> i32 {
        self.lo + self.terms.len() as i32 - 1
    }
    pub fn terms(&self) -> &[GradedFreeModule] {
        &self.terms
    }
    pub fn diffs(&self) -> &[GradedMap<F>] {
        &self.diffs
    }

    /// Term at position `p` (zero outside the range).
    pub fn term(&self, p: i32) -> GradedFreeModule {
        if p < self.lo || p > self.hi() {
            GradedFreeModule::zero()
        } else {
            self.terms[(p - self.lo) as usize].clone()
        }
    }

    pub fn rank_at(&self, p: i32) -> usize {
        if p < self.lo || p > self.hi() {
            0
        } else {
            self.terms[(p - self.lo) as usize].rank()
        }
    }

    /// Differential leaving position `p`, if both ends are in range.
    pub fn diff(&self, p: i32) -> Option<&GradedMap<F>> {
        if p <= self.lo || p > self.hi() {
            None
        } else {
            Some(&self.diffs[(p - self.lo - 1) as usize])
        }
    }

    /// Highest position with a nonzero term minus the lowest, or `None` for the zero complex.
    pub fn length(&self) -> Option<i32> {
        let nz: Vec<i32> = (self.lo..=self.hi())
            .filter(|&p| self.rank_at(p) > 0)
            .collect();
        Some(nz.last()? - nz.first()?)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.is_zero())
    }

    /// Symbolic check of `d_{p-1} ∘ d_p = 0` at every position.
    pub fn check_d2(&self) -> Result<()> {
        for k in 1..self.diffs.len() {
            let comp = self.diffs[k - 1].compose(&self.diffs[k])?;
            if !comp.is_zero() {
                return Err(Error::NotAComplex {
                    position: self.lo + k as i32 + 1,
                    detail: comp.summary(3),
                });
            }
        }
        Ok(())
    }

    /// Whether no differential has a nonzero constant entry.
    pub fn is_minimal(&self) -> bool {
        self.diffs.iter().all(|d| d.is_minimal())
    }

    pub fn total_rank(&self) -> usize {
        self.terms.iter().map(|t| t.rank()).sum()
    }

    /// Drop zero terms at both ends (keeps at least one term).
    pub fn trimmed(&self) -> Self {
        let n = self.terms.len();
        let mut a = 0;
        while a + 1 < n && self.terms[a].is_zero() {
            a += 1;
        }
        let mut b = n - 1;
        while b > a && self.terms[b].is_zero() {
            b -= 1;
        }
        ChainComplex {
            field: self.field.clone(),
            nvars: self.nvars,
            lo: self.lo + a as i32,
            terms: self.terms[a..=b].to_vec(),
            diffs: self.diffs[a..b].to_vec(),
            conditional: self.conditional,
        }
    }

    /// Re-index positions so that the lowest one becomes `new_lo`.
    pub fn reindexed(mut self, new_lo: i32) -> Self {
        self.lo = new_lo;
        self
    }

    /// Extend with zero terms so the range covers `lo..=hi`.
    pub fn padded(&self, lo: i32, hi: i32) -> Self {
        let lo = lo.min(self.lo);
        let hi = hi.max(self.hi());
        let terms: Vec<GradedFreeModule> = (lo..=hi).map(|p| self.term(p)).collect();
        let diffs = (lo + 1..=hi)
            .map(|p| match self.diff(p) {
                Some(d) => d.clone(),
                None => GradedMap::zero(&self.field, self.nvars, self.term(p), self.term(p - 1)),
            })
            .collect();
        ChainComplex {
            field: self.field.clone(),
            nvars: self.nvars,
            lo,
            terms,
            diffs,
            conditional: self.conditional,
        }
    }

    pub fn betti(&self) -> BettiTable {
        let mut entries = BTreeMap::new();
        for (k, t) in self.terms.iter().enumerate() {
            for &j in &t.twists {
                *entries.entry((self.lo + k as i32, j)).or_insert(0u64) += 1;
            }
        }
        BettiTable { entries }
    }

    /// Ranks of all differentials (in position order) evaluated at a point.
    pub fn ranks_at(&self, point: &[F::Elem]) -> Vec<usize> {
        self.diffs
            .iter()
            .map(|d| rank_of(&self.field, d.nrows(), &d.eval_columns(point)))
            .collect()
    }

    /// Rank conditions at random points: exactness at every position except
    /// possibly the lowest, injectivity at the highest, and (with
    /// `check_lowest`) surjectivity onto the lowest term.
    pub fn rank_exactness(&self, points: usize, seed: u64, check_lowest: bool) -> ExactnessReport {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts: Vec<Vec<F::Elem>> = (0..points)
            .map(|_| {
                (0..self.nvars)
                    .map(|_| self.field.random(&mut rng))
                    .collect()
            })
            .collect();
        let ranks: Vec<Vec<usize>> = pts.par_iter().map(|p| self.ranks_at(p)).collect();
        let mut failures = Vec::new();
        for (k, r) in ranks.iter().enumerate() {
            let rk = |p: i32| -> usize {
                if p <= self.lo || p > self.hi() {
                    0
                } else {
                    r[(p - self.lo - 1) as usize]
                }
            };
            for p in self.lo..=self.hi() {
                if p == self.lo && !check_lowest {
                    continue;
                }
                if rk(p) + rk(p + 1) != self.rank_at(p) {
                    failures.push((k, p));
                }
            }
        }
        ExactnessReport {
            points,
            seed,
            field: self.field.spec().to_string(),
            ranks,
            failures,
        }
    }

    /// Hilbert data of the module resolved by this complex (caller asserts acyclicity).
    pub fn hilbert(&self, bound: i32) -> HilbertData {
        hilbert_from_betti(&self.betti(), self.nvars, bound)
    }
}

impl<F: Field> fmt::Display for ChainComplex<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (self.lo..=self.hi())
            .rev()
            .map(|p| format!("[{}] {}", p, self.term(p)))
            .collect();
        write!(f, "{}", parts.join(" <- "))
    }
}

/// Outcome of [`ChainComplex::rank_exactness`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExactnessReport {
    pub points: usize,
    pub seed: u64,
    pub field: String,
    /// Per point, the ranks of the differentials in position order.
    pub ranks: Vec<Vec<usize>>,
    /// `(point index, position)` pairs where the rank condition failed.
    pub failures: Vec<(usize, i32)>,
}

impl ExactnessReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
    pub fn label(&self) -> String {
        format!(
            "verified: randomized({} points, field {}, seed {})",
            self.points, self.field, self.seed
        )
    }
}

/// Graded Betti numbers `β_{i,j}` keyed by (homological index, internal degree).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BettiTable {
    pub entries: BTreeMap<(i32, i32), u64>,
}

#[derive(Serialize, Deserialize)]
struct BettiEntry {
    i: i32,
    j: i32,
    beta: u64,
}

impl Serialize for BettiTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<BettiEntry> = self
            .entries
            .iter()
            .map(|(&(i, j), &beta)| BettiEntry { i, j, beta })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BettiTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<BettiEntry> = Vec::deserialize(d)?;
        let mut entries = BTreeMap::new();
        for e in v {
            if e.beta > 0 {
                *entries.entry((e.i, e.j)).or_insert(0) += e.beta;
            }
        }
        Ok(BettiTable { entries })
    }
}

impl BettiTable {
    pub fn get(&self, i: i32, j: i32) -> u64 {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    /// Total rank at homological index `i`.
    pub fn total(&self, i: i32) -> u64 {
        self.entries
            .iter()
            .filter(|((k, _), _)| *k == i)
            .map(|(_, b)| b)
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(|&b| b == 0)
    }

    /// Largest homological index with a nonzero entry minus the smallest.
    pub fn length(&self) -> Option<i32> {
        let idx: Vec<i32> = self
            .entries
            .iter()
            .filter(|(_, &b)| b > 0)
            .map(|((i, _), _)| *i)
            .collect();
        Some(idx.iter().max()? - idx.iter().min()?)
    }

    /// Whether all generators at index `i` sit in degree `j0 + i`.
    pub fn is_pure_linear(&self, j0: i32) -> bool {
        self.entries
            .iter()
            .all(|(&(i, j), &b)| b == 0 || j == j0 + i)
    }

    /// Shift internal degrees by `s`.
    pub fn shifted(&self, s: i32) -> Self {
        BettiTable {
            entries: self
                .entries
                .iter()
                .map(|(&(i, j), &b)| ((i, j + s), b))
                .collect(),
        }
    }

    /// Standard grid: columns are homological indices, rows are `j - i`.
    pub fn render(&self) -> String {
        let nz: Vec<(i32, i32)> = self
            .entries
            .iter()
            .filter(|(_, &b)| b > 0)
            .map(|(&k, _)| k)
            .collect();
        if nz.is_empty() {
            return "0\n".into();
        }
        let imin = nz.iter().map(|k| k.0).min().unwrap();
        let imax = nz.iter().map(|k| k.0).max().unwrap();
        let rmin = nz.iter().map(|k| k.1 - k.0).min().unwrap();
        let rmax = nz.iter().map(|k| k.1 - k.0).max().unwrap();
        let width = (imin..=imax)
            .map(|i| self.total(i).to_string().len())
            .max()
            .unwrap()
            .max(2)
            + 1;
        let lw = 6;
        let mut out = format!("{:>lw$}", "");
        for i in imin..=imax {
            out.push_str(&format!("{:>width$}", i));
        }
        out.push_str(&format!("\n{:>lw$}", "total:"));
        for i in imin..=imax {
            out.push_str(&format!("{:>width$}", self.total(i)));
        }
        out.push('\n');
        for r in rmin..=rmax {
            out.push_str(&format!("{:>lw$}", format!("{r}:")));
            for i in imin..=imax {
                let b = self.get(i, i + r);
                let s = if b == 0 {
                    "-".to_string()
                } else {
                    b.to_string()
                };
                out.push_str(&format!("{:>width$}", s));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("betti table serializes")
    }
}

impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Hilbert series `numerator(z) / (1 - z)^denominator_exp` plus tabulated values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertData {
    /// Coefficients of the numerator keyed by exponent.
    pub numerator: BTreeMap<i32, i64>,
    pub denominator_exp: usize,
    /// `(degree, dimension)` from the lowest relevant degree up to the bound.
    pub values: Vec<(i32, i64)>,
}

impl HilbertData {
    pub fn value(&self, d: i32) -> i64 {
        series_coefficient(&self.numerator, self.denominator_exp, d)
    }
    /// Numerator evaluated at `z = 1`.
    pub fn numerator_at_one(&self) -> i64 {
        self.numerator.values().sum()
    }
}

fn series_coefficient(num: &BTreeMap<i32, i64>, e: usize, d: i32) -> i64 {
    let e = e as i64;
    num.iter()
        .filter(|(&j, _)| j <= d)
        .map(|(&j, &c)| c * binomial_i((d - j) as i64 + e - 1, e - 1))
        .sum()
}

/// Hilbert data from Betti numbers over a polynomial ring in `nvars` variables.
pub fn hilbert_from_betti(b: &BettiTable, nvars: usize, bound: i32) -> HilbertData {
    let mut numerator = BTreeMap::new();
    for (&(i, j), &beta) in &b.entries {
        let s = if i.rem_euclid(2) == 0 { 1 } else { -1 };
        *numerator.entry(j).or_insert(0i64) += s * beta as i64;
    }
    numerator.retain(|_, c| *c != 0);
    let start = numerator.keys().next().copied().unwrap_or(0).min(0);
    let values = (start..=bound)
        .map(|d| (d, series_coefficient(&numerator, nvars, d)))
        .collect();
    HilbertData {
        numerator,
        denominator_exp: nvars,
        values,
    }
}

/// Hilbert data of the module resolved by `cx` (ambient `P^n`).
pub fn hilbert_from_resolution<F: Field>(
    cx: &ChainComplex<F>,
    n: usize,
    bound: i32,
) -> HilbertData {
    hilbert_from_betti(&cx.betti(), n + 1, bound)
}

fn rows_cols(phi: &GradedMap<impl Field>) -> Result<(usize, usize, usize)> {
    let t = phi.nrows();
    let m = phi.ncols();
    if t == 0 || m + 1 < t + 1 || m < t {
        return Err(Error::InvalidInput(format!(
            "a {t}x{m} matrix does not define a determinantal family"
        )));
    }
    Ok((t, m, m - t + 1))
}

/// Basis of `Λ^k F ⊗ S_p G`: labels `(E, S)` with `E` outer.
pub struct CBasis {
    pub ext: Vec<Vec<usize>>,
    pub sym: Vec<Vec<usize>>,
}

impl CBasis {
    pub fn new(m: usize, t: usize, k: usize, p: usize) -> Self {
        CBasis {
            ext: exterior_basis(m, k),
            sym: symmetric_basis(t, p),
        }
    }
    pub fn len(&self) -> usize {
        self.ext.len() * self.sym.len()
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
    pub fn index(&self, e: usize, s: usize) -> usize {
        e * self.sym.len() + s
    }
}

/// `Λ^k F ⊗ S_p G`.
pub fn c_term(
    phi_source: &GradedFreeModule,
    phi_target: &GradedFreeModule,
    k: usize,
    p: usize,
) -> GradedFreeModule {
    let (ext, _) = phi_source
        .exterior_power(k)
        .unwrap_or((GradedFreeModule::zero(), Vec::new()));
    let (sym, _) = phi_target
        .symmetric_power(p as i64)
        .expect("nonnegative power");
    ext.tensor(&sym)
}

/// `Λ^k F ⊗ D_m G^* ⊗ Λ^t G^*`.
pub fn tail_term(
    phi_source: &GradedFreeModule,
    phi_target: &GradedFreeModule,
    k: usize,
    m: usize,
) -> GradedFreeModule {
    let (ext, _) = phi_source
        .exterior_power(k)
        .unwrap_or((GradedFreeModule::zero(), Vec::new()));
    let (sym, _) = phi_target
        .dual()
        .symmetric_power(m as i64)
        .expect("nonnegative power");
    let top: i32 = phi_target.twists.iter().sum();
    ext.tensor(&sym).shift(-top)
}

/// `∂: Λ^q F ⊗ S_p G -> Λ^{q-1} F ⊗ S_{p+1} G`,
/// `y_E ⊗ m ↦ Σ_{j ∈ E} ± y_{E∖j} ⊗ φ(y_j) m`.
pub fn koszul_differential<F: Field>(
    p: usize,
    q: usize,
    phi: &GradedMap<F>,
) -> Result<GradedMap<F>> {
    let (t, m) = (phi.nrows(), phi.ncols());
    if q < 1 {
        return Err(Error::OutOfRange(format!(
            "Koszul differential needs q >= 1, got {q}"
        )));
    }
    let src = CBasis::new(m, t, q, p);
    let tgt = CBasis::new(m, t, q - 1, p + 1);
    let src_mod = c_term(&phi.source, &phi.target, q, p);
    let tgt_mod = c_term(&phi.source, &phi.target, q - 1, p + 1);
    let eidx = label_index(&tgt.ext);
    let sidx = label_index(&tgt.sym);
    let mut b = MapBuilder::new(phi.field(), phi.nvars(), src_mod, tgt_mod);
    for (ei, e) in src.ext.iter().enumerate() {
        for (si, s) in src.sym.iter().enumerate() {
            let col = src.index(ei, si);
            for &j in e {
                let (sign, rest) = contract(j, e).expect("index in tuple");
                let er = eidx[&rest];
                for (r, a) in phi.col(j) {
                    let mut s2 = s.clone();
                    s2[*r] += 1;
                    let row = tgt.index(er, sidx[&s2]);
                    b.add(row, col, a.scale_i64(sign));
                }
            }
        }
    }
    b.build()
}

/// Tail differential `Λ^k F ⊗ D_m G^* ⊗ Λ^t G^* -> Λ^{k-1} F ⊗ D_{m-1} G^* ⊗ Λ^t G^*`,
/// contracting by `φ^*(x_r^*)`.
pub fn tail_differential<F: Field>(
    k: usize,
    mm: usize,
    phi: &GradedMap<F>,
) -> Result<GradedMap<F>> {
    let (t, m) = (phi.nrows(), phi.ncols());
    if k < 1 || mm < 1 {
        return Err(Error::OutOfRange(format!(
            "tail differential needs k, m >= 1, got {k}, {mm}"
        )));
    }
    let src = CBasis::new(m, t, k, mm);
    let tgt = CBasis::new(m, t, k - 1, mm - 1);
    let src_mod = tail_term(&phi.source, &phi.target, k, mm);
    let tgt_mod = tail_term(&phi.source, &phi.target, k - 1, mm - 1);
    let eidx = label_index(&tgt.ext);
    let sidx = label_index(&tgt.sym);
    let mut b = MapBuilder::new(phi.field(), phi.nvars(), src_mod, tgt_mod);
    for (ei, e) in src.ext.iter().enumerate() {
        for (si, nu) in src.sym.iter().enumerate() {
            let col = src.index(ei, si);
            for r in 0..t {
                if nu[r] == 0 {
                    continue;
                }
                let mut nu2 = nu.clone();
                nu2[r] -= 1;
                let ni = sidx[&nu2];
                for &j in e {
                    let a = phi.entry(r, j);
                    if a.is_zero() {
                        continue;
                    }
                    let (sign, rest) = contract(j, e).expect("index in tuple");
                    b.add(tgt.index(eidx[&rest], ni), col, a.scale_i64(sign));
                }
            }
        }
    }
    b.build()
}

/// Splice map `ε_i: Λ^{t+i} F ⊗ Λ^t G^* -> Λ^i F`,
/// `y_T ↦ Σ_{L ⊂ T, |L| = t} det(A_L) · ι_L(y_T)`.
pub fn splice_map<F: Field>(i: usize, phi: &GradedMap<F>) -> Result<GradedMap<F>> {
    let (t, m, c) = rows_cols(phi)?;
    if i + 1 > c {
        return Err(Error::OutOfRange(format!(
            "splice map index {i} needs i <= c - 1 = {}",
            c - 1
        )));
    }
    let src_basis = exterior_basis(m, t + i);
    let tgt_basis = exterior_basis(m, i);
    let tidx = label_index(&tgt_basis);
    let src_mod = tail_term(&phi.source, &phi.target, t + i, 0);
    let tgt_mod = c_term(&phi.source, &phi.target, i, 0);
    let rows: Vec<usize> = (0..t).collect();
    let mut memo = HashMap::new();
    let mut minors: HashMap<Vec<usize>, Poly<F>> = HashMap::new();
    let mut b = MapBuilder::new(phi.field(), phi.nvars(), src_mod, tgt_mod);
    for (col, tset) in src_basis.iter().enumerate() {
        for lpos in exterior_basis(tset.len(), t) {
            let l: Vec<usize> = lpos.iter().map(|&k| tset[k]).collect();
            let (sign, rest) = contract_many(&l, tset).expect("subset");
            let det = minors
                .entry(l.clone())
                .or_insert_with(|| minor_laplace(phi, &rows, &l, &mut memo))
                .clone();
            b.add(tidx[&rest], col, det.scale_i64(sign));
        }
    }
    b.build()
}

/// `C_i(φ)`: position `k` holds `Λ^k F ⊗ S_{i-k} G`.
pub fn build_c<F: Field>(i: usize, phi: &GradedMap<F>) -> Result<ChainComplex<F>> {
    let m = phi.ncols();
    let top = i.min(m);
    let terms: Vec<GradedFreeModule> = (0..=top)
        .map(|k| c_term(&phi.source, &phi.target, k, i - k))
        .collect();
    let diffs = (1..=top)
        .map(|k| koszul_differential(i - k, k, phi))
        .collect::<Result<Vec<_>>>()?;
    ChainComplex::new(phi.field(), phi.nvars(), 0, terms, diffs)
}

/// `D_i(φ)` for `i >= -1`: the Koszul head `C_i(φ)` spliced by `ε_i` to the
/// dual tail; `D_c = C_c`, and for `i > c` the complex `C_i` flagged conditional.
pub fn build_d<F: Field>(i: i32, phi: &GradedMap<F>) -> Result<ChainComplex<F>> {
    let (t, _m, c) = rows_cols(phi)?;
    if i < -1 {
        return Err(Error::OutOfRange(format!("D_i needs i >= -1, got {i}")));
    }
    let cx = if i >= c as i32 {
        let mut cx = build_c(i as usize, phi)?;
        cx.conditional = i > c as i32;
        cx
    } else {
        let mut terms = Vec::new();
        let mut diffs = Vec::new();
        let head = if i >= 0 {
            Some(build_c(i as usize, phi)?)
        } else {
            None
        };
        if let Some(h) = &head {
            terms.extend(h.terms.iter().cloned());
            diffs.extend(h.diffs.iter().cloned());
        }
        // Tail position i + 1 + mm holds Λ^{t+i+mm} F ⊗ D_mm G^* ⊗ Λ^t G^*.
        let tail_len = (c as i32 - i - 1) as usize;
        for mm in 0..=tail_len {
            let k = (t as i32 + i + mm as i32) as usize;
            terms.push(tail_term(&phi.source, &phi.target, k, mm));
            if mm == 0 {
                if i >= 0 {
                    diffs.push(splice_map(i as usize, phi)?);
                }
            } else {
                diffs.push(tail_differential(k, mm, phi)?);
            }
        }
        ChainComplex::new(phi.field(), phi.nvars(), 0, terms, diffs)?
    };
    cx.check_d2()?;
    Ok(cx)
}

/// `Hom(cx, R(-twist))` with positions reflected inside the same range:
/// a term `R(-j)` at position `p` becomes `R(j - twist)` at `lo + hi - p`.
pub fn dualize_shift<F: Field>(cx: &ChainComplex<F>, twist: i32) -> ChainComplex<F> {
    let n = cx.terms.len();
    let terms: Vec<GradedFreeModule> = (0..n)
        .rev()
        .map(|k| cx.terms[k].dual().shift(twist))
        .collect();
    let diffs: Vec<GradedMap<F>> = (0..n - 1)
        .rev()
        .map(|k| {
            let d = cx.diffs[k].dual_map();
            let cols = d.columns().to_vec();
            GradedMap::from_columns(
                cx.field(),
                cx.nvars,
                d.source.shift(twist),
                d.target.shift(twist),
                cols,
            )
            .expect("dual of a graded map is graded")
        })
        .collect();
    ChainComplex {
        field: cx.field.clone(),
        nvars: cx.nvars,
        lo: cx.lo,
        terms,
        diffs,
        conditional: cx.conditional,
    }
}

/// Result of [`minimize_tracked`]: the complex and, per position, the
/// original basis indices of the surviving generators.
#[derive(Clone, Debug)]
pub struct Minimized<F: Field> {
    pub complex: ChainComplex<F>,
    pub kept: Vec<Vec<usize>>,
}

impl<F: Field> Minimized<F> {
    /// Original indices cancelled at position `p`.
    pub fn cancelled(&self, original: &ChainComplex<F>, p: i32) -> Vec<usize> {
        let k = (p - original.lo) as usize;
        let kept: std::collections::HashSet<usize> = self.kept[k].iter().copied().collect();
        (0..original.terms[k].rank())
            .filter(|i| !kept.contains(i))
            .collect()
    }
}

/// The twist `v` with `K_A(v) = S_{c-1} M`, found by matching the Betti table
/// of `K_A = Ext^c_R(A, R(-n-1))` (the dual of the minimal resolution of `A`)
/// against the minimized `D_{c-1}`.
pub fn canonical_twist<F: Field>(phi: &GradedMap<F>) -> Result<i32> {
    let (_, _, c) = rows_cols(phi)?;
    let n1 = phi.nvars() as i32;
    let c = c as i32;
    let a = minimize(&build_d(0, phi)?).betti();
    let sym = minimize(&build_d(c - 1, phi)?).betti();
    let canonical = BettiTable {
        entries: a
            .entries
            .iter()
            .map(|(&(i, j), &b)| ((c - i, n1 - j), b))
            .collect(),
    };
    let lowest = |b: &BettiTable| b.entries.keys().filter(|k| k.0 == 0).map(|k| k.1).min();
    let (Some(k0), Some(s0)) = (lowest(&canonical), lowest(&sym)) else {
        return Err(Error::Unsolvable(
            "canonical module or S_{c-1}M has no generators".into(),
        ));
    };
    let v = k0 - s0;
    if canonical.shifted(-v) != sym {
        return Err(Error::Unsolvable(format!(
            "no twist matches K_A with S_{}M:\n{}\nvs\n{}",
            c - 1,
            canonical.render(),
            sym.render()
        )));
    }
    Ok(v)
}

/// Cancel unit entries until the complex is minimal.
pub fn minimize<F: Field>(cx: &ChainComplex<F>) -> ChainComplex<F> {
    minimize_tracked(cx).complex
}

struct WorkMap<F: Field> {
    cols: Vec<BTreeMap<usize, Poly<F>>>,
    rows: Vec<std::collections::BTreeSet<usize>>,
}

impl<F: Field> WorkMap<F> {
    fn from(d: &GradedMap<F>) -> Self {
        let mut rows = vec![std::collections::BTreeSet::new(); d.nrows()];
        let cols = d
            .columns()
            .iter()
            .enumerate()
            .map(|(j, c)| {
                c.iter()
                    .map(|(i, p)| {
                        rows[*i].insert(j);
                        (*i, p.clone())
                    })
                    .collect()
            })
            .collect();
        WorkMap { cols, rows }
    }
    fn set(&mut self, i: usize, j: usize, p: Poly<F>) {
        if p.is_zero() {
            self.cols[j].remove(&i);
            self.rows[i].remove(&j);
        } else {
            self.cols[j].insert(i, p);
            self.rows[i].insert(j);
        }
    }
    fn clear_col(&mut self, j: usize) {
        for (i, _) in std::mem::take(&mut self.cols[j]) {
            self.rows[i].remove(&j);
        }
    }
    fn clear_row(&mut self, i: usize) {
        for j in std::mem::take(&mut self.rows[i]) {
            self.cols[j].remove(&i);
        }
    }
    fn find_unit(&self, alive_cols: &[bool]) -> Option<(usize, usize)> {
        for (j, col) in self.cols.iter().enumerate() {
            if !alive_cols[j] {
                continue;
            }
            for (i, p) in col {
                if p.degree() == Some(0) {
                    return Some((i.to_owned(), j));
                }
            }
        }
        None
    }
}

/// [`minimize`] with survivor tracking. Pivots are taken at the lowest
/// position, then the lowest column, then the lowest row.
pub fn minimize_tracked<F: Field>(cx: &ChainComplex<F>) -> Minimized<F> {
    let f = cx.field.clone();
    let nd = cx.diffs.len();
    let mut work: Vec<WorkMap<F>> = cx.diffs.iter().map(WorkMap::from).collect();
    let mut alive: Vec<Vec<bool>> = cx.terms.iter().map(|t| vec![true; t.rank()]).collect();
    loop {
        let mut found = None;
        for (k, w) in work.iter().enumerate() {
            if let Some((r, s)) = w.find_unit(&alive[k + 1]) {
                found = Some((k, r, s));
                break;
            }
        }
        let Some((k, r, s)) = found else { break };
        // d = work[k]: term k+1 -> term k, unit at (r, s).
        let u = work[k].cols[s][&r].constant_value().expect("unit entry");
        let uinv = f.inv(&u).expect("nonzero unit");
        let col_s: Vec<(usize, Poly<F>)> = work[k].cols[s]
            .iter()
            .filter(|(i, _)| **i != r)
            .map(|(i, p)| (*i, p.clone()))
            .collect();
        let row_r: Vec<(usize, Poly<F>)> = work[k].rows[r]
            .iter()
            .filter(|&&j| j != s)
            .map(|&j| (j, work[k].cols[j][&r].scale(&uinv)))
            .collect();
        for (j, b) in &row_r {
            for (i, a) in &col_s {
                let cur = work[k].cols[*j]
                    .get(i)
                    .cloned()
                    .unwrap_or_else(|| Poly::zero(&f, cx.nvars));
                let upd = cur.sub(&a.mul(b));
                work[k].set(*i, *j, upd);
            }
        }
        work[k].clear_col(s);
        work[k].clear_row(r);
        // Drop row s of the next differential and column r of the previous one.
        if k + 1 < nd {
            work[k + 1].clear_row(s);
        }
        if k >= 1 {
            work[k - 1].clear_col(r);
        }
        alive[k + 1][s] = false;
        alive[k][r] = false;
    }
    let kept: Vec<Vec<usize>> = alive
        .iter()
        .map(|a| {
            a.iter()
                .enumerate()
                .filter(|(_, &x)| x)
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let terms: Vec<GradedFreeModule> = kept
        .iter()
        .enumerate()
        .map(|(k, idx)| GradedFreeModule::new(idx.iter().map(|&i| cx.terms[k].twists[i]).collect()))
        .collect();
    let diffs: Vec<GradedMap<F>> = (0..nd)
        .map(|k| {
            let mut rmap = vec![usize::MAX; cx.terms[k].rank()];
            for (n, &i) in kept[k].iter().enumerate() {
                rmap[i] = n;
            }
            let cols = kept[k + 1]
                .iter()
                .map(|&j| {
                    work[k].cols[j]
                        .iter()
                        .filter(|(i, _)| rmap[**i] != usize::MAX)
                        .map(|(i, p)| (rmap[*i], p.clone()))
                        .collect()
                })
                .collect();
            GradedMap::from_columns(&f, cx.nvars, terms[k + 1].clone(), terms[k].clone(), cols)
                .expect("minimization preserves degrees")
        })
        .collect();
    Minimized {
        complex: ChainComplex {
            field: f.clone(),
            nvars: cx.nvars,
            lo: cx.lo,
            terms,
            diffs,
            conditional: cx.conditional,
        },
        kept,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::det::{BuildMode, DegreeMatrix, DetScheme};
    use crate::field::{Fp, Rationals};

    fn cubic() -> DetScheme<Rationals> {
        let q = Rationals;
        let x = |i| Poly::var(&q, 4, i);
        let dm = DegreeMatrix::linear(2, 2, 3).unwrap();
        DetScheme::build(
            &q,
            dm,
            BuildMode::Explicit(vec![vec![x(0), x(1), x(2)], vec![x(1), x(2), x(3)]]),
        )
        .unwrap()
    }

    #[test]
    fn small_c_complexes() {
        let s = cubic();
        let c0 = build_c(0, &s.phi).unwrap();
        assert_eq!(c0.terms(), &[GradedFreeModule::new(vec![0])]);
        let c1 = build_c(1, &s.phi).unwrap();
        assert_eq!(c1.diffs()[0], s.phi);
        let c2 = build_c(2, &s.phi).unwrap();
        let ranks: Vec<usize> = (0..=2).rev().map(|p| c2.rank_at(p)).collect();
        assert_eq!(ranks, [3, 6, 3]);
        c2.check_d2().unwrap();
    }

    #[test]
    fn eagon_northcott_of_cubic() {
        let s = cubic();
        let d0 = build_d(0, &s.phi).unwrap();
        assert_eq!(d0.term(1), GradedFreeModule::new(vec![2, 2, 2]));
        assert_eq!(d0.term(2), GradedFreeModule::new(vec![3, 3]));
        let eps: Vec<Poly<Rationals>> = (0..3).map(|j| d0.diffs()[0].entry(0, j)).collect();
        assert_eq!(eps, s.minors);
        let h = d0.hilbert(6);
        let v: Vec<i64> = (0..=6).map(|d| h.value(d)).collect();
        assert_eq!(v, [1, 4, 7, 10, 13, 16, 19]);
    }

    #[test]
    fn buchsbaum_rim_shape() {
        let f = Fp::default_prime();
        let s = DetScheme::generic(&f, DegreeMatrix::linear(2, 2, 4).unwrap(), 3).unwrap();
        let d1 = build_d(1, &s.phi).unwrap();
        assert_eq!(d1.term(0), GradedFreeModule::new(vec![0, 0]));
        assert_eq!(d1.term(1), GradedFreeModule::new(vec![1, 1, 1]));
        assert_eq!(d1.term(2), GradedFreeModule::new(vec![3]));
        assert!(d1.rank_exactness(4, 1, true).passed());
    }

    #[test]
    fn all_d_are_complexes_and_exact() {
        let f = Fp::default_prime();
        for (t, c, n) in [(2, 3, 5), (3, 2, 4), (1, 3, 4)] {
            let s = DetScheme::generic(&f, DegreeMatrix::linear(t, c, n).unwrap(), 11).unwrap();
            for i in -1..=(c as i32 + 1) {
                let d = build_d(i, &s.phi).unwrap();
                assert_eq!(d.conditional, i > c as i32);
                if i <= c as i32 {
                    assert_eq!(d.hi(), c as i32);
                    assert!(d.is_minimal());
                    let rep = d.rank_exactness(3, 5, true);
                    assert!(rep.passed(), "t={t} c={c} i={i}: {:?}", rep.failures);
                }
            }
        }
    }

    #[test]
    fn canonical_twist_of_small_schemes() {
        let f = Fp::default_prime();
        // Twisted cubic: K_A(1) = M.
        let s = DetScheme::generic(&f, DegreeMatrix::linear(2, 2, 3).unwrap(), 1).unwrap();
        assert_eq!(canonical_twist(&s.phi).unwrap(), 1);
        // Complete intersection of a quadric and a cubic in P^3: K_A = A(1).
        let ci = DetScheme::generic(
            &f,
            DegreeMatrix::new(1, 2, 3, vec![2, 3], vec![0]).unwrap(),
            2,
        )
        .unwrap();
        assert_eq!(canonical_twist(&ci.phi).unwrap(), -1);
    }

    #[test]
    fn duality_of_the_family() {
        let f = Fp::default_prime();
        let dm = DegreeMatrix::new(2, 3, 5, vec![1, 1, 2, 2], vec![0, 1]).unwrap();
        let s = DetScheme::generic(&f, dm, 4).unwrap();
        let c = 3;
        for k in -1..=c {
            let d = build_d(k, &s.phi).unwrap();
            let dual = dualize_shift(&d, s.ell);
            let other = build_d(c - 1 - k, &s.phi).unwrap();
            assert_eq!(dual.betti(), other.betti(), "k = {k}");
            assert_eq!(dualize_shift(&dual, s.ell), d);
        }
    }

    #[test]
    fn koszul_case_t_one() {
        let q = Rationals;
        let x = |i| Poly::var(&q, 3, i);
        let phi = GradedMap::from_rows(
            &q,
            3,
            GradedFreeModule::new(vec![1, 1, 1]),
            GradedFreeModule::new(vec![0]),
            &[vec![x(0), x(1), x(2)]],
        )
        .unwrap();
        let k = build_d(0, &phi).unwrap();
        let ranks: Vec<usize> = (0..=3).map(|p| k.rank_at(p)).collect();
        assert_eq!(ranks, [1, 3, 3, 1]);
        // Hand-built Koszul complex on x0, x1, x2.
        let d1 = k.diffs()[0].clone();
        assert_eq!(
            (0..3).map(|j| d1.entry(0, j)).collect::<Vec<_>>(),
            vec![x(0), x(1), x(2)]
        );
        let d3 = &k.diffs()[2];
        let col: Vec<Poly<Rationals>> = (0..3).map(|i| d3.entry(i, 0)).collect();
        // y012 ↦ x2 y01 - x1 y02 + x0 y12 up to a global sign.
        let expect = [x(2), x(1).neg(), x(0)];
        assert!(col == expect || col == expect.iter().map(|p| p.neg()).collect::<Vec<_>>());
    }

    #[test]
    fn minimize_cone_of_identity_and_idempotence() {
        let q = Rationals;
        let m = GradedFreeModule::new(vec![2]);
        let id = GradedMap::identity(&q, 3, &m);
        let cx = ChainComplex::new(&q, 3, 0, vec![m.clone(), m], vec![id]).unwrap();
        let mn = minimize(&cx);
        assert!(mn.is_zero());
        let s = cubic();
        let d0 = build_d(0, &s.phi).unwrap();
        assert_eq!(minimize(&d0), d0);
    }

    #[test]
    fn minimize_cancels_and_preserves_exactness() {
        let f = Fp::default_prime();
        let s = DetScheme::generic(&f, DegreeMatrix::linear(2, 2, 4).unwrap(), 8).unwrap();
        let d0 = build_d(0, &s.phi).unwrap();
        // Add a trivial summand R(-1) -> R(-1) between positions 1 and 2.
        let one = GradedFreeModule::new(vec![1]);
        let t1 = GradedFreeModule::direct_sum(&[&d0.term(1), &one]);
        let t2 = GradedFreeModule::direct_sum(&[&d0.term(2), &one]);
        let id = GradedMap::identity(&f, 5, &one);
        let d1 = crate::graded::block_map(
            &f,
            5,
            &[d0.term(1), one.clone()],
            &[d0.term(0)],
            &[vec![Some(&d0.diffs()[0]), None]],
        )
        .unwrap();
        let d2 = crate::graded::block_map(
            &f,
            5,
            &[d0.term(2), one.clone()],
            &[d0.term(1), one.clone()],
            &[vec![Some(&d0.diffs()[1]), None], vec![None, Some(&id)]],
        )
        .unwrap();
        let big =
            ChainComplex::new_checked(&f, 5, 0, vec![d0.term(0), t1, t2], vec![d1, d2]).unwrap();
        let mt = minimize_tracked(&big);
        assert_eq!(mt.complex.betti(), d0.betti());
        assert_eq!(mt.cancelled(&big, 1), vec![3]);
        assert!(mt.complex.rank_exactness(3, 2, true).passed());
        assert_eq!(minimize(&mt.complex), mt.complex);
    }

    #[test]
    fn betti_render_and_json() {
        let s = cubic();
        let b = build_d(0, &s.phi).unwrap().betti();
        let txt = b.render();
        assert_eq!(
            txt,
            "        0  1  2\ntotal:  1  3  2\n    0:  1  -  -\n    1:  -  3  2\n"
        );
        let back: BettiTable = serde_json::from_value(b.to_json()).unwrap();
        assert_eq!(back, b);
    }

    #[test]
    fn complete_intersection_numerator() {
        let f = Fp::default_prime();
        let dm = DegreeMatrix::new(1, 2, 3, vec![2, 3], vec![0]).unwrap();
        let s = DetScheme::generic(&f, dm, 1).unwrap();
        let h = build_d(0, &s.phi).unwrap().hilbert(5);
        let expect: BTreeMap<i32, i64> = [(0, 1), (2, -1), (3, -1), (5, 1)].into_iter().collect();
        assert_eq!(h.numerator, expect);
        assert_eq!(h.numerator_at_one(), 0);
    }
}
