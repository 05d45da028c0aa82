//! Graded free modules, degree-checked maps and multilinear bases.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::SparseVec;
use crate::poly::{binomial, Poly};

/// `⊕_j R(-twists[j])`; the order of twists labels the basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct GradedFreeModule {
    pub twists: Vec<i32>,
}

impl GradedFreeModule {
    pub fn new(twists: Vec<i32>) -> Self {
        GradedFreeModule { twists }
    }
    pub fn zero() -> Self {
        GradedFreeModule { twists: Vec::new() }
    }
    pub fn free(rank: usize, twist: i32) -> Self {
        GradedFreeModule {
            twists: vec![twist; rank],
        }
    }
    pub fn rank(&self) -> usize {
        self.twists.len()
    }
    pub fn is_zero(&self) -> bool {
        self.twists.is_empty()
    }
    pub fn dual(&self) -> Self {
        GradedFreeModule {
            twists: self.twists.iter().map(|t| -t).collect(),
        }
    }
    pub fn shift(&self, s: i32) -> Self {
        GradedFreeModule {
            twists: self.twists.iter().map(|t| t + s).collect(),
        }
    }
    /// Row-major tensor product: the basis pair `(i, j)` sits at `i * other.rank() + j`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut tw = Vec::with_capacity(self.rank() * other.rank());
        for a in &self.twists {
            for b in &other.twists {
                tw.push(a + b);
            }
        }
        GradedFreeModule { twists: tw }
    }
    pub fn direct_sum(parts: &[&GradedFreeModule]) -> Self {
        GradedFreeModule {
            twists: parts
                .iter()
                .flat_map(|p| p.twists.iter().copied())
                .collect(),
        }
    }

    /// `Λ^q` with basis labels (increasing tuples in lex order).
    pub fn exterior_power(&self, q: usize) -> Result<(Self, Vec<Vec<usize>>)> {
        if q > self.rank() {
            return Err(Error::OutOfRange(format!(
                "exterior power {q} of a rank {} module",
                self.rank()
            )));
        }
        let basis = exterior_basis(self.rank(), q);
        let twists = basis
            .iter()
            .map(|s| s.iter().map(|&i| self.twists[i]).sum())
            .collect();
        Ok((GradedFreeModule { twists }, basis))
    }

    /// `S_p` with basis labels (exponent vectors in descending lex order).
    pub fn symmetric_power(&self, p: i64) -> Result<(Self, Vec<Vec<usize>>)> {
        if p < 0 {
            return Err(Error::OutOfRange(format!("symmetric power {p}")));
        }
        let basis = symmetric_basis(self.rank(), p as usize);
        let twists = basis
            .iter()
            .map(|e| {
                e.iter()
                    .zip(&self.twists)
                    .map(|(&k, &t)| k as i32 * t)
                    .sum()
            })
            .collect();
        Ok((GradedFreeModule { twists }, basis))
    }

    /// Rendering such as `R(-2)^3 ++ R(-3)^2`, grouping consecutive equal twists.
    pub fn render(&self) -> String {
        if self.twists.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.twists.len() {
            let t = self.twists[i];
            let mut j = i;
            while j < self.twists.len() && self.twists[j] == t {
                j += 1;
            }
            let base = if t == 0 {
                "R(0)".to_string()
            } else {
                format!("R({})", -t)
            };
            if j - i == 1 {
                parts.push(base);
            } else {
                parts.push(format!("{base}^{}", j - i));
            }
            i = j;
        }
        parts.join(" ++ ")
    }
}

impl fmt::Display for GradedFreeModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Strictly increasing `q`-subsets of `0..n` in lex order.
pub fn exterior_basis(n: usize, q: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(n as u64, q as u64) as usize);
    if q > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..q).collect();
    loop {
        out.push(cur.clone());
        let mut i = q;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - q + i {
                cur[i] += 1;
                for j in i + 1..q {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Exponent vectors of length `n` summing to `p`, in descending lex order
/// (`x_0^p` first).
pub fn symmetric_basis(n: usize, p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if n == 0 {
        if p == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let mut cur = vec![0usize; n];
    fn rec(i: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let n = cur.len();
        if i == n - 1 {
            cur[i] = left;
            out.push(cur.clone());
            cur[i] = 0;
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, p, &mut cur, &mut out);
    out
}

/// Lookup table from basis labels to positions.
pub fn label_index(basis: &[Vec<usize>]) -> HashMap<Vec<usize>, usize> {
    basis
        .iter()
        .enumerate()
        .map(|(i, b)| (b.clone(), i))
        .collect()
}

/// `y ∧ y_T` for a sorted tuple `T`: the sign is `(-1)^{#{i in T: i < y}}`.
pub fn wedge_insert(y: usize, tuple: &[usize]) -> Option<(i64, Vec<usize>)> {
    match tuple.binary_search(&y) {
        Ok(_) => None,
        Err(pos) => {
            let mut t = Vec::with_capacity(tuple.len() + 1);
            t.extend_from_slice(&tuple[..pos]);
            t.push(y);
            t.extend_from_slice(&tuple[pos..]);
            Some((if pos % 2 == 0 { 1 } else { -1 }, t))
        }
    }
}

/// Interior product `y* ⌟ y_T`: removes `y` with sign `(-1)^{position of y}`.
pub fn contract(y: usize, tuple: &[usize]) -> Option<(i64, Vec<usize>)> {
    match tuple.binary_search(&y) {
        Err(_) => None,
        Ok(pos) => {
            let mut t = tuple.to_vec();
            t.remove(pos);
            Some((if pos % 2 == 0 { 1 } else { -1 }, t))
        }
    }
}

/// Iterated contraction `ι_{y_{l_k}*} ∘ … ∘ ι_{y_{l_1}*}` applied to `y_T`
/// (the first listed index is contracted first).
pub fn contract_many(ls: &[usize], tuple: &[usize]) -> Option<(i64, Vec<usize>)> {
    let mut sign = 1;
    let mut cur = tuple.to_vec();
    for &l in ls {
        let (s, t) = contract(l, &cur)?;
        sign *= s;
        cur = t;
    }
    Some((sign, cur))
}

/// A formal integer combination of exterior basis tuples.
pub type ExtElem = BTreeMap<Vec<usize>, i64>;

pub fn wedge_elem(y: usize, f: &ExtElem) -> ExtElem {
    let mut out = ExtElem::new();
    for (t, c) in f {
        if let Some((s, u)) = wedge_insert(y, t) {
            *out.entry(u).or_insert(0) += s * c;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

pub fn contract_elem(y: usize, f: &ExtElem) -> ExtElem {
    let mut out = ExtElem::new();
    for (t, c) in f {
        if let Some((s, u)) = contract(y, t) {
            *out.entry(u).or_insert(0) += s * c;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// A graded map stored by sparse columns; entry `(i, j)` has degree
/// `source.twists[j] - target.twists[i]`.
#[derive(Clone)]
pub struct GradedMap<F: Field> {
    field: F,
    nvars: usize,
    pub source: GradedFreeModule,
    pub target: GradedFreeModule,
    cols: Vec<Vec<(usize, Poly<F>)>>,
}

impl<F: Field> PartialEq for GradedMap<F> {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars
            && self.source == other.source
            && self.target == other.target
            && self.cols == other.cols
    }
}

impl<F: Field> fmt::Debug for GradedMap<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GradedMap {} <- {}", self.target, self.source)?;
        for (j, col) in self.cols.iter().enumerate() {
            for (i, p) in col {
                writeln!(f, "  ({i},{j}) {p}")?;
            }
        }
        Ok(())
    }
}

/// Accumulates entries of a map before degree checking.
pub struct MapBuilder<F: Field> {
    field: F,
    nvars: usize,
    source: GradedFreeModule,
    target: GradedFreeModule,
    cols: Vec<BTreeMap<usize, Poly<F>>>,
}

impl<F: Field> MapBuilder<F> {
    pub fn new(
        field: &F,
        nvars: usize,
        source: GradedFreeModule,
        target: GradedFreeModule,
    ) -> Self {
        let n = source.rank();
        MapBuilder {
            field: field.clone(),
            nvars,
            source,
            target,
            cols: (0..n).map(|_| BTreeMap::new()).collect(),
        }
    }

    pub fn add(&mut self, row: usize, col: usize, p: Poly<F>) {
        if p.is_zero() {
            return;
        }
        assert!(
            row < self.target.rank() && col < self.source.rank(),
            "entry out of range"
        );
        match self.cols[col].get_mut(&row) {
            Some(e) => *e = e.add(&p),
            None => {
                self.cols[col].insert(row, p);
            }
        }
    }

    pub fn add_scalar(&mut self, row: usize, col: usize, c: i64) {
        if c != 0 {
            let p = Poly::from_i64(&self.field, self.nvars, c);
            self.add(row, col, p);
        }
    }

    pub fn build(self) -> Result<GradedMap<F>> {
        let cols = self
            .cols
            .into_iter()
            .map(|m| m.into_iter().filter(|(_, p)| !p.is_zero()).collect())
            .collect();
        GradedMap::from_columns(&self.field, self.nvars, self.source, self.target, cols)
    }
}

impl<F: Field> GradedMap<F> {
    pub fn zero(
        field: &F,
        nvars: usize,
        source: GradedFreeModule,
        target: GradedFreeModule,
    ) -> Self {
        let n = source.rank();
        GradedMap {
            field: field.clone(),
            nvars,
            source,
            target,
            cols: vec![Vec::new(); n],
        }
    }

    pub fn identity(field: &F, nvars: usize, m: &GradedFreeModule) -> Self {
        let cols = (0..m.rank())
            .map(|j| vec![(j, Poly::one(field, nvars))])
            .collect();
        GradedMap {
            field: field.clone(),
            nvars,
            source: m.clone(),
            target: m.clone(),
            cols,
        }
    }

    /// From sparse columns; rows must be increasing within each column.
    pub fn from_columns(
        field: &F,
        nvars: usize,
        source: GradedFreeModule,
        target: GradedFreeModule,
        cols: Vec<Vec<(usize, Poly<F>)>>,
    ) -> Result<Self> {
        if cols.len() != source.rank() {
            return Err(Error::Incompatible(format!(
                "{} columns for a source of rank {}",
                cols.len(),
                source.rank()
            )));
        }
        let m = GradedMap {
            field: field.clone(),
            nvars,
            source,
            target,
            cols,
        };
        m.check_degrees()?;
        Ok(m)
    }

    /// From a dense row-major matrix of polynomials.
    pub fn from_rows(
        field: &F,
        nvars: usize,
        source: GradedFreeModule,
        target: GradedFreeModule,
        rows: &[Vec<Poly<F>>],
    ) -> Result<Self> {
        if rows.len() != target.rank() || rows.iter().any(|r| r.len() != source.rank()) {
            return Err(Error::Incompatible(
                "matrix shape does not match modules".into(),
            ));
        }
        let mut cols = vec![Vec::new(); source.rank()];
        for (i, r) in rows.iter().enumerate() {
            for (j, p) in r.iter().enumerate() {
                if !p.is_zero() {
                    cols[j].push((i, p.clone()));
                }
            }
        }
        Self::from_columns(field, nvars, source, target, cols)
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn nvars(&self) -> usize {
        self.nvars
    }
    pub fn nrows(&self) -> usize {
        self.target.rank()
    }
    pub fn ncols(&self) -> usize {
        self.source.rank()
    }
    pub fn col(&self, j: usize) -> &[(usize, Poly<F>)] {
        &self.cols[j]
    }
    pub fn columns(&self) -> &[Vec<(usize, Poly<F>)>] {
        &self.cols
    }
    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }
    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn entry(&self, i: usize, j: usize) -> Poly<F> {
        self.cols[j]
            .iter()
            .find(|(r, _)| *r == i)
            .map(|(_, p)| p.clone())
            .unwrap_or_else(|| Poly::zero(&self.field, self.nvars))
    }

    /// Degree of entry `(i, j)` required by the twists.
    pub fn expected_degree(&self, i: usize, j: usize) -> i32 {
        self.source.twists[j] - self.target.twists[i]
    }

    pub fn check_degrees(&self) -> Result<()> {
        for (j, col) in self.cols.iter().enumerate() {
            let mut last = None;
            for (i, p) in col {
                if *i >= self.target.rank() {
                    return Err(Error::OutOfRange(format!("row {i} in column {j}")));
                }
                if last.map_or(false, |l| l >= *i) {
                    return Err(Error::InvalidInput(format!("unsorted column {j}")));
                }
                last = Some(*i);
                if p.nvars() != self.nvars {
                    return Err(Error::Incompatible(format!(
                        "entry ({i},{j}) variable count"
                    )));
                }
                if let Some(d) = p.degree() {
                    let e = self.expected_degree(*i, j);
                    if d as i32 != e {
                        return Err(Error::DegreeMismatch(format!(
                            "entry ({i},{j}) has degree {d}, twists require {e}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether every nonzero entry lies in the maximal ideal (no units).
    pub fn is_minimal(&self) -> bool {
        self.cols
            .iter()
            .all(|c| c.iter().all(|(_, p)| p.degree().map_or(true, |d| d > 0)))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedMap<F>) -> Result<GradedMap<F>> {
        if other.target != self.source {
            return Err(Error::Incompatible(format!(
                "cannot compose: {} vs {}",
                other.target, self.source
            )));
        }
        let mut cols = Vec::with_capacity(other.ncols());
        for ocol in &other.cols {
            let mut acc: BTreeMap<usize, Poly<F>> = BTreeMap::new();
            for (k, b) in ocol {
                for (i, a) in &self.cols[*k] {
                    let p = a.mul(b);
                    match acc.get_mut(i) {
                        Some(e) => *e = e.add(&p),
                        None => {
                            acc.insert(*i, p);
                        }
                    }
                }
            }
            cols.push(acc.into_iter().filter(|(_, p)| !p.is_zero()).collect());
        }
        GradedMap::from_columns(
            &self.field,
            self.nvars,
            other.source.clone(),
            self.target.clone(),
            cols,
        )
    }

    fn zip_with(&self, other: &GradedMap<F>, negate: bool) -> Result<GradedMap<F>> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::Incompatible(
                "sum of maps with different shapes".into(),
            ));
        }
        let mut cols = Vec::with_capacity(self.ncols());
        for (a, b) in self.cols.iter().zip(&other.cols) {
            let mut acc: BTreeMap<usize, Poly<F>> = a.iter().cloned().collect();
            for (i, p) in b {
                let p = if negate { p.neg() } else { p.clone() };
                match acc.get_mut(i) {
                    Some(e) => *e = e.add(&p),
                    None => {
                        acc.insert(*i, p);
                    }
                }
            }
            cols.push(acc.into_iter().filter(|(_, p)| !p.is_zero()).collect());
        }
        Ok(GradedMap {
            field: self.field.clone(),
            nvars: self.nvars,
            source: self.source.clone(),
            target: self.target.clone(),
            cols,
        })
    }

    pub fn add(&self, other: &GradedMap<F>) -> Result<GradedMap<F>> {
        self.zip_with(other, false)
    }

    pub fn sub(&self, other: &GradedMap<F>) -> Result<GradedMap<F>> {
        self.zip_with(other, true)
    }

    pub fn neg(&self) -> GradedMap<F> {
        self.scale_i64(-1)
    }

    pub fn scale_i64(&self, c: i64) -> GradedMap<F> {
        let cols = self
            .cols
            .iter()
            .map(|col| {
                col.iter()
                    .map(|(i, p)| (*i, p.scale_i64(c)))
                    .filter(|(_, p)| !p.is_zero())
                    .collect()
            })
            .collect();
        GradedMap {
            field: self.field.clone(),
            nvars: self.nvars,
            source: self.source.clone(),
            target: self.target.clone(),
            cols,
        }
    }

    /// The transpose `Hom(target, R) -> Hom(source, R)`.
    pub fn dual_map(&self) -> GradedMap<F> {
        let mut cols: Vec<Vec<(usize, Poly<F>)>> = vec![Vec::new(); self.nrows()];
        for (j, col) in self.cols.iter().enumerate() {
            for (i, p) in col {
                cols[*i].push((j, p.clone()));
            }
        }
        GradedMap {
            field: self.field.clone(),
            nvars: self.nvars,
            source: self.target.dual(),
            target: self.source.dual(),
            cols,
        }
    }

    /// Kronecker product in row-major basis order.
    pub fn tensor(&self, other: &GradedMap<F>) -> GradedMap<F> {
        let source = self.source.tensor(&other.source);
        let target = self.target.tensor(&other.target);
        let (r2, c2) = (other.nrows(), other.ncols());
        let mut cols = vec![Vec::new(); source.rank()];
        for (j1, col1) in self.cols.iter().enumerate() {
            for (j2, col2) in other.cols.iter().enumerate() {
                let c = &mut cols[j1 * c2 + j2];
                for (i1, p1) in col1 {
                    for (i2, p2) in col2 {
                        let p = p1.mul(p2);
                        if !p.is_zero() {
                            c.push((i1 * r2 + i2, p));
                        }
                    }
                }
                c.sort_by_key(|(i, _)| *i);
            }
        }
        GradedMap {
            field: self.field.clone(),
            nvars: self.nvars,
            source,
            target,
            cols,
        }
    }

    /// Restrict to a subset of rows and columns (in the given orders).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> GradedMap<F> {
        let mut rmap = vec![usize::MAX; self.nrows()];
        for (k, &r) in rows.iter().enumerate() {
            rmap[r] = k;
        }
        let new_cols = cols
            .iter()
            .map(|&j| {
                let mut c: Vec<(usize, Poly<F>)> = self.cols[j]
                    .iter()
                    .filter(|(i, _)| rmap[*i] != usize::MAX)
                    .map(|(i, p)| (rmap[*i], p.clone()))
                    .collect();
                c.sort_by_key(|(i, _)| *i);
                c
            })
            .collect();
        GradedMap {
            field: self.field.clone(),
            nvars: self.nvars,
            source: GradedFreeModule::new(cols.iter().map(|&j| self.source.twists[j]).collect()),
            target: GradedFreeModule::new(rows.iter().map(|&i| self.target.twists[i]).collect()),
            cols: new_cols,
        }
    }

    /// Apply a polynomial map to every entry (e.g. a substitution).
    pub fn map_entries<G: Field>(
        &self,
        field: &G,
        nvars: usize,
        f: impl Fn(&Poly<F>) -> Result<Poly<G>>,
    ) -> Result<GradedMap<G>> {
        let mut cols = Vec::with_capacity(self.ncols());
        for col in &self.cols {
            let mut c = Vec::new();
            for (i, p) in col {
                let q = f(p)?;
                if !q.is_zero() {
                    c.push((*i, q));
                }
            }
            cols.push(c);
        }
        GradedMap::from_columns(field, nvars, self.source.clone(), self.target.clone(), cols)
    }

    /// Evaluate at a point: sparse numeric columns.
    pub fn eval_columns(&self, point: &[F::Elem]) -> Vec<SparseVec<F>> {
        self.cols
            .iter()
            .map(|col| {
                col.iter()
                    .filter_map(|(i, p)| {
                        let v = p.eval_unchecked(point);
                        if self.field.is_zero(&v) {
                            None
                        } else {
                            Some((*i as u32, v))
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Short description of the first few nonzero entries (for error reports).
    pub fn summary(&self, max: usize) -> String {
        let mut parts = Vec::new();
        'outer: for (j, col) in self.cols.iter().enumerate() {
            for (i, p) in col {
                if parts.len() == max {
                    parts.push("...".to_string());
                    break 'outer;
                }
                parts.push(format!("({i},{j}): {p}"));
            }
        }
        format!("{} nonzero entries [{}]", self.nnz(), parts.join("; "))
    }
}

/// Assemble a block matrix; `blocks[r][c]` maps `sources[c] -> targets[r]`.
pub fn block_map<F: Field>(
    field: &F,
    nvars: usize,
    sources: &[GradedFreeModule],
    targets: &[GradedFreeModule],
    blocks: &[Vec<Option<&GradedMap<F>>>],
) -> Result<GradedMap<F>> {
    let source = GradedFreeModule::direct_sum(&sources.iter().collect::<Vec<_>>());
    let target = GradedFreeModule::direct_sum(&targets.iter().collect::<Vec<_>>());
    let mut roff = vec![0usize];
    for t in targets {
        roff.push(roff.last().unwrap() + t.rank());
    }
    let mut coff = vec![0usize];
    for s in sources {
        coff.push(coff.last().unwrap() + s.rank());
    }
    let mut cols: Vec<Vec<(usize, Poly<F>)>> = vec![Vec::new(); source.rank()];
    for (r, row) in blocks.iter().enumerate() {
        for (c, b) in row.iter().enumerate() {
            if let Some(b) = b {
                if b.source != sources[c] || b.target != targets[r] {
                    return Err(Error::Incompatible(format!("block ({r},{c}) shape")));
                }
                for (j, col) in b.cols.iter().enumerate() {
                    for (i, p) in col {
                        cols[coff[c] + j].push((roff[r] + i, p.clone()));
                    }
                }
            }
        }
    }
    for c in cols.iter_mut() {
        c.sort_by_key(|(i, _)| *i);
    }
    GradedMap::from_columns(field, nvars, source, target, cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    #[test]
    fn twists_of_multilinear_constructions() {
        let m = GradedFreeModule::new(vec![2, 3]);
        assert_eq!(m.dual().twists, vec![-2, -3]);
        assert_eq!(m.dual().dual(), m);
        let a = GradedFreeModule::free(2, 1);
        let b = GradedFreeModule::free(1, 2);
        assert_eq!(a.tensor(&b).twists, vec![3, 3]);
        assert_eq!(
            GradedFreeModule::free(3, 0)
                .tensor(&GradedFreeModule::free(2, 0))
                .rank(),
            6
        );
        let f = GradedFreeModule::new(vec![1, 1, 2]);
        let (e2, lab) = f.exterior_power(2).unwrap();
        assert_eq!(e2.twists, vec![2, 3, 3]);
        assert_eq!(lab, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(f.exterior_power(0).unwrap().0.twists, vec![0]);
        assert_eq!(f.exterior_power(3).unwrap().0.twists, vec![4]);
        assert!(f.exterior_power(4).is_err());
        let g = GradedFreeModule::free(2, 0);
        assert_eq!(g.symmetric_power(2).unwrap().0.twists, vec![0, 0, 0]);
        assert_eq!(g.symmetric_power(0).unwrap().0.twists, vec![0]);
        assert_eq!(
            g.symmetric_power(1).unwrap().1,
            vec![vec![1, 0], vec![0, 1]]
        );
        assert!(g.symmetric_power(-1).is_err());
    }

    #[test]
    fn wedge_and_contraction_signs() {
        assert_eq!(wedge_insert(0, &[1, 2]), Some((1, vec![0, 1, 2])));
        assert_eq!(wedge_insert(1, &[0, 2]), Some((-1, vec![0, 1, 2])));
        assert_eq!(wedge_insert(0, &[0, 1]), None);
        assert_eq!(contract(0, &[0, 1]), Some((1, vec![1])));
        assert_eq!(contract(1, &[0, 1]), Some((-1, vec![0])));
        assert_eq!(contract(2, &[0, 1]), None);
    }

    #[test]
    fn render_twists() {
        let m = GradedFreeModule::new(vec![2, 2, 2, 3, 3]);
        assert_eq!(m.render(), "R(-2)^3 ++ R(-3)^2");
    }

    #[test]
    fn compose_and_dual() {
        let q = Rationals;
        let x = |i| Poly::var(&q, 2, i);
        let src = GradedFreeModule::new(vec![1, 1]);
        let tgt = GradedFreeModule::new(vec![0]);
        let f = GradedMap::from_rows(&q, 2, src.clone(), tgt.clone(), &[vec![x(0), x(1)]]).unwrap();
        let g = GradedMap::from_rows(
            &q,
            2,
            GradedFreeModule::new(vec![2]),
            src,
            &[vec![x(1)], vec![x(0).neg()]],
        )
        .unwrap();
        assert!(f.compose(&g).unwrap().is_zero());
        let fg = f.compose(&g).unwrap();
        assert_eq!(fg.dual_map(), g.dual_map().compose(&f.dual_map()).unwrap());
        let bad = GradedMap::from_rows(&q, 2, GradedFreeModule::new(vec![2]), tgt, &[vec![x(0)]]);
        assert!(matches!(bad, Err(Error::DegreeMismatch(_))));
    }
}
