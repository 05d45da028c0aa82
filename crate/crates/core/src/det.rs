//! Determinantal input: degree matrices, homogeneous matrices and their minors.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{exterior_basis, GradedFreeModule, GradedMap};
use crate::poly::{binomial, random_form_rng, Poly, MAX_VARS};

/// Shape data of a `t × (t+c-1)` homogeneous matrix in `n+1` variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegreeMatrix {
    pub t: usize,
    pub c: usize,
    pub n: usize,
    /// Column degrees, ascending, length `t+c-1`.
    pub a: Vec<i32>,
    /// Row degrees, ascending, length `t`.
    pub b: Vec<i32>,
    pub positive_entries: bool,
}

impl DegreeMatrix {
    pub fn new(t: usize, c: usize, n: usize, mut a: Vec<i32>, mut b: Vec<i32>) -> Result<Self> {
        if t < 1 || c < 1 {
            return Err(Error::InvalidInput(format!(
                "t = {t}, c = {c} must be positive"
            )));
        }
        if n < c {
            return Err(Error::InvalidInput(format!("n = {n} smaller than c = {c}")));
        }
        if n + 1 > MAX_VARS {
            return Err(Error::InvalidInput(format!(
                "n = {n} exceeds the variable limit"
            )));
        }
        if a.len() != t + c - 1 || b.len() != t {
            return Err(Error::InvalidInput(format!(
                "expected {} column and {t} row degrees, got {} and {}",
                t + c - 1,
                a.len(),
                b.len()
            )));
        }
        a.sort_unstable();
        b.sort_unstable();
        Ok(DegreeMatrix {
            t,
            c,
            n,
            a,
            b,
            positive_entries: false,
        })
    }

    /// Enforce `d_ij > 0` for all entries.
    pub fn with_positive_entries(mut self) -> Result<Self> {
        for i in 0..self.t {
            for j in 0..self.cols() {
                if self.d(i, j) <= 0 {
                    return Err(Error::InvalidInput(format!(
                        "entry ({i},{j}) has degree {} but positive entries are required",
                        self.d(i, j)
                    )));
                }
            }
        }
        self.positive_entries = true;
        Ok(self)
    }

    /// All entries linear: `a_j = 1`, `b_i = 0`.
    pub fn linear(t: usize, c: usize, n: usize) -> Result<Self> {
        Self::new(t, c, n, vec![1; t + c - 1], vec![0; t])?.with_positive_entries()
    }

    /// From a grid of entry degrees `d_ij`; normalizes `b_1 = 0`.
    pub fn from_entry_degrees(n: usize, grid: &[Vec<i32>]) -> Result<Self> {
        let t = grid.len();
        if t == 0 {
            return Err(Error::InvalidInput("empty degree grid".into()));
        }
        let m = grid[0].len();
        if m < t {
            return Err(Error::InvalidInput(format!(
                "grid has {m} columns but {t} rows"
            )));
        }
        for (i, row) in grid.iter().enumerate() {
            if row.len() != m {
                return Err(Error::InvalidInput(format!(
                    "row {i} has {} entries, expected {m}",
                    row.len()
                )));
            }
        }
        let c = m - t + 1;
        let a: Vec<i32> = grid[0].clone();
        let b: Vec<i32> = (0..t).map(|i| grid[0][0] - grid[i][0]).collect();
        for i in 0..t {
            for j in 0..m {
                if a[j] - b[i] != grid[i][j] {
                    return Err(Error::InvalidInput(format!(
                        "entry ({i},{j}) = {} is inconsistent with a row/column degree splitting",
                        grid[i][j]
                    )));
                }
            }
        }
        let shift = *b.iter().min().unwrap();
        let a = a.iter().map(|x| x - shift).collect();
        let b = b.iter().map(|x| x - shift).collect();
        let mut dm = Self::new(t, c, n, a, b)?;
        if grid.iter().flatten().all(|&d| d > 0) {
            dm.positive_entries = true;
        }
        Ok(dm)
    }

    pub fn cols(&self) -> usize {
        self.t + self.c - 1
    }
    pub fn nvars(&self) -> usize {
        self.n + 1
    }
    pub fn d(&self, i: usize, j: usize) -> i32 {
        self.a[j] - self.b[i]
    }
    pub fn is_linear(&self) -> bool {
        (0..self.t).all(|i| (0..self.cols()).all(|j| self.d(i, j) == 1))
    }
    pub fn ell(&self) -> i32 {
        self.a.iter().sum::<i32>() - self.b.iter().sum::<i32>()
    }
    pub fn grid(&self) -> Vec<Vec<i32>> {
        (0..self.t)
            .map(|i| (0..self.cols()).map(|j| self.d(i, j)).collect())
            .collect()
    }
}

/// Closed-form invariants of a generic instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedInvariants {
    pub codim_i: usize,
    pub codim_j_generic: usize,
    pub deg_linear: Option<u64>,
    pub ell: i32,
}

pub fn expected_invariants(dm: &DegreeMatrix) -> ExpectedInvariants {
    ExpectedInvariants {
        codim_i: dm.c,
        codim_j_generic: (2 * (dm.c + 1)).min(dm.n + 1),
        deg_linear: if dm.is_linear() {
            Some(binomial((dm.t + dm.c - 1) as u64, dm.c as u64))
        } else {
            None
        },
        ell: dm.ell(),
    }
}

/// How the matrix entries are produced.
pub enum BuildMode<F: Field> {
    GenericRandom {
        seed: u64,
    },
    /// Row-major entries.
    Explicit(Vec<Vec<Poly<F>>>),
}

/// A determinantal scheme: the matrix `A` as a map `φ: F -> G` and its maximal minors.
#[derive(Clone, Debug)]
pub struct DetScheme<F: Field> {
    pub field: F,
    pub degrees: DegreeMatrix,
    pub phi: GradedMap<F>,
    /// Maximal minors indexed by the lex-ordered `t`-subsets of columns.
    pub minors: Vec<Poly<F>>,
    pub ell: i32,
    pub minimal: bool,
    pub seed: Option<u64>,
}

impl<F: Field> DetScheme<F> {
    pub fn build(field: &F, degrees: DegreeMatrix, mode: BuildMode<F>) -> Result<Self> {
        let nv = degrees.nvars();
        let (t, m) = (degrees.t, degrees.cols());
        let (entries, seed) = match mode {
            BuildMode::GenericRandom { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut rows = Vec::with_capacity(t);
                for i in 0..t {
                    let mut row = Vec::with_capacity(m);
                    for j in 0..m {
                        let d = degrees.d(i, j);
                        let p = if d > 0 {
                            random_form_rng(field, nv, d as i64, &mut rng)?
                        } else if d == 0 {
                            Poly::constant(field, nv, field.random_nonzero(&mut rng))
                        } else {
                            Poly::zero(field, nv)
                        };
                        row.push(p);
                    }
                    rows.push(row);
                }
                (rows, Some(seed))
            }
            BuildMode::Explicit(rows) => {
                if rows.len() != t || rows.iter().any(|r| r.len() != m) {
                    return Err(Error::InvalidInput(format!("expected a {t}x{m} matrix")));
                }
                for (i, row) in rows.iter().enumerate() {
                    for (j, p) in row.iter().enumerate() {
                        if p.nvars() != nv {
                            return Err(Error::InvalidInput(format!(
                                "entry ({i},{j}) uses {} variables, expected {nv}",
                                p.nvars()
                            )));
                        }
                        if let Some(d) = p.degree() {
                            if d as i32 != degrees.d(i, j) {
                                return Err(Error::DegreeMismatch(format!(
                                    "entry ({i},{j}) has degree {d}, expected {}",
                                    degrees.d(i, j)
                                )));
                            }
                        } else if degrees.positive_entries {
                            return Err(Error::InvalidInput(format!(
                                "entry ({i},{j}) is zero but positive entries are required"
                            )));
                        }
                    }
                }
                (rows, None)
            }
        };
        let source = GradedFreeModule::new(degrees.a.clone());
        let target = GradedFreeModule::new(degrees.b.clone());
        let phi = GradedMap::from_rows(field, nv, source, target, &entries)?;
        let minimal = phi.is_minimal();
        let mut memo = HashMap::new();
        let rows: Vec<usize> = (0..t).collect();
        let minors = exterior_basis(m, t)
            .iter()
            .map(|cols| minor_laplace(&phi, &rows, cols, &mut memo))
            .collect();
        Ok(DetScheme {
            field: field.clone(),
            ell: degrees.ell(),
            degrees,
            phi,
            minors,
            minimal,
            seed,
        })
    }

    pub fn generic(field: &F, degrees: DegreeMatrix, seed: u64) -> Result<Self> {
        Self::build(field, degrees, BuildMode::GenericRandom { seed })
    }

    pub fn t(&self) -> usize {
        self.degrees.t
    }
    pub fn c(&self) -> usize {
        self.degrees.c
    }
    pub fn n(&self) -> usize {
        self.degrees.n
    }
    pub fn nvars(&self) -> usize {
        self.degrees.nvars()
    }
    pub fn ncols(&self) -> usize {
        self.degrees.cols()
    }
    /// Entry `A[i][j]`.
    pub fn entry(&self, i: usize, j: usize) -> Poly<F> {
        self.phi.entry(i, j)
    }

    /// The maximal minor on the given sorted column subset.
    pub fn minor(&self, cols: &[usize]) -> Poly<F> {
        let rows: Vec<usize> = (0..self.t()).collect();
        minor_laplace(&self.phi, &rows, cols, &mut HashMap::new())
    }

    /// Minor on arbitrary rows and (ordered) columns; the column order matters for the sign.
    pub fn minor_rows_cols(&self, rows: &[usize], cols: &[usize]) -> Poly<F> {
        minor_laplace(&self.phi, rows, cols, &mut HashMap::new())
    }

    /// Determinant of the `t × t` matrix whose columns are the given column
    /// vectors; a column is either `Col(j)` (column `j` of `A`) or `Unit(r)`.
    pub fn det_columns(&self, cols: &[DetCol]) -> Poly<F> {
        let t = self.t();
        assert_eq!(cols.len(), t);
        let f = &self.field;
        let nv = self.nvars();
        let get = |i: usize, c: &DetCol| -> Poly<F> {
            match c {
                DetCol::Col(j) => self.entry(i, *j),
                DetCol::Unit(r) => {
                    if *r == i {
                        Poly::one(f, nv)
                    } else {
                        Poly::zero(f, nv)
                    }
                }
            }
        };
        let mat: Vec<Vec<Poly<F>>> = (0..t)
            .map(|i| cols.iter().map(|c| get(i, c)).collect())
            .collect();
        det_generic(f, nv, &mat)
    }

    /// All `(t-1) × (t-1)` minors, rows and columns in lex order.
    pub fn submaximal_minors(&self) -> Result<Vec<Poly<F>>> {
        let t = self.t();
        if t < 2 {
            return Err(Error::InvalidInput("submaximal minors need t >= 2".into()));
        }
        let mut memo = HashMap::new();
        let mut out = Vec::new();
        for rows in exterior_basis(t, t - 1) {
            for cols in exterior_basis(self.ncols(), t - 1) {
                out.push(minor_laplace(&self.phi, &rows, &cols, &mut memo));
            }
        }
        Ok(out)
    }

    /// Predicted degree of the maximal minor on `cols`.
    pub fn minor_degree(&self, cols: &[usize]) -> i32 {
        cols.iter().map(|&j| self.degrees.a[j]).sum::<i32>() - self.degrees.b.iter().sum::<i32>()
    }

    /// Evaluate the matrix at a point.
    pub fn eval_matrix(&self, point: &[F::Elem]) -> Vec<Vec<F::Elem>> {
        (0..self.t())
            .map(|i| {
                (0..self.ncols())
                    .map(|j| self.entry(i, j).eval_unchecked(point))
                    .collect()
            })
            .collect()
    }
}

/// Column description for [`DetScheme::det_columns`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetCol {
    Col(usize),
    Unit(usize),
}

/// Determinant by Laplace expansion along the first row.
pub fn det_generic<F: Field>(field: &F, nvars: usize, m: &[Vec<Poly<F>>]) -> Poly<F> {
    let n = m.len();
    if n == 0 {
        return Poly::one(field, nvars);
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Poly::zero(field, nvars);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let sub: Vec<Vec<Poly<F>>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let d = det_generic(field, nvars, &sub);
        let term = m[0][j].mul(&d);
        acc = if j % 2 == 0 {
            acc.add(&term)
        } else {
            acc.sub(&term)
        };
    }
    acc
}

/// Minor of `phi` on `rows` × `cols` by expansion along the first row,
/// memoized on (remaining rows, column set).
pub fn minor_laplace<F: Field>(
    phi: &GradedMap<F>,
    rows: &[usize],
    cols: &[usize],
    memo: &mut HashMap<(Vec<usize>, Vec<usize>), Poly<F>>,
) -> Poly<F> {
    let field = phi.field();
    let nv = phi.nvars();
    assert_eq!(rows.len(), cols.len());
    if rows.is_empty() {
        return Poly::one(field, nv);
    }
    let key = (rows.to_vec(), cols.to_vec());
    if let Some(p) = memo.get(&key) {
        return p.clone();
    }
    let r0 = rows[0];
    let mut acc = Poly::zero(field, nv);
    for (k, &j) in cols.iter().enumerate() {
        let e = phi.entry(r0, j);
        if e.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols
            .iter()
            .enumerate()
            .filter(|(kk, _)| *kk != k)
            .map(|(_, &c)| c)
            .collect();
        let sub = minor_laplace(phi, &rows[1..], &rest, memo);
        let term = e.mul(&sub);
        acc = if k % 2 == 0 {
            acc.add(&term)
        } else {
            acc.sub(&term)
        };
    }
    memo.insert(key, acc.clone());
    acc
}

/// Expansion along the last row (independent check of [`minor_laplace`]).
pub fn minor_last_row<F: Field>(phi: &GradedMap<F>, rows: &[usize], cols: &[usize]) -> Poly<F> {
    let field = phi.field();
    let nv = phi.nvars();
    let k = rows.len();
    if k == 0 {
        return Poly::one(field, nv);
    }
    let rl = rows[k - 1];
    let mut acc = Poly::zero(field, nv);
    for (idx, &j) in cols.iter().enumerate() {
        let e = phi.entry(rl, j);
        if e.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols
            .iter()
            .enumerate()
            .filter(|(kk, _)| *kk != idx)
            .map(|(_, &c)| c)
            .collect();
        let sub = minor_last_row(phi, &rows[..k - 1], &rest);
        let term = e.mul(&sub);
        let sign = (k - 1 + idx) % 2 == 0;
        acc = if sign { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

/// Which ideal's zero set to avoid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Locus {
    /// Maximal minors.
    I,
    /// Submaximal minors.
    J,
}

/// A random point at which every generator of the chosen ideal is nonzero.
pub fn random_point_on_complement<F: Field>(
    s: &DetScheme<F>,
    which: Locus,
    trials: usize,
    seed: u64,
) -> Option<(Vec<F::Elem>, usize)> {
    let gens = match which {
        Locus::I => s.minors.clone(),
        Locus::J => s.submaximal_minors().ok()?,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = &s.field;
    for k in 1..=trials {
        let p: Vec<F::Elem> = (0..s.nvars()).map(|_| f.random(&mut rng)).collect();
        if gens.iter().all(|g| !f.is_zero(&g.eval_unchecked(&p))) {
            return Some((p, k));
        }
    }
    None
}

/// A random point of `K^{n+1}` (used where only genericity matters).
pub fn random_point<F: Field>(field: &F, nvars: usize, seed: u64) -> Vec<F::Elem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..nvars).map(|_| field.random(&mut rng)).collect()
}
