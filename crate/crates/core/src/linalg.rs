//! Sparse Gaussian elimination over an exact field.
//!
//! Vectors are sparse lists of `(column, value)` pairs with increasing
//! columns. Pivots are chosen at the lowest column index, and rows are kept
//! in echelon (not reduced echelon) form, which is enough for ranks, normal
//! forms modulo a subspace, kernels and solving.

use crate::error::{Error, Result};
use crate::field::Field;

pub type SparseVec<F> = Vec<(u32, <F as Field>::Elem)>;

/// Outcome of inserting a vector into an [`Echelon`].
#[derive(Clone, Debug)]
pub enum Inserted<F: Field> {
    /// The vector was independent and produced a pivot in this column.
    Pivot(u32),
    /// The vector was dependent; with tracking, the relation among inputs
    /// (coefficients indexed by input number) is returned.
    Dependent(Option<SparseVec<F>>),
}

struct Tracking<F: Field> {
    max_inputs: usize,
    combos: Vec<SparseVec<F>>,
    scratch: Vec<F::Acc>,
}

/// Incremental row echelon form of a subspace of `F^ncols`.
pub struct Echelon<F: Field> {
    field: F,
    ncols: usize,
    rows: Vec<SparseVec<F>>,
    pivot_row: Vec<u32>,
    scratch: Vec<F::Acc>,
    tracking: Option<Tracking<F>>,
    inputs: usize,
}

impl<F: Field> Echelon<F> {
    pub fn new(field: &F, ncols: usize) -> Self {
        Echelon {
            field: field.clone(),
            ncols,
            rows: Vec::new(),
            pivot_row: vec![0; ncols],
            scratch: vec![field.acc_zero(); ncols],
            tracking: None,
            inputs: 0,
        }
    }

    /// An echelon form that records every pivot row as a combination of the
    /// inserted vectors (at most `max_inputs` of them).
    pub fn with_tracking(field: &F, ncols: usize, max_inputs: usize) -> Self {
        let mut e = Self::new(field, ncols);
        e.tracking = Some(Tracking {
            max_inputs,
            combos: Vec::new(),
            scratch: vec![field.acc_zero(); max_inputs],
        });
        e
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn ncols(&self) -> usize {
        self.ncols
    }
    pub fn rank(&self) -> usize {
        self.rows.len()
    }
    pub fn inputs(&self) -> usize {
        self.inputs
    }
    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col] != 0
    }
    pub fn rows(&self) -> &[SparseVec<F>] {
        &self.rows
    }

    /// Columns that carry no pivot, in increasing order.
    pub fn free_columns(&self) -> Vec<u32> {
        (0..self.ncols as u32)
            .filter(|&c| self.pivot_row[c as usize] == 0)
            .collect()
    }

    fn scatter(field: &F, acc: &mut [F::Acc], v: &[(u32, F::Elem)]) -> usize {
        let mut start = usize::MAX;
        for (c, x) in v {
            let c = *c as usize;
            field.acc_set(&mut acc[c], x);
            start = start.min(c);
        }
        start
    }

    /// One left-to-right pass. Stops at the first non-pivot column holding a
    /// nonzero value when `stop_at_new`; otherwise reduces every pivot column.
    fn pass(
        &self,
        acc: &mut [F::Acc],
        mut tacc: Option<&mut [F::Acc]>,
        start: usize,
        stop_at_new: bool,
    ) -> Option<(usize, F::Elem)> {
        let f = &self.field;
        for c in start..self.ncols {
            if f.acc_is_trivially_zero(&acc[c]) {
                continue;
            }
            let x = f.acc_get(&acc[c]);
            if f.is_zero(&x) {
                f.acc_clear(&mut acc[c]);
                continue;
            }
            let r = self.pivot_row[c];
            if r != 0 {
                let r = (r - 1) as usize;
                let m = f.neg(&x);
                for (j, y) in &self.rows[r][1..] {
                    f.acc_add_mul(&mut acc[*j as usize], &m, y);
                }
                if let (Some(t), Some(tr)) = (tacc.as_deref_mut(), self.tracking.as_ref()) {
                    for (k, y) in &tr.combos[r] {
                        f.acc_add_mul(&mut t[*k as usize], &m, y);
                    }
                }
                f.acc_clear(&mut acc[c]);
            } else if stop_at_new {
                return Some((c, x));
            } else {
                f.acc_set(&mut acc[c], &x);
            }
        }
        None
    }

    fn gather(field: &F, acc: &mut [F::Acc], from: usize, scale: Option<&F::Elem>) -> SparseVec<F> {
        let mut out = Vec::new();
        for (c, a) in acc.iter_mut().enumerate().skip(from) {
            if field.acc_is_trivially_zero(a) {
                continue;
            }
            let x = field.acc_get(a);
            field.acc_clear(a);
            if !field.is_zero(&x) {
                let x = match scale {
                    Some(s) => field.mul(&x, s),
                    None => x,
                };
                out.push((c as u32, x));
            }
        }
        out
    }

    /// Insert a vector; returns whether it enlarged the span.
    pub fn insert(&mut self, v: &[(u32, F::Elem)]) -> Inserted<F> {
        let f = self.field.clone();
        let input = self.inputs;
        self.inputs += 1;
        let mut acc = std::mem::take(&mut self.scratch);
        let mut tacc = self
            .tracking
            .as_mut()
            .map(|t| std::mem::take(&mut t.scratch));
        if let Some(t) = tacc.as_mut() {
            assert!(input < t.len(), "tracked echelon received too many inputs");
            f.acc_set(&mut t[input], &f.one());
        }
        let start = Self::scatter(&f, &mut acc, v);
        let res = if start == usize::MAX {
            None
        } else {
            self.pass(&mut acc, tacc.as_deref_mut(), start, true)
        };
        let out = match res {
            Some((c, x)) => {
                let inv = f.inv(&x).expect("nonzero pivot");
                let row = Self::gather(&f, &mut acc, c, Some(&inv));
                debug_assert_eq!(row[0].0 as usize, c);
                self.rows.push(row);
                self.pivot_row[c] = self.rows.len() as u32;
                if let Some(t) = tacc.as_mut() {
                    let combo = Self::gather(&f, t, 0, Some(&inv));
                    self.tracking.as_mut().unwrap().combos.push(combo);
                }
                Inserted::Pivot(c as u32)
            }
            None => {
                let rel = tacc.as_mut().map(|t| Self::gather(&f, t, 0, None));
                Inserted::Dependent(rel)
            }
        };
        self.scratch = acc;
        if let (Some(t), Some(tr)) = (tacc, self.tracking.as_mut()) {
            tr.scratch = t;
        }
        out
    }

    /// Insert and report only independence.
    pub fn insert_bool(&mut self, v: &[(u32, F::Elem)]) -> bool {
        matches!(self.insert(v), Inserted::Pivot(_))
    }

    /// Remainder of `v` modulo the span; supported on non-pivot columns and
    /// independent of the insertion order.
    pub fn reduce(&self, v: &[(u32, F::Elem)]) -> SparseVec<F> {
        let f = &self.field;
        let mut acc = vec![f.acc_zero(); self.ncols];
        let start = Self::scatter(f, &mut acc, v);
        if start == usize::MAX {
            return Vec::new();
        }
        self.pass(&mut acc, None, start, false);
        Self::gather(f, &mut acc, start, None)
    }

    /// Reduce a dense accumulator in place; afterwards only non-pivot
    /// columns may be nonzero.
    pub fn reduce_dense(&self, acc: &mut [F::Acc]) {
        self.pass(acc, None, 0, false);
    }

    pub fn contains(&self, v: &[(u32, F::Elem)]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Write `v = sum_k x_k input_k + remainder`; returns `(remainder, x)`.
    /// Requires tracking.
    pub fn reduce_tracked(&self, v: &[(u32, F::Elem)]) -> (SparseVec<F>, SparseVec<F>) {
        let f = &self.field;
        let tr = self
            .tracking
            .as_ref()
            .expect("reduce_tracked needs tracking");
        let mut acc = vec![f.acc_zero(); self.ncols];
        let mut tacc = vec![f.acc_zero(); tr.max_inputs];
        let start = Self::scatter(f, &mut acc, v);
        if start == usize::MAX {
            return (Vec::new(), Vec::new());
        }
        self.pass(&mut acc, Some(&mut tacc), start, false);
        let rem = Self::gather(f, &mut acc, start, None);
        let minus_one = f.neg(&f.one());
        let x = Self::gather(f, &mut tacc, 0, Some(&minus_one));
        (rem, x)
    }
}

/// Rank of a family of sparse vectors of length `ncols`.
pub fn rank_of<F: Field>(field: &F, ncols: usize, vectors: &[SparseVec<F>]) -> usize {
    let mut e = Echelon::new(field, ncols);
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// A basis of the kernel of the map whose images of the standard basis
/// vectors are `columns` (vectors of length `nrows`).
pub fn kernel_of<F: Field>(field: &F, nrows: usize, columns: &[SparseVec<F>]) -> Vec<SparseVec<F>> {
    let mut e = Echelon::with_tracking(field, nrows, columns.len());
    let mut out = Vec::new();
    for v in columns {
        if let Inserted::Dependent(Some(rel)) = e.insert(v) {
            out.push(rel);
        }
    }
    out
}

/// Solver for `M x = y` where `M` is given by its columns.
pub struct ColumnSolver<F: Field> {
    ech: Echelon<F>,
}

impl<F: Field> ColumnSolver<F> {
    pub fn new(field: &F, nrows: usize, columns: &[SparseVec<F>]) -> Self {
        let mut ech = Echelon::with_tracking(field, nrows, columns.len());
        for c in columns {
            ech.insert(c);
        }
        ColumnSolver { ech }
    }

    pub fn rank(&self) -> usize {
        self.ech.rank()
    }

    /// A solution (free variables zero), or an error with the residual size.
    pub fn solve(&self, y: &[(u32, F::Elem)]) -> Result<SparseVec<F>> {
        let (rem, x) = self.ech.reduce_tracked(y);
        if rem.is_empty() {
            Ok(x)
        } else {
            Err(Error::Unsolvable(format!(
                "right-hand side leaves a residual with {} nonzero entries",
                rem.len()
            )))
        }
    }
}

/// Apply a matrix given by sparse columns to a sparse vector.
pub fn apply_columns<F: Field>(
    field: &F,
    nrows: usize,
    columns: &[SparseVec<F>],
    x: &[(u32, F::Elem)],
) -> SparseVec<F> {
    let mut acc = vec![field.acc_zero(); nrows];
    for (k, a) in x {
        for (r, m) in &columns[*k as usize] {
            field.acc_add_mul(&mut acc[*r as usize], a, m);
        }
    }
    let mut out = Vec::new();
    for (r, v) in acc.iter().enumerate() {
        let x = field.acc_get(v);
        if !field.is_zero(&x) {
            out.push((r as u32, x));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rationals};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dense_to_sparse<F: Field>(f: &F, v: &[F::Elem]) -> SparseVec<F> {
        v.iter()
            .enumerate()
            .filter(|(_, x)| !f.is_zero(x))
            .map(|(i, x)| (i as u32, x.clone()))
            .collect()
    }

    #[test]
    fn rank_of_small_matrix() {
        let q = Rationals;
        let rows: Vec<Vec<i64>> = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]];
        let vs: Vec<_> = rows
            .iter()
            .map(|r| dense_to_sparse(&q, &r.iter().map(|&x| q.from_i64(x)).collect::<Vec<_>>()))
            .collect();
        assert_eq!(rank_of(&q, 3, &vs), 2);
        let ker = kernel_of(&q, 3, &vs);
        assert_eq!(ker.len(), 1);
        let img = apply_columns(&q, 3, &vs, &ker[0]);
        assert!(img.is_empty());
    }

    #[test]
    fn reduce_is_order_independent() {
        let f = Fp::default_prime();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 12;
        let vecs: Vec<SparseVec<Fp>> = (0..7)
            .map(|_| {
                let d: Vec<u32> = (0..n)
                    .map(|_| {
                        if rng.gen_bool(0.4) {
                            f.random(&mut rng)
                        } else {
                            0
                        }
                    })
                    .collect();
                dense_to_sparse(&f, &d)
            })
            .collect();
        let mut e1 = Echelon::new(&f, n);
        let mut e2 = Echelon::new(&f, n);
        for v in &vecs {
            e1.insert(v);
        }
        for v in vecs.iter().rev() {
            e2.insert(v);
        }
        assert_eq!(e1.rank(), e2.rank());
        for _ in 0..20 {
            let d: Vec<u32> = (0..n).map(|_| f.random(&mut rng)).collect();
            let v = dense_to_sparse(&f, &d);
            assert_eq!(e1.reduce(&v), e2.reduce(&v));
        }
    }

    #[test]
    fn solve_and_kernel_random() {
        let f = Fp::default_prime();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (nr, nc) = (9, 14);
        let cols: Vec<SparseVec<Fp>> = (0..nc)
            .map(|_| {
                let d: Vec<u32> = (0..nr)
                    .map(|_| {
                        if rng.gen_bool(0.3) {
                            f.random(&mut rng)
                        } else {
                            0
                        }
                    })
                    .collect();
                dense_to_sparse(&f, &d)
            })
            .collect();
        let solver = ColumnSolver::new(&f, nr, &cols);
        let x: Vec<u32> = (0..nc).map(|_| f.random(&mut rng)).collect();
        let y = apply_columns(&f, nr, &cols, &dense_to_sparse(&f, &x));
        let sol = solver.solve(&y).unwrap();
        assert_eq!(apply_columns(&f, nr, &cols, &sol), y);
        let ker = kernel_of(&f, nr, &cols);
        assert_eq!(ker.len() + solver.rank(), nc);
        for k in &ker {
            assert!(apply_columns(&f, nr, &cols, k).is_empty());
        }
    }
}
