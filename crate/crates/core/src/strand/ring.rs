//! Graded pieces of `R = k[x_0..x_n]` and of quotients `A = R/I`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Echelon, SparseVec};
use crate::poly::{monomials, Mono, Poly};

/// Largest internal degree a ring piece may be requested at.
pub const MAX_DEGREE: usize = 96;

/// The degree-`d` piece of a ring: all monomials of `R_d`, a basis of the
/// quotient (a subset of the monomials) and normal forms of every monomial.
pub struct RingPiece<F: Field> {
    pub monos: Vec<Mono>,
    index: HashMap<Mono, u32>,
    /// Monomial indices forming a basis of the piece.
    pub basis: Vec<u32>,
    /// Normal form of each monomial in basis coordinates; `None` for `R`.
    nf: Option<Vec<SparseVec<F>>>,
}

impl<F: Field> RingPiece<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn mono_index(&self, m: &Mono) -> u32 {
        self.index[m]
    }
    /// Monomial represented by basis element `b`.
    pub fn basis_mono(&self, b: usize) -> Mono {
        self.monos[self.basis[b] as usize]
    }
    /// Normal form of a monomial, as `(basis index, coefficient)` pairs.
    pub fn normal_form<'a>(&'a self, m: &Mono) -> NormalForm<'a, F> {
        let k = self.index[m];
        match &self.nf {
            None => NormalForm::Single(k),
            Some(nf) => NormalForm::Combo(&nf[k as usize]),
        }
    }
}

pub enum NormalForm<'a, F: Field> {
    Single(u32),
    Combo(&'a SparseVec<F>),
}

/// `R` or `R/I` for a homogeneous ideal given by generators.
pub struct Ring<F: Field> {
    field: F,
    nvars: usize,
    ideal: Vec<Poly<F>>,
    pieces: Vec<OnceLock<RingPiece<F>>>,
}

impl<F: Field> Ring<F> {
    pub fn polynomial(field: &F, nvars: usize) -> Arc<Self> {
        Self::quotient(field, nvars, Vec::new())
    }

    /// `R/I`; zero generators are dropped.
    pub fn quotient(field: &F, nvars: usize, ideal: Vec<Poly<F>>) -> Arc<Self> {
        let ideal = ideal.into_iter().filter(|p| !p.is_zero()).collect();
        Arc::new(Ring {
            field: field.clone(),
            nvars,
            ideal,
            pieces: (0..=MAX_DEGREE).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn nvars(&self) -> usize {
        self.nvars
    }
    pub fn ideal(&self) -> &[Poly<F>] {
        &self.ideal
    }
    pub fn is_polynomial(&self) -> bool {
        self.ideal.is_empty()
    }

    /// Whether `other` is a quotient of `self` by a larger ideal (same variables).
    pub fn maps_onto(&self, other: &Ring<F>) -> bool {
        self.nvars == other.nvars
            && (self.is_polynomial() || std::ptr::eq(self, other) || self.ideal == other.ideal)
    }

    /// The piece of degree `d`, or `None` for negative degrees.
    pub fn piece(&self, d: i32) -> Option<&RingPiece<F>> {
        if d < 0 {
            return None;
        }
        let d = d as usize;
        assert!(
            d <= MAX_DEGREE,
            "ring piece of degree {d} exceeds the supported range"
        );
        Some(self.pieces[d].get_or_init(|| self.build_piece(d as u32)))
    }

    /// Checked variant of [`Ring::piece`].
    pub fn try_piece(&self, d: i32) -> Result<Option<&RingPiece<F>>> {
        if d > MAX_DEGREE as i32 {
            return Err(Error::ResourceLimit(format!(
                "degree {d} above {MAX_DEGREE}"
            )));
        }
        Ok(self.piece(d))
    }

    pub fn dim(&self, d: i32) -> usize {
        self.piece(d).map_or(0, |p| p.dim())
    }

    fn build_piece(&self, d: u32) -> RingPiece<F> {
        let monos = monomials(self.nvars, d);
        let index: HashMap<Mono, u32> = monos
            .iter()
            .enumerate()
            .map(|(i, m)| (*m, i as u32))
            .collect();
        let n = monos.len();
        let gens: Vec<&Poly<F>> = self
            .ideal
            .iter()
            .filter(|g| g.degree().is_some_and(|e| e <= d))
            .collect();
        if gens.is_empty() {
            return RingPiece {
                monos,
                index,
                basis: (0..n as u32).collect(),
                nf: if self.is_polynomial() {
                    None
                } else {
                    Some((0..n as u32).map(|i| vec![(i, self.field.one())]).collect())
                },
            };
        }
        let f = &self.field;
        let mut ech = Echelon::new(f, n);
        for g in gens {
            let e = d - g.degree().unwrap();
            for m in monomials(self.nvars, e) {
                let mut v: SparseVec<F> = g
                    .terms()
                    .iter()
                    .map(|(gm, c)| (index[&gm.mul(&m)], c.clone()))
                    .collect();
                v.sort_by_key(|x| x.0);
                ech.insert(&v);
            }
        }
        let free = ech.free_columns();
        let mut pos = vec![u32::MAX; n];
        for (b, &c) in free.iter().enumerate() {
            pos[c as usize] = b as u32;
        }
        // Back substitution from the highest pivot down.
        let mut nf: Vec<Option<SparseVec<F>>> = vec![None; n];
        for &c in &free {
            nf[c as usize] = Some(vec![(pos[c as usize], f.one())]);
        }
        let rows = ech.rows();
        let mut order: Vec<usize> = (0..rows.len()).collect();
        order.sort_by_key(|&r| std::cmp::Reverse(rows[r][0].0));
        let mut acc: HashMap<u32, F::Elem> = HashMap::new();
        for r in order {
            let row = &rows[r];
            acc.clear();
            for (j, y) in &row[1..] {
                let m = f.neg(y);
                for (b, z) in nf[*j as usize].as_ref().expect("higher columns done") {
                    let e = acc.entry(*b).or_insert_with(|| f.zero());
                    *e = f.add(e, &f.mul(&m, z));
                }
            }
            let mut v: SparseVec<F> = acc.drain().filter(|(_, x)| !f.is_zero(x)).collect();
            v.sort_by_key(|x| x.0);
            nf[row[0].0 as usize] = Some(v);
        }
        RingPiece {
            monos,
            index,
            basis: free,
            nf: Some(
                nf.into_iter()
                    .map(|v| v.expect("every column reduced"))
                    .collect(),
            ),
        }
    }
}

/// Sparse accumulator keyed by coordinate.
pub struct SparseAcc<F: Field> {
    field: F,
    map: HashMap<u32, F::Elem>,
}

impl<F: Field> SparseAcc<F> {
    pub fn new(field: &F) -> Self {
        SparseAcc {
            field: field.clone(),
            map: HashMap::new(),
        }
    }
    pub fn add(&mut self, k: u32, c: &F::Elem) {
        let f = &self.field;
        let e = self.map.entry(k).or_insert_with(|| f.zero());
        *e = f.add(e, c);
    }
    pub fn add_mul(&mut self, k: u32, a: &F::Elem, b: &F::Elem) {
        let p = self.field.mul(a, b);
        self.add(k, &p);
    }
    /// Drain into a sorted sparse vector without zeros.
    pub fn take(&mut self) -> SparseVec<F> {
        let f = &self.field;
        let mut v: SparseVec<F> = self.map.drain().filter(|(_, x)| !f.is_zero(x)).collect();
        v.sort_by_key(|x| x.0);
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use crate::poly::binomial;

    #[test]
    fn polynomial_ring_dims() {
        let f = Fp::default_prime();
        let r = Ring::polynomial(&f, 4);
        for d in 0..6 {
            assert_eq!(r.dim(d) as u64, binomial(d as u64 + 3, 3));
        }
        assert_eq!(r.dim(-1), 0);
    }

    #[test]
    fn twisted_cubic_ring_dims() {
        let f = Fp::default_prime();
        let x = |i| Poly::var(&f, 4, i);
        let ideal = vec![
            x(0).mul(&x(2)).sub(&x(1).mul(&x(1))),
            x(0).mul(&x(3)).sub(&x(1).mul(&x(2))),
            x(1).mul(&x(3)).sub(&x(2).mul(&x(2))),
        ];
        let a = Ring::quotient(&f, 4, ideal);
        let dims: Vec<usize> = (0..6).map(|d| a.dim(d)).collect();
        assert_eq!(dims, vec![1, 4, 7, 10, 13, 16]);
    }

    #[test]
    fn normal_forms_respect_the_ideal() {
        let f = Fp::default_prime();
        let x = |i| Poly::var(&f, 3, i);
        let a = Ring::quotient(&f, 3, vec![x(0).mul(&x(1)).sub(&x(2).mul(&x(2)))]);
        let p = a.piece(2).unwrap();
        assert_eq!(p.dim(), 5);
        // x0*x1 and x2^2 have the same normal form.
        let m1 = Mono::var(0).mul(&Mono::var(1));
        let m2 = Mono::var(2).mul(&Mono::var(2));
        let nf = |m: &Mono| match p.normal_form(m) {
            NormalForm::Single(k) => vec![(k, f.one())],
            NormalForm::Combo(v) => v.clone(),
        };
        assert_eq!(nf(&m1), nf(&m2));
    }
}
