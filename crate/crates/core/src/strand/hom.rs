//! Dimensions of graded pieces of `Hom` and `Ext` into a presented module.

use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::GradedMap;
use crate::linalg::{rank_of, SparseVec};
use crate::strand::module::PresentedModule;

/// Matrix of `Hom(d, N)_e: Hom(target(d), N)_e -> Hom(source(d), N)_e`,
/// `f ↦ f ∘ d`, in the coordinates `⊕_g N_{w_g + e}`.
pub fn hom_matrix<F: Field>(
    d: &GradedMap<F>,
    n: &PresentedModule<F>,
    e: i32,
) -> (Vec<SparseVec<F>>, usize, usize) {
    let f = n.field();
    let one = f.one();
    let src_off = offsets(&d.source.twists, n, e);
    let tgt_off = offsets(&d.target.twists, n, e);
    let nrows = *src_off.last().unwrap();
    let ncols = *tgt_off.last().unwrap();
    // Row-wise view of d: for each target generator g, entries (h, p).
    let mut by_row: Vec<Vec<(usize, &crate::poly::Poly<F>)>> = vec![Vec::new(); d.target.rank()];
    for h in 0..d.source.rank() {
        for (g, p) in d.col(h) {
            by_row[*g].push((h, p));
        }
    }
    let mut columns = Vec::with_capacity(ncols);
    for (g, &w) in d.target.twists.iter().enumerate() {
        let piece = n.piece(w + e);
        for q in 0..piece.dim() {
            let (gn, b) = piece.locate(q);
            let m = n
                .ring
                .piece(w + e - n.gens.twists[gn])
                .expect("nonempty block")
                .basis_mono(b);
            let mut col: SparseVec<F> = Vec::new();
            for (h, p) in &by_row[g] {
                let dh = d.source.twists[*h] + e;
                let v = n.image_of(dh, &[(gn, (*p).clone())], &m, &one);
                col.extend(v.into_iter().map(|(k, x)| (k + src_off[*h] as u32, x)));
            }
            col.sort_by_key(|x| x.0);
            columns.push(col);
        }
    }
    (columns, nrows, ncols)
}

fn offsets<F: Field>(twists: &[i32], n: &PresentedModule<F>, e: i32) -> Vec<usize> {
    let mut off = vec![0usize];
    for &w in twists {
        off.push(off.last().unwrap() + n.dim(w + e));
    }
    off
}

fn check_rings<F: Field>(d: &GradedMap<F>, n: &PresentedModule<F>) -> Result<()> {
    if d.nvars() != n.nvars() {
        return Err(Error::Incompatible(
            "map and module use different variables".into(),
        ));
    }
    Ok(())
}

/// `dim Hom(M, N)_e` for a presented `M` whose ring maps onto the ring of `N`.
pub fn hom_strand<F: Field>(
    m: &PresentedModule<F>,
    n: &PresentedModule<F>,
    e: i32,
) -> Result<usize> {
    check_rings(&m.rels, n)?;
    if !m.ring.maps_onto(&n.ring) {
        return Err(Error::Incompatible(
            "Hom needs the source ring to map onto the target ring".into(),
        ));
    }
    let (cols, nrows, ncols) = hom_matrix(&m.rels, n, e);
    Ok(ncols - rank_of(n.field(), nrows, &cols))
}

/// `dim H^a(Hom(F_•, N))_e` for a complex of free modules; positions are
/// those of `cx`. When `cx` resolves `M` over a ring mapping onto the ring of
/// `N`, this is `dim Ext^{a - lo}(M, N)_e`.
pub fn ext_strand<F: Field>(
    cx: &ChainComplex<F>,
    n: &PresentedModule<F>,
    a: i32,
    e: i32,
) -> Result<usize> {
    let hom_dim: usize = cx.term(a).twists.iter().map(|&w| n.dim(w + e)).sum();
    if hom_dim == 0 {
        return Ok(0);
    }
    let rank_in = match cx.diff(a) {
        // δ: Hom(F_{a-1}) -> Hom(F_a)
        Some(d) => {
            check_rings(d, n)?;
            let (cols, nrows, _) = hom_matrix(d, n, e);
            rank_of(n.field(), nrows, &cols)
        }
        None => 0,
    };
    let rank_out = match cx.diff(a + 1) {
        Some(d) => {
            check_rings(d, n)?;
            let (cols, nrows, _) = hom_matrix(d, n, e);
            rank_of(n.field(), nrows, &cols)
        }
        None => 0,
    };
    Ok(hom_dim - rank_in - rank_out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use crate::graded::GradedFreeModule;
    use crate::poly::Poly;
    use crate::strand::ring::Ring;

    #[test]
    fn hom_from_cyclic_module() {
        // Hom(R/(x0), R/(x0, x1)) = (0 :_{R/(x0,x1)} x0) = R/(x0,x1).
        let f = Fp::default_prime();
        let r = Ring::polynomial(&f, 3);
        let x = |i| Poly::var(&f, 3, i);
        let g = GradedFreeModule::new(vec![0]);
        let m = PresentedModule::new(
            "M",
            r.clone(),
            GradedMap::from_rows(
                &f,
                3,
                GradedFreeModule::new(vec![1]),
                g.clone(),
                &[vec![x(0)]],
            )
            .unwrap(),
        )
        .unwrap();
        let n = PresentedModule::new(
            "N",
            r.clone(),
            GradedMap::from_rows(
                &f,
                3,
                GradedFreeModule::new(vec![1, 1]),
                g,
                &[vec![x(0), x(1)]],
            )
            .unwrap(),
        )
        .unwrap();
        for e in 0..4 {
            assert_eq!(hom_strand(&m, &n, e).unwrap(), 1);
        }
        // Hom(R/(x0,x1), R/(x0)) = 0 since x1 is a nonzerodivisor on R/(x0).
        for e in 0..4 {
            assert_eq!(hom_strand(&n, &m, e).unwrap(), 0);
        }
    }

    #[test]
    fn ext_of_koszul_complex() {
        // Ext^2(k, R) over k[x0,x1] is k in degree -2.
        let f = Fp::default_prime();
        let r = Ring::polynomial(&f, 2);
        let x = |i| Poly::var(&f, 2, i);
        let d1 = GradedMap::from_rows(
            &f,
            2,
            GradedFreeModule::new(vec![1, 1]),
            GradedFreeModule::new(vec![0]),
            &[vec![x(0), x(1)]],
        )
        .unwrap();
        let d2 = GradedMap::from_rows(
            &f,
            2,
            GradedFreeModule::new(vec![2]),
            GradedFreeModule::new(vec![1, 1]),
            &[vec![x(1)], vec![x(0).neg()]],
        )
        .unwrap();
        let cx = ChainComplex::new(
            &f,
            2,
            0,
            vec![d1.target.clone(), d1.source.clone(), d2.source.clone()],
            vec![d1, d2],
        )
        .unwrap();
        let rr = PresentedModule::free("R", r, GradedFreeModule::new(vec![0]));
        for e in -4..3 {
            let want = usize::from(e == -2);
            assert_eq!(ext_strand(&cx, &rr, 2, e).unwrap(), want, "e = {e}");
            assert_eq!(ext_strand(&cx, &rr, 1, e).unwrap(), 0);
            assert_eq!(ext_strand(&cx, &rr, 0, e).unwrap(), 0);
        }
    }
}
