//! Modules attached to a matrix `φ: F -> G`: the quotient ring `A`, the
//! cokernel `M` and its symmetric powers, `Hom_A(M, A)` and `I/I^2`.

use std::sync::Arc;

use crate::complex::build_d;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{GradedFreeModule, GradedMap};
use crate::poly::Poly;
use crate::strand::module::{ModuleMap, PresentedModule};
use crate::strand::ring::Ring;

/// The maximal minors of `φ`, as the image of the first map of `D_0`.
pub fn minors_of<F: Field>(phi: &GradedMap<F>) -> Result<Vec<Poly<F>>> {
    let d0 = build_d(0, phi)?;
    let d1 = d0
        .diff(1)
        .ok_or_else(|| Error::InvalidInput("D_0 has no first map".into()))?;
    Ok((0..d1.ncols()).map(|j| d1.entry(0, j)).collect())
}

/// `A = R/I_t(φ)`.
pub fn quotient_ring<F: Field>(phi: &GradedMap<F>) -> Result<Arc<Ring<F>>> {
    Ok(Ring::quotient(phi.field(), phi.nvars(), minors_of(phi)?))
}

/// The module presented by the first map of `D_i`: `A` for `i = 0`,
/// `S_i M` for `i >= 1` and the dual module for `i = -1`, read over `ring`.
pub fn d_module<F: Field>(
    phi: &GradedMap<F>,
    i: i32,
    ring: Arc<Ring<F>>,
) -> Result<PresentedModule<F>> {
    let cx = build_d(i, phi)?;
    let name = match i {
        -1 => "S_{-1}M".to_string(),
        0 => "A".to_string(),
        _ => format!("S_{i}M"),
    };
    match cx.diff(1) {
        Some(d) => PresentedModule::new(&name, ring, d.clone()),
        None => Ok(PresentedModule::free(&name, ring, cx.term(0))),
    }
}

/// `I/I^2` as an `A`-module: generated by the minors, related by the first
/// syzygies of the minors.
pub fn conormal<F: Field>(phi: &GradedMap<F>, a: Arc<Ring<F>>) -> Result<PresentedModule<F>> {
    let cx = build_d(0, phi)?;
    match cx.diff(2) {
        Some(d) => PresentedModule::new("I/I^2", a, d.clone()),
        None => Ok(PresentedModule::free("I/I^2", a, cx.term(1))),
    }
}

/// The free modules `G^* ⊗ A` and `F^* ⊗ A`, between which `φ^*` acts;
/// `Hom_A(M, A)` is the kernel.
pub fn dual_pair<F: Field>(
    phi: &GradedMap<F>,
    a: Arc<Ring<F>>,
) -> (PresentedModule<F>, PresentedModule<F>) {
    let g = PresentedModule::free("G*⊗A", a.clone(), phi.target.dual());
    let f = PresentedModule::free("F*⊗A", a, phi.source.dual());
    (g, f)
}

/// `φ^* ⊗ A` as a module map; its kernel is `Hom_A(M, A)`.
pub fn dual_map<'a, F: Field>(
    phi: &GradedMap<F>,
    g: &'a PresentedModule<F>,
    f: &'a PresentedModule<F>,
) -> Result<ModuleMap<'a, F>> {
    ModuleMap::new(g, f, phi.dual_map())
}

/// `R(-w)` summands as a graded free module over `ring`.
pub fn free_module<F: Field>(
    ring: Arc<Ring<F>>,
    twists: Vec<i32>,
    name: &str,
) -> PresentedModule<F> {
    PresentedModule::free(name, ring, GradedFreeModule::new(twists))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::det::{DegreeMatrix, DetScheme};
    use crate::field::Fp;
    use crate::linalg::rank_of;

    #[test]
    fn dual_module_matches_kernel_of_dual_map() {
        let f = Fp::default_prime();
        for (t, c, n) in [(2, 2, 4), (2, 3, 5), (3, 2, 5)] {
            let s = DetScheme::generic(&f, DegreeMatrix::linear(t, c, n).unwrap(), 7).unwrap();
            let a = quotient_ring(&s.phi).unwrap();
            let sm1 = d_module(&s.phi, -1, a.clone()).unwrap();
            let (g, fm) = dual_pair(&s.phi, a.clone());
            let map = dual_map(&s.phi, &g, &fm).unwrap();
            for d in -1..4 {
                let st = map.strand(d);
                let ker = st.source_dim - rank_of(&f, st.target_dim, &st.columns);
                assert_eq!(sm1.dim(d), ker, "t={t} c={c} degree {d}");
            }
        }
    }

    #[test]
    fn conormal_module_of_twisted_cubic() {
        // dim I_d - dim (I^2)_d for the twisted cubic: 3, 10, 16, 22 from degree 2.
        let f = Fp::default_prime();
        let s = DetScheme::generic(&f, DegreeMatrix::linear(2, 2, 3).unwrap(), 3).unwrap();
        let a = quotient_ring(&s.phi).unwrap();
        let nb = conormal(&s.phi, a).unwrap();
        let dims: Vec<usize> = (1..6).map(|d| nb.dim(d)).collect();
        assert_eq!(dims, vec![0, 3, 10, 16, 22]);
    }
}
