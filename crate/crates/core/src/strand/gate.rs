//! Sampled genericity gates. The codimension of an ideal is bounded below by
//! restricting it to a random linear space and testing for `m`-primarity.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::det::DetScheme;
use crate::error::Result;
use crate::field::Field;
use crate::poly::{random_form_rng, Poly};
use crate::strand::ring::Ring;

/// Images of `x_0..x_{nvars-1}` under a random map into linear forms in `h`
/// variables.
pub fn random_linear_images<F: Field>(
    field: &F,
    nvars: usize,
    h: usize,
    seed: u64,
) -> Result<Vec<Poly<F>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..nvars)
        .map(|_| random_form_rng(field, h, 1, &mut rng))
        .collect()
}

/// Whether the ideal generated by `gens` becomes `m`-primary after
/// restriction to a random linear space of dimension `h` (affine).
///
/// A yes certifies `codim(gens) >= h`; for general sections a no means
/// `codim(gens) < h`.
pub fn section_is_m_primary<F: Field>(
    gens: &[Poly<F>],
    nvars: usize,
    h: usize,
    seed: u64,
) -> Result<bool> {
    let nonzero: Vec<&Poly<F>> = gens.iter().filter(|g| !g.is_zero()).collect();
    if nonzero.iter().any(|g| g.degree() == Some(0)) || h == 0 {
        return Ok(true);
    }
    let Some(first) = nonzero.first() else {
        return Ok(false);
    };
    let field = first.field().clone();
    let images = random_linear_images(&field, nvars, h, seed)?;
    let restricted: Vec<Poly<F>> = nonzero
        .iter()
        .map(|g| g.substitute(&images))
        .collect::<Result<_>>()?;
    let delta = restricted
        .iter()
        .filter_map(|g| g.degree())
        .max()
        .unwrap_or(0) as usize;
    if delta == 0 {
        return Ok(false);
    }
    // An m-primary ideal generated in degrees <= delta vanishes from degree
    // h(delta - 1) + 1 on.
    let top = h * (delta - 1) + 1;
    let ring = Ring::quotient(&field, h, restricted);
    for d in 0..=top as i32 {
        if ring.try_piece(d)?.is_some_and(|p| p.dim() == 0) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Largest `h <= max_h` for which the random section test passes.
pub fn sampled_codim<F: Field>(
    gens: &[Poly<F>],
    nvars: usize,
    max_h: usize,
    seed: u64,
) -> Result<usize> {
    for h in (1..=max_h).rev() {
        if section_is_m_primary(gens, nvars, h, seed.wrapping_add(h as u64))? {
            return Ok(h);
        }
    }
    Ok(0)
}

/// `depth_J A` for `J` the submaximal minors: the closed-form generic value
/// and the value certified by sampling.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthJGate {
    pub expected: i64,
    pub sampled: i64,
    pub codim_j: usize,
    pub seed: u64,
}

impl DepthJGate {
    pub fn at_least(&self, k: i64) -> bool {
        self.sampled >= k
    }
}

/// Samples `codim J` and reports `depth_J A = codim J - c` (A is
/// Cohen-Macaulay). For `t = 1` the ideal `J` is the unit ideal and the
/// value is capped at `dim A`.
pub fn depth_j_gate<F: Field>(s: &DetScheme<F>, seed: u64) -> Result<DepthJGate> {
    let (c, nv) = (s.c() as i64, s.nvars());
    let dim_a = nv as i64 - c;
    if s.t() < 2 {
        return Ok(DepthJGate {
            expected: dim_a,
            sampled: dim_a,
            codim_j: nv,
            seed,
        });
    }
    let expected = (c + 2).min(dim_a);
    let j = s.submaximal_minors()?;
    let max_h = (2 * (c as usize + 1)).min(nv);
    let codim_j = sampled_codim(&j, nv, max_h, seed)?;
    Ok(DepthJGate {
        expected,
        sampled: codim_j as i64 - c,
        codim_j,
        seed,
    })
}
