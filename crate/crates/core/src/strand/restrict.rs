//! Restriction of a determinantal scheme to a general linear subspace.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::det::{BuildMode, DegreeMatrix, DetScheme};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::Poly;
use crate::strand::gate::section_is_m_primary;

/// Substitutes `x_i -> images[i]` (linear forms in `m` variables) into every
/// entry; the result lives in `P^{m-1}`.
pub fn restrict_linear<F: Field>(s: &DetScheme<F>, images: &[Poly<F>]) -> Result<DetScheme<F>> {
    let m = images
        .first()
        .map(|p| p.nvars())
        .ok_or_else(|| Error::InvalidInput("empty substitution".into()))?;
    if m == 0 {
        return Err(Error::InvalidInput("restriction to the empty space".into()));
    }
    let dm = &s.degrees;
    let degrees = DegreeMatrix {
        n: m - 1,
        ..dm.clone()
    };
    let rows: Vec<Vec<Poly<F>>> = (0..s.t())
        .map(|i| {
            (0..s.ncols())
                .map(|j| s.entry(i, j).substitute(images))
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    DetScheme::build(&s.field, degrees, BuildMode::Explicit(rows))
}

#[derive(Clone, Debug)]
pub struct Restriction<F: Field> {
    pub scheme: DetScheme<F>,
    /// Images of the old variables in the new ring.
    pub images: Vec<Poly<F>>,
    /// Samples rejected as degenerate before one was accepted.
    pub resampled: usize,
}

#[derive(Serialize, Deserialize)]
pub struct RestrictionSummary {
    pub n_before: usize,
    pub n_after: usize,
    pub resampled: usize,
}

const MAX_ATTEMPTS: usize = 16;

/// Restriction to the hyperplane `x_n = Σ r_i x_i` for random `r`. A sample
/// is degenerate when an entry of positive expected degree vanishes or the
/// maximal minors lose codimension `c` (checked by a random section).
pub fn hyperplane_restrict<F: Field>(s: &DetScheme<F>, seed: u64) -> Result<Restriction<F>> {
    let n = s.n();
    if n < s.c() + 1 {
        return Err(Error::InvalidInput(format!(
            "n = {n} must be at least c + 1 = {}",
            s.c() + 1
        )));
    }
    let f = &s.field;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..MAX_ATTEMPTS {
        let mut images: Vec<Poly<F>> = (0..n).map(|i| Poly::var(f, n, i)).collect();
        let mut last = Poly::zero(f, n);
        for i in 0..n {
            last = last.add(&Poly::var(f, n, i).scale(&f.random(&mut rng)));
        }
        images.push(last);
        let Ok(r) = restrict_linear(s, &images) else {
            continue;
        };
        let entries_ok = (0..r.t())
            .all(|i| (0..r.ncols()).all(|j| r.degrees.d(i, j) <= 0 || !r.entry(i, j).is_zero()));
        if entries_ok
            && section_is_m_primary(
                &r.minors,
                r.nvars(),
                r.c(),
                seed ^ 0x9e37_79b9 ^ attempt as u64,
            )?
        {
            return Ok(Restriction {
                scheme: r,
                images,
                resampled: attempt,
            });
        }
    }
    Err(Error::Unsolvable(format!(
        "no nondegenerate hyperplane in {MAX_ATTEMPTS} samples"
    )))
}

impl<F: Field> Restriction<F> {
    pub fn summary(&self) -> RestrictionSummary {
        RestrictionSummary {
            n_before: self.images.len() - 1,
            n_after: self.scheme.n(),
            resampled: self.resampled,
        }
    }
}
