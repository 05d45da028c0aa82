//! Hilbert polynomial fits and operational ranks.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A Hilbert polynomial read off a window of Hilbert function values:
/// degree `k` and normalized leading coefficient `e` (`HP(d) = e d^k/k! + ...`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertFit {
    pub degree: usize,
    pub leading: i64,
    pub window: (i32, i32),
}

/// Smallest `k` whose `k`-th differences are constant over the window, with
/// the constant observed at least three times. Values must be consecutive.
pub fn fit_hilbert_polynomial(values: &[(i32, i64)]) -> Result<HilbertFit> {
    for w in values.windows(2) {
        if w[1].0 != w[0].0 + 1 {
            return Err(Error::InvalidInput(
                "Hilbert values must be at consecutive degrees".into(),
            ));
        }
    }
    let window = match (values.first(), values.last()) {
        (Some(a), Some(b)) => (a.0, b.0),
        _ => return Err(Error::InvalidInput("empty Hilbert window".into())),
    };
    let mut diffs: Vec<i64> = values.iter().map(|v| v.1).collect();
    if diffs.iter().all(|&v| v == 0) {
        return Ok(HilbertFit {
            degree: 0,
            leading: 0,
            window,
        });
    }
    let mut k = 0;
    while diffs.len() >= 3 {
        if diffs.iter().all(|&v| v == diffs[0]) {
            return Ok(HilbertFit {
                degree: k,
                leading: diffs[0],
                window,
            });
        }
        diffs = diffs.windows(2).map(|w| w[1] - w[0]).collect();
        k += 1;
    }
    Err(Error::Truncation(format!(
        "window {}..={} too short to fit the Hilbert polynomial",
        window.0, window.1
    )))
}

/// Operational rank: ratio of normalized leading coefficients when the
/// degrees agree, zero when the module polynomial has lower degree.
pub fn rank_estimate(module: &HilbertFit, ring: &HilbertFit) -> Option<Ratio<i64>> {
    if ring.leading == 0 {
        return None;
    }
    if module.leading == 0 || module.degree < ring.degree {
        return Some(Ratio::from_integer(0));
    }
    if module.degree > ring.degree {
        return None;
    }
    Some(Ratio::new(module.leading, ring.leading))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{hilbert_from_betti, BettiTable};
    use crate::poly::binomial_i;

    #[test]
    fn twisted_cubic_hilbert() {
        let mut b = BettiTable::default();
        b.entries.insert((0, 0), 1);
        b.entries.insert((1, 2), 3);
        b.entries.insert((2, 3), 2);
        let vals: Vec<i64> = (0..6)
            .map(|d| hilbert_from_betti(&b, 4, 5).value(d))
            .collect();
        assert_eq!(vals, vec![1, 4, 7, 10, 13, 16]);
        let fit =
            fit_hilbert_polynomial(&(0..6).map(|d| (d, vals[d as usize])).collect::<Vec<_>>())
                .unwrap();
        assert_eq!((fit.degree, fit.leading), (1, 3));
    }

    #[test]
    fn fit_needs_three_confirmations() {
        let v: Vec<(i32, i64)> = (0..4).map(|d| (d, binomial_i(d as i64 + 3, 3))).collect();
        assert!(fit_hilbert_polynomial(&v).is_err());
        let v: Vec<(i32, i64)> = (0..6)
            .map(|d| (d, 2 * binomial_i(d as i64 + 3, 3)))
            .collect();
        let fit = fit_hilbert_polynomial(&v).unwrap();
        assert_eq!((fit.degree, fit.leading), (3, 2));
        let ring = HilbertFit {
            degree: 3,
            leading: 1,
            window: (0, 5),
        };
        assert_eq!(rank_estimate(&fit, &ring), Some(Ratio::from_integer(2)));
    }
}
