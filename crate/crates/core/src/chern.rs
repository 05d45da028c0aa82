//! Chern classes and formal slopes on a codimension 2 linear determinantal
//! scheme, in the free truncated ring `Q[H, Y]/(degree > 2)`.

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Q = Ratio<i64>;

/// Monomials of degree at most two in `H, Y`.
pub const BASIS: [&str; 6] = ["1", "H", "Y", "H^2", "HY", "Y^2"];

/// An element of `Q[H, Y]` truncated above degree two; coefficients follow
/// [`BASIS`]. The total Chern class `1 + c_1 + c_2` is one such element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChowElement {
    pub coeffs: [Q; 6],
}

fn q(n: i64) -> Q {
    Q::from_integer(n)
}

impl ChowElement {
    pub fn zero() -> Self {
        ChowElement {
            coeffs: std::array::from_fn(|_| Q::zero()),
        }
    }
    pub fn one() -> Self {
        let mut e = Self::zero();
        e.coeffs[0] = Q::one();
        e
    }
    /// The divisor class `a Y + b H`.
    pub fn divisor(a: i64, b: i64) -> Self {
        let mut e = Self::zero();
        e.coeffs[1] = q(b);
        e.coeffs[2] = q(a);
        e
    }
    /// `x H^2 + y HY + z Y^2`.
    pub fn quadric(x: i64, y: i64, z: i64) -> Self {
        let mut e = Self::zero();
        e.coeffs[3] = q(x);
        e.coeffs[4] = q(y);
        e.coeffs[5] = q(z);
        e
    }

    pub fn add(&self, o: &Self) -> Self {
        ChowElement {
            coeffs: std::array::from_fn(|k| self.coeffs[k] + o.coeffs[k]),
        }
    }
    pub fn sub(&self, o: &Self) -> Self {
        ChowElement {
            coeffs: std::array::from_fn(|k| self.coeffs[k] - o.coeffs[k]),
        }
    }
    pub fn scale(&self, s: Q) -> Self {
        ChowElement {
            coeffs: std::array::from_fn(|k| self.coeffs[k] * s),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let [a0, ah, ay, ahh, ahy, ayy] = &self.coeffs;
        let [b0, bh, by, bhh, bhy, byy] = &o.coeffs;
        ChowElement {
            coeffs: [
                a0 * b0,
                a0 * bh + ah * b0,
                a0 * by + ay * b0,
                a0 * bhh + ah * bh + ahh * b0,
                a0 * bhy + ah * by + ay * bh + ahy * b0,
                a0 * byy + ay * by + ayy * b0,
            ],
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Inverse of an element with constant term 1: `1 - x + x^2`.
    pub fn inverse(&self) -> Result<Self> {
        if self.coeffs[0] != Q::one() {
            return Err(Error::InvalidInput(
                "only elements with constant term 1 are inverted".into(),
            ));
        }
        let x = self.sub(&Self::one());
        Ok(Self::one().sub(&x).add(&x.mul(&x)))
    }

    /// Homogeneous part of degree `k` (0, 1 or 2).
    pub fn part(&self, k: usize) -> Self {
        let keep: &[usize] = match k {
            0 => &[0],
            1 => &[1, 2],
            2 => &[3, 4, 5],
            _ => &[],
        };
        let mut e = Self::zero();
        for &i in keep {
            e.coeffs[i] = self.coeffs[i];
        }
        e
    }

    /// Basis monomials whose coefficients differ, with both values.
    pub fn mismatches(&self, o: &Self) -> Vec<Mismatch> {
        (0..6)
            .filter(|&k| self.coeffs[k] != o.coeffs[k])
            .map(|k| Mismatch {
                monomial: BASIS[k].to_string(),
                got: self.coeffs[k].to_string(),
                expected: o.coeffs[k].to_string(),
            })
            .collect()
    }
}

impl fmt::Display for ChowElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = (0..6)
            .filter(|&k| !self.coeffs[k].is_zero())
            .map(|k| match (k, self.coeffs[k]) {
                (0, c) => c.to_string(),
                (_, c) if c == Q::one() => BASIS[k].to_string(),
                (_, c) if c == -Q::one() => format!("-{}", BASIS[k]),
                (_, c) => format!("{c}{}", BASIS[k]),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + ").replace("+ -", "- "))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub monomial: String,
    pub got: String,
    pub expected: String,
}

/// Total Chern class of the line bundle with first Chern class `d`.
pub fn line_bundle(d: &ChowElement) -> ChowElement {
    ChowElement::one().add(&d.part(1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChernClasses {
    pub t: u32,
    pub c1: ChowElement,
    pub c2: ChowElement,
}

/// Chern classes of the cokernel in
/// `0 -> O(-H) -> O(Y-2H)^t -> O(Y-H)^{t+1} -> E -> 0`,
/// i.e. `c(E) = (1 - H)(1 + Y - H)^{t+1} / (1 + Y - 2H)^t`.
pub fn chern_from_sequence(t: u32) -> Result<ChernClasses> {
    if t < 2 {
        return Err(Error::InvalidInput(format!("t = {t} must be at least 2")));
    }
    let num = line_bundle(&ChowElement::divisor(0, -1))
        .mul(&line_bundle(&ChowElement::divisor(1, -1)).pow(t + 1));
    let den = line_bundle(&ChowElement::divisor(1, -2)).pow(t);
    let total = num.mul(&den.inverse()?);
    Ok(ChernClasses {
        t,
        c1: total.part(1),
        c2: total.part(2),
    })
}

/// Closed forms `c_1 = Y + (t-2)H` and `c_2 = -YH + (t^2-t+2)/2 H^2`.
pub fn chern_closed_form(t: u32) -> ChernClasses {
    let t = t as i64;
    let mut c2 = ChowElement::zero();
    c2.coeffs[3] = Q::new(t * t - t + 2, 2);
    c2.coeffs[4] = q(-1);
    ChernClasses {
        t: t as u32,
        c1: ChowElement::divisor(1, t - 2),
        c2,
    }
}

/// An extension `0 -> O(sub) -> E -> O(quot) -> 0` of line bundles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionCase {
    pub index: usize,
    /// `(a, b)` for `aY + bH`.
    pub sub: (i64, i64),
    pub quot: (i64, i64),
    pub c1: ChowElement,
    pub c2: ChowElement,
    pub c1_mismatch: Vec<Mismatch>,
    pub c2_mismatch: Vec<Mismatch>,
    pub excluded: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExclusionReport {
    pub t: u32,
    pub target: ChernClasses,
    pub cases: Vec<ExtensionCase>,
    pub all_excluded: bool,
}

/// Compares every extension of the two Ulrich line bundles
/// `O(-Y + tH)` and `O(2Y - 2H)` with the Chern classes of the sequence.
pub fn exclude_cases(t: u32) -> Result<ExclusionReport> {
    let target = chern_from_sequence(t)?;
    let ti = t as i64;
    let l1 = (-1, ti);
    let l2 = (2, -2);
    let pairs = [(l1, l1), (l2, l1), (l1, l2), (l2, l2)];
    let cases: Vec<ExtensionCase> = pairs
        .iter()
        .enumerate()
        .map(|(k, &(sub, quot))| {
            let a = ChowElement::divisor(sub.0, sub.1);
            let b = ChowElement::divisor(quot.0, quot.1);
            let total = line_bundle(&a).mul(&line_bundle(&b));
            let (c1, c2) = (total.part(1), total.part(2));
            let c1_mismatch = c1.mismatches(&target.c1);
            let c2_mismatch = c2.mismatches(&target.c2);
            let excluded = !c1_mismatch.is_empty() || !c2_mismatch.is_empty();
            ExtensionCase {
                index: k + 1,
                sub,
                quot,
                c1,
                c2,
                c1_mismatch,
                c2_mismatch,
                excluded,
            }
        })
        .collect();
    let all_excluded = cases.iter().all(|c| c.excluded);
    Ok(ExclusionReport {
        t,
        target,
        cases,
        all_excluded,
    })
}

/// `μ = c_1 · H^{d-1} / rank`, kept formal in the pairings `Y·H^{d-1}` and
/// `H^d`: the slope is `y [Y·H^{d-1}] + h [H^d]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slope {
    pub y: Q,
    pub h: Q,
    pub rank: u32,
}

pub fn slope(c1: &ChowElement, rank: u32) -> Result<Slope> {
    if rank == 0 {
        return Err(Error::InvalidInput("slope of a rank 0 sheaf".into()));
    }
    let r = q(rank as i64);
    Ok(Slope {
        y: c1.coeffs[2] / r,
        h: c1.coeffs[1] / r,
        rank,
    })
}

impl Slope {
    /// Slope after twisting by `O(kH)`.
    pub fn twist(&self, k: i64) -> Slope {
        Slope {
            y: self.y,
            h: self.h + q(k),
            rank: self.rank,
        }
    }
    /// Coefficients `(α, β)` of the linear condition `α [Y·H^{d-1}] + β [H^d] = 0`
    /// equivalent to equality of the two slopes.
    pub fn equality_condition(&self, other: &Slope) -> (Q, Q) {
        (self.y - other.y, self.h - other.h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequence_matches_closed_form() {
        for t in 2..=10 {
            assert_eq!(chern_from_sequence(t).unwrap(), chern_closed_form(t));
        }
        let c = chern_from_sequence(2).unwrap();
        assert_eq!(c.c2, ChowElement::quadric(2, -1, 0));
    }

    #[test]
    fn inverse_times_element_is_one() {
        let x = line_bundle(&ChowElement::divisor(1, -2)).pow(5);
        assert_eq!(x.mul(&x.inverse().unwrap()), ChowElement::one());
    }

    #[test]
    fn case_analysis() {
        let r = exclude_cases(3).unwrap();
        assert!(r.all_excluded);
        let m: Vec<(&str, &str, &str)> = r.cases[0]
            .c1_mismatch
            .iter()
            .map(|m| (m.monomial.as_str(), m.got.as_str(), m.expected.as_str()))
            .collect();
        assert_eq!(m, [("H", "6", "1"), ("Y", "-2", "1")]);
        assert_eq!(r.cases[3].c1, ChowElement::divisor(4, -4));
        for k in [1, 2] {
            assert!(r.cases[k].c1_mismatch.is_empty());
            assert_eq!(r.cases[k].c2, ChowElement::quadric(-6, 8, -2));
        }
    }

    #[test]
    fn slopes_are_formal_and_twist_linearly() {
        let s = slope(&ChowElement::divisor(2, 3), 1).unwrap();
        assert_eq!((s.y, s.h), (q(2), q(3)));
        assert_eq!(s.twist(1).h, q(4));
        assert!(slope(&ChowElement::zero(), 0).is_err());
        assert_eq!(ChowElement::divisor(1, -2).to_string(), "-2H + Y");
    }
}
