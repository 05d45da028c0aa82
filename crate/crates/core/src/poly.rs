//! Sparse homogeneous polynomials over an exact field.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Field;

/// Maximal number of variables supported by [`Mono`].
pub const MAX_VARS: usize = 16;

/// An exponent vector in at most [`MAX_VARS`] variables.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Mono(pub [u8; MAX_VARS]);

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl Mono {
    pub fn one() -> Self {
        Mono([0; MAX_VARS])
    }

    pub fn var(i: usize) -> Self {
        let mut m = Mono::one();
        m.0[i] = 1;
        m
    }

    pub fn from_exps(exps: &[u32]) -> Result<Self> {
        if exps.len() > MAX_VARS {
            return Err(Error::OutOfRange(format!(
                "{} variables exceed the limit {MAX_VARS}",
                exps.len()
            )));
        }
        let mut m = Mono::one();
        for (i, &e) in exps.iter().enumerate() {
            m.0[i] = u8::try_from(e)
                .map_err(|_| Error::OutOfRange(format!("exponent {e} too large")))?;
        }
        Ok(m)
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u32 {
        self.0[i] as u32
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    /// Index of the largest variable with a nonzero exponent.
    pub fn max_var(&self) -> Option<usize> {
        (0..MAX_VARS).rev().find(|&i| self.0[i] > 0)
    }

    #[inline]
    pub fn mul(&self, other: &Mono) -> Mono {
        let mut out = [0u8; MAX_VARS];
        for i in 0..MAX_VARS {
            out[i] = self.0[i]
                .checked_add(other.0[i])
                .expect("exponent overflow in monomial product");
        }
        Mono(out)
    }

    pub fn mul_var(&self, i: usize) -> Mono {
        let mut m = *self;
        m.0[i] += 1;
        m
    }

    pub fn divides(&self, other: &Mono) -> bool {
        (0..MAX_VARS).all(|i| self.0[i] <= other.0[i])
    }

    pub fn div(&self, other: &Mono) -> Option<Mono> {
        let mut out = [0u8; MAX_VARS];
        for i in 0..MAX_VARS {
            out[i] = self.0[i].checked_sub(other.0[i])?;
        }
        Some(Mono(out))
    }

    /// Graded reverse lexicographic comparison.
    pub fn grevlex_cmp(&self, other: &Mono) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        for i in (0..MAX_VARS).rev() {
            if self.0[i] != other.0[i] {
                return other.0[i].cmp(&self.0[i]);
            }
        }
        Ordering::Equal
    }

    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        for i in 0..MAX_VARS {
            match self.0[i] {
                0 => {}
                1 => parts.push(format!("x{i}")),
                e => parts.push(format!("x{i}^{e}")),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// All monomials of degree `d` in `nvars` variables, in descending grevlex order.
pub fn monomials(nvars: usize, d: u32) -> Vec<Mono> {
    let mut out = Vec::new();
    if nvars == 0 {
        if d == 0 {
            out.push(Mono::one());
        }
        return out;
    }
    let mut cur = Mono::one();
    fn rec(i: usize, nvars: usize, left: u32, cur: &mut Mono, out: &mut Vec<Mono>) {
        if i == nvars - 1 {
            cur.0[i] = left as u8;
            out.push(*cur);
            cur.0[i] = 0;
            return;
        }
        for e in (0..=left).rev() {
            cur.0[i] = e as u8;
            rec(i + 1, nvars, left - e, cur, out);
        }
        cur.0[i] = 0;
    }
    rec(0, nvars, d, &mut cur, &mut out);
    out.sort_by(|a, b| b.grevlex_cmp(a));
    out
}

/// Number of monomials of degree `d` in `nvars` variables.
pub fn monomial_count(nvars: usize, d: i64) -> u64 {
    if d < 0 {
        return 0;
    }
    if nvars == 0 {
        return u64::from(d == 0);
    }
    binomial(d as u64 + nvars as u64 - 1, nvars as u64 - 1)
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r as u64
}

/// Signed binomial coefficient `binom(n, k)` for possibly negative `n` is not
/// needed here; this variant returns 0 whenever `n < k` or `n < 0`.
pub fn binomial_i(n: i64, k: i64) -> i64 {
    if n < 0 || k < 0 || k > n {
        0
    } else {
        binomial(n as u64, k as u64) as i64
    }
}

/// A homogeneous polynomial with terms stored in descending grevlex order.
#[derive(Clone)]
pub struct Poly<F: Field> {
    field: F,
    nvars: usize,
    deg: Option<u32>,
    terms: Vec<(Mono, F::Elem)>,
}

impl<F: Field> PartialEq for Poly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.terms == other.terms
    }
}

impl<F: Field> Eq for Poly<F> {}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl<F: Field> Poly<F> {
    pub fn zero(field: &F, nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "too many variables");
        Poly {
            field: field.clone(),
            nvars,
            deg: None,
            terms: Vec::new(),
        }
    }

    pub fn constant(field: &F, nvars: usize, c: F::Elem) -> Self {
        Self::monomial(field, nvars, Mono::one(), c)
    }

    pub fn one(field: &F, nvars: usize) -> Self {
        Self::constant(field, nvars, field.one())
    }

    pub fn from_i64(field: &F, nvars: usize, c: i64) -> Self {
        Self::constant(field, nvars, field.from_i64(c))
    }

    pub fn monomial(field: &F, nvars: usize, m: Mono, c: F::Elem) -> Self {
        assert!(nvars <= MAX_VARS, "too many variables");
        debug_assert!(m.max_var().map_or(true, |v| v < nvars));
        if field.is_zero(&c) {
            return Self::zero(field, nvars);
        }
        Poly {
            field: field.clone(),
            nvars,
            deg: Some(m.degree()),
            terms: vec![(m, c)],
        }
    }

    pub fn var(field: &F, nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        Self::monomial(field, nvars, Mono::var(i), field.one())
    }

    /// Build from arbitrary terms; duplicates are combined and zeros dropped.
    pub fn from_terms(field: &F, nvars: usize, terms: Vec<(Mono, F::Elem)>) -> Result<Self> {
        if nvars > MAX_VARS {
            return Err(Error::OutOfRange(format!("{nvars} variables")));
        }
        let mut map: HashMap<Mono, F::Elem> = HashMap::with_capacity(terms.len());
        let mut deg: Option<u32> = None;
        for (m, c) in terms {
            if let Some(v) = m.max_var() {
                if v >= nvars {
                    return Err(Error::OutOfRange(format!(
                        "variable x{v} with {nvars} variables"
                    )));
                }
            }
            if field.is_zero(&c) {
                continue;
            }
            match deg {
                None => deg = Some(m.degree()),
                Some(d) if d != m.degree() => {
                    return Err(Error::Inhomogeneous(format!(
                        "terms of degree {d} and {}",
                        m.degree()
                    )))
                }
                _ => {}
            }
            let e = map.entry(m).or_insert_with(|| field.zero());
            *e = field.add(e, &c);
        }
        Ok(Self::from_map(field, nvars, map))
    }

    fn from_map(field: &F, nvars: usize, map: HashMap<Mono, F::Elem>) -> Self {
        let mut terms: Vec<(Mono, F::Elem)> =
            map.into_iter().filter(|(_, c)| !field.is_zero(c)).collect();
        terms.sort_by(|a, b| b.0.grevlex_cmp(&a.0));
        let deg = terms.first().map(|(m, _)| m.degree());
        Poly {
            field: field.clone(),
            nvars,
            deg,
            terms,
        }
    }

    #[inline]
    pub fn field(&self) -> &F {
        &self.field
    }
    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars
    }
    /// Total degree, `None` for the zero polynomial.
    #[inline]
    pub fn degree(&self) -> Option<u32> {
        self.deg
    }
    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    #[inline]
    pub fn terms(&self) -> &[(Mono, F::Elem)] {
        &self.terms
    }
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
    /// The coefficient of a degree-zero polynomial (zero otherwise).
    pub fn constant_value(&self) -> Option<F::Elem> {
        match self.deg {
            Some(0) => Some(self.terms[0].1.clone()),
            None => Some(self.field.zero()),
            _ => None,
        }
    }
    pub fn is_constant(&self) -> bool {
        matches!(self.deg, None | Some(0))
    }
    pub fn coeff(&self, m: &Mono) -> F::Elem {
        self.terms
            .iter()
            .find(|(mm, _)| mm == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.field.zero())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::Incompatible(format!(
                "{} vs {} variables",
                self.nvars, other.nvars
            )));
        }
        if self.field != other.field {
            return Err(Error::Incompatible("different coefficient fields".into()));
        }
        Ok(())
    }

    fn combine(&self, other: &Self, negate_other: bool) -> Result<Self> {
        self.check_compatible(other)?;
        if let (Some(a), Some(b)) = (self.deg, other.deg) {
            if a != b {
                return Err(Error::DegreeMismatch(format!(
                    "cannot add degree {a} and {b}"
                )));
            }
        }
        let f = &self.field;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() || j < b.len() {
            let ord = if i == a.len() {
                Ordering::Less
            } else if j == b.len() {
                Ordering::Greater
            } else {
                a[i].0.grevlex_cmp(&b[j].0)
            };
            match ord {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate_other {
                        f.neg(&b[j].1)
                    } else {
                        b[j].1.clone()
                    };
                    out.push((b[j].0, c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_other {
                        f.sub(&a[i].1, &b[j].1)
                    } else {
                        f.add(&a[i].1, &b[j].1)
                    };
                    if !f.is_zero(&c) {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        let deg = out.first().map(|(m, _)| m.degree());
        Ok(Poly {
            field: f.clone(),
            nvars: self.nvars,
            deg,
            terms: out,
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.combine(other, false)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, true)
    }

    /// Sum; panics on a degree mismatch between nonzero operands.
    pub fn add(&self, other: &Self) -> Self {
        self.checked_add(other).expect("polynomial addition")
    }

    /// Difference; panics on a degree mismatch between nonzero operands.
    pub fn sub(&self, other: &Self) -> Self {
        self.checked_sub(other).expect("polynomial subtraction")
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        Poly {
            field: f.clone(),
            nvars: self.nvars,
            deg: self.deg,
            terms: self.terms.iter().map(|(m, c)| (*m, f.neg(c))).collect(),
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        if f.is_zero(c) {
            return Self::zero(f, self.nvars);
        }
        Poly {
            field: f.clone(),
            nvars: self.nvars,
            deg: self.deg,
            terms: self.terms.iter().map(|(m, a)| (*m, f.mul(a, c))).collect(),
        }
    }

    pub fn scale_i64(&self, c: i64) -> Self {
        self.scale(&self.field.from_i64(c))
    }

    /// Multiply by `c * m`; order is preserved because grevlex is a monomial order.
    pub fn mul_term(&self, m: &Mono, c: &F::Elem) -> Self {
        let f = &self.field;
        if f.is_zero(c) || self.is_zero() {
            return Self::zero(f, self.nvars);
        }
        Poly {
            field: f.clone(),
            nvars: self.nvars,
            deg: self.deg.map(|d| d + m.degree()),
            terms: self
                .terms
                .iter()
                .map(|(mm, a)| (mm.mul(m), f.mul(a, c)))
                .collect(),
        }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(f, self.nvars));
        }
        if other.terms.len() == 1 {
            return Ok(self.mul_term(&other.terms[0].0, &other.terms[0].1));
        }
        if self.terms.len() == 1 {
            return Ok(other.mul_term(&self.terms[0].0, &self.terms[0].1));
        }
        let mut map: HashMap<Mono, F::Elem> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let p = f.mul(ca, cb);
                match map.get_mut(&m) {
                    Some(e) => *e = f.add(e, &p),
                    None => {
                        map.insert(m, p);
                    }
                }
            }
        }
        Ok(Self::from_map(f, self.nvars, map))
    }

    /// Product; panics on incompatible operands.
    pub fn mul(&self, other: &Self) -> Self {
        self.checked_mul(other).expect("polynomial multiplication")
    }

    pub fn eval(&self, point: &[F::Elem]) -> Result<F::Elem> {
        if point.len() != self.nvars {
            return Err(Error::Incompatible(format!(
                "point of length {} for {} variables",
                point.len(),
                self.nvars
            )));
        }
        Ok(self.eval_unchecked(point))
    }

    pub fn eval_unchecked(&self, point: &[F::Elem]) -> F::Elem {
        let f = &self.field;
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, x) in point.iter().enumerate().take(self.nvars) {
                let e = m.exp(i);
                if e > 0 {
                    v = f.mul(&v, &f.pow(x, e));
                }
            }
            acc = f.add(&acc, &v);
        }
        acc
    }

    /// Substitute `x_i -> images[i]`; all images must share one degree.
    pub fn substitute(&self, images: &[Poly<F>]) -> Result<Self> {
        if images.len() != self.nvars {
            return Err(Error::Incompatible("substitution length".into()));
        }
        let f = &self.field;
        let target_nvars = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut out = Self::zero(f, target_nvars);
        for (m, c) in &self.terms {
            let mut t = Self::constant(f, target_nvars, c.clone());
            for (i, img) in images.iter().enumerate() {
                for _ in 0..m.exp(i) {
                    t = t.checked_mul(img)?;
                }
            }
            out = out.checked_add(&t)?;
        }
        Ok(out)
    }

    /// Canonical rendering, terms in descending grevlex order.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let f = &self.field;
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let mut cs = f.render(c);
            let negative = cs.starts_with('-') || cs.starts_with("(-");
            if negative {
                cs = cs.replacen('-', "", 1);
            }
            if k == 0 {
                if negative {
                    s.push('-');
                }
            } else {
                s.push_str(if negative { " - " } else { " + " });
            }
            let mono = m.render();
            if mono == "1" {
                s.push_str(&cs);
            } else if cs == "1" {
                s.push_str(&mono);
            } else {
                s.push_str(&cs);
                s.push('*');
                s.push_str(&mono);
            }
        }
        s
    }
}

impl<F: Field> Poly<F> {
    /// Parses the output of [`Poly::render`]: a signed sum of terms
    /// `c*x0^2*x3` with integer or fractional coefficients `p/q` or `(p/q)`.
    pub fn parse(field: &F, nvars: usize, text: &str) -> Result<Self> {
        let bad = |why: &str| Error::InvalidInput(format!("cannot parse `{text}`: {why}"));
        let compact: String = text.chars().filter(|ch| !ch.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad("empty"));
        }
        let mut terms = Vec::new();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let (neg, body) = match rest.as_bytes()[0] {
                b'-' => (true, &rest[1..]),
                b'+' => (false, &rest[1..]),
                _ if terms.is_empty() => (false, rest),
                _ => return Err(bad("expected + or -")),
            };
            let mut depth = 0i32;
            let end = body
                .char_indices()
                .find(|&(_, ch)| {
                    match ch {
                        '(' => depth += 1,
                        ')' => depth -= 1,
                        _ => {}
                    }
                    depth == 0 && (ch == '+' || ch == '-')
                })
                .map_or(body.len(), |(k, _)| k);
            let (term, tail) = body.split_at(end);
            rest = tail;
            let mut coeff = field.one();
            let mut exps = vec![0u32; nvars];
            for factor in term.split('*') {
                if let Some(v) = factor.strip_prefix('x') {
                    let (idx, e) = match v.split_once('^') {
                        Some((i, e)) => (i, e.parse::<u32>().map_err(|_| bad("exponent"))?),
                        None => (v, 1),
                    };
                    let i: usize = idx.parse().map_err(|_| bad("variable index"))?;
                    if i >= nvars {
                        return Err(bad(&format!("x{i} outside {nvars} variables")));
                    }
                    exps[i] += e;
                } else {
                    let factor = factor.trim_start_matches('(').trim_end_matches(')');
                    let (num, den) = factor.split_once('/').unwrap_or((factor, "1"));
                    let num: i64 = num.parse().map_err(|_| bad("coefficient"))?;
                    let den: i64 = den.parse().map_err(|_| bad("coefficient"))?;
                    let inv = field
                        .inv(&field.from_i64(den))
                        .ok_or_else(|| bad("zero denominator"))?;
                    coeff = field.mul(&coeff, &field.mul(&field.from_i64(num), &inv));
                }
            }
            if neg {
                coeff = field.neg(&coeff);
            }
            terms.push((Mono::from_exps(&exps)?, coeff));
        }
        Poly::from_terms(field, nvars, terms)
    }
}

/// A dense form of degree `d` with pseudorandom nonzero coefficients.
pub fn random_form<F: Field>(field: &F, nvars: usize, d: i64, seed: u64) -> Result<Poly<F>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_form_rng(field, nvars, d, &mut rng)
}

pub fn random_form_rng<F: Field, R: Rng + ?Sized>(
    field: &F,
    nvars: usize,
    d: i64,
    rng: &mut R,
) -> Result<Poly<F>> {
    if d <= 0 {
        return Err(Error::InvalidInput(format!("random form of degree {d}")));
    }
    let terms = monomials(nvars, d as u32)
        .into_iter()
        .map(|m| (m, field.random_nonzero(rng)))
        .collect();
    Poly::from_terms(field, nvars, terms)
}

#[cfg(test)]
mod tests {
    #[test]
    fn parse_inverts_render() {
        let f = crate::field::Fp::default_prime();
        let p = Poly::parse(&f, 4, "-x1^2 + x0*x2 + 3*x3^2").unwrap();
        assert_eq!(Poly::parse(&f, 4, &p.render()).unwrap(), p);
        let q = crate::field::Rationals;
        let h = Poly::parse(&q, 2, "1/2*x0 - x1").unwrap();
        assert_eq!(h.render(), "(1/2)*x0 - x1");
        assert_eq!(Poly::parse(&q, 2, &h.render()).unwrap(), h);
        assert!(Poly::parse(&f, 2, "x2").is_err());
        assert!(Poly::parse(&f, 2, "x0 x1").is_err());
    }

    use super::*;
    use crate::field::{Fp, Rationals};

    fn q() -> Rationals {
        Rationals
    }

    fn x(i: usize) -> Poly<Rationals> {
        Poly::var(&q(), 3, i)
    }

    #[test]
    fn additive_inverse_and_doubling() {
        let a = x(0);
        assert!(a.add(&a.neg()).is_zero());
        assert_eq!(a.add(&a.neg()).degree(), None);
        let m = x(0).mul(&x(1));
        assert_eq!(m.add(&m).render(), "2*x0*x1");
    }

    #[test]
    fn modular_sum() {
        let f = Fp::new(5).unwrap();
        let x0 = Poly::var(&f, 2, 0);
        let a = x0.mul(&x0).scale(&3);
        let b = x0.mul(&x0).scale(&4);
        assert_eq!(a.add(&b), x0.mul(&x0).scale(&2));
    }

    #[test]
    fn degree_mismatch_is_error() {
        let a = x(0);
        let b = x(0).mul(&x(1));
        assert!(matches!(a.checked_add(&b), Err(Error::DegreeMismatch(_))));
        assert!(Poly::from_terms(
            &q(),
            3,
            vec![(Mono::var(0), q().one()), (Mono::one(), q().one())]
        )
        .is_err());
    }

    #[test]
    fn products() {
        let s = x(0).add(&x(1));
        let d = x(0).sub(&x(1));
        assert_eq!(s.mul(&d).render(), "x0^2 - x1^2");
        assert!(Poly::zero(&q(), 3).mul(&s).is_zero());
        assert_eq!(s.mul(&s).render(), "x0^2 + 2*x0*x1 + x1^2");
    }

    #[test]
    fn evaluation() {
        let f = Fp::new(2).unwrap();
        let x0 = Poly::var(&f, 2, 0);
        let x1 = Poly::var(&f, 2, 1);
        let g = x0.mul(&x0).add(&x1.mul(&x1));
        assert_eq!(g.eval(&[1, 1]).unwrap(), 0);
        let h = x(0).mul(&x(1));
        let v = h
            .eval(&[q().from_i64(2), q().from_i64(3), q().from_i64(5)])
            .unwrap();
        assert_eq!(v, q().from_i64(6));
    }

    #[test]
    fn grevlex_order() {
        let ms = monomials(3, 2);
        let r: Vec<String> = ms.iter().map(|m| m.render()).collect();
        assert_eq!(r, ["x0^2", "x0*x1", "x1^2", "x0*x2", "x1*x2", "x2^2"]);
        assert_eq!(monomial_count(3, 2), 6);
        assert_eq!(monomials(4, 3).len() as u64, monomial_count(4, 3));
    }

    #[test]
    fn random_form_determinism() {
        let f = Fp::default_prime();
        let a = random_form(&f, 4, 3, 7).unwrap();
        let b = random_form(&f, 4, 3, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.degree(), Some(3));
        assert!(random_form(&f, 4, 0, 7).is_err());
        let mut distinct = std::collections::HashSet::new();
        for s in 0..100 {
            distinct.insert(random_form(&f, 3, 2, s).unwrap().render());
        }
        assert_eq!(distinct.len(), 100);
    }
}
