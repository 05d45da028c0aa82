//! Exact coefficient fields: the rationals and prime fields F_p.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default prime for randomized computations.
pub const DEFAULT_PRIME: u32 = 32003;

/// An exact field with an accumulator type used by the elimination kernels.
///
/// `Acc` holds partially reduced sums of products so that inner loops can
/// postpone modular reduction.
pub trait Field: Clone + Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Send + Sync;
    type Acc: Clone + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, v: i64) -> Self::Elem;
    /// A pseudorandom element (uniform for prime fields, small integers for Q).
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;
    /// A pseudorandom nonzero element.
    fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        loop {
            let x = self.random(rng);
            if !self.is_zero(&x) {
                return x;
            }
        }
    }
    fn render(&self, a: &Self::Elem) -> String;
    /// Characteristic of the field (0 for Q).
    fn characteristic(&self) -> u64;
    fn spec(&self) -> FieldSpec;

    fn acc_zero(&self) -> Self::Acc;
    /// `acc += a * b`
    fn acc_add_mul(&self, acc: &mut Self::Acc, a: &Self::Elem, b: &Self::Elem);
    fn acc_set(&self, acc: &mut Self::Acc, a: &Self::Elem);
    fn acc_get(&self, acc: &Self::Acc) -> Self::Elem;
    fn acc_clear(&self, acc: &mut Self::Acc) {
        *acc = self.acc_zero();
    }
    /// Cheap test for an accumulator that is certainly zero.
    fn acc_is_trivially_zero(&self, acc: &Self::Acc) -> bool;

    fn pow(&self, a: &Self::Elem, mut e: u32) -> Self::Elem {
        let mut base = a.clone();
        let mut out = self.one();
        while e > 0 {
            if e & 1 == 1 {
                out = self.mul(&out, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        out
    }
}

/// Serializable description of a coefficient field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldSpec {
    Rationals,
    PrimeField { p: u32 },
}

impl std::fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "QQ"),
            FieldSpec::PrimeField { p } => write!(f, "F_{p}"),
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// The prime field F_p with `2 <= p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    p: u32,
}

impl Fp {
    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if p >= 1 << 31 {
            return Err(Error::InvalidField(format!("{p} exceeds 2^31")));
        }
        Ok(Fp { p })
    }

    pub fn default_prime() -> Self {
        Fp { p: DEFAULT_PRIME }
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Symmetric representative in (-p/2, p/2].
    pub fn signed(&self, a: u32) -> i64 {
        let a = a as i64;
        let p = self.p as i64;
        if a > p / 2 {
            a - p
        } else {
            a
        }
    }
}

impl Field for Fp {
    type Elem = u32;
    type Acc = u64;

    #[inline]
    fn zero(&self) -> u32 {
        0
    }
    #[inline]
    fn one(&self) -> u32 {
        1
    }
    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = *a as u64 + *b as u64;
        let p = self.p as u64;
        (if s >= p { s - p } else { s }) as u32
    }
    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (*a as u64 + self.p as u64 - *b as u64) as u32
        }
    }
    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.p as i64, *a as i64);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        Some(s0.rem_euclid(self.p as i64) as u32)
    }
    fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.p)
    }
    fn render(&self, a: &u32) -> String {
        self.signed(*a).to_string()
    }
    fn characteristic(&self) -> u64 {
        self.p as u64
    }
    fn spec(&self) -> FieldSpec {
        FieldSpec::PrimeField { p: self.p }
    }

    #[inline]
    fn acc_zero(&self) -> u64 {
        0
    }
    #[inline]
    fn acc_add_mul(&self, acc: &mut u64, a: &u32, b: &u32) {
        *acc += *a as u64 * *b as u64;
        if *acc >= 1 << 63 {
            *acc %= self.p as u64;
        }
    }
    #[inline]
    fn acc_set(&self, acc: &mut u64, a: &u32) {
        *acc = *a as u64;
    }
    #[inline]
    fn acc_get(&self, acc: &u64) -> u32 {
        (*acc % self.p as u64) as u32
    }
    #[inline]
    fn acc_clear(&self, acc: &mut u64) {
        *acc = 0;
    }
    #[inline]
    fn acc_is_trivially_zero(&self, acc: &u64) -> bool {
        *acc == 0
    }
}

/// The field of rational numbers with arbitrary precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;
    type Acc = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        self.from_i64(rng.gen_range(-9..=9))
    }
    fn render(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("({}/{})", a.numer(), a.denom())
        }
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }

    fn acc_zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn acc_add_mul(&self, acc: &mut BigRational, a: &BigRational, b: &BigRational) {
        *acc += a * b;
    }
    fn acc_set(&self, acc: &mut BigRational, a: &BigRational) {
        *acc = a.clone();
    }
    fn acc_get(&self, acc: &BigRational) -> BigRational {
        acc.clone()
    }
    fn acc_is_trivially_zero(&self, acc: &BigRational) -> bool {
        acc.is_zero()
    }
}

/// Render a rational compactly (used by the Chern arithmetic).
pub fn render_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Best-effort conversion of a rational to f64 (diagnostics only).
pub fn rational_to_f64(q: &BigRational) -> f64 {
    let n = q.numer().to_f64().unwrap_or(f64::NAN);
    let d = q.denom().to_f64().unwrap_or(f64::NAN);
    if q.is_negative() && n > 0.0 {
        -n / d
    } else {
        n / d
    }
}
