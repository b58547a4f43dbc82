use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which ground ring a computation runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RingSpec {
    Integers,
    Rationals,
    PrimeField(u64),
}

impl RingSpec {
    pub fn validate(self) -> Result<Self> {
        if let RingSpec::PrimeField(p) = self {
            if !is_prime(p) {
                return Err(Error::InvalidRing(format!("{p} is not prime")));
            }
            if p >= 1 << 31 {
                return Err(Error::InvalidRing(format!("prime {p} too large (need < 2^31)")));
            }
        }
        Ok(self)
    }

    pub fn is_field(self) -> bool {
        !matches!(self, RingSpec::Integers)
    }

    /// Characteristic of the ring (0 for Z and Q).
    pub fn characteristic(self) -> u64 {
        match self {
            RingSpec::PrimeField(p) => p,
            _ => 0,
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => write!(f, "Z"),
            RingSpec::Rationals => write!(f, "Q"),
            RingSpec::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for RingSpec {
    type Err = Error;

    /// Accepts `Z`, `Q`, `F5`, `Fp(5)`, `GF(5)`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let spec = match t {
            "Z" | "ZZ" | "z" | "Integers" => RingSpec::Integers,
            "Q" | "QQ" | "q" | "Rationals" => RingSpec::Rationals,
            _ => {
                let digits = t
                    .strip_prefix("Fp(")
                    .or_else(|| t.strip_prefix("GF("))
                    .and_then(|x| x.strip_suffix(')'))
                    .or_else(|| t.strip_prefix('F'))
                    .ok_or_else(|| Error::InvalidRing(t.to_string()))?;
                let p: u64 = digits
                    .parse()
                    .map_err(|_| Error::InvalidRing(t.to_string()))?;
                RingSpec::PrimeField(p)
            }
        };
        spec.validate()
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A commutative ring with an explicit context object.
///
/// Elements are plain values; all arithmetic goes through the context so that
/// prime fields can carry their modulus without storing it per element.
pub trait Ring: Clone + Send + Sync + fmt::Debug + 'static {
    type El: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn spec(&self) -> RingSpec;
    fn zero(&self) -> Self::El;
    fn from_i64(&self, n: i64) -> Self::El;
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn neg(&self, a: &Self::El) -> Self::El;
    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn is_zero(&self, a: &Self::El) -> bool;
    fn format(&self, a: &Self::El) -> String;
    fn parse(&self, s: &str) -> Result<Self::El>;

    fn one(&self) -> Self::El {
        self.from_i64(1)
    }

    fn sub(&self, a: &Self::El, b: &Self::El) -> Self::El {
        self.add(a, &self.neg(b))
    }

    fn is_one(&self, a: &Self::El) -> bool {
        *a == self.one()
    }

    /// `acc += a * b`
    fn add_mul_assign(&self, acc: &mut Self::El, a: &Self::El, b: &Self::El) {
        *acc = self.add(acc, &self.mul(a, b));
    }
}

pub trait Field: Ring {
    /// Multiplicative inverse; panics on zero.
    fn inv(&self, a: &Self::El) -> Self::El;

    fn div(&self, a: &Self::El, b: &Self::El) -> Self::El {
        self.mul(a, &self.inv(b))
    }
}

/// The integers, with overflow-checked 128-bit arithmetic.
#[derive(Debug, Clone, Copy, Default)]
pub struct Integers;

impl Ring for Integers {
    type El = i128;

    fn spec(&self) -> RingSpec {
        RingSpec::Integers
    }
    fn zero(&self) -> i128 {
        0
    }
    fn from_i64(&self, n: i64) -> i128 {
        n as i128
    }
    fn add(&self, a: &i128, b: &i128) -> i128 {
        a.checked_add(*b).expect("integer coefficient overflow")
    }
    fn neg(&self, a: &i128) -> i128 {
        a.checked_neg().expect("integer coefficient overflow")
    }
    fn mul(&self, a: &i128, b: &i128) -> i128 {
        a.checked_mul(*b).expect("integer coefficient overflow")
    }
    fn is_zero(&self, a: &i128) -> bool {
        *a == 0
    }
    fn format(&self, a: &i128) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<i128> {
        s.trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad integer {s:?}")))
    }
}

/// The rationals with arbitrary precision.
#[derive(Debug, Clone, Copy, Default)]
pub struct Rationals;

impl Ring for Rationals {
    type El = BigRational;

    fn spec(&self) -> RingSpec {
        RingSpec::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn format(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn parse(&self, s: &str) -> Result<BigRational> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad rational {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.parse().map_err(|_| bad())?;
                let d: BigInt = d.parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(BigRational::new(n, d))
            }
            None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
        }
    }
}

impl Field for Rationals {
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
}

/// The prime field Z/p, p < 2^31.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        RingSpec::PrimeField(p).validate()?;
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl Ring for PrimeField {
    type El = u64;

    fn spec(&self) -> RingSpec {
        RingSpec::PrimeField(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<u64> {
        let n: i64 = s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad residue {s:?}")))?;
        Ok(self.from_i64(n))
    }
}

impl Field for PrimeField {
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        // Fermat
        let mut base = *a;
        let mut exp = self.p - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

/// Maps an integer into an arbitrary ring.
pub fn from_i128<R: Ring>(ring: &R, n: i128) -> R::El {
    match i64::try_from(n) {
        Ok(v) => ring.from_i64(v),
        Err(_) => {
            // split into high and low halves
            let base = ring.from_i64(1 << 32);
            let sign = n.is_negative();
            let mut m = n.unsigned_abs();
            let mut digits = Vec::new();
            while m > 0 {
                digits.push((m & 0xffff_ffff) as i64);
                m >>= 32;
            }
            let mut acc = ring.zero();
            for d in digits.into_iter().rev() {
                acc = ring.add(&ring.mul(&acc, &base), &ring.from_i64(d));
            }
            if sign {
                ring.neg(&acc)
            } else {
                acc
            }
        }
    }
}

/// Converts a rational with integral value back to i128, if it is one.
pub fn rational_to_i128(q: &BigRational) -> Option<i128> {
    if q.is_integer() {
        q.numer().to_i128()
    } else {
        None
    }
}
