//! Truncated p-adic integers.
//!
//! A [`PAdicInt`] is a residue mod p^N together with the precision N (the
//! number of known p-adic digits). All arithmetic is exact at the carried
//! precision; binary operations between operands of different precision
//! truncate to the minimum. Values are immutable and `Copy`.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::{Error, Result};

/// Largest exponent e with p^e <= u64::MAX, by trial multiplication.
fn max_prec(p: u64) -> u32 {
    let mut e = 0u32;
    let mut acc = 1u128;
    while acc * p as u128 <= u64::MAX as u128 {
        acc *= p as u128;
        e += 1;
    }
    e
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// p-adic valuation of a truncated value.
///
/// A zero residue only witnesses divisibility up to the carried precision,
/// so the valuation of 0 is reported as `AtLeast(prec)` rather than infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Valuation {
    Finite(u32),
    AtLeast(u32),
}

impl Valuation {
    /// True when the valuation is known (or known to be at least) `k`.
    pub fn at_least(&self, k: u32) -> bool {
        match *self {
            Valuation::Finite(v) => v >= k,
            Valuation::AtLeast(v) => v >= k,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{}", v),
            Valuation::AtLeast(v) => write!(f, ">={}", v),
        }
    }
}

/// A p-adic integer known mod p^prec.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PAdicInt {
    #[serde(rename = "p")]
    prime: u64,
    prec: u32,
    residue: u64,
}

impl PAdicInt {
    /// Builds v mod p^prec. Negative v wraps around, so `new(2, 8, -1)`
    /// has residue 255.
    pub fn new(prime: u64, prec: u32, v: i128) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::NotPrime(prime));
        }
        if prec < 1 {
            return Err(Error::InvalidPrecision { prec: prec as i64 });
        }
        if prec > max_prec(prime) {
            return Err(Error::PrecisionOverflow { prime, prec });
        }
        let m = pow_u128(prime, prec) as i128;
        Ok(PAdicInt {
            prime,
            prec,
            residue: v.rem_euclid(m) as u64,
        })
    }

    /// Same ring as `self`, different value. Skips the prime test.
    pub(crate) fn with_value(&self, v: i128) -> Self {
        let m = self.modulus() as i128;
        PAdicInt {
            prime: self.prime,
            prec: self.prec,
            residue: v.rem_euclid(m) as u64,
        }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    fn modulus(&self) -> u128 {
        pow_u128(self.prime, self.prec)
    }

    pub fn zero(prime: u64, prec: u32) -> Result<Self> {
        Self::new(prime, prec, 0)
    }

    pub fn one(prime: u64, prec: u32) -> Result<Self> {
        Self::new(prime, prec, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.residue == 0
    }

    /// True when the residue is not divisible by p.
    pub fn is_unit(&self) -> bool {
        !self.residue.is_multiple_of(self.prime)
    }

    /// Truncates to `prec` digits. Requires `prec >= 1` and no more digits
    /// than are carried.
    pub fn truncate(&self, prec: u32) -> Self {
        assert!(
            prec >= 1 && prec <= self.prec,
            "cannot truncate prec {} to {}",
            self.prec,
            prec
        );
        let m = pow_u128(self.prime, prec);
        PAdicInt {
            prime: self.prime,
            prec,
            residue: (self.residue as u128 % m) as u64,
        }
    }

    fn align(&self, rhs: &Self) -> (u32, u128) {
        assert_eq!(
            self.prime, rhs.prime,
            "mixed primes: {} vs {}",
            self.prime, rhs.prime
        );
        let prec = self.prec.min(rhs.prec);
        (prec, pow_u128(self.prime, prec))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let (prec, m) = self.align(rhs);
        PAdicInt {
            prime: self.prime,
            prec,
            residue: ((self.residue as u128 + rhs.residue as u128) % m) as u64,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        let m = self.modulus();
        PAdicInt {
            prime: self.prime,
            prec: self.prec,
            residue: ((m - self.residue as u128) % m) as u64,
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let (prec, m) = self.align(rhs);
        PAdicInt {
            prime: self.prime,
            prec,
            residue: ((self.residue as u128 * rhs.residue as u128) % m) as u64,
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = *self;
        let mut acc = self.with_value(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplicative inverse mod p^prec, by Newton lifting from the
    /// Fermat inverse mod p. Errors on non-units, reporting the valuation.
    pub fn inv(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotAUnit {
                valuation: self.val(),
            });
        }
        let p = self.prime as u128;
        let m = self.modulus();
        let a = self.residue as u128;
        // inverse mod p via Fermat: a^(p-2)
        let mut x = mod_pow(a % p, (self.prime - 2).max(1) as u128, p);
        if self.prime == 2 {
            x = 1; // the only unit mod 2
        }
        // x <- x(2 - ax), doubling correct digits each round
        let mut digits = 1u32;
        while digits < self.prec {
            let ax = a * x % m;
            let two_minus = (2 + m - ax) % m;
            x = x * two_minus % m;
            digits *= 2;
        }
        Ok(PAdicInt {
            prime: self.prime,
            prec: self.prec,
            residue: (x % m) as u64,
        })
    }

    /// Largest k <= prec with p^k dividing the residue; `AtLeast(prec)`
    /// for the zero residue.
    pub fn val(&self) -> Valuation {
        if self.residue == 0 {
            return Valuation::AtLeast(self.prec);
        }
        let mut v = 0;
        let mut r = self.residue;
        while r.is_multiple_of(self.prime) {
            r /= self.prime;
            v += 1;
        }
        Valuation::Finite(v)
    }

    /// Exact division by p^k. The result carries prec - k digits; errors
    /// when the valuation is smaller than k or no digits would remain.
    pub fn div_exact(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Ok(*self);
        }
        if !self.val().at_least(k) {
            return Err(Error::NotDivisible {
                needed: k,
                found: self.val(),
            });
        }
        if self.prec <= k {
            return Err(Error::InvalidPrecision {
                prec: self.prec as i64 - k as i64,
            });
        }
        let pk = pow_u128(self.prime, k);
        let prec = self.prec - k;
        let m = pow_u128(self.prime, prec);
        PAdicInt {
            prime: self.prime,
            prec,
            residue: ((self.residue as u128 / pk) % m) as u64,
        }
        .pipe_ok()
    }

    fn pipe_ok(self) -> Result<Self> {
        Ok(self)
    }

    /// Equal as far as both are known, i.e. at the shared precision.
    pub fn congruent(&self, rhs: &Self) -> bool {
        let (prec, _) = self.align(rhs);
        self.truncate(prec).residue == rhs.truncate(prec).residue
    }
}

impl fmt::Display for PAdicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({}^{})", self.residue, self.prime, self.prec)
    }
}

fn pow_u128(base: u64, e: u32) -> u128 {
    let mut acc = 1u128;
    for _ in 0..e {
        acc *= base as u128;
    }
    acc
}

fn mod_pow(mut base: u128, mut e: u128, m: u128) -> u128 {
    let mut acc = 1u128 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        e >>= 1;
        base = base * base % m;
    }
    acc
}
