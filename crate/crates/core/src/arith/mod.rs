//! Exact integers and rationals: the plus/minus decomposition, p-adic
//! valuations, square detection, and budgeted factorization.

mod factor;
mod primes;
pub mod serde_int;
pub mod serde_rat;

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::Rational;

pub use factor::{factor, FactorBudget, Factorization};
pub use primes::{is_prime_u64, is_probable_prime, primes_up_to};

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// A rational prime, checked at construction.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Prime(BigInt);

impl Prime {
    pub fn new(p: impl Into<BigInt>) -> Result<Self> {
        let p = p.into();
        if is_probable_prime(&p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    /// Wraps a value already known to be prime.
    pub(crate) fn new_unchecked(p: BigInt) -> Self {
        debug_assert!(is_probable_prime(&p));
        Prime(p)
    }

    pub fn value(&self) -> &BigInt {
        &self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
}

impl TryFrom<BigInt> for Prime {
    type Error = Error;

    fn try_from(p: BigInt) -> Result<Self> {
        Prime::new(p)
    }
}

impl TryFrom<String> for Prime {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        let p: BigInt = s
            .parse()
            .map_err(|_| Error::Domain(format!("not an integer: {s:?}")))?;
        Prime::new(p)
    }
}

impl From<Prime> for String {
    fn from(p: Prime) -> String {
        p.0.to_string()
    }
}

impl From<Prime> for BigInt {
    fn from(p: Prime) -> BigInt {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The decomposition `α = α⁺ / α⁻` with `α⁺ > 0`, `gcd(α⁺, α⁻) = 1`, and the
/// sign of `α` carried by `α⁻`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlusMinus {
    pub plus: BigInt,
    pub minus: BigInt,
}

impl PlusMinus {
    pub fn to_rational(&self) -> Rational {
        Rational::new(self.plus.clone(), self.minus.clone())
    }
}

pub fn pm_decompose(alpha: &Rational) -> Result<PlusMinus> {
    if alpha.is_zero() {
        return domain("plus/minus decomposition of zero");
    }
    let num = alpha.numer();
    let den = alpha.denom();
    let minus = if num.is_negative() { -den } else { den.clone() };
    Ok(PlusMinus {
        plus: num.abs(),
        minus,
    })
}

/// A p-adic valuation; `Infinity` is the valuation of zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Valuation::Infinity
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => f.write_str("inf"),
        }
    }
}

/// Multiplicity of `p` in a nonzero integer.
pub fn vp_int(m: &BigInt, p: &BigInt) -> Valuation {
    if m.is_zero() {
        return Valuation::Infinity;
    }
    let mut m = m.abs();
    let mut v = 0i64;
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return Valuation::Finite(v);
        }
        m = q;
        v += 1;
    }
}

pub fn vp(alpha: &Rational, p: &Prime) -> Valuation {
    if alpha.is_zero() {
        return Valuation::Infinity;
    }
    let num = vp_int(alpha.numer(), p.value()).finite().unwrap_or(0);
    let den = vp_int(alpha.denom(), p.value()).finite().unwrap_or(0);
    Valuation::Finite(num - den)
}

/// Two-adic valuation of a nonzero integer.
pub fn v2_int(m: &BigInt) -> Option<u64> {
    m.trailing_zeros()
}

pub fn v2(alpha: &Rational) -> Valuation {
    match (v2_int(alpha.numer()), v2_int(alpha.denom())) {
        (Some(a), Some(b)) => Valuation::Finite(a as i64 - b as i64),
        _ => Valuation::Infinity,
    }
}

pub fn is_perfect_square(m: &BigInt) -> bool {
    if m.sign() == Sign::Minus {
        return false;
    }
    let r = m.sqrt();
    &(&r * &r) == m
}

/// `α` is an integer at `p` (no `p` in its denominator).
pub fn is_p_integral(alpha: &Rational, p: &BigInt) -> bool {
    !(alpha.denom() % p).is_zero()
}

/// Reduction of a `p`-integral rational modulo `m`, where `m` is a power of
/// `p` (or any modulus coprime to the denominator). Returns `None` if the
/// denominator is not invertible modulo `m`.
pub fn reduce_rational(alpha: &Rational, m: &BigInt) -> Option<BigInt> {
    let den = alpha.denom().mod_floor(m);
    let inv = mod_inverse(&den, m)?;
    Some((alpha.numer().mod_floor(m) * inv).mod_floor(m))
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

pub fn rational_pow(base: &Rational, exp: u64) -> Rational {
    crate::ring::Ring::pow_u64(base, exp)
}
