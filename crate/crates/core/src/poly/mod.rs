//! Dense univariate polynomials.
//!
//! [`Poly`] is generic over the coefficient [`Ring`]; the crate root exposes
//! the concrete instantiations (`PolyRat`, `PolyInt`, and the nested
//! `PolyRatT` whose coefficients are polynomials in a parameter `t`).
//! Reductions modulo primes live in [`fp`] (word-sized primes, with
//! factorization) and [`zn`] (arbitrary moduli, with Hensel lifting).

pub mod fp;
mod resultant;
pub mod zn;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::{Domain, Field, Ring};

pub use resultant::{discriminant, resultant};

/// Dense polynomial; `coeffs[i]` is the coefficient of `X^i` and the last
/// entry is nonzero (the zero polynomial has no entries).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Ring> Poly<T> {
    /// Largest number of coefficients an iterate or composition may have.
    pub const COEFF_CAP: usize = 1_000_000;

    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// The polynomial `X`.
    pub fn x() -> Self {
        Poly::new(vec![T::zero(), T::one()])
    }

    pub fn monomial(c: T, degree: usize) -> Self {
        let mut coeffs = vec![T::zero(); degree + 1];
        coeffs[degree] = c;
        Poly::new(coeffs)
    }

    /// `X - r`.
    pub fn linear_root(r: T) -> Self {
        Poly::new(vec![-r, T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * T::from_int(i as i64))
                .collect(),
        )
    }

    /// `self(g(X))`, evaluated by Horner's rule in the polynomial ring.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        let (Some(df), Some(dg)) = (self.degree(), g.degree()) else {
            return Ok(Poly::constant(self.coeff(0)));
        };
        let degree = df.saturating_mul(dg);
        if degree >= Self::COEFF_CAP {
            return Err(Error::DegreeCap {
                degree,
                cap: Self::COEFF_CAP,
            });
        }
        Ok(self
            .coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| &(&acc * g) + &Poly::constant(c.clone())))
    }

    /// The `k`-th compositional iterate; the zeroth iterate is `X`.
    pub fn iterate(&self, k: u32) -> Result<Self> {
        let mut out = Poly::x();
        for _ in 0..k {
            out = self.compose(&out)?;
        }
        Ok(out)
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(Poly::one(), |acc, _| &acc * self)
    }

    /// Multiplicity of `0` as a root.
    pub fn zero_root_multiplicity(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }
}

impl<T: Domain> Poly<T> {
    /// Divides every coefficient exactly by `c`.
    pub fn div_exact_scalar(&self, c: &T) -> Option<Self> {
        self.coeffs
            .iter()
            .map(|a| a.div_exact(c))
            .collect::<Option<Vec<_>>>()
            .map(Poly::new)
    }

    /// Long division that succeeds only when every step divides exactly.
    pub fn div_rem_exact(&self, d: &Self) -> Option<(Self, Self)> {
        let dd = d.degree()?;
        let lc = d.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((Poly::zero(), self.clone()));
        }
        let mut quot = vec![T::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dd].div_exact(&lc)?;
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j].clone() - c.clone() * dc.clone();
            }
            quot[i] = c;
        }
        Some((Poly::new(quot), Poly::new(rem)))
    }
}

impl<T: Field> Poly<T> {
    pub fn monic(&self) -> Self {
        match self.leading().inv() {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        self.div_rem_exact(d).expect("division by the zero polynomial")
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }
}

/// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) * a mod b`, computed without
/// division.
pub fn pseudo_rem<T: Ring>(a: &Poly<T>, b: &Poly<T>) -> Poly<T> {
    let db = b.degree().expect("pseudo-remainder by zero");
    let Some(da) = a.degree() else {
        return Poly::zero();
    };
    if da < db {
        return a.clone();
    }
    let lc = b.leading();
    let mut rem = a.coeffs.clone();
    let mut steps = da - db + 1;
    for top in (db..=da).rev() {
        let c = rem[top].clone();
        for r in rem.iter_mut().take(top + 1) {
            *r = r.clone() * lc.clone();
        }
        for (j, bc) in b.coeffs.iter().enumerate() {
            let i = top - db + j;
            rem[i] = rem[i].clone() - c.clone() * bc.clone();
        }
        steps -= 1;
    }
    debug_assert_eq!(steps, 0);
    rem.truncate(db);
    Poly::new(rem)
}

impl<T: Ring> Zero for Poly<T> {
    fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<T: Ring> One for Poly<T> {
    fn one() -> Self {
        Poly::constant(T::one())
    }
}

impl<T: Ring> Ring for Poly<T> {
    fn from_int(n: i64) -> Self {
        Poly::constant(T::from_int(n))
    }
}

impl<T: Domain> Domain for Poly<T> {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        let (q, r) = self.div_rem_exact(rhs)?;
        r.is_zero().then_some(q)
    }
}

impl<T: Ring> Add for &Poly<T> {
    type Output = Poly<T>;

    fn add(self, rhs: Self) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<T: Ring> Sub for &Poly<T> {
    type Output = Poly<T>;

    fn sub(self, rhs: Self) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<T: Ring> Mul for &Poly<T> {
    type Output = Poly<T>;

    fn mul(self, rhs: Self) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T: Ring> Neg for &Poly<T> {
    type Output = Poly<T>;

    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Ring> $tr for Poly<T> {
            type Output = Poly<T>;

            fn $m(self, rhs: Self) -> Poly<T> {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Ring> Neg for Poly<T> {
    type Output = Poly<T>;

    fn neg(self) -> Poly<T> {
        -&self
    }
}

impl<T: Ring + fmt::Display> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                _ if c.is_one() => {}
                _ => write!(f, "({c})*")?,
            }
            match i {
                0 => {}
                1 => f.write_str("X")?,
                _ => write!(f, "X^{i}")?,
            }
        }
        Ok(())
    }
}

impl<T: Ring> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Poly").field(&self.coeffs).finish()
    }
}
