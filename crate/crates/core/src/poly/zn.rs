//! Polynomials over `Z/mZ` for arbitrary-precision `m`, used where primes
//! outgrow a machine word and for lifting factorizations to `Z/p^mZ`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::fp::PolyFp;
use crate::arith::{mod_inverse, reduce_rational, Prime};
use crate::error::{domain, Error, Result};
use crate::PolyRat;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyZn {
    m: BigInt,
    coeffs: Vec<BigInt>,
}

impl PolyZn {
    pub fn new(m: BigInt, coeffs: Vec<BigInt>) -> Self {
        let coeffs = coeffs.into_iter().map(|c| c.mod_floor(&m)).collect();
        let mut out = PolyZn { m, coeffs };
        out.trim();
        out
    }

    pub fn zero(m: BigInt) -> Self {
        PolyZn { m, coeffs: Vec::new() }
    }

    pub fn one(m: BigInt) -> Self {
        PolyZn::new(m, vec![BigInt::one()])
    }

    /// `X - r`.
    pub fn linear_root(m: BigInt, r: &BigInt) -> Self {
        PolyZn::new(m, vec![-r, BigInt::one()])
    }

    /// Reduction of a rational polynomial modulo `m`.
    pub fn from_rat(f: &PolyRat, m: &BigInt) -> Result<Self> {
        let coeffs = f
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| {
                reduce_rational(c, m).ok_or_else(|| Error::BadReduction {
                    modulus: m.clone(),
                    degree: i,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyZn::new(m.clone(), coeffs))
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> &BigInt {
        &self.m
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    /// Same integer coefficients, read modulo a divisor of the modulus.
    pub fn reduce(&self, m: &BigInt) -> Self {
        debug_assert!((&self.m % m).is_zero());
        PolyZn::new(m.clone(), self.coeffs.clone())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| (acc * x + c).mod_floor(&self.m))
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        PolyZn::new(
            self.m.clone(),
            (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        PolyZn::new(
            self.m.clone(),
            (0..n).map(|i| self.coeff(i) - other.coeff(i)).collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return PolyZn::zero(self.m.clone());
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyZn::new(self.m.clone(), out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        PolyZn::new(self.m.clone(), self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Self {
        PolyZn::new(
            self.m.clone(),
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// `self(X + r)`.
    pub fn shift(&self, r: &BigInt) -> Self {
        let lin = PolyZn::new(self.m.clone(), vec![r.clone(), BigInt::one()]);
        self.coeffs.iter().rev().fold(PolyZn::zero(self.m.clone()), |acc, c| {
            acc.mul(&lin).add(&PolyZn::new(self.m.clone(), vec![c.clone()]))
        })
    }

    /// `self(g)`.
    pub fn compose(&self, g: &Self) -> Self {
        self.coeffs.iter().rev().fold(PolyZn::zero(self.m.clone()), |acc, c| {
            acc.mul(g).add(&PolyZn::new(self.m.clone(), vec![c.clone()]))
        })
    }

    /// Division by a polynomial whose leading coefficient is a unit.
    pub fn div_rem(&self, d: &Self) -> Option<(Self, Self)> {
        let dd = d.degree()?;
        let inv = mod_inverse(&d.leading(), &self.m)?;
        let m = &self.m;
        if self.coeffs.len() <= dd {
            return Some((PolyZn::zero(m.clone()), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = (&rem[i + dd] * &inv).mod_floor(m);
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[i + j] = (&rem[i + j] - &c * dc).mod_floor(m);
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Some((PolyZn::new(m.clone(), quot), PolyZn::new(m.clone(), rem)))
    }

    pub fn monic(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        mod_inverse(&self.leading(), &self.m).map(|inv| self.scale(&inv))
    }

    /// Extended Euclid over a prime modulus: `(g, s, t)` with
    /// `s*self + t*other = g` and `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let m = self.m.clone();
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (PolyZn::one(m.clone()), PolyZn::zero(m.clone()));
        let (mut t0, mut t1) = (PolyZn::zero(m.clone()), PolyZn::one(m.clone()));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).expect("prime modulus");
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = mod_inverse(&r0.leading(), &m).expect("prime modulus");
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Monic gcd over a prime modulus.
    pub fn gcd(&self, other: &Self) -> Self {
        self.ext_gcd(other).0
    }
}

impl From<&PolyFp> for PolyZn {
    fn from(f: &PolyFp) -> Self {
        PolyZn::new(
            BigInt::from(f.modulus()),
            f.coeffs().iter().map(|&c| BigInt::from(c)).collect(),
        )
    }
}

impl fmt::Debug for PolyZn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyZn(mod {}; {:?})", self.m, self.coeffs)
    }
}

/// Lifts a coprime factorization `f ≡ b·g (mod p)` of a `p`-integral monic
/// polynomial to `f ≡ B·G (mod p^m)` with `B ≡ b`, `G ≡ g (mod p)`, both
/// monic. Inputs `b`, `g` are taken modulo `p`.
pub fn hensel_pair_lift(
    f: &PolyRat,
    p: &Prime,
    b: &PolyZn,
    g: &PolyZn,
    m: u32,
) -> Result<(PolyZn, PolyZn)> {
    let pv = p.value().clone();
    if m == 0 {
        return domain("target exponent must be positive");
    }
    let pm = num_traits::pow(pv.clone(), m as usize);
    hensel_pair_lift_zn(&PolyZn::from_rat(f, &pm)?, p, b, g, m)
}

/// As [`hensel_pair_lift`], with `f` already reduced modulo `p^m`.
pub fn hensel_pair_lift_zn(
    big_f: &PolyZn,
    p: &Prime,
    b: &PolyZn,
    g: &PolyZn,
    m: u32,
) -> Result<(PolyZn, PolyZn)> {
    let pv = p.value().clone();
    if b.modulus() != &pv || g.modulus() != &pv {
        return domain("factor pair must be given modulo p");
    }
    if m == 0 {
        return domain("target exponent must be positive");
    }
    let pm = num_traits::pow(pv.clone(), m as usize);
    if big_f.modulus() != &pm {
        return domain("f must be reduced modulo p^m");
    }
    if !big_f.leading().is_one() || !b.leading().is_one() || !g.leading().is_one() {
        return domain("Hensel lifting needs monic f, b and g");
    }
    if big_f.reduce(&pv) != b.mul(g) {
        return domain("b*g does not reduce to f modulo p");
    }
    let (d, sigma, tau) = b.ext_gcd(g);
    if !d.is_one() {
        return domain("factors are not coprime modulo p");
    }

    let mut big_b = PolyZn::new(pm.clone(), b.coeffs().to_vec());
    let mut big_g = PolyZn::new(pm.clone(), g.coeffs().to_vec());
    let mut pj = pv.clone();
    for _ in 1..m {
        let err = big_f.sub(&big_b.mul(&big_g));
        let e = PolyZn::new(
            pv.clone(),
            err.coeffs()
                .iter()
                .map(|c| {
                    debug_assert!((c % &pj).is_zero());
                    c / &pj
                })
                .collect(),
        );
        let (q, r) = tau.mul(&e).div_rem(b).expect("monic divisor");
        let dg = sigma.mul(&e).add(&q.mul(g));
        big_b = big_b.add(&PolyZn::new(pm.clone(), r.coeffs().to_vec()).scale(&pj));
        big_g = big_g.add(&PolyZn::new(pm.clone(), dg.coeffs().to_vec()).scale(&pj));
        pj *= &pv;
    }
    Ok((big_b, big_g))
}
