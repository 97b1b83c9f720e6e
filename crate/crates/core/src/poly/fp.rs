//! Polynomials over `F_p` for word-sized primes, and their factorization:
//! squarefree decomposition, distinct-degree splitting, then Cantor-Zassenhaus
//! equal-degree splitting.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use rand::Rng;

use crate::arith::{reduce_rational, Prime};
use crate::error::{domain, Error, Result};
use crate::PolyRat;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

/// A polynomial over `F_p`, coefficients low to high in `[0, p)`, trimmed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyFp {
    p: u64,
    coeffs: Vec<u64>,
}

impl PolyFp {
    /// Reduces arbitrary `u64` coefficients modulo `p`.
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut out = PolyFp {
            p,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        };
        out.trim();
        out
    }

    pub fn from_i64(p: u64, coeffs: &[i64]) -> Self {
        let pi = p as i128;
        PolyFp::new(
            p,
            coeffs
                .iter()
                .map(|&c| (c as i128).rem_euclid(pi) as u64)
                .collect(),
        )
    }

    pub fn zero(p: u64) -> Self {
        PolyFp { p, coeffs: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        PolyFp::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        PolyFp::new(p, vec![0, 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let x = x % self.p;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| add_mod(mul_mod(acc, x, self.p), c, self.p))
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        PolyFp::new(
            self.p,
            (0..n).map(|i| add_mod(self.coeff(i), other.coeff(i), self.p)).collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        PolyFp::new(
            self.p,
            (0..n).map(|i| sub_mod(self.coeff(i), other.coeff(i), self.p)).collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return PolyFp::zero(self.p);
        }
        let p = self.p;
        let mut out = vec![0u128; self.coeffs.len() + other.coeffs.len() - 1];
        // Accumulate in u128 and reduce lazily when p is small enough.
        let lazy = p < (1 << 31);
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let prod = a as u128 * b as u128;
                out[i + j] = if lazy {
                    out[i + j] + prod
                } else {
                    (out[i + j] + prod) % p as u128
                };
            }
        }
        PolyFp::new(p, out.into_iter().map(|c| (c % p as u128) as u64).collect())
    }

    pub fn scale(&self, c: u64) -> Self {
        PolyFp::new(
            self.p,
            self.coeffs.iter().map(|&a| mul_mod(a, c, self.p)).collect(),
        )
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv_mod(self.leading(), self.p))
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let p = self.p;
        if self.coeffs.len() <= dd {
            return (PolyFp::zero(p), self.clone());
        }
        let inv = inv_mod(d.leading(), p);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = mul_mod(rem[i + dd], inv, p);
            if c != 0 {
                for (j, &dc) in d.coeffs.iter().enumerate() {
                    rem[i + j] = sub_mod(rem[i + j], mul_mod(c, dc, p), p);
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (PolyFp::new(p, quot), PolyFp::new(p, rem))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (PolyFp::one(p), PolyFp::zero(p));
        let (mut t0, mut t1) = (PolyFp::zero(p), PolyFp::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = inv_mod(r0.leading(), p);
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn derivative(&self) -> Self {
        PolyFp::new(
            self.p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mul_mod(c, i as u64 % self.p, self.p))
                .collect(),
        )
    }

    /// `self^exp mod m`.
    pub fn pow_mod(&self, exp: &BigUint, m: &Self) -> Self {
        let mut acc = PolyFp::one(self.p).rem(m);
        let base = self.rem(m);
        for i in (0..exp.bits()).rev() {
            acc = acc.mul(&acc).rem(m);
            if exp.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
        }
        acc
    }

    /// `self(g) mod m`.
    pub fn compose_mod(&self, g: &Self, m: &Self) -> Self {
        let g = g.rem(m);
        self.coeffs.iter().rev().fold(PolyFp::zero(self.p), |acc, &c| {
            acc.mul(&g).add(&PolyFp::new(self.p, vec![c])).rem(m)
        })
    }

    /// `self(g)` without reduction.
    pub fn compose(&self, g: &Self) -> Self {
        self.coeffs.iter().rev().fold(PolyFp::zero(self.p), |acc, &c| {
            acc.mul(g).add(&PolyFp::new(self.p, vec![c]))
        })
    }

    pub fn is_squarefree(&self) -> bool {
        self.degree().is_some_and(|d| d == 0 || self.gcd(&self.derivative()).degree() == Some(0))
    }

    /// `f(X)^(1/p)`; only meaningful when every exponent is a multiple of `p`.
    fn pth_root(&self) -> Self {
        let p = self.p as usize;
        PolyFp::new(self.p, self.coeffs.iter().step_by(p).copied().collect())
    }

    pub fn roots(&self) -> Vec<u64> {
        (0..self.p).filter(|&x| self.eval(x) == 0).collect()
    }
}

impl fmt::Debug for PolyFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyFp(mod {}; {:?})", self.p, self.coeffs)
    }
}

impl fmt::Display for PolyFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "X".into(),
                (1, c) => format!("{c}X"),
                (i, 1) => format!("X^{i}"),
                (i, c) => format!("{c}X^{i}"),
            })
            .collect();
        write!(f, "{} (mod {})", terms.join(" + "), self.p)
    }
}

/// `f = unit * prod(factor^mult)` with distinct monic irreducible factors,
/// sorted by degree then coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationFp {
    pub unit: u64,
    pub factors: Vec<(PolyFp, u32)>,
}

impl FactorizationFp {
    pub fn product(&self, p: u64) -> PolyFp {
        self.factors.iter().fold(PolyFp::new(p, vec![self.unit]), |acc, (g, e)| {
            (0..*e).fold(acc, |acc, _| acc.mul(g))
        })
    }

    /// Factor degrees, one entry per factor counted with multiplicity,
    /// sorted ascending.
    pub fn degree_type(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .factors
            .iter()
            .flat_map(|(g, e)| std::iter::repeat_n(g.degree().unwrap_or(0), *e as usize))
            .collect();
        out.sort_unstable();
        out
    }
}

pub fn factor_mod_p<R: Rng + ?Sized>(f: &PolyFp, rng: &mut R) -> Result<FactorizationFp> {
    if f.is_zero() {
        return domain("factorization of the zero polynomial");
    }
    let p = f.p;
    let unit = f.leading();
    let mut factors = Vec::new();
    for (sf, mult) in squarefree(&f.monic()) {
        for (g, d) in distinct_degree(&sf) {
            for h in equal_degree(&g, d, rng) {
                factors.push((h, mult));
            }
        }
    }
    factors.sort_by(|(a, _), (b, _)| (a.degree(), &a.coeffs).cmp(&(b.degree(), &b.coeffs)));
    debug_assert!(factors.iter().all(|(g, _)| g.p == p));
    Ok(FactorizationFp { unit, factors })
}

/// Squarefree decomposition of a monic polynomial: pairs `(g, i)` with the
/// `g` pairwise coprime, squarefree, and `f = prod g^i`.
fn squarefree(f: &PolyFp) -> Vec<(PolyFp, u32)> {
    let p = f.p;
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let d = f.derivative();
    if d.is_zero() {
        for (g, i) in squarefree(&f.pth_root()) {
            out.push((g, i * p as u32));
        }
        return out;
    }
    let mut c = f.gcd(&d);
    let mut w = f.div_exact(&c).expect("gcd divides f");
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y).expect("gcd divides w");
        if !fac.is_one() {
            out.push((fac, i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w).expect("w divides c");
    }
    if !c.is_one() {
        for (g, j) in squarefree(&c.pth_root()) {
            out.push((g, j * p as u32));
        }
    }
    out
}

/// Splits a squarefree monic polynomial into products of irreducibles of a
/// common degree.
fn distinct_degree(f: &PolyFp) -> Vec<(PolyFp, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = PolyFp::x(p);
    let mut h = x.clone();
    let mut d = 1;
    let pbig = BigUint::from(p);
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = h.pow_mod(&pbig, &rest);
        let g = rest.gcd(&h.sub(&x));
        if !g.is_one() {
            rest = rest.div_exact(&g).expect("gcd divides");
            h = h.rem(&rest);
            out.push((g, d));
        }
        d += 1;
    }
    if rest.degree().unwrap_or(0) > 0 {
        let deg = rest.degree().unwrap();
        out.push((rest, deg));
    }
    out
}

fn equal_degree<R: Rng + ?Sized>(f: &PolyFp, d: usize, rng: &mut R) -> Vec<PolyFp> {
    let n = f.degree().unwrap_or(0);
    if n == d {
        return vec![f.clone()];
    }
    let p = f.p;
    let exp = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a = PolyFp::new(p, (0..n).map(|_| rng.random_range(0..p)).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if p == 2 {
            // Trace map of F_{2^d}: a + a^2 + ... + a^(2^(d-1)).
            let mut term = a.rem(f);
            let mut acc = term.clone();
            for _ in 1..d {
                term = term.mul(&term).rem(f);
                acc = acc.add(&term);
            }
            acc
        } else {
            a.pow_mod(&exp, f).sub(&PolyFp::one(p))
        };
        let g = f.gcd(&b);
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let h = f.div_exact(&g).expect("gcd divides");
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&h, d, rng));
            return out;
        }
    }
}

/// Coefficientwise reduction of a rational polynomial modulo a word-sized
/// prime.
pub fn reduce_mod(f: &PolyRat, p: &Prime) -> Result<PolyFp> {
    let Some(pw) = p.to_u64() else {
        return domain(format!("prime {p} does not fit in a machine word"));
    };
    let m = BigInt::from(pw);
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            reduce_rational(c, &m)
                .and_then(|r| r.to_u64())
                .ok_or_else(|| Error::BadReduction {
                    modulus: m.clone(),
                    degree: i,
                })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PolyFp::new(pw, coeffs))
}

/// Reduces a rational modulo a word-sized prime, if `p`-integral.
pub fn reduce_scalar(c: &crate::Rational, p: u64) -> Option<u64> {
    reduce_rational(c, &BigInt::from(p)).and_then(|r| r.to_u64())
}
