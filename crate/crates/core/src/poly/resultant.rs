//! Resultants and discriminants by the subresultant pseudo-remainder
//! sequence, which stays inside the coefficient domain (no fractions).

use num_traits::Zero;

use super::{pseudo_rem, Poly};
use crate::error::{domain, Result};
use crate::ring::Domain;

fn exact<T: Domain>(a: &T, b: &T) -> T {
    a.div_exact(b)
        .expect("subresultant division is exact in an integral domain")
}

pub fn resultant<T: Domain>(a: &Poly<T>, b: &Poly<T>) -> T {
    let (Some(mut da), Some(mut db)) = (a.degree(), b.degree()) else {
        return T::zero();
    };
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut negate = false;
    if da < db {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut da, &mut db);
        negate = da % 2 == 1 && db % 2 == 1;
    }
    if db == 0 {
        let r = b.leading().pow_u64(da as u64);
        return if negate { -r } else { r };
    }

    let mut g = T::one();
    let mut h = T::one();
    loop {
        let (da, db) = (a.degree().unwrap(), b.degree().unwrap());
        let delta = (da - db) as u64;
        if da % 2 == 1 && db % 2 == 1 {
            negate = !negate;
        }
        let r = pseudo_rem(&a, &b);
        a = b;
        if r.is_zero() {
            return T::zero();
        }
        let scale = g.clone() * h.pow_u64(delta);
        b = r
            .div_exact_scalar(&scale)
            .expect("subresultant division is exact in an integral domain");
        g = a.leading();
        h = match delta {
            0 => h,
            _ => exact(&g.pow_u64(delta), &h.pow_u64(delta - 1)),
        };
        if b.degree() == Some(0) {
            let da = a.degree().unwrap() as u64;
            let res = exact(&b.leading().pow_u64(da), &h.pow_u64(da - 1));
            return if negate { -res } else { res };
        }
    }
}

/// `(-1)^(d(d-1)/2) res(f, f') / lc(f)`.
pub fn discriminant<T: Domain>(f: &Poly<T>) -> Result<T> {
    let d = match f.degree() {
        None => return domain("discriminant of the zero polynomial"),
        Some(0) => return domain("discriminant of a constant"),
        Some(d) => d,
    };
    if d == 1 {
        return Ok(T::one());
    }
    let res = resultant(f, &f.derivative());
    let disc = exact(&res, &f.leading());
    Ok(if (d * (d - 1) / 2) % 2 == 1 { -disc } else { disc })
}
