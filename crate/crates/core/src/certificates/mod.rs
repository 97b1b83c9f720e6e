//! Local certificates for `f_{a,A}`: Eisenstein iterates at `p0`, the tame
//! branch structure at `pinf`, transpositions read off the critical orbit,
//! and the discriminant identity for the trinomial family.
//!
//! Each certificate records its witnesses so that [`verify_bundle`] can
//! re-check a serialized bundle without searching for anything.

mod bundle;
mod eisenstein;
mod family;
mod orbit;
mod tame;
mod transposition;

pub use bundle::{certify, verify_bundle, BundleOptions, BundleStatus, CertificateBundle, VERSION};
pub use eisenstein::{certify_eisenstein, verify_eisenstein, EisensteinCert};
pub use family::{family_discriminant_check, FamilyDiscriminantReport};
pub use orbit::{
    critical_orbit, critical_value_direct, find_pk, first_orbit_failure, NonSquareWitness,
    OrbitIdentity, OrbitRecord, PkWitness,
};
pub use tame::{
    certify_tame_infinity, check_split_unramified, verify_tame_infinity, TameInfinityCert,
    TameLevel,
};
pub use transposition::{verify_transposition, Stage, TranspositionCert};

use num_traits::One;

use crate::params::OdoniParams;
use crate::poly::Poly;
use crate::{PolyRat, Rational};

/// Expands `X^a (X - A)^(n-a) + A`.
pub fn build_poly(params: &OdoniParams) -> PolyRat {
    let x_minus_a = Poly::new(vec![-params.big_a.clone(), Rational::one()]);
    let body = Poly::monomial(Rational::one(), params.a as usize) * x_minus_a.pow(params.n - params.a);
    body + Poly::constant(params.big_a.clone())
}

/// `f mod m` iterated `k` times, for a modulus coprime to the denominator of `A`.
pub(crate) fn iterate_mod(f: &PolyRat, m: &num_bigint::BigInt, k: u32) -> crate::Result<crate::PolyZn> {
    let base = crate::PolyZn::from_rat(f, m)?;
    let mut acc = crate::PolyZn::new(m.clone(), vec![num_bigint::BigInt::from(0), num_bigint::BigInt::one()]);
    for _ in 0..k {
        acc = base.compose(&acc);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int};
    use proptest::prelude::*;

    fn params(n: u32, a: u32, big_a: Rational) -> OdoniParams {
        OdoniParams::new(n, a, big_a, vec![]).unwrap()
    }

    #[test]
    fn build_examples() {
        let f = build_poly(&params(2, 1, rat_int(1)));
        assert_eq!(f, Poly::new(vec![rat_int(1), rat_int(-1), rat_int(1)]));
        let f = build_poly(&params(3, 1, rat_int(6)));
        assert_eq!(f, Poly::new(vec![rat_int(6), rat_int(36), rat_int(-12), rat_int(1)]));
    }

    #[test]
    fn iterate_mod_matches_rational_iterate() {
        let f = build_poly(&params(3, 1, rat(52, 7)));
        let m = num_bigint::BigInt::from(61 * 61);
        let direct = crate::PolyZn::from_rat(&f.iterate(2).unwrap(), &m).unwrap();
        assert_eq!(iterate_mod(&f, &m, 2).unwrap(), direct);
    }

    proptest! {
        #[test]
        fn monic_with_constant_a(n in 2u32..9, num in 1i64..500, den in 1i64..50) {
            let a = crate::params::choose_a(n);
            let p = params(n, a, rat(num, den));
            let f = build_poly(&p);
            prop_assert_eq!(f.degree(), Some(n as usize));
            prop_assert!(f.is_monic());
            prop_assert_eq!(f.coeff(0), p.big_a.clone());
            // A is a fixed point and aA/n is critical.
            prop_assert_eq!(f.eval(&p.big_a), p.big_a.clone());
            prop_assert!(num_traits::Zero::is_zero(&f.derivative().eval(&p.critical_point())));
        }
    }
}
