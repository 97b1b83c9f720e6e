use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{build_poly, iterate_mod};
use crate::arith::{vp, Prime, Valuation};
use crate::params::{check_hypotheses, OdoniParams};
use crate::Result;

/// Iterates `f^{∘k}`, `1 ≤ k ≤ k_max`, checked Eisenstein at `p0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EisensteinCert {
    pub p0: Option<Prime>,
    pub k_max: u32,
    /// `verified[k - 1]` is the verdict for `f^{∘k}`.
    pub verified: Vec<bool>,
    pub reason: Option<String>,
}

impl EisensteinCert {
    pub fn is_valid(&self) -> bool {
        self.reason.is_none()
            && self.verified.len() == self.k_max as usize
            && self.verified.iter().all(|&v| v)
    }

    fn invalid(p0: Option<Prime>, k_max: u32, reason: String) -> Self {
        EisensteinCert {
            p0,
            k_max,
            verified: Vec::new(),
            reason: Some(reason),
        }
    }
}

/// Takes `p0` from the hypothesis report and checks every iterate.
pub fn certify_eisenstein(params: &OdoniParams, k_max: u32) -> EisensteinCert {
    let report = check_hypotheses(params);
    if let Some(h) = report.first_failure {
        return EisensteinCert::invalid(report.p0, k_max, format!("hypothesis {h} fails"));
    }
    let p0 = report.p0.expect("a valid report carries p0");
    verify_eisenstein(params, &p0, k_max)
}

/// Re-checks a recorded witness: `p0 ∉ S_ram`, `p0 ∤ n`, `v_{p0}(A) = 1`,
/// `f ≡ X^n (mod p0)`, then each iterate modulo `p0²`.
///
/// Working modulo `p0²` is exact here: the iterates are monic and
/// `p0`-integral, and the Eisenstein condition only reads coefficients
/// modulo `p0` and the constant term modulo `p0²`.
pub fn verify_eisenstein(params: &OdoniParams, p0: &Prime, k_max: u32) -> EisensteinCert {
    let fail = |reason: String| EisensteinCert::invalid(Some(p0.clone()), k_max, reason);
    if params.s_ram.contains(p0) {
        return fail(format!("{p0} lies in S_ram"));
    }
    if (BigInt::from(params.n) % p0.value()).is_zero() {
        return fail(format!("{p0} divides n"));
    }
    if vp(&params.big_a, p0) != Valuation::Finite(1) {
        return fail(format!("v_{p0}(A) is not 1"));
    }
    let f = build_poly(params);
    let check = || -> Result<Vec<bool>> {
        let p = p0.value();
        let reduced = iterate_mod(&f, p, 1)?;
        if reduced.coeffs()[..params.n as usize].iter().any(|c| !c.is_zero()) {
            return Ok(Vec::new());
        }
        let p2 = p * p;
        let base = iterate_mod(&f, &p2, 1)?;
        let mut acc = base.clone();
        let mut out = Vec::with_capacity(k_max as usize);
        for k in 1..=k_max {
            if k > 1 {
                acc = base.compose(&acc);
            }
            let d = acc.degree().unwrap_or(0);
            let eis = acc.leading().is_one()
                && acc.coeffs()[..d].iter().all(|c| (c % p).is_zero())
                && !acc.coeff(0).is_zero();
            out.push(eis);
        }
        Ok(out)
    };
    match check() {
        Ok(v) if v.is_empty() && k_max > 0 => fail(format!("f is not X^n modulo {p0}")),
        Ok(verified) => {
            let reason = verified
                .iter()
                .position(|ok| !ok)
                .map(|i| format!("iterate {} is not Eisenstein at {p0}", i + 1));
            EisensteinCert {
                p0: Some(p0.clone()),
                k_max,
                verified,
                reason,
            }
        }
        Err(e) => fail(format!("reduction at {p0} failed: {e}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::newton::is_eisenstein;

    fn params(n: u32, big_a: crate::Rational) -> OdoniParams {
        OdoniParams::with_default_a(n, big_a, vec![]).unwrap()
    }

    #[test]
    fn examples_hold_to_level_three() {
        for (p, p0) in [(params(3, rat(52, 7)), 13), (params(2, rat(160, 3)), 5)] {
            let cert = certify_eisenstein(&p, 3);
            assert_eq!(cert.p0, Some(Prime::new(p0).unwrap()));
            assert_eq!(cert.verified, vec![true; 3]);
            assert!(cert.is_valid());
        }
    }

    #[test]
    fn modular_route_agrees_with_rational_iterates() {
        let p = params(3, rat(52, 7));
        let f = build_poly(&p);
        let p0 = Prime::new(13).unwrap();
        let cert = verify_eisenstein(&p, &p0, 3);
        for k in 1..=3 {
            assert_eq!(cert.verified[k - 1], is_eisenstein(&f.iterate(k as u32).unwrap(), &p0).unwrap());
        }
        // A prime that is not a witness disagrees on both routes.
        let bad = Prime::new(2).unwrap();
        assert!(!verify_eisenstein(&p, &bad, 2).is_valid());
        assert!(!is_eisenstein(&f, &bad).unwrap());
    }

    #[test]
    fn failing_hypothesis_is_reported() {
        // v₂(53/7) = 0 is below the 2-adic bound.
        let p = params(3, rat(53, 7));
        let cert = certify_eisenstein(&p, 2);
        assert!(!cert.is_valid());
        assert!(cert.reason.unwrap().contains("two_adic_bound"));
    }

    #[test]
    fn non_witness_prime_is_rejected() {
        let p = params(3, rat(52, 7));
        let cert = verify_eisenstein(&p, &Prime::new(int(3)).unwrap(), 1);
        assert!(cert.reason.unwrap().contains("divides n"));
    }
}
