use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{int, rat_int};
use crate::error::{domain, Result};
use crate::poly::{discriminant, Poly};
use crate::{PolyRat, PolyRatT, Rational};

/// Outcome of comparing `disc_X(Xⁿ - tX^(n-1) - t)` with the closed form
/// `nⁿ(-t)^(n-1)((1/n)((n-1)t/n)^(n-1) + 1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyDiscriminantReport {
    pub n: u32,
    /// Coefficients in `t`, lowest first.
    #[serde(with = "crate::arith::serde_rat::vec")]
    pub computed: Vec<Rational>,
    #[serde(with = "crate::arith::serde_rat::vec")]
    pub expected: Vec<Rational>,
    /// `computed = sign · expected`, or `None` if neither sign works.
    pub sign: Option<i8>,
    pub zero_root_multiplicity: usize,
    /// The nonzero roots solve `t^(n-1) = ratio`.
    #[serde(with = "crate::arith::serde_rat::opt")]
    pub ratio: Option<Rational>,
    /// `|ratio|^(1/(n-1))`, the common modulus of the nonzero roots.
    pub nonzero_root_modulus: Option<f64>,
}

impl FamilyDiscriminantReport {
    pub fn passed(&self) -> bool {
        self.sign.is_some()
            && self.zero_root_multiplicity + 1 == self.n as usize
            && self.ratio.is_some()
    }
}

fn closed_form(n: u32) -> PolyRat {
    let nr = rat_int(n as i64);
    let inner = Poly::new(vec![Rational::zero(), (&nr - rat_int(1)) / &nr]).pow(n - 1);
    let bracket = inner.scale(&nr.recip()) + Poly::constant(Rational::one());
    let minus_t = Poly::new(vec![Rational::zero(), rat_int(-1)]);
    (minus_t.pow(n - 1) * bracket).scale(&Rational::from_integer(num_traits::pow(int(n as i64), n as usize)))
}

/// For a polynomial `t^(n-1)·Q(t)` with `Q = q₀ + q_{n-1} t^(n-1)`, returns
/// `-q₀ / q_{n-1}`; `None` for any other shape.
fn binomial_ratio(p: &PolyRat, n: usize) -> Option<Rational> {
    let z = p.zero_root_multiplicity();
    if z != n - 1 {
        return None;
    }
    let q = &p.coeffs()[z..];
    let (q0, top) = (q.first()?, q.last()?);
    let middle_vanishes = q[1..q.len() - 1].iter().all(Zero::is_zero);
    (q.len() == n && middle_vanishes && !q0.is_zero()).then(|| -(q0 / top))
}

/// Discriminant identity for the trinomial family, for `3 ≤ n ≤ 12`.
pub fn family_discriminant_check(n: u32) -> Result<FamilyDiscriminantReport> {
    if !(3..=12).contains(&n) {
        return domain(format!("family check needs 3 <= n <= 12, got {n}"));
    }
    let t = PolyRat::x();
    let mut coeffs = vec![PolyRat::zero(); n as usize + 1];
    coeffs[0] = -t.clone();
    coeffs[n as usize - 1] = -t;
    coeffs[n as usize] = PolyRat::one();
    let g: PolyRatT = Poly::new(coeffs);

    let computed = discriminant(&g)?;
    let expected = closed_form(n);
    let sign = if computed == expected {
        Some(1)
    } else if computed == -expected.clone() {
        Some(-1)
    } else {
        None
    };
    let ratio = binomial_ratio(&computed, n as usize);
    let nonzero_root_modulus = ratio
        .as_ref()
        .and_then(|r| r.abs().to_f64())
        .map(|r| r.powf(1.0 / (n - 1) as f64));
    Ok(FamilyDiscriminantReport {
        n,
        computed: computed.coeffs().to_vec(),
        expected: expected.coeffs().to_vec(),
        sign,
        zero_root_multiplicity: computed.zero_root_multiplicity(),
        ratio,
        nonzero_root_modulus,
    })
}
