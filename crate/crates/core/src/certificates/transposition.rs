use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::orbit::{critical_orbit, PkWitness};
use super::{build_poly, iterate_mod};
use crate::arith::{int, pm_decompose, rat_int, reduce_rational, vp_int, Prime};
use crate::error::{Error, Result};
use crate::newton::NewtonPolygon;
use crate::params::OdoniParams;
use crate::poly::fp::PolyFp;
use crate::poly::zn::hensel_pair_lift_zn;
use crate::{PolyZn, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    /// `f^{∘k} ≡ (X - r)² ḡ (mod p_k)` with `ḡ` separable and `ḡ(r) ≠ 0`.
    Reduction,
    /// Lifting the pair `((X - r)², ḡ)` to `p_k^m`.
    Lift,
    /// The lifted quadratic, recentred at the critical point, has one
    /// Newton segment of non-integral slope.
    Polygon,
}

/// Evidence that inertia at `p_k` acts on the roots of `f^{∘k}` as a
/// transposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranspositionCert {
    pub k: u32,
    #[serde(flatten)]
    pub witness: PkWitness,
    /// `aA/n mod p_k`.
    #[serde(with = "crate::arith::serde_int::opt", default)]
    pub double_root: Option<BigInt>,
    /// `ḡ` modulo `p_k`, lowest coefficient first.
    #[serde(with = "crate::arith::serde_int::vec", default)]
    pub simple_part: Vec<BigInt>,
    pub simple_part_degree: Option<usize>,
    /// Roots of `ḡ` modulo `p_k`, listed when `p_k` fits in 64 bits.
    #[serde(with = "crate::arith::serde_int::vec", default)]
    pub simple_roots: Vec<BigInt>,
    /// `v = v_{p_k}(f^{∘k}(aA/n))`.
    pub critical_valuation: Option<i64>,
    /// Hensel precision `m = v + 1`.
    pub lift_precision: Option<u32>,
    /// `B(X + aA/n)` modulo `p_k^m`, lowest coefficient first.
    #[serde(with = "crate::arith::serde_int::vec", default)]
    pub shifted_quadratic: Vec<BigInt>,
    /// Valuation of the roots of `B(X + aA/n)`, i.e. `v/2`.
    #[serde(with = "crate::arith::serde_rat::opt", default)]
    pub lifted_quadratic_slope: Option<Rational>,
    pub failed_stage: Option<Stage>,
    pub reason: Option<String>,
}

impl TranspositionCert {
    fn empty(k: u32, witness: PkWitness) -> Self {
        TranspositionCert {
            k,
            witness,
            double_root: None,
            simple_part: Vec::new(),
            simple_part_degree: None,
            simple_roots: Vec::new(),
            critical_valuation: None,
            lift_precision: None,
            shifted_quadratic: Vec::new(),
            lifted_quadratic_slope: None,
            failed_stage: None,
            reason: None,
        }
    }

    /// Certificate for a level where only non-squareness of `c_k⁺` is known.
    pub fn existential(k: u32, witness: PkWitness) -> Self {
        TranspositionCert::empty(k, witness)
    }

    pub fn pk(&self) -> Option<&Prime> {
        match &self.witness {
            PkWitness::Pk(p) => Some(p),
            PkWitness::NonsquareWitness(_) => None,
        }
    }

    pub fn is_existential(&self) -> bool {
        matches!(self.witness, PkWitness::NonsquareWitness(_))
    }

    pub fn is_valid(&self) -> bool {
        self.failed_stage.is_none() && (self.is_existential() || self.lifted_quadratic_slope.is_some())
    }

    fn fail(mut self, stage: Stage, reason: impl Into<String>) -> Self {
        self.failed_stage = Some(stage);
        self.reason = Some(reason.into());
        self
    }
}

/// Runs the three stages for the prime `pk` at level `k`.
pub fn verify_transposition(params: &OdoniParams, k: u32, pk: &Prime) -> Result<TranspositionCert> {
    let p = pk.value();
    let pm_a = pm_decompose(&params.big_a)?;
    let guard = int(params.n as i64) * &pm_a.minus * &pm_a.plus;
    if (&guard % p).is_zero() {
        return Err(Error::Precondition(format!("{pk} divides n A- A+")));
    }
    let record = critical_orbit(params, k)?.pop().expect("k >= 1");
    // p ∤ A, so v_p(A c_k) = v_p(c_k⁺).
    let v = vp_int(&record.ck_plus, p).finite().unwrap_or(0);
    if v <= 0 {
        return Err(Error::Precondition(format!("{pk} does not divide the critical value")));
    }
    let mut cert = TranspositionCert::empty(k, PkWitness::Pk(pk.clone()));
    cert.critical_valuation = Some(v);

    // Stage (i).
    let f = build_poly(params);
    let m = (v + 1) as u32;
    let pm = num_traits::pow(p.clone(), m as usize);
    let big_f = iterate_mod(&f, &pm, k)?;
    let f_bar = big_f.reduce(p);
    let crit = params.critical_point();
    let r = reduce_rational(&crit, p).expect("p does not divide n A-");
    cert.double_root = Some(r.clone());
    let lin = PolyZn::linear_root(p.clone(), &r);
    let b_bar = lin.mul(&lin);
    let (g_bar, rem) = f_bar.div_rem(&b_bar).expect("monic divisor");
    if !rem.is_zero() {
        return Ok(cert.fail(Stage::Reduction, "(X - aA/n)^2 does not divide the reduction"));
    }
    cert.simple_part = g_bar.coeffs().to_vec();
    cert.simple_part_degree = g_bar.degree();
    if pk.to_u64().is_some() {
        cert.simple_roots = simple_roots(&g_bar);
    }
    if g_bar.eval(&r).is_zero() {
        return Ok(cert.fail(Stage::Reduction, "aA/n has multiplicity above 2"));
    }
    if !g_bar.gcd(&g_bar.derivative()).is_one() {
        return Ok(cert.fail(Stage::Reduction, "the cofactor is not separable"));
    }
    if f_bar.gcd(&f_bar.derivative()) != lin {
        return Ok(cert.fail(Stage::Reduction, "X - aA/n is not the only multiple factor"));
    }

    // Stage (ii).
    let (big_b, big_g) = match hensel_pair_lift_zn(&big_f, pk, &b_bar, &g_bar, m) {
        Ok(pair) => pair,
        Err(e) => return Ok(cert.fail(Stage::Lift, e.to_string())),
    };
    if big_b.mul(&big_g) != big_f || big_b.degree() != Some(2) {
        return Ok(cert.fail(Stage::Lift, "lifted pair does not reproduce f^k"));
    }
    cert.lift_precision = Some(m);

    // Stage (iii). Coefficients vanishing mod p^m only have valuation >= m.
    let r_m = reduce_rational(&crit, &pm).expect("p does not divide n A-");
    let shifted = big_b.shift(&r_m);
    cert.shifted_quadratic = shifted.coeffs().to_vec();
    let anchors = (0..=2)
        .map(|i| {
            let c = shifted.coeff(i);
            let h = if c.is_zero() { m as i64 } else { vp_int(&c, p).finite().expect("nonzero") };
            (i, rat_int(h))
        })
        .collect();
    let polygon = NewtonPolygon::from_anchors(anchors);
    let [segment] = polygon.segments.as_slice() else {
        return Ok(cert.fail(Stage::Polygon, "shifted quadratic has more than one Newton segment"));
    };
    let root_valuation = -segment.slope.clone();
    if root_valuation != Rational::new(int(v), int(2)) {
        return Ok(cert.fail(Stage::Polygon, "segment slope differs from v/2"));
    }
    cert.lifted_quadratic_slope = Some(root_valuation.clone());
    if root_valuation.is_integer() {
        return Ok(cert.fail(Stage::Polygon, "segment slope is integral"));
    }
    Ok(cert)
}

fn simple_roots(g: &PolyZn) -> Vec<BigInt> {
    let p = g.modulus().try_into().expect("modulus fits in u64");
    let coeffs = g
        .coeffs()
        .iter()
        .map(|c| c.mod_floor(g.modulus()).try_into().expect("reduced"))
        .collect();
    let mut roots: Vec<BigInt> = PolyFp::new(p, coeffs).roots().into_iter().map(BigInt::from).collect();
    roots.sort();
    roots
}
