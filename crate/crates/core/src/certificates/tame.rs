use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{int, rat, rat_int, vp, vp_int, Prime, Valuation};
use crate::error::{domain, Result};
use crate::newton::{newton_polygon, NewtonPolygon, Segment};
use crate::params::{check_hypotheses, OdoniParams};
use crate::poly::Poly;
use crate::{PolyZn, Rational};

/// Level `i` of the descent `ε_{i-1} ↦ ε_i` at `p∞`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TameLevel {
    pub level: u32,
    /// `v(ε_{i-1})`.
    #[serde(with = "crate::arith::serde_rat")]
    pub eps_prev_valuation: Rational,
    /// Newton polygon of `Aⁿ(1 + X)^a X^(n-a) + ε_{i-1} A`, built from
    /// coefficient valuations.
    pub polygon: NewtonPolygon,
    /// `(v(ε_{i-1}) + n - 1) / (n - a)`, the valuation of the `n - a`
    /// non-unit roots.
    #[serde(with = "crate::arith::serde_rat")]
    pub root_valuation: Rational,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TameInfinityCert {
    pub pinf: Option<Prime>,
    pub k_max: u32,
    /// `n = 2`: nothing to certify.
    pub trivial: bool,
    pub levels: Vec<TameLevel>,
    /// `v(ε_0), …, v(ε_{k_max})` with `ε_i = (r_i - A)/A`.
    #[serde(with = "crate::arith::serde_rat::vec")]
    pub eps_valuations: Vec<Rational>,
    /// `1 + Σ_{i ≤ k} (n-1)/(n-a)^i` for `k = 1..k_max`.
    #[serde(with = "crate::arith::serde_rat::vec")]
    pub predicted_valuations: Vec<Rational>,
    /// `v(r_k - A) = v(ε_k) + v(A)` for `k = 1..k_max`, as the polygons give it.
    #[serde(with = "crate::arith::serde_rat::vec")]
    pub root_offset_valuations: Vec<Rational>,
    /// Expected inertia orbit sizes `e_1, …, e_{k_max}`.
    #[serde(with = "crate::arith::serde_int::vec")]
    pub e_k: Vec<BigInt>,
    pub split_unramified: Option<bool>,
    pub reason: Option<String>,
}

impl TameInfinityCert {
    pub fn is_valid(&self) -> bool {
        self.reason.is_none()
            && (self.trivial
                || (self.levels.len() == self.k_max as usize
                    && self.levels.iter().all(|l| l.ok)
                    && self.split_unramified != Some(false)))
    }
}

fn predicted_valuations(n: u32, a: u32, k_max: u32) -> Vec<Rational> {
    let mut sum = Rational::one();
    (1..=k_max)
        .map(|i| {
            sum += Rational::new(int(n as i64 - 1), num_traits::pow(int((n - a) as i64), i as usize));
            sum.clone()
        })
        .collect()
}

fn expected_orbit_sizes(n: u32, a: u32, k_max: u32) -> Vec<BigInt> {
    (1..=k_max)
        .map(|k| {
            let e = if a > 1 { k } else { k - 1 };
            num_traits::pow(int((n - a) as i64), e as usize)
        })
        .collect()
}

/// Takes `p∞` from the hypothesis report and runs [`verify_tame_infinity`].
pub fn certify_tame_infinity(params: &OdoniParams, k_max: u32) -> TameInfinityCert {
    let report = check_hypotheses(params);
    if let Some(h) = report.first_failure {
        let mut cert = skeleton(params, report.pinf, k_max);
        cert.reason = Some(format!("hypothesis {h} fails"));
        return cert;
    }
    let pinf = report.pinf.expect("a valid report carries pinf");
    verify_tame_infinity(params, &pinf, k_max)
}

fn skeleton(params: &OdoniParams, pinf: Option<Prime>, k_max: u32) -> TameInfinityCert {
    let (n, a) = (params.n, params.a);
    TameInfinityCert {
        pinf,
        k_max,
        trivial: n == 2,
        levels: Vec::new(),
        eps_valuations: Vec::new(),
        predicted_valuations: predicted_valuations(n, a, k_max),
        root_offset_valuations: Vec::new(),
        e_k: expected_orbit_sizes(n, a, k_max),
        split_unramified: None,
        reason: None,
    }
}

/// Checks the level polygons at a recorded witness `p∞`: `p∞ > n`,
/// `p∞ ∉ S_ram`, `v_{p∞}(A) = -1`.
pub fn verify_tame_infinity(params: &OdoniParams, pinf: &Prime, k_max: u32) -> TameInfinityCert {
    let (n, a) = (params.n, params.a);
    let mut cert = skeleton(params, Some(pinf.clone()), k_max);
    let witness_problem = if pinf.value() <= &int(n as i64) {
        Some(format!("{pinf} does not exceed n"))
    } else if params.s_ram.contains(pinf) {
        Some(format!("{pinf} lies in S_ram"))
    } else if vp(&params.big_a, pinf) != Valuation::Finite(-1) {
        Some(format!("v_{pinf}(A) is not -1"))
    } else {
        None
    };
    if let Some(reason) = witness_problem {
        cert.reason = Some(reason);
        return cert;
    }
    if cert.trivial {
        return cert;
    }

    let v_a = rat_int(-1);
    let na = (n - a) as usize;
    let binom_vals: Vec<Rational> = (0..=a as u64)
        .map(|j| {
            let c = binomial(int(a as i64), int(j as i64));
            rat_int(vp_int(&c, pinf.value()).finite().expect("binomials are nonzero"))
        })
        .collect();
    let mut eps = Rational::zero();
    cert.eps_valuations.push(eps.clone());
    for level in 1..=k_max {
        let mut anchors = vec![(0, &eps + &v_a)];
        for (j, bv) in binom_vals.iter().enumerate() {
            anchors.push((na + j, &v_a * rat_int(n as i64) + bv));
        }
        let polygon = NewtonPolygon::from_anchors(anchors);
        let root_valuation = (&eps + rat_int(n as i64 - 1)) / rat_int(na as i64);
        let expected = vec![
            Segment {
                slope: -root_valuation.clone(),
                length: na,
            },
            Segment {
                slope: Rational::zero(),
                length: a as usize,
            },
        ];
        let ok = polygon.segments == expected;
        cert.levels.push(TameLevel {
            level,
            eps_prev_valuation: eps.clone(),
            polygon,
            root_valuation: root_valuation.clone(),
            ok,
        });
        if !ok {
            cert.reason = Some(format!("polygon mismatch at level {level}"));
            return cert;
        }
        eps = root_valuation;
        cert.eps_valuations.push(eps.clone());
        cert.root_offset_valuations.push(&eps + &v_a);
    }

    if a == 1 {
        match check_split_unramified(n, &params.big_a, pinf) {
            Ok(ok) => {
                cert.split_unramified = Some(ok);
                if !ok {
                    cert.reason = Some("f does not split over an unramified extension".into());
                }
            }
            Err(e) => {
                cert.split_unramified = Some(false);
                cert.reason = Some(e.to_string());
            }
        }
    }
    cert
}

/// Checks that `S(X) = B⁻¹Xⁿ + X^(n-1) + 1` reduces to the separable
/// `X^(n-1) + 1` modulo `l` and has Newton segments `[(0, n-1), (1, 1)]`.
pub fn check_split_unramified(n: u32, b: &Rational, l: &Prime) -> Result<bool> {
    if n < 2 {
        return domain(format!("degree {n} is below 2"));
    }
    if vp(b, l) != Valuation::Finite(-1) {
        return domain(format!("v_{l}(B) is not -1"));
    }
    if (int(n as i64 - 1) % l.value()).is_zero() {
        return domain(format!("{l} divides n - 1"));
    }
    let n = n as usize;
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[0] = Rational::one();
    coeffs[n - 1] = Rational::one();
    coeffs[n] = b.recip();
    let s = Poly::new(coeffs);

    let reduced = PolyZn::from_rat(&s, l.value())?;
    let mut target = vec![BigInt::zero(); n];
    target[0] = BigInt::one();
    target[n - 1] = BigInt::one();
    let reduces = reduced == PolyZn::new(l.value().clone(), target);
    let separable = reduced.gcd(&reduced.derivative()).is_one();

    let polygon = newton_polygon(&s, l)?;
    let shape_ok = polygon.shape() == vec![(Rational::zero(), n - 1), (rat(1, 1), 1)];
    Ok(reduces && separable && shape_ok)
}
