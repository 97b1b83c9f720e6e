use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::build_poly;
use crate::arith::{factor, int, pm_decompose, rat, rational_pow, v2, FactorBudget, Prime};
use crate::error::{Error, Result};
use crate::params::OdoniParams;
use crate::Rational;

/// One step `c_k` of the normalized critical orbit, `A·c_k = f^{∘k}(aA/n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub k: u32,
    #[serde(with = "crate::arith::serde_rat")]
    pub c_k: Rational,
    #[serde(with = "crate::arith::serde_int")]
    pub ck_plus: BigInt,
    #[serde(with = "crate::arith::serde_int")]
    pub ck_minus: BigInt,
    /// `None` when `c_k = 1`.
    pub v2_of_ck_minus_1: Option<i64>,
    pub denominator_check: bool,
    pub v2_check: bool,
    pub gcd_check: bool,
    pub square_check: bool,
    pub growth_check: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitIdentity {
    Denominator,
    TwoAdic,
    Gcd,
    NonSquare,
    Growth,
}

impl fmt::Display for OrbitIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrbitIdentity::Denominator => "denominator closed form",
            OrbitIdentity::TwoAdic => "v2(c_k - 1) >= 3",
            OrbitIdentity::Gcd => "gcd(c_k+, n A- A+) = 1",
            OrbitIdentity::NonSquare => "c_k+ is not a square",
            OrbitIdentity::Growth => "|c_k - 1| > 2",
        })
    }
}

impl OrbitRecord {
    pub fn first_failure(&self) -> Option<OrbitIdentity> {
        [
            (self.denominator_check, OrbitIdentity::Denominator),
            (self.v2_check, OrbitIdentity::TwoAdic),
            (self.gcd_check, OrbitIdentity::Gcd),
            (self.square_check, OrbitIdentity::NonSquare),
            (self.growth_check, OrbitIdentity::Growth),
        ]
        .into_iter()
        .find(|(ok, _)| !ok)
        .map(|(_, id)| id)
    }
}

pub fn first_orbit_failure(records: &[OrbitRecord]) -> Option<(u32, OrbitIdentity)> {
    records
        .iter()
        .find_map(|r| r.first_failure().map(|id| (r.k, id)))
}

/// `(A⁻)^(n^k - 1) · n₂^(n^k) · (-1)^((n-a) n^(k-1))` with `n₂` the odd part of `n`.
fn denominator_closed_form(n: u32, a: u32, a_minus: &BigInt, k: u32) -> BigInt {
    let nk = (n as usize).pow(k);
    let n2 = int((n >> n.trailing_zeros()) as i64);
    let magnitude = num_traits::pow(a_minus.clone(), nk - 1) * num_traits::pow(n2, nk);
    let sign_exp = (n - a) as usize * (n as usize).pow(k - 1);
    if sign_exp % 2 == 1 {
        -magnitude
    } else {
        magnitude
    }
}

/// Records `c_1, …, c_k` from `c_0 = a/n` and
/// `c_k = A^(n-1) c_{k-1}^a (c_{k-1} - 1)^(n-a) + 1`.
pub fn critical_orbit(params: &OdoniParams, k: u32) -> Result<Vec<OrbitRecord>> {
    if k == 0 {
        return Err(Error::Precondition("critical orbit needs k >= 1".into()));
    }
    let OdoniParams { n, a, big_a, .. } = params;
    let (n, a) = (*n, *a);
    let pm_a = pm_decompose(big_a)?;
    let guard = pm_a.plus.clone() * &pm_a.minus * int(n as i64);
    let scale = rational_pow(big_a, (n - 1) as u64);
    let one = Rational::one();

    let mut c = rat(a as i64, n as i64);
    let mut out = Vec::with_capacity(k as usize);
    for step in 1..=k {
        c = &scale * rational_pow(&c, a as u64) * rational_pow(&(&c - &one), (n - a) as u64) + &one;
        let pm = pm_decompose(&c)?;
        let shifted = &c - &one;
        let v2_shift = v2(&shifted).finite();
        out.push(OrbitRecord {
            k: step,
            denominator_check: pm.minus == denominator_closed_form(n, a, &pm_a.minus, step),
            v2_check: v2_shift.is_some_and(|v| v >= 3),
            gcd_check: pm.plus.gcd(&guard).is_one(),
            square_check: !crate::arith::is_perfect_square(&pm.plus),
            growth_check: shifted.abs() > rat(2, 1),
            v2_of_ck_minus_1: v2_shift,
            c_k: c.clone(),
            ck_plus: pm.plus,
            ck_minus: pm.minus,
        });
    }
    Ok(out)
}

/// `f^{∘k}(aA/n)` by expanding the iterate and evaluating it.
pub fn critical_value_direct(params: &OdoniParams, k: u32) -> Result<Rational> {
    Ok(build_poly(params).iterate(k)?.eval(&params.critical_point()))
}

/// Certifies that a positive integer `c` is not a square: `c = s² + r` with
/// `0 < r ≤ 2s`, so `s² < c < (s + 1)²`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonSquareWitness {
    #[serde(with = "crate::arith::serde_int")]
    pub isqrt: BigInt,
    #[serde(with = "crate::arith::serde_int")]
    pub remainder: BigInt,
}

impl NonSquareWitness {
    pub fn new(c: &BigInt) -> Option<Self> {
        if !c.is_positive() {
            return None;
        }
        let s = c.sqrt();
        let r = c - &s * &s;
        (!r.is_zero()).then_some(NonSquareWitness {
            isqrt: s,
            remainder: r,
        })
    }

    pub fn verify(&self, c: &BigInt) -> bool {
        self.remainder.is_positive()
            && self.remainder <= int(2) * &self.isqrt
            && &(&self.isqrt * &self.isqrt + &self.remainder) == c
    }
}

/// A prime of odd exponent in `c_k⁺`, or a proof that one exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PkWitness {
    Pk(Prime),
    NonsquareWitness(NonSquareWitness),
}

/// Factors `c_k⁺` within `budget` and returns its smallest prime of odd
/// exponent among the primes the factorization exhibits.
pub fn find_pk(params: &OdoniParams, k: u32, budget: &FactorBudget) -> Result<PkWitness> {
    let records = critical_orbit(params, k)?;
    if let Some((j, id)) = first_orbit_failure(&records) {
        return Err(Error::Precondition(format!("critical orbit fails {id} at k = {j}")));
    }
    let c = &records.last().expect("k >= 1").ck_plus;
    let fac = factor(c, budget);
    if let Some((p, _)) = fac.factors.iter().find(|(_, e)| e.is_odd()) {
        return Ok(PkWitness::Pk(Prime::new_unchecked(p.clone())));
    }
    let witness = NonSquareWitness::new(c).expect("the orbit check rules out squares");
    Ok(PkWitness::NonsquareWitness(witness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::choose_a;
    use proptest::prelude::*;

    fn params(n: u32, big_a: Rational) -> OdoniParams {
        OdoniParams::new(n, choose_a(n), big_a, vec![]).unwrap()
    }

    #[test]
    fn first_step_of_52_over_7() {
        let records = critical_orbit(&params(3, rat(52, 7)), 1).unwrap();
        let r = &records[0];
        assert_eq!(r.c_k, rat(12139, 1323));
        assert_eq!(r.ck_minus, int(1323));
        assert_eq!(&r.c_k - Rational::one(), rat(10816, 1323));
        assert_eq!(r.v2_of_ck_minus_1, Some(6));
        assert_eq!(r.first_failure(), None);
    }

    #[test]
    fn first_step_of_160_over_3_has_negative_denominator() {
        let records = critical_orbit(&params(2, rat(160, 3)), 1).unwrap();
        assert_eq!(records[0].c_k, rat(-37, 3));
        assert_eq!(records[0].ck_minus, int(-3));
        assert!(records[0].denominator_check);
    }

    #[test]
    fn orbit_matches_iterate_evaluation() {
        for p in [params(3, rat(52, 7)), params(2, rat(160, 3))] {
            let records = critical_orbit(&p, 3).unwrap();
            for r in &records {
                assert_eq!(&p.big_a * &r.c_k, critical_value_direct(&p, r.k).unwrap());
            }
        }
    }

    #[test]
    fn pk_for_first_two_levels() {
        let p = params(3, rat(52, 7));
        let budget = FactorBudget::default();
        assert_eq!(find_pk(&p, 1, &budget).unwrap(), PkWitness::Pk(Prime::new(61).unwrap()));
        let c2 = &critical_orbit(&p, 2).unwrap()[1].ck_plus;
        assert_eq!(c2, &"3840040359958819".parse::<BigInt>().unwrap());
        assert_eq!(c2, &(int(1021) * int(3761058139039)));
        assert_eq!(find_pk(&p, 2, &budget).unwrap(), PkWitness::Pk(Prime::new(1021).unwrap()));
    }

    #[test]
    fn zero_budget_falls_back_to_non_square_witness() {
        let p = params(3, rat(52, 7));
        let c = critical_orbit(&p, 3).unwrap()[2].ck_plus.clone();
        match find_pk(&p, 3, &FactorBudget { trial_bound: 0, effort: 0 }).unwrap() {
            PkWitness::NonsquareWitness(w) => assert!(w.verify(&c)),
            other => panic!("expected a non-square witness, got {other:?}"),
        }
    }

    #[test]
    fn non_square_witness_rejects_tampering() {
        let c = int(12139);
        let w = NonSquareWitness::new(&c).unwrap();
        assert!(w.verify(&c));
        assert!(!w.verify(&int(12140)));
        assert!(NonSquareWitness::new(&int(144)).is_none());
        let lying = NonSquareWitness {
            isqrt: int(100),
            remainder: int(2139),
        };
        assert!(!lying.verify(&c));
    }

    #[test]
    fn failing_orbit_names_the_identity() {
        // v₂(A) = 0 breaks the congruence c_1 ≡ 1 (mod 8).
        let records = critical_orbit(&params(3, rat(53, 7)), 1).unwrap();
        assert_eq!(first_orbit_failure(&records), Some((1, OrbitIdentity::TwoAdic)));
    }

    #[test]
    fn closed_form_by_induction_for_small_k() {
        // Independent oracle: the denominator of c_k from c_{k-1} = P/Q is
        // (A⁻)^(n-1) Q^n up to sign when gcds are trivial.
        let p = params(3, rat(52, 7));
        let records = critical_orbit(&p, 3).unwrap();
        let mut q = int(3);
        for r in &records {
            q = int(49) * num_traits::pow(q, 3);
            assert_eq!(r.ck_minus.abs(), q);
        }
    }

    proptest! {
        #[test]
        fn orbit_invariants_on_search_results(idx in 0usize..3, n in 2u32..5) {
            let a = choose_a(n);
            let found = crate::params::search_a(n, a, &[], 100_000, 3).unwrap();
            prop_assume!(idx < found.len());
            let p = OdoniParams::new(n, a, found[idx].0.clone(), vec![]).unwrap();
            let records = critical_orbit(&p, 3).unwrap();
            prop_assert_eq!(first_orbit_failure(&records), None);
            let v: Vec<i64> = records.iter().map(|r| r.v2_of_ck_minus_1.unwrap()).collect();
            prop_assert!(v.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}
