//! Budgeted integer factorization: trial division followed by Pollard rho
//! (Brent's cycle finding) with a deterministic sequence of polynomial
//! constants.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{is_perfect_square, is_probable_prime};

/// Effort bound for [`factor`]. Every trial division and every rho step costs
/// one unit of `effort`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorBudget {
    pub trial_bound: u64,
    pub effort: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            trial_bound: 100_000,
            effort: 4_000_000,
        }
    }
}

impl FactorBudget {
    pub fn with_effort(effort: u64) -> Self {
        FactorBudget {
            effort,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    /// Distinct primes in increasing order with their exact multiplicities.
    pub factors: Vec<(BigInt, u32)>,
    /// What is left over; `1` when the factorization is complete.
    pub cofactor: BigInt,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.cofactor.is_one()
    }

    pub fn product(&self) -> BigInt {
        self.factors
            .iter()
            .fold(self.cofactor.clone(), |acc, (p, e)| acc * p.pow(*e))
    }
}

pub fn factor(m: &BigInt, budget: &FactorBudget) -> Factorization {
    assert!(m.is_positive(), "factor expects a positive integer");
    let mut effort = budget.effort;
    let mut found: Vec<BigInt> = Vec::new();
    let mut rest = m.clone();

    if !rest.is_one() && !is_probable_prime(&rest) {
        rest = trial_divide(rest, budget.trial_bound, &mut effort, &mut found);
    }

    let mut cofactor = BigInt::one();
    let mut pending = vec![rest];
    while let Some(c) = pending.pop() {
        if c.is_one() {
            continue;
        }
        if is_probable_prime(&c) {
            found.push(c);
            continue;
        }
        if is_perfect_square(&c) {
            let r = c.sqrt();
            pending.push(r.clone());
            pending.push(r);
            continue;
        }
        match pollard_brent(&c, &mut effort) {
            Some(d) => {
                pending.push(&c / &d);
                pending.push(d);
            }
            None => cofactor *= c,
        }
    }

    found.sort();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    for p in found {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    // An unfactored cofactor may still hide copies of listed primes.
    for (p, e) in factors.iter_mut() {
        while (&cofactor % &*p).is_zero() {
            cofactor /= &*p;
            *e += 1;
        }
    }
    Factorization { factors, cofactor }
}

fn trial_divide(mut n: BigInt, bound: u64, effort: &mut u64, found: &mut Vec<BigInt>) -> BigInt {
    let mut d = 2u64;
    while d <= bound && *effort > 0 {
        let dd = BigInt::from(d);
        if &dd * &dd > n {
            break;
        }
        *effort -= 1;
        while (&n % d).is_zero() {
            n /= d;
            found.push(dd.clone());
        }
        d = if d == 2 { 3 } else { d + 2 };
    }
    n
}

/// Returns a nontrivial divisor of the odd composite `n`, or `None` once the
/// effort budget is spent.
fn pollard_brent(n: &BigInt, effort: &mut u64) -> Option<BigInt> {
    if n.is_even() {
        return Some(BigInt::from(2));
    }
    const BATCH: u64 = 64;
    let mut c = BigInt::one();
    while *effort > 0 {
        let step = |x: &BigInt| (x * x + &c) % n;
        let mut y = BigInt::from(2);
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut q = BigInt::one();
        let mut g = BigInt::one();
        let mut r = 1u64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = step(&y);
            }
            let mut k = 0u64;
            while k < r && g.is_one() {
                ys = y.clone();
                let m = BATCH.min(r - k);
                for _ in 0..m {
                    y = step(&y);
                    q = (q * (&x - &y).abs()) % n;
                }
                g = q.gcd(n);
                k += m;
                *effort = effort.saturating_sub(m);
                if *effort == 0 && g.is_one() {
                    return None;
                }
            }
            r *= 2;
        }
        if &g == n {
            // The batch overshot; walk it again one step at a time.
            loop {
                ys = step(&ys);
                g = (&x - &ys).abs().gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
        c += 1;
    }
    None
}
