//! Frobenius sampling: factor the iterates of `f` modulo many primes and
//! compare root densities and cycle types with the group `Aut(T_{n,k})`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{primes_up_to, Prime};
use crate::error::{domain, Result};
use crate::poly::discriminant;
use crate::poly::fp::{factor_mod_p, reduce_mod, FactorizationFp, PolyFp};
use crate::tree::{cycle_type_distribution, CycleTypeDistribution, DistributionMethod};
use crate::{PolyRat, Rational};

/// Primes `p ≤ p_max` at which `f` is `p`-integral with unit leading
/// coefficient and `f^{∘k}` stays separable.
pub fn good_primes(f: &PolyRat, k: u32, p_max: u64) -> Result<Vec<u64>> {
    let disc = discriminant(&f.iterate(k)?)?;
    if disc.is_zero() {
        return domain("the iterate has a repeated root");
    }
    let mut bad: Vec<BigInt> = f.coeffs().iter().map(|c| c.denom().clone()).collect();
    bad.push(f.leading().numer().clone());
    bad.push(disc.numer().clone());
    bad.push(disc.denom().clone());
    Ok(primes_up_to(p_max)
        .into_iter()
        .filter(|&p| {
            let pb = BigInt::from(p);
            bad.iter().all(|m| !(m % &pb).is_zero())
        })
        .collect())
}

/// Factorization pattern of `f^{∘j} mod p` for `j = 1..k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusSample {
    pub p: u64,
    /// `level_types[j - 1]`: factor degrees of `f^{∘j}`, ascending.
    pub level_types: Vec<Vec<usize>>,
    pub has_root_at: Vec<bool>,
    /// Every level-`j` factor lies over one level-`(j-1)` factor of degree
    /// dividing its own, and the degrees over a factor of degree `l` sum
    /// to `n l`.
    pub tower_compatible: bool,
}

impl FrobeniusSample {
    /// The quotient condition read off the cycle types alone: the level-`j`
    /// type can be split into groups, one per level-`(j-1)` cycle of length
    /// `l`, each made of multiples of `l` summing to `n l`.
    pub fn types_compatible(&self, n: usize) -> bool {
        let mut below = vec![1usize];
        for above in &self.level_types {
            if above.iter().sum::<usize>() != n * below.iter().sum::<usize>() || !packs(above, &below, n) {
                return false;
            }
            below = above.clone();
        }
        true
    }
}

fn packs(above: &[usize], below: &[usize], n: usize) -> bool {
    fn go(items: &mut Vec<usize>, bins: &mut [(usize, usize)], n: usize) -> bool {
        let Some(x) = items.pop() else {
            return bins.iter().all(|(l, fill)| *fill == n * l);
        };
        for i in 0..bins.len() {
            let (l, fill) = bins[i];
            if x % l == 0 && fill + x <= n * l && (i == 0 || bins[i - 1] != bins[i]) {
                bins[i].1 += x;
                if go(items, bins, n) {
                    return true;
                }
                bins[i].1 -= x;
            }
        }
        items.push(x);
        false
    }
    let mut items = above.to_vec();
    items.sort_unstable();
    let mut bins: Vec<(usize, usize)> = below.iter().map(|&l| (l, 0)).collect();
    bins.sort_unstable();
    go(&mut items, &mut bins, n)
}

fn tower_check(fbar: &PolyFp, prev: &FactorizationFp, cur: &FactorizationFp, n: usize) -> bool {
    let mut load = vec![0usize; prev.factors.len()];
    for (g, _) in &cur.factors {
        let dg = g.degree().unwrap_or(0);
        let parent = prev
            .factors
            .iter()
            .position(|(h, _)| h.compose(fbar).rem(g).is_zero());
        match parent {
            Some(i) if dg % prev.factors[i].0.degree().unwrap_or(1) == 0 => load[i] += dg,
            _ => return false,
        }
    }
    prev.factors
        .iter()
        .zip(&load)
        .all(|((h, _), l)| *l == n * h.degree().unwrap_or(0))
}

/// Factors `f^{∘j} mod p` for `j ≤ k`. Fails if `p` is not a good prime.
pub fn frobenius_sample(f: &PolyRat, k: u32, p: u64) -> Result<FrobeniusSample> {
    let prime = Prime::new(p)?;
    let fbar = reduce_mod(f, &prime)?;
    let n = match fbar.degree() {
        Some(d) if d == f.degree().unwrap_or(0) && d >= 1 => d,
        _ => return domain(format!("{p} divides the leading coefficient")),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(p);
    let mut iterate = PolyFp::x(p);
    let mut prev = factor_mod_p(&iterate, &mut rng)?;
    let mut sample = FrobeniusSample {
        p,
        level_types: Vec::with_capacity(k as usize),
        has_root_at: Vec::with_capacity(k as usize),
        tower_compatible: true,
    };
    for j in 1..=k {
        iterate = fbar.compose(&iterate);
        if !iterate.is_squarefree() {
            return domain(format!("f^{j} is not separable modulo {p}"));
        }
        let fac = factor_mod_p(&iterate, &mut rng)?;
        sample.tower_compatible &= tower_check(&fbar, &prev, &fac, n);
        let t = fac.degree_type();
        sample.has_root_at.push(t.contains(&1));
        sample.level_types.push(t);
        prev = fac;
    }
    Ok(sample)
}

/// Samples every good prime up to `p_max`, in parallel, ordered by prime.
pub fn sample_primes(f: &PolyRat, k: u32, p_max: u64) -> Result<Vec<FrobeniusSample>> {
    good_primes(f, k, p_max)?
        .par_iter()
        .map(|&p| frobenius_sample(f, k, p))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub prime_bound: u64,
    pub primes_used: u64,
    /// Per level `j = 1..k`: primes where `f^{∘j}` has a root.
    pub counts: Vec<u64>,
    pub estimates: Vec<f64>,
    /// `1 -` fixed-point-free mass of `Aut(T_{n,j})`, when it can be enumerated.
    pub predicted: Vec<Option<f64>>,
    pub standard_errors: Vec<f64>,
}

impl DensityReport {
    /// `|estimate - prediction|` in units of the standard error.
    pub fn z_scores(&self) -> Vec<Option<f64>> {
        self.estimates
            .iter()
            .zip(&self.predicted)
            .zip(&self.standard_errors)
            .map(|((e, p), s)| p.map(|p| (e - p).abs() / s))
            .collect()
    }
}

fn predicted_root_density(n: usize, j: usize) -> Option<f64> {
    let d = cycle_type_distribution(n, j, DistributionMethod::Exhaustive).ok()?;
    (Rational::from_integer(1.into()) - d.fixed_point_free()).to_f64()
}

pub fn density_from_samples(samples: &[FrobeniusSample], n: usize, k: usize, p_max: u64) -> Result<DensityReport> {
    if samples.is_empty() {
        return domain("no samples");
    }
    let total = samples.len() as u64;
    let counts: Vec<u64> = (0..k)
        .map(|j| samples.iter().filter(|s| s.has_root_at[j]).count() as u64)
        .collect();
    let estimates: Vec<f64> = counts.iter().map(|&c| c as f64 / total as f64).collect();
    let standard_errors = estimates
        .iter()
        .map(|e| (e * (1.0 - e) / total as f64).sqrt())
        .collect();
    Ok(DensityReport {
        prime_bound: p_max,
        primes_used: total,
        counts,
        estimates,
        predicted: (1..=k).map(|j| predicted_root_density(n, j)).collect(),
        standard_errors,
    })
}

/// Proportion of good primes `p ≤ p_max` at which `f^{∘j}` has a root mod `p`.
pub fn root_density(f: &PolyRat, k: u32, p_max: u64) -> Result<DensityReport> {
    let samples = sample_primes(f, k, p_max)?;
    let n = f.degree().unwrap_or(0);
    density_from_samples(&samples, n, k as usize, p_max)
}

/// Total-variation distance between the level-`k` Frobenius cycle types and
/// the leaf cycle types of `Aut(T_{n,k})`.
pub fn compare_to_group(samples: &[FrobeniusSample], n: usize, k: usize) -> Result<f64> {
    if samples.is_empty() {
        return domain("no samples");
    }
    if k == 0 || samples.iter().any(|s| s.level_types.len() < k) {
        return domain(format!("samples do not reach level {k}"));
    }
    let group = cycle_type_distribution(n, k, DistributionMethod::Exhaustive)?;
    let mut counts = BTreeMap::new();
    for s in samples {
        *counts.entry(s.level_types[k - 1].clone()).or_insert(0) += 1;
    }
    let empirical = CycleTypeDistribution {
        total: samples.len() as u64,
        counts,
    };
    Ok(empirical.total_variation(&group))
}
