use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::eisenstein::{certify_eisenstein, verify_eisenstein, EisensteinCert};
use super::orbit::{critical_orbit, find_pk, first_orbit_failure, OrbitRecord, PkWitness};
use super::tame::{certify_tame_infinity, verify_tame_infinity, TameInfinityCert};
use super::transposition::{verify_transposition, TranspositionCert};
use crate::arith::FactorBudget;
use crate::error::{Error, Result};
use crate::params::{check_hypotheses, Hypothesis, OdoniParams};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleOptions {
    pub k_max: u32,
    pub budget: FactorBudget,
    pub seed: u64,
}

impl Default for BundleOptions {
    fn default() -> Self {
        BundleOptions {
            k_max: 2,
            budget: FactorBudget::default(),
            seed: 0,
        }
    }
}

/// Everything needed to re-check a parameter set without searching.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateBundle {
    pub params: OdoniParams,
    pub eisenstein: EisensteinCert,
    pub tame_infinity: TameInfinityCert,
    pub orbit: Vec<OrbitRecord>,
    pub transpositions: Vec<TranspositionCert>,
    pub seed: u64,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BundleStatus {
    FullyWitnessed,
    /// Valid, with only a non-square witness at these levels.
    Existential(Vec<u32>),
    Invalid(Vec<String>),
}

impl CertificateBundle {
    /// Status from the recorded verdicts alone; see [`verify_bundle`] for
    /// re-checking them.
    pub fn status(&self) -> BundleStatus {
        let mut problems = Vec::new();
        if !self.eisenstein.is_valid() {
            problems.push(format!(
                "eisenstein: {}",
                self.eisenstein.reason.as_deref().unwrap_or("incomplete")
            ));
        }
        if !self.tame_infinity.is_valid() {
            problems.push(format!(
                "tame_infinity: {}",
                self.tame_infinity.reason.as_deref().unwrap_or("incomplete")
            ));
        }
        if let Some((k, id)) = first_orbit_failure(&self.orbit) {
            problems.push(format!("orbit: {id} fails at k = {k}"));
        }
        for t in &self.transpositions {
            if !t.is_valid() {
                problems.push(format!(
                    "transposition k = {}: {}",
                    t.k,
                    t.reason.as_deref().unwrap_or("incomplete")
                ));
            }
        }
        if !problems.is_empty() {
            return BundleStatus::Invalid(problems);
        }
        let existential: Vec<u32> = self
            .transpositions
            .iter()
            .filter(|t| t.is_existential())
            .map(|t| t.k)
            .collect();
        if existential.is_empty() {
            BundleStatus::FullyWitnessed
        } else {
            BundleStatus::Existential(existential)
        }
    }
}

fn transposition_for(params: &OdoniParams, k: u32, budget: &FactorBudget) -> Result<TranspositionCert> {
    match find_pk(params, k, budget)? {
        PkWitness::Pk(p) => verify_transposition(params, k, &p),
        w @ PkWitness::NonsquareWitness(_) => Ok(TranspositionCert::existential(k, w)),
    }
}

/// Builds every certificate for `1 ≤ k ≤ k_max`. Fails with a precondition
/// error when the parameters do not pass the hypotheses.
pub fn certify(params: &OdoniParams, opts: &BundleOptions) -> Result<CertificateBundle> {
    if opts.k_max == 0 {
        return Err(Error::Precondition("k_max must be at least 1".into()));
    }
    let report = check_hypotheses(params);
    if !report.is_valid() {
        let names: Vec<&str> = report.failures().iter().map(|h| h.name()).collect();
        return Err(Error::Precondition(format!("hypotheses fail: {}", names.join(", "))));
    }
    let orbit = critical_orbit(params, opts.k_max)?;
    if let Some((k, id)) = first_orbit_failure(&orbit) {
        return Err(Error::Precondition(format!("critical orbit fails {id} at k = {k}")));
    }
    let transpositions = (1..=opts.k_max)
        .into_par_iter()
        .map(|k| transposition_for(params, k, &opts.budget))
        .collect::<Result<Vec<_>>>()?;
    Ok(CertificateBundle {
        params: params.clone(),
        eisenstein: certify_eisenstein(params, opts.k_max),
        tame_infinity: certify_tame_infinity(params, opts.k_max),
        orbit,
        transpositions,
        seed: opts.seed,
        version: VERSION.to_string(),
    })
}

/// Re-derives every certificate from the recorded witnesses (`p0`, `p∞`,
/// each `p_k` or non-square witness) and compares with what was recorded.
/// Returns the list of discrepancies; empty means the bundle verifies.
pub fn verify_bundle(bundle: &CertificateBundle) -> Vec<String> {
    let mut problems = Vec::new();
    let p = &bundle.params;
    let params = match OdoniParams::new(p.n, p.a, p.big_a.clone(), p.s_ram.clone()) {
        Ok(params) if &params == p => params,
        Ok(_) => return vec!["params are not in normal form".into()],
        Err(e) => return vec![format!("params: {e}")],
    };

    let report = check_hypotheses(&params);
    for h in Hypothesis::ALL {
        let witness = matches!(h, Hypothesis::P0Witness | Hypothesis::PinfWitness);
        if !witness && !report.passes(h) {
            problems.push(format!("hypothesis {h} fails"));
        }
    }

    let k_max = bundle.eisenstein.k_max;
    if k_max == 0 {
        problems.push("k_max is 0".into());
        return problems;
    }
    match &bundle.eisenstein.p0 {
        Some(p0) => {
            let redo = verify_eisenstein(&params, p0, k_max);
            if !redo.is_valid() {
                problems.push(format!("eisenstein: {}", redo.reason.unwrap_or_default()));
            } else if redo != bundle.eisenstein {
                problems.push("eisenstein: recorded verdicts differ".into());
            }
        }
        None => problems.push("eisenstein: no p0 recorded".into()),
    }

    if bundle.tame_infinity.k_max != k_max {
        problems.push("tame_infinity: k_max differs".into());
    }
    match &bundle.tame_infinity.pinf {
        Some(pinf) => {
            let redo = verify_tame_infinity(&params, pinf, k_max);
            if !redo.is_valid() {
                problems.push(format!("tame_infinity: {}", redo.reason.unwrap_or_default()));
            } else if redo != bundle.tame_infinity {
                problems.push("tame_infinity: recorded transcript differs".into());
            }
        }
        None => problems.push("tame_infinity: no pinf recorded".into()),
    }

    let orbit = match critical_orbit(&params, k_max) {
        Ok(orbit) => orbit,
        Err(e) => {
            problems.push(format!("orbit: {e}"));
            return problems;
        }
    };
    if let Some((k, id)) = first_orbit_failure(&orbit) {
        problems.push(format!("orbit: {id} fails at k = {k}"));
    }
    if orbit != bundle.orbit {
        problems.push("orbit: recorded records differ from the recomputed orbit".into());
    }

    let ks: Vec<u32> = bundle.transpositions.iter().map(|t| t.k).collect();
    if ks != (1..=k_max).collect::<Vec<_>>() {
        problems.push("transpositions: levels are not 1..k_max".into());
    }
    let redone: Vec<(u32, std::result::Result<(), String>)> = bundle
        .transpositions
        .par_iter()
        .map(|t| (t.k, verify_one(&params, &orbit, t)))
        .collect();
    for (k, r) in redone {
        if let Err(e) = r {
            problems.push(format!("transposition k = {k}: {e}"));
        }
    }
    problems
}

fn verify_one(params: &OdoniParams, orbit: &[OrbitRecord], t: &TranspositionCert) -> std::result::Result<(), String> {
    let record = orbit
        .iter()
        .find(|r| r.k == t.k)
        .ok_or_else(|| "level outside the orbit".to_string())?;
    match &t.witness {
        PkWitness::Pk(pk) => {
            let redo = verify_transposition(params, t.k, pk).map_err(|e| e.to_string())?;
            if !redo.is_valid() {
                return Err(redo.reason.unwrap_or_else(|| "invalid".into()));
            }
            if &redo != t {
                return Err("recorded transcript differs".into());
            }
        }
        PkWitness::NonsquareWitness(w) => {
            if !w.verify(&record.ck_plus) {
                return Err("non-square witness does not match c_k+".into());
            }
            if t != &TranspositionCert::existential(t.k, t.witness.clone()) {
                return Err("existential certificate carries stray fields".into());
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, Prime};

    fn sample() -> CertificateBundle {
        let params = OdoniParams::new(3, 1, rat(52, 7), vec![]).unwrap();
        certify(&params, &BundleOptions::default()).unwrap()
    }

    #[test]
    fn default_bundle_is_fully_witnessed_and_verifies() {
        let b = sample();
        assert_eq!(b.status(), BundleStatus::FullyWitnessed);
        assert_eq!(verify_bundle(&b), Vec::<String>::new());
        let pks: Vec<_> = b.transpositions.iter().map(|t| t.pk().cloned()).collect();
        assert_eq!(pks, vec![Some(Prime::new(61).unwrap()), Some(Prime::new(1021).unwrap())]);
    }

    #[test]
    fn json_round_trip_verifies() {
        let b = sample();
        let s = serde_json::to_string(&b).unwrap();
        assert!(s.contains(r#""A":["52","7"]"#));
        assert!(!s.contains("timestamp"));
        let back: CertificateBundle = serde_json::from_str(&s).unwrap();
        assert_eq!(back, b);
        assert!(verify_bundle(&back).is_empty());
    }

    #[test]
    fn zero_budget_gives_existential_levels() {
        let params = OdoniParams::new(3, 1, rat(52, 7), vec![]).unwrap();
        let opts = BundleOptions {
            k_max: 3,
            budget: FactorBudget {
                trial_bound: 0,
                effort: 0,
            },
            seed: 1,
        };
        let b = certify(&params, &opts).unwrap();
        assert!(matches!(b.status(), BundleStatus::Existential(_)));
        assert!(verify_bundle(&b).is_empty());
    }

    #[test]
    fn tampering_is_detected() {
        let b = sample();
        let mut t = b.clone();
        t.transpositions[0].witness = PkWitness::Pk(Prime::new(59).unwrap());
        assert!(!verify_bundle(&t).is_empty());

        let mut t = b.clone();
        t.eisenstein.p0 = Some(Prime::new(7).unwrap());
        assert!(!verify_bundle(&t).is_empty());

        let mut t = b.clone();
        t.orbit[1].ck_plus += 10;
        assert!(!verify_bundle(&t).is_empty());

        let mut t = b;
        t.params.big_a = rat(53, 7);
        assert!(!verify_bundle(&t).is_empty());
    }

    #[test]
    fn failing_params_are_refused() {
        let params = OdoniParams::new(3, 1, rat(53, 7), vec![]).unwrap();
        assert!(matches!(certify(&params, &BundleOptions::default()), Err(Error::Precondition(_))));
    }
}
