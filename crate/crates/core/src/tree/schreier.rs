//! Deterministic Schreier–Sims over a fixed base.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use super::perm::Perm;

/// Stabilizer chain for a fixed base `b_0, b_1, …`. Level `i` holds the
/// generators of `G^(i)`, the pointwise stabilizer of `b_0..b_{i-1}`, and a
/// transversal of the orbit of `b_i` under it.
#[derive(Clone, Debug)]
pub struct StabilizerChain {
    degree: usize,
    base: Vec<u32>,
    strong: Vec<Vec<Arc<Perm>>>,
    /// `orbit point ↦ u` with `b_i^u = point` (right action); the base point
    /// itself is implicit, with `u` the identity.
    transversals: Vec<BTreeMap<u32, Perm>>,
}

fn orbit_transversal(point: u32, gens: &[Arc<Perm>]) -> BTreeMap<u32, Perm> {
    let mut t: BTreeMap<u32, Perm> = BTreeMap::new();
    let mut queue = vec![point];
    while let Some(x) = queue.pop() {
        for g in gens {
            let y = g.image(x);
            if y == point || t.contains_key(&y) {
                continue;
            }
            let uy = match t.get(&x) {
                Some(ux) => ux.then(g),
                None => (**g).clone(),
            };
            t.insert(y, uy);
            queue.push(y);
        }
    }
    t
}

impl StabilizerChain {
    /// The base must be a base for the symmetric group on `0..degree`
    /// (only the identity fixes all of it), e.g. every point once.
    pub fn new(degree: usize, base: Vec<u32>, gens: &[Perm]) -> Self {
        let m = base.len();
        let mut strong: Vec<Vec<Arc<Perm>>> = vec![Vec::new(); m];
        for g in gens.iter().filter(|g| !g.is_identity()) {
            assert_eq!(g.degree(), degree, "generator degree");
            let g = Arc::new(g.clone());
            for (i, &b) in base.iter().enumerate() {
                strong[i].push(g.clone());
                if g.image(b) != b {
                    break;
                }
            }
        }
        let transversals = (0..m)
            .map(|i| orbit_transversal(base[i], &strong[i]))
            .collect();
        let mut chain = StabilizerChain {
            degree,
            base,
            strong,
            transversals,
        };
        chain.complete();
        chain
    }

    /// Sifts `g` from level `start`; returns the residue and the level
    /// where sifting stopped (`base.len()` if it went through).
    fn strip(&self, mut g: Perm, start: usize) -> (Perm, usize) {
        for l in start..self.base.len() {
            let img = g.image(self.base[l]);
            if img == self.base[l] {
                continue;
            }
            match self.transversals[l].get(&img) {
                Some(u) => g = g.then(&u.inverse()),
                None => return (g, l),
            }
        }
        (g, self.base.len())
    }

    fn complete(&mut self) {
        let m = self.base.len();
        let mut i = m;
        while i > 0 {
            let level = i - 1;
            match self.find_missing(level) {
                Some((residue, j)) => {
                    let residue = Arc::new(residue);
                    for l in level + 1..=j.min(m - 1) {
                        self.strong[l].push(residue.clone());
                        if residue.image(self.base[l]) != self.base[l] || !self.transversals[l].is_empty() {
                            self.transversals[l] = orbit_transversal(self.base[l], &self.strong[l]);
                        }
                    }
                    i = j.min(m - 1) + 1;
                }
                None => i -= 1,
            }
        }
    }

    fn rep(&self, level: usize, point: u32) -> Option<&Perm> {
        self.transversals[level].get(&point)
    }

    /// First Schreier generator at `level` that does not sift through the
    /// chain below it.
    fn find_missing(&self, level: usize) -> Option<(Perm, usize)> {
        // With a trivial orbit the Schreier generators are the strong
        // generators themselves, which already sit one level down.
        if self.transversals[level].is_empty() {
            return None;
        }
        let b = self.base[level];
        let points = std::iter::once(b).chain(self.transversals[level].keys().copied());
        for beta in points {
            for s in &self.strong[level] {
                let target = s.image(beta);
                let mut h = match self.rep(level, beta) {
                    Some(u) => u.then(s),
                    None => (**s).clone(),
                };
                if let Some(u) = self.rep(level, target) {
                    h = h.then(&u.inverse());
                }
                if h.is_identity() {
                    continue;
                }
                let (residue, j) = self.strip(h, level + 1);
                if !residue.is_identity() {
                    debug_assert!(j < self.base.len(), "base does not determine elements");
                    return Some((residue, j));
                }
            }
        }
        None
    }

    pub fn base(&self) -> &[u32] {
        &self.base
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.transversals.iter().map(|t| t.len() + 1).collect()
    }

    /// Order of `G^(from)`, the pointwise stabilizer of `b_0..b_{from-1}`.
    pub fn order_from(&self, from: usize) -> BigInt {
        self.transversals[from.min(self.base.len())..]
            .iter()
            .filter(|t| !t.is_empty())
            .fold(BigInt::one(), |acc, t| acc * BigInt::from(t.len() + 1))
    }

    pub fn order(&self) -> BigInt {
        self.order_from(0)
    }

    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.degree && self.strip(g.clone(), 0).0.is_identity()
    }
}
