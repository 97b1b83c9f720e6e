//! Automorphisms of the `n`-ary rooted tree of height `k`.
//!
//! Vertices are numbered level by level: the root is `0`, then the `n`
//! level-1 vertices, then the `n²` level-2 vertices, and so on. Within a
//! level, the vertex with path `d_1 … d_j` has index `d_1 n^(j-1) + … + d_j`,
//! so the children of vertex `x` at level `j` are `x n + c`.
//!
//! An element is stored as its portrait: a permutation of the child labels
//! `0..n` at every internal vertex. It maps the child `(x, c)` to
//! `(g(x), g_x(c))`.

mod perm;
mod schreier;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use perm::Perm;
pub use schreier::StabilizerChain;

use crate::arith::is_prime_u64;
use crate::error::{domain, Error, Result};
use crate::Rational;

/// Default cap on the number of leaves, `3⁹`.
pub const MAX_LEAVES: u64 = 19_683;
/// Largest group enumerated element by element.
pub const MAX_EXHAUSTIVE: u64 = 1_000_000;

fn checked_leaves(n: usize, k: usize) -> Option<u64> {
    (n as u64).checked_pow(k as u32)
}

fn guard(n: usize, k: usize, max_leaves: u64) -> Result<()> {
    if n < 2 {
        return domain(format!("branching {n} is below 2"));
    }
    match checked_leaves(n, k) {
        Some(l) if l <= max_leaves => Ok(()),
        _ => Err(Error::SizeGuard(format!("{n}^{k} leaves exceed the cap of {max_leaves}"))),
    }
}

/// A vertex of `T_{n,k}` named by its path from the root.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TreeIndex {
    pub path: Vec<u8>,
}

impl TreeIndex {
    pub fn root() -> Self {
        TreeIndex { path: Vec::new() }
    }

    pub fn level(&self) -> usize {
        self.path.len()
    }

    /// Position within its level.
    pub fn index_in_level(&self, n: usize) -> usize {
        self.path.iter().fold(0, |acc, &d| acc * n + d as usize)
    }

    pub fn from_index_in_level(n: usize, level: usize, mut x: usize) -> Self {
        let mut path = vec![0u8; level];
        for slot in path.iter_mut().rev() {
            *slot = (x % n) as u8;
            x /= n;
        }
        TreeIndex { path }
    }

    /// Position in the level-major numbering of all vertices.
    pub fn global(&self, n: usize) -> usize {
        level_offset(n, self.level()) + self.index_in_level(n)
    }
}

/// Number of vertices at levels below `level`.
fn level_offset(n: usize, level: usize) -> usize {
    (0..level).map(|j| n.pow(j as u32)).sum()
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WreathElement {
    n: usize,
    k: usize,
    /// `portrait[v * n + c]` is the image of child label `c` at internal vertex `v`.
    portrait: Vec<u8>,
}

impl std::fmt::Debug for WreathElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "WreathElement(n={}, k={}, {:?})", self.n, self.k, self.portrait)
    }
}

impl WreathElement {
    pub fn identity(n: usize, k: usize) -> Self {
        let internal = level_offset(n, k);
        let portrait = (0..internal).flat_map(|_| 0..n as u8).collect();
        WreathElement { n, k, portrait }
    }

    /// The identity except for `perm` (images of `0..n`) at one vertex.
    pub fn at_vertex(n: usize, k: usize, vertex: &TreeIndex, perm: &[u8]) -> Result<Self> {
        if vertex.level() >= k || vertex.path.iter().any(|&d| d as usize >= n) {
            return domain("vertex is not an internal vertex of the tree");
        }
        check_label_perm(n, perm)?;
        let mut w = WreathElement::identity(n, k);
        let v = vertex.global(n);
        w.portrait[v * n..(v + 1) * n].copy_from_slice(perm);
        Ok(w)
    }

    /// Builds an element from the label permutation at every internal vertex.
    pub fn from_portrait(n: usize, k: usize, portrait: Vec<u8>) -> Result<Self> {
        if portrait.len() != level_offset(n, k) * n {
            return domain("portrait has the wrong length");
        }
        for chunk in portrait.chunks(n) {
            check_label_perm(n, chunk)?;
        }
        Ok(WreathElement { n, k, portrait })
    }

    pub fn branching(&self) -> usize {
        self.n
    }

    pub fn height(&self) -> usize {
        self.k
    }

    pub fn label(&self, vertex: usize) -> &[u8] {
        &self.portrait[vertex * self.n..(vertex + 1) * self.n]
    }

    pub fn is_identity(&self) -> bool {
        self.portrait
            .chunks(self.n)
            .all(|c| c.iter().enumerate().all(|(i, &x)| i == x as usize))
    }

    /// `level_images()[j][x]` is the image of the level-`j` vertex `x`.
    pub fn level_images(&self) -> Vec<Vec<u32>> {
        let n = self.n;
        let mut levels = vec![vec![0u32]];
        for j in 0..self.k {
            let off = level_offset(n, j);
            let prev = &levels[j];
            let mut next = vec![0u32; prev.len() * n];
            for (x, &gx) in prev.iter().enumerate() {
                let label = self.label(off + x);
                for c in 0..n {
                    next[x * n + c] = gx * n as u32 + label[c] as u32;
                }
            }
            levels.push(next);
        }
        levels
    }

    /// Action on the `n^j` vertices of level `j`.
    pub fn level_action(&self, j: usize) -> Perm {
        Perm::from_images(self.level_images().swap_remove(j))
    }

    /// Action on all non-root vertices, numbered `global - 1`.
    pub fn domain_perm(&self) -> Perm {
        let images = self
            .level_images()
            .into_iter()
            .enumerate()
            .skip(1)
            .flat_map(|(j, level)| {
                let off = (level_offset(self.n, j) - 1) as u32;
                level.into_iter().map(move |x| off + x)
            })
            .collect();
        Perm::from_images(images)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &WreathElement) -> WreathElement {
        assert_eq!((self.n, self.k), (other.n, other.k), "elements of different trees");
        let n = self.n;
        let images = other.level_images();
        let mut portrait = vec![0u8; self.portrait.len()];
        for j in 0..self.k {
            let off = level_offset(n, j);
            for (x, &gx) in images[j].iter().enumerate() {
                let inner = other.label(off + x);
                let outer = self.label(off + gx as usize);
                for c in 0..n {
                    portrait[(off + x) * n + c] = outer[inner[c] as usize];
                }
            }
        }
        WreathElement { n, k: self.k, portrait }
    }

    pub fn inverse(&self) -> WreathElement {
        let n = self.n;
        let images = self.level_images();
        let mut portrait = vec![0u8; self.portrait.len()];
        for j in 0..self.k {
            let off = level_offset(n, j);
            for (x, &gx) in images[j].iter().enumerate() {
                let label = self.label(off + x);
                let dst = (off + gx as usize) * n;
                for c in 0..n {
                    portrait[dst + label[c] as usize] = c as u8;
                }
            }
        }
        WreathElement { n, k: self.k, portrait }
    }

    /// Element with independent uniform labels; uniform on `Aut(T_{n,k})`.
    pub fn random<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Self {
        let mut w = WreathElement::identity(n, k);
        for chunk in w.portrait.chunks_mut(n) {
            chunk.shuffle(rng);
        }
        w
    }
}

fn check_label_perm(n: usize, perm: &[u8]) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&x| x as usize >= n || std::mem::replace(&mut seen[x as usize], true)) {
        return domain("label is not a permutation of 0..n");
    }
    Ok(())
}

/// Permutation of the `n^k` leaves with its cycle type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeafAction {
    pub perm: Perm,
    pub cycle_type: Vec<usize>,
}

pub fn leaf_action(w: &WreathElement) -> LeafAction {
    let perm = w.level_action(w.k);
    let cycle_type = perm.cycle_type();
    LeafAction { perm, cycle_type }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `(n!)^((n^k - 1)/(n - 1))`.
pub fn wreath_order(n: usize, k: usize) -> BigInt {
    num_traits::pow(factorial(n), level_offset(n, k))
}

/// Order of `Γ(N)`, the pointwise stabilizer of levels `≤ N`:
/// `(n!)^((n^k - n^N)/(n - 1))`.
pub fn gamma_order(n: usize, k: usize, big_n: usize) -> Result<BigInt> {
    if big_n > k {
        return domain(format!("N = {big_n} exceeds k = {k}"));
    }
    Ok(num_traits::pow(factorial(n), level_offset(n, k) - level_offset(n, big_n)))
}

/// A transposition and an `n`-cycle at every internal vertex.
pub fn full_generating_set(n: usize, k: usize) -> Vec<WreathElement> {
    let transposition: Vec<u8> = (0..n as u8).map(|c| [1, 0].get(c as usize).copied().unwrap_or(c)).collect();
    let cycle: Vec<u8> = (0..n as u8).map(|c| (c + 1) % n as u8).collect();
    let mut out = Vec::new();
    for j in 0..k {
        for x in 0..n.pow(j as u32) {
            let v = TreeIndex::from_index_in_level(n, j, x);
            out.push(WreathElement::at_vertex(n, k, &v, &transposition).expect("valid vertex"));
            if n > 2 {
                out.push(WreathElement::at_vertex(n, k, &v, &cycle).expect("valid vertex"));
            }
        }
    }
    out
}

/// Odometer on the subtree below `root` whose vertices use only the child
/// labels `0..m`: the label cycle `0 → 1 → … → m-1 → 0` sits at `root` and
/// at every subtree vertex whose labels below `root` are all `m - 1`.
fn subtree_odometer(n: usize, k: usize, root: &TreeIndex, m: usize) -> WreathElement {
    let mut w = WreathElement::identity(n, k);
    if m < 2 {
        return w;
    }
    let mut cycle: Vec<u8> = (0..n as u8).collect();
    for c in 0..m {
        cycle[c] = ((c + 1) % m) as u8;
    }
    let mut path = root.path.clone();
    while path.len() < k {
        let v = TreeIndex { path: path.clone() }.global(n);
        w.portrait[v * n..(v + 1) * n].copy_from_slice(&cycle);
        path.push((m - 1) as u8);
    }
    w
}

/// Leaf action a single `n^k`-cycle.
pub fn odometer(n: usize, k: usize) -> WreathElement {
    subtree_odometer(n, k, &TreeIndex::root(), n)
}

/// Exponent pairs allowed by the transitivity lemma: `a = 1`, or `2a < n`
/// with `n - a` prime.
pub fn sigma_pair_allowed(n: usize, a: usize) -> bool {
    a >= 1 && a < n && (a == 1 || (2 * a < n && is_prime_u64((n - a) as u64)))
}

/// `σ₀`, then `σ_j` for `N < j ≤ k`, then `σ_∞`.
#[derive(Clone, Debug)]
pub struct StandardSigmas {
    pub sigma_0: WreathElement,
    pub sigma_j: Vec<WreathElement>,
    pub sigma_inf: WreathElement,
}

impl StandardSigmas {
    pub fn all(&self) -> Vec<WreathElement> {
        let mut out = vec![self.sigma_0.clone()];
        out.extend(self.sigma_j.iter().cloned());
        out.push(self.sigma_inf.clone());
        out
    }
}

/// `σ₀` is the odometer; `σ_j` swaps the children `0, 1` of the vertex
/// `0^(j-1)`; `σ_∞` is the odometer of the `(n-a)`-branching subtree
/// rooted at `0^N` on labels `0..n-a`.
pub fn standard_sigmas(n: usize, a: usize, k: usize, big_n: usize) -> Result<StandardSigmas> {
    if !sigma_pair_allowed(n, a) {
        return domain(format!("a = {a} is not allowed for n = {n}"));
    }
    if big_n > 1 || k <= big_n {
        return domain(format!("need N in {{0, 1}} and k > N, got N = {big_n}, k = {k}"));
    }
    guard(n, k, MAX_LEAVES)?;
    let mut swap: Vec<u8> = (0..n as u8).collect();
    swap.swap(0, 1);
    let sigma_j = (big_n + 1..=k)
        .map(|j| WreathElement::at_vertex(n, k, &TreeIndex { path: vec![0; j - 1] }, &swap))
        .collect::<Result<Vec<_>>>()?;
    Ok(StandardSigmas {
        sigma_0: odometer(n, k),
        sigma_j,
        sigma_inf: subtree_odometer(n, k, &TreeIndex { path: vec![0; big_n] }, n - a),
    })
}

/// A subgroup of `Aut(T_{n,k})` with a stabilizer chain on the non-root
/// vertices, based level by level.
#[derive(Clone, Debug)]
pub struct GroupHandle {
    n: usize,
    k: usize,
    gens: Vec<WreathElement>,
    chain: StabilizerChain,
}

impl GroupHandle {
    pub fn new(n: usize, k: usize, gens: &[WreathElement]) -> Result<Self> {
        GroupHandle::with_max_leaves(n, k, gens, MAX_LEAVES)
    }

    pub fn with_max_leaves(n: usize, k: usize, gens: &[WreathElement], max_leaves: u64) -> Result<Self> {
        guard(n, k, max_leaves)?;
        if gens.iter().any(|g| (g.n, g.k) != (n, k)) {
            return domain(format!("generators do not all act on T_({n},{k})"));
        }
        let degree = level_offset(n, k + 1) - 1;
        let perms: Vec<Perm> = gens.iter().map(WreathElement::domain_perm).collect();
        let chain = StabilizerChain::new(degree, (0..degree as u32).collect(), &perms);
        Ok(GroupHandle {
            n,
            k,
            gens: gens.to_vec(),
            chain,
        })
    }

    pub fn generators(&self) -> &[WreathElement] {
        &self.gens
    }

    pub fn order(&self) -> BigInt {
        self.chain.order()
    }

    /// `|G ∩ Γ(N)|`: the base suffix after the vertices of levels `1..=N`.
    pub fn stabilizer_order(&self, big_n: usize) -> Result<BigInt> {
        if big_n > self.k {
            return domain(format!("N = {big_n} exceeds k = {}", self.k));
        }
        Ok(self.chain.order_from(level_offset(self.n, big_n + 1) - 1))
    }

    pub fn contains(&self, w: &WreathElement) -> bool {
        (w.n, w.k) == (self.n, self.k) && self.chain.contains(&w.domain_perm())
    }
}

/// Order of the group generated by `gens` (the trivial group if empty).
pub fn bsgs_order(gens: &[WreathElement]) -> Result<BigInt> {
    match gens.first() {
        None => Ok(BigInt::one()),
        Some(g) => Ok(GroupHandle::new(g.n, g.k, gens)?.order()),
    }
}

/// Whether `⟨gens⟩ ⊇ Γ(N)` inside `Aut(T_{n,k})`.
pub fn contains_gamma(gens: &[WreathElement], n: usize, k: usize, big_n: usize) -> Result<bool> {
    let g = GroupHandle::new(n, k, gens)?;
    Ok(g.stabilizer_order(big_n)? == gamma_order(n, k, big_n)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistributionMethod {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

/// Counts of leaf cycle types (ascending lengths) over a group or sample.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleTypeDistribution {
    pub total: u64,
    pub counts: BTreeMap<Vec<usize>, u64>,
}

impl CycleTypeDistribution {
    pub fn exact(&self, cycle_type: &[usize]) -> Rational {
        let c = self.counts.get(cycle_type).copied().unwrap_or(0);
        Rational::new(c.into(), self.total.into())
    }

    pub fn proportion(&self, cycle_type: &[usize]) -> f64 {
        self.exact(cycle_type).to_f64().unwrap_or(0.0)
    }

    /// Mass of the types with no fixed point.
    pub fn fixed_point_free(&self) -> Rational {
        let c: u64 = self
            .counts
            .iter()
            .filter(|(t, _)| !t.contains(&1))
            .map(|(_, c)| c)
            .sum();
        Rational::new(c.into(), self.total.into())
    }

    pub fn total_variation(&self, other: &CycleTypeDistribution) -> f64 {
        let keys: std::collections::BTreeSet<&Vec<usize>> = self.counts.keys().chain(other.counts.keys()).collect();
        keys.into_iter()
            .map(|t| (self.proportion(t) - other.proportion(t)).abs())
            .sum::<f64>()
            / 2.0
    }

    fn merge(mut self, other: CycleTypeDistribution) -> Self {
        self.total += other.total;
        for (t, c) in other.counts {
            *self.counts.entry(t).or_insert(0) += c;
        }
        self
    }
}

const SAMPLE_CHUNK: u64 = 4096;

/// Leaf cycle types over `Aut(T_{n,k})`, either by enumerating every
/// portrait or from uniformly random portraits.
pub fn cycle_type_distribution(n: usize, k: usize, method: DistributionMethod) -> Result<CycleTypeDistribution> {
    guard(n, k, MAX_LEAVES)?;
    match method {
        DistributionMethod::Exhaustive => {
            let order = wreath_order(n, k);
            if order > BigInt::from(MAX_EXHAUSTIVE) {
                return Err(Error::SizeGuard(format!(
                    "|Aut(T_({n},{k}))| = {order} exceeds {MAX_EXHAUSTIVE}"
                )));
            }
            Ok(enumerate_all(n, k))
        }
        DistributionMethod::Sampled { count, seed } => {
            let chunks = count.div_ceil(SAMPLE_CHUNK);
            let empty = CycleTypeDistribution {
                total: 0,
                counts: BTreeMap::new(),
            };
            Ok((0..chunks)
                .into_par_iter()
                .map(|chunk| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(chunk);
                    let size = SAMPLE_CHUNK.min(count - chunk * SAMPLE_CHUNK);
                    let mut d = empty.clone();
                    for _ in 0..size {
                        let t = leaf_action(&WreathElement::random(n, k, &mut rng)).cycle_type;
                        *d.counts.entry(t).or_insert(0) += 1;
                        d.total += 1;
                    }
                    d
                })
                .collect::<Vec<_>>()
                .into_iter()
                .fold(empty.clone(), CycleTypeDistribution::merge))
        }
    }
}

fn all_label_perms(n: usize) -> Vec<Vec<u8>> {
    fn rec(prefix: &mut Vec<u8>, used: &mut Vec<bool>, out: &mut Vec<Vec<u8>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for c in 0..used.len() {
            if !used[c] {
                used[c] = true;
                prefix.push(c as u8);
                rec(prefix, used, out);
                prefix.pop();
                used[c] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn enumerate_all(n: usize, k: usize) -> CycleTypeDistribution {
    let labels = all_label_perms(n);
    let internal = level_offset(n, k);
    let mut digits = vec![0usize; internal];
    let mut w = WreathElement::identity(n, k);
    let mut d = CycleTypeDistribution {
        total: 0,
        counts: BTreeMap::new(),
    };
    loop {
        for (v, &i) in digits.iter().enumerate() {
            w.portrait[v * n..(v + 1) * n].copy_from_slice(&labels[i]);
        }
        *d.counts.entry(leaf_action(&w).cycle_type).or_insert(0) += 1;
        d.total += 1;
        let mut pos = 0;
        loop {
            if pos == internal {
                return d;
            }
            digits[pos] += 1;
            if digits[pos] < labels.len() {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests;
