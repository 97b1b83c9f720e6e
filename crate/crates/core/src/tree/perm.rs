//! Permutations of `0..d` as image vectors.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(d: usize) -> Self {
        Perm((0..d as u32).collect())
    }

    /// `images[i]` is the image of `i`; panics unless it is a bijection.
    pub fn from_images(images: Vec<u32>) -> Self {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            assert!(!std::mem::replace(&mut seen[x as usize], true), "not a permutation");
        }
        Perm(images)
    }

    /// Builds a permutation from disjoint cycles.
    pub fn from_cycles(d: usize, cycles: &[&[u32]]) -> Self {
        let mut images: Vec<u32> = (0..d as u32).collect();
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                images[x as usize] = cycle[(i + 1) % cycle.len()];
            }
        }
        Perm::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn image(&self, x: u32) -> u32 {
        self.0[x as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `x ↦ other(self(x))`: apply `self` first.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    /// `x ↦ self(other(x))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        other.then(self)
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm(inv)
    }

    /// Cycle lengths, ascending, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x] as usize;
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable();
        out
    }

    pub fn fixed_points(&self) -> usize {
        self.0.iter().enumerate().filter(|(i, &x)| *i as u32 == x).count()
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_perm(d: usize) -> impl Strategy<Value = Perm> {
        Just((0..d as u32).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(Perm::from_images)
    }

    #[test]
    fn cycles_and_types() {
        let p = Perm::from_cycles(5, &[&[0, 1, 2], &[3, 4]]);
        assert_eq!(p.cycle_type(), vec![2, 3]);
        assert_eq!(Perm::identity(3).cycle_type(), vec![1, 1, 1]);
        assert_eq!(p.fixed_points(), 0);
    }

    #[test]
    #[should_panic(expected = "not a permutation")]
    fn rejects_non_bijection() {
        Perm::from_images(vec![0, 0]);
    }

    proptest! {
        #[test]
        fn group_laws(a in arb_perm(7), b in arb_perm(7), c in arb_perm(7)) {
            prop_assert_eq!(a.then(&b).then(&c), a.then(&b.then(&c)));
            prop_assert!(a.then(&a.inverse()).is_identity());
            prop_assert_eq!(a.compose(&b), b.then(&a));
            prop_assert_eq!(a.cycle_type().iter().sum::<usize>(), 7);
        }
    }
}
