use super::*;
use crate::arith::rat;
use proptest::prelude::*;

/// Counts automorphisms of `T_{n,k}` by brute force over all permutations
/// of the non-root vertices that preserve the parent map and levels.
fn brute_force_aut_count(n: usize, k: usize) -> usize {
    let verts: Vec<TreeIndex> = (1..=k)
        .flat_map(|j| (0..n.pow(j as u32)).map(move |x| TreeIndex::from_index_in_level(n, j, x)))
        .collect();
    let d = verts.len();
    let parent = |v: &TreeIndex| TreeIndex { path: v.path[..v.level() - 1].to_vec() };
    let mut count = 0;
    let mut images: Vec<usize> = (0..d).collect();
    // Heap's algorithm over all d! orderings.
    let mut c = vec![0usize; d];
    let mut check = |images: &[usize]| {
        let ok = verts.iter().enumerate().all(|(i, v)| {
            let w = &verts[images[i]];
            if w.level() != v.level() {
                return false;
            }
            if v.level() == 1 {
                return true;
            }
            let pv = parent(v).global(n) - 1;
            let pw = parent(w).global(n) - 1;
            images[pv] == pw
        });
        if ok {
            count += 1;
        }
    };
    check(&images);
    let mut i = 0;
    while i < d {
        if c[i] < i {
            if i % 2 == 0 {
                images.swap(0, i);
            } else {
                images.swap(c[i], i);
            }
            check(&images);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    count
}

#[test]
fn orders_of_small_wreath_products() {
    assert_eq!(wreath_order(2, 2), BigInt::from(8));
    assert_eq!(wreath_order(2, 3), BigInt::from(128));
    assert_eq!(wreath_order(3, 2), BigInt::from(1296));
    assert_eq!(wreath_order(5, 0), BigInt::one());
    assert_eq!(brute_force_aut_count(2, 2), 8);
    assert_eq!(brute_force_aut_count(3, 1), 6);
}

#[test]
fn gamma_orders() {
    assert_eq!(gamma_order(2, 2, 1).unwrap(), BigInt::from(4));
    assert_eq!(gamma_order(3, 3, 0).unwrap(), wreath_order(3, 3));
    assert_eq!(gamma_order(3, 3, 3).unwrap(), BigInt::one());
    assert!(gamma_order(2, 2, 3).is_err());
}

#[test]
fn chain_order_equals_wreath_order_on_full_sets() {
    for (n, k) in [(2, 2), (2, 3), (3, 2), (2, 4), (4, 2)] {
        assert_eq!(bsgs_order(&full_generating_set(n, k)).unwrap(), wreath_order(n, k), "({n},{k})");
    }
}

#[test]
fn symmetric_group_at_the_root() {
    let root = TreeIndex::root();
    let t = WreathElement::at_vertex(3, 1, &root, &[1, 0, 2]).unwrap();
    let c = WreathElement::at_vertex(3, 1, &root, &[1, 2, 0]).unwrap();
    assert_eq!(bsgs_order(&[t, c]).unwrap(), BigInt::from(6));
}

#[test]
fn odometer_is_one_long_cycle() {
    for (n, k) in [(2, 2), (2, 3), (3, 2), (5, 2)] {
        let o = odometer(n, k);
        assert_eq!(leaf_action(&o).cycle_type, vec![n.pow(k as u32)]);
        assert_eq!(bsgs_order(&[o]).unwrap(), BigInt::from(n.pow(k as u32)));
    }
}

#[test]
fn leaf_actions_of_simple_elements() {
    assert_eq!(leaf_action(&WreathElement::identity(2, 3)).cycle_type, vec![1; 8]);
    let v = TreeIndex { path: vec![1, 0] };
    let t = WreathElement::at_vertex(2, 3, &v, &[1, 0]).unwrap();
    assert_eq!(leaf_action(&t).cycle_type, vec![1, 1, 1, 1, 1, 1, 2]);
}

#[test]
fn tree_index_round_trip() {
    let v = TreeIndex { path: vec![2, 0, 1] };
    assert_eq!(v.index_in_level(3), 19);
    assert_eq!(v.global(3), 1 + 3 + 9 + 19);
    assert_eq!(TreeIndex::from_index_in_level(3, 3, 19), v);
}

#[test]
fn bad_labels_are_rejected() {
    assert!(WreathElement::at_vertex(3, 2, &TreeIndex::root(), &[0, 0, 1]).is_err());
    assert!(WreathElement::at_vertex(3, 2, &TreeIndex { path: vec![0, 0] }, &[0, 1, 2]).is_err());
    assert!(WreathElement::from_portrait(2, 1, vec![0, 1, 0, 1]).is_err());
}

#[test]
fn standard_sigmas_generate_gamma() {
    for (n, a, k, big_n) in [(2, 1, 2, 0), (2, 1, 3, 0), (3, 1, 2, 0), (3, 1, 3, 1), (5, 2, 2, 0)] {
        let s = standard_sigmas(n, a, k, big_n).unwrap();
        assert!(contains_gamma(&s.all(), n, k, big_n).unwrap(), "({n},{a},{k},{big_n})");
    }
}

#[test]
fn standard_sigmas_at_2_1_3_0_have_the_full_order() {
    let s = standard_sigmas(2, 1, 3, 0).unwrap();
    assert_eq!(bsgs_order(&s.all()).unwrap(), BigInt::from(128));
}

#[test]
fn dropping_the_transpositions_loses_gamma() {
    let s = standard_sigmas(2, 1, 3, 0).unwrap();
    let gens = vec![s.sigma_0.clone(), s.sigma_inf.clone()];
    assert!(!contains_gamma(&gens, 2, 3, 0).unwrap());
    assert_eq!(bsgs_order(&gens).unwrap(), BigInt::from(8));
}

#[test]
fn sigma_inf_shapes() {
    let s = standard_sigmas(2, 1, 2, 0).unwrap();
    assert!(s.sigma_inf.is_identity());
    assert_eq!(leaf_action(&s.sigma_0).cycle_type, vec![4]);
    assert_eq!(s.sigma_j.len(), 2);
    assert_eq!(leaf_action(&s.sigma_j[1]).cycle_type, vec![1, 1, 2]);

    let s = standard_sigmas(3, 1, 2, 1).unwrap();
    assert_eq!(leaf_action(&s.sigma_0).cycle_type, vec![9]);
    let leaves = leaf_action(&s.sigma_inf).perm;
    // Leaves 0 and 1 below vertex 0 are swapped; everything else is fixed.
    assert_eq!(leaves.image(0), 1);
    assert_eq!(leaves.image(1), 0);
    assert_eq!(leaves.fixed_points(), 7);
    assert!(s.sigma_inf.level_action(1).is_identity());
}

#[test]
fn standard_sigma_preconditions() {
    assert!(standard_sigmas(3, 2, 2, 0).is_err());
    assert!(standard_sigmas(6, 2, 2, 0).is_err());
    assert!(standard_sigmas(3, 1, 2, 2).is_err());
    assert!(standard_sigmas(3, 1, 1, 1).is_err());
    assert!(standard_sigmas(3, 1, 10, 0).is_err());
}

#[test]
fn trivial_and_full_generators() {
    assert!(contains_gamma(&full_generating_set(3, 2), 3, 2, 0).unwrap());
    assert!(!contains_gamma(&[WreathElement::identity(3, 2)], 3, 2, 1).unwrap());
    assert!(contains_gamma(&[WreathElement::identity(3, 2)], 3, 2, 2).unwrap());
}

#[test]
fn stabilizer_chain_membership() {
    let s = standard_sigmas(3, 1, 2, 0).unwrap();
    let g = GroupHandle::new(3, 2, &s.all()).unwrap();
    let prod = s.sigma_0.compose(&s.sigma_j[0]).compose(&s.sigma_inf.inverse());
    assert!(g.contains(&prod));
}

#[test]
fn size_guard() {
    assert!(matches!(GroupHandle::new(3, 10, &[]), Err(Error::SizeGuard(_))));
    assert!(GroupHandle::with_max_leaves(2, 15, &[odometer(2, 15)], 1 << 15).is_ok());
    assert!(matches!(
        cycle_type_distribution(4, 2, DistributionMethod::Exhaustive),
        Err(Error::SizeGuard(_))
    ));
}

#[test]
fn exhaustive_distributions() {
    let d = cycle_type_distribution(2, 1, DistributionMethod::Exhaustive).unwrap();
    assert_eq!(d.total, 2);
    assert_eq!(d.exact(&[1, 1]), rat(1, 2));
    assert_eq!(d.exact(&[2]), rat(1, 2));

    let d = cycle_type_distribution(2, 2, DistributionMethod::Exhaustive).unwrap();
    assert_eq!(d.total, 8);
    assert_eq!(d.fixed_point_free(), rat(5, 8));
    assert_eq!(d.total, wreath_order(2, 2).to_u64().unwrap());
}

#[test]
fn sampled_matches_exhaustive_at_2_3() {
    let exact = cycle_type_distribution(2, 3, DistributionMethod::Exhaustive).unwrap();
    let method = DistributionMethod::Sampled { count: 100_000, seed: 7 };
    let sampled = cycle_type_distribution(2, 3, method).unwrap();
    assert_eq!(sampled.total, 100_000);
    assert!(exact.total_variation(&sampled) < 0.02);
    assert_eq!(cycle_type_distribution(2, 3, method).unwrap(), sampled);
}

#[test]
fn portrait_sampling_is_uniform_at_2_2() {
    // Every one of the 8 elements should appear with frequency near 1/8.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut counts = std::collections::HashMap::new();
    let trials = 80_000;
    for _ in 0..trials {
        *counts.entry(WreathElement::random(2, 2, &mut rng)).or_insert(0u32) += 1;
    }
    assert_eq!(counts.len(), 8);
    for c in counts.values() {
        assert!((*c as f64 / trials as f64 - 0.125).abs() < 0.01);
    }
}

fn arb_element(n: usize, k: usize) -> impl Strategy<Value = WreathElement> {
    any::<u64>().prop_map(move |seed| WreathElement::random(n, k, &mut ChaCha8Rng::seed_from_u64(seed)))
}

proptest! {
    #[test]
    fn leaf_action_is_a_homomorphism(u in arb_element(3, 3), v in arb_element(3, 3)) {
        let uv = u.compose(&v);
        prop_assert_eq!(leaf_action(&uv).perm, leaf_action(&u).perm.compose(&leaf_action(&v).perm));
        prop_assert!(u.compose(&u.inverse()).is_identity());
        prop_assert_eq!(uv.domain_perm(), u.domain_perm().compose(&v.domain_perm()));
    }

    #[test]
    fn levels_are_compatible_quotients(u in arb_element(3, 3)) {
        let levels = u.level_images();
        for j in 1..levels.len() {
            for (x, &gx) in levels[j].iter().enumerate() {
                prop_assert_eq!(levels[j - 1][x / 3], gx / 3);
            }
        }
    }

    #[test]
    fn contains_gamma_is_monotone(extra in arb_element(2, 3), drop in 0usize..4) {
        let mut gens = standard_sigmas(2, 1, 3, 0).unwrap().all();
        gens.remove(drop);
        let before = contains_gamma(&gens, 2, 3, 0).unwrap();
        gens.push(extra);
        let after = contains_gamma(&gens, 2, 3, 0).unwrap();
        prop_assert!(!before || after);
    }

    #[test]
    fn identity_portrait_iff_identity_action(u in arb_element(2, 3)) {
        prop_assert_eq!(u.is_identity(), leaf_action(&u).perm.is_identity());
    }
}
