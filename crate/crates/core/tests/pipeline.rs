use odoni_core::arith::rat;
use odoni_core::certificates::{build_poly, certify, verify_bundle, BundleOptions, BundleStatus, CertificateBundle};
use odoni_core::chebotarev::frobenius_sample;
use odoni_core::params::{choose_a, search_a, OdoniParams};
use proptest::prelude::*;

#[test]
fn searched_parameters_certify_and_verify() {
    for n in [2, 4, 5] {
        let a = choose_a(n);
        let (big_a, _) = search_a(n, a, &[], 1_000_000, 1).unwrap().remove(0);
        let params = OdoniParams::new(n, a, big_a, vec![]).unwrap();
        let bundle = certify(&params, &BundleOptions::default()).unwrap();
        assert!(!matches!(bundle.status(), BundleStatus::Invalid(_)), "{params}");
        let text = serde_json::to_string(&bundle).unwrap();
        let back: CertificateBundle = serde_json::from_str(&text).unwrap();
        assert_eq!(verify_bundle(&back), Vec::<String>::new(), "{params}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn good_prime_samples_are_tower_compatible(p in 11u64..5_000) {
        let f = build_poly(&OdoniParams::new(3, 1, rat(52, 7), vec![]).unwrap());
        // Bad primes are refused; every accepted sample is squarefree and tower compatible.
        if let Ok(s) = frobenius_sample(&f, 2, p) {
            prop_assert!(s.tower_compatible);
            prop_assert!(s.types_compatible(3));
            prop_assert_eq!(s.level_types[0].iter().sum::<usize>(), 3);
            prop_assert_eq!(s.level_types[1].iter().sum::<usize>(), 9);
            prop_assert!(!s.has_root_at[1] || s.has_root_at[0]);
        }
    }
}
