use horizon_channels::closedform::{
    classical_capacity, derived_quantities, mutual_information, EvalOptions, SeriesConfig,
};
use horizon_channels::unruh::{Encoding, Preparation, Protocol, SqueezingParameter};
use proptest::prelude::*;

fn encoding() -> impl Strategy<Value = Encoding> {
    prop_oneof![Just(Encoding::SingleRail), Just(Encoding::DualRail)]
}

fn protocol() -> impl Strategy<Value = Protocol> {
    prop_oneof![Just(Protocol::Classical), Just(Protocol::Quantum)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quantities_stay_in_range(
        r in 0.0f64..12.0,
        alpha_sq in 0.01f64..0.99,
        enc in encoding(),
        proto in protocol(),
    ) {
        let prep = Preparation::new(alpha_sq).unwrap();
        let sq = SqueezingParameter::new(r).unwrap();
        let q = derived_quantities(&prep, enc, proto, sq, &EvalOptions::default()).unwrap();
        let s = q.source_entropy_bits;
        prop_assert!((0.0..1.0).contains(&q.fidelity));
        prop_assert!(q.mutual_info_bits >= -1e-12);
        prop_assert!(q.conditional_entropy_bits >= -s - 1e-12);
        prop_assert!(q.conditional_entropy_bits <= s + 1e-12);
        prop_assert!((s - q.mutual_info_bits - q.conditional_entropy_bits).abs() < 1e-9);
        if proto == Protocol::Classical {
            prop_assert!(q.conditional_entropy_bits >= -1e-12);
        }
    }

    #[test]
    fn capacity_dominates_any_preparation(r in 0.05f64..8.0, alpha_sq in 0.01f64..0.99) {
        let cfg = SeriesConfig::default();
        let sq = SqueezingParameter::new(r).unwrap();
        let prep = Preparation::new(alpha_sq).unwrap();
        let cap = classical_capacity(Encoding::SingleRail, sq, &cfg).unwrap();
        let mi = mutual_information(&prep, Encoding::SingleRail, Protocol::Classical, sq, &cfg)
            .unwrap();
        prop_assert!(cap.bits >= mi - 1e-12);
    }
}
