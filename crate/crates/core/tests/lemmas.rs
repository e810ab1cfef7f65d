//! Property suites for the structural facts the construction relies on.
//! Inputs come from seeded generators driven by proptest seeds.

use frobgen_core::groebner::{buchberger, ideal_equal, is_subideal};
use frobgen_core::frobdecomp::{ideal_i, ideal_j};
use frobgen_core::ideal::Ideal;
use frobgen_core::poly::{Polynomial, Ring};
use frobgen_testkit::suites;
use proptest::prelude::*;

macro_rules! suite {
    ($name:ident, $check:path) => {
        proptest! {
            #![proptest_config(ProptestConfig::with_cases(120))]
            #[test]
            fn $name(seed in any::<u64>()) {
                if let Err(msg) = $check(seed) {
                    prop_assert!(false, "seed {}: {}", seed, msg);
                }
            }
        }
    };
}

suite!(level_n_operators_commute_with_pn_powers, suites::commutation);
suite!(j_of_a_product_lies_in_j_of_a_factor, suites::product_inclusion);
suite!(j_of_a_pth_power_is_a_frobenius_power, suites::power_equality);
suite!(witness_operators_reach_every_generator, suites::witnesses_hit_generators);
suite!(derivatives_stay_in_j, suites::derivatives_in_j);
suite!(chain_descends, suites::chain_descent);
suite!(chain_mechanism, suites::chain_mechanism);
suite!(decomposition_round_trips, suites::decomposition_round_trip);
suite!(freshmans_dream, suites::freshmans_dream);

#[test]
fn product_example() {
    let ring = Ring::new(3, 2).unwrap();
    let g: Polynomial = ring.parse("x1^2 + x2").unwrap();
    let h = ring.parse("x1 + x2^2").unwrap();
    let big = buchberger(&ideal_j(&g, 1).unwrap(), ring.order()).unwrap();
    assert!(is_subideal(&ideal_j(&(&g * &h), 1).unwrap(), &big).unwrap());
    let unit = Ideal::new(&ring, vec![ring.one()]).unwrap();
    assert!(ideal_equal(&ideal_i(&ring.var(0), 1).unwrap(), &unit, ring.order()).unwrap());
}
