//! Buchberger membership against Gaussian elimination on degree-bounded
//! multiples of the generators.

use frobgen_testkit::suites::{groebner_against_oracle, MembershipTally};

#[test]
fn membership_agrees_with_linear_algebra() {
    let mut tally = MembershipTally::default();
    for seed in 0..60 {
        if let Err(msg) = groebner_against_oracle(0x5eed_0000 + seed, &mut tally) {
            panic!("seed {seed}: {msg}");
        }
    }
    assert!(tally.members >= 60, "members tested: {}", tally.members);
    assert!(tally.non_members >= 30, "non-members tested: {}", tally.non_members);
}
