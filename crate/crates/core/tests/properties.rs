mod common;

use common::{bern, deg, p, random_population};
use counterfactual_utility::model::PrincipalStratum;
use counterfactual_utility::strata::{strata_from_independent_marginals, strata_from_joint};
use counterfactual_utility::utility::{
    asymmetric_relative_utility, evaluate_deterministic, evaluate_population, evaluate_stochastic_unit,
};
use counterfactual_utility::{
    ratio, ArmOutcomeModel, AsymmetricUtilitySpec, BinaryOutcome, OutcomeUtility, PopulationModel, Probability,
    Rational, UnitType,
};
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arb_probability() -> impl Strategy<Value = Probability> {
    (1i64..=30).prop_flat_map(|d| (0..=d, Just(d))).prop_map(|(n, d)| p(n, d))
}

fn arb_positive() -> impl Strategy<Value = Rational> {
    (1i64..=20, 1i64..=20).prop_map(|(n, d)| ratio(n, d))
}

fn arb_spec() -> impl Strategy<Value = AsymmetricUtilitySpec> {
    (arb_positive(), arb_positive()).prop_map(|(g, l)| AsymmetricUtilitySpec::new(g, l, Rational::zero()).unwrap())
}

fn arb_rational() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=30).prop_map(|(n, d)| ratio(n, d))
}

proptest! {
    #[test]
    fn rational_round_trips(a in arb_rational(), b in arb_rational()) {
        prop_assert_eq!((&a + &b) - &b, a.clone());
        if !a.is_zero() {
            prop_assert_eq!(&a * (Rational::from_integer(1.into()) / &a), Rational::from_integer(1.into()));
        }
    }

    #[test]
    fn symmetric_rule_is_difference(u0 in arb_rational(), u1 in arb_rational()) {
        prop_assert_eq!(asymmetric_relative_utility(&u0, &u1, &AsymmetricUtilitySpec::symmetric()), &u1 - &u0);
    }

    #[test]
    fn single_unit_sign_matches_dominance(p0 in arb_probability(), p1 in arb_probability(), spec in arb_spec()) {
        let u = OutcomeUtility::default();
        let m = PopulationModel::new(vec![UnitType::new(
            "u", Probability::one(), ArmOutcomeModel::Bernoulli(p0), ArmOutcomeModel::Bernoulli(p1))]);
        let r = evaluate_population(&m, &u, &spec).unwrap();
        prop_assert_eq!(r.expected_relative_utility.signum(), r.classical_effect.signum());
    }

    #[test]
    fn closed_form_for_independent_arms(p0 in arb_probability(), p1 in arb_probability(), spec in arb_spec()) {
        let d = strata_from_independent_marginals(&p0, &p1);
        let got = evaluate_deterministic(&d, &OutcomeUtility::default(), &spec).expected_relative_utility;
        let (s0, s1) = (p0.value(), p1.value());
        let closed = spec.gain_weight() * p0.complement().value() * s1 - spec.loss_weight() * s0 * p1.complement().value();
        prop_assert_eq!(got, closed);
    }

    #[test]
    fn moving_mass_from_harmed_to_saved_helps(
        w in proptest::collection::vec(1i64..=9, 4),
        shift in 1i64..=9,
        spec in arb_spec(),
    ) {
        let total: i64 = w.iter().sum();
        // move shift/(total*10) of the harmed mass onto saved
        let denom = total * 10;
        let before = strata_from_joint(p(w[0] * 10, denom), p(w[1] * 10, denom), p(w[2] * 10, denom), p(w[3] * 10, denom)).unwrap();
        let moved = shift.min(w[2] * 10);
        let after = strata_from_joint(
            p(w[0] * 10, denom), p(w[1] * 10, denom), p(w[2] * 10 - moved, denom), p(w[3] * 10 + moved, denom),
        ).unwrap();
        let u = OutcomeUtility::default();
        prop_assert!(
            evaluate_deterministic(&after, &u, &spec).expected_relative_utility
                > evaluate_deterministic(&before, &u, &spec).expected_relative_utility
        );
    }

    #[test]
    fn breakdown_sums_to_total(seed in any::<u64>(), spec in arb_spec()) {
        let m = random_population(&mut ChaCha8Rng::seed_from_u64(seed));
        let r = evaluate_population(&m, &OutcomeUtility::default(), &spec).unwrap();
        let sum: Rational = r.per_unit_breakdown.iter().map(|row| &row.weight * &row.relative_utility).sum();
        prop_assert_eq!(sum, r.expected_relative_utility);
    }

    #[test]
    fn certain_bernoulli_is_degenerate(bits in (0u8..=1, 0u8..=1), spec in arb_spec(), other in arb_probability()) {
        let u = OutcomeUtility::default();
        let as_bern = |b: u8| bern(i64::from(b), 1);
        prop_assert_eq!(
            evaluate_stochastic_unit(&deg(bits.0), &deg(bits.1), &u, &spec),
            evaluate_stochastic_unit(&as_bern(bits.0), &as_bern(bits.1), &u, &spec)
        );
        let mixed = |a: ArmOutcomeModel| PopulationModel::new(vec![
            UnitType::new("x", p(1, 2), a, ArmOutcomeModel::Bernoulli(other.clone())),
            UnitType::new("y", p(1, 2), deg(1), deg(0)),
        ]);
        prop_assert_eq!(
            evaluate_population(&mixed(deg(bits.0)), &u, &spec).unwrap(),
            evaluate_population(&mixed(as_bern(bits.0)), &u, &spec).unwrap()
        );
    }
}

#[test]
fn degenerate_reduction_covers_every_stratum() {
    let (u, spec) = (OutcomeUtility::default(), AsymmetricUtilitySpec::default());
    let expected = [ratio(0, 1), ratio(0, 1), ratio(-1, 1), ratio(1, 2)];
    for (stratum, want) in PrincipalStratum::ALL.into_iter().zip(expected) {
        let arm = |o: BinaryOutcome| ArmOutcomeModel::Degenerate(o);
        assert_eq!(evaluate_stochastic_unit(&arm(stratum.y0), &arm(stratum.y1), &u, &spec), want, "{stratum}");
    }
}

#[test]
fn roulette_parameterization_gap() {
    let (u, spec) = (OutcomeUtility::default(), AsymmetricUtilitySpec::default());
    let det = evaluate_deterministic(&strata_from_independent_marginals(&p(5, 6), &p(6, 7)), &u, &spec).expected_relative_utility;
    let sto = evaluate_stochastic_unit(&bern(5, 6), &bern(6, 7), &u, &spec);
    assert!(det < Rational::zero() && Rational::zero() < sto);
    assert_eq!((det, sto), (ratio(-1, 21), ratio(1, 84)));
}
