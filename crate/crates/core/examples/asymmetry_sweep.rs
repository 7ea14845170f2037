//! Sweeps the gain weight to find where fixed-outcome evaluation of the
//! roulette switch changes sign. With gain weight g and loss weight 1 the
//! value is g * 6/42 - 5/42, so the switch is endorsed only for g > 5/6.
//!
//!     cargo run --example asymmetry_sweep

use counterfactual_utility::strata::strata_from_independent_marginals;
use counterfactual_utility::utility::{evaluate_deterministic, Recommendation};
use counterfactual_utility::{ratio, AsymmetricUtilitySpec, OutcomeUtility, Probability};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let strata = strata_from_independent_marginals(&Probability::from_ratio(5, 6)?, &Probability::from_ratio(6, 7)?);
    let u = OutcomeUtility::default();
    for twelfths in 1..=12 {
        let gain = ratio(twelfths, 12);
        let spec = AsymmetricUtilitySpec::new(gain.clone(), ratio(1, 1), ratio(0, 1))?;
        let v = evaluate_deterministic(&strata, &u, &spec).expected_relative_utility;
        println!("gain {gain:>5}: {v:>8}  {}", Recommendation::from_value(&v).name());
    }
    Ok(())
}
