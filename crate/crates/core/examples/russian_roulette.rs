//! Two revolvers, loaded with probability 1/6 and 1/7. Switching lowers the
//! risk of death, yet the asymmetric rule advises against it when the
//! potential outcomes are treated as fixed; treating them as random
//! restores the obvious answer.
//!
//!     cargo run --example russian_roulette

use counterfactual_utility::strata::{marginals_of, strata_from_chambers, ChamberParameterization};
use counterfactual_utility::utility::{evaluate_deterministic, evaluate_stochastic_unit, paradox_report};
use counterfactual_utility::{ArmOutcomeModel, AsymmetricUtilitySpec, OutcomeUtility, PopulationModel, Probability, UnitType};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let chambers = ChamberParameterization::independent(Probability::from_ratio(1, 6)?, Probability::from_ratio(1, 7)?);
    let strata = strata_from_chambers(&chambers);
    let (u, spec) = (OutcomeUtility::default(), AsymmetricUtilitySpec::default());

    println!("principal strata:");
    for (stratum, mass) in strata.iter() {
        println!("  {stratum}: {mass}");
    }

    let fixed = evaluate_deterministic(&strata, &u, &spec);
    println!("fixed potential outcomes:  {}", fixed.expected_relative_utility);

    let (p0, p1) = marginals_of(&strata);
    let (arm0, arm1) = (ArmOutcomeModel::Bernoulli(p0), ArmOutcomeModel::Bernoulli(p1));
    println!("random potential outcomes: {}", evaluate_stochastic_unit(&arm0, &arm1, &u, &spec));
    println!("classical effect:          {}", fixed.classical_effect);

    let model = PopulationModel::new(vec![UnitType::new("every play", Probability::one(), arm0, arm1)]);
    let report = paradox_report(&model, &strata, &u, &spec)?;
    println!("contradiction under fixed outcomes: {}", report.contradiction);
    println!("{}", report.narrative);
    Ok(())
}
