//! Writes a custom scenario to JSON, reads it back, evaluates it, and
//! prints both report formats. Decimal literals are refused.
//!
//!     cargo run --example scenario_files

use counterfactual_utility::analysis::evaluate_scenario;
use counterfactual_utility::report::{Report, ReportFormat};
use counterfactual_utility::scenario::{parse_scenario, ScenarioFile, ScenarioPayload, VariationLocus};
use counterfactual_utility::{ratio, ArmOutcomeModel, AsymmetricUtilitySpec, PopulationModel, Probability, UnitType};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = Probability::from_ratio;
    let model = PopulationModel::new(vec![
        UnitType::new("responders", p(2, 5)?, ArmOutcomeModel::Bernoulli(p(1, 2)?), ArmOutcomeModel::Bernoulli(p(3, 4)?)),
        UnitType::new("non-responders", p(3, 5)?, ArmOutcomeModel::Bernoulli(p(9, 10)?), ArmOutcomeModel::Bernoulli(p(5, 6)?)),
    ])
    .with_arm_labels("usual care", "new protocol");
    let mut scenario = ScenarioFile::new("two_subgroups", ScenarioPayload::Population(model));
    scenario.variation_locus = Some(VariationLocus::Mixed);
    scenario.asymmetry = Some(AsymmetricUtilitySpec::new(ratio(1, 3), ratio(1, 1), ratio(0, 1))?);

    let json = scenario.to_json();
    println!("{json}");
    let parsed = parse_scenario(&json)?;
    assert_eq!(parsed, scenario);

    let report = evaluate_scenario(&parsed, None)?;
    print!("{}", report.render(ReportFormat::Text));
    let structured = report.render(ReportFormat::Structured);
    assert_eq!(Report::from_structured(&structured)?, report);

    let rejected = parse_scenario(&json.replacen("\"2/5\"", "\"0.4\"", 1)).unwrap_err();
    println!("rejected: {rejected}");
    Ok(())
}
