//! Same marginal survival probabilities, different locations of the
//! randomness: inside each unit (roulette), between units (snakebite,
//! customer numbers), or both (migraine). The population evaluator follows
//! each model's structure, and its per-unit breakdown shows why.
//!
//!     cargo run --example where_variation_lives

use counterfactual_utility::analysis::evaluate_scenario;
use counterfactual_utility::scenario::{builtin, ScenarioPayload};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for name in ["russian_roulette", "snakebite", "ssn_divisibility", "migraine_mixed"] {
        let scenario = builtin(name).expect("built-in scenario");
        let report = evaluate_scenario(&scenario, None)?;
        let locus = scenario.variation_locus.map_or("-", |v| v.name());
        println!("== {name} ({locus})");
        for (key, value) in &report.results {
            println!("   {key:>16}: {value}");
        }
        if let ScenarioPayload::Population(m) = &scenario.payload {
            let merged = m.merged();
            if merged.unit_types.len() < m.unit_types.len() {
                println!("   {} unit types merge into {}", m.unit_types.len(), merged.unit_types.len());
            }
        }
        for row in report.breakdown.iter().take(6) {
            println!("   . {} (weight {}): {}", row.label, row.weight, row.relative_utility);
        }
    }
    Ok(())
}
