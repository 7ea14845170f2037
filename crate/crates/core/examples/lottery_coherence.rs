//! Two lotteries with the same outcome distribution. Charging 10% for
//! every uncertain stage makes the two-stage lottery look worse, which no
//! outcome-based (Neumann-Morgenstern) utility can do.
//!
//!     cargo run --example lottery_coherence

use counterfactual_utility::lottery::{
    coherence_check, nm_value, option_a, option_b, penalized_value, reduce_compound, PenaltySpec,
};
use counterfactual_utility::ratio;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (a, b) = (option_a(), option_b());
    println!("B reduces to A: {}", reduce_compound(&b) == a);

    for factor in [ratio(1, 1), ratio(9, 10), ratio(1, 2)] {
        let penalty = PenaltySpec::new(factor.clone())?;
        let report = coherence_check(&a, &b, &penalty);
        println!(
            "factor {factor}: classical {} / {}, penalized {} / {}, violation {}",
            nm_value(&a),
            nm_value(&b),
            penalized_value(&a, &penalty),
            penalized_value(&b, &penalty),
            report.violation
        );
    }
    Ok(())
}
