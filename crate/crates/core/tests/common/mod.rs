#![allow(dead_code)]

use counterfactual_utility::lottery::LotteryTree;
use counterfactual_utility::strata::strata_from_joint;
use counterfactual_utility::{ratio, ArmOutcomeModel, BinaryOutcome, PopulationModel, Probability, UnitType};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn p(n: i64, d: i64) -> Probability {
    Probability::from_ratio(n, d).unwrap()
}

pub fn bern(n: i64, d: i64) -> ArmOutcomeModel {
    ArmOutcomeModel::Bernoulli(p(n, d))
}

pub fn deg(bit: u8) -> ArmOutcomeModel {
    ArmOutcomeModel::Degenerate(BinaryOutcome::from_bit(bit).unwrap())
}

fn random_probability(rng: &mut ChaCha8Rng) -> Probability {
    let d = rng.random_range(1..=12i64);
    p(rng.random_range(0..=d), d)
}

fn random_arm(rng: &mut ChaCha8Rng) -> ArmOutcomeModel {
    match rng.random_range(0..3) {
        0 => deg(rng.random_range(0..=1)),
        _ => ArmOutcomeModel::Bernoulli(random_probability(rng)),
    }
}

/// Splits one into `n` positive rational weights.
fn random_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<Probability> {
    let raw: Vec<i64> = (0..n).map(|_| rng.random_range(1..=9)).collect();
    let total: i64 = raw.iter().sum();
    raw.into_iter().map(|w| p(w, total)).collect()
}

/// Random valid population of one to four unit types. About a quarter of
/// the unit types carry an explicit cross-arm joint whose marginals match.
pub fn random_population(rng: &mut ChaCha8Rng) -> PopulationModel {
    let n = rng.random_range(1..=4usize);
    let weights = random_weights(rng, n);
    let units = weights
        .into_iter()
        .enumerate()
        .map(|(i, w)| {
            if rng.random_range(0..4) == 0 {
                let masses = random_weights(rng, 4);
                let joint = strata_from_joint(masses[0].clone(), masses[1].clone(), masses[2].clone(), masses[3].clone()).unwrap();
                let p0 = masses[0].value() + masses[2].value();
                let p1 = masses[0].value() + masses[3].value();
                UnitType::new(
                    format!("u{i}"),
                    w,
                    ArmOutcomeModel::Bernoulli(Probability::new(p0).unwrap()),
                    ArmOutcomeModel::Bernoulli(Probability::new(p1).unwrap()),
                )
                .with_dependence(joint)
            } else {
                UnitType::new(format!("u{i}"), w, random_arm(rng), random_arm(rng))
            }
        })
        .collect();
    PopulationModel::new(units)
}

/// Random lottery tree of depth at most `depth`.
pub fn random_tree(rng: &mut ChaCha8Rng, depth: usize) -> LotteryTree {
    if depth == 0 || rng.random_range(0..3) == 0 {
        return LotteryTree::Leaf(ratio(rng.random_range(-4..=10), rng.random_range(1..=4)));
    }
    let n = rng.random_range(1..=3usize);
    let weights: Vec<i64> = (0..n).map(|_| rng.random_range(0..=4)).collect();
    let total: i64 = weights.iter().sum();
    let weights = if total == 0 { vec![1; n] } else { weights };
    let total: i64 = weights.iter().sum();
    LotteryTree::chance(weights.into_iter().map(|w| (p(w, total), random_tree(rng, depth - 1))).collect()).unwrap()
}
