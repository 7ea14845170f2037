//! Compound lotteries, their classical (Neumann-Morgenstern) value, and a
//! value that charges a multiplicative penalty at every stage carrying
//! uncertainty.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::ModelError;
use crate::model::{ratio, Probability, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LotteryTree {
    Leaf(Rational),
    Chance(Vec<(Probability, LotteryTree)>),
}

impl LotteryTree {
    pub fn leaf(utility: Rational) -> Self {
        Self::Leaf(utility)
    }

    /// Chance node; branch probabilities must sum to exactly one.
    pub fn chance(branches: Vec<(Probability, LotteryTree)>) -> Result<Self, ModelError> {
        if branches.is_empty() {
            return Err(ModelError::EmptyChanceNode);
        }
        let sum: Rational = branches.iter().map(|(p, _)| p.value()).sum();
        if !sum.is_one() {
            return Err(ModelError::ChanceMassSum(sum));
        }
        Ok(Self::Chance(branches))
    }

    /// Re-checks every chance node; trees built through [`LotteryTree::chance`] always pass.
    pub fn validate(&self) -> Result<(), ModelError> {
        match self {
            Self::Leaf(_) => Ok(()),
            Self::Chance(branches) => {
                if branches.is_empty() {
                    return Err(ModelError::EmptyChanceNode);
                }
                let sum: Rational = branches.iter().map(|(p, _)| p.value()).sum();
                if !sum.is_one() {
                    return Err(ModelError::ChanceMassSum(sum));
                }
                branches.iter().try_for_each(|(_, t)| t.validate())
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Self::Leaf(_) => 0,
            Self::Chance(b) => 1 + b.iter().map(|(_, t)| t.depth()).max().unwrap_or(0),
        }
    }

    /// A chance node with at least two branches of nonzero probability.
    pub fn is_uncertain(&self) -> bool {
        match self {
            Self::Leaf(_) => false,
            Self::Chance(b) => b.iter().filter(|(p, _)| !p.is_zero()).count() >= 2,
        }
    }
}

/// Multiplier charged at every uncertain chance node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PenaltySpec {
    factor: Rational,
}

impl PenaltySpec {
    pub fn new(factor: Rational) -> Result<Self, ModelError> {
        if factor <= Rational::zero() || factor > Rational::one() {
            return Err(ModelError::PenaltyOutOfRange(factor));
        }
        Ok(Self { factor })
    }

    /// No penalty; penalized values coincide with classical ones.
    pub fn none() -> Self {
        Self { factor: Rational::one() }
    }

    pub fn factor(&self) -> &Rational {
        &self.factor
    }
}

impl Default for PenaltySpec {
    fn default() -> Self {
        Self { factor: ratio(9, 10) }
    }
}

pub fn nm_value(t: &LotteryTree) -> Rational {
    match t {
        LotteryTree::Leaf(u) => u.clone(),
        LotteryTree::Chance(b) => b.iter().map(|(p, sub)| p.value() * nm_value(sub)).sum(),
    }
}

pub fn penalized_value(t: &LotteryTree, penalty: &PenaltySpec) -> Rational {
    match t {
        LotteryTree::Leaf(u) => u.clone(),
        LotteryTree::Chance(b) => {
            let mean: Rational = b.iter().map(|(p, sub)| p.value() * penalized_value(sub, penalty)).sum();
            if t.is_uncertain() { penalty.factor() * mean } else { mean }
        }
    }
}

/// Outcome distribution of the tree: utility to total path probability,
/// zero-mass outcomes dropped.
pub fn outcome_distribution(t: &LotteryTree) -> BTreeMap<Rational, Rational> {
    fn walk(t: &LotteryTree, mass: Rational, acc: &mut BTreeMap<Rational, Rational>) {
        match t {
            LotteryTree::Leaf(u) => *acc.entry(u.clone()).or_insert_with(Rational::zero) += mass,
            LotteryTree::Chance(b) => {
                for (p, sub) in b {
                    if !p.is_zero() {
                        walk(sub, &mass * p.value(), acc);
                    }
                }
            }
        }
    }
    let mut acc = BTreeMap::new();
    walk(t, Rational::one(), &mut acc);
    acc.retain(|_, m| !m.is_zero());
    acc
}

/// Single-stage equivalent of a compound lottery. Branches are ordered by
/// decreasing utility; a certain outcome collapses to a leaf.
pub fn reduce_compound(t: &LotteryTree) -> LotteryTree {
    let dist = outcome_distribution(t);
    if dist.len() == 1 {
        let (u, _) = dist.into_iter().next().expect("one outcome");
        return LotteryTree::Leaf(u);
    }
    LotteryTree::Chance(
        dist.into_iter()
            .rev()
            .map(|(u, m)| (Probability::new(m).expect("path mass"), LotteryTree::Leaf(u)))
            .collect(),
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoherenceReport {
    pub same_distribution: bool,
    pub nm_values: (Rational, Rational),
    pub penalized_values: (Rational, Rational),
    /// Same outcome distribution, different penalized value.
    pub violation: bool,
}

pub fn coherence_check(left: &LotteryTree, right: &LotteryTree, penalty: &PenaltySpec) -> CoherenceReport {
    let same_distribution = outcome_distribution(left) == outcome_distribution(right);
    let penalized_values = (penalized_value(left, penalty), penalized_value(right, penalty));
    let violation = same_distribution && penalized_values.0 != penalized_values.1;
    CoherenceReport { same_distribution, nm_values: (nm_value(left), nm_value(right)), penalized_values, violation }
}

/// Option A: 1 with probability 3/5, else 0.
pub fn option_a() -> LotteryTree {
    binary(ratio(3, 5))
}

/// Option B: 1 with probability 1/2, else a lottery paying 1 with probability 1/5.
pub fn option_b() -> LotteryTree {
    let half = Probability::new(ratio(1, 2)).expect("1/2");
    LotteryTree::chance(vec![(half.clone(), LotteryTree::Leaf(Rational::one())), (half, binary(ratio(1, 5)))])
        .expect("valid tree")
}

fn binary(win: Rational) -> LotteryTree {
    let win = Probability::new(win).expect("probability");
    let lose = win.complement();
    LotteryTree::chance(vec![(win, LotteryTree::Leaf(Rational::one())), (lose, LotteryTree::Leaf(Rational::zero()))])
        .expect("valid tree")
}
