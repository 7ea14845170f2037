use thiserror::Error;

use crate::model::{Rational, Violation};

/// Errors raised when constructing or evaluating domain values.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(Rational),
    #[error("strata masses sum to {0}, expected exactly 1")]
    StrataMassSum(Rational),
    #[error("chance node is empty")]
    EmptyChanceNode,
    #[error("chance node branch probabilities sum to {0}, expected exactly 1")]
    ChanceMassSum(Rational),
    #[error("{name} must be strictly positive, got {value}")]
    NonPositiveWeight { name: &'static str, value: Rational },
    #[error("penalty factor must lie in (0, 1], got {0}")]
    PenaltyOutOfRange(Rational),
    #[error("correlated chamber parameterizations are not supported")]
    CorrelatedChambers,
    #[error("invalid population: {}", join_violations(.0))]
    InvalidPopulation(Vec<Violation>),
    #[error("deterministic view marginals {view} do not match population marginals {model}")]
    MarginalMismatch { view: Box<Marginals>, model: Box<Marginals> },
}

/// Survival probabilities under arm 0 and arm 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Marginals {
    pub p0: Rational,
    pub p1: Rational,
}

impl std::fmt::Display for Marginals {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.p0, self.p1)
    }
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}
