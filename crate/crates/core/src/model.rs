//! Domain types shared by every evaluator: exact probabilities, binary
//! potential outcomes, principal strata, arm outcome laws and populations
//! of unit types.
//!
//! Everything here is an immutable value once built. Arithmetic is exact
//! rational arithmetic throughout; floats only appear when reports are
//! formatted or when the Monte Carlo oracle samples.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::ModelError;

pub type Rational = num_rational::BigRational;

/// Builds a normalized rational, rejecting a zero denominator.
pub fn rational(num: i64, den: i64) -> Result<Rational, ModelError> {
    if den == 0 {
        return Err(ModelError::ZeroDenominator);
    }
    Ok(Rational::new(BigInt::from(num), BigInt::from(den)))
}

/// Infallible shorthand for literals known to be valid. Panics on `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    rational(num, den).expect("non-zero denominator")
}

/// A rational in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Probability(Rational);

impl Probability {
    pub fn new(value: Rational) -> Result<Self, ModelError> {
        if value < Rational::zero() || value > Rational::one() {
            return Err(ModelError::ProbabilityOutOfRange(value));
        }
        Ok(Self(value))
    }

    pub fn from_ratio(num: i64, den: i64) -> Result<Self, ModelError> {
        Self::new(rational(num, den)?)
    }

    pub fn zero() -> Self {
        Self(Rational::zero())
    }

    pub fn one() -> Self {
        Self(Rational::one())
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn into_inner(self) -> Rational {
        self.0
    }

    /// `1 - p`.
    pub fn complement(&self) -> Self {
        Self(Rational::one() - &self.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.0)
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Nearest-ish `f64` of a rational; only used for sampling and display.
pub fn rational_to_f64(x: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// Binary outcome of a single unit under a single arm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BinaryOutcome {
    /// `y = 0`: death, or a customer lost.
    Death,
    /// `y = 1`: survival, or a customer retained.
    Survival,
}

impl BinaryOutcome {
    pub fn from_bit(bit: u8) -> Option<Self> {
        match bit {
            0 => Some(Self::Death),
            1 => Some(Self::Survival),
            _ => None,
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Self::Death => 0,
            Self::Survival => 1,
        }
    }
}

/// The joint potential outcome `(y0, y1)` of a unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrincipalStratum {
    pub y0: BinaryOutcome,
    pub y1: BinaryOutcome,
}

impl PrincipalStratum {
    pub const ALWAYS_SURVIVE: Self = Self::new(BinaryOutcome::Survival, BinaryOutcome::Survival);
    pub const NEVER_SURVIVE: Self = Self::new(BinaryOutcome::Death, BinaryOutcome::Death);
    /// Treatment kills: survives under arm 0, dies under arm 1.
    pub const HARMED: Self = Self::new(BinaryOutcome::Survival, BinaryOutcome::Death);
    /// Treatment saves: dies under arm 0, survives under arm 1.
    pub const SAVED: Self = Self::new(BinaryOutcome::Death, BinaryOutcome::Survival);

    /// Canonical order: (1,1), (0,0), (1,0), (0,1).
    pub const ALL: [Self; 4] = [Self::ALWAYS_SURVIVE, Self::NEVER_SURVIVE, Self::HARMED, Self::SAVED];

    pub const fn new(y0: BinaryOutcome, y1: BinaryOutcome) -> Self {
        Self { y0, y1 }
    }

    fn index(self) -> usize {
        match (self.y0, self.y1) {
            (BinaryOutcome::Survival, BinaryOutcome::Survival) => 0,
            (BinaryOutcome::Death, BinaryOutcome::Death) => 1,
            (BinaryOutcome::Survival, BinaryOutcome::Death) => 2,
            (BinaryOutcome::Death, BinaryOutcome::Survival) => 3,
        }
    }
}

impl fmt::Display for PrincipalStratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.y0.bit(), self.y1.bit())
    }
}

/// Joint distribution of `(y0, y1)` over the four principal strata.
/// Masses always sum to exactly one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StrataDistribution {
    masses: [Probability; 4],
}

impl StrataDistribution {
    /// Masses in canonical order: (1,1), (0,0), (1,0), (0,1).
    pub fn new(
        always_survive: Probability,
        never_survive: Probability,
        harmed: Probability,
        saved: Probability,
    ) -> Result<Self, ModelError> {
        let masses = [always_survive, never_survive, harmed, saved];
        let sum: Rational = masses.iter().map(Probability::value).sum();
        if !sum.is_one() {
            return Err(ModelError::StrataMassSum(sum));
        }
        Ok(Self { masses })
    }

    /// All mass on one stratum.
    pub fn point(stratum: PrincipalStratum) -> Self {
        let mut masses = [Probability::zero(), Probability::zero(), Probability::zero(), Probability::zero()];
        masses[stratum.index()] = Probability::one();
        Self { masses }
    }

    pub fn mass(&self, stratum: PrincipalStratum) -> &Probability {
        &self.masses[stratum.index()]
    }

    /// `(stratum, mass)` pairs in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (PrincipalStratum, &Probability)> {
        PrincipalStratum::ALL.into_iter().zip(self.masses.iter())
    }

    /// Convex combination `sum_i w_i * d_i`; weights must sum to one.
    pub fn mixture<'a>(
        parts: impl IntoIterator<Item = (&'a Rational, &'a StrataDistribution)>,
    ) -> Result<Self, ModelError> {
        let mut acc = [Rational::zero(), Rational::zero(), Rational::zero(), Rational::zero()];
        for (w, d) in parts {
            for (slot, m) in acc.iter_mut().zip(d.masses.iter()) {
                *slot += w * m.value();
            }
        }
        let [a, b, c, d] = acc;
        Self::new(Probability::new(a)?, Probability::new(b)?, Probability::new(c)?, Probability::new(d)?)
    }
}

/// Utility of each binary outcome, `U(y)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OutcomeUtility {
    pub death: Rational,
    pub survival: Rational,
}

impl OutcomeUtility {
    pub fn new(death: Rational, survival: Rational) -> Self {
        Self { death, survival }
    }

    pub fn of(&self, outcome: BinaryOutcome) -> &Rational {
        match outcome {
            BinaryOutcome::Death => &self.death,
            BinaryOutcome::Survival => &self.survival,
        }
    }
}

impl Default for OutcomeUtility {
    fn default() -> Self {
        Self { death: Rational::zero(), survival: Rational::one() }
    }
}

/// Coefficients of the asymmetric relative utility: gains are scaled by
/// `gain_weight`, losses by `loss_weight`, and exact ties score `tie_value`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AsymmetricUtilitySpec {
    gain_weight: Rational,
    loss_weight: Rational,
    tie_value: Rational,
}

impl AsymmetricUtilitySpec {
    pub fn new(gain_weight: Rational, loss_weight: Rational, tie_value: Rational) -> Result<Self, ModelError> {
        if gain_weight <= Rational::zero() {
            return Err(ModelError::NonPositiveWeight { name: "gain_weight", value: gain_weight });
        }
        if loss_weight <= Rational::zero() {
            return Err(ModelError::NonPositiveWeight { name: "loss_weight", value: loss_weight });
        }
        Ok(Self { gain_weight, loss_weight, tie_value })
    }

    /// Gains and losses weighted equally; the rule collapses to `u1 - u0`.
    pub fn symmetric() -> Self {
        Self { gain_weight: Rational::one(), loss_weight: Rational::one(), tie_value: Rational::zero() }
    }

    pub fn gain_weight(&self) -> &Rational {
        &self.gain_weight
    }

    pub fn loss_weight(&self) -> &Rational {
        &self.loss_weight
    }

    pub fn tie_value(&self) -> &Rational {
        &self.tie_value
    }
}

impl Default for AsymmetricUtilitySpec {
    /// Gain weight 1/2, loss weight 1, tie 0: a loss counts twice a gain.
    fn default() -> Self {
        Self { gain_weight: ratio(1, 2), loss_weight: Rational::one(), tie_value: Rational::zero() }
    }
}

/// Law of a unit's outcome under one arm.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ArmOutcomeModel {
    /// Deterministic potential outcome.
    Degenerate(BinaryOutcome),
    /// Stochastic potential outcome with the given survival probability.
    Bernoulli(Probability),
}

impl ArmOutcomeModel {
    pub fn survival_probability(&self) -> Probability {
        match self {
            Self::Degenerate(BinaryOutcome::Survival) => Probability::one(),
            Self::Degenerate(BinaryOutcome::Death) => Probability::zero(),
            Self::Bernoulli(p) => p.clone(),
        }
    }
}

/// One kind of unit in a population: its share and its two arm laws.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnitType {
    pub label: String,
    pub weight: Probability,
    pub arm0: ArmOutcomeModel,
    pub arm1: ArmOutcomeModel,
    /// Joint law of `(y0, y1)` within this unit type. When absent the two
    /// arms are treated as independent wherever a joint is needed.
    pub cross_arm_dependence: Option<StrataDistribution>,
}

impl UnitType {
    pub fn new(label: impl Into<String>, weight: Probability, arm0: ArmOutcomeModel, arm1: ArmOutcomeModel) -> Self {
        Self { label: label.into(), weight, arm0, arm1, cross_arm_dependence: None }
    }

    pub fn with_dependence(mut self, joint: StrataDistribution) -> Self {
        self.cross_arm_dependence = Some(joint);
        self
    }

    /// Joint law of `(y0, y1)` for a single unit of this type.
    pub fn joint(&self) -> StrataDistribution {
        match &self.cross_arm_dependence {
            Some(d) => d.clone(),
            None => crate::strata::strata_from_independent_marginals(
                &self.arm0.survival_probability(),
                &self.arm1.survival_probability(),
            ),
        }
    }
}

/// A problem in a [`PopulationModel`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Violation {
    EmptyPopulation,
    WeightSum(Rational),
    MarginalMismatch { label: String, arm: u8, expected: Rational, found: Rational },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EmptyPopulation => write!(f, "population has no unit types"),
            Self::WeightSum(s) => write!(f, "weights sum ≠ 1 (sum is {s})"),
            Self::MarginalMismatch { label, arm, expected, found } => write!(
                f,
                "marginal mismatch in unit type {label:?}: arm {arm} survival is {expected} but cross-arm dependence implies {found}"
            ),
        }
    }
}

/// A weighted mixture of unit types; the common input of the population
/// evaluator and the nested simulator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PopulationModel {
    pub unit_types: Vec<UnitType>,
    pub arm0_label: String,
    pub arm1_label: String,
}

impl PopulationModel {
    pub fn new(unit_types: Vec<UnitType>) -> Self {
        Self { unit_types, arm0_label: "arm 0".into(), arm1_label: "arm 1".into() }
    }

    pub fn with_arm_labels(mut self, arm0: impl Into<String>, arm1: impl Into<String>) -> Self {
        self.arm0_label = arm0.into();
        self.arm1_label = arm1.into();
        self
    }

    /// Everything wrong with the model; empty when valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.unit_types.is_empty() {
            out.push(Violation::EmptyPopulation);
        }
        let sum: Rational = self.unit_types.iter().map(|t| t.weight.value()).sum();
        if !self.unit_types.is_empty() && !sum.is_one() {
            out.push(Violation::WeightSum(sum));
        }
        for t in &self.unit_types {
            let Some(joint) = &t.cross_arm_dependence else { continue };
            let (p0, p1) = crate::strata::marginals_of(joint);
            for (arm, model, found) in [(0, &t.arm0, p0), (1, &t.arm1, p1)] {
                let expected = model.survival_probability();
                if expected != found {
                    out.push(Violation::MarginalMismatch {
                        label: t.label.clone(),
                        arm,
                        expected: expected.into_inner(),
                        found: found.into_inner(),
                    });
                }
            }
        }
        out
    }

    pub fn ensure_valid(&self) -> Result<(), ModelError> {
        let violations = self.validate();
        if violations.is_empty() { Ok(()) } else { Err(ModelError::InvalidPopulation(violations)) }
    }

    /// Population-level survival probabilities `(P(y0 = 1), P(y1 = 1))`.
    pub fn marginal_survival(&self) -> (Rational, Rational) {
        let mut p0 = Rational::zero();
        let mut p1 = Rational::zero();
        for t in &self.unit_types {
            p0 += t.weight.value() * t.arm0.survival_probability().value();
            p1 += t.weight.value() * t.arm1.survival_probability().value();
        }
        (p0, p1)
    }

    /// The joint law of `(y0, y1)` for a unit drawn at random, treating every
    /// potential outcome as a fixed latent value.
    pub fn implied_strata(&self) -> Result<StrataDistribution, ModelError> {
        self.ensure_valid()?;
        let joints: Vec<_> = self.unit_types.iter().map(|t| (t.weight.value().clone(), t.joint())).collect();
        StrataDistribution::mixture(joints.iter().map(|(w, d)| (w, d)))
    }

    /// Merges unit types with identical arm laws and dependence, summing
    /// their weights. Labels of merged types are joined with `+`; first
    /// occurrence fixes the order.
    pub fn merged(&self) -> PopulationModel {
        let mut out: Vec<UnitType> = Vec::new();
        for t in &self.unit_types {
            match out.iter_mut().find(|o| {
                o.arm0 == t.arm0 && o.arm1 == t.arm1 && o.cross_arm_dependence == t.cross_arm_dependence
            }) {
                Some(o) => {
                    o.weight = Probability(o.weight.value() + t.weight.value());
                    o.label.push('+');
                    o.label.push_str(&t.label);
                }
                None => out.push(t.clone()),
            }
        }
        PopulationModel { unit_types: out, arm0_label: self.arm0_label.clone(), arm1_label: self.arm1_label.clone() }
    }
}

/// Report-style validation; an empty list means the model is valid.
pub fn validate_population(model: &PopulationModel) -> Vec<Violation> {
    model.validate()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: i64, d: i64) -> Probability {
        Probability::from_ratio(n, d).unwrap()
    }

    #[test]
    fn rational_normalizes() {
        assert_eq!(rational(6, 42).unwrap(), ratio(1, 7));
        let half = rational(-2, -4).unwrap();
        assert_eq!((half.numer().clone(), half.denom().clone()), (BigInt::from(1), BigInt::from(2)));
        let zero = rational(0, 5).unwrap();
        assert_eq!((zero.numer().clone(), zero.denom().clone()), (BigInt::from(0), BigInt::from(1)));
        let neg = rational(3, -6).unwrap();
        assert_eq!(*neg.numer(), BigInt::from(-1));
        assert_eq!(rational(1, 0), Err(ModelError::ZeroDenominator));
    }

    #[test]
    fn probability_range() {
        assert!(Probability::from_ratio(7, 6).is_err());
        assert!(Probability::from_ratio(-1, 6).is_err());
        assert_eq!(p(1, 6).complement(), p(5, 6));
    }

    #[test]
    fn strata_must_sum_to_one() {
        assert!(StrataDistribution::new(p(1, 2), p(1, 2), p(1, 42), p(0, 1)).is_err());
        let d = StrataDistribution::new(p(30, 42), p(1, 42), p(5, 42), p(6, 42)).unwrap();
        assert_eq!(d.mass(PrincipalStratum::SAVED), &p(1, 7));
        assert_eq!(d.iter().count(), 4);
    }

    #[test]
    fn asymmetry_weights_positive() {
        assert!(AsymmetricUtilitySpec::new(ratio(0, 1), ratio(1, 1), ratio(0, 1)).is_err());
        assert!(AsymmetricUtilitySpec::new(ratio(1, 2), ratio(-1, 1), ratio(0, 1)).is_err());
        let d = AsymmetricUtilitySpec::default();
        assert_eq!(d.gain_weight(), &ratio(1, 2));
        assert_eq!(d.loss_weight(), &ratio(1, 1));
    }

    #[test]
    fn valid_single_unit_population() {
        let m = PopulationModel::new(vec![UnitType::new(
            "all",
            Probability::one(),
            ArmOutcomeModel::Bernoulli(p(5, 6)),
            ArmOutcomeModel::Bernoulli(p(6, 7)),
        )]);
        assert!(validate_population(&m).is_empty());
    }

    #[test]
    fn weights_short_of_one() {
        let m = PopulationModel::new(vec![UnitType::new(
            "most",
            p(41, 42),
            ArmOutcomeModel::Bernoulli(p(5, 6)),
            ArmOutcomeModel::Bernoulli(p(6, 7)),
        )]);
        let v = validate_population(&m);
        assert_eq!(v, vec![Violation::WeightSum(ratio(41, 42))]);
        assert!(v[0].to_string().contains("weights sum ≠ 1"));
    }

    #[test]
    fn dependence_marginal_mismatch() {
        let quarter = || p(1, 4);
        let joint = StrataDistribution::new(quarter(), quarter(), quarter(), quarter()).unwrap();
        let m = PopulationModel::new(vec![UnitType::new(
            "u",
            Probability::one(),
            ArmOutcomeModel::Bernoulli(p(1, 3)),
            ArmOutcomeModel::Bernoulli(p(1, 2)),
        )
        .with_dependence(joint)]);
        let v = validate_population(&m);
        assert_eq!(v.len(), 1);
        assert!(matches!(&v[0], Violation::MarginalMismatch { arm: 0, .. }));
        assert!(v[0].to_string().contains("marginal mismatch"));
        assert!(m.ensure_valid().is_err());
    }

    #[test]
    fn empty_population() {
        assert_eq!(PopulationModel::new(vec![]).validate(), vec![Violation::EmptyPopulation]);
    }

    #[test]
    fn merging_identical_types() {
        let t = |l: &str, w| UnitType::new(l, p(w, 4), ArmOutcomeModel::Degenerate(BinaryOutcome::Survival), ArmOutcomeModel::Bernoulli(p(1, 2)));
        let m = PopulationModel::new(vec![t("a", 1), t("b", 2), t("c", 1)]).merged();
        assert_eq!(m.unit_types.len(), 1);
        assert_eq!(m.unit_types[0].weight, Probability::one());
        assert_eq!(m.unit_types[0].label, "a+b+c");
    }
}
