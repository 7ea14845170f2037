//! The asymmetric relative utility and the evaluators built on it.
//!
//! Two orderings of the same ingredients are provided:
//!
//! * [`evaluate_deterministic`] treats `(y0, y1)` as fixed latent values:
//!   the asymmetric rule is applied stratum by stratum and the results are
//!   then averaged over the strata distribution.
//! * [`evaluate_stochastic_unit`] treats each `y^z` as a random variable:
//!   its expected utility is taken first and the asymmetric rule is applied
//!   to the two expectations.
//!
//! [`evaluate_population`] combines both. Within a unit type uncertainty is
//! collapsed as in the stochastic evaluator; across unit types the rule sees
//! every type separately. Outside the symmetric case these orderings do not
//! commute, which is what [`paradox_report`] surfaces.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Marginals, ModelError};
use crate::model::{
    ArmOutcomeModel, AsymmetricUtilitySpec, OutcomeUtility, PopulationModel, Probability, Rational,
    StrataDistribution,
};
use crate::strata::marginals_of;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parameterization {
    Deterministic,
    Stochastic,
    Population,
}

impl Parameterization {
    pub const ALL: [Self; 3] = [Self::Deterministic, Self::Stochastic, Self::Population];

    pub fn name(self) -> &'static str {
        match self {
            Self::Deterministic => "deterministic",
            Self::Stochastic => "stochastic",
            Self::Population => "population",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == s)
    }
}

impl fmt::Display for Parameterization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One row of an evaluation: a stratum or unit type, its weight and its
/// relative utility.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitContribution {
    pub label: String,
    pub weight: Rational,
    pub relative_utility: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvaluationResult {
    /// Always the weight-weighted sum of `per_unit_breakdown`.
    pub expected_relative_utility: Rational,
    pub parameterization: Parameterization,
    pub per_unit_breakdown: Vec<UnitContribution>,
    /// `E[u(y1)] - E[u(y0)]`.
    pub classical_effect: Rational,
}

impl EvaluationResult {
    fn from_breakdown(parameterization: Parameterization, rows: Vec<UnitContribution>, classical_effect: Rational) -> Self {
        let expected_relative_utility = rows.iter().map(|r| &r.weight * &r.relative_utility).sum();
        Self { expected_relative_utility, parameterization, per_unit_breakdown: rows, classical_effect }
    }
}

/// Relative utility of arm 1 against arm 0 given their outcome utilities.
pub fn asymmetric_relative_utility(u0: &Rational, u1: &Rational, spec: &AsymmetricUtilitySpec) -> Rational {
    match u1.cmp(u0) {
        Ordering::Equal => spec.tie_value().clone(),
        Ordering::Greater => spec.gain_weight() * (u1 - u0),
        Ordering::Less => -(spec.loss_weight() * (u0 - u1)),
    }
}

/// `E[u(y)]` under an arm's outcome law.
pub fn classical_expected_utility(arm: &ArmOutcomeModel, u: &OutcomeUtility) -> Rational {
    expected_utility(&arm.survival_probability(), u)
}

fn expected_utility(survival: &Probability, u: &OutcomeUtility) -> Rational {
    &u.death + survival.value() * (&u.survival - &u.death)
}

/// Averages the asymmetric rule over fixed potential outcomes.
pub fn evaluate_deterministic(d: &StrataDistribution, u: &OutcomeUtility, spec: &AsymmetricUtilitySpec) -> EvaluationResult {
    let rows = d
        .iter()
        .map(|(stratum, mass)| UnitContribution {
            label: stratum.to_string(),
            weight: mass.value().clone(),
            relative_utility: asymmetric_relative_utility(u.of(stratum.y0), u.of(stratum.y1), spec),
        })
        .collect();
    let (p0, p1) = marginals_of(d);
    let classical = expected_utility(&p1, u) - expected_utility(&p0, u);
    EvaluationResult::from_breakdown(Parameterization::Deterministic, rows, classical)
}

/// Collapses each arm to its expected utility, then applies the asymmetric rule.
pub fn evaluate_stochastic_unit(
    arm0: &ArmOutcomeModel,
    arm1: &ArmOutcomeModel,
    u: &OutcomeUtility,
    spec: &AsymmetricUtilitySpec,
) -> Rational {
    asymmetric_relative_utility(&classical_expected_utility(arm0, u), &classical_expected_utility(arm1, u), spec)
}

/// Per unit type stochastic evaluation, weighted across unit types.
pub fn evaluate_population(
    m: &PopulationModel,
    u: &OutcomeUtility,
    spec: &AsymmetricUtilitySpec,
) -> Result<EvaluationResult, ModelError> {
    m.ensure_valid()?;
    let rows = m
        .unit_types
        .iter()
        .map(|t| UnitContribution {
            label: t.label.clone(),
            weight: t.weight.value().clone(),
            relative_utility: evaluate_stochastic_unit(&t.arm0, &t.arm1, u, spec),
        })
        .collect();
    Ok(EvaluationResult::from_breakdown(Parameterization::Population, rows, classical_effect(m, u)))
}

/// Integrates every source of variation into population-level survival
/// probabilities before applying the asymmetric rule, as if the whole
/// population were one unit type with stochastic outcomes.
pub fn evaluate_stochastic(
    m: &PopulationModel,
    u: &OutcomeUtility,
    spec: &AsymmetricUtilitySpec,
) -> Result<EvaluationResult, ModelError> {
    m.ensure_valid()?;
    let (p0, p1) = m.marginal_survival();
    let arm = |p: Rational| ArmOutcomeModel::Bernoulli(Probability::new(p).expect("mixture of probabilities"));
    let row = UnitContribution {
        label: "population".into(),
        weight: Rational::from_integer(1.into()),
        relative_utility: evaluate_stochastic_unit(&arm(p0), &arm(p1), u, spec),
    };
    Ok(EvaluationResult::from_breakdown(Parameterization::Stochastic, vec![row], classical_effect(m, u)))
}

fn classical_effect(m: &PopulationModel, u: &OutcomeUtility) -> Rational {
    m.unit_types
        .iter()
        .map(|t| t.weight.value() * (classical_expected_utility(&t.arm1, u) - classical_expected_utility(&t.arm0, u)))
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dominance {
    Arm1Dominates,
    Arm0Dominates,
    Tie,
}

impl Dominance {
    pub fn from_survival(p0: &Rational, p1: &Rational) -> Self {
        match p1.cmp(p0) {
            Ordering::Greater => Self::Arm1Dominates,
            Ordering::Less => Self::Arm0Dominates,
            Ordering::Equal => Self::Tie,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Arm1Dominates => "arm1_dominates",
            Self::Arm0Dominates => "arm0_dominates",
            Self::Tie => "tie",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [Self::Arm1Dominates, Self::Arm0Dominates, Self::Tie].into_iter().find(|d| d.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Recommendation {
    Switch,
    Stay,
    /// Expected relative utility exactly zero. No action is implied.
    Indifferent,
}

impl Recommendation {
    pub fn from_value(v: &Rational) -> Self {
        if v.is_zero() {
            Self::Indifferent
        } else if v.is_positive() {
            Self::Switch
        } else {
            Self::Stay
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Switch => "switch",
            Self::Stay => "stay",
            Self::Indifferent => "indifferent",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [Self::Switch, Self::Stay, Self::Indifferent].into_iter().find(|r| r.name() == s)
    }
}

/// True when the recommendation goes against the arm with higher survival.
pub fn contradicts(dominance: Dominance, recommendation: Recommendation) -> bool {
    matches!(
        (dominance, recommendation),
        (Dominance::Arm1Dominates, Recommendation::Stay) | (Dominance::Arm0Dominates, Recommendation::Switch)
    )
}

/// Verdict of comparing the asymmetric recommendation against dominance.
///
/// `recommendation` and `contradiction` refer to the deterministic view
/// supplied by the caller; the `model_*` fields to [`evaluate_population`]
/// on the population model itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParadoxReport {
    pub dominance_direction: Dominance,
    pub recommendation: Recommendation,
    pub contradiction: bool,
    pub deterministic_value: Rational,
    pub model_value: Rational,
    pub model_recommendation: Recommendation,
    pub model_contradiction: bool,
    pub narrative: String,
}

pub fn paradox_report(
    m: &PopulationModel,
    deterministic_view: &StrataDistribution,
    u: &OutcomeUtility,
    spec: &AsymmetricUtilitySpec,
) -> Result<ParadoxReport, ModelError> {
    m.ensure_valid()?;
    let (model_p0, model_p1) = m.marginal_survival();
    let (view_p0, view_p1) = marginals_of(deterministic_view);
    if view_p0.value() != &model_p0 || view_p1.value() != &model_p1 {
        return Err(ModelError::MarginalMismatch {
            view: Box::new(Marginals { p0: view_p0.into_inner(), p1: view_p1.into_inner() }),
            model: Box::new(Marginals { p0: model_p0, p1: model_p1 }),
        });
    }

    let dominance_direction = Dominance::from_survival(&model_p0, &model_p1);
    let deterministic_value = evaluate_deterministic(deterministic_view, u, spec).expected_relative_utility;
    let recommendation = Recommendation::from_value(&deterministic_value);
    let contradiction = contradicts(dominance_direction, recommendation);
    let model_value = evaluate_population(m, u, spec)?.expected_relative_utility;
    let model_recommendation = Recommendation::from_value(&model_value);
    let model_contradiction = contradicts(dominance_direction, model_recommendation);

    let dominance_text = match dominance_direction {
        Dominance::Arm1Dominates => format!("{} has the higher survival probability ({model_p1} vs {model_p0})", m.arm1_label),
        Dominance::Arm0Dominates => format!("{} has the higher survival probability ({model_p0} vs {model_p1})", m.arm0_label),
        Dominance::Tie => format!("both arms have survival probability {model_p0}"),
    };
    let verdict = |c: bool| if c { "contradicts dominance" } else { "is consistent with dominance" };
    let narrative = format!(
        "{dominance_text}; fixed potential outcomes give {deterministic_value} ({}), which {}; \
         the population model gives {model_value} ({}), which {}",
        recommendation.name(),
        verdict(contradiction),
        model_recommendation.name(),
        verdict(model_contradiction),
    );

    Ok(ParadoxReport {
        dominance_direction,
        recommendation,
        contradiction,
        deterministic_value,
        model_value,
        model_recommendation,
        model_contradiction,
        narrative,
    })
}
