//! Builds [`Report`]s from scenarios: the glue between scenario files, the
//! exact evaluators, the simulator and the lottery checks.

use crate::error::ModelError;
use crate::lottery::coherence_check;
use crate::model::{ArmOutcomeModel, PopulationModel, Probability, UnitType};
use crate::report::{BreakdownRow, CoherenceSummary, ParadoxSummary, Report, SimulationSummary};
use crate::scenario::{ScenarioFile, ScenarioKind, ScenarioPayload};
use crate::simulation::{simulate_deterministic, simulate_population, SimulationConfig, SimulationError};
use crate::utility::{evaluate_deterministic, evaluate_population, evaluate_stochastic, paradox_report, Parameterization};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalysisError {
    #[error("command `{command}` does not apply to {kind} scenarios")]
    Incompatible { command: &'static str, kind: ScenarioKind },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Simulation(#[from] SimulationError),
}

fn views(s: &ScenarioFile, command: &'static str) -> Result<(crate::model::StrataDistribution, PopulationModel), AnalysisError> {
    let incompatible = || AnalysisError::Incompatible { command, kind: s.kind() };
    let deterministic = s.deterministic_view().ok_or_else(incompatible)??;
    let population = s.population_view().ok_or_else(incompatible)?;
    Ok((deterministic, population))
}

/// The whole population collapsed to one unit type with the population's
/// marginal survival probabilities.
pub fn integrated_population(m: &PopulationModel) -> PopulationModel {
    let (p0, p1) = m.marginal_survival();
    let arm = |p| ArmOutcomeModel::Bernoulli(Probability::new(p).expect("mixture of probabilities"));
    PopulationModel::new(vec![UnitType::new("population", Probability::one(), arm(p0), arm(p1))])
        .with_arm_labels(m.arm0_label.clone(), m.arm1_label.clone())
}

/// Exact values for the selected evaluators (all three when `None`), plus
/// the classical effect.
pub fn evaluate_scenario(s: &ScenarioFile, only: Option<Parameterization>) -> Result<Report, AnalysisError> {
    let (deterministic, population) = views(s, "evaluate")?;
    let (u, spec) = (s.outcome_utility(), s.asymmetry_spec());
    let mut report = Report::new(&s.name);
    report.variation_locus = s.variation_locus;
    let mut classical = None;
    for which in Parameterization::ALL {
        if only.is_some_and(|o| o != which) {
            continue;
        }
        let result = match which {
            Parameterization::Deterministic => evaluate_deterministic(&deterministic, &u, &spec),
            Parameterization::Stochastic => evaluate_stochastic(&population, &u, &spec)?,
            Parameterization::Population => {
                let r = evaluate_population(&population, &u, &spec)?;
                report.breakdown = r
                    .per_unit_breakdown
                    .iter()
                    .map(|row| BreakdownRow {
                        label: row.label.clone(),
                        weight: row.weight.clone(),
                        relative_utility: row.relative_utility.clone(),
                    })
                    .collect();
                r
            }
        };
        report.results.push((which.name().to_string(), result.expected_relative_utility));
        classical = Some(result.classical_effect);
    }
    if let Some(c) = classical {
        report.results.push(("classical_effect".into(), c));
    }
    Ok(report)
}

pub fn paradox_scenario(s: &ScenarioFile) -> Result<Report, AnalysisError> {
    let (deterministic, population) = views(s, "paradox")?;
    let (u, spec) = (s.outcome_utility(), s.asymmetry_spec());
    let p = paradox_report(&population, &deterministic, &u, &spec)?;
    let mut report = Report::new(&s.name);
    report.variation_locus = s.variation_locus;
    report.results.push(("deterministic".into(), p.deterministic_value.clone()));
    report.results.push(("population".into(), p.model_value.clone()));
    report.paradox = Some(ParadoxSummary::from(&p));
    Ok(report)
}

pub fn lottery_scenario(s: &ScenarioFile) -> Result<Report, AnalysisError> {
    let ScenarioPayload::LotteryPair { left, right, penalty } = &s.payload else {
        return Err(AnalysisError::Incompatible { command: "lottery", kind: s.kind() });
    };
    let c = coherence_check(left, right, penalty);
    let mut report = Report::new(&s.name);
    report.variation_locus = s.variation_locus;
    report.results = vec![
        ("nm_left".into(), c.nm_values.0),
        ("nm_right".into(), c.nm_values.1),
        ("penalized_left".into(), c.penalized_values.0),
        ("penalized_right".into(), c.penalized_values.1),
    ];
    report.coherence = Some(CoherenceSummary { same_distribution: c.same_distribution, violation: c.violation });
    Ok(report)
}

/// Monte Carlo estimate for one evaluator, alongside its exact value.
pub fn simulate_scenario(
    s: &ScenarioFile,
    which: Parameterization,
    cfg: &SimulationConfig,
) -> Result<Report, AnalysisError> {
    let (deterministic, population) = views(s, "simulate")?;
    let (u, spec) = (s.outcome_utility(), s.asymmetry_spec());
    let (estimate, inner) = match which {
        Parameterization::Deterministic => (simulate_deterministic(&deterministic, &u, &spec, cfg)?, None),
        Parameterization::Stochastic => {
            (simulate_population(&integrated_population(&population), &u, &spec, cfg)?, Some(cfg.inner_samples))
        }
        Parameterization::Population => (simulate_population(&population, &u, &spec, cfg)?, Some(cfg.inner_samples)),
    };
    let mut report = Report::new(&s.name);
    report.variation_locus = s.variation_locus;
    if let Some(t) = &estimate.exact_target {
        report.results.push((which.name().to_string(), t.clone()));
    }
    report.simulation = Some(SimulationSummary {
        evaluator: which.name().to_string(),
        mean: estimate.mean,
        stderr: estimate.standard_error,
        replications: estimate.replications,
        seed: cfg.seed,
        parallelism: cfg.parallelism as u64,
        inner_samples: inner,
        target: estimate.exact_target,
    });
    Ok(report)
}
