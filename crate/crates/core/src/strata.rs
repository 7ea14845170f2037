//! Constructors and bookkeeping for principal-strata distributions.

use num_traits::One;

use crate::error::ModelError;
use crate::model::{Probability, PrincipalStratum, Rational, StrataDistribution};

/// Probability that the chamber is loaded under each arm. Loaded means
/// death, so `y(phi = 0) = 1` and `y(phi = 1) = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChamberParameterization {
    pub phi0_loaded_prob: Probability,
    pub phi1_loaded_prob: Probability,
    independent: bool,
}

impl ChamberParameterization {
    /// Only independent chambers are supported.
    pub fn new(phi0_loaded_prob: Probability, phi1_loaded_prob: Probability, independent: bool) -> Result<Self, ModelError> {
        if !independent {
            return Err(ModelError::CorrelatedChambers);
        }
        Ok(Self { phi0_loaded_prob, phi1_loaded_prob, independent })
    }

    pub fn independent(phi0_loaded_prob: Probability, phi1_loaded_prob: Probability) -> Self {
        Self { phi0_loaded_prob, phi1_loaded_prob, independent: true }
    }

    pub fn is_independent(&self) -> bool {
        self.independent
    }
}

/// Strata of two independent arms with survival probabilities `p0`, `p1`.
pub fn strata_from_independent_marginals(p0: &Probability, p1: &Probability) -> StrataDistribution {
    let (s0, s1) = (p0.value(), p1.value());
    let (d0, d1) = (p0.complement(), p1.complement());
    let mass = |x: Rational| Probability::new(x).expect("product of probabilities");
    StrataDistribution::new(
        mass(s0 * s1),
        mass(d0.value() * d1.value()),
        mass(s0 * d1.value()),
        mass(d0.value() * s1),
    )
    .expect("independent product sums to one")
}

/// Validated strata from explicit masses, in the order (1,1), (0,0), (1,0), (0,1).
pub fn strata_from_joint(
    mass_11: Probability,
    mass_00: Probability,
    mass_10: Probability,
    mass_01: Probability,
) -> Result<StrataDistribution, ModelError> {
    StrataDistribution::new(mass_11, mass_00, mass_10, mass_01)
}

/// Marginal survival probabilities `(P(y0 = 1), P(y1 = 1))`.
pub fn marginals_of(d: &StrataDistribution) -> (Probability, Probability) {
    let both = d.mass(PrincipalStratum::ALWAYS_SURVIVE).value();
    let p0 = both + d.mass(PrincipalStratum::HARMED).value();
    let p1 = both + d.mass(PrincipalStratum::SAVED).value();
    (
        Probability::new(p0).expect("sub-sum of a distribution"),
        Probability::new(p1).expect("sub-sum of a distribution"),
    )
}

pub fn strata_from_chambers(c: &ChamberParameterization) -> StrataDistribution {
    debug_assert!(c.independent);
    strata_from_independent_marginals(&c.phi0_loaded_prob.complement(), &c.phi1_loaded_prob.complement())
}

/// Survival probability from a loaded-chamber probability.
pub fn survival_from_loaded(loaded: &Probability) -> Probability {
    Probability::new(Rational::one() - loaded.value()).expect("complement")
}
