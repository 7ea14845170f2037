//! Decision analysis under an asymmetric counterfactual utility.
//!
//! A switch from arm 0 (the status quo) to arm 1 is scored from the pair
//! of potential outcomes `(y0, y1)`: a gain counts `gain_weight` times its
//! size, a loss `loss_weight` times (defaults 1/2 and 1). Because the score
//! depends on an outcome that is never realized, the answer depends on how
//! the potential outcomes are parameterized:
//!
//! * fixed latent outcomes, averaged over principal strata
//!   ([`utility::evaluate_deterministic`]),
//! * random outcomes collapsed to their expectations first
//!   ([`utility::evaluate_stochastic_unit`]),
//! * a population of unit types mixing both ([`utility::evaluate_population`]).
//!
//! All arithmetic is exact. [`simulation`] provides a seeded Monte Carlo
//! oracle, [`lottery`] the compound-lottery coherence check, [`scenario`]
//! the file format and built-in scenarios, and [`cli`] the `cfu` binary.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod fraction;
pub mod lottery;
pub mod model;
pub mod report;
pub mod scenario;
pub mod simulation;
pub mod strata;
pub mod utility;

pub use error::ModelError;
pub use model::{
    rational, ratio, ArmOutcomeModel, AsymmetricUtilitySpec, BinaryOutcome, OutcomeUtility, PopulationModel,
    PrincipalStratum, Probability, Rational, StrataDistribution, UnitType,
};
