//! Seeded Monte Carlo oracle for the exact evaluators.
//!
//! Replications are split across `parallelism` streams. Stream `i` is a
//! ChaCha8 generator seeded with `seed` and switched to stream number `i`,
//! so every stream is reproducible in isolation. Per-stream accumulators
//! are merged in stream order, which makes the result bitwise identical
//! whether the streams run on one thread or many.
//!
//! The nested population simulator draws a unit type per replication and
//! then `inner_samples` outcomes per arm; the sum of `K` Bernoulli draws is
//! sampled directly as its binomial count.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Binomial;

use crate::error::ModelError;
use crate::model::{
    rational_to_f64, ArmOutcomeModel, AsymmetricUtilitySpec, OutcomeUtility, PopulationModel, Rational,
    StrataDistribution,
};
use crate::utility::asymmetric_relative_utility;

pub const DEFAULT_REPLICATIONS: u64 = 1_000_000;
pub const DEFAULT_INNER_SAMPLES: u64 = 1024;

/// How the inner draws of the two arms relate within one replication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum InnerCoupling {
    /// Both arms read the same uniforms: draw `k` survives under arm `z`
    /// iff `U_k < p_z`. Each arm's inner mean has its usual binomial law,
    /// and the sign of the difference always matches `p1 - p0`.
    #[default]
    Common,
    /// Independent draws per arm. The asymmetric rule applied to noisy
    /// inner means is then biased near ties; the bias vanishes as `K` grows.
    Independent,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimulationConfig {
    pub replications: u64,
    pub seed: u64,
    pub parallelism: usize,
    pub inner_samples: u64,
    pub inner_coupling: InnerCoupling,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            replications: DEFAULT_REPLICATIONS,
            seed: 0,
            parallelism: 1,
            inner_samples: DEFAULT_INNER_SAMPLES,
            inner_coupling: InnerCoupling::Common,
        }
    }
}

impl SimulationConfig {
    pub fn new(replications: u64, seed: u64) -> Self {
        Self { replications, seed, ..Self::default() }
    }

    pub fn with_parallelism(mut self, parallelism: usize) -> Self {
        self.parallelism = parallelism;
        self
    }

    pub fn with_inner_samples(mut self, k: u64) -> Self {
        self.inner_samples = k;
        self
    }

    pub fn with_coupling(mut self, coupling: InnerCoupling) -> Self {
        self.inner_coupling = coupling;
        self
    }

    fn check(&self) -> Result<(), SimulationError> {
        if self.replications == 0 {
            return Err(SimulationError::Config("replications must be at least 1"));
        }
        if self.parallelism == 0 {
            return Err(SimulationError::Config("parallelism must be at least 1"));
        }
        if self.inner_samples == 0 {
            return Err(SimulationError::Config("inner sample size must be at least 1"));
        }
        Ok(())
    }

    fn stream_sizes(&self) -> Vec<u64> {
        let k = self.parallelism as u64;
        let (base, rem) = (self.replications / k, self.replications % k);
        (0..k).map(|i| base + u64::from(i < rem)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimulationError {
    #[error("invalid simulation config: {0}")]
    Config(&'static str),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationEstimate {
    pub mean: f64,
    pub standard_error: f64,
    pub replications: u64,
    pub exact_target: Option<Rational>,
}

impl SimulationEstimate {
    /// `|mean - target| <= sigmas * standard_error`; false without a target.
    pub fn within_sigmas(&self, sigmas: f64) -> bool {
        self.z_score().is_some_and(|z| z <= sigmas)
    }

    /// `|mean - target| / standard_error`; zero when both are zero.
    pub fn z_score(&self) -> Option<f64> {
        let target = rational_to_f64(self.exact_target.as_ref()?);
        let diff = (self.mean - target).abs();
        Some(if diff == 0.0 { 0.0 } else { diff / self.standard_error })
    }
}

/// Welford running moments; merged with Chan's pairwise update.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.n as f64 / n as f64;
        let m2 = self.m2 + other.m2 + delta * delta * (self.n as f64) * (other.n as f64) / n as f64;
        Moments { n, mean, m2 }
    }

    fn standard_error(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let var = (self.m2 / (self.n - 1) as f64).max(0.0);
        (var / self.n as f64).sqrt()
    }
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn run_streams<F>(cfg: &SimulationConfig, draw: F) -> Moments
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    let sizes = cfg.stream_sizes();
    let one_stream = |i: usize, n: u64| {
        let mut rng = stream_rng(cfg.seed, i as u64);
        let mut m = Moments::default();
        for _ in 0..n {
            m.push(draw(&mut rng));
        }
        m
    };
    let parts: Vec<Moments> = if sizes.len() == 1 {
        vec![one_stream(0, sizes[0])]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = sizes
                .iter()
                .enumerate()
                .map(|(i, &n)| {
                    let one_stream = &one_stream;
                    s.spawn(move || one_stream(i, n))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("simulation stream panicked")).collect()
        })
    };
    parts.into_iter().fold(Moments::default(), Moments::merge)
}

/// Draws a stratum per replication and scores it with the asymmetric rule.
pub fn simulate_deterministic(
    d: &StrataDistribution,
    u: &OutcomeUtility,
    spec: &AsymmetricUtilitySpec,
    cfg: &SimulationConfig,
) -> Result<SimulationEstimate, SimulationError> {
    cfg.check()?;
    let (weights, scores): (Vec<f64>, Vec<f64>) = d
        .iter()
        .map(|(s, m)| (m.to_f64(), rational_to_f64(&asymmetric_relative_utility(u.of(s.y0), u.of(s.y1), spec))))
        .unzip();
    let index = WeightedIndex::new(&weights).expect("strata masses sum to one");
    let moments = run_streams(cfg, |rng| scores[index.sample(rng)]);
    let exact = crate::utility::evaluate_deterministic(d, u, spec).expected_relative_utility;
    Ok(SimulationEstimate {
        mean: moments.mean,
        standard_error: moments.standard_error(),
        replications: cfg.replications,
        exact_target: Some(exact),
    })
}

struct SimUnit {
    p0: f64,
    p1: f64,
}

fn binomial(rng: &mut ChaCha8Rng, n: u64, p: f64) -> u64 {
    if n == 0 || p <= 0.0 {
        0
    } else if p >= 1.0 {
        n
    } else {
        Binomial::new(n, p).expect("valid binomial").sample(rng)
    }
}

/// Survival counts out of `k` for both arms.
fn inner_counts(rng: &mut ChaCha8Rng, unit: &SimUnit, k: u64, coupling: InnerCoupling) -> (u64, u64) {
    match coupling {
        InnerCoupling::Independent => (binomial(rng, k, unit.p0), binomial(rng, k, unit.p1)),
        InnerCoupling::Common => {
            let (lo, hi) = if unit.p0 <= unit.p1 { (unit.p0, unit.p1) } else { (unit.p1, unit.p0) };
            let below_lo = binomial(rng, k, lo);
            let between = if lo >= 1.0 { 0 } else { binomial(rng, k - below_lo, (hi - lo) / (1.0 - lo)) };
            let below_hi = below_lo + between;
            if unit.p0 <= unit.p1 { (below_lo, below_hi) } else { (below_hi, below_lo) }
        }
    }
}

fn asymmetric_f64(u0: f64, u1: f64, gain: f64, loss: f64, tie: f64) -> f64 {
    if u1 > u0 {
        gain * (u1 - u0)
    } else if u1 < u0 {
        -loss * (u0 - u1)
    } else {
        tie
    }
}

/// Two-level simulation: draw a unit type, estimate each arm's expected
/// utility from `inner_samples` draws, apply the asymmetric rule to the two
/// estimates.
pub fn simulate_population(
    m: &PopulationModel,
    u: &OutcomeUtility,
    spec: &AsymmetricUtilitySpec,
    cfg: &SimulationConfig,
) -> Result<SimulationEstimate, SimulationError> {
    cfg.check()?;
    m.ensure_valid()?;
    let units: Vec<SimUnit> = m
        .unit_types
        .iter()
        .map(|t| {
            let p = |arm: &ArmOutcomeModel| arm.survival_probability().to_f64();
            SimUnit { p0: p(&t.arm0), p1: p(&t.arm1) }
        })
        .collect();
    let weights: Vec<f64> = m.unit_types.iter().map(|t| t.weight.to_f64()).collect();
    let index = WeightedIndex::new(&weights).expect("weights sum to one");
    let (u_death, u_survival) = (rational_to_f64(&u.death), rational_to_f64(&u.survival));
    let (gain, loss, tie) =
        (rational_to_f64(spec.gain_weight()), rational_to_f64(spec.loss_weight()), rational_to_f64(spec.tie_value()));
    let k = cfg.inner_samples;
    let utility_of = |count: u64| u_death + (u_survival - u_death) * (count as f64 / k as f64);

    let moments = run_streams(cfg, |rng| {
        let unit = if units.len() == 1 { &units[0] } else { &units[index.sample(rng)] };
        let (c0, c1) = inner_counts(rng, unit, k, cfg.inner_coupling);
        asymmetric_f64(utility_of(c0), utility_of(c1), gain, loss, tie)
    });
    let exact = crate::utility::evaluate_population(m, u, spec)?.expected_relative_utility;
    Ok(SimulationEstimate {
        mean: moments.mean,
        standard_error: moments.standard_error(),
        replications: cfg.replications,
        exact_target: Some(exact),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use crate::model::{ratio, BinaryOutcome, PrincipalStratum, Probability, UnitType};
    use crate::strata::strata_from_independent_marginals;

    fn p(n: i64, d: i64) -> Probability {
        Probability::from_ratio(n, d).unwrap()
    }

    fn stream_uniforms(seed: u64, stream: u64, n: usize) -> Vec<f64> {
        let mut rng = stream_rng(seed, stream);
        (0..n).map(|_| rng.random::<f64>()).collect()
    }

    fn defaults() -> (OutcomeUtility, AsymmetricUtilitySpec) {
        (OutcomeUtility::default(), AsymmetricUtilitySpec::default())
    }

    fn roulette_unit() -> PopulationModel {
        PopulationModel::new(vec![UnitType::new(
            "all",
            Probability::one(),
            ArmOutcomeModel::Bernoulli(p(5, 6)),
            ArmOutcomeModel::Bernoulli(p(6, 7)),
        )])
    }

    #[test]
    fn point_mass_is_exact() {
        let (u, spec) = defaults();
        let d = StrataDistribution::point(PrincipalStratum::ALWAYS_SURVIVE);
        let e = simulate_deterministic(&d, &u, &spec, &SimulationConfig::new(10_000, 3)).unwrap();
        assert_eq!(e.mean, 0.0);
        assert_eq!(e.standard_error, 0.0);
        assert!(e.within_sigmas(4.0));
    }

    #[test]
    fn same_seed_same_estimate() {
        let (u, spec) = defaults();
        let d = strata_from_independent_marginals(&p(5, 6), &p(6, 7));
        let cfg = SimulationConfig::new(50_000, 42).with_parallelism(3);
        let a = simulate_deterministic(&d, &u, &spec, &cfg).unwrap();
        let b = simulate_deterministic(&d, &u, &spec, &cfg).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.standard_error.to_bits(), b.standard_error.to_bits());
        let c = simulate_deterministic(&d, &u, &spec, &SimulationConfig::new(50_000, 43)).unwrap();
        assert_ne!(a.mean.to_bits(), c.mean.to_bits());
    }

    #[test]
    fn deterministic_roulette_converges() {
        let (u, spec) = defaults();
        let d = strata_from_independent_marginals(&p(5, 6), &p(6, 7));
        for parallelism in [1, 4] {
            let cfg = SimulationConfig::new(200_000, 7).with_parallelism(parallelism);
            let e = simulate_deterministic(&d, &u, &spec, &cfg).unwrap();
            assert_eq!(e.exact_target, Some(ratio(-1, 21)));
            assert!(e.within_sigmas(4.0), "{e:?}");
        }
    }

    #[test]
    fn nested_roulette_converges() {
        let (u, spec) = defaults();
        let cfg = SimulationConfig::new(100_000, 11);
        let e = simulate_population(&roulette_unit(), &u, &spec, &cfg).unwrap();
        assert_eq!(e.exact_target, Some(ratio(1, 84)));
        assert!(e.within_sigmas(4.0), "{e:?}");
    }

    #[test]
    fn degenerate_population_is_noiseless_within_units() {
        let (u, spec) = defaults();
        let deg = |b| ArmOutcomeModel::Degenerate(BinaryOutcome::from_bit(b).unwrap());
        let m = PopulationModel::new(vec![
            UnitType::new("(1,1)", p(30, 42), deg(1), deg(1)),
            UnitType::new("(0,0)", p(1, 42), deg(0), deg(0)),
            UnitType::new("(1,0)", p(5, 42), deg(1), deg(0)),
            UnitType::new("(0,1)", p(6, 42), deg(0), deg(1)),
        ]);
        let e = simulate_population(&m, &u, &spec, &SimulationConfig::new(200_000, 5).with_inner_samples(8)).unwrap();
        assert_eq!(e.exact_target, Some(ratio(-1, 21)));
        assert!(e.within_sigmas(4.0), "{e:?}");
    }

    #[test]
    fn identical_arms_give_zero_with_common_draws() {
        let (u, spec) = defaults();
        let m = PopulationModel::new(vec![UnitType::new(
            "same",
            Probability::one(),
            ArmOutcomeModel::Bernoulli(p(2, 3)),
            ArmOutcomeModel::Bernoulli(p(2, 3)),
        )]);
        let e = simulate_population(&m, &u, &spec, &SimulationConfig::new(1000, 0)).unwrap();
        assert_eq!(e.mean, 0.0);
        let e = simulate_population(&m, &u, &spec, &SimulationConfig::new(20_000, 0).with_coupling(InnerCoupling::Independent)).unwrap();
        // noise only, and the asymmetric rule pulls it negative
        assert!(e.mean < 0.0 && e.mean > -0.02, "{e:?}");
    }

    #[test]
    fn parallel_streams_are_scheduling_independent() {
        let (u, spec) = defaults();
        let cfg = SimulationConfig::new(30_001, 9).with_parallelism(4);
        let a = simulate_population(&roulette_unit(), &u, &spec, &cfg).unwrap();
        let b = simulate_population(&roulette_unit(), &u, &spec, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn independent_inner_bias_shrinks_with_k() {
        let (u, spec) = defaults();
        let target = 1.0 / 84.0;
        let bias: Vec<f64> = [16, 256, 4096]
            .into_iter()
            .map(|k| {
                let cfg = SimulationConfig::new(100_000, 1).with_inner_samples(k).with_coupling(InnerCoupling::Independent);
                (simulate_population(&roulette_unit(), &u, &spec, &cfg).unwrap().mean - target).abs()
            })
            .collect();
        assert!(bias[0] > bias[1] && bias[1] > bias[2], "{bias:?}");
    }

    #[test]
    fn rejects_bad_config() {
        let (u, spec) = defaults();
        let d = StrataDistribution::point(PrincipalStratum::SAVED);
        assert!(simulate_deterministic(&d, &u, &spec, &SimulationConfig::new(0, 0)).is_err());
        assert!(simulate_deterministic(&d, &u, &spec, &SimulationConfig::new(10, 0).with_parallelism(0)).is_err());
    }

    #[test]
    fn streams_differ() {
        assert_ne!(stream_uniforms(1, 0, 4), stream_uniforms(1, 1, 4));
        assert_eq!(stream_uniforms(1, 2, 4), stream_uniforms(1, 2, 4));
    }
}
