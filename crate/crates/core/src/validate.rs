//! Seeded cross-validation of the closed-form and state-space routes.
//!
//! Draws random stable configurations, evaluates the zero-frequency
//! spectra both ways, and checks the stability verdicts and eigenvalue
//! extrema agree. The sampler is a plain SplitMix64 stream so results are
//! reproducible across platforms from the seed alone.
//!
//! Sampled configurations keep a stability margin of at least 1e−3: right
//! at the knife edge the resolvent condition number diverges and both
//! routes lose digits together, which says nothing about their agreement.

use core::f64::consts::PI;

use crate::closedform::{v_pm_lossless, v_pm_lossy, RateParams};
use crate::config::{RawConfig, SystemConfig};
use crate::error::Error;
use crate::model::build_state_space;
use crate::spectra::squeezing_spectra;
use crate::stability::{
    closed_form_stable, hurwitz_check, max_real_eigen_formula, stability_report,
};

/// Margin floor for sampled configurations.
const MARGIN_FLOOR: f64 = 1e-3;

/// Agreement thresholds exceeded nowhere in a healthy build.
pub const ORACLE_TOL: f64 = 1e-9;

/// SplitMix64: tiny, seedable, platform-independent.
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in `(0, 1]`.
    pub fn unit_open_low(&mut self) -> f64 {
        1.0 - self.next_f64()
    }

    /// Uniform in `(−π, π]`.
    pub fn angle(&mut self) -> f64 {
        PI - self.next_f64() * 2.0 * PI
    }
}

/// What kind of losses to sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMode {
    /// α = 1, κ = 0.
    Lossless,
    /// α ∈ (0, 1], κ = kappa_scale·x.
    Lossy,
}

/// Draw a random configuration that is comfortably stable.
pub fn random_stable_config(rng: &mut SplitMix64, mode: SampleMode) -> SystemConfig {
    loop {
        let (alpha, kappa_scale) = match mode {
            SampleMode::Lossless => (1.0, Some(0.0)),
            SampleMode::Lossy => (rng.unit_open_low(), None),
        };
        let raw = RawConfig {
            x: rng.unit_open_low(),
            y: rng.unit_open_low(),
            alpha,
            kappa_scale,
            theta1: rng.angle(),
            theta2: rng.angle(),
            phi1: rng.angle(),
            phi2: rng.angle(),
            ..RawConfig::default()
        };
        let cfg = SystemConfig::validate(&raw).expect("sampled parameters are in range");
        let (_, margin) = closed_form_stable(&cfg);
        if margin >= MARGIN_FLOOR {
            return cfg;
        }
    }
}

/// Aggregate outcome of the equivalence run.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ValidationOutcome {
    /// Configurations per mode.
    pub samples: usize,
    /// Seed the sample stream started from.
    pub seed: u64,
    /// max |V_closed − V_state| / max(1, V) over lossless samples.
    pub max_rel_dev_lossless: f64,
    /// Same over lossy samples.
    pub max_rel_dev_lossy: f64,
    /// Hurwitz vs closed-form verdict disagreements away from the knife
    /// edge (must be zero).
    pub stability_disagreements: usize,
    /// max |λ_numeric − λ_formula| / (γ + κ) over all samples.
    pub max_eigen_dev: f64,
    /// max |V+ − V−| / max(1, V+) over all samples.
    pub max_vplus_vminus_dev: f64,
}

impl ValidationOutcome {
    /// All deviations within the advertised thresholds.
    pub fn passed(&self) -> bool {
        self.max_rel_dev_lossless <= ORACLE_TOL
            && self.max_rel_dev_lossy <= ORACLE_TOL
            && self.stability_disagreements == 0
            && self.max_eigen_dev <= 1e-6
            && self.max_vplus_vminus_dev <= 1e-10
    }
}

/// Run the full equivalence suite: `samples` lossless plus `samples` lossy
/// configurations from `seed`.
pub fn run_equivalence(seed: u64, samples: usize) -> Result<ValidationOutcome, Error> {
    let mut rng = SplitMix64::new(seed);
    let mut outcome = ValidationOutcome {
        samples,
        seed,
        max_rel_dev_lossless: 0.0,
        max_rel_dev_lossy: 0.0,
        stability_disagreements: 0,
        max_eigen_dev: 0.0,
        max_vplus_vminus_dev: 0.0,
    };

    for mode in [SampleMode::Lossless, SampleMode::Lossy] {
        for _ in 0..samples {
            let cfg = random_stable_config(&mut rng, mode);
            let phases = cfg.phases();
            let rates = RateParams::from_config(&cfg);

            let closed = match mode {
                SampleMode::Lossless => {
                    v_pm_lossless(cfg.epsilon, cfg.gamma, phases.m, phases.n, phases.phi)
                }
                SampleMode::Lossy => v_pm_lossy(rates, phases.m, phases.n, phases.phi),
            };
            let ss = build_state_space(&cfg);
            let s = squeezing_spectra(&ss, 0.0)?;
            let dev = (closed - s.v_plus).abs() / s.v_plus.abs().max(1.0);
            let slot = match mode {
                SampleMode::Lossless => &mut outcome.max_rel_dev_lossless,
                SampleMode::Lossy => &mut outcome.max_rel_dev_lossy,
            };
            *slot = slot.max(dev);

            let vv = (s.v_plus - s.v_minus).abs() / s.v_plus.abs().max(1.0);
            outcome.max_vplus_vminus_dev = outcome.max_vplus_vminus_dev.max(vv);

            let report = stability_report(&cfg)?;
            if report.margin.abs() > 1e-9 && report.hurwitz != report.closed_form_holds {
                outcome.stability_disagreements += 1;
            }
            let eig_dev = (report.max_real_eigen_numeric - report.max_real_eigen_formula).abs()
                / (cfg.gamma + cfg.kappa);
            outcome.max_eigen_dev = outcome.max_eigen_dev.max(eig_dev);
        }
    }

    // Unstable draws exercise the verdict agreement on the other side of
    // the boundary; eigenvalues are still well-defined there.
    let mut remaining = samples / 4;
    let mut attempts = 0usize;
    while remaining > 0 && attempts < samples * 50 {
        attempts += 1;
        let raw = RawConfig {
            x: rng.unit_open_low(),
            y: rng.unit_open_low(),
            alpha: rng.unit_open_low(),
            theta1: rng.angle(),
            theta2: rng.angle(),
            ..RawConfig::default()
        };
        let cfg = SystemConfig::validate(&raw).expect("sampled parameters are in range");
        let (stable, margin) = closed_form_stable(&cfg);
        if stable || margin > -MARGIN_FLOOR {
            continue;
        }
        remaining -= 1;
        let ss = build_state_space(&cfg);
        let (hurwitz, max_re) = hurwitz_check(&ss)?;
        if hurwitz {
            outcome.stability_disagreements += 1;
        }
        let eig_dev = (max_re - max_real_eigen_formula(&cfg)).abs() / (cfg.gamma + cfg.kappa);
        outcome.max_eigen_dev = outcome.max_eigen_dev.max(eig_dev);
    }

    Ok(outcome)
}
