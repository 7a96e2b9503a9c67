//! Network parameters, validation and phase bookkeeping.

use alloc::format;

use crate::error::Error;

/// Reference decay rate of the cavity transmissivity mirrors, rad/s.
pub const DEFAULT_GAMMA_R: f64 = 7.2e7;

/// Amplification-loss coefficient per unit pump ratio, rad/s.
///
/// Calibrated so that `kappa = 3×10⁶/√2` at `x = 0.6`; `kappa` then scales
/// linearly with the pump ratio.
pub const DEFAULT_KAPPA_SCALE: f64 = 3.0e6 / (core::f64::consts::SQRT_2 * 0.6);

/// Wrap an angle to the half-open interval `(−π, π]`.
pub fn wrap_angle(angle: f64) -> f64 {
    use core::f64::consts::{PI, TAU};
    if angle > -PI && angle <= PI {
        return angle;
    }
    // euclidean remainder in [0, 2π), then shift the (π, 2π) part down
    let r = libm::fmod(angle, TAU);
    let r = if r < 0.0 { r + TAU } else { r };
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Raw parameter record as ingested from flags or a JSON document.
///
/// Optional fields fall back to the reference values above. `kappa`
/// overrides the `kappa_scale · x` parameterization when present.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(deny_unknown_fields)
)]
pub struct RawConfig {
    /// Pump ratio `x`, dimensionless; `epsilon = x·gamma_r`.
    pub x: f64,
    /// Decay divisor `y`, dimensionless; `gamma = gamma_r/y`.
    pub y: f64,
    /// Reference decay rate, rad/s.
    #[cfg_attr(feature = "serde", serde(default))]
    pub gamma_r: Option<f64>,
    /// Amplification-loss coefficient per unit `x`, rad/s.
    #[cfg_attr(feature = "serde", serde(default))]
    pub kappa_scale: Option<f64>,
    /// Direct amplification-loss rate override, rad/s.
    #[cfg_attr(feature = "serde", serde(default))]
    pub kappa: Option<f64>,
    /// Beamsplitter transmission rate, dimensionless.
    pub alpha: f64,
    /// Channel phase shift on the Alice→Bob path, radians.
    #[cfg_attr(feature = "serde", serde(default))]
    pub theta1: f64,
    /// Channel phase shift on the Bob→Alice path, radians.
    #[cfg_attr(feature = "serde", serde(default))]
    pub theta2: f64,
    /// Output phase-shifter setting on `xi_out,b,1`, radians.
    #[cfg_attr(feature = "serde", serde(default))]
    pub phi1: f64,
    /// Output phase-shifter setting on `xi_out,a,2`, radians.
    #[cfg_attr(feature = "serde", serde(default))]
    pub phi2: f64,
}

impl Default for RawConfig {
    /// The running example of the analysis: `x = 0.4`, `y = 1`, lossless
    /// transmission, no phase shifts, reference rates.
    fn default() -> Self {
        Self {
            x: 0.4,
            y: 1.0,
            gamma_r: None,
            kappa_scale: None,
            kappa: None,
            alpha: 1.0,
            theta1: 0.0,
            theta2: 0.0,
            phi1: 0.0,
            phi2: 0.0,
        }
    }
}

/// Validated network parameters with derived rates populated.
///
/// All rates are angular frequencies in rad/s. Angles are wrapped to
/// `(−π, π]` on construction.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SystemConfig {
    /// Pump ratio, `0 ≤ x ≤ 1` (`x = 0` is the vacuum limit).
    pub x: f64,
    /// Decay divisor, `0 < y ≤ 1`.
    pub y: f64,
    /// Reference decay rate, rad/s.
    pub gamma_r: f64,
    /// Amplification-loss coefficient per unit `x`, rad/s.
    pub kappa_scale: f64,
    /// Beamsplitter transmission rate.
    pub alpha: f64,
    /// Channel phase shifts, radians, in `(−π, π]`.
    pub theta1: f64,
    /// Second channel phase shift, radians, in `(−π, π]`.
    pub theta2: f64,
    /// Output phase-shifter settings, radians, in `(−π, π]`.
    pub phi1: f64,
    /// Second output phase-shifter setting, radians, in `(−π, π]`.
    pub phi2: f64,
    /// Pump coupling `epsilon = x·gamma_r`, rad/s.
    pub epsilon: f64,
    /// Cavity decay `gamma = gamma_r/y`, rad/s.
    pub gamma: f64,
    /// Amplification-loss rate, rad/s.
    pub kappa: f64,
    /// Beamsplitter reflection rate `beta = √(1−alpha²)`.
    pub beta: f64,
}

impl SystemConfig {
    /// Validate a raw record and populate the derived quantities.
    ///
    /// Ranges: `0 ≤ x ≤ 1` (zero pump admitted as the vacuum limit),
    /// `0 < y ≤ 1`, `0 < alpha ≤ 1`, `gamma_r > 0`, `kappa ≥ 0`. Angles are
    /// wrapped, never rejected.
    pub fn validate(raw: &RawConfig) -> Result<Self, Error> {
        fn finite(field: &'static str, v: f64) -> Result<f64, Error> {
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::InvalidConfig {
                    field,
                    reason: format!("must be finite, got {v}"),
                })
            }
        }

        let x = finite("x", raw.x)?;
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::InvalidConfig {
                field: "x",
                reason: format!("out of [0, 1], got {x}"),
            });
        }
        let y = finite("y", raw.y)?;
        if !(y > 0.0 && y <= 1.0) {
            return Err(Error::InvalidConfig {
                field: "y",
                reason: format!("out of (0, 1], got {y}"),
            });
        }
        let alpha = finite("alpha", raw.alpha)?;
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidConfig {
                field: "alpha",
                reason: format!("out of (0, 1], got {alpha}"),
            });
        }
        let gamma_r = finite("gamma_r", raw.gamma_r.unwrap_or(DEFAULT_GAMMA_R))?;
        if gamma_r <= 0.0 {
            return Err(Error::InvalidConfig {
                field: "gamma_r",
                reason: format!("must be positive, got {gamma_r}"),
            });
        }
        let kappa_scale = finite("kappa_scale", raw.kappa_scale.unwrap_or(DEFAULT_KAPPA_SCALE))?;
        if kappa_scale < 0.0 {
            return Err(Error::InvalidConfig {
                field: "kappa_scale",
                reason: format!("must be nonnegative, got {kappa_scale}"),
            });
        }
        let kappa = match raw.kappa {
            Some(k) => {
                let k = finite("kappa", k)?;
                if k < 0.0 {
                    return Err(Error::InvalidConfig {
                        field: "kappa",
                        reason: format!("must be nonnegative, got {k}"),
                    });
                }
                k
            }
            None => kappa_scale * x,
        };

        let beta_sq = 1.0 - alpha * alpha;
        Ok(Self {
            x,
            y,
            gamma_r,
            kappa_scale,
            alpha,
            theta1: wrap_angle(finite("theta1", raw.theta1)?),
            theta2: wrap_angle(finite("theta2", raw.theta2)?),
            phi1: wrap_angle(finite("phi1", raw.phi1)?),
            phi2: wrap_angle(finite("phi2", raw.phi2)?),
            epsilon: x * gamma_r,
            gamma: gamma_r / y,
            kappa,
            beta: libm::sqrt(beta_sq.max(0.0)),
        })
    }

    /// Channel phase difference `Δθ = θ₁ − θ₂`, radians (unwrapped).
    pub fn delta_theta(&self) -> f64 {
        self.theta1 - self.theta2
    }

    /// Decompose this configuration's phases into `(m, n, φ)`.
    pub fn phases(&self) -> PhaseDecomposition {
        decompose_phases(self.theta1, self.theta2, self.phi1, self.phi2)
    }
}

/// Half-difference/half-sum view of the channel phases.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PhaseDecomposition {
    /// Half-difference `m = (θ₁ − θ₂)/2`, radians.
    pub m: f64,
    /// Half-sum `n = (θ₁ + θ₂)/2`, radians.
    pub n: f64,
    /// Combined output shift `φ = φ₁ + φ₂`, radians, in `(−2π, 2π]`.
    pub phi: f64,
    /// Whether `m, n, m+n, n−m` all lie in `(−π, π]`, the domain assumed by
    /// the closed-form analysis. Construction never fails; this only marks
    /// whether the tuple sits inside that domain.
    pub canonical: bool,
}

/// Split channel phases into half-difference `m` and half-sum `n`, and sum
/// the output shifts into `φ`.
///
/// The inverse reconstruction `θ₁ = n + m`, `θ₂ = n − m` holds modulo 2π.
pub fn decompose_phases(theta1: f64, theta2: f64, phi1: f64, phi2: f64) -> PhaseDecomposition {
    use core::f64::consts::PI;
    let m = (theta1 - theta2) / 2.0;
    let n = (theta1 + theta2) / 2.0;
    let in_range = |v: f64| v > -PI && v <= PI;
    PhaseDecomposition {
        m,
        n,
        phi: phi1 + phi2,
        canonical: in_range(m) && in_range(n) && in_range(n + m) && in_range(n - m),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn derived_quantities_match_reference_values() {
        let cfg = SystemConfig::validate(&RawConfig {
            x: 0.4,
            y: 1.0,
            alpha: 0.95,
            ..RawConfig::default()
        })
        .unwrap();
        assert_eq!(cfg.epsilon, 2.88e7);
        assert_eq!(cfg.gamma, 7.2e7);
        // kappa = (3e6/(√2·0.6))·0.4 = 2e6/√2 = √2·1e6
        let expected_kappa = 2.0e6 / core::f64::consts::SQRT_2;
        assert!((cfg.kappa - expected_kappa).abs() < 1e-6 * expected_kappa);
        assert!((cfg.beta * cfg.beta + cfg.alpha * cfg.alpha - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lossless_limit() {
        let cfg = SystemConfig::validate(&RawConfig {
            kappa_scale: Some(0.0),
            ..RawConfig::default()
        })
        .unwrap();
        assert_eq!(cfg.kappa, 0.0);
        assert_eq!(cfg.beta, 0.0);
    }

    #[test]
    fn kappa_override_beats_scale() {
        let cfg = SystemConfig::validate(&RawConfig {
            kappa: Some(5.0e5),
            ..RawConfig::default()
        })
        .unwrap();
        assert_eq!(cfg.kappa, 5.0e5);
    }

    #[test]
    fn out_of_range_x_is_rejected() {
        let err = SystemConfig::validate(&RawConfig {
            x: 1.2,
            ..RawConfig::default()
        })
        .unwrap_err();
        match err {
            Error::InvalidConfig { field, .. } => assert_eq!(field, "x"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn out_of_range_y_alpha_gamma_r_rejected() {
        for (raw, field) in [
            (
                RawConfig {
                    y: 0.0,
                    ..RawConfig::default()
                },
                "y",
            ),
            (
                RawConfig {
                    alpha: 1.5,
                    ..RawConfig::default()
                },
                "alpha",
            ),
            (
                RawConfig {
                    gamma_r: Some(-1.0),
                    ..RawConfig::default()
                },
                "gamma_r",
            ),
        ] {
            match SystemConfig::validate(&raw).unwrap_err() {
                Error::InvalidConfig { field: f, .. } => assert_eq!(f, field),
                other => panic!("unexpected error {other:?}"),
            }
        }
    }

    #[test]
    fn angles_are_wrapped_on_construction() {
        let cfg = SystemConfig::validate(&RawConfig {
            theta1: 3.0 * PI,
            theta2: -PI,
            ..RawConfig::default()
        })
        .unwrap();
        assert!((cfg.theta1 - PI).abs() < 1e-12);
        assert!((cfg.theta2 - PI).abs() < 1e-12);
    }

    #[test]
    fn wrap_angle_boundaries() {
        assert_eq!(wrap_angle(PI), PI);
        assert!((wrap_angle(-PI) - PI).abs() < 1e-12);
        assert_eq!(wrap_angle(0.0), 0.0);
        assert!((wrap_angle(2.0 * PI)).abs() < 1e-12);
        assert!((wrap_angle(3.0 * PI) - PI).abs() < 1e-9);
    }

    #[test]
    fn decompose_simple() {
        let d = decompose_phases(0.6, 0.2, 0.0, 0.0);
        assert!((d.m - 0.2).abs() < 1e-15);
        assert!((d.n - 0.4).abs() < 1e-15);
        assert_eq!(d.phi, 0.0);
        assert!(d.canonical);
    }

    #[test]
    fn decompose_at_pi() {
        let d = decompose_phases(PI, PI, 0.0, 0.0);
        assert_eq!(d.m, 0.0);
        assert!((d.n - PI).abs() < 1e-15);
        assert!(d.canonical);
    }

    #[test]
    fn canonical_flag_checks_all_four_combinations() {
        // Inputs already in (−π, π] always decompose inside the analyzed
        // domain: m, n are averages and m+n, n−m reconstruct the inputs.
        for (t1, t2) in [(PI, -PI + 0.1), (3.0, -3.0), (-2.9, 2.9), (PI, PI)] {
            assert!(decompose_phases(t1, t2, 0.0, 0.0).canonical, "{t1},{t2}");
        }
        // Raw angles outside the principal range can push m past π.
        assert!(!decompose_phases(3.2, -3.2, 0.0, 0.0).canonical);
        // ... or n.
        assert!(!decompose_phases(4.0, 4.0, 0.0, 0.0).canonical);
        // ... or the reconstruction combinations themselves.
        assert!(!decompose_phases(3.3, 0.0, 0.0, 0.0).canonical);
    }

    #[test]
    fn decompose_reconstructs_inputs_mod_2pi() {
        let cases = [(0.6, 0.2), (PI, PI), (-2.9, 2.9), (1.0, -3.0)];
        for (t1, t2) in cases {
            let d = decompose_phases(t1, t2, 0.3, -0.4);
            let r1 = wrap_angle(d.n + d.m);
            let r2 = wrap_angle(d.n - d.m);
            assert!((wrap_angle(r1 - t1)).abs() < 1e-12, "theta1 for {t1},{t2}");
            assert!((wrap_angle(r2 - t2)).abs() < 1e-12, "theta2 for {t1},{t2}");
        }
    }

    #[cfg(feature = "serde")]
    #[test]
    fn unknown_json_keys_are_rejected() {
        let doc = r#"{"x": 0.4, "y": 1.0, "alpha": 1.0, "bogus": 3}"#;
        assert!(serde_json::from_str::<RawConfig>(doc).is_err());
    }
}
