//! Closed-loop stability, decided two independent ways.
//!
//! The numeric route computes all eight eigenvalues of the drift matrix and
//! tests that every real part is strictly negative. The analytic route
//! evaluates the explicit inequality
//!
//! ```text
//! x·y < (1 + yκ/γ_r)² / ( √((1 + yκ/γ_r)² + α²) + α·|cos(Δθ/2)| )
//! ```
//!
//! together with the closed form for the largest eigenvalue real part. The
//! two must agree away from the knife edge; the test suite enforces this
//! over large randomized samples.

use crate::closedform::RateParams;
use crate::config::SystemConfig;
use crate::error::Error;
use crate::linalg;
use crate::model::{build_state_space, StateSpace};

/// Verdicts and margins from both stability routes.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct StabilityReport {
    /// All eigenvalue real parts strictly negative.
    pub hurwitz: bool,
    /// Largest eigenvalue real part from the QR iteration, rad/s.
    pub max_real_eigen_numeric: f64,
    /// Largest eigenvalue real part from the closed form, rad/s.
    pub max_real_eigen_formula: f64,
    /// Strict closed-form inequality verdict.
    pub closed_form_holds: bool,
    /// Right-hand side of the inequality minus `x·y`.
    pub margin: f64,
}

/// Numeric Hurwitz test on the drift matrix.
///
/// Returns `(hurwitz, max real part)`. Equality with zero counts as not
/// Hurwitz: marginal systems are classified unstable.
pub fn hurwitz_check(ss: &StateSpace) -> Result<(bool, f64), Error> {
    let eigen = linalg::eigenvalues(&ss.a)?;
    let max_re = eigen.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    Ok((max_re < 0.0, max_re))
}

/// Largest eigenvalue real part of the drift matrix in closed form, rad/s.
///
/// Evaluates, with `c = |cos(Δθ/2)|`,
///
/// ```text
/// −(γ+κ)/2 + ½·( ε²/2 + αεγc + √(ε⁴/4 + α²ε²γ² + αε³γc) )^½
/// ```
///
/// after normalizing all rates by γ so the arithmetic stays O(1).
pub fn max_real_eigen_formula(cfg: &SystemConfig) -> f64 {
    let e = cfg.epsilon / cfg.gamma;
    let k = cfg.kappa / cfg.gamma;
    let a = cfg.alpha;
    let c = libm::cos(cfg.delta_theta() / 2.0).abs();
    let inner = libm::sqrt(e * e * e * e / 4.0 + a * a * e * e + a * e * e * e * c);
    let outer = libm::sqrt(e * e / 2.0 + a * e * c + inner);
    cfg.gamma * (-(1.0 + k) / 2.0 + 0.5 * outer)
}

/// Strict closed-form stability test; returns `(stable, margin)` with
/// `margin` the inequality right-hand side minus `x·y`.
pub fn closed_form_stable(cfg: &SystemConfig) -> (bool, f64) {
    let p = RateParams::from_config(cfg);
    let margin = stability_margin(&p, cfg.delta_theta());
    (margin > 0.0, margin)
}

/// Stability margin in terms of physical rates.
///
/// `x·y = ε/γ` and `yκ/γ_r = κ/γ`, so the inequality only needs the rate
/// ratios; this is what lets the closed-form analysis modules test
/// stability without a full [`SystemConfig`].
pub(crate) fn stability_margin(p: &RateParams, delta_theta: f64) -> f64 {
    let xy = p.epsilon / p.gamma;
    let k = 1.0 + p.kappa / p.gamma;
    let cos_half = libm::cos(delta_theta / 2.0).abs();
    let rhs = k * k / (libm::sqrt(k * k + p.alpha * p.alpha) + p.alpha * cos_half);
    rhs - xy
}

/// Run both routes and collect the full report.
pub fn stability_report(cfg: &SystemConfig) -> Result<StabilityReport, Error> {
    let ss = build_state_space(cfg);
    let (hurwitz, max_real_eigen_numeric) = hurwitz_check(&ss)?;
    let (closed_form_holds, margin) = closed_form_stable(cfg);
    Ok(StabilityReport {
        hurwitz,
        max_real_eigen_numeric,
        max_real_eigen_formula: max_real_eigen_formula(cfg),
        closed_form_holds,
        margin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RawConfig;
    use core::f64::consts::PI;

    fn cfg(raw: RawConfig) -> SystemConfig {
        SystemConfig::validate(&raw).unwrap()
    }

    fn lossless(x: f64, dtheta: f64) -> SystemConfig {
        cfg(RawConfig {
            x,
            theta1: dtheta,
            kappa_scale: Some(0.0),
            ..RawConfig::default()
        })
    }

    #[test]
    fn lossless_threshold_below_is_stable() {
        // x·y = 0.4 < √2 − 1 ≈ 0.41421.
        let c = lossless(0.4, 0.0);
        let report = stability_report(&c).unwrap();
        assert!(report.hurwitz);
        assert!(report.closed_form_holds);
        assert!((report.margin - (core::f64::consts::SQRT_2 - 1.0 - 0.4)).abs() < 1e-12);
    }

    #[test]
    fn lossless_threshold_above_is_unstable() {
        let c = lossless(0.42, 0.0);
        let report = stability_report(&c).unwrap();
        assert!(!report.hurwitz);
        assert!(!report.closed_form_holds);
    }

    #[test]
    fn opposite_phase_raises_the_threshold() {
        // Δθ = π pushes the bound to 1/√2 ≈ 0.7071, so x = 0.6 is stable.
        let c = lossless(0.6, PI);
        let report = stability_report(&c).unwrap();
        assert!(report.hurwitz);
        assert!(report.closed_form_holds);
        assert!((report.margin - (1.0 / core::f64::consts::SQRT_2 - 0.6)).abs() < 1e-12);
    }

    #[test]
    fn fully_pumped_lossless_is_unstable() {
        let c = lossless(1.0, 0.0);
        let (stable, margin) = closed_form_stable(&c);
        assert!(!stable);
        assert!(margin < 0.0);
    }

    #[test]
    fn no_pump_decays_at_half_total_rate() {
        let c = cfg(RawConfig {
            x: 0.0,
            kappa: Some(3.0e6),
            ..RawConfig::default()
        });
        let want = -(c.gamma + c.kappa) / 2.0;
        assert!((max_real_eigen_formula(&c) - want).abs() < 1e-9 * c.gamma);
        let (_, max_re) = hurwitz_check(&build_state_space(&c)).unwrap();
        assert!((max_re - want).abs() < 1e-6 * (c.gamma + c.kappa));
    }

    #[test]
    fn numeric_and_formula_agree_at_paper_point() {
        let c = lossless(0.4, 0.0);
        let report = stability_report(&c).unwrap();
        assert!(
            (report.max_real_eigen_numeric - report.max_real_eigen_formula).abs()
                <= 1e-6 * (c.gamma + c.kappa)
        );
    }

    #[test]
    fn formula_vanishes_on_the_theorem_boundary() {
        // Solve the stability equality for x by bisection on the margin,
        // then check the eigenvalue formula is zero there.
        let margin_at = |x: f64| closed_form_stable(&lossless(x, 0.7)).1;
        let (mut lo, mut hi) = (0.1, 1.0);
        assert!(margin_at(lo) > 0.0 && margin_at(hi) < 0.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if margin_at(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let c = lossless(0.5 * (lo + hi), 0.7);
        assert!(max_real_eigen_formula(&c).abs() <= 1e-9 * c.gamma);
    }

    #[test]
    fn stability_depends_only_on_phase_difference() {
        for shift in [0.0, 0.5, -2.0, PI] {
            let base = cfg(RawConfig {
                x: 0.38,
                alpha: 0.9,
                theta1: 0.3,
                theta2: -0.8,
                ..RawConfig::default()
            });
            let moved = cfg(RawConfig {
                x: 0.38,
                alpha: 0.9,
                theta1: 0.3 + shift,
                theta2: -0.8 + shift,
                ..RawConfig::default()
            });
            let (s0, m0) = closed_form_stable(&base);
            let (s1, m1) = closed_form_stable(&moved);
            assert_eq!(s0, s1);
            assert!((m0 - m1).abs() < 1e-12);
            let h0 = hurwitz_check(&build_state_space(&base)).unwrap().0;
            let h1 = hurwitz_check(&build_state_space(&moved)).unwrap().0;
            assert_eq!(h0, h1);
        }
    }

    #[test]
    fn stable_without_phase_shifts_means_stable_with_them() {
        // The margin is smallest at Δθ = 0; any Δθ only helps.
        for x in [0.1, 0.3, 0.41] {
            let at_zero = closed_form_stable(&lossless(x, 0.0));
            if at_zero.0 {
                for dt in [0.5, 1.5, 2.5, PI] {
                    let shifted = closed_form_stable(&lossless(x, dt));
                    assert!(shifted.0, "x={x}, dtheta={dt}");
                    assert!(shifted.1 >= at_zero.1 - 1e-15);
                }
            }
        }
    }
}
