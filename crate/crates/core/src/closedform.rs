//! Closed-form spectra at ω = 0.
//!
//! The zero-frequency two-mode squeezing spectra of the network admit an
//! explicit rational form in the rates and the channel-phase decomposition
//! `(m, n, φ)`:
//!
//! ```text
//! V±(0, m, n, φ) = 2·(c1 + 2·c2·cos m·cos(n+φ) + c3·cos 2m) / (c4 − c5·cos 2m)
//! ```
//!
//! with degree-8 coefficient polynomials `c1..c5` in `(ε, γ, κ, α)`; the
//! lossless specialization `κ = 0, α = 1` collapses them to the four `b`
//! polynomials in `(ε, γ)`. Everything else here — the diagnostic
//! differences `f`, `g`, `h`, the optimal compensation `φ₀` and the
//! compensated curve `V±^im(m)` — is algebra on top of that form.
//!
//! All spectra values are dimensionless ratios of homogeneous degree-8
//! forms, so the evaluators divide every rate by γ up front; the
//! coefficients then stay O(1) instead of reaching the 10⁶² range that raw
//! rad/s rates would produce.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::config::{wrap_angle, SystemConfig};

/// Degenerate-branch tolerance: `|cos m|` at or below this selects the
/// `m = ±π/2` branch where the compensation has no effect.
const COS_DEGENERATE_TOL: f64 = 1e-12;

/// The rate scalars entering the closed forms.
///
/// Any consistent unit works; evaluators normalize by `gamma` internally.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RateParams {
    /// Pump coupling ε, rad/s.
    pub epsilon: f64,
    /// Cavity decay γ, rad/s.
    pub gamma: f64,
    /// Amplification-loss rate κ, rad/s.
    pub kappa: f64,
    /// Beamsplitter transmission α, dimensionless.
    pub alpha: f64,
}

impl RateParams {
    /// Extract the rate scalars from a validated configuration.
    pub fn from_config(cfg: &SystemConfig) -> Self {
        Self {
            epsilon: cfg.epsilon,
            gamma: cfg.gamma,
            kappa: cfg.kappa,
            alpha: cfg.alpha,
        }
    }

    /// Lossless parameters: no amplification loss, ideal transmission.
    pub fn lossless(epsilon: f64, gamma: f64) -> Self {
        Self {
            epsilon,
            gamma,
            kappa: 0.0,
            alpha: 1.0,
        }
    }

    fn normalized(self) -> Self {
        Self {
            epsilon: self.epsilon / self.gamma,
            gamma: 1.0,
            kappa: self.kappa / self.gamma,
            alpha: self.alpha,
        }
    }

    fn is_lossless(self) -> bool {
        self.kappa == 0.0 && self.alpha == 1.0
    }
}

/// Lossless coefficient polynomials `b1..b4`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct LosslessCoeffs {
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    pub b4: f64,
}

/// Evaluate the lossless coefficient polynomials at raw `(ε, γ)`.
pub fn lossless_coeffs(epsilon: f64, gamma: f64) -> LosslessCoeffs {
    let e2 = epsilon * epsilon;
    let g2 = gamma * gamma;
    let e4 = e2 * e2;
    let g4 = g2 * g2;
    LosslessCoeffs {
        b1: e4 * e4 + 12.0 * e4 * e2 * g2 - 10.0 * e4 * g4 + 12.0 * e2 * g4 * g2 + g4 * g4,
        b2: 4.0 * epsilon * gamma * (e2 - g2) * (e2 + g2) * (e2 + g2),
        b3: 8.0 * e2 * g2 * (e2 - g2) * (e2 - g2),
        b4: e4 * e4 - 4.0 * e4 * e2 * g2 + 22.0 * e4 * g4 - 4.0 * e2 * g4 * g2 + g4 * g4,
    }
}

/// Lossy coefficient polynomials `c1..c5` with the rate scalars they were
/// evaluated at (needed by the `d1`..`d6` factorization helpers).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct LossyCoeffs {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    /// Parameters the coefficients were evaluated at.
    pub params: RateParams,
}

/// Evaluate the lossy coefficient polynomials at raw rates.
pub fn lossy_coeffs(p: RateParams) -> LossyCoeffs {
    let RateParams {
        epsilon: e,
        gamma: g,
        kappa: k,
        alpha: a,
    } = p;
    let b_sq = 1.0 - a * a;
    let (e2, g2, k2, a2) = (e * e, g * g, k * k, a * a);
    let (e4, g4, k4, a4) = (e2 * e2, g2 * g2, k2 * k2, a2 * a2);

    let c1 = 4.0 * a4 * e2 * g2 * (k4 + 8.0 * k * e2 * g + (e2 - g2) * (e2 - g2) - 2.0 * k2 * (e2 + g2))
        + a2 * (e2 + g2 - k2)
            * (e2 + g2 - k2)
            * (k4 + 4.0 * k2 * k * g - 2.0 * k2 * (e2 - 3.0 * g2)
                + 4.0 * k * g * (e2 + g2)
                + e4
                + 2.0 * (1.0 + 2.0 * b_sq) * e2 * g2
                + g4)
        + (k2 - e2 + 2.0 * k * g + g2)
            * (k2 - e2 + 2.0 * k * g + g2)
            * (4.0 * g * (k + g) * (k2 + e2 + k * g) + b_sq * (e2 + g2 - k2) * (e2 + g2 - k2));

    let c2 = 4.0
        * a
        * e
        * g
        * (e2 + g2 - k2)
        * (-k4 - 4.0 * k2 * k * g - 6.0 * k2 * g2 + 4.0 * a2 * k * e2 * g + e4
            - 4.0 * k * g2 * g
            - g4);

    let c3 = 8.0 * a2 * e2 * g2 * (e - k - g) * (k + e + g) * (3.0 * k2 + 2.0 * k * g + e2 - g2);

    let c4 = k4 * k4 + 8.0 * k4 * k2 * k * g - 4.0 * k4 * k2 * (e2 - 7.0 * g2)
        - 8.0 * k4 * k * (3.0 * e2 * g - 7.0 * g2 * g)
        + k4 * (6.0 * e4 - 60.0 * e2 * g2 + 70.0 * g4)
        + 8.0 * k2 * k * (3.0 * e4 * g - 10.0 * e2 * g2 * g + 7.0 * g4 * g)
        - 4.0 * k2 * (e2 - 7.0 * g2) * (e2 - g2) * (e2 - g2)
        + 8.0 * k * g * (g2 - e2) * (g2 - e2) * (g2 - e2)
        + e4 * e4
        - 4.0 * e4 * e2 * g2
        + 2.0 * (3.0 + 8.0 * a4) * e4 * g4
        - 4.0 * e2 * g4 * g2
        + g4 * g4;

    let c5 = 8.0 * a2 * e2 * g2 * (k2 + 2.0 * k * g - e2 + g2) * (k2 + 2.0 * k * g - e2 + g2);

    LossyCoeffs {
        c1,
        c2,
        c3,
        c4,
        c5,
        params: p,
    }
}

impl LossyCoeffs {
    /// `d1 = ε² + γ² − κ²`; positive in the valid parameter domain.
    pub fn d1(&self) -> f64 {
        let RateParams {
            epsilon: e,
            gamma: g,
            kappa: k,
            ..
        } = self.params;
        e * e + g * g - k * k
    }

    /// `d2`; negative under stability.
    pub fn d2(&self) -> f64 {
        let RateParams {
            epsilon: e,
            gamma: g,
            kappa: k,
            alpha: a,
        } = self.params;
        let (e2, g2, k2) = (e * e, g * g, k * k);
        -(g2 * g2 - e2 * e2) - 4.0 * k * g * (g2 - a * a * e2) - 6.0 * k2 * g2 - 4.0 * k2 * k * g
            - k2 * k2
    }

    /// `d3`; positive.
    pub fn d3(&self) -> f64 {
        let RateParams {
            epsilon: e,
            gamma: g,
            kappa: k,
            alpha: a,
        } = self.params;
        let (e2, g2, k2) = (e * e, g * g, k * k);
        let s = k2 + g2 - e2;
        s * s + 4.0 * k2 * g2 + 4.0 * a * a * e2 * g2 + 4.0 * k2 * k * g + 4.0 * k * g * (g2 - e2)
    }

    /// `d4 = 16·α·ε·γ·d1·d2`; negative under stability.
    pub fn d4(&self) -> f64 {
        let RateParams {
            epsilon: e,
            gamma: g,
            alpha: a,
            ..
        } = self.params;
        16.0 * a * e * g * self.d1() * self.d2()
    }

    fn d56_base(&self, sign: f64, m: f64) -> f64 {
        let RateParams {
            epsilon: e,
            gamma: g,
            kappa: k,
            alpha: a,
        } = self.params;
        let (e2, g2, k2) = (e * e, g * g, k * k);
        let body = k2 * k2 + e2 * e2 + 4.0 * k2 * k * g - 2.0 * e2 * g2
            + 4.0 * a * a * e2 * g2
            + g2 * g2
            - 2.0 * k2 * (e2 - 3.0 * g2)
            + k * (4.0 * g2 * g - 4.0 * e2 * g)
            + sign * 4.0 * a * e * g * (k2 - e2 + 2.0 * k * g + g2) * libm::cos(m);
        body * body
    }

    /// `d5(m)`; the squared denominator factor of the inner-branch slope.
    pub fn d5(&self, m: f64) -> f64 {
        self.d56_base(1.0, m)
    }

    /// `d6(m)`; the squared denominator factor of the outer-branch slope.
    pub fn d6(&self, m: f64) -> f64 {
        self.d56_base(-1.0, m)
    }
}

fn v_from_coeffs(co: &LossyCoeffs, m: f64, n: f64, phi: f64) -> f64 {
    let cm = libm::cos(m);
    let c2m = libm::cos(2.0 * m);
    let cnp = libm::cos(n + phi);
    2.0 * (co.c1 + 2.0 * co.c2 * cm * cnp + co.c3 * c2m) / (co.c4 - co.c5 * c2m)
}

/// Lossless `V±(0, m, n, φ)`.
pub fn v_pm_lossless(epsilon: f64, gamma: f64, m: f64, n: f64, phi: f64) -> f64 {
    let b = lossless_coeffs(epsilon / gamma, 1.0);
    let cm = libm::cos(m);
    let c2m = libm::cos(2.0 * m);
    let cnp = libm::cos(n + phi);
    2.0 * (b.b1 + 2.0 * b.b2 * cm * cnp + b.b3 * c2m) / (b.b4 - b.b3 * c2m)
}

/// Lossy `V±(0, m, n, φ)`.
pub fn v_pm_lossy(p: RateParams, m: f64, n: f64, phi: f64) -> f64 {
    let co = lossy_coeffs(p.normalized());
    v_from_coeffs(&co, m, n, phi)
}

/// Spectra without any phase shifts, `V±^nops = V±(0, 0, 0, 0)`.
pub fn v_nops(p: RateParams) -> f64 {
    v_pm_lossy(p, 0.0, 0.0, 0.0)
}

/// Spectra under channel phase shifts only, `V±^ps(m, n) = V±(0, m, n, 0)`.
pub fn v_ps(p: RateParams, m: f64, n: f64) -> f64 {
    v_pm_lossy(p, m, n, 0.0)
}

/// Degradation caused by the channel phases: `f = V±^ps − V±^nops ≥ 0`.
pub fn diagnostic_f(p: RateParams, m: f64, n: f64) -> f64 {
    v_ps(p, m, n) - v_nops(p)
}

/// Residual after compensation relative to no phase shifts:
/// `g = V±(φ) − V±^nops`; zero means full recovery.
pub fn diagnostic_g(p: RateParams, m: f64, n: f64, phi: f64) -> f64 {
    v_pm_lossy(p, m, n, phi) - v_nops(p)
}

/// Improvement from the output shifters: `h = V±(φ) − V±^ps ≤ 0` at the
/// optimum.
pub fn diagnostic_h(p: RateParams, m: f64, n: f64, phi: f64) -> f64 {
    v_pm_lossy(p, m, n, phi) - v_ps(p, m, n)
}

/// Which compensation branch applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum PhiBranch {
    /// `m ∈ (−π/2, π/2)`: minimizer `φ₀ = −n`.
    Inner,
    /// `m ∈ (−π, −π/2) ∪ (π/2, π]`: minimizer `φ₀ = ±π − n`.
    Outer,
}

/// The output-compensation decision.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PhasePlan {
    /// Representative minimizer, wrapped to `(−π, π]`.
    pub phi0: f64,
    /// The other minimizers within `φ ∈ (−2π, 2π]`; all give the same
    /// spectra value.
    pub alternates: Vec<f64>,
    /// Branch the minimizer came from. Immaterial when `effective` is
    /// false.
    pub branch: PhiBranch,
    /// False exactly at `m = ±π/2`, where `φ` has no effect at all.
    pub effective: bool,
    /// Predicted spectra value at `φ₀`.
    pub v_im: f64,
}

/// Pick the compensation `φ₀` minimizing the spectra for given `(m, n)`.
pub fn optimal_phi(p: RateParams, m: f64, n: f64) -> PhasePlan {
    let mw = wrap_angle(m);
    let effective = libm::cos(mw).abs() > COS_DEGENERATE_TOL;
    let inner = mw.abs() < FRAC_PI_2;
    let phi0 = wrap_angle(if inner { -n } else { PI - n });
    let alternate = if phi0 > 0.0 { phi0 - TAU } else { phi0 + TAU };
    PhasePlan {
        phi0,
        alternates: vec![alternate],
        branch: if inner { PhiBranch::Inner } else { PhiBranch::Outer },
        effective,
        v_im: v_im_curve(p, mw),
    }
}

/// Compensated spectra `V±^im(m)`: the value at `φ = φ₀`, as a function of
/// the phase half-difference alone.
///
/// Piecewise in `m` (wrapped to `(−π, π]`, even): the inner branch uses
/// `+2·c2·cos m`, the outer `−2·c2·cos m`, and at `m = ±π/2` the value is
/// `2·(c1−c3)/(c4+c5)` — exactly 2 in the lossless case.
pub fn v_im_curve(p: RateParams, m: f64) -> f64 {
    let pn = p.normalized();
    let mw = wrap_angle(m);
    let cm = libm::cos(mw);
    if cm.abs() <= COS_DEGENERATE_TOL {
        if pn.is_lossless() {
            return 2.0;
        }
        let co = lossy_coeffs(pn);
        return 2.0 * (co.c1 - co.c3) / (co.c4 + co.c5);
    }
    let co = lossy_coeffs(pn);
    let c2m = libm::cos(2.0 * mw);
    let numerator = if mw.abs() < FRAC_PI_2 {
        co.c1 + 2.0 * co.c2 * cm + co.c3 * c2m
    } else {
        co.c1 - 2.0 * co.c2 * cm + co.c3 * c2m
    };
    2.0 * numerator / (co.c4 - co.c5 * c2m)
}
