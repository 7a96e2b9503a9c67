//! Transfer functions and two-mode squeezing spectra.
//!
//! `H(iω) = C(iωI − A)⁻¹B + D` maps the sixteen input quadratures to the
//! four output quadratures. The two-mode squeezing spectra combine the
//! output rows as
//!
//! ```text
//! V+ = ‖[1 0 1 0]·H‖²      (sum of the q rows)
//! V− = ‖[0 1 0 −1]·H‖²     (difference of the p rows)
//! ```
//!
//! and `V+ + V− < 4` certifies EPR entanglement of the two outgoing fields.

use num_complex::Complex;

use crate::error::Error;
use crate::linalg::{self, C64};
use crate::model::{StateSpace, INPUT_DIM, OUTPUT_DIM};

/// Complex 4×16 transfer matrix at a fixed frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferMatrix {
    /// Evaluation frequency, rad/s.
    pub omega: f64,
    /// Row-major entries, output rows by input columns.
    pub h: [[C64; INPUT_DIM]; OUTPUT_DIM],
}

/// Two-mode squeezing spectra at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Spectra {
    /// Frequency, rad/s.
    pub omega: f64,
    /// Amplitude-sum spectra `V+`.
    pub v_plus: f64,
    /// Phase-difference spectra `V−`.
    pub v_minus: f64,
    /// `V = V+ + V−`.
    pub v_total: f64,
    /// `10·log₁₀(V+)`; −∞ for an exactly zero spectrum value.
    pub v_plus_db: f64,
    /// `10·log₁₀(V−)`; −∞ for an exactly zero spectrum value.
    pub v_minus_db: f64,
    /// Strict test `V < 4`.
    pub entangled: bool,
}

/// Entanglement verdict between the two outgoing fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Entanglement {
    Entangled,
    NotEntangled,
}

/// Strict threshold test; the boundary value `V = 4` is not entangled.
pub fn classify_entanglement(spectra: &Spectra) -> Entanglement {
    if spectra.v_total < 4.0 {
        Entanglement::Entangled
    } else {
        Entanglement::NotEntangled
    }
}

fn db(v: f64) -> f64 {
    if v > 0.0 {
        10.0 * libm::log10(v)
    } else {
        f64::NEG_INFINITY
    }
}

/// Evaluate `H(iω) = C(iωI − A)⁻¹B + D`.
///
/// At `ω = 0` this is the zero-frequency gain `D − CA⁻¹B`. Fails with a
/// singularity error when the resolvent is singular or too ill-conditioned
/// to trust (a marginal or unstable drift matrix at `ω = 0`).
pub fn transfer_matrix(ss: &StateSpace, omega: f64) -> Result<TransferMatrix, Error> {
    let x = linalg::resolvent_solve(&ss.a, omega, &ss.b)?;
    let mut h = [[Complex::new(0.0, 0.0); INPUT_DIM]; OUTPUT_DIM];
    for (i, h_row) in h.iter_mut().enumerate() {
        for (j, entry) in h_row.iter_mut().enumerate() {
            let mut acc = Complex::new(ss.d[i][j], 0.0);
            for (c_ik, x_row) in ss.c[i].iter().zip(&x) {
                acc += c_ik * x_row[j];
            }
            *entry = acc;
        }
    }
    Ok(TransferMatrix { omega, h })
}

fn spectra_from_transfer(tm: &TransferMatrix) -> Spectra {
    let mut v_plus = 0.0;
    let mut v_minus = 0.0;
    for j in 0..INPUT_DIM {
        let h1 = tm.h[0][j] + tm.h[2][j];
        let h2 = tm.h[1][j] - tm.h[3][j];
        v_plus += h1.norm_sqr();
        v_minus += h2.norm_sqr();
    }
    let v_total = v_plus + v_minus;
    Spectra {
        omega: tm.omega,
        v_plus,
        v_minus,
        v_total,
        v_plus_db: db(v_plus),
        v_minus_db: db(v_minus),
        entangled: v_total < 4.0,
    }
}

/// Two-mode squeezing spectra at `ω`.
pub fn squeezing_spectra(ss: &StateSpace, omega: f64) -> Result<Spectra, Error> {
    Ok(spectra_from_transfer(&transfer_matrix(ss, omega)?))
}

/// Spectra with extra output rotations `ψ₁`, `ψ₂` applied to the two
/// outgoing fields.
///
/// A phase `e^{iψ}` on an output is the 2×2 quadrature rotation by `ψ` on
/// its `(q, p)` rows of `C` and `D`; this equals shifting `(φ₁, φ₂)` by
/// `(ψ₁, ψ₂)` in the configuration.
pub fn rotated_spectra(
    ss: &StateSpace,
    omega: f64,
    psi1: f64,
    psi2: f64,
) -> Result<Spectra, Error> {
    let mut rotated = ss.clone();
    rotate_rows(&mut rotated.c, 0, psi1);
    rotate_rows(&mut rotated.d, 0, psi1);
    rotate_rows(&mut rotated.c, 2, psi2);
    rotate_rows(&mut rotated.d, 2, psi2);
    squeezing_spectra(&rotated, omega)
}

fn rotate_rows<const W: usize>(m: &mut [[f64; W]; OUTPUT_DIM], first_row: usize, psi: f64) {
    let (c, s) = (libm::cos(psi), libm::sin(psi));
    let (head, tail) = m.split_at_mut(first_row + 1);
    for (q, p) in head[first_row].iter_mut().zip(tail[0].iter_mut()) {
        let (q0, p0) = (*q, *p);
        *q = c * q0 - s * p0;
        *p = s * q0 + c * p0;
    }
}
