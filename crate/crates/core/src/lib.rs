//! Dual-NOPA coherent feedback network: quadrature state-space model,
//! stability analysis and two-mode squeezing spectra.
//!
//! Two nondegenerate optical parametric amplifiers sit at distant nodes of a
//! measurement-free feedback loop. The transmission channels between them
//! carry phase shifts and beamsplitter losses; each cavity mode suffers an
//! extra amplification-loss decay. This crate models the closed loop as a
//! real linear system on quadratures,
//!
//! ```text
//! dz/dt  = A z + B xi,          z   = (a1^q, a1^p, b1^q, b1^p, a2^q, a2^p, b2^q, b2^p)
//! xi_out = C z + D xi,          xi  = 16 input quadratures (signals, losses, beamsplitter noise)
//! ```
//!
//! and evaluates the two-mode squeezing spectra `V±(iω)` of the two outgoing
//! fields. `V+ + V− < 4` certifies EPR entanglement between them.
//!
//! The crate is organised around two independent computation routes that are
//! cross-checked in the test suite:
//!
//! * the state-space route ([`model`], [`spectra`], [`stability`]): build
//!   `A, B, C, D`, evaluate transfer functions through a complex resolvent
//!   solve, decide stability from the eigenvalues of `A`;
//! * the closed-form route ([`closedform`], [`stability`]): polynomial
//!   expressions for `V±(0)` with and without losses, the optimal output
//!   phase compensation, and an explicit stability inequality.
//!
//! [`analysis`] sits on top of both: entanglement-boundary root finding,
//! parameter sweeps and the loss tables. [`validate`] provides the seeded
//! random-config equivalence sweep used by CI and the command line.
//!
//! `no_std` compatible (requires `alloc`); all floating-point math goes
//! through `libm`.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod closedform;
pub mod config;
pub mod error;
mod linalg;
pub mod model;
pub mod spectra;
pub mod stability;
pub mod validate;

pub use analysis::{
    entanglement_region, find_boundary, reproduce_table, sweep, AxisSpec, BoundaryRoots, Engine,
    GridValue, Quantity, SweepGrid, SweepVar, TableKind, TableRow, TABLE_AMPLIFICATION,
    TABLE_TOL, TABLE_TRANSMISSION,
};
pub use closedform::{
    diagnostic_f, diagnostic_g, diagnostic_h, lossless_coeffs, lossy_coeffs, optimal_phi,
    v_im_curve, v_nops, v_pm_lossless, v_pm_lossy, v_ps, LosslessCoeffs, LossyCoeffs, PhasePlan,
    PhiBranch, RateParams,
};
pub use config::{
    decompose_phases, wrap_angle, PhaseDecomposition, RawConfig, SystemConfig, DEFAULT_GAMMA_R,
    DEFAULT_KAPPA_SCALE,
};
pub use error::Error;
pub use model::{build_state_space, StateSpace, INPUT_DIM, OUTPUT_DIM, STATE_DIM};
pub use spectra::{
    classify_entanglement, rotated_spectra, squeezing_spectra, transfer_matrix, Entanglement,
    Spectra, TransferMatrix,
};
pub use stability::{
    closed_form_stable, hurwitz_check, max_real_eigen_formula, stability_report, StabilityReport,
};
pub use validate::{random_stable_config, run_equivalence, SampleMode, ValidationOutcome};
