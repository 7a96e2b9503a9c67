//! Quadrature state-space model of the feedback network.
//!
//! Each complex mode equation is expanded into 2×2 real blocks acting on the
//! quadratures `a^q = a + a*`, `a^p = −i(a − a*)`:
//!
//! * a direct term `ȧ = c·b` becomes `[[Re c, −Im c], [Im c, Re c]]` on
//!   `(b^q, b^p)`;
//! * a conjugate term `ȧ = c·b*` becomes `[[Re c, Im c], [Im c, −Re c]]`.
//!
//! The pump couplings are the only conjugate terms; every transport,
//! loss and output term is direct.

use crate::config::SystemConfig;

/// Number of state quadratures (four cavity modes).
pub const STATE_DIM: usize = 8;
/// Number of input quadratures (two signals, four losses, two beamsplitter
/// noises).
pub const INPUT_DIM: usize = 16;
/// Number of output quadratures (the two outgoing fields).
pub const OUTPUT_DIM: usize = 4;

/// Real state-space model `ż = Az + Bξ`, `ξ_out = Cz + Dξ`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct StateSpace {
    /// 8×8 drift matrix.
    pub a: [[f64; STATE_DIM]; STATE_DIM],
    /// 8×16 input coupling matrix.
    pub b: [[f64; INPUT_DIM]; STATE_DIM],
    /// 4×8 output coupling matrix.
    pub c: [[f64; STATE_DIM]; OUTPUT_DIM],
    /// 4×16 feedthrough matrix.
    pub d: [[f64; INPUT_DIM]; OUTPUT_DIM],
}

impl StateSpace {
    /// State ordering: `(a1, b1, a2, b2)`, `q` before `p`.
    pub const STATE_ORDER: [&'static str; STATE_DIM] = [
        "a1_q", "a1_p", "b1_q", "b1_p", "a2_q", "a2_p", "b2_q", "b2_p",
    ];

    /// Input ordering: the two ingoing signals, the four amplification-loss
    /// fields, the two beamsplitter noise fields, `q` before `p` each.
    pub const INPUT_ORDER: [&'static str; INPUT_DIM] = [
        "in_a1_q", "in_a1_p", "in_b2_q", "in_b2_p", "loss_a1_q", "loss_a1_p", "loss_b1_q",
        "loss_b1_p", "loss_a2_q", "loss_a2_p", "loss_b2_q", "loss_b2_p", "bs1_q", "bs1_p",
        "bs2_q", "bs2_p",
    ];

    /// Output ordering: `ξ_out,b,1` then `ξ_out,a,2`, `q` before `p`.
    pub const OUTPUT_ORDER: [&'static str; OUTPUT_DIM] =
        ["out_b1_q", "out_b1_p", "out_a2_q", "out_a2_p"];

    /// True when every entry of every matrix is finite.
    pub fn is_finite(&self) -> bool {
        self.a.iter().flatten().all(|v| v.is_finite())
            && self.b.iter().flatten().all(|v| v.is_finite())
            && self.c.iter().flatten().all(|v| v.is_finite())
            && self.d.iter().flatten().all(|v| v.is_finite())
    }
}

/// Mode indices into the state vector (block row/column numbers).
const A1: usize = 0;
const B1: usize = 1;
const A2: usize = 2;
const B2: usize = 3;

/// Input-field block indices.
const IN_A1: usize = 0;
const IN_B2: usize = 1;
const LOSS_A1: usize = 2;
const LOSS_B1: usize = 3;
const LOSS_A2: usize = 4;
const LOSS_B2: usize = 5;
const BS1: usize = 6;
const BS2: usize = 7;

/// Output-field block indices.
const OUT_B1: usize = 0;
const OUT_A2: usize = 1;

/// Write the quadrature block of a direct term with coefficient
/// `r·e^{i·angle}` at block position (`row`, `col`).
fn add_direct<const W: usize, const H: usize>(
    m: &mut [[f64; W]; H],
    row: usize,
    col: usize,
    r: f64,
    angle: f64,
) {
    let (re, im) = (r * libm::cos(angle), r * libm::sin(angle));
    m[2 * row][2 * col] += re;
    m[2 * row][2 * col + 1] += -im;
    m[2 * row + 1][2 * col] += im;
    m[2 * row + 1][2 * col + 1] += re;
}

/// Write the quadrature block of a conjugate term with real coefficient `r`
/// at block position (`row`, `col`).
fn add_conjugate<const W: usize, const H: usize>(
    m: &mut [[f64; W]; H],
    row: usize,
    col: usize,
    r: f64,
) {
    m[2 * row][2 * col] += r;
    m[2 * row + 1][2 * col + 1] += -r;
}

/// Build the real matrices `A, B, C, D` from a validated configuration.
pub fn build_state_space(cfg: &SystemConfig) -> StateSpace {
    let SystemConfig {
        alpha,
        beta,
        theta1,
        theta2,
        phi1,
        phi2,
        epsilon,
        gamma,
        kappa,
        ..
    } = *cfg;

    let decay = -(gamma + kappa) / 2.0;
    let pump = epsilon / 2.0;
    let sg = libm::sqrt(gamma);
    let sk = libm::sqrt(kappa);

    let mut a = [[0.0; STATE_DIM]; STATE_DIM];
    let mut b = [[0.0; INPUT_DIM]; STATE_DIM];
    let mut c = [[0.0; STATE_DIM]; OUTPUT_DIM];
    let mut d = [[0.0; INPUT_DIM]; OUTPUT_DIM];

    // Mode dynamics. Each mode decays at (γ+κ)/2 and couples to its cavity
    // partner through the pump; b1 and a2 additionally receive the
    // transmitted field from the other NOPA.
    for mode in [A1, B1, A2, B2] {
        add_direct(&mut a, mode, mode, decay, 0.0);
    }
    add_conjugate(&mut a, A1, B1, pump);
    add_conjugate(&mut a, B1, A1, pump);
    add_conjugate(&mut a, A2, B2, pump);
    add_conjugate(&mut a, B2, A2, pump);
    add_direct(&mut a, B1, B2, -alpha * gamma, theta2);
    add_direct(&mut a, A2, A1, -alpha * gamma, theta1);

    // Input couplings.
    add_direct(&mut b, A1, IN_A1, -sg, 0.0);
    add_direct(&mut b, A1, LOSS_A1, -sk, 0.0);
    add_direct(&mut b, B1, IN_B2, -alpha * sg, theta2);
    add_direct(&mut b, B1, LOSS_B1, -sk, 0.0);
    add_direct(&mut b, B1, BS2, -beta * sg, 0.0);
    add_direct(&mut b, A2, IN_A1, -alpha * sg, theta1);
    add_direct(&mut b, A2, LOSS_A2, -sk, 0.0);
    add_direct(&mut b, A2, BS1, -beta * sg, 0.0);
    add_direct(&mut b, B2, IN_B2, -sg, 0.0);
    add_direct(&mut b, B2, LOSS_B2, -sk, 0.0);

    // Outputs: each passes through its adjustable phase shifter.
    add_direct(&mut c, OUT_B1, B1, sg, phi1);
    add_direct(&mut c, OUT_B1, B2, alpha * sg, theta2 + phi1);
    add_direct(&mut c, OUT_A2, A2, sg, phi2);
    add_direct(&mut c, OUT_A2, A1, alpha * sg, theta1 + phi2);

    add_direct(&mut d, OUT_B1, IN_B2, alpha, theta2 + phi1);
    add_direct(&mut d, OUT_B1, BS2, beta, phi1);
    add_direct(&mut d, OUT_A2, IN_A1, alpha, theta1 + phi2);
    add_direct(&mut d, OUT_A2, BS1, beta, phi2);

    StateSpace { a, b, c, d }
}
