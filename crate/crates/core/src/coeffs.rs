//! Time-dependent coefficients of the second-order operator solution
//!
//! ```text
//! a(t) = f1 a + f2 b + f3 a†a² + f4 a + f5 a†a² + f6 a†²a³ + f7 a²b† + f8 a†ab + f9 b†b²
//! b(t) = g1 b + g2 a + g3 b†b² + g4 b + g5 b†b² + g6 b†²b³ + g7 b²a† + g8 b†ba + g9 a†a²
//! ```
//!
//! with all operators on the right taken at `t = 0`. First- and second-order
//! pieces (`f1`/`f4`, `f3`/`f5`) are kept apart; witness formulas decide
//! where they are summed.
//!
//! Every `1/delta_mu` and `1/delta_mu²` appearing in the closed forms is a
//! removable singularity. They are all routed through
//!
//! ```text
//! h1(x) = (1 - e^{-ix}) / x            -> i     as x -> 0
//! h2(x) = (ix - (1 - e^{-ix})) / x²    -> -1/2  as x -> 0
//! ```
//!
//! with `x = delta_mu t`, so `delta_mu = 0` is an ordinary input.
//!
//! `f7` is `f1 (kappa eps t²/4) h2(x)`, i.e. `f1 {i kappa eps t/(4 dmu) - kappa eps G/(4 dmu²)}`.
//! Writing the first term with a minus sign leaves a genuine `1/delta_mu` pole
//! and disagrees with exact dynamics at first order in `epsilon/delta_mu`.

use num_complex::Complex64;

use crate::params::ModelParams;

/// Below this `|x|` the helpers switch to their Maclaurin series.
pub const SERIES_THRESHOLD: f64 = 1e-4;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `x - sin x`, accurate for small `x` where direct subtraction cancels.
fn x_minus_sin(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        return x - x.sin();
    }
    // x³/3! - x⁵/5! + x⁷/7! - ...
    // |x| < 1: eleven terms reach x^23/23!, far below one ulp of the sum.
    let x2 = x * x;
    let mut term = x * x2 / 6.0;
    let mut sum = 0.0;
    for k in (3..25).step_by(2) {
        sum += term;
        term *= -x2 / ((k + 1) * (k + 2)) as f64;
    }
    sum
}

/// `1 - e^{-ix}` without cancellation: `2 sin²(x/2) + i sin x`.
fn one_minus_cis_neg(x: f64) -> Complex64 {
    let s = (0.5 * x).sin();
    Complex64::new(2.0 * s * s, x.sin())
}

pub fn h1(x: f64) -> Complex64 {
    if x.abs() < SERIES_THRESHOLD {
        let x2 = x * x;
        // i + x/2 - i x²/6 - x³/24 + i x⁴/120
        Complex64::new(0.5 * x - x * x2 / 24.0, 1.0 - x2 / 6.0 + x2 * x2 / 120.0)
    } else {
        one_minus_cis_neg(x) / x
    }
}

pub fn h2(x: f64) -> Complex64 {
    let x2 = x * x;
    if x.abs() < SERIES_THRESHOLD {
        // -1/2 + i x/6 + x²/24 - i x³/120 - x⁴/720
        Complex64::new(-0.5 + x2 / 24.0 - x2 * x2 / 720.0, x / 6.0 - x * x2 / 120.0)
    } else {
        let s = (0.5 * x).sin();
        Complex64::new(-2.0 * s * s / x2, x_minus_sin(x) / x2)
    }
}

/// `G(t) = 1 - e^{-i delta_mu t}`.
pub fn stable_g(delta_mu: f64, t: f64) -> Complex64 {
    let x = delta_mu * t;
    if x.abs() < SERIES_THRESHOLD {
        x * h1(x)
    } else {
        one_minus_cis_neg(x)
    }
}

/// The eighteen coefficients at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientSet {
    pub t: f64,
    f: [Complex64; 9],
    g: [Complex64; 9],
}

impl CoefficientSet {
    /// `f_i`, one-based to match the operator expansion above.
    #[inline]
    pub fn f(&self, i: usize) -> Complex64 {
        self.f[i - 1]
    }

    #[inline]
    pub fn g(&self, i: usize) -> Complex64 {
        self.g[i - 1]
    }

    pub fn f_all(&self) -> &[Complex64; 9] {
        &self.f
    }

    pub fn g_all(&self) -> &[Complex64; 9] {
        &self.g
    }
}

fn f_coefficients(params: &ModelParams, t: f64) -> [Complex64; 9] {
    let ModelParams {
        kappa,
        epsilon,
        delta_mu,
    } = *params;
    let x = delta_mu * t;
    let f1 = Complex64::from_polar(1.0, 0.5 * x);
    let (h1, h2) = (h1(x), h2(x));
    let t2 = t * t;
    let ke = kappa * epsilon * t2;

    let f3 = -I * (0.5 * kappa * t) * f1;
    let f5 = -(kappa * kappa * t2 / 8.0) * f1;
    [
        f1,
        (0.5 * epsilon * t) * f1 * h1,
        f3,
        (0.25 * epsilon * epsilon * t2) * f1 * h2,
        f5,
        f5,
        (0.25 * ke) * f1 * h2,
        (-0.5 * ke) * f1 * h2,
        (0.25 * ke) * f1 * (h2 - I * h1),
    ]
}

/// Evaluates all coefficients at time `t`.
///
/// The `g` set follows from conjugation: `g1 = f1*`, `g2 = -f2*`,
/// `g3 = -f3*`, and `g_i = f_i*` otherwise.
pub fn coefficients(params: &ModelParams, t: f64) -> CoefficientSet {
    let f = f_coefficients(params, t);
    let mut g = f.map(|z| z.conj());
    g[1] = -g[1];
    g[2] = -g[2];
    CoefficientSet { t, f, g }
}

/// The `g` coefficients evaluated independently of the conjugation rules.
///
/// The b-mode equation of motion is the a-mode one with `a <-> b` and
/// `delta_mu -> -delta_mu`, so `g_i(delta_mu) = f_i(-delta_mu)`.
pub fn g_by_mode_mirror(params: &ModelParams, t: f64) -> [Complex64; 9] {
    let mirrored = ModelParams {
        delta_mu: -params.delta_mu,
        ..*params
    };
    f_coefficients(&mirrored, t)
}
