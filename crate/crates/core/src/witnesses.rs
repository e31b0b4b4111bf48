//! Closed-form nonclassicality witnesses built from a [`CoefficientSet`] and
//! the initial coherent amplitudes.
//!
//! Every function returns the raw signed quantity. Variances are nonclassical
//! below `1/4`; every other witness is nonclassical below zero.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::coeffs::{coefficients, CoefficientSet};
use crate::error::WitnessError;
use crate::params::{InitialState, ModelParams};

/// Coherent-state quadrature variance.
pub const VACUUM_VARIANCE: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    A,
    B,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::A => "a",
            Mode::B => "b",
        })
    }
}

/// Which quadrature a variance belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuadratureMode {
    A,
    B,
    Ab,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WitnessKind {
    VarXa,
    VarYa,
    VarXb,
    VarYb,
    VarXab,
    VarYab,
    Da,
    Db,
    DNab2,
    Hz1,
    Hz2,
    Duan,
    /// `<a†ⁿaⁿ> - <a†a>ⁿ`; `n = 2` is ordinary antibunching.
    Hoa {
        mode: Mode,
        n: u32,
    },
    /// `E_{n,n}`; `n = 1` is HZ-1.
    Hoe {
        n: u32,
    },
}

impl WitnessKind {
    pub fn hoa(mode: Mode, n: u32) -> Result<Self, WitnessError> {
        if n < 2 {
            return Err(WitnessError::HoaOrder(n));
        }
        Ok(Self::Hoa { mode, n })
    }

    pub fn hoe(n: u32) -> Result<Self, WitnessError> {
        if n < 1 {
            return Err(WitnessError::HoeOrder(n));
        }
        Ok(Self::Hoe { n })
    }

    pub const LOWER_ORDER: [WitnessKind; 12] = [
        Self::VarXa,
        Self::VarYa,
        Self::VarXb,
        Self::VarYb,
        Self::VarXab,
        Self::VarYab,
        Self::Da,
        Self::Db,
        Self::DNab2,
        Self::Hz1,
        Self::Hz2,
        Self::Duan,
    ];

    /// Lower-order witnesses plus HOA for n = 2..4 on both modes and HOE for n = 1..3.
    pub fn full_catalogue() -> Vec<WitnessKind> {
        let mut all = Self::LOWER_ORDER.to_vec();
        for mode in [Mode::A, Mode::B] {
            all.extend((2..=4).map(|n| Self::Hoa { mode, n }));
        }
        all.extend((1..=3).map(|n| Self::Hoe { n }));
        all
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::VarXa => "var_x_a",
            Self::VarYa => "var_y_a",
            Self::VarXb => "var_x_b",
            Self::VarYb => "var_y_b",
            Self::VarXab => "var_x_ab",
            Self::VarYab => "var_y_ab",
            Self::Da => "d_a",
            Self::Db => "d_b",
            Self::DNab2 => "d_nab2",
            Self::Hz1 => "hz1",
            Self::Hz2 => "hz2",
            Self::Duan => "duan",
            Self::Hoa { mode: Mode::A, .. } => "hoa_a",
            Self::Hoa { mode: Mode::B, .. } => "hoa_b",
            Self::Hoe { .. } => "hoe",
        }
    }

    pub fn order(&self) -> Option<u32> {
        match self {
            Self::Hoa { n, .. } | Self::Hoe { n } => Some(*n),
            _ => None,
        }
    }

    /// Value a coherent (classical) state gives.
    pub fn classical_baseline(&self) -> f64 {
        match self {
            Self::VarXa | Self::VarYa | Self::VarXb | Self::VarYb | Self::VarXab | Self::VarYab => {
                VACUUM_VARIANCE
            }
            _ => 0.0,
        }
    }

    /// Parses `name` or `name:n`, e.g. `hz1`, `hoa_b:3`, `hoe:2`.
    pub fn parse(spec: &str) -> Result<Self, ParseWitnessError> {
        let spec = spec.trim();
        let (name, order) = match spec.split_once(':') {
            Some((name, n)) => {
                let n = n
                    .trim()
                    .parse::<u32>()
                    .map_err(|_| ParseWitnessError::BadOrder(spec.to_string()))?;
                (name.trim(), Some(n))
            }
            None => (spec, None),
        };
        let plain = |kind: WitnessKind| match order {
            None => Ok(kind),
            Some(_) => Err(ParseWitnessError::UnexpectedOrder(spec.to_string())),
        };
        let need = || order.ok_or_else(|| ParseWitnessError::MissingOrder(spec.to_string()));
        let kind = match name {
            "var_x_a" => plain(Self::VarXa)?,
            "var_y_a" => plain(Self::VarYa)?,
            "var_x_b" => plain(Self::VarXb)?,
            "var_y_b" => plain(Self::VarYb)?,
            "var_x_ab" => plain(Self::VarXab)?,
            "var_y_ab" => plain(Self::VarYab)?,
            "d_a" => plain(Self::Da)?,
            "d_b" => plain(Self::Db)?,
            "d_nab2" => plain(Self::DNab2)?,
            "hz1" => plain(Self::Hz1)?,
            "hz2" => plain(Self::Hz2)?,
            "duan" => plain(Self::Duan)?,
            "hoa_a" => Self::hoa(Mode::A, need()?)?,
            "hoa_b" => Self::hoa(Mode::B, need()?)?,
            "hoe" => Self::hoe(need()?)?,
            _ => return Err(ParseWitnessError::Unknown(spec.to_string())),
        };
        Ok(kind)
    }
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.order() {
            Some(n) => write!(f, "{}:{}", self.name(), n),
            None => f.write_str(self.name()),
        }
    }
}

impl FromStr for WitnessKind {
    type Err = ParseWitnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseWitnessError {
    #[error("unknown witness `{0}`")]
    Unknown(String),
    #[error("witness `{0}` needs an order, e.g. `hoa_a:3`")]
    MissingOrder(String),
    #[error("witness `{0}` takes no order")]
    UnexpectedOrder(String),
    #[error("bad order in `{0}`")]
    BadOrder(String),
    #[error(transparent)]
    Order(#[from] WitnessError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Perturbative,
    Oracle,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Perturbative => "perturbative",
            Method::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessResult {
    pub kind: WitnessKind,
    pub value: f64,
    pub time: f64,
    pub method: Method,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureVariances {
    pub mode: QuadratureMode,
    pub var_x: f64,
    pub var_y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatisticsWitnesses {
    pub d_a: f64,
    pub d_b: f64,
    pub d_nab2: f64,
}

/// Which closed form to use for the coupled-mode variances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoupledForm {
    /// Mode-symmetric split: `(f1f3+f1f5+2f1g9) a²` paired with
    /// `(g1g3+g1g5+2g1f9) b²`. Agrees with exact dynamics to third order.
    #[default]
    Symmetric,
    /// `(f1f3+f1f5+2f1g9)(a²+b*²)`, which flips the sign of the `f1f3 b*²`
    /// contribution and leaves an `O(kappa delta_mu t²)` offset. Kept for
    /// reproducing published curves.
    AsPrinted,
}

fn conj(z: Complex64) -> Complex64 {
    z.conj()
}

/// `{z + c.c.}`
fn twice_re(z: Complex64) -> f64 {
    2.0 * z.re
}

fn variances(mode: QuadratureMode, base: f64, bracket: f64) -> QuadratureVariances {
    QuadratureVariances {
        mode,
        var_x: 0.25 * (1.0 + base + bracket),
        var_y: 0.25 * (1.0 + base - bracket),
    }
}

pub fn var_quadrature_a(c: &CoefficientSet, s: &InitialState) -> QuadratureVariances {
    let (al, be) = (s.alpha, s.beta);
    let na = s.mean_a();
    let (f1, f3, f5, f8) = (c.f(1), c.f(3), c.f(5), c.f(8));
    let bracket = (f1 * f3 + f1 * f5) * al * al + f1 * f8 * al * be + 3.0 * f3 * f3 * na * al * al;
    variances(
        QuadratureMode::A,
        2.0 * f3.norm_sqr() * na * na,
        twice_re(bracket),
    )
}

pub fn var_quadrature_b(c: &CoefficientSet, s: &InitialState) -> QuadratureVariances {
    let (al, be) = (s.alpha, s.beta);
    let nb = s.mean_b();
    let (g1, g3, g5, g8) = (c.g(1), c.g(3), c.g(5), c.g(8));
    let bracket = (g1 * g3 + g1 * g5) * be * be + g1 * g8 * al * be + 3.0 * g3 * g3 * nb * be * be;
    variances(
        QuadratureMode::B,
        2.0 * g3.norm_sqr() * nb * nb,
        twice_re(bracket),
    )
}

/// Coupled-mode variances in the mode-symmetric form.
pub fn var_quadrature_ab(c: &CoefficientSet, s: &InitialState) -> QuadratureVariances {
    var_quadrature_ab_with(c, s, CoupledForm::Symmetric)
}

pub fn var_quadrature_ab_with(
    c: &CoefficientSet,
    s: &InitialState,
    form: CoupledForm,
) -> QuadratureVariances {
    let (al, be) = (s.alpha, s.beta);
    let (na, nb) = (s.mean_a(), s.mean_b());
    let (f1, f3, f5, f8, f9) = (c.f(1), c.f(3), c.f(5), c.f(8), c.f(9));
    let (g1, g3, g5, g8, g9) = (c.g(1), c.g(3), c.g(5), c.g(8), c.g(9));
    let common = (f1 * f8 + g1 * g8) * al * be;
    let bracket = match form {
        CoupledForm::Symmetric => {
            (f1 * f3 + f1 * f5 + 2.0 * f1 * g9) * al * al
                + (g1 * g3 + g1 * g5 + 2.0 * g1 * f9) * be * be
                + common
                + 3.0 * f3 * f3 * na * al * al
                + 3.0 * g3 * g3 * nb * be * be
        }
        CoupledForm::AsPrinted => {
            let bc = conj(be);
            (f1 * f3 + f1 * f5 + 2.0 * f1 * g9) * (al * al + bc * bc)
                + common
                + 3.0 * f3 * f3 * (na * al * al + bc * bc * nb)
        }
    };
    variances(
        QuadratureMode::Ab,
        f3.norm_sqr() * (na * na + nb * nb),
        0.5 * twice_re(bracket),
    )
}

/// `D_a = (ΔN_a)² - <N_a>`.
pub fn d_a(c: &CoefficientSet, s: &InitialState) -> f64 {
    -twice_re(2.0 * c.f(1) * conj(c.f(9)) * s.mean_a() * s.alpha * conj(s.beta))
}

pub fn d_b(c: &CoefficientSet, s: &InitialState) -> f64 {
    -twice_re(2.0 * c.g(1) * conj(c.g(9)) * s.mean_b() * s.beta * conj(s.alpha))
}

/// `(ΔN_ab)² = <a†b†ba> - <N_a><N_b>`.
pub fn d_nab2(c: &CoefficientSet, s: &InitialState) -> f64 {
    twice_re(conj(c.f(1)) * c.f(9) * s.mean_total() * conj(s.alpha) * s.beta)
}

pub fn statistics(c: &CoefficientSet, s: &InitialState) -> StatisticsWitnesses {
    StatisticsWitnesses {
        d_a: d_a(c, s),
        d_b: d_b(c, s),
        d_nab2: d_nab2(c, s),
    }
}

fn f3_quartic(c: &CoefficientSet, s: &InitialState) -> f64 {
    let (na, nb) = (s.mean_a(), s.mean_b());
    c.f(3).norm_sqr() * (na * nb * nb + na * na * nb)
}

/// HZ-1: `<N_a N_b> - |<a b†>|²`.
pub fn hz1(c: &CoefficientSet, s: &InitialState) -> f64 {
    let (al, be) = (s.alpha, s.beta);
    let (na, nb) = (s.mean_a(), s.mean_b());
    let coef = c.f(1) * conj(c.f(7)) - c.f(2) * conj(c.f(3));
    f3_quartic(c, s) + twice_re(coef * (conj(al) * na * be + conj(al) * nb * be))
}

/// HZ-2: `<N_a><N_b> - |<a b>|²`.
pub fn hz2(c: &CoefficientSet, s: &InitialState) -> f64 {
    let (al, be) = (s.alpha, s.beta);
    let (na, nb) = (s.mean_a(), s.mean_b());
    let coef = c.g(1) * conj(c.g(7)) - c.g(2) * conj(c.g(3));
    f3_quartic(c, s) - twice_re(coef * (al * nb * conj(be) + na * conj(al) * be))
}

/// Duan sum `<(Δu)²> + <(Δv)²> - 2`; never negative here.
pub fn duan(c: &CoefficientSet, s: &InitialState) -> f64 {
    let (na, nb) = (s.mean_a(), s.mean_b());
    2.0 * c.f(3).norm_sqr() * (na * na + nb * nb)
}

/// `<x†ⁿxⁿ> - <x†x>ⁿ` for mode `x`.
pub fn hoa(c: &CoefficientSet, s: &InitialState, mode: Mode, n: u32) -> Result<f64, WitnessError> {
    if n < 2 {
        return Err(WitnessError::HoaOrder(n));
    }
    // mode b mirrors mode a with g in place of f and the amplitudes swapped
    let (x1, x3, x9, own, other) = match mode {
        Mode::A => (c.f(1), c.f(3), c.f(9), s.alpha, s.beta),
        Mode::B => (c.g(1), c.g(3), c.g(9), s.beta, s.alpha),
    };
    let nn = own.norm_sqr();
    let nf = n as f64;
    let cubic = x3.norm_sqr() * nf * (nf - 1.0) * (nf - 2.0) / 3.0 * nn.powi(n as i32 + 1);
    let cross = x1 * conj(x9) * (nf * (nf - 1.0)) * nn.powi(n as i32 - 1) * own * conj(other);
    Ok(cubic - twice_re(cross))
}

/// `E_{n,n} = <a†ⁿaⁿb†ⁿbⁿ> - |<aⁿb†ⁿ>|²`.
pub fn hoe(c: &CoefficientSet, s: &InitialState, n: u32) -> Result<f64, WitnessError> {
    if n < 1 {
        return Err(WitnessError::HoeOrder(n));
    }
    let (al, be) = (s.alpha, s.beta);
    let (na, nb) = (s.mean_a(), s.mean_b());
    let k = n as i32;
    let n2 = (n * n) as f64;
    let quartic =
        c.f(3).norm_sqr() * n2 * (na.powi(k) * nb.powi(k + 1) + na.powi(k + 1) * nb.powi(k));
    let coef = c.f(1) * conj(c.f(7)) - c.f(2) * conj(c.f(3));
    let phase = conj(al) * be;
    let cross =
        coef * n2 * (phase * na.powi(k - 1) * nb.powi(k) + phase * na.powi(k) * nb.powi(k - 1));
    Ok(quartic + twice_re(cross))
}

/// `<N_a(t)>` to second order in the couplings, from the operator expansion.
pub fn mean_number_a(c: &CoefficientSet, s: &InitialState) -> f64 {
    let f = |i| c.f(i);
    mean_number_mirror(&f, s.alpha, s.beta)
}

pub fn mean_number_b(c: &CoefficientSet, s: &InitialState) -> f64 {
    let g = |i| c.g(i);
    mean_number_mirror(&g, s.beta, s.alpha)
}

/// `<x†(t) x(t)>` for `x(t) = sum_i k_i M_i` where `own` is the coherent
/// amplitude of `x` and `other` that of the partner mode. Pairs of total
/// order above two in the couplings are dropped.
fn mean_number_mirror(k: &dyn Fn(usize) -> Complex64, own: Complex64, other: Complex64) -> f64 {
    let n = own.norm_sqr();
    let m = other.norm_sqr();
    // c-number images of the normally ordered monomials M_1..M_9
    let monomials = [
        own,
        other,
        n * own,
        own,
        n * own,
        n * n * own,
        own * own * conj(other),
        n * other,
        m * other,
    ];
    let k1 = k(1);
    let mut total = k1.norm_sqr() * n;
    for (i, mono) in monomials.iter().enumerate().skip(1) {
        total += twice_re(conj(k1) * k(i + 1) * conj(own) * mono);
    }
    let (k2, k3) = (k(2), k(3));
    total += k2.norm_sqr() * m;
    total += twice_re(conj(k2) * k3 * conj(other) * n * own);
    total += k3.norm_sqr() * (n * n * n + n * n);
    total
}

/// `g²(0)` of mode a, `None` when `<N_a>` vanishes.
pub fn g2_a(c: &CoefficientSet, s: &InitialState) -> Option<f64> {
    let mean = mean_number_a(c, s);
    (mean > 0.0).then(|| 1.0 + d_a(c, s) / (mean * mean))
}

pub fn g2_b(c: &CoefficientSet, s: &InitialState) -> Option<f64> {
    let mean = mean_number_b(c, s);
    (mean > 0.0).then(|| 1.0 + d_b(c, s) / (mean * mean))
}

/// Intermodal `g²_ab(0)`, `None` when either mean occupation vanishes.
pub fn g2_ab(c: &CoefficientSet, s: &InitialState) -> Option<f64> {
    let (ma, mb) = (mean_number_a(c, s), mean_number_b(c, s));
    (ma > 0.0 && mb > 0.0).then(|| 1.0 + d_nab2(c, s) / (ma * mb))
}

/// Evaluates a [`WitnessKind`] against one coefficient set.
#[derive(Debug, Clone, Copy)]
pub struct Perturbative<'a> {
    pub coeffs: &'a CoefficientSet,
    pub state: &'a InitialState,
    pub form: CoupledForm,
}

impl<'a> Perturbative<'a> {
    pub fn new(coeffs: &'a CoefficientSet, state: &'a InitialState) -> Self {
        Self {
            coeffs,
            state,
            form: CoupledForm::default(),
        }
    }

    pub fn with_form(mut self, form: CoupledForm) -> Self {
        self.form = form;
        self
    }

    pub fn value(&self, kind: WitnessKind) -> Result<f64, WitnessError> {
        let (c, s) = (self.coeffs, self.state);
        Ok(match kind {
            WitnessKind::VarXa => var_quadrature_a(c, s).var_x,
            WitnessKind::VarYa => var_quadrature_a(c, s).var_y,
            WitnessKind::VarXb => var_quadrature_b(c, s).var_x,
            WitnessKind::VarYb => var_quadrature_b(c, s).var_y,
            WitnessKind::VarXab => var_quadrature_ab_with(c, s, self.form).var_x,
            WitnessKind::VarYab => var_quadrature_ab_with(c, s, self.form).var_y,
            WitnessKind::Da => d_a(c, s),
            WitnessKind::Db => d_b(c, s),
            WitnessKind::DNab2 => d_nab2(c, s),
            WitnessKind::Hz1 => hz1(c, s),
            WitnessKind::Hz2 => hz2(c, s),
            WitnessKind::Duan => duan(c, s),
            WitnessKind::Hoa { mode, n } => hoa(c, s, mode, n)?,
            WitnessKind::Hoe { n } => hoe(c, s, n)?,
        })
    }
}

/// Perturbative values of `kinds` at time `t`.
pub fn evaluate(
    params: &ModelParams,
    state: &InitialState,
    t: f64,
    kinds: &[WitnessKind],
    form: CoupledForm,
) -> Result<Vec<WitnessResult>, WitnessError> {
    let c = coefficients(params, t);
    let eval = Perturbative::new(&c, state).with_form(form);
    kinds
        .iter()
        .map(|&kind| {
            Ok(WitnessResult {
                kind,
                value: eval.value(kind)?,
                time: t,
                method: Method::Perturbative,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG: ModelParams = ModelParams::new(10.0, 500.0, 1e4);

    fn fig_state() -> InitialState {
        InitialState::real(5.0, 5.0)
    }

    fn generic_state() -> InitialState {
        InitialState::new(Complex64::new(1.3, -0.4), Complex64::new(-0.2, 0.9))
    }

    #[test]
    fn baselines_at_t0() {
        for s in [fig_state(), generic_state()] {
            let c = coefficients(&FIG, 0.0);
            for kind in WitnessKind::full_catalogue() {
                let v = Perturbative::new(&c, &s).value(kind).unwrap();
                assert!((v - kind.classical_baseline()).abs() < 1e-12, "{kind}");
            }
        }
    }

    #[test]
    fn kappa_zero_is_classical() {
        let p = ModelParams::new(0.0, 500.0, 3e3);
        let s = generic_state();
        for t in [1e-4, 1e-3, 2e-2] {
            let c = coefficients(&p, t);
            for form in [CoupledForm::Symmetric, CoupledForm::AsPrinted] {
                let eval = Perturbative::new(&c, &s).with_form(form);
                for kind in WitnessKind::full_catalogue() {
                    let v = eval.value(kind).unwrap();
                    assert!(
                        (v - kind.classical_baseline()).abs() < 1e-15,
                        "{kind} at t={t}"
                    );
                }
            }
        }
    }

    #[test]
    fn epsilon_zero_kills_number_statistics() {
        let p = ModelParams::new(10.0, 0.0, 1e4);
        let c = coefficients(&p, 3e-3);
        let s = generic_state();
        assert_eq!(d_a(&c, &s), 0.0);
        assert_eq!(d_b(&c, &s), 0.0);
        assert_eq!(d_nab2(&c, &s), 0.0);
    }

    #[test]
    fn duan_closed_form() {
        let c = coefficients(&ModelParams::new(10.0, 500.0, 1e4), 1e-3);
        let v = duan(&c, &fig_state());
        assert!((v - 0.0625).abs() < 1e-15);
    }

    #[test]
    fn hoa_rejects_low_order() {
        let c = coefficients(&FIG, 1e-3);
        assert_eq!(
            hoa(&c, &fig_state(), Mode::A, 1),
            Err(WitnessError::HoaOrder(1))
        );
        assert_eq!(hoe(&c, &fig_state(), 0), Err(WitnessError::HoeOrder(0)));
        assert!(WitnessKind::hoa(Mode::B, 0).is_err());
        assert!(WitnessKind::hoe(0).is_err());
    }

    #[test]
    fn hoa_two_is_d() {
        let c = coefficients(&FIG, 1.7e-3);
        let s = generic_state();
        assert_eq!(hoa(&c, &s, Mode::A, 2).unwrap(), d_a(&c, &s));
        assert_eq!(hoa(&c, &s, Mode::B, 2).unwrap(), d_b(&c, &s));
        assert_eq!(hoe(&c, &s, 1).unwrap(), hz1(&c, &s));
    }

    #[test]
    fn equal_real_amplitudes_give_opposite_intermodal_statistics() {
        for t in [1e-4, 1e-3, 4e-3] {
            let c = coefficients(&FIG, t);
            let s = InitialState::real(2.5, 2.5);
            assert!((d_nab2(&c, &s) + d_a(&c, &s)).abs() <= 1e-13 * d_a(&c, &s).abs());
        }
    }

    #[test]
    fn printed_coupled_form_differs_only_in_b_cubic_sign() {
        let c = coefficients(&FIG, 2e-3);
        let s = generic_state();
        let sym = var_quadrature_ab_with(&c, &s, CoupledForm::Symmetric);
        let printed = var_quadrature_ab_with(&c, &s, CoupledForm::AsPrinted);
        // difference is (1/4)(1/2)·2Re{2 f1 f3 b*²}
        let delta = 0.25 * 0.5 * twice_re(2.0 * c.f(1) * c.f(3) * conj(s.beta * s.beta));
        assert!((printed.var_x - sym.var_x - delta).abs() < 1e-15);
        assert!((printed.var_y - sym.var_y + delta).abs() < 1e-15);
    }

    #[test]
    fn parse_round_trip() {
        for kind in WitnessKind::full_catalogue() {
            assert_eq!(kind.to_string().parse::<WitnessKind>().unwrap(), kind);
        }
        assert!(WitnessKind::parse("hoa_a").is_err());
        assert!(WitnessKind::parse("hz1:2").is_err());
        assert!(WitnessKind::parse("hoa_a:1").is_err());
        assert!(WitnessKind::parse("wigner").is_err());
    }

    #[test]
    fn g2_guards_empty_modes() {
        let c = coefficients(&FIG, 1e-3);
        let s = InitialState::real(0.0, 2.0);
        assert_eq!(g2_a(&c, &s).is_some(), mean_number_a(&c, &s) > 0.0);
        let vac = InitialState::real(0.0, 0.0);
        assert_eq!(g2_a(&c, &vac), None);
        assert_eq!(g2_b(&c, &vac), None);
        assert_eq!(g2_ab(&c, &vac), None);
        let g = g2_a(&c, &fig_state()).unwrap();
        assert!((g - 1.0).abs() < 1.0);
    }

    #[test]
    fn mean_number_initial_and_conservation() {
        let s = generic_state();
        let c0 = coefficients(&FIG, 0.0);
        assert!((mean_number_a(&c0, &s) - s.mean_a()).abs() < 1e-15);
        assert!((mean_number_b(&c0, &s) - s.mean_b()).abs() < 1e-15);
        // total number is conserved up to neglected third-order terms
        let c = coefficients(&FIG, 1e-5);
        let total = mean_number_a(&c, &s) + mean_number_b(&c, &s);
        assert!((total - s.mean_total()).abs() < 1e-6);
    }
}
