//! Model constants, initial coherent amplitudes, time grids and the
//! perturbative-validity check shared by every other module.
//!
//! Units: `hbar = 1`, and `kappa`, `epsilon`, `delta_mu` are angular
//! frequencies (rad/s) that enter `exp(-i H t)` directly. Figures quoted in
//! "Hz" elsewhere are read as these angular frequencies.

use std::fmt;

use num_complex::Complex64;

use crate::error::ParamError;

/// Constants of the two-mode Hamiltonian
///
/// ```text
/// H = (kappa/4) (a†² a² + b†² b²) - (delta_mu/2) (a†a - b†b) - (epsilon/2) (a†b + b†a)
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Intra-mode interaction strength; repulsive, so never negative.
    pub kappa: f64,
    /// Single-particle tunneling amplitude.
    pub epsilon: f64,
    /// Chemical-potential difference between the modes.
    pub delta_mu: f64,
}

impl ModelParams {
    pub const fn new(kappa: f64, epsilon: f64, delta_mu: f64) -> Self {
        Self {
            kappa,
            epsilon,
            delta_mu,
        }
    }

    /// Parameters with `epsilon` given as a multiple of `kappa`.
    pub fn with_ratio(kappa: f64, epsilon_over_kappa: f64, delta_mu: f64) -> Self {
        Self::new(kappa, epsilon_over_kappa * kappa, delta_mu)
    }

    /// Maps the symmetric dimer form
    /// `H = (g/2)(a†²a² + b†²b²) + k'(a†b + b†a)` onto these constants:
    /// `kappa = 2g`, `epsilon = -2k'`, `delta_mu = 0`.
    pub fn from_symmetric_dimer(g: f64, tunneling: f64) -> Self {
        Self::new(2.0 * g, -2.0 * tunneling, 0.0)
    }

    /// Per-block constant separating the Josephson form
    /// `(kappa/8)(a†a - b†b)² - ...` from the normal-ordered form used here:
    /// in the block of total number `n`, the normal-ordered Hamiltonian equals
    /// the Josephson one plus `(kappa/8) n² - (kappa/4) n`.
    pub fn josephson_block_offset(&self, n: usize) -> f64 {
        let n = n as f64;
        self.kappa / 8.0 * n * n - self.kappa / 4.0 * n
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        for (name, value) in [
            ("kappa", self.kappa),
            ("epsilon", self.epsilon),
            ("delta_mu", self.delta_mu),
        ] {
            if !value.is_finite() {
                return Err(ParamError::NonFinite { field: name, value });
            }
        }
        if self.kappa < 0.0 {
            return Err(ParamError::NegativeKappa(self.kappa));
        }
        Ok(())
    }
}

impl fmt::Display for ModelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "kappa={:e}, epsilon={:e}, delta_mu={:e}",
            self.kappa, self.epsilon, self.delta_mu
        )
    }
}

/// Product coherent state `|alpha> ⊗ |beta>` at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialState {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl InitialState {
    pub const fn new(alpha: Complex64, beta: Complex64) -> Self {
        Self { alpha, beta }
    }

    pub fn real(alpha: f64, beta: f64) -> Self {
        Self::new(Complex64::new(alpha, 0.0), Complex64::new(beta, 0.0))
    }

    /// Mode exchange `a <-> b`.
    pub fn swapped(&self) -> Self {
        Self::new(self.beta, self.alpha)
    }

    /// Initial mean occupation of mode a.
    pub fn mean_a(&self) -> f64 {
        self.alpha.norm_sqr()
    }

    pub fn mean_b(&self) -> f64 {
        self.beta.norm_sqr()
    }

    pub fn mean_total(&self) -> f64 {
        self.mean_a() + self.mean_b()
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        for (name, z) in [("alpha", self.alpha), ("beta", self.beta)] {
            if !(z.re.is_finite() && z.im.is_finite() && z.norm_sqr().is_finite()) {
                return Err(ParamError::NonFiniteAmplitude { field: name });
            }
        }
        Ok(())
    }
}

/// Checks both invariants and hands the pair back unchanged.
pub fn validate(
    params: ModelParams,
    state: InitialState,
) -> Result<(ModelParams, InitialState), ParamError> {
    params.validate()?;
    state.validate()?;
    Ok((params, state))
}

/// Outcome of [`perturbation_validity`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Validity {
    pub valid: bool,
    pub kappa_t: f64,
    pub epsilon_t: f64,
}

/// The second-order solution is trusted while both `|kappa t|` and
/// `|epsilon t|` stay below one. Failing this is a flag, not an error.
pub fn perturbation_validity(params: &ModelParams, t: f64) -> Validity {
    let kappa_t = params.kappa * t;
    let epsilon_t = params.epsilon * t;
    Validity {
        valid: kappa_t.abs() < 1.0 && epsilon_t.abs() < 1.0,
        kappa_t,
        epsilon_t,
    }
}

/// Strictly increasing, non-negative evaluation times (seconds).
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    points: Vec<f64>,
}

impl TimeGrid {
    pub fn new(points: Vec<f64>) -> Result<Self, ParamError> {
        if points.is_empty() {
            return Err(ParamError::EmptyGrid);
        }
        if let Some(&t) = points.iter().find(|t| !t.is_finite() || **t < 0.0) {
            return Err(ParamError::NegativeTime(t));
        }
        if let Some(i) = points.windows(2).position(|w| w[1] <= w[0]) {
            return Err(ParamError::NotIncreasing { index: i + 1 });
        }
        Ok(Self { points })
    }

    /// `count` equally spaced points from `start` to `end` inclusive.
    pub fn linspace(start: f64, end: f64, count: usize) -> Result<Self, ParamError> {
        let points = match count {
            0 => Vec::new(),
            1 => vec![start],
            _ => {
                let step = (end - start) / (count - 1) as f64;
                (0..count)
                    .map(|i| {
                        if i + 1 == count {
                            end
                        } else {
                            start + step * i as f64
                        }
                    })
                    .collect()
            }
        };
        Self::new(points)
    }

    /// Grid in rescaled time `kappa t`, converted back to seconds.
    pub fn from_kappa_t(
        kappa: f64,
        kappa_t_min: f64,
        kappa_t_max: f64,
        count: usize,
    ) -> Result<Self, ParamError> {
        if kappa.is_nan() || kappa <= 0.0 {
            return Err(ParamError::RescaledTimeNeedsKappa);
        }
        let grid = Self::linspace(kappa_t_min, kappa_t_max, count)?;
        Self::new(grid.points.into_iter().map(|kt| kt / kappa).collect())
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn kappa_t(&self, kappa: f64) -> Vec<f64> {
        self.points.iter().map(|t| kappa * t).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_parameters_accepted() {
        let p = ModelParams::with_ratio(10.0, 50.0, 1e4);
        let s = InitialState::real(5.0, 5.0);
        assert_eq!(validate(p, s).unwrap(), (p, s));
        assert_eq!(p.epsilon, 500.0);
    }

    #[test]
    fn negative_kappa_rejected() {
        let err = validate(
            ModelParams::new(-1.0, 0.0, 0.0),
            InitialState::real(0.0, 0.0),
        )
        .unwrap_err();
        assert!(matches!(err, ParamError::NegativeKappa(_)));
        assert!(err.to_string().contains("kappa"));
    }

    #[test]
    fn free_evolution_accepted() {
        assert!(validate(
            ModelParams::new(0.0, 0.0, 0.0),
            InitialState::real(1.0, 0.0)
        )
        .is_ok());
    }

    #[test]
    fn non_finite_rejected() {
        assert!(ModelParams::new(1.0, f64::NAN, 0.0).validate().is_err());
        assert!(ModelParams::new(1.0, 0.0, f64::INFINITY)
            .validate()
            .is_err());
        let s = InitialState::new(Complex64::new(f64::NAN, 0.0), Complex64::new(1.0, 0.0));
        assert!(s.validate().is_err());
        let huge = InitialState::real(1e200, 0.0);
        assert!(huge.validate().is_err());
    }

    #[test]
    fn validate_is_idempotent() {
        let p = ModelParams::new(3.0, -2.0, 7.0);
        let s = InitialState::new(Complex64::new(0.3, -1.0), Complex64::new(2.0, 0.5));
        let once = validate(p, s).unwrap();
        assert_eq!(validate(once.0, once.1).unwrap(), once);
    }

    #[test]
    fn validity_examples() {
        let p = ModelParams::new(10.0, 500.0, 1e4);
        let v = perturbation_validity(&p, 1e-3);
        assert!(v.valid);
        assert!((v.kappa_t - 0.01).abs() < 1e-15);
        assert!((v.epsilon_t - 0.5).abs() < 1e-15);

        let v = perturbation_validity(&p, 3e-3);
        assert!(!v.valid);
        assert!((v.epsilon_t - 1.5).abs() < 1e-12);

        let zero = ModelParams::new(0.0, 0.0, 0.0);
        for t in [0.0, 1.0, 1e9] {
            assert!(perturbation_validity(&zero, t).valid);
        }
    }

    #[test]
    fn validity_monotone_in_time() {
        let p = ModelParams::new(10.0, -500.0, 1e4);
        let mut seen_invalid = false;
        for i in 0..10_000 {
            let v = perturbation_validity(&p, i as f64 * 1e-6);
            if seen_invalid {
                assert!(!v.valid);
            }
            seen_invalid |= !v.valid;
        }
        assert!(seen_invalid);
    }

    #[test]
    fn grids() {
        assert!(TimeGrid::new(vec![]).is_err());
        assert!(TimeGrid::new(vec![0.0, 0.0]).is_err());
        assert!(TimeGrid::new(vec![-1.0, 0.0]).is_err());
        let g = TimeGrid::from_kappa_t(10.0, 1e-4, 0.05, 500).unwrap();
        assert_eq!(g.len(), 500);
        assert_eq!(*g.points().last().unwrap(), 0.05 / 10.0);
        assert!(TimeGrid::from_kappa_t(0.0, 0.0, 1.0, 3).is_err());
    }

    #[test]
    fn symmetric_dimer_mapping() {
        let p = ModelParams::from_symmetric_dimer(1.5, 0.25);
        assert_eq!(p, ModelParams::new(3.0, -0.5, 0.0));
        assert!(p.validate().is_ok());
    }
}
