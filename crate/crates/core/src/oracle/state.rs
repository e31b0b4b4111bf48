use num_complex::Complex64;

use crate::error::OracleError;
use crate::params::InitialState;

/// Amplitudes of one fixed-total-number subspace, indexed by the mode-a
/// occupation `k`; mode b holds `total - k`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockBlock {
    pub total: usize,
    pub amps: Vec<Complex64>,
}

impl FockBlock {
    pub fn new(total: usize, amps: Vec<Complex64>) -> Self {
        assert_eq!(
            amps.len(),
            total + 1,
            "block N = {total} needs N + 1 amplitudes"
        );
        Self { total, amps }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Two-mode state on blocks `N = 0..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedState {
    pub blocks: Vec<FockBlock>,
    /// Probability discarded by the truncation before renormalization.
    pub norm_deficit: f64,
}

impl TruncatedState {
    pub fn n_max(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn norm_sqr(&self) -> f64 {
        self.blocks.iter().map(FockBlock::norm_sqr).sum()
    }

    pub fn block(&self, total: usize) -> Option<&FockBlock> {
        self.blocks.get(total)
    }

    /// Amplitude of `|n_a, n_b>`, zero outside the truncated space.
    pub fn amplitude(&self, n_a: usize, n_b: usize) -> Complex64 {
        self.blocks
            .get(n_a + n_b)
            .map(|b| b.amps[n_a])
            .unwrap_or_default()
    }

    pub fn num_amplitudes(&self) -> usize {
        self.blocks.iter().map(|b| b.amps.len()).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Bound on the moment-weighted Poisson tail beyond `N_max`.
    pub tail_tolerance: f64,
    pub n_max_override: Option<usize>,
    /// Refuse truncations larger than this.
    pub n_max_ceiling: Option<usize>,
    /// The tail is weighted by `(N + 1)^moment_weight` so that number moments
    /// up to that order are also converged; `0` gives the bare probability tail.
    pub moment_weight: u32,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            tail_tolerance: 1e-12,
            n_max_override: None,
            n_max_ceiling: None,
            moment_weight: 8,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<(), OracleError> {
        let tol = self.tail_tolerance;
        if !(tol > 0.0 && tol < 1e-3) {
            return Err(OracleError::TailTolerance(tol));
        }
        Ok(())
    }

    /// Cutoff `N_max` for a product coherent state with the given amplitudes.
    pub fn n_max_for(&self, state: &InitialState) -> Result<usize, OracleError> {
        self.validate()?;
        state.validate()?;
        let estimate = match self.n_max_override {
            Some(n) => n,
            None => truncation_cutoff(state.mean_total(), self.tail_tolerance, self.moment_weight),
        };
        match self.n_max_ceiling {
            Some(ceiling) if estimate > ceiling => {
                Err(OracleError::Infeasible { estimate, ceiling })
            }
            _ => Ok(estimate),
        }
    }
}

/// `ln k!` for `k = 0..len`, compensated summation.
pub(crate) fn ln_factorials(len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for k in 0..len {
        if k > 1 {
            let y = (k as f64).ln() - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        out.push(sum);
    }
    out
}

/// Poisson terms `P(M) (M+1)^w` up to a point where the remainder is
/// bounded by the last term, plus that remainder bound.
fn weighted_poisson_terms(mean: f64, weight: u32) -> (Vec<f64>, f64) {
    let ln_mean = mean.ln();
    let w = weight as f64;
    let mut terms = Vec::new();
    let mut lnfact = 0.0;
    let mut m = 0usize;
    loop {
        if m > 1 {
            lnfact += (m as f64).ln();
        }
        let mf = m as f64;
        let ln_p = -mean + mf * ln_mean - lnfact;
        let term = (ln_p + w * (mf + 1.0).ln()).exp();
        terms.push(term);
        // ratio of successive terms from here on is at most this
        let ratio = mean / (mf + 1.0) * ((mf + 2.0) / (mf + 1.0)).powf(w);
        if mf > mean && ratio < 0.5 && (term < 1e-300 || term < 1e-30 * terms[0].max(1e-300)) {
            return (terms, term * ratio / (1.0 - ratio));
        }
        m += 1;
    }
}

/// `P(M > n)` for `M ~ Poisson(mean)`.
pub fn poisson_tail(mean: f64, n: usize) -> f64 {
    weighted_tail(mean, n, 0)
}

fn weighted_tail(mean: f64, n: usize, weight: u32) -> f64 {
    if mean <= 0.0 {
        return 0.0;
    }
    let (terms, remainder) = weighted_poisson_terms(mean, weight);
    terms
        .iter()
        .skip(n + 1)
        .rev()
        .fold(remainder, |acc, t| acc + t)
}

/// Smallest `N` whose weighted tail `sum_{M > N} P(M) (M+1)^w` is below `tol`.
pub fn truncation_cutoff(mean: f64, tol: f64, weight: u32) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    let (terms, remainder) = weighted_poisson_terms(mean, weight);
    let mut tail = remainder;
    let mut cutoff = terms.len() - 1;
    for n in (0..terms.len()).rev() {
        // here `tail` is the weighted sum over M > n
        if tail < tol {
            cutoff = n;
        } else {
            break;
        }
        tail += terms[n];
    }
    cutoff
}

fn log_amp(ln_abs: f64, power: usize) -> f64 {
    if power == 0 {
        0.0
    } else {
        power as f64 * ln_abs
    }
}

/// Truncated, renormalized `|alpha> ⊗ |beta>`.
pub fn prepare_initial(
    state: &InitialState,
    config: &OracleConfig,
) -> Result<TruncatedState, OracleError> {
    let n_max = config.n_max_for(state)?;
    Ok(coherent_product(state, n_max))
}

/// The product coherent state restricted to `N <= n_max`, renormalized.
pub fn coherent_product(state: &InitialState, n_max: usize) -> TruncatedState {
    let lf = ln_factorials(n_max + 1);
    let (ln_a, ln_b) = (state.alpha.norm().ln(), state.beta.norm().ln());
    let (ph_a, ph_b) = (state.alpha.arg(), state.beta.arg());
    let prefactor = -0.5 * state.mean_total();
    let mut blocks: Vec<FockBlock> = (0..=n_max)
        .map(|total| {
            let amps = (0..=total)
                .map(|k| {
                    let l = total - k;
                    let ln_mag =
                        prefactor + log_amp(ln_a, k) + log_amp(ln_b, l) - 0.5 * (lf[k] + lf[l]);
                    let phase = k as f64 * ph_a + l as f64 * ph_b;
                    Complex64::from_polar(ln_mag.exp(), phase)
                })
                .collect();
            FockBlock::new(total, amps)
        })
        .collect();
    let kept: f64 = blocks.iter().map(FockBlock::norm_sqr).sum();
    let scale = kept.sqrt().recip();
    for b in &mut blocks {
        for c in &mut b.amps {
            *c *= scale;
        }
    }
    TruncatedState {
        blocks,
        norm_deficit: poisson_tail(state.mean_total(), n_max),
    }
}
