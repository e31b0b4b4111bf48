use num_complex::Complex64;

use super::state::TruncatedState;
use crate::error::WitnessError;
use crate::witnesses::{Method, Mode, WitnessKind, WitnessResult};

/// `sqrt(m! / (m - q)!)`, the matrix element of `x^q` on `|m>`.
fn ladder(m: usize, q: usize) -> f64 {
    debug_assert!(q <= m);
    let product: f64 = (m - q + 1..=m).map(|j| j as f64).product();
    if product.is_finite() {
        product.sqrt()
    } else {
        (0.5 * (m - q + 1..=m).map(|j| (j as f64).ln()).sum::<f64>()).exp()
    }
}

/// Normally ordered `<a†^p a^q b†^r b^s>` on the truncated space.
///
/// Evaluated as the overlap `<a^p b^r psi | a^q b^s psi>`; amplitudes that
/// would fall outside the truncation count as zero.
pub fn moment(state: &TruncatedState, p: usize, q: usize, r: usize, s: usize) -> Complex64 {
    let n_max = state.n_max();
    let mut total = Complex64::new(0.0, 0.0);
    for j in 0..=n_max {
        for l in 0..=(n_max - j) {
            if j + l + (q + s) > n_max || j + l + (p + r) > n_max {
                continue;
            }
            let ket = state.amplitude(j + q, l + s) * (ladder(j + q, q) * ladder(l + s, s));
            let bra = state.amplitude(j + p, l + r) * (ladder(j + p, p) * ladder(l + r, r));
            total += bra.conj() * ket;
        }
    }
    total
}

/// Exact witness evaluation from the moments of one state.
#[derive(Debug, Clone, Copy)]
pub struct Exact<'a> {
    state: &'a TruncatedState,
}

impl<'a> Exact<'a> {
    pub fn new(state: &'a TruncatedState) -> Self {
        Self { state }
    }

    pub fn moment(&self, p: usize, q: usize, r: usize, s: usize) -> Complex64 {
        moment(self.state, p, q, r, s)
    }

    pub fn mean_a(&self) -> f64 {
        self.moment(1, 1, 0, 0).re
    }

    pub fn mean_b(&self) -> f64 {
        self.moment(0, 0, 1, 1).re
    }

    /// `(<x>, <x²>, <x†x>)` for `x = a`, `b` or `(a + b)/sqrt 2`.
    fn first_second(&self, which: Option<Mode>) -> (Complex64, Complex64, f64) {
        match which {
            Some(Mode::A) => (
                self.moment(0, 1, 0, 0),
                self.moment(0, 2, 0, 0),
                self.mean_a(),
            ),
            Some(Mode::B) => (
                self.moment(0, 0, 0, 1),
                self.moment(0, 0, 0, 2),
                self.mean_b(),
            ),
            None => {
                let (ea, eb) = (self.moment(0, 1, 0, 0), self.moment(0, 0, 0, 1));
                let (eaa, ebb, eab) = (
                    self.moment(0, 2, 0, 0),
                    self.moment(0, 0, 0, 2),
                    self.moment(0, 1, 0, 1),
                );
                let cross = self.moment(1, 0, 0, 1).re;
                (
                    (ea + eb) / 2f64.sqrt(),
                    (eaa + 2.0 * eab + ebb) / 2.0,
                    0.5 * (self.mean_a() + self.mean_b()) + cross,
                )
            }
        }
    }

    /// `(Var X, Var Y)` with `X = (x + x†)/2`, `Y = (x - x†)/2i`.
    pub fn variances(&self, which: Option<Mode>) -> (f64, f64) {
        let (e1, e2, en) = self.first_second(which);
        let base = 2.0 * (en - e1.norm_sqr());
        let bracket = 2.0 * (e2 - e1 * e1).re;
        (0.25 * (1.0 + base + bracket), 0.25 * (1.0 + base - bracket))
    }

    pub fn d_a(&self) -> f64 {
        let na = self.mean_a();
        self.moment(2, 2, 0, 0).re - na * na
    }

    pub fn d_b(&self) -> f64 {
        let nb = self.mean_b();
        self.moment(0, 0, 2, 2).re - nb * nb
    }

    pub fn d_nab2(&self) -> f64 {
        self.moment(1, 1, 1, 1).re - self.mean_a() * self.mean_b()
    }

    pub fn hz1(&self) -> f64 {
        self.moment(1, 1, 1, 1).re - self.moment(0, 1, 1, 0).norm_sqr()
    }

    pub fn hz2(&self) -> f64 {
        self.mean_a() * self.mean_b() - self.moment(0, 1, 0, 1).norm_sqr()
    }

    /// `<(Δu)²> + <(Δv)²> - 2 = 4 (<c†c> - |<c>|²)` with `c = (a + b)/sqrt 2`.
    pub fn duan(&self) -> f64 {
        let (e1, _, en) = self.first_second(None);
        4.0 * (en - e1.norm_sqr())
    }

    pub fn hoa(&self, mode: Mode, n: u32) -> Result<f64, WitnessError> {
        if n < 2 {
            return Err(WitnessError::HoaOrder(n));
        }
        let k = n as usize;
        Ok(match mode {
            Mode::A => self.moment(k, k, 0, 0).re - self.mean_a().powi(n as i32),
            Mode::B => self.moment(0, 0, k, k).re - self.mean_b().powi(n as i32),
        })
    }

    pub fn hoe(&self, n: u32) -> Result<f64, WitnessError> {
        if n < 1 {
            return Err(WitnessError::HoeOrder(n));
        }
        let k = n as usize;
        Ok(self.moment(k, k, k, k).re - self.moment(0, k, k, 0).norm_sqr())
    }

    pub fn g2_a(&self) -> Option<f64> {
        let na = self.mean_a();
        (na > 0.0).then(|| self.moment(2, 2, 0, 0).re / (na * na))
    }

    pub fn g2_b(&self) -> Option<f64> {
        let nb = self.mean_b();
        (nb > 0.0).then(|| self.moment(0, 0, 2, 2).re / (nb * nb))
    }

    pub fn g2_ab(&self) -> Option<f64> {
        let (na, nb) = (self.mean_a(), self.mean_b());
        (na > 0.0 && nb > 0.0).then(|| self.moment(1, 1, 1, 1).re / (na * nb))
    }

    pub fn value(&self, kind: WitnessKind) -> Result<f64, WitnessError> {
        Ok(match kind {
            WitnessKind::VarXa => self.variances(Some(Mode::A)).0,
            WitnessKind::VarYa => self.variances(Some(Mode::A)).1,
            WitnessKind::VarXb => self.variances(Some(Mode::B)).0,
            WitnessKind::VarYb => self.variances(Some(Mode::B)).1,
            WitnessKind::VarXab => self.variances(None).0,
            WitnessKind::VarYab => self.variances(None).1,
            WitnessKind::Da => self.d_a(),
            WitnessKind::Db => self.d_b(),
            WitnessKind::DNab2 => self.d_nab2(),
            WitnessKind::Hz1 => self.hz1(),
            WitnessKind::Hz2 => self.hz2(),
            WitnessKind::Duan => self.duan(),
            WitnessKind::Hoa { mode, n } => self.hoa(mode, n)?,
            WitnessKind::Hoe { n } => self.hoe(n)?,
        })
    }
}

/// Oracle values of `kinds` for a state evolved to time `t`.
pub fn witnesses_exact(
    state: &TruncatedState,
    t: f64,
    kinds: &[WitnessKind],
) -> Result<Vec<WitnessResult>, WitnessError> {
    let exact = Exact::new(state);
    kinds
        .iter()
        .map(|&kind| {
            Ok(WitnessResult {
                kind,
                value: exact.value(kind)?,
                time: t,
                method: Method::Oracle,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::state::coherent_product;
    use crate::params::InitialState;

    #[test]
    fn ladder_values() {
        assert_eq!(ladder(5, 0), 1.0);
        assert!((ladder(5, 2) - 20f64.sqrt()).abs() < 1e-15);
        // falls back to logs where the product overflows
        let big = ladder(1000, 120);
        let want = (0.5 * (881..=1000).map(|j| (j as f64).ln()).sum::<f64>()).exp();
        assert!(big.is_finite() && (big / want - 1.0).abs() < 1e-12);
    }

    #[test]
    fn vacuum_moments() {
        let s = coherent_product(&InitialState::real(0.0, 0.0), 0);
        assert_eq!(moment(&s, 0, 0, 0, 0), Complex64::new(1.0, 0.0));
        for (p, q, r, st) in [(0, 1, 0, 0), (1, 1, 0, 0), (0, 0, 0, 2), (2, 0, 1, 1)] {
            assert_eq!(moment(&s, p, q, r, st), Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn coherent_moments_factorize() {
        let al = Complex64::new(0.7, -0.4);
        let be = Complex64::new(-0.3, 0.9);
        let s = coherent_product(&InitialState::new(al, be), 40);
        for (p, q, r, st) in [
            (1, 1, 0, 0),
            (1, 0, 0, 1),
            (0, 2, 1, 0),
            (2, 2, 2, 2),
            (3, 1, 0, 2),
        ] {
            let want = al.conj().powi(p as i32)
                * al.powi(q as i32)
                * be.conj().powi(r as i32)
                * be.powi(st as i32);
            assert!(
                (moment(&s, p, q, r, st) - want).norm() < 1e-13,
                "{p}{q}{r}{st}"
            );
        }
    }

    #[test]
    fn coherent_input_sits_on_baselines() {
        let s = coherent_product(
            &InitialState::new(Complex64::new(1.0, 0.5), Complex64::new(-0.8, 0.2)),
            45,
        );
        let exact = Exact::new(&s);
        for kind in WitnessKind::full_catalogue() {
            let v = exact.value(kind).unwrap();
            assert!((v - kind.classical_baseline()).abs() < 1e-12, "{kind}: {v}");
        }
        assert!((exact.g2_a().unwrap() - 1.0).abs() < 1e-12);
        assert!((exact.g2_ab().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn g2_guards_empty_mode() {
        let s = coherent_product(&InitialState::real(1.0, 0.0), 30);
        let exact = Exact::new(&s);
        assert!(exact.g2_a().is_some());
        assert_eq!(exact.g2_b(), None);
        assert_eq!(exact.g2_ab(), None);
    }

    #[test]
    fn order_errors() {
        let s = coherent_product(&InitialState::real(1.0, 1.0), 10);
        let exact = Exact::new(&s);
        assert_eq!(exact.hoa(Mode::A, 1), Err(WitnessError::HoaOrder(1)));
        assert_eq!(exact.hoe(0), Err(WitnessError::HoeOrder(0)));
    }
}
