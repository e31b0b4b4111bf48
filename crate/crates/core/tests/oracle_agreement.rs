//! Perturbative closed forms against the exact truncated-space dynamics.

use num_complex::Complex64;
use twomode_core::oracle::{
    coherent_product, moment, truncation_cutoff, witnesses_exact, Exact, Oracle, OracleConfig,
    Propagator,
};
use twomode_core::witnesses::{evaluate, Perturbative};
use twomode_core::{coefficients, CoupledForm, InitialState, Mode, ModelParams, WitnessKind};

const PAPER: ModelParams = ModelParams::new(10.0, 500.0, 1e4);

const LOW_ORDER_SET: [WitnessKind; 11] = [
    WitnessKind::Da,
    WitnessKind::Db,
    WitnessKind::DNab2,
    WitnessKind::Hz1,
    WitnessKind::Hz2,
    WitnessKind::VarXa,
    WitnessKind::VarYa,
    WitnessKind::VarXb,
    WitnessKind::VarYb,
    WitnessKind::VarXab,
    WitnessKind::VarYab,
];

fn max_gap(oracle: &Oracle, state: &InitialState, t: f64, kinds: &[WitnessKind]) -> f64 {
    let pert = evaluate(&PAPER, state, t, kinds, CoupledForm::Symmetric).unwrap();
    let exact = oracle.witnesses_at(t, kinds).unwrap();
    pert.iter()
        .zip(&exact)
        .map(|(p, e)| (p.value - e.value).abs())
        .fold(0.0, f64::max)
}

fn fitted_exponent(ts: &[f64], gaps: &[f64]) -> f64 {
    let n = ts.len() as f64;
    let xs: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = gaps.iter().map(|g| g.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

#[test]
fn gap_shrinks_at_least_cubically_for_unit_amplitudes() {
    let state = InitialState::real(1.0, 1.0);
    let oracle = Oracle::new(&PAPER, &state, &OracleConfig::default()).unwrap();
    let ts = [4e-5, 2e-5, 1e-5];
    let gaps: Vec<f64> = ts
        .iter()
        .map(|&t| max_gap(&oracle, &state, t, &LOW_ORDER_SET))
        .collect();
    let p = fitted_exponent(&ts, &gaps);
    assert!(p >= 2.3, "exponent {p}, gaps {gaps:?}");
    assert!(gaps[2] < 1e-6, "{gaps:?}");
}

#[test]
fn gap_shrinks_for_generic_complex_amplitudes() {
    let state = InitialState::new(Complex64::new(0.9, 0.6), Complex64::new(-0.5, 1.1));
    let oracle = Oracle::new(&PAPER, &state, &OracleConfig::default()).unwrap();
    let ts = [4e-5, 2e-5, 1e-5];
    let mut kinds = LOW_ORDER_SET.to_vec();
    kinds.extend([
        WitnessKind::Duan,
        WitnessKind::Hoe { n: 1 },
        WitnessKind::Hoe { n: 2 },
    ]);
    let gaps: Vec<f64> = ts
        .iter()
        .map(|&t| max_gap(&oracle, &state, t, &kinds))
        .collect();
    let p = fitted_exponent(&ts, &gaps);
    assert!(p >= 2.5, "exponent {p}, gaps {gaps:?}");
}

#[test]
fn printed_coupled_form_stalls_at_second_order() {
    let state = InitialState::real(1.0, 1.0);
    let oracle = Oracle::new(&PAPER, &state, &OracleConfig::default()).unwrap();
    let gap = |t: f64, form| {
        let c = coefficients(&PAPER, t);
        let p = Perturbative::new(&c, &state)
            .with_form(form)
            .value(WitnessKind::VarXab)
            .unwrap();
        let e = oracle.witnesses_at(t, &[WitnessKind::VarXab]).unwrap()[0].value;
        (p - e).abs()
    };
    let (printed, symmetric) = (
        gap(1e-5, CoupledForm::AsPrinted),
        gap(1e-5, CoupledForm::Symmetric),
    );
    assert!(printed > 1e-7, "{printed}");
    assert!(symmetric < 1e-9, "{symmetric}");
    let ratio = gap(2e-5, CoupledForm::AsPrinted) / printed;
    assert!((3.0..5.0).contains(&ratio), "{ratio}");
}

#[test]
fn mean_number_matches_oracle_to_third_order() {
    let state = InitialState::new(Complex64::new(1.0, 0.3), Complex64::new(0.4, -0.8));
    let oracle = Oracle::new(&PAPER, &state, &OracleConfig::default()).unwrap();
    let gap = |t: f64| {
        let c = coefficients(&PAPER, t);
        let exact = oracle.state_at(t).unwrap();
        (twomode_core::witnesses::mean_number_a(&c, &state) - moment(&exact, 1, 1, 0, 0).re).abs()
    };
    let (g1, g2) = (gap(2e-5), gap(1e-5));
    assert!(g1 / g2 > 5.0, "{g1} {g2}");
}

#[test]
fn plain_and_weighted_cutoffs_for_unit_amplitudes() {
    // smallest N with P(M > N) < 1e-12 for Poisson(2), by direct summation
    let mut p = (-2.0f64).exp();
    let mut cdf = 0.0;
    let mut plain = 0;
    for m in 0..100 {
        cdf += p;
        if 1.0 - cdf < 1e-12 {
            plain = m;
            break;
        }
        p *= 2.0 / (m + 1) as f64;
    }
    assert_eq!(plain, 18);
    assert_eq!(truncation_cutoff(2.0, 1e-12, 0), 18);
    // the default cutoff also bounds sum_{M > N} P(M) (M+1)^8
    let weighted_tail = |n: usize| {
        let mut p = (-2.0f64).exp();
        let mut tail = 0.0;
        for m in 0..200 {
            if m > n {
                tail += p * ((m + 1) as f64).powi(8);
            }
            p *= 2.0 / (m + 1) as f64;
        }
        tail
    };
    let n = OracleConfig::default()
        .n_max_for(&InitialState::real(1.0, 1.0))
        .unwrap();
    assert!(weighted_tail(n) < 1e-12 && weighted_tail(n - 1) >= 1e-12);
    assert_eq!(n, 29);
}

#[test]
fn doubling_truncation_leaves_witnesses_in_place() {
    let state = InitialState::real(1.0, 1.0);
    let kinds = WitnessKind::full_catalogue();
    let base = Oracle::new(&PAPER, &state, &OracleConfig::default()).unwrap();
    let doubled = Oracle::new(
        &PAPER,
        &state,
        &OracleConfig {
            n_max_override: Some(2 * base.n_max()),
            ..Default::default()
        },
    )
    .unwrap();
    for t in [1e-4, 1e-3, 4e-3] {
        let a = base.witnesses_at(t, &kinds).unwrap();
        let b = doubled.witnesses_at(t, &kinds).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!(
                (x.value - y.value).abs() < 1e-11,
                "{} at {t}: {}",
                x.kind,
                x.value - y.value
            );
        }
    }
}

#[test]
fn doubling_truncation_for_large_amplitudes_is_relative_to_moment_scale() {
    let state = InitialState::real(5.0, 5.0);
    let kinds = [
        WitnessKind::Da,
        WitnessKind::Hz1,
        WitnessKind::Hz2,
        WitnessKind::VarXab,
    ];
    let base = Oracle::new(&PAPER, &state, &OracleConfig::default()).unwrap();
    let doubled = Oracle::new(
        &PAPER,
        &state,
        &OracleConfig {
            n_max_override: Some(2 * base.n_max()),
            ..Default::default()
        },
    )
    .unwrap();
    let t = 2e-4;
    let a = base.witnesses_at(t, &kinds).unwrap();
    let b = doubled.witnesses_at(t, &kinds).unwrap();
    // the witnesses are differences of moments of size |alpha|^4 ~ 1e3
    for (x, y) in a.iter().zip(&b) {
        assert!(
            (x.value - y.value).abs() < 1e-9,
            "{}: {}",
            x.kind,
            x.value - y.value
        );
    }
}

#[test]
fn self_checks_on_paper_parameters() {
    let state = InitialState::real(1.0, 1.0);
    let oracle = Oracle::new(&PAPER, &state, &OracleConfig::default()).unwrap();
    let init = oracle.initial();
    let e0 = oracle.propagator().energy(init);
    let n0 = moment(init, 1, 1, 0, 0).re + moment(init, 0, 0, 1, 1).re;
    for t in [1e-5, 1e-3, 5e-3] {
        let s = oracle.state_at(t).unwrap();
        for (a, b) in init.blocks.iter().zip(&s.blocks) {
            assert!((a.norm_sqr() - b.norm_sqr()).abs() < 1e-10);
        }
        assert!((oracle.propagator().energy(&s) - e0).abs() < 1e-8 * e0.abs());
        let n = moment(&s, 1, 1, 0, 0).re + moment(&s, 0, 0, 1, 1).re;
        assert!((n - n0).abs() < 1e-10);
    }
}

#[test]
fn pure_phase_evolution_without_couplings() {
    let p = ModelParams::new(0.0, 0.0, 3.7e3);
    let state = InitialState::new(Complex64::new(1.2, 0.1), Complex64::new(0.3, -0.9));
    let oracle = Oracle::new(&p, &state, &OracleConfig::default()).unwrap();
    let s = oracle.state_at(0.8).unwrap();
    for (a, b) in oracle.initial().blocks.iter().zip(&s.blocks) {
        for (x, y) in a.amps.iter().zip(&b.amps) {
            assert!((x.norm() - y.norm()).abs() < 1e-14);
        }
    }
    // a free rotation keeps the state coherent
    for r in witnesses_exact(&s, 0.8, &WitnessKind::full_catalogue()).unwrap() {
        assert!(
            (r.value - r.kind.classical_baseline()).abs() < 1e-12,
            "{}",
            r.kind
        );
    }
}

#[test]
fn kappa_zero_keeps_both_sides_on_baseline() {
    let p = ModelParams::new(0.0, 500.0, 1e4);
    let state = InitialState::real(1.0, 1.0);
    let oracle = Oracle::new(&p, &state, &OracleConfig::default()).unwrap();
    let kinds = WitnessKind::full_catalogue();
    for t in [1e-4, 3e-3] {
        let exact = oracle.witnesses_at(t, &kinds).unwrap();
        let pert = evaluate(&p, &state, t, &kinds, CoupledForm::Symmetric).unwrap();
        for (e, q) in exact.iter().zip(&pert) {
            assert!(
                (e.value - q.value).abs() < 1e-11,
                "{}: {} vs {}",
                e.kind,
                e.value,
                q.value
            );
        }
    }
}

/// The Josephson form differs from the normal-ordered one by a function of
/// the conserved total number, so number-conserving observables coincide.
#[test]
fn josephson_form_gives_same_number_conserving_observables() {
    use twomode_core::oracle::build_block_hamiltonian;
    let p = ModelParams::new(7.0, 40.0, 150.0);
    let state = InitialState::new(Complex64::new(1.1, 0.2), Complex64::new(0.7, -0.5));
    let init = coherent_product(&state, 40);
    let t = 0.013;
    let ours = Propagator::new(&p, 40)
        .unwrap()
        .propagate(&init, t)
        .unwrap();
    // evolve under the shifted blocks directly
    let mut shifted = init.clone();
    for b in &mut shifted.blocks {
        let mut h = build_block_hamiltonian(b.total, &p);
        let off = p.josephson_block_offset(b.total);
        for d in &mut h.diag {
            *d -= off;
        }
        let eig = h.eigen().unwrap();
        let n = b.amps.len();
        let coords: Vec<Complex64> = (0..n)
            .map(|j| {
                let proj: Complex64 = (0..n).map(|k| b.amps[k] * eig.vectors[k * n + j]).sum();
                proj * Complex64::from_polar(1.0, -eig.values[j] * t)
            })
            .collect();
        b.amps = (0..n)
            .map(|k| (0..n).map(|j| coords[j] * eig.vectors[k * n + j]).sum())
            .collect();
    }
    let (x, y) = (Exact::new(&ours), Exact::new(&shifted));
    for (a, b) in [
        (x.d_a(), y.d_a()),
        (x.d_nab2(), y.d_nab2()),
        (x.hz1(), y.hz1()),
        (x.hoe(2).unwrap(), y.hoe(2).unwrap()),
        (x.hoa(Mode::B, 3).unwrap(), y.hoa(Mode::B, 3).unwrap()),
    ] {
        assert!((a - b).abs() < 1e-10 * a.abs().max(1.0), "{a} vs {b}");
    }
    // the mean field itself picks up block-dependent phases
    assert!((moment(&ours, 0, 1, 0, 0) - moment(&shifted, 0, 1, 0, 0)).norm() > 1e-3);
}
