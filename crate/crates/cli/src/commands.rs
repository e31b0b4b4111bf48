//! The four subcommands. Each renders its whole output to a string so the
//! bytes depend only on the configuration.

use std::fmt::Write as _;

use rayon::prelude::*;
use twomode_core::oracle::Oracle;
use twomode_core::witnesses::Perturbative;
use twomode_core::{
    coefficients, perturbation_validity, CoupledForm, InitialState, ModelParams, WitnessKind,
};

use crate::config::{ConfigError, RunConfig};
use crate::error::CliError;

pub const WITNESS_HEADER: &str = "time,kappa_t,witness,order_n,method,value,valid_flag";
pub const COEFFS_HEADER: &str = "time,kappa_t,epsilon_t,coefficient,re,im,valid_flag";
pub const SWEEP_HEADER: &str = "ratio,epsilon,time,kappa_t,witness,order_n,method,value,valid_flag";
pub const COMPARE_HEADER: &str =
    "time,kappa_t,witness,order_n,perturbative,oracle,abs_gap,valid_flag";

/// Rendered command output plus notes meant for stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub text: String,
    pub notes: Vec<String>,
}

/// 17 significant digits, enough to round-trip every `f64`.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn valid_flag(params: &ModelParams, t: f64) -> &'static str {
    if perturbation_validity(params, t).valid {
        "ok"
    } else {
        "outside_perturbative_range"
    }
}

fn order(kind: WitnessKind) -> String {
    kind.order().map(|n| n.to_string()).unwrap_or_default()
}

fn ab_form_name(form: CoupledForm) -> &'static str {
    match form {
        CoupledForm::Symmetric => "symmetric",
        CoupledForm::AsPrinted => "as_printed",
    }
}

fn preamble(command: &str, cfg: &RunConfig) -> String {
    let p = &cfg.params;
    let (a, b) = (cfg.state.alpha, cfg.state.beta);
    let mut s = String::new();
    let _ = writeln!(s, "# twomode {command}");
    let _ = writeln!(
        s,
        "# kappa={} epsilon={} delta_mu={}",
        num(p.kappa),
        num(p.epsilon),
        num(p.delta_mu)
    );
    let _ = writeln!(
        s,
        "# alpha={},{} beta={},{}",
        num(a.re),
        num(a.im),
        num(b.re),
        num(b.im)
    );
    let _ = writeln!(s, "# ab_form={}", ab_form_name(cfg.ab_form));
    s
}

fn oracle_note(oracle: &Oracle, cfg: &RunConfig) -> String {
    format!(
        "# oracle n_max={} tail_tolerance={} norm_deficit={}",
        oracle.n_max(),
        num(cfg.oracle.tail_tolerance),
        num(oracle.initial().norm_deficit)
    )
}

fn perturbative_values(
    params: &ModelParams,
    state: &InitialState,
    t: f64,
    kinds: &[WitnessKind],
    form: CoupledForm,
) -> Result<Vec<f64>, CliError> {
    let c = coefficients(params, t);
    let eval = Perturbative::new(&c, state).with_form(form);
    Ok(kinds
        .iter()
        .map(|&k| eval.value(k))
        .collect::<Result<_, _>>()?)
}

fn oracle_values(oracle: &Oracle, t: f64, kinds: &[WitnessKind]) -> Result<Vec<f64>, CliError> {
    Ok(oracle
        .witnesses_at(t, kinds)?
        .into_iter()
        .map(|r| r.value)
        .collect())
}

pub fn coeffs(cfg: &RunConfig) -> Result<Output, CliError> {
    let p = cfg.params;
    let mut text = preamble("coeffs", cfg);
    text.push_str(COEFFS_HEADER);
    text.push('\n');
    let rows: Vec<String> = cfg
        .grid
        .points()
        .par_iter()
        .map(|&t| {
            let c = coefficients(&p, t);
            let v = perturbation_validity(&p, t);
            let flag = valid_flag(&p, t);
            let mut block = String::new();
            for (prefix, set) in [("f", c.f_all()), ("g", c.g_all())] {
                for (i, z) in set.iter().enumerate() {
                    let _ = writeln!(
                        block,
                        "{},{},{},{prefix}{},{},{},{flag}",
                        num(t),
                        num(v.kappa_t),
                        num(v.epsilon_t),
                        i + 1,
                        num(z.re),
                        num(z.im)
                    );
                }
            }
            block
        })
        .collect();
    rows.iter().for_each(|r| text.push_str(r));
    Ok(Output {
        text,
        notes: Vec::new(),
    })
}

pub fn witness(cfg: &RunConfig) -> Result<Output, CliError> {
    let p = cfg.params;
    let mut text = preamble("witness", cfg);
    let mut notes = Vec::new();
    let oracle = if cfg.method.oracle() {
        let o = Oracle::new(&p, &cfg.state, &cfg.oracle)?;
        let note = oracle_note(&o, cfg);
        text.push_str(&note);
        text.push('\n');
        notes.push(note.trim_start_matches("# ").to_string());
        Some(o)
    } else {
        None
    };
    text.push_str(WITNESS_HEADER);
    text.push('\n');
    let kinds = &cfg.witnesses;
    let rows = cfg
        .grid
        .points()
        .par_iter()
        .map(|&t| -> Result<String, CliError> {
            let pert = if cfg.method.perturbative() {
                Some(perturbative_values(&p, &cfg.state, t, kinds, cfg.ab_form)?)
            } else {
                None
            };
            let exact = oracle
                .as_ref()
                .map(|o| oracle_values(o, t, kinds))
                .transpose()?;
            let flag = valid_flag(&p, t);
            let mut block = String::new();
            for (i, kind) in kinds.iter().enumerate() {
                for (method, values) in [("perturbative", &pert), ("oracle", &exact)] {
                    if let Some(values) = values {
                        let _ = writeln!(
                            block,
                            "{},{},{},{},{method},{},{flag}",
                            num(t),
                            num(p.kappa * t),
                            kind.name(),
                            order(*kind),
                            num(values[i])
                        );
                    }
                }
            }
            Ok(block)
        })
        .collect::<Result<Vec<_>, _>>()?;
    rows.iter().for_each(|r| text.push_str(r));
    Ok(Output { text, notes })
}

pub fn sweep_ratio(cfg: &RunConfig) -> Result<Output, CliError> {
    let kappa = cfg.params.kappa;
    if kappa.is_nan() || kappa <= 0.0 {
        return Err(ConfigError::Field {
            key: "kappa".into(),
            value: kappa.to_string(),
            message: "a ratio sweep needs kappa > 0".into(),
        }
        .into());
    }
    let t = cfg.sweep.kappa_t / kappa;
    let mut text = preamble("sweep-ratio", cfg);
    let _ = writeln!(text, "# kappa_t={}", num(cfg.sweep.kappa_t));
    text.push_str(SWEEP_HEADER);
    text.push('\n');
    let kinds = &cfg.witnesses;
    let rows = cfg
        .sweep
        .ratios
        .par_iter()
        .map(|&ratio| -> Result<String, CliError> {
            let p = ModelParams::with_ratio(kappa, ratio, cfg.params.delta_mu);
            let pert = if cfg.method.perturbative() {
                Some(perturbative_values(&p, &cfg.state, t, kinds, cfg.ab_form)?)
            } else {
                None
            };
            let exact = if cfg.method.oracle() {
                let o = Oracle::new(&p, &cfg.state, &cfg.oracle)?;
                Some(oracle_values(&o, t, kinds)?)
            } else {
                None
            };
            let flag = valid_flag(&p, t);
            let mut block = String::new();
            for (i, kind) in kinds.iter().enumerate() {
                for (method, values) in [("perturbative", &pert), ("oracle", &exact)] {
                    if let Some(values) = values {
                        let _ = writeln!(
                            block,
                            "{},{},{},{},{},{},{method},{},{flag}",
                            num(ratio),
                            num(p.epsilon),
                            num(t),
                            num(cfg.sweep.kappa_t),
                            kind.name(),
                            order(*kind),
                            num(values[i])
                        );
                    }
                }
            }
            Ok(block)
        })
        .collect::<Result<Vec<_>, _>>()?;
    rows.iter().for_each(|r| text.push_str(r));
    Ok(Output {
        text,
        notes: Vec::new(),
    })
}

/// Largest perturbative/oracle gap at each time of a halving sequence and the
/// least-squares slope of `ln gap` against `ln t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Convergence {
    pub times: Vec<f64>,
    pub max_gaps: Vec<f64>,
    pub exponent: f64,
}

pub fn fitted_exponent(times: &[f64], gaps: &[f64]) -> f64 {
    let n = times.len() as f64;
    let xs: Vec<f64> = times.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = gaps.iter().map(|g| g.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

pub fn convergence(
    oracle: &Oracle,
    params: &ModelParams,
    state: &InitialState,
    kinds: &[WitnessKind],
    form: CoupledForm,
    times: &[f64],
) -> Result<Convergence, CliError> {
    let max_gaps = times
        .par_iter()
        .map(|&t| -> Result<f64, CliError> {
            let pert = perturbative_values(params, state, t, kinds, form)?;
            let exact = oracle_values(oracle, t, kinds)?;
            Ok(pert
                .iter()
                .zip(&exact)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Convergence {
        times: times.to_vec(),
        exponent: fitted_exponent(times, &max_gaps),
        max_gaps,
    })
}

pub fn compare(cfg: &RunConfig) -> Result<(Output, Convergence), CliError> {
    let p = cfg.params;
    let oracle = Oracle::new(&p, &cfg.state, &cfg.oracle)?;
    let mut text = preamble("compare", cfg);
    let note = oracle_note(&oracle, cfg);
    text.push_str(&note);
    text.push('\n');
    let mut notes = vec![note.trim_start_matches("# ").to_string()];
    text.push_str(COMPARE_HEADER);
    text.push('\n');
    let kinds = &cfg.witnesses;
    let rows = cfg
        .grid
        .points()
        .par_iter()
        .map(|&t| -> Result<String, CliError> {
            let pert = perturbative_values(&p, &cfg.state, t, kinds, cfg.ab_form)?;
            let exact = oracle_values(&oracle, t, kinds)?;
            let flag = valid_flag(&p, t);
            let mut block = String::new();
            for (i, kind) in kinds.iter().enumerate() {
                let _ = writeln!(
                    block,
                    "{},{},{},{},{},{},{},{flag}",
                    num(t),
                    num(p.kappa * t),
                    kind.name(),
                    order(*kind),
                    num(pert[i]),
                    num(exact[i]),
                    num((pert[i] - exact[i]).abs())
                );
            }
            Ok(block)
        })
        .collect::<Result<Vec<_>, _>>()?;
    rows.iter().for_each(|r| text.push_str(r));

    let conv = convergence(&oracle, &p, &cfg.state, kinds, cfg.ab_form, &cfg.halving)?;
    text.push_str("# convergence\n");
    for (t, g) in conv.times.iter().zip(&conv.max_gaps) {
        let _ = writeln!(text, "# t={} max_abs_gap={}", num(*t), num(*g));
    }
    let _ = writeln!(text, "# fitted_exponent={}", num(conv.exponent));
    notes.push(format!(
        "fitted exponent of max gap vs t: {:.3}",
        conv.exponent
    ));
    Ok((Output { text, notes }, conv))
}
