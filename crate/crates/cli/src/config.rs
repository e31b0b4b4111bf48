//! Flat `key=value` run configuration, merged with command-line overrides.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use thiserror::Error;
use twomode_core::oracle::OracleConfig;
use twomode_core::witnesses::ParseWitnessError;
use twomode_core::{CoupledForm, InitialState, ModelParams, ParamError, TimeGrid, WitnessKind};

/// Every recognised key, in the order they are documented.
pub const KEYS: &[(&str, &str)] = &[
    ("kappa", "interaction strength kappa (rad/s)"),
    ("epsilon", "tunneling amplitude epsilon (rad/s)"),
    ("epsilon_over_kappa", "epsilon given as a multiple of kappa"),
    ("delta_mu", "chemical-potential difference (rad/s)"),
    ("alpha_re", "real part of the mode-a coherent amplitude"),
    (
        "alpha_im",
        "imaginary part of the mode-a coherent amplitude",
    ),
    ("beta_re", "real part of the mode-b coherent amplitude"),
    ("beta_im", "imaginary part of the mode-b coherent amplitude"),
    ("kappa_t_min", "first rescaled time of the grid"),
    ("kappa_t_max", "last rescaled time of the grid"),
    ("points", "number of grid points"),
    ("t_min", "first time of the grid (s)"),
    ("t_max", "last time of the grid (s)"),
    ("times", "explicit comma-separated times (s)"),
    ("ratio_min", "first epsilon/kappa of a ratio sweep"),
    ("ratio_max", "last epsilon/kappa of a ratio sweep"),
    ("ratio_points", "number of ratios in a sweep"),
    ("ratios", "explicit comma-separated epsilon/kappa values"),
    ("kappa_t", "fixed rescaled time of a ratio sweep"),
    ("witnesses", "comma-separated witnesses, `all` or `lower`"),
    ("method", "perturbative, oracle or both"),
    ("output", "output file, `-` for stdout"),
    (
        "ab_form",
        "coupled-mode variance form: symmetric or as_printed",
    ),
    ("tail_tolerance", "oracle truncation tolerance"),
    ("n_max_override", "fixed oracle truncation N_max"),
    ("n_max_ceiling", "largest N_max the oracle will attempt"),
    (
        "halving_start",
        "largest time of the convergence halving sequence (s)",
    ),
    ("halving_steps", "number of times in the halving sequence"),
];

pub const DEFAULT_KAPPA_T_MAX: f64 = 0.05;
pub const DEFAULT_POINTS: usize = 500;
pub const DEFAULT_N_MAX_CEILING: usize = 400;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}:{line}: {message}")]
    Line {
        path: String,
        line: usize,
        message: String,
    },
    #[error("`{key}` = `{value}`: {message}")]
    Field {
        key: String,
        value: String,
        message: String,
    },
    #[error("give either `{0}` or `{1}`, not both")]
    Conflict(&'static str, &'static str),
    #[error("cannot read config file {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("`witnesses`: {0}")]
    Witness(#[from] ParseWitnessError),
    #[error("witness selection is empty")]
    NoWitnesses,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodChoice {
    Perturbative,
    Oracle,
    Both,
}

impl MethodChoice {
    pub fn perturbative(self) -> bool {
        matches!(self, Self::Perturbative | Self::Both)
    }

    pub fn oracle(self) -> bool {
        matches!(self, Self::Oracle | Self::Both)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioSweep {
    pub ratios: Vec<f64>,
    pub kappa_t: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub state: InitialState,
    pub grid: TimeGrid,
    pub sweep: RatioSweep,
    pub witnesses: Vec<WitnessKind>,
    pub method: MethodChoice,
    /// `None` writes to stdout.
    pub output: Option<PathBuf>,
    pub ab_form: CoupledForm,
    pub oracle: OracleConfig,
    pub halving: Vec<f64>,
}

/// Raw values keyed by name, remembering where each came from.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    values: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn parse_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse_str(&text, &path.display().to_string())
    }

    /// Parses `key=value` lines; `#` starts a comment.
    pub fn parse_str(text: &str, origin: &str) -> Result<Self, ConfigError> {
        let mut raw = Self::new();
        for (idx, line) in text.lines().enumerate() {
            let err = |message: String| ConfigError::Line {
                path: origin.to_string(),
                line: idx + 1,
                message,
            };
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.iter().any(|(k, _)| *k == key) {
                return Err(err(format!("unknown key `{key}`")));
            }
            if raw
                .values
                .insert(key.to_string(), value.to_string())
                .is_some()
            {
                return Err(err(format!("`{key}` given twice")));
            }
        }
        Ok(raw)
    }

    /// Overrides or adds one value.
    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.values.insert(key.to_string(), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn has(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    fn field_err(&self, key: &str, message: impl Into<String>) -> ConfigError {
        ConfigError::Field {
            key: key.to_string(),
            value: self.get(key).unwrap_or("").to_string(),
            message: message.into(),
        }
    }

    fn float(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        self.get(key)
            .map(|v| {
                v.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| self.field_err(key, "expected a finite number"))
            })
            .transpose()
    }

    fn float_or(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        Ok(self.float(key)?.unwrap_or(default))
    }

    fn count(&self, key: &str) -> Result<Option<usize>, ConfigError> {
        self.get(key)
            .map(|v| {
                v.parse::<usize>()
                    .map_err(|_| self.field_err(key, "expected a non-negative integer"))
            })
            .transpose()
    }

    fn float_list(&self, key: &str) -> Result<Option<Vec<f64>>, ConfigError> {
        self.get(key)
            .map(|v| {
                v.split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<f64>()
                            .ok()
                            .filter(|x| x.is_finite())
                            .ok_or_else(|| {
                                self.field_err(key, format!("bad number `{}`", x.trim()))
                            })
                    })
                    .collect()
            })
            .transpose()
    }

    fn exclusive(&self, a: &'static str, b: &'static str) -> Result<(), ConfigError> {
        if self.has(a) && self.has(b) {
            return Err(ConfigError::Conflict(a, b));
        }
        Ok(())
    }

    pub fn resolve(&self) -> Result<RunConfig, ConfigError> {
        self.exclusive("epsilon", "epsilon_over_kappa")?;
        let kappa = self.float_or("kappa", 10.0)?;
        let epsilon = match (self.float("epsilon")?, self.float("epsilon_over_kappa")?) {
            (Some(e), _) => e,
            (None, Some(r)) => r * kappa,
            (None, None) => 50.0 * kappa,
        };
        let params = ModelParams::new(kappa, epsilon, self.float_or("delta_mu", 1e4)?);
        params.validate()?;
        let state = InitialState::new(
            Complex64::new(
                self.float_or("alpha_re", 5.0)?,
                self.float_or("alpha_im", 0.0)?,
            ),
            Complex64::new(
                self.float_or("beta_re", 5.0)?,
                self.float_or("beta_im", 0.0)?,
            ),
        );
        state.validate()?;

        let oracle = OracleConfig {
            tail_tolerance: self.float_or("tail_tolerance", 1e-12)?,
            n_max_override: self.count("n_max_override")?,
            n_max_ceiling: Some(
                self.count("n_max_ceiling")?
                    .unwrap_or(DEFAULT_N_MAX_CEILING),
            ),
            ..OracleConfig::default()
        };
        let tol = oracle.tail_tolerance;
        if !(tol > 0.0 && tol < 1e-3) {
            return Err(self.field_err("tail_tolerance", "must lie in (0, 1e-3)"));
        }

        Ok(RunConfig {
            params,
            state,
            grid: self.time_grid(&params)?,
            sweep: self.ratio_sweep()?,
            witnesses: self.witnesses()?,
            method: self.method()?,
            output: self.get("output").filter(|p| *p != "-").map(PathBuf::from),
            ab_form: match self.get("ab_form").unwrap_or("symmetric") {
                "symmetric" => CoupledForm::Symmetric,
                "as_printed" => CoupledForm::AsPrinted,
                _ => return Err(self.field_err("ab_form", "expected `symmetric` or `as_printed`")),
            },
            oracle,
            halving: self.halving()?,
        })
    }

    fn time_grid(&self, params: &ModelParams) -> Result<TimeGrid, ConfigError> {
        let rescaled = self.has("kappa_t_min") || self.has("kappa_t_max");
        let raw = self.has("t_min") || self.has("t_max");
        let explicit = self.has("times");
        if rescaled && raw {
            return Err(ConfigError::Conflict(
                "kappa_t_min/kappa_t_max",
                "t_min/t_max",
            ));
        }
        if explicit && (rescaled || raw) {
            return Err(ConfigError::Conflict("times", "a grid range"));
        }
        if explicit && self.has("points") {
            return Err(ConfigError::Conflict("times", "points"));
        }
        if let Some(times) = self.float_list("times")? {
            return Ok(TimeGrid::new(times)?);
        }
        let points = self.count("points")?.unwrap_or(DEFAULT_POINTS);
        if points == 0 {
            return Err(self.field_err("points", "must be at least 1"));
        }
        if raw {
            let t_max = self
                .float("t_max")?
                .ok_or_else(|| self.field_err("t_max", "required with t_min"))?;
            let t_min = self.float_or("t_min", t_max / points as f64)?;
            return Ok(TimeGrid::linspace(t_min, t_max, points)?);
        }
        let kt_max = self.float_or("kappa_t_max", DEFAULT_KAPPA_T_MAX)?;
        // without an explicit start the grid excludes t = 0
        let kt_min = self.float_or("kappa_t_min", kt_max / points as f64)?;
        Ok(TimeGrid::from_kappa_t(
            params.kappa,
            kt_min,
            kt_max,
            points,
        )?)
    }

    fn ratio_sweep(&self) -> Result<RatioSweep, ConfigError> {
        let range = self.has("ratio_min") || self.has("ratio_max") || self.has("ratio_points");
        if self.has("ratios") && range {
            return Err(ConfigError::Conflict(
                "ratios",
                "ratio_min/ratio_max/ratio_points",
            ));
        }
        let ratios = match self.float_list("ratios")? {
            Some(r) => r,
            None => {
                let (lo, hi) = (
                    self.float_or("ratio_min", 1.0)?,
                    self.float_or("ratio_max", 100.0)?,
                );
                let n = self.count("ratio_points")?.unwrap_or(100);
                if n == 0 {
                    return Err(self.field_err("ratio_points", "must be at least 1"));
                }
                if n == 1 {
                    vec![lo]
                } else {
                    (0..n)
                        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
                        .collect()
                }
            }
        };
        if ratios.iter().any(|r| *r < 0.0) {
            let key = if self.has("ratios") {
                "ratios"
            } else {
                "ratio_min"
            };
            return Err(self.field_err(key, "ratios must be non-negative"));
        }
        let kappa_t = self.float_or("kappa_t", 0.004)?;
        if kappa_t < 0.0 {
            return Err(self.field_err("kappa_t", "must be non-negative"));
        }
        Ok(RatioSweep { ratios, kappa_t })
    }

    fn witnesses(&self) -> Result<Vec<WitnessKind>, ConfigError> {
        let list = match self.get("witnesses").unwrap_or("all") {
            "all" => WitnessKind::full_catalogue(),
            "lower" => WitnessKind::LOWER_ORDER.to_vec(),
            spec => spec
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(WitnessKind::parse)
                .collect::<Result<Vec<_>, _>>()?,
        };
        if list.is_empty() {
            return Err(ConfigError::NoWitnesses);
        }
        Ok(list)
    }

    fn method(&self) -> Result<MethodChoice, ConfigError> {
        match self.get("method").unwrap_or("perturbative") {
            "perturbative" => Ok(MethodChoice::Perturbative),
            "oracle" => Ok(MethodChoice::Oracle),
            "both" => Ok(MethodChoice::Both),
            _ => Err(self.field_err("method", "expected perturbative, oracle or both")),
        }
    }

    fn halving(&self) -> Result<Vec<f64>, ConfigError> {
        let start = self.float_or("halving_start", 4e-5)?;
        let steps = self.count("halving_steps")?.unwrap_or(3);
        if start.is_nan() || start <= 0.0 {
            return Err(self.field_err("halving_start", "must be positive"));
        }
        if steps < 2 {
            return Err(self.field_err("halving_steps", "need at least two times to fit a slope"));
        }
        Ok((0..steps).map(|k| start / 2f64.powi(k as i32)).collect())
    }
}
