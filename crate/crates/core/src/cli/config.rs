//! Run configuration: flat UTF-8 `key = value` lines.
//!
//! Lines whose first non-blank character is `#` are comments. Lists are
//! comma separated. Unknown and repeated keys are rejected.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use crate::basis::Normalization;
use crate::galerkin::reference;
use crate::inverse::ObjectiveKind;
use crate::pwpoly::INPUT_DEGREE;

/// Which function the inverse and bound commands use as target.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Target {
    /// The Galerkin approximant `u_m` at `j_true`.
    #[default]
    Galerkin,
    /// The exact solution given by `exact_coeffs`.
    Exact,
}

impl Target {
    pub fn as_str(self) -> &'static str {
        match self {
            Target::Galerkin => "galerkin",
            Target::Exact => "exact",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub alpha: f64,
    pub beta: f64,
    pub j_true: f64,
    /// Ascending coefficients of the forcing polynomial.
    pub f_coeffs: Vec<f64>,
    pub m: Vec<usize>,
    pub n: Vec<usize>,
    pub j_lo: f64,
    pub j_hi: f64,
    pub objective: ObjectiveKind,
    pub normalization: Normalization,
    pub tol: f64,
    /// Ascending coefficients of the exact solution, when known.
    pub exact_coeffs: Option<Vec<f64>>,
    pub target: Target,
    pub output_path: Option<String>,
}

/// A configuration problem, naming the offending key when there is one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    pub key: Option<String>,
    pub message: String,
}

impl ConfigError {
    fn at(key: &str, message: impl Into<String>) -> Self {
        Self {
            key: Some(key.to_string()),
            message: message.into(),
        }
    }

    fn general(message: impl Into<String>) -> Self {
        Self {
            key: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.key {
            Some(k) => write!(f, "config key `{k}`: {}", self.message),
            None => write!(f, "config: {}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

const KEYS: [&str; 14] = [
    "alpha",
    "beta",
    "j_true",
    "f_coeffs",
    "m",
    "n",
    "j_lo",
    "j_hi",
    "objective",
    "normalization",
    "tol",
    "exact_coeffs",
    "target",
    "output_path",
];

const REQUIRED: [&str; 5] = ["alpha", "beta", "j_true", "f_coeffs", "m"];

impl RunConfig {
    /// Defaults for everything but the problem data.
    pub fn with_problem(alpha: f64, beta: f64, j_true: f64, f_coeffs: Vec<f64>, m: Vec<usize>) -> Self {
        Self {
            alpha,
            beta,
            j_true,
            f_coeffs,
            m,
            n: vec![31],
            j_lo: 1.0,
            j_hi: 4.0,
            objective: ObjectiveKind::AbsSum,
            normalization: Normalization::Flat,
            tol: 1e-10,
            exact_coeffs: None,
            target: Target::Galerkin,
            output_path: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries: BTreeMap<&str, &str> = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                ConfigError::general(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(ConfigError::at(key, "unknown key"));
            }
            if entries.insert(key, value).is_some() {
                return Err(ConfigError::at(key, "given more than once"));
            }
        }
        for key in REQUIRED {
            if !entries.contains_key(key) {
                return Err(ConfigError::at(key, "missing required key"));
            }
        }

        let mut cfg = RunConfig::with_problem(
            real(&entries, "alpha")?,
            real(&entries, "beta")?,
            real(&entries, "j_true")?,
            reals(&entries, "f_coeffs")?,
            counts(&entries, "m")?,
        );
        if entries.contains_key("n") {
            cfg.n = counts(&entries, "n")?;
        }
        if entries.contains_key("j_lo") {
            cfg.j_lo = real(&entries, "j_lo")?;
        }
        if entries.contains_key("j_hi") {
            cfg.j_hi = real(&entries, "j_hi")?;
        }
        if entries.contains_key("tol") {
            cfg.tol = real(&entries, "tol")?;
        }
        if let Some(v) = entries.get("objective") {
            cfg.objective = v
                .parse()
                .map_err(|_| ConfigError::at("objective", format!("expected abs_sum or dual_norm, got `{v}`")))?;
        }
        if let Some(v) = entries.get("normalization") {
            cfg.normalization = v
                .parse()
                .map_err(|_| ConfigError::at("normalization", format!("expected flat or l2, got `{v}`")))?;
        }
        if entries.contains_key("exact_coeffs") {
            cfg.exact_coeffs = Some(reals(&entries, "exact_coeffs")?);
        }
        if let Some(v) = entries.get("target") {
            cfg.target = match *v {
                "galerkin" => Target::Galerkin,
                "exact" => Target::Exact,
                other => {
                    return Err(ConfigError::at("target", format!("expected galerkin or exact, got `{other}`")))
                }
            };
        }
        if let Some(v) = entries.get("output_path") {
            if v.is_empty() {
                return Err(ConfigError::at("output_path", "empty path"));
            }
            cfg.output_path = Some(v.to_string());
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for (key, v) in [("alpha", self.alpha), ("beta", self.beta)] {
            if !v.is_finite() {
                return Err(ConfigError::at(key, "must be finite"));
            }
        }
        if !(self.j_true > 0.0 && self.j_true.is_finite()) {
            return Err(ConfigError::at("j_true", "must be positive"));
        }
        if !(self.j_lo.is_finite() && self.j_hi.is_finite() && self.j_lo < self.j_hi) {
            return Err(ConfigError::at("j_lo", "need finite j_lo < j_hi"));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(ConfigError::at("tol", "must be positive"));
        }
        check_poly("f_coeffs", &self.f_coeffs)?;
        if let Some(c) = &self.exact_coeffs {
            check_poly("exact_coeffs", c)?;
        }
        for (key, list) in [("m", &self.m), ("n", &self.n)] {
            if list.is_empty() || list.contains(&0) {
                return Err(ConfigError::at(key, "need one or more values >= 1"));
            }
        }
        if self.target == Target::Exact && self.exact_coeffs.is_none() {
            return Err(ConfigError::at("target", "`exact` requires exact_coeffs"));
        }
        if let Some(p) = &self.output_path {
            if p.is_empty() || p.trim() != p || p.contains('\n') {
                return Err(ConfigError::at("output_path", "path must be non-empty without surrounding blanks"));
            }
        }
        Ok(())
    }

    /// Renders every key; [`RunConfig::parse`] inverts this exactly.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        put("alpha", self.alpha.to_string());
        put("beta", self.beta.to_string());
        put("j_true", self.j_true.to_string());
        put("f_coeffs", join(&self.f_coeffs));
        put("m", join(&self.m));
        put("n", join(&self.n));
        put("j_lo", self.j_lo.to_string());
        put("j_hi", self.j_hi.to_string());
        put("objective", self.objective.to_string());
        put("normalization", self.normalization.to_string());
        put("tol", self.tol.to_string());
        if let Some(c) = &self.exact_coeffs {
            put("exact_coeffs", join(c));
        }
        put("target", self.target.as_str().to_string());
        if let Some(p) = &self.output_path {
            put("output_path", p.clone());
        }
        out
    }
}

/// Built-in reproduction presets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// Direct-method errors for `m = 3, 7, 15, 31, 63`.
    Table1,
    /// Recovered parameter for targets `u_m`, `m = 3, 7, 15, 31`, `n = 31`.
    Table2,
}

impl Preset {
    pub fn config(self, norm: Normalization) -> RunConfig {
        let m = match self {
            Preset::Table1 => vec![3, 7, 15, 31, 63],
            Preset::Table2 => vec![3, 7, 15, 31],
        };
        let mut cfg = RunConfig::with_problem(
            reference::ALPHA,
            reference::BETA,
            reference::j_true(),
            reference::forcing_coeffs().to_vec(),
            m,
        );
        cfg.exact_coeffs = Some(reference::EXACT_COEFFS.to_vec());
        cfg.normalization = norm;
        cfg
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::Table1 => "table1",
            Preset::Table2 => "table2",
        }
    }
}

fn check_poly(key: &str, c: &[f64]) -> Result<(), ConfigError> {
    if c.is_empty() {
        return Err(ConfigError::at(key, "need at least one coefficient"));
    }
    if c.len() > INPUT_DEGREE + 1 {
        return Err(ConfigError::at(
            key,
            format!("at most {} coefficients (degree {INPUT_DEGREE})", INPUT_DEGREE + 1),
        ));
    }
    if c.iter().any(|v| !v.is_finite()) {
        return Err(ConfigError::at(key, "coefficients must be finite"));
    }
    Ok(())
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

fn real(entries: &BTreeMap<&str, &str>, key: &str) -> Result<f64, ConfigError> {
    let v = entries[key];
    v.parse::<f64>()
        .map_err(|_| ConfigError::at(key, format!("`{v}` is not a real number")))
}

fn reals(entries: &BTreeMap<&str, &str>, key: &str) -> Result<Vec<f64>, ConfigError> {
    entries[key]
        .split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<f64>()
                .map_err(|_| ConfigError::at(key, format!("`{s}` is not a real number")))
        })
        .collect()
}

fn counts(entries: &BTreeMap<&str, &str>, key: &str) -> Result<Vec<usize>, ConfigError> {
    entries[key]
        .split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<usize>()
                .map_err(|_| ConfigError::at(key, format!("`{s}` is not a non-negative integer")))
        })
        .collect()
}
