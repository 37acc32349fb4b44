use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::discrepancy::DEFAULT_GRID_BUDGET;
use crate::error::{Error, Result};
use crate::sampling::Seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleKind {
    Lhs,
    Uniform,
}

/// How each trial measures the star discrepancy. `None` skips it and keeps
/// only the witness construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Exact2d,
    Estimate,
    None,
}

impl Method {
    pub fn is_exact(self) -> bool {
        matches!(self, Method::Exact | Method::Exact2d)
    }
}

impl FromStr for SampleKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "lhs" => Ok(SampleKind::Lhs),
            "uniform" => Ok(SampleKind::Uniform),
            other => Err(format!("unknown kind `{other}` (expected lhs or uniform)")),
        }
    }
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exact" => Ok(Method::Exact),
            "exact2d" => Ok(Method::Exact2d),
            "estimate" => Ok(Method::Estimate),
            "none" => Ok(Method::None),
            other => Err(format!(
                "unknown method `{other}` (expected exact, exact2d, estimate or none)"
            )),
        }
    }
}

impl fmt::Display for SampleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SampleKind::Lhs => "lhs",
            SampleKind::Uniform => "uniform",
        })
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Exact => "exact",
            Method::Exact2d => "exact2d",
            Method::Estimate => "estimate",
            Method::None => "none",
        })
    }
}

/// One experiment: `trials` independent samples of `N` points in dimension
/// `d`, each measured by `method` and, where possible, by the witness box.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub kind: SampleKind,
    pub n_points: usize,
    pub dim: usize,
    pub trials: usize,
    pub master_seed: Seed,
    /// Thresholds `c` for the events `D* <= c sqrt(d/N)`.
    pub c_values: Vec<f64>,
    pub method: Method,
    pub estimate_budget: usize,
    pub strict_witness: bool,
    pub grid_budget: u64,
    /// Record wall-clock time per trial. Off by default so that record files
    /// are reproducible byte for byte.
    pub timing: bool,
}

impl ExperimentConfig {
    pub fn new(kind: SampleKind, n_points: usize, dim: usize, trials: usize) -> Self {
        Self {
            kind,
            n_points,
            dim,
            trials,
            master_seed: Seed(0),
            c_values: Vec::new(),
            method: Method::Exact,
            estimate_budget: 10_000,
            strict_witness: true,
            grid_budget: DEFAULT_GRID_BUDGET,
            timing: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::PreconditionViolated(m.to_owned()));
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.n_points == 0 || self.dim == 0 {
            return bad("N and d must be positive");
        }
        if self.method == Method::Exact2d && self.dim != 2 {
            return bad("method exact2d requires d = 2");
        }
        if self.method == Method::Estimate && self.estimate_budget == 0 {
            return bad("estimate_budget must be at least 1");
        }
        if self.c_values.iter().any(|c| c.is_nan() || *c <= 0.0) {
            return bad("c_values must be positive");
        }
        Ok(())
    }

    /// Parses the flat `key = value` format. Keys: `kind`, `N`, `d`,
    /// `trials`, `master_seed`, `c_values` (comma-separated), `method`,
    /// `estimate_budget`, `strict_witness`, `grid_budget`, `timing`. The
    /// first four are required. `#` starts a comment that runs to the end of
    /// the line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut kind = None;
        let mut n_points = None;
        let mut dim = None;
        let mut trials = None;
        let mut cfg = ExperimentConfig::new(SampleKind::Lhs, 1, 1, 1);

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let t = raw.split_once('#').map_or(raw, |(body, _)| body).trim();
            if t.is_empty() {
                continue;
            }
            let (key, value) = t.split_once('=').ok_or_else(|| Error::Config {
                line,
                message: format!("expected `key = value`, found `{t}`"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            let err = |m: String| Error::Config { line, message: m };
            fn num<T: FromStr>(key: &str, v: &str) -> std::result::Result<T, String> {
                v.parse()
                    .map_err(|_| format!("invalid value `{v}` for `{key}`"))
            }
            match key {
                "kind" => kind = Some(value.parse().map_err(err)?),
                "N" | "n_points" => n_points = Some(num(key, value).map_err(err)?),
                "d" | "dim" => dim = Some(num(key, value).map_err(err)?),
                "trials" => trials = Some(num(key, value).map_err(err)?),
                "master_seed" => cfg.master_seed = Seed(num(key, value).map_err(err)?),
                "c_values" => {
                    cfg.c_values = value
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(|s| num(key, s))
                        .collect::<std::result::Result<_, _>>()
                        .map_err(err)?
                }
                "method" => cfg.method = value.parse().map_err(err)?,
                "estimate_budget" => cfg.estimate_budget = num(key, value).map_err(err)?,
                "strict_witness" => cfg.strict_witness = num(key, value).map_err(err)?,
                "grid_budget" => cfg.grid_budget = num(key, value).map_err(err)?,
                "timing" => cfg.timing = num(key, value).map_err(err)?,
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        let missing = |k: &str| Error::Config {
            line: 0,
            message: format!("missing required key `{k}`"),
        };
        cfg.kind = kind.ok_or_else(|| missing("kind"))?;
        cfg.n_points = n_points.ok_or_else(|| missing("N"))?;
        cfg.dim = dim.ok_or_else(|| missing("d"))?;
        cfg.trials = trials.ok_or_else(|| missing("trials"))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Renders the config in the format read by [`ExperimentConfig::parse`].
    pub fn to_text(&self) -> String {
        let cs: Vec<String> = self.c_values.iter().map(|c| format!("{c}")).collect();
        format!(
            "kind = {}\nN = {}\nd = {}\ntrials = {}\nmaster_seed = {}\nc_values = {}\nmethod = {}\nestimate_budget = {}\nstrict_witness = {}\ngrid_budget = {}\ntiming = {}\n",
            self.kind,
            self.n_points,
            self.dim,
            self.trials,
            self.master_seed,
            cs.join(", "),
            self.method,
            self.estimate_budget,
            self.strict_witness,
            self.grid_budget,
            self.timing
        )
    }
}
