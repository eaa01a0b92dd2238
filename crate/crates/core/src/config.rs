//! Run parameters and the plain `key = value` configuration format.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Which free-data profile to sample on the initial slice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DataKind {
    GaussianPhi,
    GaussianBoth,
    Zero,
}

impl FromStr for DataKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian_phi" => Ok(DataKind::GaussianPhi),
            "gaussian_both" => Ok(DataKind::GaussianBoth),
            "zero" => Ok(DataKind::Zero),
            other => Err(Error::Config(format!("unknown data kind `{other}`"))),
        }
    }
}

impl fmt::Display for DataKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DataKind::GaussianPhi => "gaussian_phi",
            DataKind::GaussianBoth => "gaussian_both",
            DataKind::Zero => "zero",
        })
    }
}

/// Even gaussian free data. Every profile is `amp * exp(-(r - center)^2 / width^2)`
/// symmetrised about the axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InitialDataFamily {
    pub kind: DataKind,
    pub amp_phi: f64,
    pub amp_gamma: f64,
    pub amp_phi_t: f64,
    pub amp_gamma_t: f64,
    pub center: f64,
    pub width: f64,
}

impl Default for InitialDataFamily {
    fn default() -> Self {
        InitialDataFamily {
            kind: DataKind::GaussianPhi,
            amp_phi: 0.1,
            amp_gamma: 0.0,
            amp_phi_t: 0.0,
            amp_gamma_t: 0.0,
            center: 4.0,
            width: 1.0,
        }
    }
}

impl InitialDataFamily {
    pub fn zero() -> Self {
        InitialDataFamily {
            kind: DataKind::Zero,
            amp_phi: 0.0,
            amp_gamma: 0.0,
            amp_phi_t: 0.0,
            amp_gamma_t: 0.0,
            ..Default::default()
        }
    }

    pub fn gaussian_phi(amp: f64, center: f64, width: f64) -> Self {
        InitialDataFamily {
            kind: DataKind::GaussianPhi,
            amp_phi: amp,
            amp_gamma: 0.0,
            amp_phi_t: 0.0,
            amp_gamma_t: 0.0,
            center,
            width,
        }
    }

    /// Radius beyond which every profile is below 1e-14 relative to its amplitude.
    pub fn effective_support(&self) -> f64 {
        self.center + 8.0 * self.width
    }

    /// Same family with every amplitude multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        InitialDataFamily {
            amp_phi: self.amp_phi * factor,
            amp_gamma: self.amp_gamma * factor,
            amp_phi_t: self.amp_phi_t * factor,
            amp_gamma_t: self.amp_gamma_t * factor,
            ..*self
        }
    }
}

/// What the command line driver should do with a configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Cauchy,
    Null,
    Crosscheck,
    Converge,
    Diagnose,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cauchy" => Ok(Mode::Cauchy),
            "null" => Ok(Mode::Null),
            "crosscheck" => Ok(Mode::Crosscheck),
            "converge" => Ok(Mode::Converge),
            "diagnose" => Ok(Mode::Diagnose),
            other => Err(Error::Config(format!("unknown mode `{other}`"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Cauchy => "cauchy",
            Mode::Null => "null",
            Mode::Crosscheck => "crosscheck",
            Mode::Converge => "converge",
            Mode::Diagnose => "diagnose",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    /// Klein-Gordon mass.
    pub mass_m: f64,
    pub n_cells: usize,
    pub r_max: f64,
    pub cfl: f64,
    pub t_final: f64,
    /// Exponent of the weighted sup `r^delta |U_v|`.
    pub delta: f64,
    /// Morawetz weight exponent.
    pub sigma: f64,
    /// Inner annulus radius as a fraction of the cone mantle radius.
    pub cone_fraction: f64,
    pub data_family: InitialDataFamily,
    pub mode: Mode,
    /// Apex time of the diagnostic cone; defaults to `t_final`.
    pub apex_time: Option<f64>,
    /// Hold alpha = beta = 0 and evolve the flat wave/Klein-Gordon equations.
    pub frozen_metric: bool,
    pub snapshot_every: usize,
    pub output_dir: Option<PathBuf>,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            mass_m: 1.0,
            n_cells: 1024,
            r_max: 32.0,
            cfl: 0.5,
            t_final: 8.0,
            delta: 0.6,
            sigma: 1.5,
            cone_fraction: 0.5,
            data_family: InitialDataFamily::default(),
            mode: Mode::Cauchy,
            apex_time: None,
            frozen_metric: false,
            snapshot_every: 16,
            output_dir: None,
        }
    }
}

impl SimConfig {
    pub fn spacing(&self) -> f64 {
        self.r_max / self.n_cells as f64
    }

    /// Largest admissible time step.
    pub fn dt_bound(&self) -> f64 {
        self.cfl * self.spacing()
    }

    pub fn apex(&self) -> f64 {
        self.apex_time.unwrap_or(self.t_final)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Config(msg.to_string()));
        if !(self.mass_m.is_finite() && self.mass_m >= 0.0) {
            return bad("mass_m must be finite and non-negative");
        }
        if !(self.r_max.is_finite() && self.r_max > 0.0) {
            return bad("r_max must be finite and positive");
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return bad("cfl must lie in (0, 1]");
        }
        if !(self.t_final.is_finite() && self.t_final > 0.0) {
            return bad("t_final must be finite and positive");
        }
        if !(self.delta > 0.5 && self.delta < 2.0 / 3.0) {
            return bad("delta must lie in (1/2, 2/3)");
        }
        if !(self.sigma > 1.0 && self.sigma < 2.0) {
            return bad("sigma must lie in (1, 2)");
        }
        if !(self.cone_fraction > 0.0 && self.cone_fraction < 1.0) {
            return bad("cone_fraction must lie in (0, 1)");
        }
        if self.snapshot_every == 0 {
            return bad("snapshot_every must be positive");
        }
        let fam = &self.data_family;
        if !(fam.width.is_finite() && fam.width > 0.0) {
            return bad("width must be positive");
        }
        if !(fam.center.is_finite() && fam.center >= 0.0) {
            return bad("center must be non-negative");
        }
        if let Some(apex) = self.apex_time {
            if !(apex.is_finite() && apex > 0.0) {
                return bad("apex_time must be positive");
            }
        }
        Ok(())
    }

    /// Parses the `key = value` format; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = SimConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            cfg.set(key.trim(), value.trim())
                .map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::Config(format!("cannot read config {}: {e}", path.display()))
        })?;
        Self::parse(&text)
    }

    fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        fn num<T: FromStr>(key: &str, value: &str) -> std::result::Result<T, String> {
            value
                .parse::<T>()
                .map_err(|_| format!("cannot parse `{value}` for `{key}`"))
        }
        let fam = &mut self.data_family;
        match key {
            "mass_m" => self.mass_m = num(key, value)?,
            "n_cells" => self.n_cells = num(key, value)?,
            "r_max" => self.r_max = num(key, value)?,
            "cfl" => self.cfl = num(key, value)?,
            "t_final" => self.t_final = num(key, value)?,
            "delta" => self.delta = num(key, value)?,
            "sigma" => self.sigma = num(key, value)?,
            "cone_fraction" => self.cone_fraction = num(key, value)?,
            "apex_time" => self.apex_time = Some(num(key, value)?),
            "frozen_metric" => self.frozen_metric = num(key, value)?,
            "snapshot_every" => self.snapshot_every = num(key, value)?,
            "output_dir" => self.output_dir = Some(PathBuf::from(value)),
            "mode" => self.mode = value.parse().map_err(|e: Error| e.to_string())?,
            "kind" | "data_family" => fam.kind = value.parse().map_err(|e: Error| e.to_string())?,
            "amp_phi" => fam.amp_phi = num(key, value)?,
            "amp_gamma" => fam.amp_gamma = num(key, value)?,
            "amp_phi_t" => fam.amp_phi_t = num(key, value)?,
            "amp_gamma_t" => fam.amp_gamma_t = num(key, value)?,
            "center" => fam.center = num(key, value)?,
            "width" => fam.width = num(key, value)?,
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }
}
