//! Flat `section.key = value` experiment configuration.
//!
//! Blank lines and lines starting with `#` are ignored. Unknown or repeated
//! keys are errors. Every key has a default; see [`KEYS`] for the schema.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::dynamics::{Integrator, Model, SolverConfig, SUPPORT_MARGIN};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::shooting::ShootConfig;

/// Recognised keys with a one-line description each.
pub const KEYS: &[(&str, &str)] = &[
    ("grid.L", "box length (default 80)"),
    ("grid.N", "number of points, a power of two (default 4096)"),
    ("solver.dt", "time step (default 0.02)"),
    ("solver.t_end", "final time for simulate (default 20)"),
    ("solver.integrator", "strang | etdrk4 (default strang)"),
    ("solver.dealias", "true | false, 2/3 rule (default true)"),
    ("solver.model", "full | linearized | free (default full)"),
    ("data.family", "gaussian_bump | y2_localized | custom_file (default gaussian_bump)"),
    ("data.eps", "amplitude of the data (default 0.05)"),
    ("data.sigma", "width of the Gaussian envelope (default 2)"),
    ("data.path", "CSV with columns x,phi0,phi1 for custom_file"),
    ("data.d", "coefficient of (Y0, nu Y0) added by simulate (default 0)"),
    ("data.auto_project", "remove a Y0 defect from phi1 instead of failing (default false)"),
    ("shoot.t_goal", "survival time to reach (default 20)"),
    ("shoot.max_iter", "bisection steps per segment (default 64)"),
    ("shoot.bracket", "lo,hi replacing the default +-(log 2)^-2 eps^(3/2)"),
    ("shoot.margin", "checkpoint distance before the best exit (default 5)"),
    ("shoot.refine_width", "initial half width of later kick brackets (default 1e-7)"),
    ("shoot.max_segments", "segment budget (default 64)"),
    ("output.path", "output CSV path (overridden by --out)"),
    ("output.stride", "steps between output frames (default 10)"),
    ("diag.sharpness", "cutoff sharpness exponent s (default 0)"),
    ("diag.n_max", "largest time-partition index in the N_T norm (default 12)"),
    ("diag.samples", "size of random test sets (default 50)"),
    ("diag.early_window", "lo,hi window for the a_minus slope (default 0,2)"),
    ("diag.late_window", "lo,hi window for the a_minus envelope (default 50,200)"),
    ("diag.fit_window", "lo,hi window for decay fits (default 1,1e9)"),
    ("decay.input", "simulation CSV read by decay-fit"),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    GaussianBump,
    Y2Localized,
    CustomFile,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::GaussianBump => "gaussian_bump",
            Family::Y2Localized => "y2_localized",
            Family::CustomFile => "custom_file",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subcommand {
    VerifyIdentities,
    Spectral,
    Simulate,
    Shoot,
    DecayFit,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Subcommand::VerifyIdentities => "verify-identities",
            Subcommand::Spectral => "spectral",
            Subcommand::Simulate => "simulate",
            Subcommand::Shoot => "shoot",
            Subcommand::DecayFit => "decay-fit",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub length: f64,
    pub n: usize,
    pub dt: f64,
    pub t_end: f64,
    pub integrator: Integrator,
    pub dealias: bool,
    pub model: Model,
    pub family: Family,
    pub eps: f64,
    pub sigma: f64,
    pub data_path: Option<String>,
    pub d: f64,
    pub auto_project: bool,
    pub t_goal: f64,
    pub max_iter: usize,
    pub bracket: Option<(f64, f64)>,
    pub margin: f64,
    pub refine_width: f64,
    pub max_segments: usize,
    pub output_path: Option<String>,
    pub stride: usize,
    pub sharpness: f64,
    pub n_max: u32,
    pub samples: usize,
    pub early_window: (f64, f64),
    pub late_window: (f64, f64),
    pub fit_window: (f64, f64),
    pub decay_input: Option<String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            length: 80.0,
            n: 4096,
            dt: 0.02,
            t_end: 20.0,
            integrator: Integrator::Strang,
            dealias: true,
            model: Model::Full,
            family: Family::GaussianBump,
            eps: 0.05,
            sigma: 2.0,
            data_path: None,
            d: 0.0,
            auto_project: false,
            t_goal: 20.0,
            max_iter: 64,
            bracket: None,
            margin: 5.0,
            refine_width: 1e-7,
            max_segments: 64,
            output_path: None,
            stride: 10,
            sharpness: 0.0,
            n_max: 12,
            samples: 50,
            early_window: (0.0, 2.0),
            late_window: (50.0, 200.0),
            fit_window: (1.0, 1e9),
            decay_input: None,
        }
    }
}

fn num<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Parse { line, msg: format!("{key}: cannot parse '{v}'") })
}

fn finite(line: usize, key: &str, v: &str) -> Result<f64> {
    let x: f64 = num(line, key, v)?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Parse { line, msg: format!("{key}: value must be finite, got '{v}'") })
    }
}

fn pair(line: usize, key: &str, v: &str) -> Result<(f64, f64)> {
    let mut it = v.split(',');
    match (it.next(), it.next(), it.next()) {
        (Some(a), Some(b), None) => Ok((finite(line, key, a.trim())?, finite(line, key, b.trim())?)),
        _ => Err(Error::Parse { line, msg: format!("{key}: expected 'lo,hi', got '{v}'") }),
    }
}

fn boolean(line: usize, key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(Error::Parse { line, msg: format!("{key}: expected true or false, got '{v}'") }),
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut seen: Vec<String> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let s = raw.trim();
            if s.is_empty() || s.starts_with('#') {
                continue;
            }
            let (key, value) = s
                .split_once('=')
                .ok_or_else(|| Error::Parse { line, msg: format!("expected key = value, got '{s}'") })?;
            let (key, v) = (key.trim(), value.trim());
            if seen.iter().any(|k| k == key) {
                return Err(Error::Parse { line, msg: format!("duplicate key {key}") });
            }
            seen.push(key.to_string());
            // optional keys left empty stay unset, as in the canonical form
            if v.is_empty() && matches!(key, "data.path" | "shoot.bracket" | "output.path" | "decay.input") {
                continue;
            }
            match key {
                "grid.L" => cfg.length = finite(line, key, v)?,
                "grid.N" => cfg.n = num(line, key, v)?,
                "solver.dt" => cfg.dt = finite(line, key, v)?,
                "solver.t_end" => cfg.t_end = finite(line, key, v)?,
                "solver.integrator" => {
                    cfg.integrator = match v {
                        "strang" => Integrator::Strang,
                        "etdrk4" => Integrator::Etdrk4,
                        _ => return Err(Error::Parse { line, msg: format!("unknown integrator '{v}'") }),
                    }
                }
                "solver.dealias" => cfg.dealias = boolean(line, key, v)?,
                "solver.model" => {
                    cfg.model = match v {
                        "full" => Model::Full,
                        "linearized" => Model::Linearized,
                        "free" => Model::Free,
                        _ => return Err(Error::Parse { line, msg: format!("unknown model '{v}'") }),
                    }
                }
                "data.family" => {
                    cfg.family = match v {
                        "gaussian_bump" => Family::GaussianBump,
                        "y2_localized" => Family::Y2Localized,
                        "custom_file" => Family::CustomFile,
                        _ => return Err(Error::Parse { line, msg: format!("unknown data family '{v}'") }),
                    }
                }
                "data.eps" => cfg.eps = finite(line, key, v)?,
                "data.sigma" => cfg.sigma = finite(line, key, v)?,
                "data.path" => cfg.data_path = Some(v.to_string()),
                "data.d" => cfg.d = finite(line, key, v)?,
                "data.auto_project" => cfg.auto_project = boolean(line, key, v)?,
                "shoot.t_goal" => cfg.t_goal = finite(line, key, v)?,
                "shoot.max_iter" => cfg.max_iter = num(line, key, v)?,
                "shoot.bracket" => cfg.bracket = Some(pair(line, key, v)?),
                "shoot.margin" => cfg.margin = finite(line, key, v)?,
                "shoot.refine_width" => cfg.refine_width = finite(line, key, v)?,
                "shoot.max_segments" => cfg.max_segments = num(line, key, v)?,
                "output.path" => cfg.output_path = Some(v.to_string()),
                "output.stride" => cfg.stride = num(line, key, v)?,
                "diag.sharpness" => cfg.sharpness = finite(line, key, v)?,
                "diag.n_max" => cfg.n_max = num(line, key, v)?,
                "diag.samples" => cfg.samples = num(line, key, v)?,
                "diag.early_window" => cfg.early_window = pair(line, key, v)?,
                "diag.late_window" => cfg.late_window = pair(line, key, v)?,
                "diag.fit_window" => cfg.fit_window = pair(line, key, v)?,
                "decay.input" => cfg.decay_input = Some(v.to_string()),
                _ => return Err(Error::Parse { line, msg: format!("unknown key {key}") }),
            }
        }
        Ok(cfg)
    }

    /// Checks everything the given subcommand depends on.
    pub fn validate(&self, sub: Subcommand) -> Result<()> {
        Grid::new(self.length, self.n)?;
        if !(self.eps > 0.0) {
            return Err(Error::Config(format!("data.eps must be positive, got {}", self.eps)));
        }
        if !(self.sigma > 0.0) {
            return Err(Error::Config(format!("data.sigma must be positive, got {}", self.sigma)));
        }
        if self.n_max == 0 || self.samples == 0 {
            return Err(Error::Config("diag.n_max and diag.samples must be positive".into()));
        }
        if self.family == Family::CustomFile && self.data_path.is_none() && matches!(sub, Subcommand::Simulate | Subcommand::Shoot) {
            return Err(Error::Config("data.family = custom_file needs data.path".into()));
        }
        match sub {
            Subcommand::Simulate => self.solver(self.t_end)?.validate(),
            Subcommand::Shoot => {
                self.solver(self.t_goal)?.validate()?;
                self.shoot_config().validate()
            }
            Subcommand::DecayFit => {
                if self.decay_input.is_none() {
                    return Err(Error::Config("decay-fit needs decay.input".into()));
                }
                Ok(())
            }
            Subcommand::VerifyIdentities | Subcommand::Spectral => Ok(()),
        }
    }

    pub fn solver(&self, t_end: f64) -> Result<SolverConfig> {
        Ok(SolverConfig {
            length: self.length,
            n: self.n,
            dt: self.dt,
            t_end,
            integrator: self.integrator,
            output_stride: self.stride,
            dealias: self.dealias,
            model: self.model,
        })
    }

    pub fn shoot_config(&self) -> ShootConfig {
        let mut s = ShootConfig::new(self.eps, self.t_goal);
        s.max_iter = self.max_iter;
        s.bracket = self.bracket;
        s.margin = self.margin;
        s.refine_width = self.refine_width;
        s.max_segments = self.max_segments;
        s
    }

    /// Every effective value as sorted `key=value` lines.
    pub fn canonical(&self) -> String {
        let opt = |o: &Option<String>| o.clone().unwrap_or_default();
        let pr = |p: (f64, f64)| format!("{:e},{:e}", p.0, p.1);
        let mut kv = vec![
            ("data.auto_project", self.auto_project.to_string()),
            ("data.d", format!("{:e}", self.d)),
            ("data.eps", format!("{:e}", self.eps)),
            ("data.family", self.family.name().to_string()),
            ("data.path", opt(&self.data_path)),
            ("data.sigma", format!("{:e}", self.sigma)),
            ("decay.input", opt(&self.decay_input)),
            ("diag.early_window", pr(self.early_window)),
            ("diag.fit_window", pr(self.fit_window)),
            ("diag.late_window", pr(self.late_window)),
            ("diag.n_max", self.n_max.to_string()),
            ("diag.samples", self.samples.to_string()),
            ("diag.sharpness", format!("{:e}", self.sharpness)),
            ("grid.L", format!("{:e}", self.length)),
            ("grid.N", self.n.to_string()),
            ("output.stride", self.stride.to_string()),
            ("shoot.bracket", self.bracket.map(pr).unwrap_or_default()),
            ("shoot.margin", format!("{:e}", self.margin)),
            ("shoot.max_iter", self.max_iter.to_string()),
            ("shoot.max_segments", self.max_segments.to_string()),
            ("shoot.refine_width", format!("{:e}", self.refine_width)),
            ("shoot.t_goal", format!("{:e}", self.t_goal)),
            ("solver.dealias", self.dealias.to_string()),
            ("solver.dt", format!("{:e}", self.dt)),
            ("solver.integrator", format!("{:?}", self.integrator).to_lowercase()),
            ("solver.model", format!("{:?}", self.model).to_lowercase()),
            ("solver.t_end", format!("{:e}", self.t_end)),
        ];
        kv.sort();
        let mut out = String::new();
        for (k, v) in kv {
            let _ = writeln!(out, "{k}={v}");
        }
        out
    }

    /// SHA-256 of [`ExperimentConfig::canonical`], hex encoded.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        digest.iter().fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }

    /// Box needed for a run of length `t`.
    pub fn required_length(t: f64) -> f64 {
        2.0 * t + SUPPORT_MARGIN
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_dotted_keys() {
        let cfg = ExperimentConfig::parse("# run\ngrid.L = 120\n\nsolver.dt=0.005\nsolver.integrator = etdrk4\nshoot.bracket = -0.1, 0.1\n").unwrap();
        assert_eq!(cfg.length, 120.0);
        assert_eq!(cfg.dt, 0.005);
        assert_eq!(cfg.integrator, Integrator::Etdrk4);
        assert_eq!(cfg.bracket, Some((-0.1, 0.1)));
    }

    #[test]
    fn reports_line_numbers() {
        match ExperimentConfig::parse("grid.L = 80\nsolver.bogus = 1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(ExperimentConfig::parse("grid.L = 80\ngrid.L = 90\n").is_err());
        assert!(ExperimentConfig::parse("grid.L 80\n").is_err());
        assert!(ExperimentConfig::parse("grid.L = nan\n").is_err());
    }

    #[test]
    fn box_rule_is_checked() {
        let cfg = ExperimentConfig::parse("grid.L = 80\nsolver.t_end = 30\n").unwrap();
        let err = cfg.validate(Subcommand::Simulate).unwrap_err().to_string();
        assert!(err.contains("L >= 2 t_end + 40"), "{err}");
        assert!(cfg.validate(Subcommand::VerifyIdentities).is_ok());
    }

    #[test]
    fn hash_ignores_layout() {
        let a = ExperimentConfig::parse("grid.L = 80\nsolver.dt = 0.01\n").unwrap();
        let b = ExperimentConfig::parse("# x\nsolver.dt=0.01\ngrid.L=80.0\n").unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
        let c = ExperimentConfig::parse("solver.dt = 0.02\n").unwrap();
        assert_ne!(a.hash(), c.hash());
    }

    #[test]
    fn canonical_form_parses_back() {
        for text in ["", "shoot.bracket = -1,1\ndata.path = a b.csv\n"] {
            let cfg = ExperimentConfig::parse(text).unwrap();
            assert_eq!(ExperimentConfig::parse(&cfg.canonical()).unwrap(), cfg);
        }
    }
}
