//! Run configuration: a flat `key = value` text format with dotted keys.
//!
//! ```text
//! # comments start with '#'
//! command = bifurcate
//! model = lpa
//! control.scheme = vmtoc
//! control.target = 30, 30, 200
//!
//! [scan]
//! grid = k/300      # same as scan.grid
//! ```
//!
//! A `[section]` line prefixes the keys below it. Unknown keys are errors.
//! Every default reproduces the figure settings: 3000 transient steps, 50
//! retained points, grid `k/300`.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use chaosctl_core::dynamics::{
    self, DEFAULT_KEEP, DEFAULT_MAX_PERIOD, DEFAULT_PERIOD_TOL, DEFAULT_TRANSIENT,
};
use chaosctl_core::models::{LpaParams, RickerParams};
use chaosctl_core::{NormKind, Scheme};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Simulate,
    Equilibrium,
    Stability,
    Bifurcate,
    Bubbles,
    Lyapunov,
    Cost,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Simulate,
        Command::Equilibrium,
        Command::Stability,
        Command::Bifurcate,
        Command::Bubbles,
        Command::Lyapunov,
        Command::Cost,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Equilibrium => "equilibrium",
            Command::Stability => "stability",
            Command::Bifurcate => "bifurcate",
            Command::Bubbles => "bubbles",
            Command::Lyapunov => "lyapunov",
            Command::Cost => "cost",
        }
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command '{s}'"))
    }
}

/// Intensity grid of a scan.
#[derive(Debug, Clone, PartialEq)]
pub enum GridSpec {
    /// `k/n` for `k = 0, …, n − 1`.
    Uniform(usize),
    /// `count` evenly spaced values from `start` to `stop` inclusive.
    Linspace {
        start: f64,
        stop: f64,
        count: usize,
    },
    List(Vec<f64>),
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        match self {
            GridSpec::Uniform(n) => dynamics::uniform_grid(*n),
            GridSpec::Linspace { start, stop, count } => match count {
                0 => Vec::new(),
                1 => vec![*start],
                n => (0..*n)
                    .map(|k| start + (stop - start) * k as f64 / (n - 1) as f64)
                    .collect(),
            },
            GridSpec::List(v) => v.clone(),
        }
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridSpec::Uniform(n) => write!(f, "k/{n}"),
            GridSpec::Linspace { start, stop, count } => write!(f, "{start}:{stop}:{count}"),
            GridSpec::List(v) => f.write_str(&join(v)),
        }
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if let Some(n) = s.strip_prefix("k/") {
            let n: usize = n
                .trim()
                .parse()
                .map_err(|_| format!("bad grid size in '{s}'"))?;
            if n == 0 {
                return Err("grid size must be positive".into());
            }
            return Ok(GridSpec::Uniform(n));
        }
        if s.contains(':') {
            let parts: Vec<&str> = s.split(':').map(str::trim).collect();
            let [a, b, n] = parts[..] else {
                return Err(format!("expected start:stop:count, got '{s}'"));
            };
            return Ok(GridSpec::Linspace {
                start: parse_f64(a)?,
                stop: parse_f64(b)?,
                count: n.parse().map_err(|_| format!("bad count '{n}'"))?,
            });
        }
        Ok(GridSpec::List(parse_vec(s)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitKind {
    Fresh,
    Continue,
    Fixed,
}

impl InitKind {
    fn name(self) -> &'static str {
        match self {
            InitKind::Fresh => "fresh",
            InitKind::Continue => "continue",
            InitKind::Fixed => "fixed",
        }
    }
}

impl FromStr for InitKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fresh" => Ok(InitKind::Fresh),
            "continue" => Ok(InitKind::Continue),
            "fixed" => Ok(InitKind::Fixed),
            _ => Err(format!("expected fresh, continue or fixed, got '{s}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    /// `lpa`, `ricker` or a registered plugin name.
    pub name: String,
    pub lpa: LpaParams,
    pub ricker: RickerParams,
    /// Numeric parameters handed to plugins (`plugin.<key>`).
    pub plugin: BTreeMap<String, f64>,
}

impl Default for ModelSpec {
    fn default() -> Self {
        Self {
            name: "lpa".into(),
            lpa: LpaParams::default(),
            ricker: RickerParams { r: 2.0, delay: 2 },
            plugin: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ControlSpec {
    /// `None` runs the bare map.
    pub scheme: Option<Scheme>,
    /// One value, or one per component for the diagonal scheme.
    pub c: Vec<f64>,
    /// Defaults to the equilibrium found by the equilibrium solver when a
    /// target-based scheme is used without one.
    pub target: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimOptions {
    pub x0: Option<Vec<f64>>,
    pub n_transient: usize,
    pub n_keep: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanOptions {
    pub grid: GridSpec,
    pub init: InitKind,
    /// Initial-condition box; `[0, 50]^d` when unset.
    pub lo: Option<Vec<f64>>,
    pub hi: Option<Vec<f64>>,
    pub period_tol: f64,
    pub max_period: usize,
    /// Adds a `cost` column to the scan CSV.
    pub cost: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumOptions {
    pub x0: Option<Vec<f64>>,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityOptions {
    /// The set `S`; the single point `{K}` when unset.
    pub set_lo: Option<Vec<f64>>,
    pub set_hi: Option<Vec<f64>>,
    pub grid: usize,
    pub samples: usize,
    /// Compact box for `L`; skipped when unset.
    pub lipschitz_lo: Option<Vec<f64>>,
    pub lipschitz_hi: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LyapunovOptions {
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostOptions {
    /// Averaging window over the retained orbit; the whole tail by default.
    pub window_start: usize,
    pub window_len: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub seed: u64,
    pub out: String,
    pub strict: bool,
    pub norm: NormKind,
    pub model: ModelSpec,
    pub control: ControlSpec,
    pub sim: SimOptions,
    pub scan: ScanOptions,
    pub equilibrium: EquilibriumOptions,
    pub stability: StabilityOptions,
    pub lyapunov: LyapunovOptions,
    pub cost: CostOptions,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: Command::Simulate,
            seed: 0,
            out: "chaosctl".into(),
            strict: false,
            norm: NormKind::Max,
            model: ModelSpec::default(),
            control: ControlSpec::default(),
            sim: SimOptions {
                x0: None,
                n_transient: DEFAULT_TRANSIENT,
                n_keep: DEFAULT_KEEP,
            },
            scan: ScanOptions {
                grid: GridSpec::Uniform(300),
                init: InitKind::Fresh,
                lo: None,
                hi: None,
                period_tol: DEFAULT_PERIOD_TOL,
                max_period: DEFAULT_MAX_PERIOD,
                cost: false,
            },
            equilibrium: EquilibriumOptions {
                x0: None,
                tol: 1e-10,
            },
            stability: StabilityOptions {
                set_lo: None,
                set_hi: None,
                grid: 5,
                samples: 1000,
                lipschitz_lo: None,
                lipschitz_hi: None,
            },
            lyapunov: LyapunovOptions { n: 10_000 },
            cost: CostOptions {
                window_start: 0,
                window_len: None,
            },
        }
    }
}

fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("'{s}' is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

fn parse_vec(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(parse_f64).collect()
}

fn parse_opt_vec(s: &str) -> Result<Option<Vec<f64>>, String> {
    if s == "none" {
        Ok(None)
    } else {
        parse_vec(s).map(Some)
    }
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("expected true or false, got '{s}'")),
    }
}

fn parse_num<T: FromStr>(s: &str) -> Result<T, String> {
    s.parse()
        .map_err(|_| format!("'{s}' is not a valid non-negative integer"))
}

fn join(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

impl RunConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        let value = value.trim();
        self.set_inner(key, value)
            .map_err(|message| CliError::config(key, message))
    }

    fn set_inner(&mut self, key: &str, v: &str) -> Result<(), String> {
        match key {
            "command" => self.command = v.parse()?,
            "seed" => self.seed = parse_num(v)?,
            "out" => self.out = v.to_string(),
            "strict" => self.strict = parse_bool(v)?,
            "norm" => {
                self.norm = NormKind::parse(v)
                    .ok_or_else(|| format!("unknown norm '{v}' (max, euclidean, sum)"))?
            }
            "model" | "model.name" => {
                if v.is_empty() {
                    return Err("model name is empty".into());
                }
                self.model.name = v.to_string()
            }
            "lpa.b" => self.model.lpa.b = parse_f64(v)?,
            "lpa.c_el" => self.model.lpa.c_el = parse_f64(v)?,
            "lpa.c_ea" => self.model.lpa.c_ea = parse_f64(v)?,
            "lpa.c_pa" => self.model.lpa.c_pa = parse_f64(v)?,
            "lpa.mu_l" => self.model.lpa.mu_l = parse_f64(v)?,
            "lpa.mu_a" => self.model.lpa.mu_a = parse_f64(v)?,
            "ricker.r" => self.model.ricker.r = parse_f64(v)?,
            "ricker.delay" => self.model.ricker.delay = parse_num(v)?,
            "control.scheme" => {
                self.control.scheme = if v == "none" {
                    None
                } else {
                    Some(Scheme::parse(v).ok_or_else(|| {
                        format!("unknown scheme '{v}' (none, vmtoc, vtoc, pf, mpf, diag-vmtoc)")
                    })?)
                }
            }
            "control.c" => self.control.c = parse_vec(v)?,
            "control.target" => self.control.target = parse_opt_vec(v)?,
            "sim.x0" => self.sim.x0 = parse_opt_vec(v)?,
            "sim.n_transient" => self.sim.n_transient = parse_num(v)?,
            "sim.n_keep" => self.sim.n_keep = parse_num(v)?,
            "scan.grid" => self.scan.grid = v.parse()?,
            "scan.init" => self.scan.init = v.parse()?,
            "scan.lo" => self.scan.lo = parse_opt_vec(v)?,
            "scan.hi" => self.scan.hi = parse_opt_vec(v)?,
            "scan.period_tol" => self.scan.period_tol = parse_f64(v)?,
            "scan.max_period" => self.scan.max_period = parse_num(v)?,
            "scan.cost" => self.scan.cost = parse_bool(v)?,
            "equilibrium.x0" => self.equilibrium.x0 = parse_opt_vec(v)?,
            "equilibrium.tol" => self.equilibrium.tol = parse_f64(v)?,
            "stability.set.lo" => self.stability.set_lo = parse_opt_vec(v)?,
            "stability.set.hi" => self.stability.set_hi = parse_opt_vec(v)?,
            "stability.grid" => self.stability.grid = parse_num(v)?,
            "stability.samples" => self.stability.samples = parse_num(v)?,
            "stability.lipschitz.lo" => self.stability.lipschitz_lo = parse_opt_vec(v)?,
            "stability.lipschitz.hi" => self.stability.lipschitz_hi = parse_opt_vec(v)?,
            "lyapunov.n" => self.lyapunov.n = parse_num(v)?,
            "cost.window.start" => self.cost.window_start = parse_num(v)?,
            "cost.window.len" => {
                self.cost.window_len = if v == "none" {
                    None
                } else {
                    Some(parse_num(v)?)
                }
            }
            _ => match key.strip_prefix("plugin.") {
                Some(name) if !name.is_empty() => {
                    self.model.plugin.insert(name.to_string(), parse_f64(v)?);
                }
                _ => return Err("unknown key".into()),
            },
        }
        Ok(())
    }

    /// Applies a `key=value` override as given on the command line.
    pub fn apply_override(&mut self, spec: &str) -> CliResult<()> {
        let (k, v) = spec
            .split_once('=')
            .ok_or_else(|| CliError::config(spec, "override must look like key=value"))?;
        self.set(k.trim(), v)
    }

    /// Parses config text on top of the defaults.
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut cfg = Self::default();
        cfg.merge_text(text)?;
        Ok(cfg)
    }

    /// Parses config text on top of `self`.
    pub fn merge_text(&mut self, text: &str) -> CliResult<()> {
        let mut section = String::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = name.trim().to_string();
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                CliError::config(
                    format!("line {}", i + 1),
                    format!("expected key = value, got '{line}'"),
                )
            })?;
            let k = k.trim();
            let key = if section.is_empty() {
                k.to_string()
            } else {
                format!("{section}.{k}")
            };
            self.set(&key, v)?;
        }
        Ok(())
    }

    /// Serializes every setting; `parse(to_text())` gives back `self`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        let opt = |v: &Option<Vec<f64>>| v.as_deref().map_or_else(|| "none".to_string(), join);
        kv("command", self.command.name().into());
        kv("seed", self.seed.to_string());
        kv("out", self.out.clone());
        kv("strict", self.strict.to_string());
        kv("norm", self.norm.name().into());
        kv("model", self.model.name.clone());
        let p = &self.model.lpa;
        kv("lpa.b", p.b.to_string());
        kv("lpa.c_el", p.c_el.to_string());
        kv("lpa.c_ea", p.c_ea.to_string());
        kv("lpa.c_pa", p.c_pa.to_string());
        kv("lpa.mu_l", p.mu_l.to_string());
        kv("lpa.mu_a", p.mu_a.to_string());
        kv("ricker.r", self.model.ricker.r.to_string());
        kv("ricker.delay", self.model.ricker.delay.to_string());
        for (k, v) in &self.model.plugin {
            kv(&format!("plugin.{k}"), v.to_string());
        }
        kv(
            "control.scheme",
            self.control.scheme.map_or("none", |s| s.name()).into(),
        );
        if !self.control.c.is_empty() {
            kv("control.c", join(&self.control.c));
        }
        kv("control.target", opt(&self.control.target));
        kv("sim.x0", opt(&self.sim.x0));
        kv("sim.n_transient", self.sim.n_transient.to_string());
        kv("sim.n_keep", self.sim.n_keep.to_string());
        kv("scan.grid", self.scan.grid.to_string());
        kv("scan.init", self.scan.init.name().into());
        kv("scan.lo", opt(&self.scan.lo));
        kv("scan.hi", opt(&self.scan.hi));
        kv("scan.period_tol", self.scan.period_tol.to_string());
        kv("scan.max_period", self.scan.max_period.to_string());
        kv("scan.cost", self.scan.cost.to_string());
        kv("equilibrium.x0", opt(&self.equilibrium.x0));
        kv("equilibrium.tol", self.equilibrium.tol.to_string());
        kv("stability.set.lo", opt(&self.stability.set_lo));
        kv("stability.set.hi", opt(&self.stability.set_hi));
        kv("stability.grid", self.stability.grid.to_string());
        kv("stability.samples", self.stability.samples.to_string());
        kv("stability.lipschitz.lo", opt(&self.stability.lipschitz_lo));
        kv("stability.lipschitz.hi", opt(&self.stability.lipschitz_hi));
        kv("lyapunov.n", self.lyapunov.n.to_string());
        kv("cost.window.start", self.cost.window_start.to_string());
        kv(
            "cost.window.len",
            self.cost
                .window_len
                .map_or_else(|| "none".into(), |n| n.to_string()),
        );
        s
    }

    /// Checks everything that does not depend on the model dimension.
    pub fn validate(&self) -> CliResult<()> {
        let bad = |k: &str, m: &str| Err(CliError::config(k, m));
        if self.out.is_empty() {
            return bad("out", "output prefix is empty");
        }
        if self.sim.n_keep == 0 {
            return bad("sim.n_keep", "must be positive");
        }
        if self.scan.max_period == 0 {
            return bad("scan.max_period", "must be positive");
        }
        if self.scan.period_tol <= 0.0 {
            return bad("scan.period_tol", "must be positive");
        }
        if self.equilibrium.tol <= 0.0 {
            return bad("equilibrium.tol", "must be positive");
        }
        if self.lyapunov.n < 1000 {
            return bad("lyapunov.n", "at least 1000 steps are required");
        }
        if self.cost.window_len == Some(0) {
            return bad("cost.window.len", "must be positive");
        }
        let grid = self.scan.grid.values();
        if grid.is_empty() {
            return bad("scan.grid", "grid is empty");
        }
        if let Some(c) = grid.iter().find(|c| !(0.0..1.0).contains(*c)) {
            return Err(CliError::config(
                "scan.grid",
                format!("intensity {c} is outside [0, 1)"),
            ));
        }
        if let Some(c) = self.control.c.iter().find(|c| !(0.0..1.0).contains(*c)) {
            return Err(CliError::config(
                "control.c",
                format!("intensity {c} is outside [0, 1)"),
            ));
        }
        if self.control.c.len() > 1 && self.control.scheme != Some(Scheme::DiagVmtoc) {
            return bad(
                "control.c",
                "several intensities need control.scheme = diag-vmtoc",
            );
        }
        self.model
            .lpa
            .validate()
            .map_err(|e| CliError::config("lpa", e.to_string()))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let cfg = RunConfig::default();
        assert_eq!(RunConfig::parse(&cfg.to_text()).unwrap(), cfg);
    }

    #[test]
    fn sections_prefix_keys() {
        let cfg = RunConfig::parse(
            "[scan]\ngrid = 0:0.5:11 # eleven\n[control]\nscheme = vmtoc\nc = 0.3\n",
        )
        .unwrap();
        assert_eq!(cfg.scan.grid.values().len(), 11);
        assert_eq!(cfg.control.scheme, Some(Scheme::Vmtoc));
        assert_eq!(cfg.control.c, vec![0.3]);
    }

    #[test]
    fn errors_name_the_field() {
        let err = RunConfig::parse("control.c = 1.5\ncontrol.scheme = vmtoc")
            .unwrap()
            .validate()
            .unwrap_err();
        assert!(err.to_string().starts_with("control.c:"), "{err}");
        let err = RunConfig::parse("model.colour = red").unwrap_err();
        assert!(err.to_string().starts_with("model.colour:"), "{err}");
        let err = RunConfig::parse("command = fly").unwrap_err();
        assert!(err.to_string().contains("command"), "{err}");
        let err = RunConfig::parse("scan.grid = k/0").unwrap_err();
        assert!(err.to_string().starts_with("scan.grid:"), "{err}");
    }

    #[test]
    fn grid_forms() {
        assert_eq!(
            "k/4".parse::<GridSpec>().unwrap().values(),
            vec![0.0, 0.25, 0.5, 0.75]
        );
        assert_eq!("0.1:0.3:3".parse::<GridSpec>().unwrap().values().len(), 3);
        assert_eq!(
            "0.2, 0.4".parse::<GridSpec>().unwrap().values(),
            vec![0.2, 0.4]
        );
    }

    #[test]
    fn overrides_need_an_equals_sign() {
        let mut cfg = RunConfig::default();
        cfg.apply_override("seed=7").unwrap();
        assert_eq!(cfg.seed, 7);
        assert!(cfg.apply_override("seed").is_err());
    }
}
