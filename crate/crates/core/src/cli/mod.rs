//! Batch driver: configuration, the experiment registry and CSV/JSON output.

mod experiments;

use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::rootsystem::SpaceKind;
use crate::transform::GridSpec;

/// Settings shared by all experiments. Unset grid fields fall back to the
/// defaults of each experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub space: Option<SpaceKind>,
    pub t_max: Option<f64>,
    pub t_panel: Option<f64>,
    pub nu_max: Option<f64>,
    pub nu_panel: Option<f64>,
    pub order: Option<usize>,
    pub times: Option<Vec<f64>>,
    pub tolerance: Option<f64>,
    pub samples: usize,
    pub seed: u64,
    pub out: PathBuf,
    /// Record wall-clock time in the summary; off gives byte-identical reruns.
    pub timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            space: None,
            t_max: None,
            t_panel: None,
            nu_max: None,
            nu_panel: None,
            order: None,
            times: None,
            tolerance: None,
            samples: 10_000,
            seed: 1,
            out: PathBuf::from("results"),
            timing: true,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim().parse().map_err(|_| Error::Config(format!("bad value `{v}` for `{key}`")))
}

impl ExperimentConfig {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
            cfg.set(k.trim(), v.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "space" => self.space = Some(v.parse()?),
            "t_max" => self.t_max = Some(parse_num(key, v)?),
            "t_panel" => self.t_panel = Some(parse_num(key, v)?),
            "nu_max" => self.nu_max = Some(parse_num(key, v)?),
            "nu_panel" => self.nu_panel = Some(parse_num(key, v)?),
            "order" => self.order = Some(parse_num(key, v)?),
            "times" => {
                self.times = Some(v.split(',').map(|x| parse_num(key, x)).collect::<Result<_>>()?);
            }
            "tolerance" => self.tolerance = Some(parse_num(key, v)?),
            "samples" => self.samples = parse_num(key, v)?,
            "seed" => self.seed = parse_num(key, v)?,
            "out" => self.out = PathBuf::from(v),
            "timing" => self.timing = parse_num(key, v)?,
            _ => return Err(Error::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [self.t_max, self.t_panel, self.nu_max, self.nu_panel];
        if positive.iter().flatten().any(|v| !(*v > 0.0)) || self.order == Some(0) || self.samples == 0 {
            return Err(Error::Config("grid sizes must be positive".into()));
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0 && t < 1.0) {
                return Err(Error::Config(format!("tolerance {t} is not in (0, 1)")));
            }
        }
        if let Some(ts) = &self.times {
            if ts.is_empty() || ts.iter().any(|t| !(*t > 0.0)) {
                return Err(Error::Config("times must be a nonempty list of positive values".into()));
            }
        }
        Ok(())
    }

    /// `base` with the configured grid overrides applied.
    pub fn grid(&self, base: GridSpec) -> GridSpec {
        GridSpec {
            t_max: self.t_max.unwrap_or(base.t_max),
            t_panel: self.t_panel.unwrap_or(base.t_panel),
            nu_max: self.nu_max.unwrap_or(base.nu_max),
            nu_panel: self.nu_panel.unwrap_or(base.nu_panel),
            order: self.order.unwrap_or(base.order),
        }
    }

    pub fn times_or(&self, default: &[f64]) -> Vec<f64> {
        self.times.clone().unwrap_or_else(|| default.to_vec())
    }

    pub fn space_or(&self, default: SpaceKind) -> SpaceKind {
        self.space.unwrap_or(default)
    }
}

/// One acceptance check inside an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    /// Check passes when value ≤ tolerance, or value ≥ tolerance for floors.
    pub floor: bool,
}

impl Check {
    pub fn at_most(name: &str, value: f64, tolerance: f64) -> Self {
        Check { name: name.into(), value, tolerance, floor: false }
    }

    pub fn at_least(name: &str, value: f64, tolerance: f64) -> Self {
        Check { name: name.into(), value, tolerance, floor: true }
    }

    pub fn pass(&self) -> bool {
        if self.floor {
            self.value >= self.tolerance
        } else {
            self.value <= self.tolerance
        }
    }
}

/// Result of an experiment before serialization.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub space: String,
    pub checks: Vec<Check>,
    pub info: Vec<(String, f64)>,
    pub csv_header: Vec<String>,
    pub csv_rows: Vec<Vec<f64>>,
}

impl Outcome {
    pub fn new(space: String, header: &[&str]) -> Self {
        Outcome { space, csv_header: header.iter().map(|s| s.to_string()).collect(), ..Default::default() }
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn info(&mut self, name: &str, v: f64) {
        self.info.push((name.into(), v));
    }

    pub fn row(&mut self, r: Vec<f64>) {
        self.csv_rows.push(r);
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(Check::pass)
    }
}

/// JSON summary written once per run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub experiment: String,
    pub space: String,
    pub metrics: BTreeMap<String, f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub runtime_ms: u64,
}

type Runner = fn(&ExperimentConfig) -> Result<Outcome>;

pub struct Experiment {
    pub name: &'static str,
    pub doc: &'static str,
    run: Runner,
}

/// The registry in its fixed order.
pub fn registry() -> Vec<Experiment> {
    use experiments::*;
    vec![
        Experiment { name: "cfun-validate", doc: "c-function against the N̄ integral; c(ρ) = 1", run: cfun_validate },
        Experiment { name: "spherical-validate", doc: "φ_λ series/ODE vs boundary integral, Weyl symmetry, eigen-equation", run: spherical_validate },
        Experiment { name: "plancherel-roundtrip", doc: "spherical transform round trip and Plancherel identity", run: plancherel_roundtrip },
        Experiment { name: "heat-kernel-table", doc: "heat kernel table, mass, positivity; H³ closed form", run: heat_kernel_table },
        Experiment { name: "heat-semigroup", doc: "H_t H_s = H_{t+s} and the heat equation", run: heat_semigroup },
        Experiment { name: "convexity-sample", doc: "complex convexity on random (g, Y) in both 2×2 models", run: convexity_sample },
        Experiment { name: "abel-gaussian", doc: "ρ-shifted Radon transform of h_t is a Euclidean Gaussian", run: abel_gaussian },
        Experiment { name: "lambda-unitarity", doc: "Λ isometry, Weyl relation, inverse, Laplacian intertwining", run: lambda_unitarity },
        Experiment { name: "fock-unitarity", doc: "Gaussian Fock norm and inversion of Λ_t", run: fock_unitarity },
        Experiment { name: "hx-kernel", doc: "𝓗_X extension, point bound, reproducing kernels, Gram matrix", run: hx_kernel },
        Experiment { name: "hxi-unitarity", doc: "𝓗_Ξ norm of Λ̃ equals the 𝓗_X norm; t → 0 limit", run: hxi_unitarity },
        Experiment { name: "helgason-roundtrip", doc: "non-radial Helgason transform on H² and Weyl invariance", run: helgason_roundtrip },
    ]
}

/// Names and one-line docs in registry order.
pub fn list_experiments() -> Vec<(&'static str, &'static str)> {
    registry().iter().map(|e| (e.name, e.doc)).collect()
}

fn find(name: &str) -> Result<(usize, Experiment)> {
    registry()
        .into_iter()
        .enumerate()
        .find(|(_, e)| e.name == name)
        .ok_or_else(|| Error::UnknownExperiment {
            name: name.into(),
            valid: list_experiments().iter().map(|p| p.0).collect::<Vec<_>>().join(", "),
        })
}

/// Runs one experiment without writing output.
pub fn run_experiment(cfg: &ExperimentConfig, name: &str) -> Result<(Summary, Outcome)> {
    let (_, exp) = find(name)?;
    let start = Instant::now();
    let outcome = (exp.run)(cfg).map_err(|e| Error::Config(format!("{name}: {e}")))?;
    let runtime_ms = if cfg.timing { start.elapsed().as_millis() as u64 } else { 0 };
    let mut metrics = BTreeMap::new();
    for c in &outcome.checks {
        metrics.insert(c.name.clone(), c.value);
    }
    for (k, v) in &outcome.info {
        metrics.insert(k.clone(), *v);
    }
    let tolerance = outcome.checks.first().map_or(0.0, |c| c.tolerance);
    let summary = Summary { experiment: name.into(), space: outcome.space.clone(), metrics, tolerance, pass: outcome.pass(), runtime_ms };
    Ok((summary, outcome))
}

/// Formats with 17 significant digits.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn csv_text(o: &Outcome) -> String {
    let mut s = o.csv_header.join(",");
    s.push('\n');
    for r in &o.csv_rows {
        let cells: Vec<String> = r.iter().map(|v| fmt_float(*v)).collect();
        let _ = writeln!(s, "{}", cells.join(","));
    }
    s
}

/// Checks table printed by the driver.
pub fn checks_text(o: &Outcome) -> String {
    let mut s = String::new();
    for c in &o.checks {
        let rel = if c.floor { ">=" } else { "<=" };
        let verdict = if c.pass() { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "{verdict} {:<32} {} {rel} {}", c.name, fmt_float(c.value), fmt_float(c.tolerance));
    }
    s
}

/// Runs and writes `<out>/<name>.csv` and `<out>/<name>.json`.
pub fn run(cfg: &ExperimentConfig, name: &str) -> Result<(Summary, Outcome)> {
    let (summary, outcome) = run_experiment(cfg, name)?;
    std::fs::create_dir_all(&cfg.out)?;
    std::fs::write(cfg.out.join(format!("{name}.csv")), csv_text(&outcome))?;
    let json = serde_json::to_string_pretty(&summary).map_err(|e| Error::Io(e.to_string()))?;
    std::fs::write(cfg.out.join(format!("{name}.json")), json + "\n")?;
    Ok((summary, outcome))
}

/// Exit status for a run: 0 if every check passed, otherwise the
/// 1-based registry index of the experiment.
pub fn exit_code(name: &str, pass: bool) -> i32 {
    if pass {
        0
    } else {
        find(name).map(|(i, _)| i as i32 + 1).unwrap_or(100)
    }
}
