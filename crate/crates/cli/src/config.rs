//! Run configuration: defaults, then a key=value file, then flags, then
//! `WDL_THREADS`.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::Serialize;
use wdl_core::analysis::defaults;
use wdl_core::voronoi::DEFAULT_TERM_CAP;
use wdl_core::{Params, WeightKind};

/// Raised for malformed config files or flag values.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn bad(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

/// Flags shared by every subcommand. All optional; unset flags fall back to
/// the config file and then to the defaults.
#[derive(Debug, Default, Clone, Args)]
pub struct Flags {
    #[arg(long, global = true)]
    pub a1: Option<u64>,
    #[arg(long, global = true)]
    pub q1: Option<u64>,
    #[arg(long, global = true)]
    pub a2: Option<u64>,
    #[arg(long, global = true)]
    pub q2: Option<u64>,
    /// cos_sin, sin_sin or cos_cos
    #[arg(long, global = true)]
    pub kind: Option<String>,
    /// Scale parameter; raw or normalised depending on the subcommand.
    #[arg(long = "T", global = true)]
    pub t: Option<f64>,
    /// Moment power.
    #[arg(long, global = true)]
    pub k: Option<u32>,
    /// Shift in the short-interval mean square.
    #[arg(long, global = true)]
    pub h: Option<f64>,
    /// Window length for maxmsq; defaults to c4 √T (log T)^-7.
    #[arg(long = "H0", global = true)]
    pub h0: Option<f64>,
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Kernel sign, +1 or -1.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub zeta: Option<i8>,
    #[arg(long, global = true)]
    pub c1: Option<f64>,
    #[arg(long, global = true)]
    pub c5: Option<f64>,
    #[arg(long, global = true)]
    pub c4: Option<f64>,
    /// Override the R0 cutoff.
    #[arg(long, global = true)]
    pub y: Option<f64>,
    /// Override the R12/R21 factor cap.
    #[arg(long = "H", global = true)]
    pub h_cap: Option<u64>,
    /// Override the dyadic depth.
    #[arg(long = "J", global = true)]
    pub j: Option<u32>,
    /// Term cap for R12/R21.
    #[arg(long, global = true)]
    pub cap: Option<u64>,
    /// Output path stem; writes <stem>.csv and <stem>.json.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Jump table cache file.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Worker threads; 0 means all cores, 1 runs sequentially.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Key=value config file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// `auto` for [T, 2T] or `lo,hi`.
    #[arg(long, global = true)]
    pub window: Option<String>,
    /// Sample count for kernel and voronoi.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Comma-separated raw arguments for eval and bessel-check.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub points: Option<String>,
    /// Comma-separated truncation radii for bessel-check.
    #[arg(long, global = true)]
    pub radii: Option<String>,
    /// Reference C_k for omega and moments.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub ck: Option<f64>,
    /// Perturbation coefficient f in S + f t^{1/4}.
    #[arg(long = "f-coeff", global = true, allow_hyphen_values = true)]
    pub f_coeff: Option<f64>,
    /// r0 or full.
    #[arg(long, global = true)]
    pub series: Option<String>,
    /// In-core table budget in bytes.
    #[arg(long = "memory-budget", global = true)]
    pub memory_budget: Option<u64>,
}

/// Fully resolved configuration, echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub a1: u64,
    pub q1: u64,
    pub a2: u64,
    pub q2: u64,
    pub kind: WeightKind,
    #[serde(rename = "T")]
    pub t: f64,
    pub k: u32,
    pub h: f64,
    #[serde(rename = "H0")]
    pub h0: Option<f64>,
    pub alpha: f64,
    pub zeta: i8,
    pub c1: f64,
    pub c5: f64,
    pub c4: f64,
    pub y: Option<f64>,
    #[serde(rename = "H")]
    pub h_cap: Option<u64>,
    #[serde(rename = "J")]
    pub j: Option<u32>,
    pub cap: u64,
    pub window: Option<(f64, f64)>,
    pub samples: Option<usize>,
    pub points: Vec<f64>,
    pub radii: Vec<f64>,
    pub ck: Option<f64>,
    pub f_coeff: f64,
    pub series: String,
    pub out: Option<PathBuf>,
    pub cache: Option<PathBuf>,
    pub threads: usize,
    pub memory_budget: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            a1: 1,
            q1: 3,
            a2: 1,
            q2: 4,
            kind: WeightKind::CosSin,
            t: 1e5,
            k: 2,
            h: 4.0,
            h0: None,
            alpha: defaults::ALPHA,
            zeta: 1,
            c1: defaults::C1,
            c5: defaults::C5,
            c4: defaults::C4,
            y: None,
            h_cap: None,
            j: None,
            cap: DEFAULT_TERM_CAP,
            window: None,
            samples: None,
            points: vec![5.5, 100.0, 1000.5],
            radii: vec![1e3, 1e4, 1e5],
            ck: None,
            f_coeff: 0.0,
            series: "r0".into(),
            out: None,
            cache: None,
            threads: 0,
            memory_budget: 4 << 30,
        }
    }
}

impl RunConfig {
    /// Defaults, overlaid with the config file named by `--config`, the
    /// flags, and finally the `WDL_THREADS` environment variable.
    pub fn resolve(flags: &Flags, env_threads: Option<&str>) -> anyhow::Result<Self> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &flags.config {
            cfg.apply_file(path)?;
        }
        cfg.apply_flags(flags)?;
        if let Some(v) = env_threads {
            cfg.threads = v.trim().parse().map_err(|_| bad(format!("WDL_THREADS = {v:?} is not a count")))?;
        }
        cfg.params()?;
        Ok(cfg)
    }

    pub fn params(&self) -> anyhow::Result<Params> {
        Ok(Params::new(self.a1, self.q1, self.a2, self.q2, self.kind)?)
    }

    pub fn apply_file(&mut self, path: &Path) -> anyhow::Result<()> {
        let text = std::fs::read_to_string(path)?;
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) =
                line.split_once('=').ok_or_else(|| bad(format!("{}:{}: expected key=value", path.display(), i + 1)))?;
            self.set(key.trim(), value.trim()).map_err(|e| bad(format!("{}:{}: {e}", path.display(), i + 1)))?;
        }
        Ok(())
    }

    /// Sets one field from its textual form. Keys match the flag names.
    pub fn set(&mut self, key: &str, value: &str) -> anyhow::Result<()> {
        match key {
            "a1" => self.a1 = num(key, value)?,
            "q1" => self.q1 = num(key, value)?,
            "a2" => self.a2 = num(key, value)?,
            "q2" => self.q2 = num(key, value)?,
            "kind" => self.kind = value.parse()?,
            "T" | "t" => self.t = num(key, value)?,
            "k" => self.k = num(key, value)?,
            "h" => self.h = num(key, value)?,
            "H0" | "h0" => self.h0 = Some(num(key, value)?),
            "alpha" => self.alpha = num(key, value)?,
            "zeta" => self.zeta = num(key, value)?,
            "c1" => self.c1 = num(key, value)?,
            "c5" => self.c5 = num(key, value)?,
            "c4" => self.c4 = num(key, value)?,
            "y" => self.y = Some(num(key, value)?),
            "H" => self.h_cap = Some(num(key, value)?),
            "J" => self.j = Some(num(key, value)?),
            "cap" => self.cap = num::<f64>(key, value)? as u64,
            "window" => self.window = window(value)?,
            "samples" => self.samples = Some(num(key, value)?),
            "points" => self.points = list(key, value)?,
            "radii" => self.radii = list(key, value)?,
            "ck" => self.ck = Some(num(key, value)?),
            "f_coeff" | "f-coeff" => self.f_coeff = num(key, value)?,
            "series" => self.series = series(value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            "cache" => self.cache = Some(PathBuf::from(value)),
            "threads" => self.threads = num(key, value)?,
            "memory_budget" | "memory-budget" => self.memory_budget = num::<f64>(key, value)? as u64,
            other => return Err(bad(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    fn apply_flags(&mut self, f: &Flags) -> anyhow::Result<()> {
        macro_rules! take {
            ($($field:ident),*) => { $( if let Some(v) = f.$field.clone() { self.$field = v; } )* };
        }
        take!(a1, q1, a2, q2, t, k, h, alpha, zeta, c1, c5, c4, cap, threads, f_coeff, memory_budget);
        if let Some(v) = &f.kind {
            self.kind = v.parse()?;
        }
        for (slot, v) in [(&mut self.h0, f.h0), (&mut self.y, f.y), (&mut self.ck, f.ck)] {
            if v.is_some() {
                *slot = v;
            }
        }
        if f.h_cap.is_some() {
            self.h_cap = f.h_cap;
        }
        if f.j.is_some() {
            self.j = f.j;
        }
        if f.samples.is_some() {
            self.samples = f.samples;
        }
        if let Some(v) = &f.window {
            self.window = window(v)?;
        }
        if let Some(v) = &f.points {
            self.points = list("points", v)?;
        }
        if let Some(v) = &f.radii {
            self.radii = list("radii", v)?;
        }
        if let Some(v) = &f.series {
            self.series = series(v)?;
        }
        if f.out.is_some() {
            self.out = f.out.clone();
        }
        if f.cache.is_some() {
            self.cache = f.cache.clone();
        }
        Ok(())
    }
}

fn num<T: std::str::FromStr>(key: &str, value: &str) -> anyhow::Result<T> {
    value.parse().map_err(|_| bad(format!("{key} = {value:?} is not a valid number")))
}

fn list(key: &str, value: &str) -> anyhow::Result<Vec<f64>> {
    value.split(',').map(|v| num(key, v.trim())).collect()
}

fn window(value: &str) -> anyhow::Result<Option<(f64, f64)>> {
    if value == "auto" {
        return Ok(None);
    }
    match list("window", value)?.as_slice() {
        &[lo, hi] if lo < hi => Ok(Some((lo, hi))),
        _ => Err(bad(format!("window {value:?} must be `auto` or `lo,hi` with lo < hi"))),
    }
}

fn series(value: &str) -> anyhow::Result<String> {
    match value {
        "r0" | "full" => Ok(value.to_string()),
        _ => Err(bad(format!("series {value:?} must be r0 or full"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flags_then_env() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "# comment\na1 = 2\nq1=5\na2=3\nq2 = 7\nT = 2e4\nthreads = 3\nwindow = 10,20\n").unwrap();
        let flags = Flags { config: Some(path), t: Some(5e4), ..Flags::default() };
        let cfg = RunConfig::resolve(&flags, Some("2")).unwrap();
        assert_eq!((cfg.a1, cfg.q1, cfg.a2, cfg.q2), (2, 5, 3, 7));
        assert_eq!(cfg.t, 5e4);
        assert_eq!(cfg.threads, 2);
        assert_eq!(cfg.window, Some((10.0, 20.0)));
    }

    #[test]
    fn rejects_unknown_keys_and_bad_params() {
        let mut cfg = RunConfig::default();
        assert!(cfg.set("nope", "1").is_err());
        assert!(cfg.set("window", "5,1").is_err());
        let flags = Flags { a1: Some(2), q1: Some(4), ..Flags::default() };
        assert!(RunConfig::resolve(&flags, None).is_err());
    }
}
