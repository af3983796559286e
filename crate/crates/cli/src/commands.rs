//! One function per subcommand, each returning a [`Report`].

use std::f64::consts::PI;
use std::time::Instant;

use log::{info, warn};
use serde_json::json;
use wdl_core::analysis::{
    exceedance_measure, kernel_grid, max_increment_msq, moment_with_reference, omega_witness, scan_sign_changes,
    short_interval_msq, single_sign_runs, KernelSpec, OmegaOptions, OmegaOutcome, ScanOptions,
};
use wdl_core::arith::{sieve_jumps_with, SieveConfig};
use wdl_core::exactsum::{read_cache, s_plus_minus_of, write_cache};
use wdl_core::voronoi::{
    derive_truncation, residual_mean_square, BesselPath, BesselSeriesConfig, TruncationMode, TruncationParams,
    VoronoiSeries,
};
use wdl_core::{JumpTable, Params, WeightKind};

use crate::config::RunConfig;
use crate::report::{row, Report};

/// Jump table covering raw arguments up to `need`, from the cache when it
/// matches, otherwise sieved (and written back when a cache path is set).
pub fn table(cfg: &RunConfig, need: f64) -> anyhow::Result<JumpTable> {
    let p = cfg.params()?;
    let x_max = need.ceil().max(1.0) as u64;
    if let Some(path) = &cfg.cache {
        if path.exists() {
            let t = read_cache(path)?;
            if *t.params() == p && t.x_max() >= x_max {
                info!("using cached table {} (X = {})", path.display(), t.x_max());
                return Ok(t);
            }
            warn!("cache {} does not cover X = {x_max} for {p:?}; rebuilding", path.display());
        }
    }
    let start = Instant::now();
    let sieve = SieveConfig { memory_budget: cfg.memory_budget, ..SieveConfig::default() };
    let t = sieve_jumps_with(x_max, &p, &sieve)?;
    info!("sieved X = {x_max} in {:.2}s", start.elapsed().as_secs_f64());
    if let Some(path) = &cfg.cache {
        write_cache(path, &t)?;
        info!("wrote cache {}", path.display());
    }
    Ok(t)
}

fn q(cfg: &RunConfig) -> f64 {
    (cfg.q1 * cfg.q2) as f64
}

/// `c4 √T (log T)^{-7}`.
fn default_h0(cfg: &RunConfig) -> f64 {
    cfg.c4 * cfg.t.sqrt() * cfg.t.ln().powi(-7)
}

/// Builds a table for normalised `[0, 2T]`.
pub fn sieve(cfg: &RunConfig) -> anyhow::Result<Report> {
    let tab = table(cfg, 2.0 * q(cfg) * cfg.t + 1.0)?;
    let check = tab.spot_check(100, 0);
    let mut r = Report::new(
        "sieve",
        &["x_max", "a1", "q1", "a2", "q2", "kind", "spot_checked", "max_rel_error", "worst_index"],
    );
    r.push(row![
        tab.x_max(),
        cfg.a1,
        cfg.q1,
        cfg.a2,
        cfg.q2,
        cfg.kind.as_str(),
        check.checked,
        check.max_rel_error,
        check.worst_index
    ]);
    if check.max_rel_error > 1e-8 {
        r.warnings.push(format!("spot check relative error {:.3e} exceeds 1e-8", check.max_rel_error));
    }
    r.results = json!({ "x_max": tab.x_max(), "spot_check": check, "cache": cfg.cache });
    Ok(r)
}

/// `S(x)` at raw points.
pub fn eval(cfg: &RunConfig) -> anyhow::Result<Report> {
    let top = cfg.points.iter().cloned().fold(0.0, f64::max);
    let tab = table(cfg, top + 1.0)?;
    let mut r = Report::new("eval", &["x", "s", "s_plus", "s_minus"]);
    let mut values = Vec::new();
    for &x in &cfg.points {
        let s = tab.s_eval(x)?;
        let (plus, minus) = s_plus_minus_of(s);
        r.push(row![x, s, plus, minus]);
        values.push(json!({ "x": x, "s": s }));
    }
    r.results = json!({ "values": values });
    Ok(r)
}

fn raw_window(cfg: &RunConfig) -> (f64, f64) {
    cfg.window.unwrap_or((cfg.t, 2.0 * cfg.t))
}

/// Sign changes of `S + f t^{1/4}` over a raw window.
pub fn scan(cfg: &RunConfig) -> anyhow::Result<Report> {
    let (lo, hi) = raw_window(cfg);
    let tab = table(cfg, hi + 2.0)?;
    let opts = ScanOptions { c1: cfg.c1, f_coeff: cfg.f_coeff };
    let rep = scan_sign_changes(lo, hi, &tab, &opts)?;
    let mut r = Report::new("scan", &["crossing", "max_gap", "gap_ratio"]);
    if rep.crossings.is_empty() {
        r.push(row![None::<f64>, rep.max_gap, rep.gap_ratio]);
    }
    for &c in &rep.crossings {
        r.push(row![c, rep.max_gap, rep.gap_ratio]);
    }
    if cfg.c1 > 0.0 && rep.witnesses.is_none() {
        r.warnings.push(format!("no pair of witnesses with |S| >= {} t^(1/4) in the window", cfg.c1));
    }
    r.results = json!({
        "window": rep.window,
        "crossings": rep.crossings.len(),
        "max_gap": rep.max_gap,
        "gap_ratio": rep.gap_ratio,
        "witnesses": rep.witnesses,
        "options": rep.options,
    });
    Ok(r)
}

pub fn exceed(cfg: &RunConfig) -> anyhow::Result<Report> {
    let tab = table(cfg, 2.0 * cfg.t + 2.0)?;
    let (plus, minus) = exceedance_measure(cfg.t, &tab, cfg.c5)?;
    let mut r = Report::new("exceed", &["T", "c5", "sign", "measure", "fraction"]);
    r.push(row![cfg.t, cfg.c5, "plus", plus, plus / cfg.t]);
    r.push(row![cfg.t, cfg.c5, "minus", minus, minus / cfg.t]);
    r.results = json!({ "plus": plus, "minus": minus, "plus_fraction": plus / cfg.t, "minus_fraction": minus / cfg.t });
    Ok(r)
}

pub fn runs(cfg: &RunConfig) -> anyhow::Result<Report> {
    let tab = table(cfg, 2.0 * cfg.t + 2.0)?;
    let l = cfg.h0.unwrap_or_else(|| default_h0(cfg));
    let rep = single_sign_runs(cfg.t, &tab, cfg.c5, l)?;
    let mut r = Report::new("runs", &["sign", "start", "end", "length", "subintervals"]);
    for (name, stats) in [("plus", &rep.plus), ("minus", &rep.minus)] {
        for &(a, b) in &stats.runs {
            r.push(row![name, a, b, b - a, ((b - a) / l).floor() as u64]);
        }
    }
    r.results = json!({
        "length": rep.length,
        "plus": { "count": rep.plus.count, "longest": rep.plus.longest, "runs": rep.plus.runs.len() },
        "minus": { "count": rep.minus.count, "longest": rep.minus.longest, "runs": rep.minus.runs.len() },
    });
    Ok(r)
}

/// Kernel identity on a grid of normalised `t` in `[√T, √(2T)]`.
pub fn kernel(cfg: &RunConfig) -> anyhow::Result<Report> {
    let p = cfg.params()?;
    let spec = KernelSpec::new(cfg.alpha, cfg.zeta, &p)?;
    let (lo, hi) = cfg.window.unwrap_or((cfg.t.sqrt(), (2.0 * cfg.t).sqrt()));
    let n = cfg.samples.unwrap_or(200).max(1);
    let ts: Vec<f64> = (0..n).map(|i| lo + (i as f64 + 0.5) * (hi - lo) / n as f64).collect();
    let tab = table(cfg, q(cfg) * (hi + cfg.alpha).powi(2) + 2.0)?;
    let results = kernel_grid(&ts, &spec, &tab, cfg.f_coeff)?;
    let bound = 0.25 / (2.0 * (spec.n0 as f64).powf(0.75));
    let mut r = Report::new("kernel", &["t", "lhs", "predicted", "residual"]);
    for k in &results {
        r.push(row![k.t, k.lhs, k.predicted, k.residual]);
    }
    let within = results.iter().filter(|k| k.residual.abs() <= bound).count();
    let worst = results.iter().map(|k| k.residual.abs()).fold(0.0, f64::max);
    r.results = json!({
        "spec": spec,
        "bound": bound,
        "fraction_within_bound": within as f64 / n as f64,
        "max_abs_residual": worst,
    });
    Ok(r)
}

pub fn msq(cfg: &RunConfig) -> anyhow::Result<Report> {
    let tab = table(cfg, q(cfg) * (2.0 * cfg.t + cfg.h) + 3.0)?;
    let m = short_interval_msq(cfg.t, cfg.h, &tab)?;
    let l = cfg.t.ln();
    let scale = q(cfg).powi(2) * (cfg.h * cfg.t * (cfg.t.sqrt() / cfg.h).ln().powi(3) + cfg.t * l.powi(6));
    let mut r = Report::new("msq", &["T", "h", "value", "ratio"]);
    r.push(row![cfg.t, cfg.h, m.value, m.value / scale]);
    r.warnings = m.warnings.clone();
    r.results = json!({ "value": m.value, "scale": scale, "ratio": m.value / scale });
    Ok(r)
}

pub fn maxmsq(cfg: &RunConfig) -> anyhow::Result<Report> {
    let h0 = cfg.h0.unwrap_or_else(|| default_h0(cfg));
    let tab = table(cfg, q(cfg) * (2.0 * cfg.t + h0) + 3.0)?;
    let m = max_increment_msq(cfg.t, h0, &tab)?;
    let mut r = Report::new("maxmsq", &["T", "H0", "plus", "minus"]);
    r.push(row![cfg.t, h0, m.plus, m.minus]);
    r.results = json!(m);
    Ok(r)
}

pub fn moments(cfg: &RunConfig) -> anyhow::Result<Report> {
    let tab = table(cfg, q(cfg) * cfg.t + 2.0)?;
    let m = moment_with_reference(cfg.t, cfg.k, &tab, cfg.ck)?;
    let mut r = Report::new("moments", &["T", "k", "integral", "c_hat", "first_moment_ratio", "f_k"]);
    r.push(row![cfg.t, cfg.k as u64, m.integral, m.c_hat, m.first_moment_ratio, m.f_k]);
    r.results = json!(m);
    Ok(r)
}

pub fn omega(cfg: &RunConfig) -> anyhow::Result<Report> {
    let h0 = default_h0(cfg);
    let tab = table(cfg, q(cfg) * (2.0 * cfg.t + h0) + 3.0)?;
    let ck = match cfg.ck {
        Some(c) => c,
        None => {
            let c = moment_with_reference(cfg.t, cfg.k, &tab, None)?.c_hat;
            info!("no --ck given; using the empirical C_{} = {c:.6e} at T", cfg.k);
            c
        }
    };
    let opts = OmegaOptions { c4: cfg.c4, c5: cfg.c5 };
    let outcome = omega_witness(cfg.t, cfg.k, ck, &tab, &opts)?;
    let mut r = Report::new(
        "omega",
        &["status", "delta", "t", "H0", "increment", "f_increment", "c_star", "lower_bound", "holds"],
    );
    match &outcome {
        OmegaOutcome::Found(w) => {
            r.push(row!["found", w.delta, w.t, w.h0, w.increment, w.f_increment, w.c_star, w.lower_bound, w.holds]);
        }
        OmegaOutcome::NotFound { delta, h0, .. } => {
            r.push(row!["not_found", *delta, None::<f64>, *h0, None::<f64>, None::<f64>, None::<f64>, None::<f64>, false]);
            r.warnings.push("no single-sign run of length H0 above the threshold".into());
        }
    }
    r.results = json!({ "ck": ck, "outcome": outcome });
    Ok(r)
}

/// Partial sums of the Bessel double series against the exact value.
pub fn bessel_check(cfg: &RunConfig) -> anyhow::Result<Report> {
    let p = cfg.params()?;
    if p.kind() != WeightKind::CosSin {
        return Err(wdl_core::Error::Domain("the Bessel identity covers the cos_sin kind only".into()).into());
    }
    let r_max = cfg.radii.iter().cloned().fold(0.0, f64::max);
    let top = cfg.points.iter().cloned().fold(0.0, f64::max);
    let tab = table(cfg, top + 1.0)?;
    let bcfg = BesselSeriesConfig::from_params(&p, r_max)?;
    let mut r = Report::new("bessel-check", &["x", "radius", "partial_sum", "exact", "error", "terms", "rms_oscillation"]);
    let mut per_point = Vec::new();
    for &x in &cfg.points {
        let exact = tab.s_eval(x)?;
        let path = BesselPath::build(x, &bcfg)?;
        for &radius in &cfg.radii {
            let e = path.value_at(radius);
            let osc = path.rms_deviation(radius, 2.0 * radius, exact);
            r.push(row![x, radius, e.value, exact, e.value - exact, e.terms, osc]);
        }
        per_point.push(json!({ "x": x, "exact": exact, "terms": path.len() }));
    }
    r.results = json!({ "constant_term": bcfg.constant_term(), "points": per_point });
    Ok(r)
}

/// Mean-square residual of the truncated Voronoi series over normalised `[T, 2T]`.
pub fn voronoi(cfg: &RunConfig) -> anyhow::Result<Report> {
    let p = cfg.params()?;
    let mut trunc = derive_truncation(cfg.t, p.modulus_product(), TruncationMode::SignLemma, None)?;
    if cfg.y.is_some() || cfg.h_cap.is_some() || cfg.j.is_some() {
        let warnings = trunc.warnings.clone();
        trunc = TruncationParams::new(
            cfg.y.unwrap_or(trunc.y),
            cfg.h_cap.unwrap_or(trunc.h_cap),
            cfg.j.unwrap_or(trunc.j),
            cfg.t,
        )?;
        trunc.warnings.extend(warnings);
    }
    let series = if cfg.series == "full" {
        VoronoiSeries::new(&p, &trunc, cfg.cap)?
    } else {
        VoronoiSeries::r0_only(&p, &trunc)
    };
    let (lo, hi) = cfg.window.unwrap_or((cfg.t, 2.0 * cfg.t));
    let tab = table(cfg, q(cfg) * hi + 2.0)?;
    let full = cfg.series == "full";
    let samples = cfg.samples.unwrap_or(if full { 1000 } else { 20_000 });
    let ms = residual_mean_square(&tab, lo, hi, samples, |x| if full { series.approx(x) } else { series.r0(x) })?;
    let mut r = Report::new(
        "voronoi",
        &["t_lo", "t_hi", "samples", "y", "H", "J", "series", "residual", "signal", "ratio"],
    );
    r.push(row![lo, hi, samples, trunc.y, trunc.h_cap, trunc.j as u64, cfg.series.as_str(), ms.residual, ms.signal, ms.ratio]);
    r.warnings = trunc.warnings.clone();
    let range = series.range();
    if range.capped {
        r.warnings.push(format!("R12/R21 truncated at n = {} (nominal {})", range.used_upper, range.nominal_upper));
    }
    r.results = json!({ "truncation": trunc, "range": series.range(), "mean_square": ms });
    Ok(r)
}

const SELFTEST_SETS: [(u64, u64, u64, u64); 5] = [(1, 3, 1, 4), (2, 5, 3, 7), (1, 2, 1, 3), (3, 8, 2, 9), (1, 4, 1, 3)];
const SELFTEST_TOL: f64 = 1e-9;

/// Σ′ over `mn <= x` by a plain double loop with directly evaluated weights.
fn naive_s(x: f64, p: &Params) -> f64 {
    let (sin1, sin2) = match p.kind() {
        WeightKind::CosSin => (false, true),
        WeightKind::SinSin => (true, true),
        WeightKind::CosCos => (false, false),
    };
    let w = |v: u64, a: u64, q: u64, sine: bool| {
        let angle = 2.0 * PI * (v * a) as f64 / q as f64;
        if sine {
            angle.sin()
        } else {
            angle.cos()
        }
    };
    let mut total = 0.0;
    let mut comp = 0.0;
    let top = x.floor() as u64;
    for m in 1..=top {
        let w1 = w(m, p.a1(), p.q1(), sin1);
        for n in 1..=(x / m as f64).floor() as u64 {
            let mut term = w1 * w(n, p.a2(), p.q2(), sin2);
            if (m * n) as f64 == x {
                term *= 0.5;
            }
            // Kahan
            let y = term - comp;
            let t = total + y;
            comp = (t - total) - y;
            total = t;
        }
    }
    total
}

/// Oracle equivalence at every half-integer up to 2000 for the standard
/// parameter sets, plus the mirror symmetries.
pub fn selftest(cfg: &RunConfig) -> anyhow::Result<Report> {
    let mut r = Report::new("selftest", &["check", "params", "points", "max_error", "tolerance", "pass"]);
    let mut all = true;
    let mut sub = cfg.clone();
    sub.cache = None;
    for (a1, q1, a2, q2) in SELFTEST_SETS {
        let p = Params::new(a1, q1, a2, q2, cfg.kind)?;
        (sub.a1, sub.q1, sub.a2, sub.q2) = (a1, q1, a2, q2);
        let tab = table(&sub, 2000.0)?;
        let label = format!("{a1}/{q1} {a2}/{q2}");
        let mut worst = 0.0f64;
        for i in 1..=4000 {
            let x = 0.5 * i as f64;
            worst = worst.max((tab.s_eval(x)? - naive_s(x, &p)).abs());
        }
        let pass = worst <= SELFTEST_TOL;
        all &= pass;
        r.push(row!["oracle", label.clone(), 4000u64, worst, SELFTEST_TOL, pass]);

        // the mirror rules below are those of the cos·sin weight
        if p.kind() != WeightKind::CosSin {
            continue;
        }
        let m1 = wdl_core::arith::sieve_jumps(2000, &p.mirror_a1())?;
        let m2 = wdl_core::arith::sieve_jumps(2000, &p.mirror_a2())?;
        let (mut e1, mut e2) = (0.0f64, 0.0f64);
        for i in 1..=4000 {
            let x = 0.5 * i as f64;
            let s = tab.s_eval(x)?;
            e1 = e1.max((s - m1.s_eval(x)?).abs());
            e2 = e2.max((s + m2.s_eval(x)?).abs());
        }
        for (name, err) in [("mirror_a1", e1), ("mirror_a2", e2)] {
            let pass = err <= 1e-10;
            all &= pass;
            r.push(row![name, label.clone(), 4000u64, err, 1e-10, pass]);
        }
    }
    r.ok = all;
    r.results = json!({ "passed": all, "checks": r.rows.len() });
    Ok(r)
}
