use crate::{Error, Result};

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance
/// `tol`, with Richardson correction of each accepted panel.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, max_depth: u32) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, max_depth)
}

/// [`adaptive_simpson`] on `panels` equal sub-intervals, each with its share
/// of the tolerance. Oscillatory integrands need panels shorter than a
/// quarter period, otherwise the dyadic sample points can all land on zeros
/// and fake convergence.
pub fn adaptive_simpson_panels<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    panels: usize,
    tol: f64,
    max_depth: u32,
) -> Result<f64> {
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let mut acc = crate::compensated::NeumaierSum::ZERO;
    for i in 0..panels {
        let lo = a + i as f64 * h;
        let hi = if i + 1 == panels { b } else { lo + h };
        acc.add(adaptive_simpson(f, lo, hi, tol / panels as f64, max_depth)?);
    }
    Ok(acc.value())
}

#[allow(clippy::too_many_arguments)]
fn step<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let diff = left + right - whole;
    if diff.abs() <= 15.0 * tol {
        return Ok(left + right + diff / 15.0);
    }
    if depth == 0 || m <= a || m >= b {
        return Err(Error::Numerical(format!(
            "adaptive Simpson did not reach tolerance {tol:.1e} on [{a}, {b}] (estimate error {:.2e})",
            diff.abs() / 15.0
        )));
    }
    Ok(step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)? + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
}
