//! Adaptive Simpson quadrature.

use crate::error::{QError, Result};

/// Integrates `f` over `[a, b]`, refining each panel until two successive
/// estimates differ by less than `tol / 10` (scaled to the panel width).
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, max_depth: u32) -> Result<f64> {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut evals = 3usize;
    let r = step(&f, a, b, fa, fm, fb, whole, tol / 10.0, max_depth, &mut evals);
    match r {
        Some(v) => Ok(v),
        None => Err(QError::NonConvergent {
            terms: evals,
            bound: tol,
        }),
    }
}

#[allow(clippy::too_many_arguments)]
fn step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    evals: &mut usize,
) -> Option<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    *evals += 2;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let diff = left + right - whole;
    if diff.abs() <= 15.0 * tol || (b - a).abs() < 1e-14 {
        return Some(left + right + diff / 15.0);
    }
    if depth == 0 {
        return None;
    }
    let l = step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1, evals)?;
    let r = step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1, evals)?;
    Some(l + r)
}

/// Composite Simpson with `n` panels (rounded up to even) for smooth integrands.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = if n % 2 == 1 { n + 1 } else { n.max(2) };
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + h * i as f64);
    }
    s * h / 3.0
}
