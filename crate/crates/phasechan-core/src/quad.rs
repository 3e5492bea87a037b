//! Adaptive Simpson quadrature used by the noise kernel integral and the
//! validation oracles.

use crate::{Error, Result};

const MAX_DEPTH: u32 = 60;
const INITIAL_PANELS: usize = 16;

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let err = left + right - whole;
    if err.abs() <= 15.0 * tol {
        return Ok(left + right + err / 15.0);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::Numerical("adaptive quadrature did not converge"));
    }
    let l = refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)?;
    let r = refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)?;
    Ok(l + r)
}

/// Integrate `f` over `[a, b]` to absolute tolerance `tol`.
///
/// The interval is pre-split into a fixed number of panels before adaptive
/// refinement so oscillatory integrands cannot fool the first error
/// estimate.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain("integration bounds must be finite"));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain("quadrature tolerance must be positive"));
    }
    if a == b {
        return Ok(0.0);
    }
    let h = (b - a) / INITIAL_PANELS as f64;
    let panel_tol = tol / INITIAL_PANELS as f64;
    let mut total = 0.0;
    for i in 0..INITIAL_PANELS {
        let x0 = a + i as f64 * h;
        let x1 = x0 + h;
        let xm = 0.5 * (x0 + x1);
        let (f0, fm, f1) = (f(x0), f(xm), f(x1));
        let whole = simpson(f0, fm, f1, h);
        total += refine(&f, x0, x1, f0, fm, f1, whole, panel_tol, 0)?;
    }
    Ok(total)
}
