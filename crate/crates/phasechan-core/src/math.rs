//! Special-function helpers shared by every series in the crate.
//!
//! All transcendental calls go through `libm` so that `std` and `no_std`
//! builds produce bit-identical results.

use crate::{Error, Result};

pub const LN_2: f64 = core::f64::consts::LN_2;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_74;

// Stirling series coefficients B_{2k} / (2k (2k-1)), k = 1..8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
];

/// Natural log of the Gamma function for real positive arguments.
///
/// Uses the Stirling asymptotic series after shifting the argument above 12
/// via the recurrence `Gamma(x+1) = x Gamma(x)`; relative error is well below
/// 1e-13 over the half-integer grid used by the receiver kernels.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain("ln_gamma requires a positive argument"));
    }
    let mut shift = 0.0;
    let mut z = x;
    while z < 12.0 {
        shift += libm::log(z);
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut power = inv;
    for c in STIRLING {
        series += c * power;
        power *= inv2;
    }
    Ok((z - 0.5) * libm::log(z) - z + LN_SQRT_2PI + series - shift)
}

/// `ln(n!)` via `ln_gamma(n + 1)`.
pub fn ln_factorial(n: usize) -> f64 {
    if n < 2 {
        return 0.0;
    }
    // argument is >= 3, cannot fail
    ln_gamma(n as f64 + 1.0).unwrap_or(0.0)
}

/// sinc(x) = sin(x)/x with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if libm::fabs(x) < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        libm::sin(x) / x
    }
}

/// Base-2 logarithm.
pub fn log2(x: f64) -> f64 {
    libm::log2(x)
}
