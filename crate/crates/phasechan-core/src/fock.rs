//! Coherent-state density-matrix elements in the Fock basis and the
//! truncation policy that turns the formally infinite sums into finite,
//! reproducible ones.

use crate::math;
use crate::{Error, Result};

/// Coherent seed state with real amplitude, described by its mean photon
/// number `nbar = alpha^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedState {
    nbar: f64,
}

impl SeedState {
    pub fn new(nbar: f64) -> Result<Self> {
        if !nbar.is_finite() || nbar < 0.0 {
            return Err(Error::Domain("mean photon number must be finite and >= 0"));
        }
        Ok(Self { nbar })
    }

    pub fn nbar(&self) -> f64 {
        self.nbar
    }

    /// Density-matrix element `<n|rho|m>`.
    pub fn element(&self, n: usize, m: usize) -> f64 {
        // state is validated on construction
        coherent_element(self.nbar, n, m).unwrap_or(0.0)
    }
}

/// `rho_{n,m} = e^{-nbar} nbar^{(n+m)/2} / sqrt(n! m!)`.
///
/// Evaluated in log space so indices far past the factorial overflow point
/// (n, m > 170) stay finite.
pub fn coherent_element(nbar: f64, n: usize, m: usize) -> Result<f64> {
    if !nbar.is_finite() || nbar < 0.0 {
        return Err(Error::Domain("mean photon number must be finite and >= 0"));
    }
    if nbar == 0.0 {
        return Ok(if n == 0 && m == 0 { 1.0 } else { 0.0 });
    }
    let ln = -nbar + 0.5 * (n + m) as f64 * libm::log(nbar)
        - 0.5 * (math::ln_factorial(n) + math::ln_factorial(m));
    Ok(libm::exp(ln))
}

/// Finite summation bounds for the Fock index `n` and the coherence
/// distance `d = |n - m|`, derived from a single tail-mass tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    epsilon: f64,
    n_max: usize,
    d_max: usize,
}

impl TruncationPolicy {
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn d_max(&self) -> usize {
        self.d_max
    }
}

pub const DEFAULT_EPSILON: f64 = 1e-12;

fn poisson_pmf(nbar: f64, n: usize) -> f64 {
    libm::exp(-nbar + n as f64 * libm::log(nbar) - math::ln_factorial(n))
}

/// Pick `(n_max, d_max)` so that the Poisson tail beyond `n_max` and the
/// total off-diagonal column mass beyond `d_max` are both below `epsilon`.
pub fn choose_truncation(nbar: f64, epsilon: f64) -> Result<TruncationPolicy> {
    if !nbar.is_finite() || nbar < 0.0 {
        return Err(Error::Domain("mean photon number must be finite and >= 0"));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Domain("epsilon must lie in (0, 1)"));
    }

    let floor = libm::ceil(nbar + 10.0 * libm::sqrt(nbar + 1.0)) as usize;
    let mut n_max = floor.max(10);
    if nbar > 0.0 {
        let mut cum = 0.0;
        let mut n = 0usize;
        loop {
            cum += poisson_pmf(nbar, n);
            if 1.0 - cum < epsilon && n >= n_max {
                break;
            }
            n += 1;
            if n > 1_000_000 {
                return Err(Error::Numerical("Poisson tail summation did not converge"));
            }
        }
        n_max = n;
    }

    // Column mass at coherence distance d; the canonical kernel (A = 1)
    // dominates the Husimi one, so a single bound serves both receivers.
    let mut d_max = 5usize;
    if nbar > 0.0 {
        let mut d = 1usize;
        loop {
            let mut column = 0.0;
            for n in 0..=n_max {
                column += coherent_element(nbar, n, n + d)?;
            }
            if 2.0 * column < epsilon && d >= 5 {
                d_max = d;
                break;
            }
            d += 1;
            if d > 100_000 {
                return Err(Error::Numerical("coherence-distance cutoff did not converge"));
            }
        }
    }

    Ok(TruncationPolicy { epsilon, n_max, d_max })
}
