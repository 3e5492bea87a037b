//! Maps physical noise parameters to the accumulated phase variance
//! `sigma(tau)`: static dephasing, Ornstein-Uhlenbeck dephasing with
//! detuning, the analytic limits, and a quadrature fallback.
//!
//! All times are rescaled by the static noise factor `Gamma`, so `tau`,
//! `tau_e` and the detuning `delta` are dimensionless.

use crate::quad::adaptive_simpson;
use crate::{Error, Result};

/// Static (Markovian) dephasing; `sigma(tau) = tau`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StaticNoise;

impl StaticNoise {
    pub fn sigma(&self, tau: f64) -> Result<f64> {
        sigma_static(tau)
    }
}

pub fn sigma_static(tau: f64) -> Result<f64> {
    if !tau.is_finite() || tau < 0.0 {
        return Err(Error::Domain("rescaled time must be finite and >= 0"));
    }
    Ok(tau)
}

/// Ornstein-Uhlenbeck dephasing with Lorentzian spectrum: coupling `lambda`,
/// environment correlation time `tau_e`, rescaled detuning `delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OUNoise {
    lambda: f64,
    tau_e: f64,
    delta: f64,
}

impl OUNoise {
    pub fn new(lambda: f64, tau_e: f64, delta: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::Domain("lambda must be finite and > 0"));
        }
        if !(tau_e.is_finite() && tau_e > 0.0) {
            return Err(Error::Domain("tau_e must be finite and > 0"));
        }
        if !delta.is_finite() {
            return Err(Error::Domain("detuning must be finite"));
        }
        Ok(Self { lambda, tau_e, delta })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn tau_e(&self) -> f64 {
        self.tau_e
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Closed-form accumulated variance.
    ///
    /// With `x = delta * tau_e`:
    /// `sigma(tau) = lambda / (1 + x^2)^2 * { tau - tau_e + x^2 (tau + tau_e)
    ///   + tau_e e^{-tau/tau_e} [ (1 - x^2) cos(delta tau)
    ///   - 2 x sin(delta tau) ] }`.
    ///
    /// When detuned the variance can decrease over intervals of `tau`; only
    /// `sigma >= 0` is enforced.
    pub fn sigma(&self, tau: f64) -> Result<f64> {
        if !tau.is_finite() || tau < 0.0 {
            return Err(Error::Domain("rescaled time must be finite and >= 0"));
        }
        let x = self.delta * self.tau_e;
        let x2 = x * x;
        let damp = libm::exp(-tau / self.tau_e);
        let osc = (1.0 - x2) * libm::cos(self.delta * tau) - 2.0 * x * libm::sin(self.delta * tau);
        let brace = tau - self.tau_e + x2 * (tau + self.tau_e) + self.tau_e * damp * osc;
        let sigma = self.lambda / ((1.0 + x2) * (1.0 + x2)) * brace;
        // rounding can leave a tiny negative residue at tau ~ 0
        Ok(sigma.max(0.0))
    }

    /// Direct quadrature of the double time integral over the OU kernel,
    /// reduced to a single integral by the difference-variable substitution:
    /// `sigma(tau) = (lambda / tau_e) int_0^tau (tau - u) cos(delta u)
    /// e^{-u/tau_e} du`.
    pub fn sigma_quadrature(&self, tau: f64) -> Result<f64> {
        if !tau.is_finite() || tau < 0.0 {
            return Err(Error::Domain("rescaled time must be finite and >= 0"));
        }
        if tau == 0.0 {
            return Ok(0.0);
        }
        let tol = 1e-13 * (1.0 + self.lambda * tau * tau);
        let delta = self.delta;
        let tau_e = self.tau_e;
        let integral = adaptive_simpson(
            |u| (tau - u) * libm::cos(delta * u) * libm::exp(-u / tau_e),
            0.0,
            tau,
            tol,
        )?;
        Ok((self.lambda / self.tau_e * integral).max(0.0))
    }

    /// Highly correlated limit `tau_e >> tau`: `sigma ~ lambda tau^2 / (2 tau_e)`.
    pub fn sigma_correlated_limit(&self, tau: f64) -> f64 {
        0.5 * self.lambda * tau * tau / self.tau_e
    }
}

/// The two dephasing environments of the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseModel {
    Static,
    OrnsteinUhlenbeck(OUNoise),
}

impl NoiseModel {
    pub fn sigma(&self, tau: f64) -> Result<f64> {
        match self {
            NoiseModel::Static => sigma_static(tau),
            NoiseModel::OrnsteinUhlenbeck(ou) => ou.sigma(tau),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            NoiseModel::Static => "static",
            NoiseModel::OrnsteinUhlenbeck(_) => "ou",
        }
    }
}
