//! Mutual information, reference channel capacities, performance ratios,
//! small-`nbar` asymptotics and the `beta = 1` noise-threshold solver.
//!
//! All logarithms are base 2, so every quantity is in bits.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::fock::{choose_truncation, DEFAULT_EPSILON};
use crate::math;
use crate::receiver::{q_series, BinConvention, OutcomeDistribution, ReceiverKind};
use crate::{Error, Result};

/// Entries below this are treated as exact zeros in `p log p` sums.
const ENTROPY_FLOOR: f64 = 1e-15;

/// Mutual information in bits/use together with the channel parameters it
/// was computed from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MutualInformationResult {
    pub bits: f64,
    pub n_symbols: usize,
    pub nbar: f64,
    pub receiver: ReceiverKind,
    pub sigma: f64,
}

/// `I = log2 N + sum_s q(s) log2 q(s)` for uniform priors on a covariant
/// channel, with `0 log 0 = 0`.
pub fn mutual_information(q: &OutcomeDistribution) -> Result<MutualInformationResult> {
    let sum: f64 = q.probabilities().iter().sum();
    if (sum - 1.0).abs() >= 1e-9 {
        return Err(Error::NotNormalized { sum });
    }
    let n = q.len() as f64;
    let mut bits = math::log2(n);
    for &v in q.probabilities() {
        if v > ENTROPY_FLOOR {
            bits += v * math::log2(v);
        }
    }
    Ok(MutualInformationResult {
        bits: bits.max(0.0),
        n_symbols: q.len(),
        nbar: q.nbar(),
        receiver: q.receiver(),
        sigma: q.sigma(),
    })
}

/// General double-sum mutual information for an arbitrary conditional matrix
/// and prior: `sum_{k,j} p(j|k) p(k) log2[ p(j|k) / p'(j) ]` with
/// `p'(j) = sum_k p(j|k) p(k)`.
///
/// `p_jk` is row-major with the input symbol `k` as the row index.
pub fn mutual_information_general(p_jk: &[f64], prior: &[f64]) -> Result<f64> {
    let n = prior.len();
    if p_jk.len() != n * n {
        return Err(Error::DimensionMismatch { expected: n * n, got: p_jk.len() });
    }
    let prior_sum: f64 = prior.iter().sum();
    if (prior_sum - 1.0).abs() >= 1e-9 {
        return Err(Error::NotNormalized { sum: prior_sum });
    }
    for k in 0..n {
        let row: f64 = p_jk[k * n..(k + 1) * n].iter().sum();
        if (row - 1.0).abs() >= 1e-9 {
            return Err(Error::NotNormalized { sum: row });
        }
    }

    let mut marginal = Vec::with_capacity(n);
    for j in 0..n {
        let mut m = 0.0;
        for k in 0..n {
            m += p_jk[k * n + j] * prior[k];
        }
        marginal.push(m);
    }
    let mut bits = 0.0;
    for k in 0..n {
        for j in 0..n {
            let p = p_jk[k * n + j];
            if p > ENTROPY_FLOOR && marginal[j] > ENTROPY_FLOOR {
                bits += p * prior[k] * math::log2(p / marginal[j]);
            }
        }
    }
    Ok(bits.max(0.0))
}

/// Parameters of the reference channels: amplitude loss `eta` for the
/// coherent channel and mean photons per use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityParams {
    eta: f64,
    nbar: f64,
}

impl CapacityParams {
    pub fn new(eta: f64, nbar: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) || !eta.is_finite() {
            return Err(Error::Domain("loss eta must lie in [0, 1]"));
        }
        if !nbar.is_finite() || nbar < 0.0 {
            return Err(Error::Domain("mean photon number must be finite and >= 0"));
        }
        Ok(Self { eta, nbar })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn nbar(&self) -> f64 {
        self.nbar
    }
}

/// Capacity of the amplitude-encoded coherent channel with heterodyne
/// readout: `log2(1 + eta nbar)` bits.
pub fn capacity_coherent(params: &CapacityParams) -> f64 {
    math::log2(1.0 + params.eta * params.nbar)
}

/// Ultimate single-mode capacity (photon-number channel):
/// `(nbar + 1) log2(nbar + 1) - nbar log2(nbar)` bits.
pub fn capacity_photon_number(nbar: f64) -> Result<f64> {
    if !nbar.is_finite() || nbar < 0.0 {
        return Err(Error::Domain("mean photon number must be finite and >= 0"));
    }
    if nbar == 0.0 {
        return Ok(0.0);
    }
    Ok((nbar + 1.0) * math::log2(nbar + 1.0) - nbar * math::log2(nbar))
}

/// The four dimensionless performance ratios.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerformanceRatios {
    /// `I_C / C_PHN`
    pub gamma_canonical: f64,
    /// `I_Q / C_PHN`
    pub gamma_husimi: f64,
    /// `I_C / C_COH`
    pub beta_canonical: f64,
    /// `I_Q / C_COH`
    pub beta_husimi: f64,
}

pub fn ratios(i_canonical: f64, i_husimi: f64, params: &CapacityParams) -> Result<PerformanceRatios> {
    let c_phn = capacity_photon_number(params.nbar())?;
    let c_coh = capacity_coherent(params);
    if c_phn <= 0.0 || c_coh <= 0.0 {
        return Err(Error::Domain("capacities must be positive to form ratios"));
    }
    Ok(PerformanceRatios {
        gamma_canonical: i_canonical / c_phn,
        gamma_husimi: i_husimi / c_phn,
        beta_canonical: i_canonical / c_coh,
        beta_husimi: i_husimi / c_coh,
    })
}

/// First-order small-`nbar` mutual information under static noise:
/// `nbar sinc^2(pi/N) e^{-tau} / ln 2`, times `pi/4` for the Q receiver.
pub fn asymptotic_mi(nbar: f64, n_symbols: usize, tau: f64, kind: ReceiverKind) -> f64 {
    let s = math::sinc(PI / n_symbols as f64);
    let base = nbar * s * s * libm::exp(-tau) / math::LN_2;
    match kind {
        ReceiverKind::Canonical => base,
        ReceiverKind::HusimiQ => base * PI / 4.0,
    }
}

/// Outcome of the `beta(tau) = 1` boundary search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdResult {
    /// `beta > 1` for `tau < tau_star` and `beta < 1` above it.
    Crossing { tau_star: f64 },
    /// No sign change found in `[0, tau_max]`.
    NoCrossing { tau_max: f64 },
}

const THRESHOLD_TAU_INITIAL: f64 = 10.0;
const THRESHOLD_TAU_MAX: f64 = 80.0;

/// Static-noise threshold `tau*` where `beta = I / C_COH` crosses 1,
/// located by bisection to 1e-6.
pub fn beta_threshold(
    kind: ReceiverKind,
    nbar: f64,
    n_symbols: usize,
    eta: f64,
    convention: BinConvention,
) -> Result<ThresholdResult> {
    let params = CapacityParams::new(eta, nbar)?;
    let c_coh = capacity_coherent(&params);
    if c_coh <= 0.0 {
        // vanishing denominator: beta stays above 1 for every tau
        return Ok(ThresholdResult::NoCrossing { tau_max: THRESHOLD_TAU_MAX });
    }
    let trunc = choose_truncation(nbar, DEFAULT_EPSILON)?;
    let beta = |tau: f64| -> Result<f64> {
        let q = q_series(kind, nbar, n_symbols, tau, &trunc, convention)?;
        Ok(mutual_information(&q)?.bits / c_coh)
    };

    if beta(0.0)? <= 1.0 {
        return Ok(ThresholdResult::NoCrossing { tau_max: 0.0 });
    }
    let mut lo = 0.0;
    let mut hi = THRESHOLD_TAU_INITIAL;
    while beta(hi)? > 1.0 {
        lo = hi;
        hi *= 2.0;
        if hi > THRESHOLD_TAU_MAX {
            return Ok(ThresholdResult::NoCrossing { tau_max: THRESHOLD_TAU_MAX });
        }
    }
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if beta(mid)? > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ThresholdResult::Crossing { tau_star: 0.5 * (lo + hi) })
}
