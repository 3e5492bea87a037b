//! Independent brute-force validators for the series implementation:
//! direct bin integration of the covariant phase density and a Monte Carlo
//! simulation of the Gaussian phase-mixture channel.
//!
//! Dephasing enters the two validators through different but equivalent
//! routes: the integration oracle damps the density-matrix off-diagonals by
//! `e^{-sigma d^2 / 2}`, the Monte Carlo oracle draws explicit Gaussian
//! phase kicks with variance `sigma`. Either one catches a mistake in the
//! other.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use phasechan_core::fock::{coherent_element, TruncationPolicy};
use phasechan_core::noise::NoiseModel;
use phasechan_core::quad::adaptive_simpson;
use phasechan_core::receiver::{
    BinConvention, OutcomeDistribution, PhaseAlphabet, ReceiverKernel, ReceiverKind,
};
use phasechan_core::{Error, Result};

/// Covariant phase probability density
/// `p(theta) = (1/2pi) [ 1 + 2 sum_{d>=1} c_d cos(d theta) ]` with
/// `c_d = e^{-sigma d^2/2} sum_n A_{n,n+d} rho_{n,n+d}`.
#[derive(Debug, Clone)]
pub struct PhaseDensity {
    coefficients: Vec<f64>,
}

impl PhaseDensity {
    pub fn new(
        kind: ReceiverKind,
        nbar: f64,
        sigma: f64,
        trunc: &TruncationPolicy,
    ) -> Result<Self> {
        if !sigma.is_finite() || sigma < 0.0 {
            return Err(Error::Domain("accumulated phase variance must be >= 0"));
        }
        let kernel = ReceiverKernel::new(kind);
        let mut coefficients = Vec::with_capacity(trunc.d_max());
        for d in 1..=trunc.d_max() {
            let mut acc = 0.0;
            for n in 0..=trunc.n_max() {
                acc += kernel.element(n, n + d) * coherent_element(nbar, n, n + d)?;
            }
            coefficients.push(acc * (-0.5 * (d * d) as f64 * sigma).exp());
        }
        Ok(Self { coefficients })
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let mut v = 1.0;
        for (i, c) in self.coefficients.iter().enumerate() {
            v += 2.0 * c * ((i + 1) as f64 * theta).cos();
        }
        v / (2.0 * PI)
    }

    /// Upper bound on the density, used by rejection sampling.
    pub fn bound(&self) -> f64 {
        let total: f64 = self.coefficients.iter().map(|c| c.abs()).sum();
        (1.0 + 2.0 * total) / (2.0 * PI)
    }
}

/// Outcome distribution by adaptive quadrature of the phase density over
/// each decision bin; per-bin absolute error below 1e-8.
pub fn q_by_integration(
    kind: ReceiverKind,
    nbar: f64,
    n_symbols: usize,
    sigma: f64,
    convention: BinConvention,
    trunc: &TruncationPolicy,
) -> Result<OutcomeDistribution> {
    let alphabet = PhaseAlphabet::new(n_symbols)?;
    let offset = convention.offset(&alphabet)?;
    let density = PhaseDensity::new(kind, nbar, sigma, trunc)?;
    let delta = alphabet.half_width();
    let mut q = Vec::with_capacity(n_symbols);
    for s in 0..n_symbols {
        let center = alphabet.phase(s) + offset;
        let v = adaptive_simpson(|t| density.eval(t), center - delta, center + delta, 1e-9)?;
        q.push(v);
    }
    OutcomeDistribution::new(q, kind, nbar, sigma, convention)
}

/// A seeded Monte Carlo estimate of the outcome distribution.
#[derive(Debug, Clone)]
pub struct MonteCarloRun {
    pub seed: u64,
    pub samples: u64,
    pub estimate: Vec<f64>,
    pub std_error: Vec<f64>,
}

/// Estimate `q` by sampling: draw a phase from the noiseless density, add a
/// Gaussian kick of variance `sigma(tau)`, and bin the result.
pub fn q_by_monte_carlo(
    kind: ReceiverKind,
    nbar: f64,
    n_symbols: usize,
    noise: &NoiseModel,
    tau: f64,
    convention: BinConvention,
    trunc: &TruncationPolicy,
    samples: u64,
    seed: u64,
) -> Result<MonteCarloRun> {
    if samples < 10_000 {
        return Err(Error::Domain("Monte Carlo needs at least 10^4 samples"));
    }
    let alphabet = PhaseAlphabet::new(n_symbols)?;
    let offset = convention.offset(&alphabet)?;
    let sigma = noise.sigma(tau)?;
    let density = PhaseDensity::new(kind, nbar, 0.0, trunc)?;
    let bound = density.bound();
    let delta = alphabet.half_width();
    let kick_scale = sigma.sqrt();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; n_symbols];
    for _ in 0..samples {
        // rejection sampling from the noiseless density
        let theta = loop {
            let t: f64 = rng.gen::<f64>() * 2.0 * PI;
            let u: f64 = rng.gen::<f64>() * bound;
            if u <= density.eval(t) {
                break t;
            }
        };
        let kick = if sigma > 0.0 {
            // Box-Muller
            let u1: f64 = rng.gen::<f64>();
            let u2: f64 = rng.gen::<f64>();
            kick_scale * (-2.0 * u1.max(f64::MIN_POSITIVE).ln()).sqrt() * (2.0 * PI * u2).cos()
        } else {
            0.0
        };
        let outcome = (theta + kick).rem_euclid(2.0 * PI);
        let s = (((outcome - offset + delta).rem_euclid(2.0 * PI)) / (2.0 * delta)) as usize
            % n_symbols;
        counts[s] += 1;
    }

    let inv = 1.0 / samples as f64;
    let estimate: Vec<f64> = counts.iter().map(|&c| c as f64 * inv).collect();
    let std_error = estimate
        .iter()
        .map(|&p| (p * (1.0 - p) * inv).sqrt())
        .collect();
    Ok(MonteCarloRun { seed, samples, estimate, std_error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use phasechan_core::fock::choose_truncation;
    use phasechan_core::receiver::{q_canonical, q_series};

    fn trunc(nbar: f64) -> TruncationPolicy {
        choose_truncation(nbar, 1e-12).unwrap()
    }

    #[test]
    fn vacuum_density_is_flat() {
        let d = PhaseDensity::new(ReceiverKind::Canonical, 0.0, 0.0, &trunc(0.0)).unwrap();
        for i in 0..50 {
            let theta = i as f64 * 0.13;
            assert!((d.eval(theta) - 1.0 / (2.0 * PI)).abs() < 1e-15);
        }
    }

    #[test]
    fn density_normalized_and_nonnegative() {
        for kind in [ReceiverKind::Canonical, ReceiverKind::HusimiQ] {
            let d = PhaseDensity::new(kind, 3.0, 0.1, &trunc(3.0)).unwrap();
            let total = adaptive_simpson(|t| d.eval(t), 0.0, 2.0 * PI, 1e-10).unwrap();
            assert!((total - 1.0).abs() < 1e-8);
            for i in 0..720 {
                assert!(d.eval(i as f64 * PI / 360.0) > -1e-10);
            }
        }
    }

    #[test]
    fn integration_matches_series_on_grid() {
        for kind in [ReceiverKind::Canonical, ReceiverKind::HusimiQ] {
            for &nbar in &[1.0, 3.0] {
                for &n in &[4usize, 20] {
                    for &sigma in &[0.0, 0.1, 1.0] {
                        let t = trunc(nbar);
                        let conv = BinConvention::Centered;
                        let series = q_series(kind, nbar, n, sigma, &t, conv).unwrap();
                        let oracle = q_by_integration(kind, nbar, n, sigma, conv, &t).unwrap();
                        for (a, b) in series
                            .probabilities()
                            .iter()
                            .zip(oracle.probabilities())
                        {
                            assert!(
                                (a - b).abs() < 1e-6,
                                "kind={kind:?} nbar={nbar} n={n} sigma={sigma}: {a} vs {b}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn integration_covariance_shift() {
        // integrating bin j of the phase-shifted state equals bin (j - k)
        // of the unshifted one; shifting the density by phi_k and
        // re-integrating is a change of variables.
        let t = trunc(2.0);
        let density = PhaseDensity::new(ReceiverKind::Canonical, 2.0, 0.2, &t).unwrap();
        let alphabet = PhaseAlphabet::new(8).unwrap();
        let delta = alphabet.half_width();
        let k = 3usize;
        let phi_k = alphabet.phase(k);
        for j in 0..8usize {
            let center = alphabet.phase(j);
            let shifted = adaptive_simpson(
                |th| density.eval(th - phi_k),
                center - delta,
                center + delta,
                1e-10,
            )
            .unwrap();
            let base_center = alphabet.phase((j + 8 - k) % 8);
            let unshifted = adaptive_simpson(
                |th| density.eval(th),
                base_center - delta,
                base_center + delta,
                1e-10,
            )
            .unwrap();
            assert!((shifted - unshifted).abs() < 1e-8, "j = {j}");
        }
    }

    #[test]
    fn monte_carlo_matches_series_within_four_sigma() {
        let t = trunc(3.0);
        let series = q_canonical(3.0, 20, 0.0, &t, BinConvention::Centered).unwrap();
        let run = q_by_monte_carlo(
            ReceiverKind::Canonical,
            3.0,
            20,
            &NoiseModel::Static,
            0.0,
            BinConvention::Centered,
            &t,
            200_000,
            0xC0FFEE,
        )
        .unwrap();
        for s in 0..20 {
            let diff = (run.estimate[s] - series.probabilities()[s]).abs();
            let tol = 4.0 * run.std_error[s].max(1e-5);
            assert!(diff < tol, "s = {s}: diff {diff} > {tol}");
        }
    }

    #[test]
    fn monte_carlo_strong_dephasing_uniform() {
        let t = trunc(1.0);
        let run = q_by_monte_carlo(
            ReceiverKind::Canonical,
            1.0,
            10,
            &NoiseModel::Static,
            1e4,
            BinConvention::Centered,
            &t,
            100_000,
            7,
        )
        .unwrap();
        for s in 0..10 {
            let diff = (run.estimate[s] - 0.1).abs();
            assert!(diff < 4.0 * run.std_error[s].max(1e-5), "s = {s}");
        }
    }

    #[test]
    fn monte_carlo_seed_reproducible() {
        let t = trunc(1.0);
        let a = q_by_monte_carlo(
            ReceiverKind::HusimiQ,
            1.0,
            8,
            &NoiseModel::Static,
            0.3,
            BinConvention::Centered,
            &t,
            20_000,
            42,
        )
        .unwrap();
        let b = q_by_monte_carlo(
            ReceiverKind::HusimiQ,
            1.0,
            8,
            &NoiseModel::Static,
            0.3,
            BinConvention::Centered,
            &t,
            20_000,
            42,
        )
        .unwrap();
        assert_eq!(a.estimate, b.estimate);
    }

    #[test]
    fn monte_carlo_convergence_rate() {
        // max-abs error vs series should fall like samples^{-1/2};
        // check the log-log slope over three decades.
        let t = trunc(1.0);
        let series = q_canonical(1.0, 8, 0.0, &t, BinConvention::Centered).unwrap();
        let sizes = [10_000u64, 100_000, 1_000_000];
        let mut errs = Vec::new();
        for (i, &n) in sizes.iter().enumerate() {
            // average a few seeds to tame fluctuations in the slope fit
            let mut acc = 0.0;
            let reps = 3;
            for r in 0..reps {
                let run = q_by_monte_carlo(
                    ReceiverKind::Canonical,
                    1.0,
                    8,
                    &NoiseModel::Static,
                    0.0,
                    BinConvention::Centered,
                    &t,
                    n,
                    1000 + (i * reps + r) as u64,
                )
                .unwrap();
                let rmse: f64 = (run
                    .estimate
                    .iter()
                    .zip(series.probabilities())
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    / 8.0)
                    .sqrt();
                acc += rmse;
            }
            errs.push(acc / reps as f64);
        }
        // least-squares slope of ln(err) vs ln(n)
        let xs: Vec<f64> = sizes.iter().map(|&n| (n as f64).ln()).collect();
        let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
        let xm = xs.iter().sum::<f64>() / 3.0;
        let ym = ys.iter().sum::<f64>() / 3.0;
        let slope = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| (x - xm) * (y - ym))
            .sum::<f64>()
            / xs.iter().map(|x| (x - xm) * (x - xm)).sum::<f64>();
        assert!((slope + 0.5).abs() < 0.1, "slope = {slope}");
    }

    #[test]
    fn too_few_samples_rejected() {
        let t = trunc(1.0);
        assert!(q_by_monte_carlo(
            ReceiverKind::Canonical,
            1.0,
            8,
            &NoiseModel::Static,
            0.0,
            BinConvention::Centered,
            &t,
            100,
            1,
        )
        .is_err());
    }
}
