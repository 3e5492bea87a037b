//! Covariant phase POVMs, the bin resolution function and the outcome
//! probability vector `q(s)` for both receiver models.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::fock::{coherent_element, TruncationPolicy};
use crate::math;
use crate::{Error, Result};

/// Which covariant phase measurement the receiver performs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReceiverKind {
    /// The sharpest covariant phase measurement, `A_{n,m} = 1`.
    Canonical,
    /// Marginal phase distribution of the Husimi Q-function,
    /// `A_{n,m} = Gamma(1 + (n+m)/2) / sqrt(n! m!)`.
    HusimiQ,
}

impl ReceiverKind {
    pub fn label(&self) -> &'static str {
        match self {
            ReceiverKind::Canonical => "canonical",
            ReceiverKind::HusimiQ => "husimi-q",
        }
    }
}

/// POVM matrix elements `A_{n,m}` for a receiver model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReceiverKernel {
    kind: ReceiverKind,
}

impl ReceiverKernel {
    pub fn new(kind: ReceiverKind) -> Self {
        Self { kind }
    }

    pub fn kind(&self) -> ReceiverKind {
        self.kind
    }

    /// Matrix element `A_{n,m}`; real, symmetric and in (0, 1].
    pub fn element(&self, n: usize, m: usize) -> f64 {
        match self.kind {
            ReceiverKind::Canonical => 1.0,
            ReceiverKind::HusimiQ => {
                let ln = math::ln_gamma(1.0 + 0.5 * (n + m) as f64).unwrap_or(0.0)
                    - 0.5 * (math::ln_factorial(n) + math::ln_factorial(m));
                libm::exp(ln)
            }
        }
    }
}

/// `N` equidistant phases `phi_k = 2 pi k / N` with half bin width
/// `Delta = pi / N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhaseAlphabet {
    n: usize,
}

impl PhaseAlphabet {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain("alphabet needs at least 2 symbols"));
        }
        Ok(Self { n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn phase(&self, k: usize) -> f64 {
        2.0 * PI * k as f64 / self.n as f64
    }

    pub fn half_width(&self) -> f64 {
        PI / self.n as f64
    }
}

/// Placement of the decision bins relative to the encoded phases.
///
/// `Centered` puts `phi_s` in the middle of bin `s`. `HalfBinOffset` shifts
/// every bin by `Delta`, which reproduces the `cos[pi d (2s+1)/N]` form of
/// the series verbatim. `Offset` is an arbitrary shift in `[0, 2 Delta)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum BinConvention {
    #[default]
    Centered,
    HalfBinOffset,
    Offset(f64),
}

impl BinConvention {
    /// Offset of the bin centers in radians for a given alphabet.
    pub fn offset(&self, alphabet: &PhaseAlphabet) -> Result<f64> {
        let delta = alphabet.half_width();
        match *self {
            BinConvention::Centered => Ok(0.0),
            BinConvention::HalfBinOffset => Ok(delta),
            BinConvention::Offset(c) => {
                if !c.is_finite() || c < 0.0 || c >= 2.0 * delta {
                    Err(Error::Domain("bin offset must lie in [0, 2*Delta)"))
                } else {
                    Ok(c)
                }
            }
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            BinConvention::Centered => "centered",
            BinConvention::HalfBinOffset => "half-bin",
            BinConvention::Offset(_) => "offset",
        }
    }

    pub fn offset_raw(&self, alphabet: &PhaseAlphabet) -> f64 {
        self.offset(alphabet).unwrap_or(0.0)
    }
}

/// Resolution function `f_d(s) = (1/2pi) int_{bin s} e^{-i d theta} dtheta`.
///
/// The closed form is `(1/N) sinc(pi d / N) e^{-i d (phi_s + offset)}`; the
/// values satisfy `sum_s f_d(s) = delta_{d,0}` for any `d`.
pub fn resolution_function(
    d: i64,
    s: usize,
    alphabet: &PhaseAlphabet,
    convention: BinConvention,
) -> Result<Complex64> {
    if s >= alphabet.len() {
        return Err(Error::Domain("bin index out of range"));
    }
    let n = alphabet.len() as f64;
    if d == 0 {
        return Ok(Complex64::new(1.0 / n, 0.0));
    }
    let offset = convention.offset(alphabet)?;
    let magnitude = math::sinc(PI * d as f64 / n) / n;
    let angle = -(d as f64) * (alphabet.phase(s) + offset);
    Ok(magnitude * Complex64::new(libm::cos(angle), libm::sin(angle)))
}

/// The `N` probabilities `q(s)` of observing a `2 pi s / N` phase difference,
/// together with the parameters that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    q: Vec<f64>,
    kind: ReceiverKind,
    nbar: f64,
    sigma: f64,
    convention: BinConvention,
}

impl OutcomeDistribution {
    /// Validate a raw probability vector: entries in `[-1e-12, ..)` are
    /// clamped to zero, then the vector is renormalized if the total is
    /// within 1e-9 of one. Larger deviations indicate a truncation bug and
    /// are rejected.
    pub fn new(
        q: Vec<f64>,
        kind: ReceiverKind,
        nbar: f64,
        sigma: f64,
        convention: BinConvention,
    ) -> Result<Self> {
        let mut q = q;
        for v in q.iter_mut() {
            if *v < 0.0 {
                if *v < -1e-12 {
                    return Err(Error::Numerical(
                        "outcome probability negative beyond clamping tolerance",
                    ));
                }
                *v = 0.0;
            }
        }
        let sum: f64 = q.iter().sum();
        if (sum - 1.0).abs() >= 1e-9 {
            return Err(Error::NotNormalized { sum });
        }
        for v in q.iter_mut() {
            *v /= sum;
        }
        Ok(Self { q, kind, nbar, sigma, convention })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.q
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn receiver(&self) -> ReceiverKind {
        self.kind
    }

    pub fn nbar(&self) -> f64 {
        self.nbar
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn convention(&self) -> BinConvention {
        self.convention
    }
}

/// Outcome distribution of the canonical receiver at accumulated phase
/// variance `sigma`.
pub fn q_canonical(
    nbar: f64,
    n_symbols: usize,
    sigma: f64,
    trunc: &TruncationPolicy,
    convention: BinConvention,
) -> Result<OutcomeDistribution> {
    q_series(ReceiverKind::Canonical, nbar, n_symbols, sigma, trunc, convention)
}

/// Outcome distribution of the Husimi-Q receiver at accumulated phase
/// variance `sigma`.
pub fn q_husimi(
    nbar: f64,
    n_symbols: usize,
    sigma: f64,
    trunc: &TruncationPolicy,
    convention: BinConvention,
) -> Result<OutcomeDistribution> {
    q_series(ReceiverKind::HusimiQ, nbar, n_symbols, sigma, trunc, convention)
}

/// Shared series evaluation:
/// `q(s) = (1/N) { 1 + 2 sum_d sinc(pi d/N) e^{-d^2 sigma/2}
///                 cos[d (phi_s + offset)] sum_n A_{n,n+d} rho_{n,n+d} }`.
pub fn q_series(
    kind: ReceiverKind,
    nbar: f64,
    n_symbols: usize,
    sigma: f64,
    trunc: &TruncationPolicy,
    convention: BinConvention,
) -> Result<OutcomeDistribution> {
    if !sigma.is_finite() || sigma < 0.0 {
        return Err(Error::Domain("accumulated phase variance must be >= 0"));
    }
    let alphabet = PhaseAlphabet::new(n_symbols)?;
    let offset = convention.offset(&alphabet)?;
    let kernel = ReceiverKernel::new(kind);

    // s-independent column sums over the Fock index
    let mut column = Vec::with_capacity(trunc.d_max());
    for d in 1..=trunc.d_max() {
        let mut acc = 0.0;
        for n in 0..=trunc.n_max() {
            acc += kernel.element(n, n + d) * coherent_element(nbar, n, n + d)?;
        }
        column.push(acc);
    }

    let n = n_symbols as f64;
    let mut q = Vec::with_capacity(n_symbols);
    for s in 0..n_symbols {
        let center = alphabet.phase(s) + offset;
        let mut v = 1.0;
        for (i, c) in column.iter().enumerate() {
            let d = (i + 1) as f64;
            v += 2.0
                * math::sinc(PI * d / n)
                * libm::exp(-0.5 * d * d * sigma)
                * libm::cos(d * center)
                * c;
        }
        q.push(v / n);
    }
    OutcomeDistribution::new(q, kind, nbar, sigma, convention)
}

/// Circulant conditional-probability matrix `p(j|k) = q((j - k) mod N)`,
/// stored row-major with the input symbol `k` as the row index.
pub fn conditional_matrix(q: &OutcomeDistribution) -> Vec<f64> {
    let n = q.len();
    let mut p = Vec::with_capacity(n * n);
    for k in 0..n {
        for j in 0..n {
            p.push(q.probabilities()[(j + n - k) % n]);
        }
    }
    p
}
