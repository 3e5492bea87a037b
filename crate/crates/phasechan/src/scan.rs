//! Parameter scans: cartesian sweeps over channel and noise parameters with
//! deterministic row order and parallel evaluation.

use rayon::prelude::*;
use serde::Serialize;

use phasechan_core::fock::choose_truncation;
use phasechan_core::infotheory::{
    capacity_coherent, capacity_photon_number, mutual_information, ratios, CapacityParams,
};
use phasechan_core::noise::{NoiseModel, OUNoise};
use phasechan_core::receiver::{q_canonical, q_husimi, BinConvention};

use crate::output::{base_meta, Meta};
use crate::AppError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseKind {
    Static,
    OrnsteinUhlenbeck,
}

/// The fixed part of a scan: everything a single evaluation needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSettings {
    pub n_symbols: usize,
    pub nbar: f64,
    pub eta: f64,
    pub tau: f64,
    pub noise: NoiseKind,
    pub lambda: f64,
    pub tau_e: f64,
    pub delta: f64,
    pub convention: BinConvention,
    pub epsilon: f64,
}

impl Default for ChannelSettings {
    fn default() -> Self {
        Self {
            n_symbols: 20,
            nbar: 1.0,
            eta: 1.0,
            tau: 0.0,
            noise: NoiseKind::Static,
            lambda: 1.0,
            tau_e: 1.0,
            delta: 0.0,
            convention: BinConvention::Centered,
            epsilon: phasechan_core::fock::DEFAULT_EPSILON,
        }
    }
}

impl ChannelSettings {
    pub fn noise_model(&self) -> Result<NoiseModel, AppError> {
        Ok(match self.noise {
            NoiseKind::Static => NoiseModel::Static,
            NoiseKind::OrnsteinUhlenbeck => {
                NoiseModel::OrnsteinUhlenbeck(OUNoise::new(self.lambda, self.tau_e, self.delta)?)
            }
        })
    }

    /// Evaluate both receivers plus the reference capacities at this point.
    pub fn evaluate(&self) -> Result<ScanRow, AppError> {
        let sigma = self.noise_model()?.sigma(self.tau)?;
        let trunc = choose_truncation(self.nbar, self.epsilon)?;
        let q_c = q_canonical(self.nbar, self.n_symbols, sigma, &trunc, self.convention)?;
        let q_q = q_husimi(self.nbar, self.n_symbols, sigma, &trunc, self.convention)?;
        let i_c = mutual_information(&q_c)?.bits;
        let i_q = mutual_information(&q_q)?.bits;
        let params = CapacityParams::new(self.eta, self.nbar)?;
        let c_coh = capacity_coherent(&params);
        let c_phn = capacity_photon_number(self.nbar)?;
        let r = ratios(i_c, i_q, &params).ok();
        let is_ou = self.noise == NoiseKind::OrnsteinUhlenbeck;
        Ok(ScanRow {
            n: self.n_symbols,
            nbar: self.nbar,
            tau: self.tau,
            sigma,
            eta: self.eta,
            lambda: is_ou.then_some(self.lambda),
            tau_e: is_ou.then_some(self.tau_e),
            delta: is_ou.then_some(self.delta),
            i_c,
            i_q,
            c_coh,
            c_phn,
            gamma_c: r.map(|r| r.gamma_canonical),
            gamma_q: r.map(|r| r.gamma_husimi),
            beta_c: r.map(|r| r.beta_canonical),
            beta_q: r.map(|r| r.beta_husimi),
        })
    }

    pub fn meta(&self) -> Meta {
        let mut meta = base_meta();
        meta.insert("epsilon".into(), format!("{}", self.epsilon));
        meta.insert("bin-convention".into(), self.convention.label().into());
        meta.insert(
            "noise".into(),
            match self.noise {
                NoiseKind::Static => "static".into(),
                NoiseKind::OrnsteinUhlenbeck => "ou".into(),
            },
        );
        meta
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub n: usize,
    pub nbar: f64,
    pub tau: f64,
    pub sigma: f64,
    pub eta: f64,
    pub lambda: Option<f64>,
    pub tau_e: Option<f64>,
    pub delta: Option<f64>,
    pub i_c: f64,
    pub i_q: f64,
    pub c_coh: f64,
    pub c_phn: f64,
    pub gamma_c: Option<f64>,
    pub gamma_q: Option<f64>,
    pub beta_c: Option<f64>,
    pub beta_q: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Tau,
    Nbar,
    NSymbols,
    Eta,
    Lambda,
    TauE,
    Delta,
}

impl SweepParam {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::Tau => "tau",
            SweepParam::Nbar => "nbar",
            SweepParam::NSymbols => "n",
            SweepParam::Eta => "eta",
            SweepParam::Lambda => "lambda",
            SweepParam::TauE => "tau-e",
            SweepParam::Delta => "delta",
        }
    }
}

impl std::str::FromStr for SweepParam {
    type Err = AppError;

    fn from_str(s: &str) -> Result<Self, AppError> {
        Ok(match s {
            "tau" => SweepParam::Tau,
            "nbar" => SweepParam::Nbar,
            "n" => SweepParam::NSymbols,
            "eta" => SweepParam::Eta,
            "lambda" => SweepParam::Lambda,
            "tau-e" | "tau_e" => SweepParam::TauE,
            "delta" => SweepParam::Delta,
            other => return Err(AppError::Usage(format!("unknown sweep parameter '{other}'"))),
        })
    }
}

/// One sweep axis: `param=start:stop:count` (inclusive endpoints) or a
/// single `param=value`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

impl SweepAxis {
    pub fn parse(text: &str) -> Result<Self, AppError> {
        let (name, range) = text
            .split_once('=')
            .ok_or_else(|| AppError::Usage(format!("sweep '{text}': expected param=range")))?;
        let param: SweepParam = name.trim().parse()?;
        let parts: Vec<&str> = range.split(':').collect();
        let values = match parts.as_slice() {
            [single] => vec![parse_f64(single)?],
            [start, stop, count] => {
                let start = parse_f64(start)?;
                let stop = parse_f64(stop)?;
                let count: usize = count.trim().parse().map_err(|_| {
                    AppError::Usage(format!("sweep '{text}': bad point count"))
                })?;
                if count == 0 {
                    return Err(AppError::Usage(format!("sweep '{text}': empty range")));
                }
                linspace(start, stop, count)
            }
            _ => {
                return Err(AppError::Usage(format!(
                    "sweep '{text}': expected value or start:stop:count"
                )))
            }
        };
        Ok(SweepAxis { param, values })
    }
}

fn parse_f64(s: &str) -> Result<f64, AppError> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| AppError::Usage(format!("cannot parse number '{s}'")))
}

pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![start];
    }
    let step = (stop - start) / (count - 1) as f64;
    (0..count).map(|i| start + i as f64 * step).collect()
}

/// A full scan: fixed settings plus any number of swept axes.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanSpec {
    pub base: ChannelSettings,
    pub sweeps: Vec<SweepAxis>,
}

impl ScanSpec {
    fn apply(&self, flat_index: usize) -> ChannelSettings {
        let mut settings = self.base;
        // lexicographic decode: last axis varies fastest
        let mut rest = flat_index;
        let mut indices = vec![0usize; self.sweeps.len()];
        for (i, axis) in self.sweeps.iter().enumerate().rev() {
            indices[i] = rest % axis.values.len();
            rest /= axis.values.len();
        }
        for (axis, &idx) in self.sweeps.iter().zip(&indices) {
            let v = axis.values[idx];
            match axis.param {
                SweepParam::Tau => settings.tau = v,
                SweepParam::Nbar => settings.nbar = v,
                SweepParam::NSymbols => settings.n_symbols = v.round() as usize,
                SweepParam::Eta => settings.eta = v,
                SweepParam::Lambda => settings.lambda = v,
                SweepParam::TauE => settings.tau_e = v,
                SweepParam::Delta => settings.delta = v,
            }
        }
        settings
    }

    pub fn len(&self) -> usize {
        self.sweeps.iter().map(|a| a.values.len()).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Evaluate every grid point; rows are computed in parallel but emitted
    /// in lexicographic sweep order regardless of completion order.
    pub fn run(&self) -> Result<Vec<ScanRow>, AppError> {
        (0..self.len())
            .into_par_iter()
            .map(|i| self.apply(i).evaluate())
            .collect()
    }

    pub fn meta(&self) -> Meta {
        let mut meta = self.base.meta();
        for (i, axis) in self.sweeps.iter().enumerate() {
            meta.insert(
                format!("sweep{i}"),
                format!("{} ({} points)", axis.param.name(), axis.values.len()),
            );
        }
        meta
    }
}
