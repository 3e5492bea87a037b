//! Reference figure grids, emitted in long format
//! (`panel`, `curve`, `x`, `y`) for direct plotting.
//!
//! All figure grids use the half-bin-offset convention, which matches the
//! `cos[pi d (2s+1)/N]` form of the outcome series.

use serde::Serialize;

use phasechan_core::infotheory::{
    beta_threshold, capacity_coherent, capacity_photon_number, CapacityParams, ThresholdResult,
};
use phasechan_core::receiver::{BinConvention, ReceiverKind};

use crate::output::Meta;
use crate::scan::{linspace, ChannelSettings, NoiseKind};
use crate::AppError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureRow {
    pub panel: String,
    pub curve: String,
    pub x: f64,
    pub y: f64,
}

fn row(panel: &str, curve: String, x: f64, y: f64) -> FigureRow {
    FigureRow { panel: panel.into(), curve, x, y }
}

fn reference_settings() -> ChannelSettings {
    ChannelSettings { convention: BinConvention::HalfBinOffset, ..Default::default() }
}

/// Mutual information of both receivers and their ratio versus the static
/// noise parameter, at `N = 20` and `nbar` in {1, 2, 3}.
pub fn fig2() -> Result<Vec<FigureRow>, AppError> {
    let mut rows = Vec::new();
    for &nbar in &[1.0, 2.0, 3.0] {
        let curve = format!("nbar={nbar}");
        for tau in linspace(0.0, 3.0, 50) {
            let settings = ChannelSettings { nbar, tau, ..reference_settings() };
            let r = settings.evaluate()?;
            rows.push(row("I_C", curve.clone(), tau, r.i_c));
            rows.push(row("I_Q", curve.clone(), tau, r.i_q));
            rows.push(row("ratio", curve.clone(), tau, r.i_q / r.i_c));
        }
    }
    Ok(rows)
}

/// Noiseless capacity ratios `gamma = I / C_PHN` versus alphabet size and
/// versus seed energy, with the coherent-channel reference `C_COH / C_PHN`
/// at `eta = 1`.
pub fn fig3_upper() -> Result<Vec<FigureRow>, AppError> {
    let mut rows = Vec::new();
    for &nbar in &[1.0, 2.0, 3.0] {
        let coh_ratio = capacity_coherent(&CapacityParams::new(1.0, nbar)?)
            / capacity_photon_number(nbar)?;
        for n in (2..=100).step_by(2) {
            let settings = ChannelSettings { nbar, n_symbols: n, ..reference_settings() };
            let r = settings.evaluate()?;
            let x = n as f64;
            rows.push(row("gamma-vs-N", format!("gamma_C nbar={nbar}"), x, r.gamma_c.unwrap()));
            rows.push(row("gamma-vs-N", format!("gamma_Q nbar={nbar}"), x, r.gamma_q.unwrap()));
            rows.push(row("gamma-vs-N", format!("coh nbar={nbar}"), x, coh_ratio));
        }
    }
    for nbar in linspace(0.1, 4.0, 40) {
        let settings = ChannelSettings { nbar, n_symbols: 50, ..reference_settings() };
        let r = settings.evaluate()?;
        let coh_ratio = r.c_coh / r.c_phn;
        rows.push(row("gamma-vs-nbar", "gamma_C".into(), nbar, r.gamma_c.unwrap()));
        rows.push(row("gamma-vs-nbar", "gamma_Q".into(), nbar, r.gamma_q.unwrap()));
        rows.push(row("gamma-vs-nbar", "coh".into(), nbar, coh_ratio));
    }
    Ok(rows)
}

/// Boundary of the `beta > 1` region: the threshold `tau*(eta)` where a
/// phase channel stops beating the lossy coherent channel.
pub fn fig3_lower() -> Result<Vec<FigureRow>, AppError> {
    let mut rows = Vec::new();
    for (kind, label) in [(ReceiverKind::Canonical, "beta_C"), (ReceiverKind::HusimiQ, "beta_Q")] {
        for &nbar in &[1.0, 2.0, 3.0] {
            let curve = format!("{label} nbar={nbar}");
            for eta in linspace(0.05, 1.0, 20) {
                let result =
                    beta_threshold(kind, nbar, 20, eta, BinConvention::HalfBinOffset)?;
                if let ThresholdResult::Crossing { tau_star } = result {
                    rows.push(row("beta-region", curve.clone(), eta, tau_star));
                }
            }
        }
    }
    Ok(rows)
}

/// Detuned Ornstein-Uhlenbeck dephasing: mutual-information revivals versus
/// time, plus the two contour grids over `(tau, delta)` and `(tau, tau_e)`.
pub fn fig4() -> Result<Vec<FigureRow>, AppError> {
    let base = ChannelSettings {
        nbar: 3.0,
        noise: NoiseKind::OrnsteinUhlenbeck,
        lambda: 1.0,
        tau_e: 1.0,
        ..reference_settings()
    };
    let mut rows = Vec::new();
    for &delta in &[3.5, 4.5, 6.0, 10.0] {
        let curve = format!("delta={delta}");
        for tau in linspace(0.0, 5.0, 200) {
            let r = ChannelSettings { delta, tau, ..base }.evaluate()?;
            rows.push(row("I_C", curve.clone(), tau, r.i_c));
            rows.push(row("I_Q", curve.clone(), tau, r.i_q));
        }
    }
    for delta in linspace(0.0, 10.0, 41) {
        let curve = format!("delta={delta:.2}");
        for tau in linspace(0.0, 5.0, 50) {
            let r = ChannelSettings { delta, tau, ..base }.evaluate()?;
            rows.push(row("contour-ic-delta", curve.clone(), tau, r.i_c));
        }
    }
    for i in 0..25 {
        // logarithmic grid over the environment correlation time
        let tau_e = 10f64.powf(-1.0 + 2.0 * i as f64 / 24.0);
        let curve = format!("tau-e={tau_e:.4}");
        for tau in linspace(0.0, 5.0, 50) {
            let r = ChannelSettings { delta: 5.5, tau_e, tau, ..base }.evaluate()?;
            rows.push(row("contour-iq-taue", curve.clone(), tau, r.i_q));
        }
    }
    Ok(rows)
}

/// Dispatch by figure name, returning metadata and rows.
pub fn figure(name: &str) -> Result<(Meta, Vec<FigureRow>), AppError> {
    let rows = match name {
        "fig2" => fig2()?,
        "fig3-upper" => fig3_upper()?,
        "fig3-lower" => fig3_lower()?,
        "fig4" => fig4()?,
        other => {
            return Err(AppError::Usage(format!(
                "unknown figure '{other}' (expected fig2, fig3-upper, fig3-lower, fig4)"
            )))
        }
    };
    let mut meta = reference_settings().meta();
    meta.insert("figure".into(), name.into());
    Ok((meta, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig2_has_three_curves_per_panel() {
        let rows = fig2().unwrap();
        for panel in ["I_C", "I_Q", "ratio"] {
            let mut curves: Vec<&str> = rows
                .iter()
                .filter(|r| r.panel == panel)
                .map(|r| r.curve.as_str())
                .collect();
            curves.sort_unstable();
            curves.dedup();
            assert_eq!(curves.len(), 3, "panel {panel}");
        }
        assert_eq!(rows.len(), 3 * 50 * 3);
    }

    #[test]
    fn fig4_delta10_shows_a_revival() {
        let rows = fig4().unwrap();
        let ys: Vec<f64> = rows
            .iter()
            .filter(|r| r.panel == "I_C" && r.curve == "delta=10")
            .map(|r| r.y)
            .collect();
        assert_eq!(ys.len(), 200);
        let mut best_rise: f64 = 0.0;
        for i in 1..ys.len() - 1 {
            if ys[i] < ys[i - 1] {
                let min = ys[i];
                let later_max = ys[i..].iter().cloned().fold(f64::MIN, f64::max);
                best_rise = best_rise.max(later_max - min);
            }
        }
        assert!(best_rise >= 1e-3, "best rise {best_rise}");
    }

    #[test]
    fn fig3_upper_flattens_by_n_50() {
        let rows = fig3_upper().unwrap();
        for nbar in [1.0, 2.0, 3.0] {
            let curve = format!("gamma_C nbar={nbar}");
            let pts: Vec<(f64, f64)> = rows
                .iter()
                .filter(|r| r.panel == "gamma-vs-N" && r.curve == curve)
                .map(|r| (r.x, r.y))
                .collect();
            let at_50 = pts.iter().find(|p| p.0 == 50.0).unwrap().1;
            let at_100 = pts.iter().find(|p| p.0 == 100.0).unwrap().1;
            assert!((at_100 - at_50).abs() / at_50 < 0.01, "nbar = {nbar}");
        }
    }

    #[test]
    fn unknown_figure_is_usage_error() {
        assert!(matches!(figure("fig9"), Err(AppError::Usage(_))));
    }
}
