//! Canned scenarios reproducing the reference result curves.
//!
//! Presets 1-9 sweep eight qubits, 10-15 two photons. The reference rate
//! (gamma1, gamma0, or delta) is 1 so the time axis is dimensionless;
//! reservoir presets use the weak (lambda/gamma0 = 3) or strong
//! (lambda/gamma0 = 0.1) coupling regime, amplitude-damping presets
//! oscillate at omega = 0.1 or 10. Revival scans extend to t = 50.

use crate::config::ScenarioConfig;
use crate::sweep::SweepRow;
use noonsim::ChannelModel;

/// Which column a preset plots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotMetric {
    Qfi,
    QfiFlow,
    Concurrence,
    NmCumulative,
}

impl PlotMetric {
    pub fn label(&self) -> &'static str {
        match self {
            PlotMetric::Qfi => "QFI",
            PlotMetric::QfiFlow => "QFI flow",
            PlotMetric::Concurrence => "Concurrence",
            PlotMetric::NmCumulative => "I^(E)",
        }
    }

    pub fn extract(&self, row: &SweepRow) -> Option<f64> {
        match self {
            PlotMetric::Qfi => Some(row.qfi),
            PlotMetric::QfiFlow => Some(row.qfi_flow),
            PlotMetric::Concurrence => row.concurrence,
            PlotMetric::NmCumulative => row.nm_cumulative,
        }
    }
}

/// A figure preset: one or more labeled scenarios sharing a metric.
#[derive(Debug, Clone)]
pub struct FigurePreset {
    pub fig_id: usize,
    pub metric: PlotMetric,
    pub scenarios: Vec<(String, ScenarioConfig)>,
}

pub const FIGURE_COUNT: usize = 15;
const PRESET_STEPS: usize = 2000;

fn scenario(channel: ChannelModel, n: usize, t_max: f64) -> ScenarioConfig {
    ScenarioConfig { channel, n, phi: 0.0, t_max, steps: PRESET_STEPS, repetitions: 1, strict: false }
}

fn dephasing() -> ChannelModel {
    ChannelModel::Dephasing { gamma1: 1.0 }
}

fn depolarization() -> ChannelModel {
    ChannelModel::Depolarization { gamma1: 1.0, gamma2: 1.0 }
}

fn spontaneous() -> ChannelModel {
    ChannelModel::SpontaneousEmission { gamma1: 1.0, gamma2: 1.0 }
}

fn lorentzian_weak() -> ChannelModel {
    ChannelModel::LorentzianReservoir { gamma0: 1.0, lambda_w: 3.0, omega0: 0.0 }
}

fn lorentzian_strong() -> ChannelModel {
    ChannelModel::LorentzianReservoir { gamma0: 1.0, lambda_w: 0.1, omega0: 0.0 }
}

fn gad(omega: f64) -> ChannelModel {
    ChannelModel::GeneralizedAmplitudeDamping { delta: 1.0, omega }
}

/// Build preset `fig_id` (1 through 15).
pub fn figure_preset(fig_id: usize) -> Result<FigurePreset, String> {
    let single = |metric: PlotMetric, label: &str, cfg: ScenarioConfig| FigurePreset {
        fig_id,
        metric,
        scenarios: vec![(label.to_string(), cfg)],
    };
    let preset = match fig_id {
        1 => FigurePreset {
            fig_id,
            metric: PlotMetric::Qfi,
            scenarios: vec![
                ("dephasing".to_string(), scenario(dephasing(), 8, 10.0)),
                ("depolarization".to_string(), scenario(depolarization(), 8, 10.0)),
                ("spontaneous".to_string(), scenario(spontaneous(), 8, 10.0)),
            ],
        },
        2 => single(PlotMetric::Qfi, "lorentzian_weak", scenario(lorentzian_weak(), 8, 10.0)),
        3 => single(PlotMetric::Qfi, "lorentzian_strong", scenario(lorentzian_strong(), 8, 50.0)),
        4 => single(PlotMetric::Qfi, "gad_omega0p1", scenario(gad(0.1), 8, 10.0)),
        5 => single(PlotMetric::Qfi, "gad_omega10", scenario(gad(10.0), 8, 10.0)),
        6 => single(PlotMetric::QfiFlow, "lorentzian_weak", scenario(lorentzian_weak(), 8, 10.0)),
        7 => {
            single(PlotMetric::QfiFlow, "lorentzian_strong", scenario(lorentzian_strong(), 8, 50.0))
        }
        8 => single(PlotMetric::QfiFlow, "gad_omega0p1", scenario(gad(0.1), 8, 10.0)),
        9 => single(PlotMetric::QfiFlow, "gad_omega10", scenario(gad(10.0), 8, 10.0)),
        10 => {
            single(PlotMetric::Concurrence, "lorentzian_weak", scenario(lorentzian_weak(), 2, 10.0))
        }
        11 => single(PlotMetric::Concurrence, "gad_omega0p1", scenario(gad(0.1), 2, 10.0)),
        12 => single(
            PlotMetric::Concurrence,
            "lorentzian_strong",
            scenario(lorentzian_strong(), 2, 50.0),
        ),
        13 => single(PlotMetric::Concurrence, "gad_omega10", scenario(gad(10.0), 2, 10.0)),
        14 => FigurePreset {
            fig_id,
            metric: PlotMetric::NmCumulative,
            scenarios: vec![
                ("lorentzian_weak".to_string(), scenario(lorentzian_weak(), 2, 50.0)),
                ("lorentzian_strong".to_string(), scenario(lorentzian_strong(), 2, 50.0)),
            ],
        },
        15 => FigurePreset {
            fig_id,
            metric: PlotMetric::NmCumulative,
            scenarios: vec![
                ("gad_omega0p1".to_string(), scenario(gad(0.1), 2, 10.0)),
                ("gad_omega10".to_string(), scenario(gad(10.0), 2, 10.0)),
            ],
        },
        other => return Err(format!("figure id {other} out of range (expected 1..=15)")),
    };
    Ok(preset)
}
