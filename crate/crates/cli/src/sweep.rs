//! Scenario execution: one row of metrics per grid point.

use crate::config::ScenarioConfig;
use noonsim::metrology::FD_TIME_STEP;
use noonsim::{
    concurrence_noon, evolve, is_completely_positive, qcrb, qfi, qfi_flow_fd, ChannelModel,
    QfiMethod,
};
use thiserror::Error;

/// Tolerance on the minimum Choi eigenvalue in strict mode and `validate`.
pub const CP_TOLERANCE: f64 = 1e-9;

/// One time sample of every emitted metric. `None` fields print as blank
/// CSV cells: `gamma` for families without a scalar rate (and at flagged
/// rate poles), `qcrb` when the Fisher information vanishes, and the
/// entanglement columns whenever `n != 2`.
#[derive(Debug, Clone, Copy)]
pub struct SweepRow {
    pub t: f64,
    pub f: f64,
    pub h: f64,
    pub g: f64,
    pub gamma: Option<f64>,
    pub qfi: f64,
    pub qcrb: Option<f64>,
    pub qfi_flow: f64,
    pub concurrence: Option<f64>,
    pub nm_cumulative: Option<f64>,
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(
        "complete positivity violated at t = {t} (min Choi eigenvalue {min_eigenvalue:.3e})"
    )]
    Physicality { t: f64, min_eigenvalue: f64 },
    #[error(transparent)]
    Model(#[from] noonsim::Error),
}

/// The sweep's time grid: `steps` uniform points on `[0, t_max]`.
pub fn time_grid(config: &ScenarioConfig) -> Vec<f64> {
    (0..config.steps)
        .map(|k| config.t_max * k as f64 / (config.steps - 1) as f64)
        .collect()
}

/// Scalar decay rate for the CSV `gamma` column: the reference constant
/// rate for the time-independent families, the time-dependent rate for the
/// Lorentzian reservoir (blank at flagged poles), blank for generalized
/// amplitude damping which ships no Lindblad realization.
fn gamma_column(channel: &ChannelModel, t: f64) -> Option<f64> {
    match *channel {
        ChannelModel::Dephasing { gamma1 } => Some(gamma1),
        ChannelModel::Depolarization { gamma1, .. } => Some(gamma1),
        ChannelModel::SpontaneousEmission { gamma2, .. } => Some(gamma2),
        ChannelModel::LorentzianReservoir { .. } => {
            let sample = channel.decay_rate(t).ok()?;
            if sample.near_pole {
                None
            } else {
                Some(sample.gamma)
            }
        }
        ChannelModel::GeneralizedAmplitudeDamping { .. } => None,
    }
}

/// Run the sweep. In strict mode the first complete-positivity violation
/// aborts with the offending time.
pub fn run_sweep(config: &ScenarioConfig) -> Result<Vec<SweepRow>, SweepError> {
    let grid = time_grid(config);
    let mut rows = Vec::with_capacity(grid.len());

    // Running entanglement measure, accumulated in step with the rows.
    let mut first_concurrence = 0.0;
    let mut previous_concurrence = 0.0;
    let mut total_variation = 0.0;

    for (index, &t) in grid.iter().enumerate() {
        let params = config.channel.eval_params(t)?;
        if config.strict {
            let (ok, min_eigenvalue) = is_completely_positive(&params, CP_TOLERANCE);
            if !ok {
                return Err(SweepError::Physicality { t, min_eigenvalue });
            }
        }
        let state = evolve(config.n, config.phi, params)?;
        let qfi_result = qfi(&state, QfiMethod::ClosedForm)?;
        let bound = qcrb(qfi_result.f, config.repetitions);
        let flow = qfi_flow_fd(&config.channel, config.n, config.phi, t, FD_TIME_STEP)?;

        let (concurrence, nm_cumulative) = if config.n == 2 {
            let value = concurrence_noon(&state)?;
            if index == 0 {
                first_concurrence = value;
            } else {
                total_variation += (value - previous_concurrence).abs();
            }
            previous_concurrence = value;
            (Some(value), Some((value - first_concurrence) + total_variation))
        } else {
            (None, None)
        };

        rows.push(SweepRow {
            t,
            f: params.f,
            h: params.h,
            g: params.g,
            gamma: gamma_column(&config.channel, t),
            qfi: qfi_result.f,
            qcrb: if bound.is_unbounded() { None } else { Some(bound.value()) },
            qfi_flow: flow.flow,
            concurrence,
            nm_cumulative,
        });
    }
    Ok(rows)
}

/// Physicality scan over the sweep grid.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub points: usize,
    pub t_max: f64,
    pub min_eigenvalue: f64,
    pub min_eigenvalue_t: f64,
    /// Maximal contiguous grid intervals violating complete positivity.
    pub violations: Vec<(f64, f64)>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Run the Choi positivity test over the grid and collect the violating
/// intervals; never aborts.
pub fn validate(config: &ScenarioConfig) -> Result<ValidationReport, SweepError> {
    let grid = time_grid(config);
    let mut min_eigenvalue = f64::INFINITY;
    let mut min_eigenvalue_t = 0.0;
    let mut violations: Vec<(f64, f64)> = Vec::new();
    let mut open: Option<(f64, f64)> = None;

    for &t in &grid {
        let params = config.channel.eval_params(t)?;
        let (ok, eig) = is_completely_positive(&params, CP_TOLERANCE);
        if eig < min_eigenvalue {
            min_eigenvalue = eig;
            min_eigenvalue_t = t;
        }
        if !ok {
            open = match open {
                None => Some((t, t)),
                Some((start, _)) => Some((start, t)),
            };
        } else if let Some(interval) = open.take() {
            violations.push(interval);
        }
    }
    if let Some(interval) = open {
        violations.push(interval);
    }

    Ok(ValidationReport {
        points: grid.len(),
        t_max: config.t_max,
        min_eigenvalue,
        min_eigenvalue_t,
        violations,
    })
}
