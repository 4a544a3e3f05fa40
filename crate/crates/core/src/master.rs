//! Time-local Lindblad master equation with possibly sign-changing rates.
//!
//! This integrator exists to cross-validate the analytic transfer triples:
//! each channel family carries a fixed realization in terms of Lindblad
//! operators and rate functions, and [`map_equivalence_check`] reconstructs
//! `(f, h, g)` from integrated basis states to confirm the two descriptions
//! agree. The Hamiltonian is zero throughout (interaction picture).
//!
//! Rate conventions, chosen so each family reproduces its printed triple:
//!
//! * dephasing: `sigma_z` at `gamma1 / 2`
//! * spontaneous emission: `sigma_-` at `gamma2`, plus `sigma_z` at
//!   `(gamma1 - gamma2/2) / 2` for the excess dephasing
//! * depolarization: `sigma_x`, `sigma_y` at `gamma2 / 6` and `sigma_z` at
//!   `gamma1/3 - gamma2/6`
//! * Lorentzian reservoir: `sigma_-` at the time-dependent rate
//! * generalized amplitude damping: no static realization is shipped; the
//!   oscillating stationary state would need rates the model does not fix,
//!   so the operations below refuse it rather than invent them.

use crate::channels::{lorentzian_rate, ChannelModel, DEFAULT_POLE_THRESHOLD};
use crate::error::{Error, Result};
use crate::linalg::{anticommutator, sigma_minus, sigma_x, sigma_y, sigma_z, CMatrix, C64};
use crate::noon::DensityMatrix;

/// Decay-rate coefficient of one Lindblad operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateFunction {
    Constant(f64),
    Lorentzian { gamma0: f64, lambda_w: f64 },
}

impl RateFunction {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            RateFunction::Constant(g) => g,
            RateFunction::Lorentzian { gamma0, lambda_w } => {
                lorentzian_rate(gamma0, lambda_w, t, DEFAULT_POLE_THRESHOLD).gamma
            }
        }
    }

    pub fn near_pole(&self, t: f64) -> bool {
        match *self {
            RateFunction::Constant(_) => false,
            RateFunction::Lorentzian { gamma0, lambda_w } => {
                lorentzian_rate(gamma0, lambda_w, t, DEFAULT_POLE_THRESHOLD).near_pole
            }
        }
    }
}

/// One noise operator with its rate.
#[derive(Debug, Clone)]
pub struct LindbladOperator {
    /// 2x2 noise operator acting on a single qubit.
    pub operator: CMatrix,
    pub rate: RateFunction,
    pub label: &'static str,
}

/// The full set of noise operators realizing one channel family.
#[derive(Debug, Clone)]
pub struct LindbladRealization {
    pub operators: Vec<LindbladOperator>,
}

impl LindbladRealization {
    /// Realization for `model` per the conventions above.
    pub fn for_model(model: &ChannelModel) -> Result<Self> {
        let ops = match *model {
            ChannelModel::Dephasing { gamma1 } => vec![LindbladOperator {
                operator: sigma_z(),
                rate: RateFunction::Constant(gamma1 / 2.0),
                label: "sigma_z",
            }],
            ChannelModel::SpontaneousEmission { gamma1, gamma2 } => vec![
                LindbladOperator {
                    operator: sigma_minus(),
                    rate: RateFunction::Constant(gamma2),
                    label: "sigma_-",
                },
                LindbladOperator {
                    operator: sigma_z(),
                    rate: RateFunction::Constant((gamma1 - gamma2 / 2.0) / 2.0),
                    label: "sigma_z",
                },
            ],
            ChannelModel::Depolarization { gamma1, gamma2 } => vec![
                LindbladOperator {
                    operator: sigma_x(),
                    rate: RateFunction::Constant(gamma2 / 6.0),
                    label: "sigma_x",
                },
                LindbladOperator {
                    operator: sigma_y(),
                    rate: RateFunction::Constant(gamma2 / 6.0),
                    label: "sigma_y",
                },
                LindbladOperator {
                    operator: sigma_z(),
                    rate: RateFunction::Constant(gamma1 / 3.0 - gamma2 / 6.0),
                    label: "sigma_z",
                },
            ],
            ChannelModel::LorentzianReservoir { gamma0, lambda_w, .. } => {
                vec![LindbladOperator {
                    operator: sigma_minus(),
                    rate: RateFunction::Lorentzian { gamma0, lambda_w },
                    label: "sigma_-",
                }]
            }
            ChannelModel::GeneralizedAmplitudeDamping { .. } => {
                return Err(Error::UnsupportedDecomposition("generalized amplitude damping"))
            }
        };
        Ok(LindbladRealization { operators: ops })
    }

    /// Lift the single-qubit operators onto every qubit of a 2^k space.
    fn lift(&self, dim: usize) -> Result<Vec<LiftedOperator>> {
        let n = dim.trailing_zeros() as usize;
        if dim == 0 || dim != 1usize << n {
            return Err(Error::DimensionMismatch { expected: 1 << n.max(1), got: dim });
        }
        let mut lifted = Vec::new();
        for (index, op) in self.operators.iter().enumerate() {
            for qubit in 0..n {
                let a = crate::linalg::embed_single_qubit(&op.operator, qubit, n);
                let ada = a.adjoint() * &a;
                lifted.push(LiftedOperator { a, ada, rate_index: index });
            }
        }
        Ok(lifted)
    }
}

struct LiftedOperator {
    a: CMatrix,
    ada: CMatrix,
    rate_index: usize,
}

/// Result of a master-equation run.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    /// RK4 substep used on the first grid interval.
    pub step: f64,
    pub max_trace_drift: f64,
}

/// Dissipator right-hand side `sum_i gamma_i(t) (A rho A+ - {A+A, rho}/2)`,
/// with every noise operator acting identically on each qubit. The
/// Hamiltonian commutator is absent by convention.
pub fn lindblad_rhs(rho: &CMatrix, t: f64, realization: &LindbladRealization) -> Result<CMatrix> {
    for op in &realization.operators {
        if op.rate.near_pole(t) {
            return Err(Error::PoleAt { t });
        }
    }
    let lifted = realization.lift(rho.nrows())?;
    Ok(rhs_with(&lifted, &rates_at(realization, t), rho))
}

fn rates_at(realization: &LindbladRealization, t: f64) -> Vec<f64> {
    realization.operators.iter().map(|op| op.rate.eval(t)).collect()
}

fn rhs_with(lifted: &[LiftedOperator], rates: &[f64], rho: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(rho.nrows(), rho.ncols());
    for op in lifted {
        let rate = rates[op.rate_index];
        if rate == 0.0 {
            continue;
        }
        let sandwich = &op.a * rho * op.a.adjoint();
        let anti = anticommutator(&op.ada, rho) * C64::new(0.5, 0.0);
        out += (sandwich - anti) * C64::new(rate, 0.0);
    }
    out
}

/// Classical fixed-step RK4 over `grid`, four substeps per grid interval.
/// The trace is never renormalized; drift is measured and bounded instead.
pub fn integrate(
    rho0: &DensityMatrix,
    realization: &LindbladRealization,
    grid: &[f64],
) -> Result<Trajectory> {
    validate_grid(grid)?;
    let lifted = realization.lift(rho0.dim())?;

    let mut rho = rho0.matrix().clone();
    let mut states = vec![rho0.clone()];
    let mut max_drift = (crate::linalg::trace(&rho).re - 1.0).abs();
    let mut substep_count = 0usize;

    for window in grid.windows(2) {
        let (t0, t1) = (window[0], window[1]);
        let step = (t1 - t0) / 4.0;
        for sub in 0..4 {
            let t = t0 + step * sub as f64;
            for &stage_t in &[t, t + step / 2.0, t + step] {
                for op in &realization.operators {
                    if op.rate.near_pole(stage_t) {
                        return Err(Error::PoleAt { t: stage_t });
                    }
                }
            }
            let k1 = rhs_with(&lifted, &rates_at(realization, t), &rho);
            let mid = rates_at(realization, t + step / 2.0);
            let k2 = rhs_with(&lifted, &mid, &(&rho + &k1 * C64::new(step / 2.0, 0.0)));
            let k3 = rhs_with(&lifted, &mid, &(&rho + &k2 * C64::new(step / 2.0, 0.0)));
            let k4 = rhs_with(
                &lifted,
                &rates_at(realization, t + step),
                &(&rho + &k3 * C64::new(step, 0.0)),
            );
            rho += (k1 + k2 * C64::new(2.0, 0.0) + k3 * C64::new(2.0, 0.0) + k4)
                * C64::new(step / 6.0, 0.0);
            substep_count += 1;

            let drift = (crate::linalg::trace(&rho).re - 1.0).abs();
            // NaN from a blown-up state must trip the error too.
            if drift.is_nan() || drift > 1e-6 {
                return Err(Error::IntegrationUnstable {
                    step: substep_count,
                    t: t + step,
                    drift,
                });
            }
            max_drift = max_drift.max(drift);
        }
        states.push(DensityMatrix::from_matrix_unchecked(rho.clone()));
    }

    Ok(Trajectory {
        times: grid.to_vec(),
        states,
        step: if grid.len() > 1 { (grid[1] - grid[0]) / 4.0 } else { 0.0 },
        max_trace_drift: max_drift,
    })
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 2 {
        return Err(Error::InvalidGrid("need at least two grid points".into()));
    }
    if grid[0] != 0.0 {
        return Err(Error::InvalidGrid(format!("grid must start at 0, got {}", grid[0])));
    }
    for (k, window) in grid.windows(2).enumerate() {
        if window[1] <= window[0] {
            return Err(Error::InvalidGrid(format!(
                "grid must be strictly increasing (violated at index {})",
                k + 1
            )));
        }
    }
    Ok(())
}

/// Worst disagreement between the integrated channel and its analytic triple.
#[derive(Debug, Clone, Copy)]
pub struct DeviationReport {
    pub max_deviation: f64,
    pub at_time: f64,
}

/// Integrate the four single-qubit basis states, reconstruct `(f, h, g)`
/// from their Bloch vectors, and report the worst deviation from
/// [`ChannelModel::eval_params`] over the grid.
pub fn map_equivalence_check(model: &ChannelModel, grid: &[f64]) -> Result<DeviationReport> {
    let realization = LindbladRealization::for_model(model)?;

    let basis: [CMatrix; 4] = [
        // |0><0|, |1><1|, |+><+|, |+i><+i|
        CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), C64::ZERO, C64::ZERO, C64::ZERO]),
        CMatrix::from_row_slice(2, 2, &[C64::ZERO, C64::ZERO, C64::ZERO, c(1.0, 0.0)]),
        CMatrix::from_row_slice(
            2,
            2,
            &[c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0)],
        ),
        CMatrix::from_row_slice(
            2,
            2,
            &[c(0.5, 0.0), c(0.0, -0.5), c(0.0, 0.5), c(0.5, 0.0)],
        ),
    ];
    let mut trajectories = Vec::with_capacity(4);
    for rho0 in &basis {
        let state = DensityMatrix::new(rho0.clone()).expect("basis states are valid");
        trajectories.push(integrate(&state, &realization, grid)?);
    }

    let mut worst = DeviationReport { max_deviation: 0.0, at_time: 0.0 };
    for (k, &t) in grid.iter().enumerate() {
        let expected = model.eval_params(t)?;
        let z0 = bloch_z(trajectories[0].states[k].matrix());
        let z1 = bloch_z(trajectories[1].states[k].matrix());
        let f = 0.5 * (z0 + z1);
        let h = 0.5 * (z0 - z1);
        let gx = bloch_x(trajectories[2].states[k].matrix());
        let gy = bloch_y(trajectories[3].states[k].matrix());
        let dev = (f - expected.f)
            .abs()
            .max((h - expected.h).abs())
            .max((gx - expected.g).abs())
            .max((gy - expected.g).abs());
        if dev > worst.max_deviation {
            worst = DeviationReport { max_deviation: dev, at_time: t };
        }
    }
    Ok(worst)
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn bloch_x(rho: &CMatrix) -> f64 {
    2.0 * rho[(0, 1)].re
}

fn bloch_y(rho: &CMatrix) -> f64 {
    -2.0 * rho[(0, 1)].im
}

fn bloch_z(rho: &CMatrix) -> f64 {
    rho[(0, 0)].re - rho[(1, 1)].re
}
