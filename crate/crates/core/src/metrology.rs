//! Quantum Fisher information, the symmetric logarithmic derivative, the
//! Cramér-Rao phase bound, and the QFI flow with its per-noise sub-flows.
//!
//! Every quantity is available through two independent routes: a closed form
//! on the compact N00N representation and a dense eigendecomposition oracle.
//! The closed forms are what the CLI sweeps evaluate; the oracle exists to
//! arbitrate them.

use crate::channels::ChannelModel;
use crate::error::{Error, Result};
use crate::linalg::{commutator, hermitian_eigen, hermiticity_residual, CMatrix, C64};
use crate::master::LindbladRealization;
use crate::noon::{evolve, DensityMatrix, EvolvedNoonState};

/// Default eigenvalue-pair cutoff for the SLD spectral sum. Pairs with
/// `lambda_m + lambda_n` at or below this carry no phase information here
/// (the phase derivative is supported on the coherence block) and are
/// excluded to keep the sum finite on rank-deficient states.
pub const SLD_EIGEN_CUTOFF: f64 = 1e-12;

/// Default finite-difference steps for the flow computations.
pub const FD_TIME_STEP: f64 = 1e-5;
pub const FD_PHASE_STEP: f64 = 1e-5;

/// Threshold below which the coherence block trace counts as degenerate.
pub const DEGENERATE_BLOCK_TRACE: f64 = 1e-14;

/// Positive-flow tolerance used when classifying backflow intervals.
pub const FLOW_WITNESS_TOLERANCE: f64 = 1e-9;

/// Which route produced a QFI value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QfiMethod {
    ClosedForm,
    Oracle,
}

/// Fisher information result with the normalized sensitivity factor
/// `eta = F / n^2` (1 at the Heisenberg limit, 0 when phase information
/// is gone).
#[derive(Debug, Clone, Copy)]
pub struct QfiResult {
    pub f: f64,
    pub eta: f64,
    pub method: QfiMethod,
    /// Set when the coherence block trace fell below
    /// [`DEGENERATE_BLOCK_TRACE`] and F was reported as zero.
    pub degenerate: bool,
}

/// Dense symmetric logarithmic derivative.
#[derive(Debug, Clone)]
pub struct SldMatrix {
    pub matrix: CMatrix,
    pub cutoff: f64,
}

/// Which route produced a flow value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowMethod {
    FiniteDifference,
    Structural,
    SubflowSum,
}

/// One sample of the QFI flow `I = dF/dt`.
#[derive(Debug, Clone)]
pub struct FlowSample {
    pub t: f64,
    pub flow: f64,
    pub method: FlowMethod,
    /// Per-noise-operator decomposition `(gamma_i(t), J_i)` when the model
    /// has a Lindblad realization; empty otherwise.
    pub subflows: Vec<(f64, f64)>,
}

/// Phase uncertainty from the quantum Cramér-Rao bound. Zero Fisher
/// information yields an unbounded uncertainty, tagged rather than thrown.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseUncertainty {
    Bounded(f64),
    Unbounded,
}

impl PhaseUncertainty {
    /// Numeric value, infinite when unbounded.
    pub fn value(&self) -> f64 {
        match *self {
            PhaseUncertainty::Bounded(v) => v,
            PhaseUncertainty::Unbounded => f64::INFINITY,
        }
    }

    pub fn is_unbounded(&self) -> bool {
        matches!(self, PhaseUncertainty::Unbounded)
    }
}

/// SLD by full eigendecomposition: `L = 2 sum <m|drho|n> / (l_m + l_n) |m><n|`
/// over eigenpairs with `l_m + l_n > cutoff`.
pub fn sld_oracle(rho: &DensityMatrix, drho: &CMatrix, cutoff: f64) -> Result<SldMatrix> {
    if drho.nrows() != rho.dim() || drho.ncols() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), got: drho.nrows() });
    }
    let residual = hermiticity_residual(drho);
    if residual > 1e-10 {
        return Err(Error::NotHermitian { residual });
    }
    if cutoff.is_nan() || cutoff <= 0.0 {
        return Err(Error::Domain("SLD eigenvalue cutoff must be positive".into()));
    }

    let (values, vectors) = hermitian_eigen(rho.matrix());
    let dim = rho.dim();
    let mut projected = vectors.adjoint() * drho * &vectors;
    for m in 0..dim {
        for n in 0..dim {
            let denom = values[m] + values[n];
            projected[(m, n)] = if denom > cutoff {
                projected[(m, n)] * C64::new(2.0 / denom, 0.0)
            } else {
                C64::ZERO
            };
        }
    }
    let matrix = &vectors * projected * vectors.adjoint();
    Ok(SldMatrix { matrix, cutoff })
}

/// Closed-form SLD of the evolved N00N state: supported entirely on the
/// corner coherence block,
/// `L = alpha i (e^{i n phi} |0..0><1..1| - h.c.)` with
/// `alpha = n g^n / (a_head + a_tail)`.
pub fn sld_closed_form(state: &EvolvedNoonState) -> Result<SldMatrix> {
    let block_trace = state.coherence_block_trace();
    if block_trace <= DEGENERATE_BLOCK_TRACE {
        return Err(Error::DegenerateState { block_trace });
    }
    let dim = 1usize
        << if state.n <= crate::noon::MAX_DENSE_QUBITS {
            state.n
        } else {
            return Err(Error::DenseTooLarge { n: state.n, max: crate::noon::MAX_DENSE_QUBITS });
        };
    let alpha = state.n as f64 * 2.0 * state.c / block_trace;
    let mut matrix = CMatrix::zeros(dim, dim);
    let upper = C64::new(0.0, alpha) * C64::from_polar(1.0, state.n as f64 * state.phi);
    matrix[(0, dim - 1)] = upper;
    matrix[(dim - 1, 0)] = upper.conj();
    Ok(SldMatrix { matrix, cutoff: 0.0 })
}

/// Quantum Fisher information of the evolved state. The closed form is
/// `F = n^2 g^{2n} / (a_head + a_tail)`; the oracle evaluates `Tr(rho L^2)`
/// with the spectral SLD on the dense matrix.
pub fn qfi(state: &EvolvedNoonState, method: QfiMethod) -> Result<QfiResult> {
    let n2 = (state.n * state.n) as f64;
    let block_trace = state.coherence_block_trace();
    if block_trace <= DEGENERATE_BLOCK_TRACE {
        return Ok(QfiResult { f: 0.0, eta: 0.0, method, degenerate: true });
    }
    let f = match method {
        QfiMethod::ClosedForm => {
            let corner = 2.0 * state.c; // g^n
            n2 * corner * corner / block_trace
        }
        QfiMethod::Oracle => {
            let rho = state.dense_density()?;
            let drho = state.dense_phase_derivative()?;
            let sld = sld_oracle(&rho, &drho, SLD_EIGEN_CUTOFF)?;
            let l2 = &sld.matrix * &sld.matrix;
            (l2 * rho.matrix()).diagonal().iter().sum::<C64>().re
        }
    };
    Ok(QfiResult { f, eta: f / n2, method, degenerate: false })
}

/// Quantum Cramér-Rao bound `delta phi >= 1 / sqrt(M F)` over `m`
/// measurement repetitions.
pub fn qcrb(f: f64, m: u32) -> PhaseUncertainty {
    assert!(m >= 1, "repetition count must be at least 1");
    if f <= 0.0 {
        return PhaseUncertainty::Unbounded;
    }
    PhaseUncertainty::Bounded(1.0 / (m as f64 * f).sqrt())
}

/// Shot-noise and Heisenberg phase-uncertainty references `(1/sqrt(n), 1/n)`.
pub fn reference_bounds(n: usize) -> (f64, f64) {
    assert!(n >= 1, "photon number must be at least 1");
    (1.0 / (n as f64).sqrt(), 1.0 / n as f64)
}

fn closed_form_qfi_at(model: &ChannelModel, n: usize, phi: f64, t: f64) -> Result<f64> {
    let state = evolve(n, phi, model.eval_params(t)?)?;
    Ok(qfi(&state, QfiMethod::ClosedForm)?.f)
}

/// QFI flow by finite differences of the closed-form F: central where
/// `t >= dt`, one-sided forward at the start of the evolution.
pub fn qfi_flow_fd(
    model: &ChannelModel,
    n: usize,
    phi: f64,
    t: f64,
    dt: f64,
) -> Result<FlowSample> {
    if dt.is_nan() || dt <= 0.0 {
        return Err(Error::Domain("finite-difference step must be positive".into()));
    }
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let flow = if t >= dt {
        let plus = closed_form_qfi_at(model, n, phi, t + dt)?;
        let minus = closed_form_qfi_at(model, n, phi, t - dt)?;
        (plus - minus) / (2.0 * dt)
    } else {
        let here = closed_form_qfi_at(model, n, phi, t)?;
        let plus = closed_form_qfi_at(model, n, phi, t + dt)?;
        (plus - here) / dt
    };
    Ok(FlowSample { t, flow, method: FlowMethod::FiniteDifference, subflows: Vec::new() })
}

/// QFI flow through the operator identity
/// `I = 2 Tr[L d_phi(d_t rho)] - Tr[L^2 d_t rho]`, with the time and phase
/// derivatives of the dense matrix taken by central differences and `L`
/// from the spectral oracle. Dense; limited to n <= 8.
pub fn qfi_flow_structural(
    model: &ChannelModel,
    n: usize,
    phi: f64,
    t: f64,
    dt: f64,
    dphi: f64,
) -> Result<FlowSample> {
    if n > 8 {
        return Err(Error::DenseTooLarge { n, max: 8 });
    }
    if dt.is_nan() || dt <= 0.0 || dphi.is_nan() || dphi <= 0.0 {
        return Err(Error::Domain("finite-difference steps must be positive".into()));
    }
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }

    let dense_at = |phi_val: f64, t_val: f64| -> Result<CMatrix> {
        Ok(evolve(n, phi_val, model.eval_params(t_val)?)?
            .dense_density()?
            .into_matrix())
    };
    // d_t rho at a given phase, central when possible.
    let drho_dt_at = |phi_val: f64| -> Result<CMatrix> {
        if t >= dt {
            Ok((dense_at(phi_val, t + dt)? - dense_at(phi_val, t - dt)?)
                / C64::new(2.0 * dt, 0.0))
        } else {
            Ok((dense_at(phi_val, t + dt)? - dense_at(phi_val, t)?) / C64::new(dt, 0.0))
        }
    };

    let state = evolve(n, phi, model.eval_params(t)?)?;
    let rho = state.dense_density()?;
    let drho_dphi = state.dense_phase_derivative()?;
    let sld = sld_oracle(&rho, &drho_dphi, SLD_EIGEN_CUTOFF)?;

    let drho_dt = drho_dt_at(phi)?;
    let dphi_drho_dt =
        (drho_dt_at(phi + dphi)? - drho_dt_at(phi - dphi)?) / C64::new(2.0 * dphi, 0.0);

    let term1 = (&sld.matrix * dphi_drho_dt).diagonal().iter().sum::<C64>().re;
    let term2 = (&sld.matrix * &sld.matrix * drho_dt).diagonal().iter().sum::<C64>().re;
    Ok(FlowSample {
        t,
        flow: 2.0 * term1 - term2,
        method: FlowMethod::Structural,
        subflows: Vec::new(),
    })
}

/// Exact decomposition of the flow into per-noise-operator sub-flows
/// `I = sum_i gamma_i(t) J_i` with
/// `J_i = -sum_qubits Tr(rho [L, A_i]^dagger [L, A_i]) <= 0`. Requires a
/// declared Lindblad realization and n <= 6.
pub fn qfi_subflows(model: &ChannelModel, n: usize, phi: f64, t: f64) -> Result<FlowSample> {
    if n > 6 {
        return Err(Error::DenseTooLarge { n, max: 6 });
    }
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let realization = LindbladRealization::for_model(model)?;
    for op in &realization.operators {
        if op.rate.near_pole(t) {
            return Err(Error::PoleAt { t });
        }
    }

    let state = evolve(n, phi, model.eval_params(t)?)?;
    let rho = state.dense_density()?;
    let sld = sld_closed_form(&state)?;

    let mut subflows = Vec::with_capacity(realization.operators.len());
    let mut total = 0.0;
    for op in &realization.operators {
        let rate = op.rate.eval(t);
        let mut j = 0.0;
        for qubit in 0..n {
            let lifted = crate::linalg::embed_single_qubit(&op.operator, qubit, n);
            let x = commutator(&sld.matrix, &lifted);
            let xdx = x.adjoint() * x;
            j -= (xdx * rho.matrix()).diagonal().iter().sum::<C64>().re;
        }
        subflows.push((rate, j));
        total += rate * j;
    }
    Ok(FlowSample { t, flow: total, method: FlowMethod::SubflowSum, subflows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{ChannelModel, ChannelParams};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn reference_models() -> Vec<ChannelModel> {
        vec![
            ChannelModel::Dephasing { gamma1: 1.0 },
            ChannelModel::Depolarization { gamma1: 1.0, gamma2: 1.0 },
            ChannelModel::SpontaneousEmission { gamma1: 1.0, gamma2: 1.0 },
            ChannelModel::LorentzianReservoir { gamma0: 1.0, lambda_w: 3.0, omega0: 0.0 },
            ChannelModel::GeneralizedAmplitudeDamping { delta: 1.0, omega: 10.0 },
        ]
    }

    fn sld_residual(rho: &DensityMatrix, drho: &CMatrix, sld: &SldMatrix) -> f64 {
        let sym = (rho.matrix() * &sld.matrix + &sld.matrix * rho.matrix())
            * C64::new(0.5, 0.0);
        (drho - sym).norm()
    }

    #[test]
    fn sld_oracle_zero_derivative() {
        let state = evolve(2, 0.0, ChannelParams::identity(0.0)).unwrap();
        let rho = state.dense_density().unwrap();
        let zero = CMatrix::zeros(4, 4);
        let sld = sld_oracle(&rho, &zero, SLD_EIGEN_CUTOFF).unwrap();
        assert_eq!(sld.matrix.norm(), 0.0);
    }

    #[test]
    fn sld_oracle_heisenberg_limit_pure_state() {
        let state = evolve(2, 0.3, ChannelParams::identity(0.0)).unwrap();
        let rho = state.dense_density().unwrap();
        let drho = state.dense_phase_derivative().unwrap();
        let sld = sld_oracle(&rho, &drho, SLD_EIGEN_CUTOFF).unwrap();
        let f = (&sld.matrix * &sld.matrix * rho.matrix()).diagonal().iter().sum::<C64>().re;
        assert_relative_eq!(f, 4.0, max_relative = 1e-10);
        assert!(sld_residual(&rho, &drho, &sld) < 1e-8);
    }

    #[test]
    fn sld_oracle_rejects_non_hermitian() {
        let state = evolve(1, 0.0, ChannelParams::identity(0.0)).unwrap();
        let rho = state.dense_density().unwrap();
        let mut bad = CMatrix::zeros(2, 2);
        bad[(0, 1)] = C64::new(1.0, 0.0);
        assert!(matches!(
            sld_oracle(&rho, &bad, SLD_EIGEN_CUTOFF),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn sld_closed_form_identity_scale() {
        let state = evolve(2, 0.0, ChannelParams::identity(0.0)).unwrap();
        let sld = sld_closed_form(&state).unwrap();
        // alpha = 2 for n = 2 at the identity map; corner = i alpha.
        assert_abs_diff_eq!(sld.matrix[(0, 3)].im, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sld.matrix[(0, 3)].re, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn sld_closed_form_vanishes_without_coherence() {
        let params = ChannelParams { f: 0.0, h: 1.0, g: 0.0, t: 0.0 };
        let state = evolve(3, 0.5, params).unwrap();
        let sld = sld_closed_form(&state).unwrap();
        assert_eq!(sld.matrix.norm(), 0.0);
    }

    #[test]
    fn sld_closed_form_degenerate_block_rejected() {
        let state = EvolvedNoonState {
            n: 2,
            phi: 0.0,
            params: ChannelParams::identity(0.0),
            a_head: 0.0,
            a_tail: 0.0,
            c: 0.0,
        };
        assert!(matches!(sld_closed_form(&state), Err(Error::DegenerateState { .. })));
    }

    #[test]
    fn sld_routes_agree_dephased_three_qubit() {
        let params = ChannelParams { f: 0.0, h: 1.0, g: 0.8, t: 0.0 };
        let state = evolve(3, 0.3, params).unwrap();
        let closed = sld_closed_form(&state).unwrap();
        let rho = state.dense_density().unwrap();
        let drho = state.dense_phase_derivative().unwrap();
        let oracle = sld_oracle(&rho, &drho, SLD_EIGEN_CUTOFF).unwrap();
        assert!((&closed.matrix - &oracle.matrix).norm() < 1e-8);
    }

    #[test]
    fn sld_routes_agree_on_dense_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let models = reference_models();
        for _ in 0..20 {
            let model = models[rng.random_range(0..models.len())];
            let n = rng.random_range(1..=4);
            let t = 0.05 + 2.0 * rng.random::<f64>();
            let phi = rng.random::<f64>();
            let state = evolve(n, phi, model.eval_params(t).unwrap()).unwrap();
            let rho = state.dense_density().unwrap();
            let drho = state.dense_phase_derivative().unwrap();
            let oracle = sld_oracle(&rho, &drho, SLD_EIGEN_CUTOFF).unwrap();
            let closed = sld_closed_form(&state).unwrap();
            let dim = rho.dim();
            // The two constructions may differ on the kernel of rho; the
            // coherence block is where the information lives.
            let diff_corner = (oracle.matrix[(0, dim - 1)] - closed.matrix[(0, dim - 1)]).norm();
            assert!(diff_corner < 1e-8, "corner SLD mismatch {diff_corner}");
            assert!(sld_residual(&rho, &drho, &oracle) < 1e-8);
            assert!(sld_residual(&rho, &drho, &closed) < 1e-8);
        }
    }

    #[test]
    fn qfi_heisenberg_limit_at_start() {
        for model in reference_models() {
            for n in [1usize, 2, 4, 8] {
                let state = evolve(n, 0.7, model.eval_params(0.0).unwrap()).unwrap();
                let result = qfi(&state, QfiMethod::ClosedForm).unwrap();
                assert_abs_diff_eq!(result.f, (n * n) as f64, epsilon = 1e-9);
                assert_abs_diff_eq!(result.eta, 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn qfi_dephasing_examples() {
        // g = 1/2 at n = 2: F = 4 * (1/2)^4 / 1.
        let params = ChannelParams { f: 0.0, h: 1.0, g: 0.5, t: 0.0 };
        let state = evolve(2, 0.0, params).unwrap();
        let closed = qfi(&state, QfiMethod::ClosedForm).unwrap();
        assert_relative_eq!(closed.f, 0.25, max_relative = 1e-12);
        let oracle = qfi(&state, QfiMethod::Oracle).unwrap();
        assert_abs_diff_eq!(closed.f, oracle.f, epsilon = 1e-10);
    }

    #[test]
    fn qfi_dephasing_analytic_law() {
        let gamma1 = 1.0;
        let model = ChannelModel::Dephasing { gamma1 };
        for n in [2usize, 4, 8] {
            for k in 0..50 {
                let t = 0.1 * k as f64;
                let state = evolve(n, 0.2, model.eval_params(t).unwrap()).unwrap();
                let f = qfi(&state, QfiMethod::ClosedForm).unwrap().f;
                let expected = (n * n) as f64 * (-2.0 * n as f64 * gamma1 * t).exp();
                assert_abs_diff_eq!(f, expected, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn qfi_vanishes_at_relaxation_fixed_point() {
        let params = ChannelParams { f: 1.0, h: 0.0, g: 0.0, t: 0.0 };
        let state = evolve(4, 0.0, params).unwrap();
        assert_eq!(qfi(&state, QfiMethod::ClosedForm).unwrap().f, 0.0);
    }

    #[test]
    fn qfi_degenerate_flag() {
        let state = EvolvedNoonState {
            n: 2,
            phi: 0.0,
            params: ChannelParams::identity(0.0),
            a_head: 0.0,
            a_tail: 0.0,
            c: 0.0,
        };
        let result = qfi(&state, QfiMethod::ClosedForm).unwrap();
        assert!(result.degenerate);
        assert_eq!(result.f, 0.0);
    }

    #[test]
    fn qfi_phase_covariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(27);
        for model in reference_models() {
            let t = 0.8;
            let state1 =
                evolve(3, rng.random::<f64>() * std::f64::consts::TAU, model.eval_params(t).unwrap()).unwrap();
            let state2 =
                evolve(3, rng.random::<f64>() * std::f64::consts::TAU, model.eval_params(t).unwrap()).unwrap();
            let f1 = qfi(&state1, QfiMethod::ClosedForm).unwrap().f;
            let f2 = qfi(&state2, QfiMethod::ClosedForm).unwrap().f;
            assert!((f1 - f2).abs() <= 1e-10);
            let f1o = qfi(&state1, QfiMethod::Oracle).unwrap().f;
            let f2o = qfi(&state2, QfiMethod::Oracle).unwrap().f;
            assert!((f1o - f2o).abs() <= 1e-9);
        }
    }

    #[test]
    fn qfi_bounded_by_heisenberg_on_grid() {
        for model in reference_models() {
            for n in [2usize, 5] {
                let mut t = 0.0;
                while t <= 10.0 {
                    let state = evolve(n, 0.1, model.eval_params(t).unwrap()).unwrap();
                    let result = qfi(&state, QfiMethod::ClosedForm).unwrap();
                    assert!(result.f <= (n * n) as f64 + 1e-9);
                    assert!(result.f >= 0.0);
                    assert!(result.eta <= 1.0 + 1e-12);
                    t += 0.05;
                }
            }
        }
    }

    #[test]
    fn qcrb_values() {
        assert_eq!(qcrb(64.0, 1), PhaseUncertainty::Bounded(0.125));
        assert_eq!(qcrb(64.0, 4), PhaseUncertainty::Bounded(0.0625));
        assert!(qcrb(0.0, 1).is_unbounded());
        assert_eq!(qcrb(0.0, 1).value(), f64::INFINITY);
    }

    #[test]
    fn reference_bound_values() {
        assert_eq!(reference_bounds(1), (1.0, 1.0));
        assert_eq!(reference_bounds(4), (0.5, 0.25));
        let (shot, heis) = reference_bounds(8);
        assert_relative_eq!(shot, 0.35355339059327373, max_relative = 1e-15);
        assert_eq!(heis, 0.125);
    }

    #[test]
    fn flow_fd_matches_analytic_dephasing_derivative() {
        let model = ChannelModel::Dephasing { gamma1: 1.0 };
        let sample = qfi_flow_fd(&model, 2, 0.0, 0.5, FD_TIME_STEP).unwrap();
        // d/dt n^2 e^{-2 n g t} = -2 n g F: at n=2, t=0.5: -16 e^{-2}.
        let expected = -16.0 * (-2.0f64).exp();
        assert_abs_diff_eq!(sample.flow, expected, epsilon = 1e-6);
    }

    #[test]
    fn flow_fd_one_sided_at_start() {
        let model = ChannelModel::Dephasing { gamma1: 1.0 };
        let sample = qfi_flow_fd(&model, 2, 0.0, 0.0, FD_TIME_STEP).unwrap();
        assert!(sample.flow < 0.0);
    }

    #[test]
    fn flow_positive_for_strong_coupling() {
        let model = ChannelModel::LorentzianReservoir { gamma0: 1.0, lambda_w: 0.1, omega0: 0.0 };
        let mut found_positive = false;
        let mut t = 0.05;
        while t <= 50.0 {
            let sample = qfi_flow_fd(&model, 2, 0.0, t, FD_TIME_STEP).unwrap();
            if sample.flow > FLOW_WITNESS_TOLERANCE {
                found_positive = true;
                break;
            }
            t += 0.05;
        }
        assert!(found_positive, "expected QFI backflow in the strong-coupling regime");
    }

    /// Fast-driven amplitude damping pumps information back repeatedly:
    /// the flow turns positive at some instants even though g decays
    /// monotonically.
    #[test]
    fn flow_positive_for_fast_driven_amplitude_damping() {
        let model = ChannelModel::GeneralizedAmplitudeDamping { delta: 1.0, omega: 10.0 };
        let mut found = false;
        for k in 0..=2000 {
            let t = 10.0 * k as f64 / 2000.0;
            if qfi_flow_fd(&model, 8, 0.0, t, FD_TIME_STEP).unwrap().flow > 1e-6 {
                found = true;
                break;
            }
        }
        assert!(found, "expected positive QFI flow under fast driving");
    }

    #[test]
    fn flow_structural_agrees_with_fd() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let models = [
            ChannelModel::Dephasing { gamma1: 1.0 },
            ChannelModel::SpontaneousEmission { gamma1: 1.0, gamma2: 1.0 },
            ChannelModel::LorentzianReservoir { gamma0: 1.0, lambda_w: 3.0, omega0: 0.0 },
            ChannelModel::GeneralizedAmplitudeDamping { delta: 1.0, omega: 10.0 },
        ];
        for _ in 0..20 {
            let model = models[rng.random_range(0..models.len())];
            let n = if rng.random::<bool>() { 2 } else { 4 };
            let t = 0.1 + 2.4 * rng.random::<f64>();
            let phi = rng.random::<f64>();
            let fd = qfi_flow_fd(&model, n, phi, t, FD_TIME_STEP).unwrap();
            let st = qfi_flow_structural(&model, n, phi, t, FD_TIME_STEP, FD_PHASE_STEP).unwrap();
            let tol = 1e-6f64.max(1e-4 * fd.flow.abs());
            assert!(
                (fd.flow - st.flow).abs() <= tol,
                "{model:?} n={n} t={t}: fd {} vs structural {}",
                fd.flow,
                st.flow
            );
        }
    }

    #[test]
    fn flow_structural_zero_without_coherence() {
        // Dephasing after a long time: g is essentially zero, so is L.
        let model = ChannelModel::Dephasing { gamma1: 1.0 };
        let sample = qfi_flow_structural(&model, 2, 0.0, 40.0, 1e-5, 1e-5).unwrap();
        assert!(sample.flow.abs() < 1e-12);
    }

    #[test]
    fn flow_structural_dephasing_value() {
        let model = ChannelModel::Dephasing { gamma1: 1.0 };
        let sample = qfi_flow_structural(&model, 2, 0.0, 0.5, 1e-5, 1e-5).unwrap();
        assert_abs_diff_eq!(sample.flow, -16.0 * (-2.0f64).exp(), epsilon = 1e-6);
    }

    #[test]
    fn subflows_are_nonpositive_and_sum_to_flow() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let models = [
            ChannelModel::Dephasing { gamma1: 1.0 },
            ChannelModel::SpontaneousEmission { gamma1: 1.0, gamma2: 1.0 },
            ChannelModel::Depolarization { gamma1: 1.0, gamma2: 1.0 },
            ChannelModel::LorentzianReservoir { gamma0: 1.0, lambda_w: 3.0, omega0: 0.0 },
        ];
        for _ in 0..20 {
            let model = models[rng.random_range(0..models.len())];
            let n = rng.random_range(1..=4);
            let t = 0.1 + 2.0 * rng.random::<f64>();
            let sample = qfi_subflows(&model, n, 0.3, t).unwrap();
            let mut recomputed = 0.0;
            for &(rate, j) in &sample.subflows {
                assert!(j <= 1e-9, "{model:?}: subflow {j} positive");
                recomputed += rate * j;
            }
            assert_abs_diff_eq!(sample.flow, recomputed, epsilon = 1e-12);

            let fd = qfi_flow_fd(&model, n, 0.3, t, FD_TIME_STEP).unwrap();
            let tol = 1e-6f64.max(1e-4 * fd.flow.abs());
            assert!(
                (sample.flow - fd.flow).abs() <= tol,
                "{model:?} n={n} t={t}: subflow sum {} vs fd {}",
                sample.flow,
                fd.flow
            );
        }
    }

    #[test]
    fn subflow_sign_shows_backflow() {
        let model = ChannelModel::LorentzianReservoir { gamma0: 1.0, lambda_w: 0.1, omega0: 0.0 };
        // Pick a time where the decay rate is negative and not near a pole.
        let mut t = 9.0;
        let chosen = loop {
            let rate = model.decay_rate(t).unwrap();
            if !rate.near_pole && rate.gamma < -0.01 {
                break t;
            }
            t += 0.1;
            assert!(t < 50.0);
        };
        let sample = qfi_subflows(&model, 2, 0.0, chosen).unwrap();
        assert_eq!(sample.subflows.len(), 1);
        let (rate, j) = sample.subflows[0];
        assert!(rate < 0.0);
        assert!(j <= 1e-9);
        assert!(sample.flow >= 0.0, "gamma < 0 and J <= 0 force I >= 0");
    }

    #[test]
    fn subflows_refuse_rate_poles() {
        let (gamma0, lambda) = (1.0, 0.1);
        let model =
            ChannelModel::LorentzianReservoir { gamma0, lambda_w: lambda, omega0: 0.0 };
        let dm = (2.0 * gamma0 * lambda - lambda * lambda).sqrt();
        let den = |t: f64| dm * (dm * t / 2.0).cos() + lambda * (dm * t / 2.0).sin();
        let (mut lo, mut hi) = (7.0, 9.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if den(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t_star = 0.5 * (lo + hi);
        assert!(matches!(
            qfi_subflows(&model, 2, 0.0, t_star),
            Err(Error::PoleAt { .. })
        ));
    }

    #[test]
    fn subflows_refuse_gad() {
        let model = ChannelModel::GeneralizedAmplitudeDamping { delta: 1.0, omega: 0.1 };
        assert!(matches!(
            qfi_subflows(&model, 2, 0.0, 1.0),
            Err(Error::UnsupportedDecomposition(_))
        ));
    }

    /// Constant nonnegative rates and the weak-coupling reservoir never
    /// push information back: the flow stays nonpositive on the full grid.
    #[test]
    fn markovian_sign_law() {
        let markovian = [
            ChannelModel::Dephasing { gamma1: 1.0 },
            ChannelModel::Depolarization { gamma1: 1.0, gamma2: 1.0 },
            ChannelModel::SpontaneousEmission { gamma1: 1.0, gamma2: 1.0 },
            ChannelModel::LorentzianReservoir { gamma0: 1.0, lambda_w: 3.0, omega0: 0.0 },
        ];
        for model in markovian {
            for k in 0..=2000 {
                let t = 10.0 * k as f64 / 2000.0;
                let flow = qfi_flow_fd(&model, 4, 0.0, t, FD_TIME_STEP).unwrap().flow;
                assert!(flow <= 1e-9, "{model:?}: positive flow {flow:.3e} at t={t}");
            }
        }
    }

    #[test]
    fn oracle_equivalence_across_families() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for model in reference_models() {
            for _ in 0..20 {
                let n = rng.random_range(1..=6);
                let t = 5.0 * rng.random::<f64>();
                let phi = rng.random::<f64>();
                let state = evolve(n, phi, model.eval_params(t).unwrap()).unwrap();
                let closed = qfi(&state, QfiMethod::ClosedForm).unwrap().f;
                let oracle = qfi(&state, QfiMethod::Oracle).unwrap().f;
                let rel = (closed - oracle).abs() / closed.max(1.0);
                assert!(rel <= 1e-8, "{model:?} n={n} t={t}: {closed} vs {oracle}");
            }
        }
    }
}
