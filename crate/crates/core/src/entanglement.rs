//! Wootters concurrence for the two-photon probe and the entanglement-based
//! non-Markovianity measure.
//!
//! The measure accumulates `Delta E + total variation` of the concurrence
//! over a time window: it vanishes exactly when entanglement decays
//! monotonically (CP-divisible evolution) and grows with every revival.
//! A second, independent witness extracts the intervals of positive QFI
//! flow from a flow series; the two classifiers must agree on every
//! shipped scenario.

use crate::channels::ChannelModel;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, hermitian_eigenvalues, CMatrix, C64};
use crate::metrology::{FlowSample, FLOW_WITNESS_TOLERANCE};
use crate::noon::{evolve, DensityMatrix, EvolvedNoonState};

/// Concurrence sampled over a time grid.
#[derive(Debug, Clone)]
pub struct ConcurrenceSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

/// Entanglement-based non-Markovianity measure over a window:
/// `value = delta_e + total_variation`, nonnegative, zero iff the series is
/// nonincreasing.
#[derive(Debug, Clone, Copy)]
pub struct NmMeasure {
    pub delta_e: f64,
    pub total_variation: f64,
    pub value: f64,
}

/// Wootters concurrence of an arbitrary two-qubit density matrix:
/// `C = max(0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4))` with the
/// eigenvalues of `rho (sy x sy) rho* (sy x sy)` taken in decreasing order.
///
/// Factoring `rho = L L^+` turns the roots into the singular values of the
/// complex symmetric matrix `S = L^T (sy x sy) L`, which are read off a
/// Hermitian block embedding. Unlike taking square roots of the product's
/// eigenvalues, this keeps the small roots accurate to machine epsilon
/// instead of its square root, so near-pure states do not lose half their
/// digits.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: rho.dim() });
    }
    let (values, vectors) = hermitian_eigen(rho.matrix());
    let mut factor = vectors;
    for col in 0..4 {
        let scale = C64::new(values[col].max(0.0).sqrt(), 0.0);
        for row in 0..4 {
            factor[(row, col)] *= scale;
        }
    }
    let s = factor.transpose() * spin_flip_operator() * factor;

    // Singular values of S = positive eigenvalues of [[0, S], [S^+, 0]].
    let mut embedding = CMatrix::zeros(8, 8);
    embedding.view_mut((0, 4), (4, 4)).copy_from(&s);
    embedding.view_mut((4, 0), (4, 4)).copy_from(&s.adjoint());
    let eigs = hermitian_eigenvalues(&embedding);
    let roots = [eigs[7], eigs[6], eigs[5], eigs[4].max(0.0)];
    Ok((roots[0] - roots[1] - roots[2] - roots[3]).max(0.0))
}

/// `sigma_y (x) sigma_y`, real anti-diagonal.
fn spin_flip_operator() -> CMatrix {
    let mut y = CMatrix::zeros(4, 4);
    y[(0, 3)] = C64::new(-1.0, 0.0);
    y[(1, 2)] = C64::new(1.0, 0.0);
    y[(2, 1)] = C64::new(1.0, 0.0);
    y[(3, 0)] = C64::new(-1.0, 0.0);
    y
}

/// Closed-form concurrence of the evolved two-photon N00N state:
/// `C = 2 max(0, c - sqrt(p01 p10))`.
pub fn concurrence_noon(state: &EvolvedNoonState) -> Result<f64> {
    if state.n != 2 {
        return Err(Error::Domain(format!(
            "closed-form concurrence applies to two photons, got n = {}",
            state.n
        )));
    }
    let p01 = state.diagonal_weight(&[0, 1])?;
    let p10 = state.diagonal_weight(&[1, 0])?;
    Ok(2.0 * (state.c - (p01 * p10).sqrt()).max(0.0))
}

/// Evaluate the measure on a sampled series (piecewise-linear realization
/// of the integral of |dE/dt|).
pub fn nm_entanglement_measure(series: &ConcurrenceSeries) -> Result<NmMeasure> {
    if series.times.len() < 2 {
        return Err(Error::InvalidGrid("need at least two samples".into()));
    }
    if series.times.len() != series.values.len() {
        return Err(Error::InvalidGrid("times and values differ in length".into()));
    }
    for (k, window) in series.times.windows(2).enumerate() {
        if window[1] <= window[0] {
            return Err(Error::NonMonotonicSeries(k + 1));
        }
    }
    let delta_e = series.values.last().unwrap() - series.values.first().unwrap();
    let total_variation: f64 =
        series.values.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    Ok(NmMeasure { delta_e, total_variation, value: delta_e + total_variation })
}

/// Maximal contiguous grid intervals where the QFI flow exceeds the
/// witness tolerance; empty for Markovian evolutions.
pub fn nm_qfi_witness(flow_series: &[FlowSample]) -> Result<Vec<(f64, f64)>> {
    for (k, window) in flow_series.windows(2).enumerate() {
        if window[1].t <= window[0].t {
            return Err(Error::NonMonotonicSeries(k + 1));
        }
    }
    let mut intervals = Vec::new();
    let mut open: Option<(f64, f64)> = None;
    for sample in flow_series {
        if sample.flow > FLOW_WITNESS_TOLERANCE {
            open = match open {
                None => Some((sample.t, sample.t)),
                Some((start, _)) => Some((start, sample.t)),
            };
        } else if let Some(interval) = open.take() {
            intervals.push(interval);
        }
    }
    if let Some(interval) = open {
        intervals.push(interval);
    }
    Ok(intervals)
}

/// Concurrence of the two-photon probe along a time grid.
pub fn concurrence_series(
    model: &ChannelModel,
    phi: f64,
    times: &[f64],
) -> Result<ConcurrenceSeries> {
    let mut values = Vec::with_capacity(times.len());
    for &t in times {
        let state = evolve(2, phi, model.eval_params(t)?)?;
        values.push(concurrence_noon(&state)?);
    }
    Ok(ConcurrenceSeries { times: times.to_vec(), values })
}

/// Uniform grid on `[0, t_max]` at `base_step`, refined tenfold around the
/// intervals where the concurrence reaches or leaves zero (the kinks that
/// dominate the total-variation error of a piecewise-linear realization).
pub fn concurrence_series_refined(
    model: &ChannelModel,
    phi: f64,
    t_max: f64,
    base_step: f64,
) -> Result<ConcurrenceSeries> {
    if base_step.is_nan() || base_step <= 0.0 || t_max.is_nan() || t_max <= 0.0 {
        return Err(Error::InvalidGrid("t_max and base_step must be positive".into()));
    }
    let count = (t_max / base_step).round() as usize;
    let base: Vec<f64> = (0..=count).map(|k| t_max * k as f64 / count as f64).collect();
    let coarse = concurrence_series(model, phi, &base)?;

    let eps = 1e-12;
    let mut times = base.clone();
    for k in 0..coarse.values.len() - 1 {
        let zero_now = coarse.values[k] <= eps;
        let zero_next = coarse.values[k + 1] <= eps;
        if zero_now != zero_next {
            let (lo, hi) = (base[k], base[k + 1]);
            let fine_step = (hi - lo) / 10.0;
            for j in 1..10 {
                times.push(lo + fine_step * j as f64);
            }
        }
    }
    times.sort_by(f64::total_cmp);
    times.dedup();
    concurrence_series(model, phi, &times)
}
