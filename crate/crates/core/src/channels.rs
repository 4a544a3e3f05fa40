//! Single-qubit decoherence channel families and their physicality checks.
//!
//! Every channel is reduced to the Pauli-transfer triple `(f, h, g)` acting as
//!
//! ```text
//! 1       ->  1 + f(t) sigma_z
//! sigma_z ->  h(t) sigma_z
//! sigma_x ± i sigma_y  ->  g(t) (sigma_x ± i sigma_y)
//! ```
//!
//! so that populations relax toward a `sigma_z` drift `f`, the longitudinal
//! component contracts by `h`, and coherences contract by `g`. Complete
//! positivity of the instantaneous map is checked through the Choi matrix
//! rather than assumed from the parameterization.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, CMatrix, C64, ONE};

/// Default threshold for flagging samples near a pole of the Lorentzian
/// decay rate, measured in units of `|d|` (the oscillation rate).
pub const DEFAULT_POLE_THRESHOLD: f64 = 1e-8;

/// One of the five implemented decoherence families.
///
/// Rates are in inverse time units of the dimensionless simulation clock.
/// The constraint `gamma1 >= gamma2 / 2` (complete positivity for the
/// two-rate families) is deliberately *not* enforced at construction:
/// violating models are representable so that the Choi test can witness the
/// physicality breakdown. Call [`ChannelModel::validate`] for the hard
/// sign constraints and [`ChannelModel::cp_constraint_satisfied`] for the
/// soft one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelModel {
    /// Pure dephasing: coherence decays at `gamma1`, populations frozen.
    Dephasing { gamma1: f64 },
    /// Isotropic depolarization with independent longitudinal and
    /// transverse rates as printed in the transfer-triple table.
    Depolarization { gamma1: f64, gamma2: f64 },
    /// Relaxation toward the ground state at `gamma2` with coherence decay
    /// at `gamma1`. Note the naming: `1/gamma2` is the longitudinal decay
    /// time here, the reverse of the common T1/T2 convention.
    SpontaneousEmission { gamma1: f64, gamma2: f64 },
    /// Damped reservoir with a Lorentzian spectral density of width
    /// `lambda_w` centered on `omega0` and coupling `gamma0`. `omega0`
    /// enters only the spectral density, never the dynamics.
    LorentzianReservoir { gamma0: f64, lambda_w: f64, omega0: f64 },
    /// Amplitude damping toward an oscillating stationary state: the
    /// `sigma_z` drift swings as `-cos(omega t)` while populations and
    /// coherences damp at `delta` and `delta / 2`.
    GeneralizedAmplitudeDamping { delta: f64, omega: f64 },
}

/// Pauli-transfer triple at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub f: f64,
    pub h: f64,
    pub g: f64,
    pub t: f64,
}

impl ChannelParams {
    /// The identity map, attained by every family at t = 0.
    pub fn identity(t: f64) -> Self {
        ChannelParams { f: 0.0, h: 1.0, g: 1.0, t }
    }
}

/// One sample of the Lorentzian reservoir's time-dependent decay rate.
/// `gamma` may be negative in the strong-coupling regime; samples where the
/// rate's denominator nearly vanishes are flagged, never interpolated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayRateSample {
    pub t: f64,
    pub gamma: f64,
    pub near_pole: bool,
}

/// Choi matrix of a transfer-triple map, 4x4 Hermitian with trace 2.
#[derive(Debug, Clone)]
pub struct ChoiMatrix {
    pub matrix: CMatrix,
    pub params: ChannelParams,
}

impl ChoiMatrix {
    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.matrix)[0]
    }
}

impl ChannelModel {
    /// Check the hard sign constraints: all rates nonnegative, and a
    /// strictly positive spectral width for the Lorentzian reservoir.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidModel(msg));
        match *self {
            ChannelModel::Dephasing { gamma1 } => {
                if gamma1 < 0.0 {
                    return bad(format!("gamma1 must be >= 0, got {gamma1}"));
                }
            }
            ChannelModel::Depolarization { gamma1, gamma2 }
            | ChannelModel::SpontaneousEmission { gamma1, gamma2 } => {
                if gamma1 < 0.0 {
                    return bad(format!("gamma1 must be >= 0, got {gamma1}"));
                }
                if gamma2 < 0.0 {
                    return bad(format!("gamma2 must be >= 0, got {gamma2}"));
                }
            }
            ChannelModel::LorentzianReservoir { gamma0, lambda_w, .. } => {
                if gamma0 < 0.0 {
                    return bad(format!("gamma0 must be >= 0, got {gamma0}"));
                }
                if lambda_w <= 0.0 {
                    return bad(format!("lambda must be > 0, got {lambda_w}"));
                }
            }
            ChannelModel::GeneralizedAmplitudeDamping { delta, .. } => {
                if delta < 0.0 {
                    return bad(format!("delta must be >= 0, got {delta}"));
                }
            }
        }
        Ok(())
    }

    /// Whether the two-rate families satisfy `gamma1 >= gamma2 / 2`, the
    /// condition under which their instantaneous maps stay completely
    /// positive for all times. Families without the constraint return true.
    pub fn cp_constraint_satisfied(&self) -> bool {
        match *self {
            ChannelModel::Depolarization { gamma1, gamma2 }
            | ChannelModel::SpontaneousEmission { gamma1, gamma2 } => gamma1 >= gamma2 / 2.0,
            _ => true,
        }
    }

    /// Evaluate the transfer triple at time `t >= 0`.
    pub fn eval_params(&self, t: f64) -> Result<ChannelParams> {
        if t < 0.0 {
            return Err(Error::NegativeTime(t));
        }
        let params = match *self {
            ChannelModel::Dephasing { gamma1 } => ChannelParams {
                f: 0.0,
                h: 1.0,
                g: (-gamma1 * t).exp(),
                t,
            },
            ChannelModel::Depolarization { gamma1, gamma2 } => ChannelParams {
                f: 0.0,
                h: (-2.0 * gamma2 * t / 3.0).exp(),
                g: (-2.0 * gamma1 * t / 3.0).exp(),
                t,
            },
            ChannelModel::SpontaneousEmission { gamma1, gamma2 } => {
                let h = (-gamma2 * t).exp();
                ChannelParams { f: 1.0 - h, h, g: (-gamma1 * t).exp(), t }
            }
            ChannelModel::LorentzianReservoir { gamma0, lambda_w, .. } => {
                let h = lorentzian_h(gamma0, lambda_w, t);
                ChannelParams { f: 1.0 - h, h, g: h.sqrt(), t }
            }
            ChannelModel::GeneralizedAmplitudeDamping { delta, omega } => {
                let h = (-delta * t).exp();
                ChannelParams {
                    f: -(omega * t).cos() * (1.0 - h),
                    h,
                    g: (-delta * t / 2.0).exp(),
                    t,
                }
            }
        };
        Ok(params)
    }

    /// Time-dependent decay rate of the Lorentzian reservoir, with the
    /// default pole threshold. Other families have no time-dependent rate.
    pub fn decay_rate(&self, t: f64) -> Result<DecayRateSample> {
        self.decay_rate_with_threshold(t, DEFAULT_POLE_THRESHOLD)
    }

    /// Same as [`decay_rate`](Self::decay_rate) with an explicit pole
    /// threshold (in units of `|d|`).
    pub fn decay_rate_with_threshold(&self, t: f64, threshold: f64) -> Result<DecayRateSample> {
        if t < 0.0 {
            return Err(Error::NegativeTime(t));
        }
        match *self {
            ChannelModel::LorentzianReservoir { gamma0, lambda_w, .. } => {
                Ok(lorentzian_rate(gamma0, lambda_w, t, threshold))
            }
            _ => Err(Error::UnsupportedDecomposition(
                "decay_rate is defined for the Lorentzian reservoir only",
            )),
        }
    }

    /// Lorentzian spectral density `J(omega)` of the reservoir coupling.
    /// Reporting only; it feeds no dynamical quantity.
    pub fn spectral_density(&self, omega: f64) -> Result<f64> {
        match *self {
            ChannelModel::LorentzianReservoir { gamma0, lambda_w, omega0 } => {
                let detuning = omega0 - omega;
                Ok(gamma0 * lambda_w * lambda_w
                    / (std::f64::consts::PI * (detuning * detuning + lambda_w * lambda_w)))
            }
            _ => Err(Error::UnsupportedDecomposition(
                "spectral_density is defined for the Lorentzian reservoir only",
            )),
        }
    }
}

/// sqrt(h) of the Lorentzian reservoir, i.e. the survival amplitude
/// `e^{-lambda t / 2} (cosh(dt/2) + (lambda/d) sinh(dt/2))` with
/// `d = sqrt(lambda^2 - 2 gamma0 lambda)`, continued through imaginary `d`
/// by the real trigonometric branch.
fn lorentzian_amplitude(gamma0: f64, lambda: f64, t: f64) -> f64 {
    let d2 = lambda * lambda - 2.0 * gamma0 * lambda;
    if d2 > f64::MIN_POSITIVE {
        // Weak coupling. Factor e^{-lambda t/2} into the hyperbolics so no
        // intermediate overflows for large t (both exponents stay <= 0),
        // and route the constant part through exp_m1 so t = 0 gives
        // exactly 1 for every parameter value:
        //   amp = e^{-(l-d)t/2} (1 + (1 - l/d)/2 (e^{-dt} - 1)).
        let d = d2.sqrt();
        (-(lambda - d) * t / 2.0).exp()
            * (1.0 + 0.5 * (1.0 - lambda / d) * (-d * t).exp_m1())
    } else if d2 < -f64::MIN_POSITIVE {
        // Strong coupling: d imaginary, oscillatory branch.
        let dm = (-d2).sqrt();
        let theta = dm * t / 2.0;
        (-lambda * t / 2.0).exp() * (theta.cos() + (lambda / dm) * theta.sin())
    } else {
        // d -> 0 limit (lambda = 2 gamma0).
        (-lambda * t / 2.0).exp() * (1.0 + lambda * t / 2.0)
    }
}

fn lorentzian_h(gamma0: f64, lambda: f64, t: f64) -> f64 {
    let amp = lorentzian_amplitude(gamma0, lambda, t);
    amp * amp
}

pub(crate) fn lorentzian_rate(gamma0: f64, lambda: f64, t: f64, threshold: f64) -> DecayRateSample {
    let d2 = lambda * lambda - 2.0 * gamma0 * lambda;
    if d2 > f64::MIN_POSITIVE {
        // No poles: denominator d cosh + lambda sinh > 0 for t >= 0.
        let d = d2.sqrt();
        let e = (-d * t).exp();
        let num = 2.0 * gamma0 * lambda * (1.0 - e);
        let den = d * (1.0 + e) + lambda * (1.0 - e);
        DecayRateSample { t, gamma: num / den, near_pole: false }
    } else if d2 < -f64::MIN_POSITIVE {
        let dm = (-d2).sqrt();
        let theta = dm * t / 2.0;
        let num = 2.0 * gamma0 * lambda * theta.sin();
        let den = dm * theta.cos() + lambda * theta.sin();
        DecayRateSample { t, gamma: num / den, near_pole: den.abs() < threshold * dm }
    } else {
        let den = 1.0 + lambda * t / 2.0;
        DecayRateSample { t, gamma: gamma0 * lambda * t / den, near_pole: false }
    }
}

/// Apply the transfer-triple map to an arbitrary 2x2 operator by linearity
/// over the matrix-unit basis.
pub fn apply_map(params: &ChannelParams, m: &CMatrix) -> CMatrix {
    assert_eq!(m.nrows(), 2, "apply_map acts on single-qubit operators");
    assert_eq!(m.ncols(), 2, "apply_map acts on single-qubit operators");
    let &ChannelParams { f, h, g, .. } = params;
    // Images of |0><0|, |1><1| are diagonal; coherences scale by g.
    let d00 = (
        C64::new(0.5 * (1.0 + f + h), 0.0),
        C64::new(0.5 * (1.0 - f - h), 0.0),
    );
    let d11 = (
        C64::new(0.5 * (1.0 + f - h), 0.0),
        C64::new(0.5 * (1.0 - f + h), 0.0),
    );
    let gg = C64::new(g, 0.0);
    let mut out = CMatrix::zeros(2, 2);
    out[(0, 0)] = m[(0, 0)] * d00.0 + m[(1, 1)] * d11.0;
    out[(1, 1)] = m[(0, 0)] * d00.1 + m[(1, 1)] * d11.1;
    out[(0, 1)] = m[(0, 1)] * gg;
    out[(1, 0)] = m[(1, 0)] * gg;
    out
}

/// Choi matrix `C = sum_ij Phi(|i><j|) (x) |i><j|` of the map.
pub fn choi(params: &ChannelParams) -> ChoiMatrix {
    let mut c = CMatrix::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            let mut unit = CMatrix::zeros(2, 2);
            unit[(i, j)] = ONE;
            let image = apply_map(params, &unit);
            let marker = unit;
            c += image.kronecker(&marker);
        }
    }
    ChoiMatrix { matrix: c, params: *params }
}

/// Complete-positivity test: true iff the smallest Choi eigenvalue is at
/// least `-tol`. The eigenvalue is always returned for reporting.
pub fn is_completely_positive(params: &ChannelParams, tol: f64) -> (bool, f64) {
    assert!(tol > 0.0, "tolerance must be positive");
    let min_eig = choi(params).min_eigenvalue();
    (min_eig >= -tol, min_eig)
}
