//! N00N probe states evolved through independent single-qubit channels.
//!
//! The probe is the n-qubit GHZ-type state `(|0..0> + e^{i n phi} |1..1>)/sqrt(2)`
//! with the phase imprinted statically on the tail branch. Sending every
//! qubit through the same transfer-triple channel keeps the state in a
//! sparse family: a full diagonal generated by `(f, h)` plus a single pair
//! of corner coherences of magnitude `g^n / 2`. The compact representation
//! is authoritative; the dense matrix exists as an oracle for n <= 12.

use crate::channels::ChannelParams;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, hermiticity_residual, trace, CMatrix, C64};

/// Dense matrices are refused above this qubit count (16 M complex entries).
pub const MAX_DENSE_QUBITS: usize = 12;

/// Compact exact representation of the evolved N00N state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolvedNoonState {
    /// Photon / qubit count.
    pub n: usize,
    /// Interferometric phase in radians; the corner coherence carries
    /// `e^{i n phi}`.
    pub phi: f64,
    /// Transfer-triple snapshot that generated this state.
    pub params: ChannelParams,
    /// `<0..0| rho |0..0>`.
    pub a_head: f64,
    /// `<1..1| rho |1..1>`.
    pub a_tail: f64,
    /// Corner coherence magnitude `g^n / 2`.
    pub c: f64,
}

/// Dense complex Hermitian density matrix; the oracle representation.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validate Hermiticity and unit trace before wrapping. Positivity is
    /// not checked here (it is asserted where tests need it); use
    /// [`min_eigenvalue`](Self::min_eigenvalue) to inspect it.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                got: matrix.ncols(),
            });
        }
        let residual = hermiticity_residual(&matrix);
        if residual > 1e-10 {
            return Err(Error::NotHermitian { residual });
        }
        let tr = trace(&matrix);
        if (tr.re - 1.0).abs() > 1e-8 || tr.im.abs() > 1e-10 {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace is {} + {}i, expected 1",
                tr.re, tr.im
            )));
        }
        Ok(DensityMatrix { matrix })
    }

    /// Wrap a matrix that is Hermitian and normalized by construction.
    pub fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        DensityMatrix { matrix }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> C64 {
        trace(&self.matrix)
    }

    pub fn hermiticity_residual(&self) -> f64 {
        hermiticity_residual(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.matrix)[0]
    }
}

/// Evolve the pure N00N state through `params` on every qubit.
pub fn evolve(n: usize, phi: f64, params: ChannelParams) -> Result<EvolvedNoonState> {
    if n == 0 {
        return Err(Error::ZeroPhotons);
    }
    let ChannelParams { f, h, g, .. } = params;
    let half = |x: f64| 0.5 * (1.0 + x);
    let a_head = 0.5 * (half(f + h).powi(n as i32) + half(f - h).powi(n as i32));
    let a_tail = 0.5 * (half(-(f + h)).powi(n as i32) + half(-(f - h)).powi(n as i32));
    let c = 0.5 * g.powi(n as i32);
    Ok(EvolvedNoonState { n, phi, params, a_head, a_tail, c })
}

impl EvolvedNoonState {
    /// Trace of the corner coherence block, `a_head + a_tail`.
    pub fn coherence_block_trace(&self) -> f64 {
        self.a_head + self.a_tail
    }

    /// Probability of measuring the computational basis state `bits`
    /// (0 for the sigma_z = +1 branch). Depends only on the Hamming weight.
    pub fn diagonal_weight(&self, bits: &[u8]) -> Result<f64> {
        if bits.len() != self.n {
            return Err(Error::BitstringLength { expected: self.n, got: bits.len() });
        }
        let ChannelParams { f, h, .. } = self.params;
        let mut p_plus = 1.0;
        let mut p_minus = 1.0;
        for (pos, &b) in bits.iter().enumerate() {
            let sign = match b {
                0 => 1.0,
                1 => -1.0,
                _ => return Err(Error::InvalidBit(pos)),
            };
            p_plus *= 0.5 * (1.0 + sign * (f + h));
            p_minus *= 0.5 * (1.0 + sign * (f - h));
        }
        Ok(0.5 * (p_plus + p_minus))
    }

    /// Assemble the dense 2^n x 2^n density matrix by literally summing the
    /// two diagonal tensor products and the two corner coherences.
    pub fn dense_density(&self) -> Result<DensityMatrix> {
        let dim = self.dense_dim()?;
        let ChannelParams { f, h, .. } = self.params;
        let k_plus = diagonal_kron(self.n, f + h);
        let k_minus = diagonal_kron(self.n, f - h);
        let mut rho = CMatrix::zeros(dim, dim);
        for k in 0..dim {
            rho[(k, k)] = C64::new(0.5 * (k_plus[k] + k_minus[k]), 0.0);
        }
        let corner = C64::from_polar(self.c, self.n as f64 * self.phi);
        rho[(0, dim - 1)] += corner;
        rho[(dim - 1, 0)] += corner.conj();
        Ok(DensityMatrix::from_matrix_unchecked(rho))
    }

    /// `d rho / d phi`: the corner coherences rotated by `i n`, everything
    /// else zero. No coherence, no phase information.
    pub fn dense_phase_derivative(&self) -> Result<CMatrix> {
        let dim = self.dense_dim()?;
        let mut drho = CMatrix::zeros(dim, dim);
        let upper =
            C64::new(0.0, self.n as f64) * C64::from_polar(self.c, self.n as f64 * self.phi);
        drho[(0, dim - 1)] = upper;
        drho[(dim - 1, 0)] = upper.conj();
        Ok(drho)
    }

    fn dense_dim(&self) -> Result<usize> {
        if self.n > MAX_DENSE_QUBITS {
            return Err(Error::DenseTooLarge { n: self.n, max: MAX_DENSE_QUBITS });
        }
        Ok(1usize << self.n)
    }
}

/// Diagonal of the n-fold Kronecker power of `(1 + a sigma_z) / 2`,
/// assembled factor by factor.
fn diagonal_kron(n: usize, a: f64) -> Vec<f64> {
    let plus = 0.5 * (1.0 + a);
    let minus = 0.5 * (1.0 - a);
    let mut diag = vec![1.0];
    for _ in 0..n {
        let mut next = Vec::with_capacity(diag.len() * 2);
        for &d in &diag {
            next.push(d * plus);
            next.push(d * minus);
        }
        diag = next;
    }
    diag
}
