//! Small dense complex linear algebra helpers used throughout the crate.
//!
//! Everything here operates on dynamically sized `nalgebra` matrices of
//! `Complex64`. State dimensions stay small (at most 2^12), so dense
//! eigendecompositions are the workhorse.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn identity2() -> CMatrix {
    CMatrix::identity(2, 2)
}

pub fn sigma_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[C64::ZERO, ONE, ONE, C64::ZERO])
}

pub fn sigma_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[C64::ZERO, -I, I, C64::ZERO])
}

pub fn sigma_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ONE, C64::ZERO, C64::ZERO, -ONE])
}

/// Lowering operator |0><1| taking the excited state |1> to the ground
/// state |0>. The crate-wide convention puts |0> on the sigma_z = +1 axis.
pub fn sigma_minus() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[C64::ZERO, ONE, C64::ZERO, C64::ZERO])
}

/// Embed a single-qubit operator at position `qubit` (0-based, leftmost
/// tensor factor first) in an `n`-qubit identity chain.
pub fn embed_single_qubit(op: &CMatrix, qubit: usize, n: usize) -> CMatrix {
    assert!(qubit < n, "qubit index {qubit} out of range for {n} qubits");
    let mut out = CMatrix::identity(1, 1);
    for j in 0..n {
        out = if j == qubit {
            out.kronecker(op)
        } else {
            out.kronecker(&identity2())
        };
    }
    out
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b + b * a
}

/// Frobenius norm of the anti-Hermitian part.
pub fn hermiticity_residual(m: &CMatrix) -> f64 {
    (m - m.adjoint()).norm()
}

pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    hermiticity_residual(m) <= tol
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted ascending
/// with eigenvector columns permuted to match.
///
/// nalgebra's QR-based solver is the fast path, but its implicit shift can
/// underflow into NaNs on exactly sparse corner-plus-diagonal matrices (the
/// dense N00N states hit this). When the fast path returns anything
/// non-finite we redo the decomposition with cyclic complex Jacobi
/// rotations, which are unconditionally convergent.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let se = m.clone().symmetric_eigen();
    let finite = se.eigenvalues.iter().all(|v| v.is_finite())
        && se.eigenvectors.iter().all(|v| v.re.is_finite() && v.im.is_finite());
    let (raw_values, raw_vectors) = if finite {
        (se.eigenvalues.iter().copied().collect::<Vec<f64>>(), se.eigenvectors)
    } else {
        jacobi_hermitian_eigen(m)
    };

    let dim = m.nrows();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| raw_values[a].total_cmp(&raw_values[b]));
    let values: Vec<f64> = order.iter().map(|&k| raw_values[k]).collect();
    let mut vectors = CMatrix::zeros(dim, dim);
    for (col, &k) in order.iter().enumerate() {
        vectors.set_column(col, &raw_vectors.column(k));
    }
    (values, vectors)
}

/// Eigenvalues only, sorted ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    hermitian_eigen(m).0
}

/// Cyclic Jacobi for complex Hermitian matrices: rotate away each
/// off-diagonal element in turn until the off-diagonal mass reaches the
/// machine floor. Returns unsorted eigenvalues and matching eigenvectors.
fn jacobi_hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let dim = m.nrows();
    let mut a = m.clone();
    let mut vectors = CMatrix::identity(dim, dim);
    let fro_sq: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    let target = fro_sq * f64::EPSILON * f64::EPSILON;

    for _sweep in 0..60 {
        let off_sq: f64 = (0..dim)
            .flat_map(|p| (0..dim).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum();
        if off_sq <= target {
            break;
        }
        for p in 0..dim {
            for q in (p + 1)..dim {
                let beta = a[(p, q)];
                let b = beta.norm();
                if b == 0.0 {
                    continue;
                }
                let phase = beta / C64::new(b, 0.0);
                let alpha = a[(p, p)].re;
                let gamma = a[(q, q)].re;
                let tau = (gamma - alpha) / (2.0 * b);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let cs = C64::new(c, 0.0);
                let s_phase = C64::new(s, 0.0) * phase;

                // Columns: A <- A J with J[p][p]=J[q][q]=c,
                // J[p][q] = s phase, J[q][p] = -s conj(phase).
                for k in 0..dim {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * cs - akq * s_phase.conj();
                    a[(k, q)] = akp * s_phase + akq * cs;
                }
                // Rows: A <- J^+ A.
                for k in 0..dim {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * cs - aqk * s_phase;
                    a[(q, k)] = apk * s_phase.conj() + aqk * cs;
                }
                // Clean the rotated pair against rounding drift.
                a[(p, q)] = C64::ZERO;
                a[(q, p)] = C64::ZERO;
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

                for k in 0..dim {
                    let vkp = vectors[(k, p)];
                    let vkq = vectors[(k, q)];
                    vectors[(k, p)] = vkp * cs - vkq * s_phase.conj();
                    vectors[(k, q)] = vkp * s_phase + vkq * cs;
                }
            }
        }
    }
    let values: Vec<f64> = (0..dim).map(|k| a[(k, k)].re).collect();
    (values, vectors)
}

/// Principal square root of a positive semidefinite Hermitian matrix.
/// Slightly negative eigenvalues from rounding are clamped to zero.
pub fn matrix_sqrt_psd(m: &CMatrix) -> CMatrix {
    let (values, vectors) = hermitian_eigen(m);
    let dim = m.nrows();
    let mut sqrt_diag = CMatrix::zeros(dim, dim);
    for (k, &v) in values.iter().enumerate() {
        sqrt_diag[(k, k)] = C64::new(v.max(0.0).sqrt(), 0.0);
    }
    &vectors * sqrt_diag * vectors.adjoint()
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}
