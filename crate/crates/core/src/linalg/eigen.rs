//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary and then applies the classic real symmetric rotation, so the
//! combined transform is `R = diag(1, e^{-i phi}) * G(c, s)` on the `(p, q)`
//! plane.

use num_complex::Complex64;

use super::DenseMatrix;
use crate::error::{Error, Result};

/// Maximum tolerated `max |A - A^H|` entry.
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;
/// Relative off-diagonal Frobenius norm at which Jacobi stops.
pub const JACOBI_THRESHOLD: f64 = 1e-14;
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Eigenvalues in `[-NEGATIVE_TOLERANCE, 0)` are rounding noise and clamp to 0.
pub const NEGATIVE_TOLERANCE: f64 = 1e-8;

/// Eigen-decomposition with eigenvalues in descending order and the matching
/// eigenvectors as the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix,
}

pub fn hermitian_eigen(a: &DenseMatrix) -> Result<HermitianEigen> {
    let n = a.require_square("eigenvalue input")?;
    let defect = a.hermiticity_defect();
    if defect > HERMITIAN_TOLERANCE {
        return Err(Error::NotHermitian(defect));
    }

    let mut m = a.hermitian_part();
    let mut v = DenseMatrix::identity(n);
    let norm = m.frobenius_norm();

    if norm > 0.0 {
        let mut converged = false;
        for _ in 0..JACOBI_MAX_SWEEPS {
            if off_diagonal_norm(&m) <= JACOBI_THRESHOLD * norm {
                converged = true;
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    rotate(&mut m, &mut v, p, q);
                }
            }
        }
        if !converged && off_diagonal_norm(&m) > JACOBI_THRESHOLD * norm {
            return Err(Error::NoConvergence(JACOBI_MAX_SWEEPS));
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].re.total_cmp(&m[(i, i)].re));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let mut vectors = DenseMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            vectors.set(row, new_col, v[(row, old_col)]);
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// Real eigenvalues of a Hermitian matrix, descending.
pub fn hermitian_eigenvalues(a: &DenseMatrix) -> Result<Vec<f64>> {
    hermitian_eigen(a).map(|e| e.values)
}

/// Hermitian PSD square root. Eigenvalues down to `-NEGATIVE_TOLERANCE` are
/// clamped to zero; anything lower is rejected.
pub fn psd_sqrt(a: &DenseMatrix) -> Result<DenseMatrix> {
    let HermitianEigen { values, vectors } = hermitian_eigen(a)?;
    let n = values.len();
    let mut roots = Vec::with_capacity(n);
    for &lambda in &values {
        if lambda < -NEGATIVE_TOLERANCE {
            return Err(Error::NegativeEigenvalue(lambda));
        }
        roots.push(lambda.max(0.0).sqrt());
    }
    let mut scaled = vectors.clone();
    for row in 0..n {
        for (col, &r) in roots.iter().enumerate() {
            scaled.set(row, col, vectors[(row, col)] * r);
        }
    }
    let b = &scaled * &vectors.dagger();
    Ok(b.hermitian_part())
}

fn off_diagonal_norm(m: &DenseMatrix) -> f64 {
    let n = m.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += m[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

fn rotate(m: &mut DenseMatrix, v: &mut DenseMatrix, p: usize, q: usize) {
    let n = m.rows();
    let apq = m[(p, q)];
    let magnitude = apq.norm();
    if magnitude == 0.0 {
        return;
    }
    let phase = apq / magnitude;
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;

    let theta = (aqq - app) / (2.0 * magnitude);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let rpp = Complex64::new(c, 0.0);
    let rpq = Complex64::new(s, 0.0);
    let rqp = -phase.conj() * s;
    let rqq = phase.conj() * c;

    // A <- A R, V <- V R
    for target in [&mut *m, &mut *v] {
        let data = target.as_mut_slice();
        for k in 0..n {
            let akp = data[k * n + p];
            let akq = data[k * n + q];
            data[k * n + p] = akp * rpp + akq * rqp;
            data[k * n + q] = akp * rpq + akq * rqq;
        }
    }
    // A <- R^H A
    let data = m.as_mut_slice();
    for k in 0..n {
        let apk = data[p * n + k];
        let aqk = data[q * n + k];
        data[p * n + k] = rpp.conj() * apk + rqp.conj() * aqk;
        data[q * n + k] = rpq.conj() * apk + rqq.conj() * aqk;
    }
    data[p * n + q] = Complex64::new(0.0, 0.0);
    data[q * n + p] = Complex64::new(0.0, 0.0);
    data[p * n + p].im = 0.0;
    data[q * n + q].im = 0.0;
}
