//! Dense complex-matrix kernel.
//!
//! Everything in the simulator is small (at most a few hundred rows), so a
//! row-major `Vec<Complex64>` is all the storage we need. Qubit-aware helpers
//! (partial trace, operator embedding, local Kraus application) live in
//! [`qubits`]; the Hermitian eigensolver lives in [`eigen`].

mod eigen;
mod qubits;

use std::fmt;
use std::ops::{Add, Index, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use eigen::{hermitian_eigen, hermitian_eigenvalues, psd_sqrt, HermitianEigen};
pub use qubits::{apply_local_operators, embed_on_qubits, partial_trace, reduce_ordered, QubitRegister, MAX_QUBITS};

/// Scalar type for every matrix entry.
pub type ComplexScalar = Complex64;

pub(crate) const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Dense row-major complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    /// Builds a matrix from row-major entries, rejecting non-finite values.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!("{rows}x{cols} matrix is empty")));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn diag(entries: &[Complex64]) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::DimensionMismatch("empty diagonal".into()));
        }
        let mut data = vec![ZERO; n * n];
        for (i, &z) in entries.iter().enumerate() {
            data[i * n + i] = z;
        }
        Self::new(n, n, data)
    }

    pub fn real_diag(entries: &[f64]) -> Result<Self> {
        let z: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::diag(&z)
    }

    /// Column vector from amplitudes.
    pub fn column(entries: Vec<Complex64>) -> Result<Self> {
        let n = entries.len();
        Self::new(n, 1, entries)
    }

    /// Internal constructor for results of arithmetic on finite inputs.
    pub(crate) fn from_parts(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub(crate) fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.cols + col] = value;
    }

    pub(crate) fn require_square(&self, what: &str) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::DimensionMismatch(format!(
                "{what} must be square, got {}x{}",
                self.rows, self.cols
            )))
        }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut out = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.push(self[(i, j)].conj());
            }
        }
        Self::from_parts(self.cols, self.rows, out)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.push(self[(i, j)]);
            }
        }
        Self::from_parts(self.cols, self.rows, out)
    }

    /// Elementwise complex conjugate.
    pub fn conj(&self) -> Self {
        Self::from_parts(self.rows, self.cols, self.data.iter().map(|z| z.conj()).collect())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::from_parts(self.rows, self.cols, self.data.iter().map(|&z| z * factor).collect())
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        Self::from_parts(self.rows, self.cols, self.data.iter().map(|&z| z * factor).collect())
    }

    /// Sum of diagonal entries. Panics on a non-square matrix.
    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Matrix product, rejecting incompatible shapes.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = vec![ZERO; self.rows * other.cols];
        for i in 0..self.rows {
            let out_row = &mut out[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let b_row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(Self::from_parts(self.rows, other.cols, out))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "shapes {}x{} and {}x{} differ",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self::from_parts(self.rows, self.cols, data))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.try_sub(other).map(|d| d.max_abs()).unwrap_or(f64::INFINITY)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |A - A^H|` over entries; infinite for non-square input.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `(A + A^H) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let n = self.rows;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
            }
        }
        out
    }
}

/// Kronecker product: entry `(i1*r2 + i2, j1*c2 + j2)` is `a(i1,j1) * b(i2,j2)`.
pub fn kron(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut data = vec![ZERO; rows * cols];
    for i1 in 0..a.rows {
        for j1 in 0..a.cols {
            let x = a[(i1, j1)];
            if x == ZERO {
                continue;
            }
            for i2 in 0..b.rows {
                let row = i1 * b.rows + i2;
                for j2 in 0..b.cols {
                    data[row * cols + j1 * b.cols + j2] = x * b[(i2, j2)];
                }
            }
        }
    }
    DenseMatrix::from_parts(rows, cols, data)
}

/// Kronecker product of a non-empty list, left to right.
pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a DenseMatrix>) -> Option<DenseMatrix> {
    factors.into_iter().fold(None, |acc, m| match acc {
        None => Some(m.clone()),
        Some(acc) => Some(kron(&acc, m)),
    })
}

/// Conjugate transpose, as a free function.
pub fn dagger(a: &DenseMatrix) -> DenseMatrix {
    a.dagger()
}

/// Pauli Y.
pub fn sigma_y() -> DenseMatrix {
    DenseMatrix::from_parts(
        2,
        2,
        vec![ZERO, Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0), ZERO],
    )
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = Complex64;

    fn index(&self, (row, col): (usize, usize)) -> &Complex64 {
        assert!(row < self.rows && col < self.cols, "index ({row}, {col}) out of bounds");
        &self.data[row * self.cols + col]
    }
}

impl Mul for &DenseMatrix {
    type Output = DenseMatrix;

    /// Panics on a shape mismatch; use [`DenseMatrix::matmul`] to get a `Result`.
    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        self.matmul(rhs).expect("matrix shapes must agree")
    }
}

impl Add for &DenseMatrix {
    type Output = DenseMatrix;

    fn add(self, rhs: &DenseMatrix) -> DenseMatrix {
        self.try_add(rhs).expect("matrix shapes must agree")
    }
}

impl Sub for &DenseMatrix {
    type Output = DenseMatrix;

    fn sub(self, rhs: &DenseMatrix) -> DenseMatrix {
        self.try_sub(rhs).expect("matrix shapes must agree")
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
