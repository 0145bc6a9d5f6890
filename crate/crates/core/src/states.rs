//! Initial pure states: N-qubit W and GHZ states and the four-qubit cluster
//! state, all with real amplitudes in the computational basis.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, QubitRegister, MAX_QUBITS, ZERO};

/// Norm tolerance for state vectors handed to [`density_from_pure`].
pub const NORM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateKind {
    W,
    Ghz,
    Cluster4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StateId {
    kind: StateKind,
    n_qubits: usize,
}

impl StateId {
    pub fn new(kind: StateKind, n_qubits: usize) -> Result<Self> {
        let ok = match kind {
            StateKind::W | StateKind::Ghz => (2..=MAX_QUBITS).contains(&n_qubits),
            StateKind::Cluster4 => n_qubits == 4,
        };
        if !ok {
            return Err(Error::InvalidState(format!("{kind:?} on {n_qubits} qubits")));
        }
        Ok(Self { kind, n_qubits })
    }

    pub fn w(n: usize) -> Result<Self> {
        Self::new(StateKind::W, n)
    }

    pub fn ghz(n: usize) -> Result<Self> {
        Self::new(StateKind::Ghz, n)
    }

    pub fn cluster4() -> Self {
        Self {
            kind: StateKind::Cluster4,
            n_qubits: 4,
        }
    }

    pub fn kind(&self) -> StateKind {
        self.kind
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn register(&self) -> QubitRegister {
        QubitRegister::new(self.n_qubits).expect("validated at construction")
    }

    pub fn pure(&self) -> DenseMatrix {
        make_pure(*self)
    }

    pub fn density(&self) -> DenseMatrix {
        density_from_pure(&self.pure()).expect("factory states are normalized")
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            StateKind::W => write!(f, "w:{}", self.n_qubits),
            StateKind::Ghz => write!(f, "ghz:{}", self.n_qubits),
            StateKind::Cluster4 => write!(f, "cluster4"),
        }
    }
}

impl FromStr for StateId {
    type Err = Error;

    /// Accepts `w:N`, `ghz:N` and `cluster4`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "cluster4" {
            return Ok(Self::cluster4());
        }
        let (kind, n) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidState(format!("`{s}` (expected w:N, ghz:N or cluster4)")))?;
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| Error::InvalidState(format!("`{s}` has a bad qubit count")))?;
        match kind.trim() {
            "w" => Self::w(n),
            "ghz" => Self::ghz(n),
            other => Err(Error::InvalidState(format!("unknown state family `{other}`"))),
        }
    }
}

/// State vector (a `2^N x 1` column).
pub fn make_pure(id: StateId) -> DenseMatrix {
    let n = id.n_qubits;
    let dim = 1usize << n;
    let mut amps = vec![ZERO; dim];
    match id.kind {
        StateKind::W => {
            let a = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
            for q in 0..n {
                amps[1 << (n - 1 - q)] = a;
            }
        }
        StateKind::Ghz => {
            let a = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            amps[0] = a;
            amps[dim - 1] = a;
        }
        StateKind::Cluster4 => {
            // |0000> + |0011> + |1100> - |1111>, over 2
            amps[0b0000] = Complex64::new(0.5, 0.0);
            amps[0b0011] = Complex64::new(0.5, 0.0);
            amps[0b1100] = Complex64::new(0.5, 0.0);
            amps[0b1111] = Complex64::new(-0.5, 0.0);
        }
    }
    DenseMatrix::column(amps).expect("finite amplitudes")
}

/// `|psi><psi|` for a unit-norm column vector.
pub fn density_from_pure(psi: &DenseMatrix) -> Result<DenseMatrix> {
    if psi.cols() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "state vector must be a column, got {}x{}",
            psi.rows(),
            psi.cols()
        )));
    }
    let norm = psi.frobenius_norm();
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized(norm));
    }
    Ok(psi * &psi.dagger())
}
