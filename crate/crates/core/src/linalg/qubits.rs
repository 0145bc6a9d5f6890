use num_complex::Complex64;

use super::{DenseMatrix, ONE, ZERO};
use crate::error::{Error, Result};

/// Largest register the kernel accepts.
pub const MAX_QUBITS: usize = 10;

/// An N-qubit register. Qubit 0 is the leftmost tensor factor and the most
/// significant bit of a basis index, so `|q0 q1 ... q(N-1)>` sits at index
/// `sum q_i 2^(N-1-i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QubitRegister {
    n_qubits: usize,
}

impl QubitRegister {
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::InvalidParameter(format!(
                "register size must be in 1..={MAX_QUBITS}, got {n_qubits}"
            )));
        }
        Ok(Self { n_qubits })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    /// Basis-index bit that holds `qubit`.
    pub fn mask(&self, qubit: usize) -> usize {
        1 << (self.n_qubits - 1 - qubit)
    }

    /// Checks that `qubits` are in range and pairwise distinct.
    pub fn check_distinct(&self, qubits: &[usize]) -> Result<()> {
        let mut seen = 0usize;
        for &q in qubits {
            if q >= self.n_qubits {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    n_qubits: self.n_qubits,
                });
            }
            if seen & (1 << q) != 0 {
                return Err(Error::RepeatedQubit(q));
            }
            seen |= 1 << q;
        }
        Ok(())
    }

    /// Qubits not in `qubits`, ascending.
    pub fn complement(&self, qubits: &[usize]) -> Vec<usize> {
        (0..self.n_qubits).filter(|q| !qubits.contains(q)).collect()
    }

    fn check_operator(&self, rho: &DenseMatrix) -> Result<()> {
        let dim = rho.require_square("density matrix")?;
        if dim != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{dim}x{dim} matrix on a {}-qubit register",
                self.n_qubits
            )));
        }
        Ok(())
    }

    /// Offsets into the full basis for every value of the sub-register
    /// `qubits`, with `qubits[0]` as the most significant sub-index bit.
    fn offsets(&self, qubits: &[usize]) -> Vec<usize> {
        let k = qubits.len();
        (0..1usize << k)
            .map(|x| {
                qubits
                    .iter()
                    .enumerate()
                    .filter(|(p, _)| x & (1 << (k - 1 - p)) != 0)
                    .map(|(_, &q)| self.mask(q))
                    .sum()
            })
            .collect()
    }
}

/// Traces out every qubit not in `keep`. Kept qubits stay in register order.
pub fn partial_trace(rho: &DenseMatrix, reg: QubitRegister, keep: &[usize]) -> Result<DenseMatrix> {
    let mut sorted = keep.to_vec();
    sorted.sort_unstable();
    reduce_ordered(rho, reg, &sorted)
}

/// Reduced state on `order`, with the output tensor factors arranged in the
/// given order (so `[2, 0]` yields a `c ⊗ a` matrix).
pub fn reduce_ordered(rho: &DenseMatrix, reg: QubitRegister, order: &[usize]) -> Result<DenseMatrix> {
    reg.check_operator(rho)?;
    if order.is_empty() {
        return Err(Error::EmptySelection);
    }
    reg.check_distinct(order)?;

    let kept = reg.offsets(order);
    let traced = reg.offsets(&reg.complement(order));
    let d = kept.len();
    let mut out = vec![ZERO; d * d];
    for (x, &ox) in kept.iter().enumerate() {
        for (y, &oy) in kept.iter().enumerate() {
            out[x * d + y] = traced.iter().map(|&t| rho[(ox + t, oy + t)]).sum();
        }
    }
    Ok(DenseMatrix::from_parts(d, d, out))
}

/// Full `2^N` operator acting as `ops` on `targets` and as identity elsewhere.
///
/// Each operator consumes `log2(dim)` consecutive entries of `targets`; the
/// first of those is its most significant tensor factor. Targets need not be
/// contiguous or sorted.
pub fn embed_on_qubits(ops: &[DenseMatrix], targets: &[usize], reg: QubitRegister) -> Result<DenseMatrix> {
    reg.check_distinct(targets)?;

    let mut groups = Vec::with_capacity(ops.len());
    let mut start = 0usize;
    for op in ops {
        let dim = op.require_square("embedded operator")?;
        if !dim.is_power_of_two() || dim < 2 {
            return Err(Error::DimensionMismatch(format!("operator dimension {dim} is not 2^k")));
        }
        let width = dim.trailing_zeros() as usize;
        groups.push((start, width));
        start += width;
    }
    if start != targets.len() {
        return Err(Error::DimensionMismatch(format!(
            "operators span {start} qubits but {} targets were given",
            targets.len()
        )));
    }

    let n_targets = targets.len();
    let target_mask: usize = targets.iter().map(|&q| reg.mask(q)).sum();
    let scatter = reg.offsets(targets);
    let dim = reg.dim();

    // Sub-index of group `g` inside a target assignment `t`.
    let sub = |t: usize, (from, width): (usize, usize)| (t >> (n_targets - from - width)) & ((1 << width) - 1);
    // Target assignment read off a full basis index.
    let gather = |idx: usize| {
        targets.iter().enumerate().fold(0usize, |acc, (p, &q)| {
            if idx & reg.mask(q) != 0 {
                acc | (1 << (n_targets - 1 - p))
            } else {
                acc
            }
        })
    };

    let mut out = vec![ZERO; dim * dim];
    for r in 0..dim {
        let r_t = gather(r);
        let base = r & !target_mask;
        for (c_t, &offset) in scatter.iter().enumerate() {
            let mut value = ONE;
            for (op, &group) in ops.iter().zip(&groups) {
                value *= op[(sub(r_t, group), sub(c_t, group))];
                if value == ZERO {
                    break;
                }
            }
            out[r * dim + (base | offset)] = value;
        }
    }
    Ok(DenseMatrix::from_parts(dim, dim, out))
}

/// `sum_k K_k rho K_k^H` with each 2x2 `K_k` acting on `qubit` only.
///
/// Works in `O(4^N)` per operator by touching only the basis pairs that
/// differ in `qubit`; [`embed_on_qubits`] gives the same result through full
/// `2^N` operators.
pub fn apply_local_operators(
    rho: &DenseMatrix,
    reg: QubitRegister,
    qubit: usize,
    ops: &[DenseMatrix],
) -> Result<DenseMatrix> {
    reg.check_operator(rho)?;
    reg.check_distinct(&[qubit])?;
    for op in ops {
        if op.rows() != 2 || op.cols() != 2 {
            return Err(Error::DimensionMismatch(format!(
                "local operator must be 2x2, got {}x{}",
                op.rows(),
                op.cols()
            )));
        }
    }

    let dim = reg.dim();
    let mask = reg.mask(qubit);
    let lows: Vec<usize> = (0..dim).filter(|i| i & mask == 0).collect();
    let src = rho.as_slice();
    let mut out = vec![ZERO; dim * dim];
    let mut tmp = vec![ZERO; dim * dim];

    for op in ops {
        let k = [[op[(0, 0)], op[(0, 1)]], [op[(1, 0)], op[(1, 1)]]];
        // tmp = K rho
        for &i0 in &lows {
            let i1 = i0 | mask;
            for j in 0..dim {
                let a = src[i0 * dim + j];
                let b = src[i1 * dim + j];
                tmp[i0 * dim + j] = k[0][0] * a + k[0][1] * b;
                tmp[i1 * dim + j] = k[1][0] * a + k[1][1] * b;
            }
        }
        // out += tmp K^H
        let kc: [[Complex64; 2]; 2] = [[k[0][0].conj(), k[0][1].conj()], [k[1][0].conj(), k[1][1].conj()]];
        for i in 0..dim {
            let row = &tmp[i * dim..(i + 1) * dim];
            let out_row = &mut out[i * dim..(i + 1) * dim];
            for &j0 in &lows {
                let j1 = j0 | mask;
                let a = row[j0];
                let b = row[j1];
                out_row[j0] += a * kc[0][0] + b * kc[0][1];
                out_row[j1] += a * kc[1][0] + b * kc[1][1];
            }
        }
    }
    Ok(DenseMatrix::from_parts(dim, dim, out))
}
