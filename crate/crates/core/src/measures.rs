//! Entanglement quantifiers.
//!
//! * [`wootters_concurrence`]: two-qubit concurrence from the spectrum of
//!   `rho (Y⊗Y) rho* (Y⊗Y)`.
//! * [`bipartite_concurrence`]: the `d1 ⊗ d2` generalization
//!   `BC = sqrt(sum_mn C_mn^2)`, where `C_mn` is built the same way with the
//!   spin flip replaced by `S_mn = L_m ⊗ L_n` for every pair of SO(d1), SO(d2)
//!   generators.
//!
//! Spectra of the non-Hermitian products `rho * rho~` are read off the
//! Hermitian PSD matrix `sqrt(rho) rho~ sqrt(rho)`, which has the same
//! eigenvalues.
//!
//! Each `S_mn` has rank four: it is `Y ⊗ Y` on the four basis states
//! `{a, b} x {a', b'}` picked out by the generator pair and zero elsewhere. So
//! the nonzero spectrum of `rho rho~_mn` equals that of the 4x4 problem built
//! from the principal submatrix of `rho` on those basis states.
//! [`bipartite_concurrence`] uses that reduction;
//! [`bipartite_concurrence_dense`] runs the full-dimensional recipe and serves
//! as a cross-check.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, kron, psd_sqrt, reduce_ordered, sigma_y, DenseMatrix, QubitRegister};

/// Concurrences below this are reported as exactly zero.
pub const ZERO_THRESHOLD: f64 = 1e-9;
/// Trace tolerance for inputs that must be normalized.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-8;
/// Eigenvalues of `sqrt(rho) rho~ sqrt(rho)` below this are rounding noise.
/// Their square roots would otherwise show up as ~1e-8 spurious `lambda`s.
const SPECTRUM_FLOOR: f64 = 1e-14;

fn check_normalized(rho: &DenseMatrix) -> Result<()> {
    rho.require_square("density matrix")?;
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > NORMALIZATION_TOLERANCE || tr.im.abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::NotNormalized(tr.re));
    }
    Ok(())
}

fn snap_to_zero(c: f64) -> f64 {
    if c < ZERO_THRESHOLD {
        0.0
    } else {
        c
    }
}

/// `max{0, l1 - l2 - l3 - l4}` where the `l_k` are the square roots of the
/// four largest eigenvalues of `sqrt_rho * flipped * sqrt_rho`, descending.
fn lambda_combination(sqrt_rho: &DenseMatrix, flipped: &DenseMatrix) -> Result<f64> {
    let m = (&(sqrt_rho * flipped) * sqrt_rho).hermitian_part();
    let spectrum = hermitian_eigenvalues(&m)?;
    let lambdas: Vec<f64> = spectrum
        .iter()
        .take(4)
        .map(|&x| if x > SPECTRUM_FLOOR { x.sqrt() } else { 0.0 })
        .collect();
    let head = lambdas.first().copied().unwrap_or(0.0);
    let tail: f64 = lambdas.iter().skip(1).sum();
    Ok((head - tail).max(0.0))
}

/// Spin-flip concurrence of a (possibly unnormalized) 4x4 PSD block.
fn spin_flip_concurrence(block: &DenseMatrix) -> Result<f64> {
    let yy = kron(&sigma_y(), &sigma_y());
    let flipped = &(&yy * &block.conj()) * &yy;
    lambda_combination(&psd_sqrt(block)?, &flipped)
}

/// Wootters concurrence of a normalized two-qubit density matrix.
pub fn wootters_concurrence(rho: &DenseMatrix) -> Result<f64> {
    if rho.rows() != 4 || rho.cols() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "two-qubit state must be 4x4, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    check_normalized(rho)?;
    Ok(snap_to_zero(spin_flip_concurrence(rho)?))
}

/// Wootters concurrence between qubits `i` and `j`, all others traced out.
pub fn pairwise_concurrence(rho: &DenseMatrix, reg: QubitRegister, i: usize, j: usize) -> Result<f64> {
    if i == j {
        return Err(Error::RepeatedQubit(i));
    }
    check_normalized(rho)?;
    let reduced = reduce_ordered(rho, reg, &[i, j])?;
    wootters_concurrence(&reduced)
}

/// Split of a register into side A, side B and traced-out qubits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BipartitionSpec {
    side_a: Vec<usize>,
    side_b: Vec<usize>,
    discarded: Vec<usize>,
}

impl BipartitionSpec {
    /// Everything outside `side_a ∪ side_b` is discarded.
    pub fn new(side_a: Vec<usize>, side_b: Vec<usize>, reg: QubitRegister) -> Result<Self> {
        if side_a.is_empty() || side_b.is_empty() {
            return Err(Error::InvalidPartition("both sides must be nonempty".into()));
        }
        let both: Vec<usize> = side_a.iter().chain(&side_b).copied().collect();
        reg.check_distinct(&both)
            .map_err(|e| Error::InvalidPartition(e.to_string()))?;
        let discarded = reg.complement(&both);
        Ok(Self {
            side_a,
            side_b,
            discarded,
        })
    }

    pub fn side_a(&self) -> &[usize] {
        &self.side_a
    }

    pub fn side_b(&self) -> &[usize] {
        &self.side_b
    }

    pub fn discarded(&self) -> &[usize] {
        &self.discarded
    }

    pub fn d1(&self) -> usize {
        1 << self.side_a.len()
    }

    pub fn d2(&self) -> usize {
        1 << self.side_b.len()
    }

    /// Kept qubits in `A ⊗ B` order.
    fn kept_order(&self) -> Vec<usize> {
        self.side_a.iter().chain(&self.side_b).copied().collect()
    }
}

/// Antisymmetric generators `L_ab = -i(|a><b| - |b><a|)`, `a < b`, of SO(d).
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    dim: usize,
    pairs: Vec<(usize, usize)>,
}

impl GeneratorSet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Support `(a, b)` of each generator, in generation order.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn matrices(&self) -> Vec<DenseMatrix> {
        self.pairs.iter().map(|&(a, b)| self.generator(a, b)).collect()
    }

    fn generator(&self, a: usize, b: usize) -> DenseMatrix {
        let mut data = vec![Complex64::new(0.0, 0.0); self.dim * self.dim];
        data[a * self.dim + b] = Complex64::new(0.0, -1.0);
        data[b * self.dim + a] = Complex64::new(0.0, 1.0);
        DenseMatrix::new(self.dim, self.dim, data).expect("finite generator")
    }
}

pub fn so_generators(d: usize) -> Result<GeneratorSet> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("SO({d}) has no generators")));
    }
    let pairs = (0..d).flat_map(|a| (a + 1..d).map(move |b| (a, b))).collect();
    Ok(GeneratorSet { dim: d, pairs })
}

/// Generalized bipartite concurrence `sqrt(sum_mn C_mn^2)` of the reduced
/// state on `part`.
pub fn bipartite_concurrence(rho: &DenseMatrix, reg: QubitRegister, part: &BipartitionSpec) -> Result<f64> {
    check_normalized(rho)?;
    let reduced = reduce_ordered(rho, reg, &part.kept_order())?;
    let (d1, d2) = (part.d1(), part.d2());
    let gens_a = so_generators(d1)?;
    let gens_b = so_generators(d2)?;

    let mut sum_sq = 0.0;
    for &(a, b) in gens_a.pairs() {
        for &(a2, b2) in gens_b.pairs() {
            let support = [a * d2 + a2, a * d2 + b2, b * d2 + a2, b * d2 + b2];
            let mut block = Vec::with_capacity(16);
            for &r in &support {
                for &c in &support {
                    block.push(reduced[(r, c)]);
                }
            }
            let block = DenseMatrix::new(4, 4, block)?;
            let c = spin_flip_concurrence(&block)?;
            sum_sq += c * c;
        }
    }
    Ok(snap_to_zero(sum_sq.sqrt()))
}

/// Same quantity as [`bipartite_concurrence`], evaluated literally in the full
/// `d1 d2` space: `rho~_mn = S_mn rho* S_mn` and the four largest eigenvalues
/// of `sqrt(rho) rho~_mn sqrt(rho)`.
pub fn bipartite_concurrence_dense(rho: &DenseMatrix, reg: QubitRegister, part: &BipartitionSpec) -> Result<f64> {
    check_normalized(rho)?;
    let reduced = reduce_ordered(rho, reg, &part.kept_order())?;
    let sqrt_rho = psd_sqrt(&reduced)?;
    let conj = reduced.conj();
    let gens_a = so_generators(part.d1())?.matrices();
    let gens_b = so_generators(part.d2())?.matrices();

    let mut sum_sq = 0.0;
    for la in &gens_a {
        for lb in &gens_b {
            let s = kron(la, lb);
            let flipped = &(&s * &conj) * &s;
            let c = lambda_combination(&sqrt_rho, &flipped)?;
            sum_sq += c * c;
        }
    }
    Ok(snap_to_zero(sum_sq.sqrt()))
}

/// Pure-state closed form `sqrt(2 (1 - tr rho_A^2))`.
pub fn i_concurrence_pure(psi: &DenseMatrix, part: &BipartitionSpec) -> Result<f64> {
    if !part.discarded.is_empty() {
        return Err(Error::InvalidPartition(
            "pure-state formula needs a partition without discarded qubits".into(),
        ));
    }
    let rho = crate::states::density_from_pure(psi)?;
    let n = psi.rows().trailing_zeros() as usize;
    if 1usize << n != psi.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{} amplitudes is not 2^N",
            psi.rows()
        )));
    }
    let reg = QubitRegister::new(n)?;
    let mut side_a = part.side_a.clone();
    side_a.sort_unstable();
    let rho_a = reduce_ordered(&rho, reg, &side_a)?;
    let purity = (&rho_a * &rho_a).trace().re;
    Ok((2.0 * (1.0 - purity)).max(0.0).sqrt())
}

/// A named entanglement quantity: `pairwise:ab` or `bipartite:ab|c`.
///
/// Letters `a, b, c, ...` are register indices `0, 1, 2, ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Measure {
    Pairwise(usize, usize),
    Bipartite { side_a: Vec<usize>, side_b: Vec<usize> },
}

pub fn qubit_letter(q: usize) -> char {
    (b'a' + q as u8) as char
}

pub fn letter_qubit(c: char) -> Option<usize> {
    if c.is_ascii_lowercase() {
        Some((c as u8 - b'a') as usize)
    } else {
        None
    }
}

fn parse_letters(s: &str, whole: &str) -> Result<Vec<usize>> {
    if s.is_empty() {
        return Err(Error::InvalidMeasure(format!("`{whole}` has an empty qubit group")));
    }
    s.chars()
        .map(|c| letter_qubit(c).ok_or_else(|| Error::InvalidMeasure(format!("`{whole}`: bad qubit letter `{c}`"))))
        .collect()
}

impl Measure {
    pub fn pairwise(i: usize, j: usize) -> Self {
        Measure::Pairwise(i, j)
    }

    pub fn bipartite(side_a: &[usize], side_b: &[usize]) -> Self {
        Measure::Bipartite {
            side_a: side_a.to_vec(),
            side_b: side_b.to_vec(),
        }
    }

    /// Qubits the measure looks at; everything else is traced out.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Measure::Pairwise(i, j) => vec![*i, *j],
            Measure::Bipartite { side_a, side_b } => side_a.iter().chain(side_b).copied().collect(),
        }
    }

    /// Checks the measure against a register without evaluating it.
    pub fn validate(&self, reg: QubitRegister) -> Result<()> {
        match self {
            Measure::Pairwise(i, j) => reg
                .check_distinct(&[*i, *j])
                .map_err(|e| Error::InvalidMeasure(format!("{self}: {e}"))),
            Measure::Bipartite { side_a, side_b } => BipartitionSpec::new(side_a.clone(), side_b.clone(), reg)
                .map(|_| ())
                .map_err(|e| Error::InvalidMeasure(format!("{self}: {e}"))),
        }
    }

    pub fn evaluate(&self, rho: &DenseMatrix, reg: QubitRegister) -> Result<f64> {
        match self {
            Measure::Pairwise(i, j) => pairwise_concurrence(rho, reg, *i, *j),
            Measure::Bipartite { side_a, side_b } => {
                let part = BipartitionSpec::new(side_a.clone(), side_b.clone(), reg)?;
                bipartite_concurrence(rho, reg, &part)
            }
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters = |qs: &[usize]| qs.iter().map(|&q| qubit_letter(q)).collect::<String>();
        match self {
            Measure::Pairwise(i, j) => write!(f, "pairwise:{}{}", qubit_letter(*i), qubit_letter(*j)),
            Measure::Bipartite { side_a, side_b } => write!(f, "bipartite:{}|{}", letters(side_a), letters(side_b)),
        }
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let whole = s.trim();
        let (kind, body) = whole
            .split_once(':')
            .ok_or_else(|| Error::InvalidMeasure(format!("`{whole}` (expected pairwise:ij or bipartite:ij|k)")))?;
        let measure = match kind {
            "pairwise" => {
                let qs = parse_letters(body, whole)?;
                if qs.len() != 2 {
                    return Err(Error::InvalidMeasure(format!("`{whole}` must name exactly two qubits")));
                }
                Measure::Pairwise(qs[0], qs[1])
            }
            "bipartite" => {
                let (a, b) = body
                    .split_once('|')
                    .ok_or_else(|| Error::InvalidMeasure(format!("`{whole}` is missing `|`")))?;
                Measure::Bipartite {
                    side_a: parse_letters(a, whole)?,
                    side_b: parse_letters(b, whole)?,
                }
            }
            other => return Err(Error::InvalidMeasure(format!("unknown measure kind `{other}`"))),
        };
        let qs = measure.qubits();
        for (k, q) in qs.iter().enumerate() {
            if qs[..k].contains(q) {
                return Err(Error::InvalidMeasure(format!(
                    "`{whole}` repeats qubit `{}`",
                    qubit_letter(*q)
                )));
            }
        }
        Ok(measure)
    }
}
