//! Kraus channels: generalized amplitude damping (GAD) and the single-operator
//! local filter, plus operator-sum application on chosen qubits.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{apply_local_operators, embed_on_qubits, DenseMatrix, QubitRegister};

/// Input states must have unit trace to this tolerance.
pub const TRACE_TOLERANCE: f64 = 1e-10;
const COMPLETENESS_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GadParams {
    gamma: f64,
    p: f64,
}

impl GadParams {
    /// Thermal mixing weight used throughout unless overridden.
    pub const DEFAULT_P: f64 = 0.5;

    pub fn new(gamma: f64, p: f64) -> Result<Self> {
        for (name, x) in [("gamma", gamma), ("p", p)] {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::InvalidParameter(format!("{name} = {x} is outside [0, 1]")));
            }
        }
        Ok(Self { gamma, p })
    }

    /// Damping `gamma` at the default `p = 1/2`.
    pub fn with_gamma(gamma: f64) -> Result<Self> {
        Self::new(gamma, Self::DEFAULT_P)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterParams {
    kappa: f64,
}

impl FilterParams {
    pub fn new(kappa: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa < 1.0) {
            return Err(Error::InvalidParameter(format!("kappa = {kappa} is outside (0, 1)")));
        }
        Ok(Self { kappa })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }
}

/// Ordered Kraus operators on one qubit-sized (or larger) space.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    operators: Vec<DenseMatrix>,
    trace_preserving: bool,
}

impl KrausChannel {
    /// Validates shapes and the completeness relation: `sum K^H K = I` when
    /// `trace_preserving`, otherwise `sum K^H K <= I`.
    pub fn new(operators: Vec<DenseMatrix>, trace_preserving: bool) -> Result<Self> {
        let dim = match operators.first() {
            Some(op) => op.require_square("Kraus operator")?,
            None => return Err(Error::InvalidParameter("channel has no Kraus operators".into())),
        };
        if operators.iter().any(|op| op.rows() != dim || op.cols() != dim) {
            return Err(Error::DimensionMismatch("Kraus operators differ in shape".into()));
        }
        let channel = Self {
            operators,
            trace_preserving,
        };
        if trace_preserving {
            let defect = completeness_defect(&channel);
            if defect > COMPLETENESS_TOLERANCE {
                return Err(Error::InvalidParameter(format!(
                    "trace-preserving channel has completeness defect {defect:e}"
                )));
            }
        } else {
            let top = crate::linalg::hermitian_eigenvalues(&channel.effect())?[0];
            if top > 1.0 + COMPLETENESS_TOLERANCE {
                return Err(Error::InvalidParameter(format!(
                    "channel effect has eigenvalue {top} above 1"
                )));
            }
        }
        Ok(channel)
    }

    pub fn operators(&self) -> &[DenseMatrix] {
        &self.operators
    }

    pub fn is_trace_preserving(&self) -> bool {
        self.trace_preserving
    }

    pub fn dim(&self) -> usize {
        self.operators.first().map_or(0, DenseMatrix::rows)
    }

    /// `sum K^H K`.
    pub fn effect(&self) -> DenseMatrix {
        let dim = self.dim().max(1);
        self.operators
            .iter()
            .fold(DenseMatrix::zeros(dim, dim), |acc, k| &acc + &(&k.dagger() * k))
    }
}

fn real2(entries: [f64; 4]) -> DenseMatrix {
    DenseMatrix::from_real(2, 2, &entries).expect("finite 2x2 entries")
}

/// The four GAD Kraus operators:
/// `K1 = sqrt(1-p) diag(1, sqrt(1-g))`, `K2 = sqrt(1-p) sqrt(g) |0><1|`,
/// `K3 = sqrt(p) diag(sqrt(1-g), 1)`, `K4 = sqrt(p) sqrt(g) |1><0|`.
pub fn gad_channel(params: GadParams) -> KrausChannel {
    let GadParams { gamma, p } = params;
    let a = (1.0 - p).sqrt();
    let b = p.sqrt();
    let keep = (1.0 - gamma).sqrt();
    let jump = gamma.sqrt();
    KrausChannel {
        operators: vec![
            real2([a, 0.0, 0.0, a * keep]),
            real2([0.0, a * jump, 0.0, 0.0]),
            real2([b * keep, 0.0, 0.0, b]),
            real2([0.0, 0.0, b * jump, 0.0]),
        ],
        trace_preserving: true,
    }
}

/// `F = sqrt(1-k) |0><0| + sqrt(k) |1><1|` as a one-element, non
/// trace-preserving channel.
pub fn filter_channel(params: FilterParams) -> KrausChannel {
    let k = params.kappa;
    KrausChannel {
        operators: vec![real2([(1.0 - k).sqrt(), 0.0, 0.0, k.sqrt()])],
        trace_preserving: false,
    }
}

/// `max |sum K^H K - I|`; 1 for an empty channel.
pub fn completeness_defect(c: &KrausChannel) -> f64 {
    if c.operators.is_empty() {
        return 1.0;
    }
    c.effect().max_abs_diff(&DenseMatrix::identity(c.dim()))
}

/// Unnormalized channel output and its trace.
#[derive(Debug, Clone)]
pub struct ChannelOutput {
    pub rho: DenseMatrix,
    pub success_prob: f64,
}

impl ChannelOutput {
    /// Conditional state `rho / tr(rho)`.
    pub fn normalized(&self) -> Result<DenseMatrix> {
        if self.success_prob.is_nan() || self.success_prob <= 0.0 {
            return Err(Error::NotNormalized(self.success_prob));
        }
        Ok(self.rho.scale_real(1.0 / self.success_prob))
    }
}

/// Qubit -> channel assignment. Ordered so application is deterministic.
pub type Assignment = BTreeMap<usize, KrausChannel>;

fn check_input(rho: &DenseMatrix, reg: QubitRegister, assignment: &Assignment) -> Result<()> {
    let dim = rho.require_square("density matrix")?;
    if dim != reg.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{dim}x{dim} state on a {}-qubit register",
            reg.n_qubits()
        )));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > TRACE_TOLERANCE || tr.im.abs() > TRACE_TOLERANCE {
        return Err(Error::NotNormalized(tr.re));
    }
    let qubits: Vec<usize> = assignment.keys().copied().collect();
    reg.check_distinct(&qubits)?;
    if let Some((q, c)) = assignment.iter().find(|(_, c)| c.dim() != 2) {
        return Err(Error::DimensionMismatch(format!(
            "channel on qubit {q} acts on dimension {}, expected 2",
            c.dim()
        )));
    }
    Ok(())
}

/// Applies every assigned single-qubit channel (identity elsewhere). The
/// output is left unnormalized; `success_prob` is its trace.
///
/// Channels on distinct qubits commute, so they are applied one qubit at a
/// time; [`apply_channels_joint`] computes the same map from the full
/// operator products.
pub fn apply_channels(rho: &DenseMatrix, reg: QubitRegister, assignment: &Assignment) -> Result<ChannelOutput> {
    check_input(rho, reg, assignment)?;
    let mut out = rho.clone();
    for (&qubit, channel) in assignment {
        out = apply_local_operators(&out, reg, qubit, channel.operators())?;
    }
    let success_prob = out.trace().re;
    Ok(ChannelOutput { rho: out, success_prob })
}

/// Literal operator-sum form `sum_S S rho S^H` where `S` runs over every
/// tensor product of one Kraus element per assigned qubit.
pub fn apply_channels_joint(rho: &DenseMatrix, reg: QubitRegister, assignment: &Assignment) -> Result<ChannelOutput> {
    check_input(rho, reg, assignment)?;
    let targets: Vec<usize> = assignment.keys().copied().collect();
    let channels: Vec<&KrausChannel> = assignment.values().collect();
    let dim = reg.dim();
    let mut out = DenseMatrix::zeros(dim, dim);
    if targets.is_empty() {
        out = rho.clone();
    } else {
        let counts: Vec<usize> = channels.iter().map(|c| c.operators().len()).collect();
        let mut choice = vec![0usize; counts.len()];
        loop {
            let ops: Vec<DenseMatrix> = channels
                .iter()
                .zip(&choice)
                .map(|(c, &i)| c.operators()[i].clone())
                .collect();
            let s = embed_on_qubits(&ops, &targets, reg)?;
            out = &out + &(&(&s * rho) * &s.dagger());

            // odometer over Kraus indices
            let mut slot = 0;
            loop {
                if slot == choice.len() {
                    let success_prob = out.trace().re;
                    return Ok(ChannelOutput { rho: out, success_prob });
                }
                choice[slot] += 1;
                if choice[slot] < counts[slot] {
                    break;
                }
                choice[slot] = 0;
                slot += 1;
            }
        }
    }
    let success_prob = out.trace().re;
    Ok(ChannelOutput { rho: out, success_prob })
}

/// Convenience: the same channel on each of `qubits`.
pub fn assign(qubits: &[usize], channel: &KrausChannel) -> Assignment {
    qubits.iter().map(|&q| (q, channel.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::StateId;

    #[test]
    fn params_validate_ranges() {
        assert!(GadParams::new(-0.1, 0.5).is_err());
        assert!(GadParams::new(0.5, 1.5).is_err());
        assert!(GadParams::new(1.0, 0.0).is_ok());
        assert!(FilterParams::new(0.0).is_err());
        assert!(FilterParams::new(1.0).is_err());
        assert!(FilterParams::new(f64::NAN).is_err());
    }

    #[test]
    fn gad_identity_at_zero_damping() {
        let ch = gad_channel(GadParams::new(0.0, 0.3).unwrap());
        let ops = ch.operators();
        assert!(ops[0].max_abs_diff(&DenseMatrix::identity(2).scale_real(0.7f64.sqrt())) < 1e-15);
        assert!(ops[2].max_abs_diff(&DenseMatrix::identity(2).scale_real(0.3f64.sqrt())) < 1e-15);
        assert_eq!(ops[1].max_abs(), 0.0);
        assert_eq!(ops[3].max_abs(), 0.0);
    }

    #[test]
    fn gad_full_decay_at_zero_temperature() {
        let ch = gad_channel(GadParams::new(1.0, 0.0).unwrap());
        let reg = QubitRegister::new(1).unwrap();
        let plus = DenseMatrix::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5]).unwrap();
        let out = apply_channels(&plus, reg, &assign(&[0], &ch)).unwrap();
        assert!(out.rho.max_abs_diff(&DenseMatrix::real_diag(&[1.0, 0.0]).unwrap()) < 1e-15);
    }

    #[test]
    fn gad_completeness() {
        let ch = gad_channel(GadParams::with_gamma(0.41).unwrap());
        assert!(completeness_defect(&ch) < 1e-14);
        assert!(ch.is_trace_preserving());
        // K2^H carries sqrt(gamma) sqrt(1-p) at (1, 0)
        let k2h = ch.operators()[1].dagger();
        assert!((k2h[(1, 0)].re - (0.41f64 * 0.5).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn filter_operator() {
        let half = filter_channel(FilterParams::new(0.5).unwrap());
        assert!(
            half.operators()[0].max_abs_diff(&DenseMatrix::identity(2).scale_real(std::f64::consts::FRAC_1_SQRT_2))
                < 1e-15
        );
        let f = filter_channel(FilterParams::new(0.24).unwrap());
        let op = &f.operators()[0];
        assert!((op[(0, 0)].re - 0.871779788708).abs() < 1e-12);
        assert!((op[(1, 1)].re - 0.489897948557).abs() < 1e-12);
        assert!(!f.is_trace_preserving());
        let ev = crate::linalg::hermitian_eigenvalues(&f.effect()).unwrap();
        assert!((ev[0] - 0.76).abs() < 1e-15 && (ev[1] - 0.24).abs() < 1e-15);
        assert!((completeness_defect(&f) - 0.76).abs() < 1e-15);
    }

    #[test]
    fn empty_channel_defect_is_one() {
        let empty = KrausChannel {
            operators: vec![],
            trace_preserving: false,
        };
        assert_eq!(completeness_defect(&empty), 1.0);
        assert!(KrausChannel::new(vec![], true).is_err());
    }

    #[test]
    fn channel_constructor_checks_completeness() {
        let half = DenseMatrix::identity(2).scale_real(0.5);
        assert!(KrausChannel::new(vec![half.clone()], true).is_err());
        assert!(KrausChannel::new(vec![half.clone()], false).is_ok());
        assert!(KrausChannel::new(vec![DenseMatrix::identity(2).scale_real(1.1)], false).is_err());
        assert!(KrausChannel::new(vec![half, DenseMatrix::identity(4)], false).is_err());
    }

    #[test]
    fn gad_on_w3_at_zero_is_identity() {
        let id = StateId::w(3).unwrap();
        let rho = id.density();
        let ch = gad_channel(GadParams::with_gamma(0.0).unwrap());
        let out = apply_channels(&rho, id.register(), &assign(&[1, 2], &ch)).unwrap();
        assert!(out.rho.max_abs_diff(&rho) < 1e-15);
        assert!((out.success_prob - 1.0).abs() < 1e-15);
    }

    #[test]
    fn filter_probability_on_pure_w3() {
        let id = StateId::w(3).unwrap();
        for kappa in [0.1, 0.24, 0.5, 0.9] {
            let f = filter_channel(FilterParams::new(kappa).unwrap());
            let out = apply_channels(&id.density(), id.register(), &assign(&[0], &f)).unwrap();
            let oracle = (1.0 - kappa) * 2.0 / 3.0 + kappa / 3.0;
            assert!((out.success_prob - oracle).abs() < 1e-14);
            assert!((out.normalized().unwrap().trace().re - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn gad_pair_preserves_trace_and_matches_joint_form() {
        let id = StateId::w(3).unwrap();
        let ch = gad_channel(GadParams::with_gamma(0.41).unwrap());
        let assignment = assign(&[1, 2], &ch);
        let fast = apply_channels(&id.density(), id.register(), &assignment).unwrap();
        let joint = apply_channels_joint(&id.density(), id.register(), &assignment).unwrap();
        assert!((fast.success_prob - 1.0).abs() < 1e-12);
        assert!(fast.rho.max_abs_diff(&joint.rho) < 1e-14);
    }

    #[test]
    fn rejects_bad_inputs() {
        let id = StateId::w(3).unwrap();
        let ch = gad_channel(GadParams::with_gamma(0.2).unwrap());
        let reg = id.register();
        let unnormalized = id.density().scale_real(0.5);
        assert!(matches!(
            apply_channels(&unnormalized, reg, &assign(&[0], &ch)),
            Err(Error::NotNormalized(_))
        ));
        assert!(apply_channels(&id.density(), reg, &assign(&[3], &ch)).is_err());
        let wide = KrausChannel::new(vec![DenseMatrix::identity(4)], true).unwrap();
        assert!(apply_channels(&id.density(), reg, &assign(&[0], &wide)).is_err());
    }
}
