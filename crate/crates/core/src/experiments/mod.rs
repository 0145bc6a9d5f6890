//! Scenario runner: GAD on a set of qubits, an optional local filter on the
//! preserved ones, and entanglement measures on the conditional state.

mod kappa;
mod studies;
mod threshold;

use rayon::prelude::*;

use crate::channels::{apply_channels, filter_channel, gad_channel, Assignment, FilterParams, GadParams};
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::measures::Measure;
use crate::states::StateId;

pub use kappa::{solve_equal_kappa, solve_equal_kappa_with, KappaSearch, KappaSolution};
pub use studies::{
    cluster_price_report, default_monitored, ghz_retrieval_check, ghz_retrieval_report, retrieval_check,
    w_scaling_point, w_scaling_study, PriceEntry, PriceReport, RetrievalReport, RetrievalStatus, WScalingRow,
    CLUSTER_RETRIEVAL_WINDOW, KAPPA_CHECK_GRID,
};
pub use threshold::{find_esd_threshold, find_esd_threshold_with, ThresholdSearch};

/// Damping strength: one value or an inclusive `start:step:stop` grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaSpec {
    Scalar(f64),
    Range { start: f64, step: f64, stop: f64 },
}

impl GammaSpec {
    pub fn validate(&self) -> Result<()> {
        let in_unit = |x: f64| (0.0..=1.0).contains(&x);
        match *self {
            GammaSpec::Scalar(g) if in_unit(g) => Ok(()),
            GammaSpec::Range { start, step, stop }
                if in_unit(start) && in_unit(stop) && step > 0.0 && start <= stop =>
            {
                Ok(())
            }
            other => Err(Error::InvalidParameter(format!(
                "gamma {other:?} must lie in [0, 1] with a positive step"
            ))),
        }
    }

    pub fn grid(&self) -> Vec<f64> {
        match *self {
            GammaSpec::Scalar(g) => vec![g],
            GammaSpec::Range { start, step, stop } => {
                let count = ((stop - start) / step + 1e-9).floor() as usize;
                (0..=count).map(|i| (start + i as f64 * step).min(1.0)).collect()
            }
        }
    }

    pub fn scalar(&self) -> Option<f64> {
        match *self {
            GammaSpec::Scalar(g) => Some(g),
            GammaSpec::Range { .. } => None,
        }
    }
}

/// Filter strength: none, a fixed value, or solved for equal measures.
#[derive(Debug, Clone, PartialEq)]
pub enum KappaSpec {
    None,
    Value(f64),
    Solve { lhs: Measure, rhs: Measure },
}

/// One experiment: initial state, which qubits decohere, which are filtered,
/// and what to measure.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub state: StateId,
    pub decohere: Vec<usize>,
    pub p: f64,
    pub gamma: GammaSpec,
    pub filter_qubits: Vec<usize>,
    pub kappa: KappaSpec,
    pub measures: Vec<Measure>,
}

impl ScenarioConfig {
    /// Unfiltered scenario at `p = 1/2` and `gamma = 0`.
    pub fn new(state: StateId, decohere: &[usize], measures: Vec<Measure>) -> Result<Self> {
        Self {
            state,
            decohere: decohere.to_vec(),
            p: GadParams::DEFAULT_P,
            gamma: GammaSpec::Scalar(0.0),
            filter_qubits: Vec::new(),
            kappa: KappaSpec::None,
            measures,
        }
        .validated()
    }

    pub fn with_filter(mut self, filter_qubits: &[usize]) -> Result<Self> {
        self.filter_qubits = filter_qubits.to_vec();
        self.validated()
    }

    /// Checks ranges, disjointness of decohering and filtered qubits, and
    /// every measure against the register.
    pub fn validated(self) -> Result<Self> {
        let reg = self.state.register();
        let bad = |e: Error| Error::InvalidScenario(e.to_string());
        reg.check_distinct(&self.decohere).map_err(bad)?;
        reg.check_distinct(&self.filter_qubits).map_err(bad)?;
        if let Some(q) = self.filter_qubits.iter().find(|q| self.decohere.contains(q)) {
            return Err(Error::InvalidScenario(format!(
                "qubit {q} is both decohering and filtered"
            )));
        }
        GadParams::new(0.0, self.p).map_err(bad)?;
        self.gamma.validate().map_err(bad)?;
        match &self.kappa {
            KappaSpec::None => {}
            KappaSpec::Value(k) => {
                FilterParams::new(*k).map_err(bad)?;
            }
            KappaSpec::Solve { lhs, rhs } => {
                lhs.validate(reg).map_err(bad)?;
                rhs.validate(reg).map_err(bad)?;
            }
        }
        if !matches!(self.kappa, KappaSpec::None) && self.filter_qubits.is_empty() {
            return Err(Error::InvalidScenario("kappa given but no filter qubits".into()));
        }
        for m in &self.measures {
            m.validate(reg).map_err(bad)?;
        }
        Ok(self)
    }
}

/// One row of experiment output.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub gamma: f64,
    pub kappa: Option<f64>,
    pub success_prob: f64,
    pub values: Vec<(Measure, f64)>,
}

impl SweepRecord {
    pub fn get(&self, measure: &Measure) -> Option<f64> {
        self.values.iter().find(|(m, _)| m == measure).map(|&(_, v)| v)
    }
}

/// Normalized conditional state after GAD(gamma) on the decohering qubits and,
/// if `kappa` is given, the filter on every filter qubit; plus the filter's
/// success probability.
pub fn evolve(cfg: &ScenarioConfig, gamma: f64, kappa: Option<f64>) -> Result<(DenseMatrix, f64)> {
    let reg = cfg.state.register();
    let gad = gad_channel(GadParams::new(gamma, cfg.p)?);
    let mut assignment: Assignment = cfg.decohere.iter().map(|&q| (q, gad.clone())).collect();
    if let Some(k) = kappa {
        let filter = filter_channel(FilterParams::new(k)?);
        assignment.extend(cfg.filter_qubits.iter().map(|&q| (q, filter.clone())));
    }
    let out = apply_channels(&cfg.state.density(), reg, &assignment)?;
    let rho = out.normalized()?;
    Ok((rho, out.success_prob))
}

/// Value of a single measure at `(gamma, kappa)`.
pub fn measure_at(cfg: &ScenarioConfig, measure: &Measure, gamma: f64, kappa: Option<f64>) -> Result<f64> {
    let (rho, _) = evolve(cfg, gamma, kappa)?;
    measure.evaluate(&rho, cfg.state.register())
}

/// Runs the pipeline at one parameter point. `kappa` is ignored (and
/// recorded as `None`) when the scenario has no filter qubits.
pub fn run_point(cfg: &ScenarioConfig, gamma: f64, kappa: Option<f64>) -> Result<SweepRecord> {
    let kappa = kappa.filter(|_| !cfg.filter_qubits.is_empty());
    let (rho, success_prob) = evolve(cfg, gamma, kappa)?;
    let reg = cfg.state.register();
    let values = cfg
        .measures
        .iter()
        .map(|m| m.evaluate(&rho, reg).map(|v| (m.clone(), v)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepRecord {
        gamma,
        kappa,
        success_prob,
        values,
    })
}

/// One record per grid point, in grid order. Points are evaluated in
/// parallel.
pub fn sweep_gamma(cfg: &ScenarioConfig, grid: &[f64], kappa: Option<f64>) -> Result<Vec<SweepRecord>> {
    if let Some(g) = grid.iter().find(|g| !(0.0..=1.0).contains(*g)) {
        return Err(Error::InvalidParameter(format!("gamma {g} outside [0, 1]")));
    }
    let ascending = grid.windows(2).all(|w| w[0] <= w[1]);
    let descending = grid.windows(2).all(|w| w[0] >= w[1]);
    if !ascending && !descending {
        return Err(Error::InvalidParameter("gamma grid is not monotone".into()));
    }
    grid.par_iter().map(|&g| run_point(cfg, g, kappa)).collect()
}
