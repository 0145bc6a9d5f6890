//! Composite studies built from the scenario primitives: W-state scaling with
//! the number of preserved qubits, the GHZ no-retrieval check and the
//! cluster-state entanglement bookkeeping under filtering.

use rayon::prelude::*;

use super::{find_esd_threshold, measure_at, run_point, solve_equal_kappa, ScenarioConfig};
use crate::error::{Error, Result};
use crate::measures::{Measure, ZERO_THRESHOLD};
use crate::states::StateId;

/// `[lo, hi)` damping window in which filtering qubit `a` of the cluster
/// state is studied.
pub const CLUSTER_RETRIEVAL_WINDOW: (f64, f64) = (0.57, 0.69);

/// Filter strengths tried when looking for a revival.
pub const KAPPA_CHECK_GRID: [f64; 19] = [
    0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50, 0.55, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95,
];

/// One `(N, k)` configuration of the W-state study.
#[derive(Debug, Clone, PartialEq)]
pub struct WScalingRow {
    pub n: usize,
    pub k: usize,
    /// Sudden-death point of the concurrence between two decohering qubits.
    pub gamma_star: f64,
    /// Common filter strength equalizing the preserved-decohering and
    /// decohering-decohering concurrences.
    pub kappa_star: f64,
    /// Decohering-pair concurrence at `kappa_star`.
    pub retrieved: f64,
    pub success_prob: f64,
    /// Concurrence between the first two preserved qubits after filtering,
    /// when `k >= 2`.
    pub preserved_pairwise: Option<f64>,
}

/// W_N with qubits `0..k` preserved and filtered, `k..N` decohering at their
/// pairwise sudden-death point.
pub fn w_scaling_point(n: usize, k: usize) -> Result<WScalingRow> {
    if !(3..=6).contains(&n) || k == 0 || k + 2 > n {
        return Err(Error::InvalidParameter(format!(
            "need 3 <= N <= 6 and 1 <= k <= N-2, got N = {n}, k = {k}"
        )));
    }
    let preserved: Vec<usize> = (0..k).collect();
    let decohering: Vec<usize> = (k..n).collect();
    let cfg = ScenarioConfig::new(StateId::w(n)?, &decohering, vec![])?.with_filter(&preserved)?;

    let dead_pair = Measure::pairwise(k, k + 1);
    let mixed_pair = Measure::pairwise(0, k);
    let gamma_star = find_esd_threshold(&cfg, &dead_pair)?.ok_or_else(|| Error::NoThreshold(dead_pair.to_string()))?;
    let sol = solve_equal_kappa(&cfg, gamma_star, &mixed_pair, &dead_pair)?;

    let preserved_pairwise = if k >= 2 {
        Some(measure_at(&cfg, &Measure::pairwise(0, 1), gamma_star, Some(sol.kappa))?)
    } else {
        None
    };
    Ok(WScalingRow {
        n,
        k,
        gamma_star,
        kappa_star: sol.kappa,
        retrieved: sol.rhs_value,
        success_prob: sol.success_prob,
        preserved_pairwise,
    })
}

/// Every valid `(N, k)` with `3 <= N <= n_max` and `1 <= k <= min(k_max, N-2)`,
/// ordered by `N` then `k`.
pub fn w_scaling_study(n_max: usize, k_max: usize) -> Result<Vec<WScalingRow>> {
    if !(3..=6).contains(&n_max) || k_max == 0 {
        return Err(Error::InvalidParameter(format!(
            "need 3 <= N <= 6 and k >= 1, got N = {n_max}, k = {k_max}"
        )));
    }
    let pairs: Vec<(usize, usize)> = (3..=n_max)
        .flat_map(|n| (1..=k_max.min(n - 2)).map(move |k| (n, k)))
        .collect();
    pairs.par_iter().map(|&(n, k)| w_scaling_point(n, k)).collect()
}

/// Outcome of a revival search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RetrievalStatus {
    /// Some measures are dead and no filter strength on the grid revives any.
    NoRetrieval,
    /// At least one dead measure becomes positive after filtering.
    Retrieved,
    /// Nothing is dead at the chosen damping, so there is nothing to retrieve.
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RetrievalReport {
    pub status: RetrievalStatus,
    pub gamma: Option<f64>,
    /// Monitored measures that are positive initially and zero after damping.
    pub dead: Vec<Measure>,
    /// First revival found: measure, filter strength, revived value.
    pub revival: Option<(Measure, f64, f64)>,
}

/// Every pairwise concurrence plus every single-qubit-versus-rest bipartite
/// concurrence of an `n`-qubit register.
pub fn default_monitored(n: usize) -> Vec<Measure> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(Measure::pairwise(i, j));
        }
    }
    for single in 0..n {
        let rest: Vec<usize> = (0..n).filter(|&q| q != single).collect();
        out.push(Measure::bipartite(&rest, &[single]));
    }
    out
}

/// Looks for a filter strength on [`KAPPA_CHECK_GRID`] that revives any
/// monitored measure killed by the damping. Measures that are zero already
/// in the initial state are not considered dead.
///
/// Without an explicit `gamma`, the damping is set 0.01 past the earliest
/// sudden death among the monitored measures that start out positive.
pub fn retrieval_check(cfg: &ScenarioConfig, monitored: &[Measure], gamma: Option<f64>) -> Result<RetrievalReport> {
    if cfg.filter_qubits.is_empty() {
        return Err(Error::InvalidScenario("retrieval check needs a filter qubit".into()));
    }
    let gamma = match gamma {
        Some(g) => g,
        None => {
            let thresholds = monitored
                .par_iter()
                .map(|m| match find_esd_threshold(cfg, m) {
                    Err(Error::ZeroAtStart(_)) => Ok(None),
                    other => other,
                })
                .collect::<Result<Vec<_>>>()?;
            match thresholds.into_iter().flatten().reduce(f64::min) {
                Some(first) => (first + 0.01).min(0.99),
                None => {
                    return Ok(RetrievalReport {
                        status: RetrievalStatus::NotApplicable,
                        gamma: None,
                        dead: Vec::new(),
                        revival: None,
                    })
                }
            }
        }
    };

    let all = ScenarioConfig {
        measures: monitored.to_vec(),
        ..cfg.clone()
    };
    let initial = run_point(&all, 0.0, None)?;
    let before = run_point(&all, gamma, None)?;
    let dead: Vec<Measure> = initial
        .values
        .iter()
        .zip(&before.values)
        .filter(|((_, v0), (_, v))| *v0 > 0.0 && *v <= 0.0)
        .map(|((m, _), _)| m.clone())
        .collect();
    if dead.is_empty() {
        return Ok(RetrievalReport {
            status: RetrievalStatus::NotApplicable,
            gamma: Some(gamma),
            dead,
            revival: None,
        });
    }

    let probe = ScenarioConfig {
        measures: dead.clone(),
        ..cfg.clone()
    };
    let rows = KAPPA_CHECK_GRID
        .par_iter()
        .map(|&k| run_point(&probe, gamma, Some(k)))
        .collect::<Result<Vec<_>>>()?;
    let revival = rows.iter().find_map(|row| {
        row.values
            .iter()
            .find(|(_, v)| *v >= ZERO_THRESHOLD)
            .map(|(m, v)| (m.clone(), row.kappa.unwrap_or(f64::NAN), *v))
    });
    let status = if revival.is_some() {
        RetrievalStatus::Retrieved
    } else {
        RetrievalStatus::NoRetrieval
    };
    Ok(RetrievalReport {
        status,
        gamma: Some(gamma),
        dead,
        revival,
    })
}

/// GHZ_N with GAD on the last two qubits and the filter on qubit `a`.
pub fn ghz_retrieval_report(n: usize, gamma: Option<f64>) -> Result<RetrievalReport> {
    if !(3..=5).contains(&n) {
        return Err(Error::InvalidParameter(format!(
            "GHZ check supports 3 <= N <= 5, got {n}"
        )));
    }
    let cfg = ScenarioConfig::new(StateId::ghz(n)?, &[n - 2, n - 1], vec![])?.with_filter(&[0])?;
    retrieval_check(&cfg, &default_monitored(n), gamma)
}

/// `true` when nothing that died can be revived by filtering.
pub fn ghz_retrieval_check(n: usize) -> Result<bool> {
    Ok(ghz_retrieval_report(n, None)?.status == RetrievalStatus::NoRetrieval)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PriceEntry {
    pub measure: Measure,
    pub before: f64,
    pub after: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PriceReport {
    pub gamma: f64,
    pub kappa: f64,
    pub success_prob: f64,
    pub entries: Vec<PriceEntry>,
}

impl PriceReport {
    pub fn delta(&self, measure: &Measure) -> Option<f64> {
        self.entries.iter().find(|e| &e.measure == measure).map(|e| e.delta)
    }
}

/// Cluster state with GAD on `b, c`: `BC_{ab|c}`, `BC_{cd|b}`, `BC_{ad|b}` and
/// `BC_{ad|c}` before and after filtering qubit `a`.
pub fn cluster_price_report(gamma: f64, kappa: f64) -> Result<PriceReport> {
    let (lo, hi) = CLUSTER_RETRIEVAL_WINDOW;
    if !(lo..hi).contains(&gamma) {
        return Err(Error::OutsideWindow { gamma, lo, hi });
    }
    let measures: Vec<Measure> = ["bipartite:ab|c", "bipartite:cd|b", "bipartite:ad|b", "bipartite:ad|c"]
        .iter()
        .map(|s| s.parse())
        .collect::<Result<_>>()?;
    let cfg = ScenarioConfig::new(StateId::cluster4(), &[1, 2], measures)?.with_filter(&[0])?;
    let before = run_point(&cfg, gamma, None)?;
    let after = run_point(&cfg, gamma, Some(kappa))?;
    let entries = before
        .values
        .iter()
        .zip(&after.values)
        .map(|((m, b), (_, a))| PriceEntry {
            measure: m.clone(),
            before: *b,
            after: *a,
            delta: a - b,
        })
        .collect();
    Ok(PriceReport {
        gamma,
        kappa,
        success_prob: after.success_prob,
        entries,
    })
}
