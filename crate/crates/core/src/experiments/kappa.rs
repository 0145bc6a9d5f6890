use rayon::prelude::*;

use super::{evolve, ScenarioConfig};
use crate::error::{Error, Result};
use crate::measures::Measure;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaSearch {
    pub lower: f64,
    pub upper: f64,
    /// Spacing of the bracketing scan.
    pub step: f64,
    pub tolerance: f64,
}

impl Default for KappaSearch {
    fn default() -> Self {
        Self {
            lower: 0.001,
            upper: 0.999,
            step: 0.01,
            tolerance: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KappaSolution {
    pub kappa: f64,
    pub lhs_value: f64,
    pub rhs_value: f64,
    pub success_prob: f64,
}

/// Filter strength at which `lhs` and `rhs` agree after filtering at `gamma`.
///
/// The interval `(0.001, 0.999)` is scanned for the first strict sign change
/// of `lhs - rhs`, which is then bisected. An identically zero difference has
/// no sign change and is rejected.
pub fn solve_equal_kappa(cfg: &ScenarioConfig, gamma: f64, lhs: &Measure, rhs: &Measure) -> Result<KappaSolution> {
    solve_equal_kappa_with(cfg, gamma, lhs, rhs, KappaSearch::default())
}

pub fn solve_equal_kappa_with(
    cfg: &ScenarioConfig,
    gamma: f64,
    lhs: &Measure,
    rhs: &Measure,
    search: KappaSearch,
) -> Result<KappaSolution> {
    if cfg.filter_qubits.is_empty() {
        return Err(Error::InvalidScenario(
            "solving for kappa needs at least one filter qubit".into(),
        ));
    }
    let reg = cfg.state.register();
    lhs.validate(reg)?;
    rhs.validate(reg)?;

    let evaluate = |k: f64| -> Result<(f64, f64, f64)> {
        let (rho, prob) = evolve(cfg, gamma, Some(k))?;
        Ok((lhs.evaluate(&rho, reg)?, rhs.evaluate(&rho, reg)?, prob))
    };
    let diff = |k: f64| evaluate(k).map(|(l, r, _)| l - r);

    let mut grid: Vec<f64> = Vec::new();
    let mut k = search.lower;
    let mut i = 0usize;
    while k < search.upper {
        grid.push(k);
        i += 1;
        k = search.lower + i as f64 * search.step;
    }
    grid.push(search.upper);

    let values = grid.par_iter().map(|&k| diff(k)).collect::<Result<Vec<f64>>>()?;
    let no_root = || Error::NoSignChange {
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    };
    let bracket = values.windows(2).position(|w| w[0] * w[1] < 0.0).ok_or_else(no_root)?;

    let (mut lo, mut hi) = (grid[bracket], grid[bracket + 1]);
    let lo_sign = values[bracket].signum();
    while hi - lo >= search.tolerance {
        let mid = 0.5 * (lo + hi);
        let f = diff(mid)?;
        if f == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if f.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let kappa = 0.5 * (lo + hi);
    let (lhs_value, rhs_value, success_prob) = evaluate(kappa)?;
    Ok(KappaSolution {
        kappa,
        lhs_value,
        rhs_value,
        success_prob,
    })
}
