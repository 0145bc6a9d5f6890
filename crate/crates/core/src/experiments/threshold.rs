use rayon::prelude::*;

use super::{measure_at, ScenarioConfig};
use crate::error::{Error, Result};
use crate::measures::Measure;

/// Coarse scan followed by bisection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdSearch {
    pub step: f64,
    /// Last gamma scanned; the measure is declared immortal if still positive here.
    pub upper: f64,
    /// Bisection stops once the bracket is narrower than this.
    pub tolerance: f64,
}

impl Default for ThresholdSearch {
    fn default() -> Self {
        Self {
            step: 0.01,
            upper: 0.99,
            tolerance: 1e-7,
        }
    }
}

/// Smallest gamma at which `measure` (without filtering) first drops to zero,
/// or `None` if it stays positive up to 0.99.
pub fn find_esd_threshold(cfg: &ScenarioConfig, measure: &Measure) -> Result<Option<f64>> {
    find_esd_threshold_with(cfg, measure, ThresholdSearch::default())
}

pub fn find_esd_threshold_with(
    cfg: &ScenarioConfig,
    measure: &Measure,
    search: ThresholdSearch,
) -> Result<Option<f64>> {
    measure.validate(cfg.state.register())?;
    if !(search.step > 0.0 && search.tolerance > 0.0) {
        return Err(Error::InvalidParameter(
            "threshold search needs positive step and tolerance".into(),
        ));
    }
    let value = |g: f64| measure_at(cfg, measure, g, None);
    if value(0.0)? <= 0.0 {
        return Err(Error::ZeroAtStart(measure.to_string()));
    }

    let count = (search.upper / search.step + 1e-9).floor() as usize;
    let grid: Vec<f64> = (1..=count).map(|i| i as f64 * search.step).collect();
    let values = grid.par_iter().map(|&g| value(g)).collect::<Result<Vec<f64>>>()?;
    let Some(first_dead) = values.iter().position(|&v| v <= 0.0) else {
        return Ok(None);
    };

    let mut alive = if first_dead == 0 { 0.0 } else { grid[first_dead - 1] };
    let mut dead = grid[first_dead];
    while dead - alive >= search.tolerance {
        let mid = 0.5 * (alive + dead);
        if value(mid)? <= 0.0 {
            dead = mid;
        } else {
            alive = mid;
        }
    }
    Ok(Some(dead))
}
