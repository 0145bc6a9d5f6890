//! Fixed scenarios behind `esdsim reproduce`.

use std::fmt;
use std::str::FromStr;

use esd_core::experiments::{solve_equal_kappa, sweep_gamma, GammaSpec, ScenarioConfig, SweepRecord};
use esd_core::measures::Measure;
use esd_core::states::StateId;

pub const SWEEP: GammaSpec = GammaSpec::Range {
    start: 0.0,
    step: 0.01,
    stop: 1.0,
};
/// Damping at which the W-state filter is tuned.
pub const FIG2_SOLVE_GAMMA: f64 = 0.41;
pub const FIG5_KAPPA: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// W state, damping on b and c, filter on a.
    Fig2,
    /// Cluster state, damping on b and c, filter on a.
    Fig5,
}

impl Figure {
    pub fn default_output(&self) -> String {
        format!("{self}.csv")
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Figure::Fig2 => "fig2",
            Figure::Fig5 => "fig5",
        })
    }
}

impl FromStr for Figure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fig2" => Ok(Figure::Fig2),
            "fig5" => Ok(Figure::Fig5),
            other => Err(format!("unknown figure `{other}`, expected fig2 or fig5")),
        }
    }
}

fn measures(descriptors: &[&str]) -> esd_core::Result<Vec<Measure>> {
    descriptors.iter().map(|d| d.parse()).collect()
}

pub fn config(figure: Figure) -> esd_core::Result<ScenarioConfig> {
    let (state, ms) = match figure {
        Figure::Fig2 => (
            StateId::w(3)?,
            measures(&["pairwise:ab", "pairwise:ac", "pairwise:bc"])?,
        ),
        Figure::Fig5 => (
            StateId::cluster4(),
            measures(&["bipartite:ab|c", "bipartite:cd|b", "bipartite:ad|b", "bipartite:ad|c"])?,
        ),
    };
    let mut cfg = ScenarioConfig::new(state, &[1, 2], ms)?.with_filter(&[0])?;
    cfg.gamma = SWEEP;
    Ok(cfg)
}

/// Unfiltered sweep followed by the filtered sweep over the same grid.
pub fn records(figure: Figure) -> esd_core::Result<Vec<SweepRecord>> {
    let cfg = config(figure)?;
    let kappa = match figure {
        Figure::Fig2 => {
            solve_equal_kappa(
                &cfg,
                FIG2_SOLVE_GAMMA,
                &Measure::pairwise(0, 1),
                &Measure::pairwise(1, 2),
            )?
            .kappa
        }
        Figure::Fig5 => FIG5_KAPPA,
    };
    let grid = cfg.gamma.grid();
    let mut out = sweep_gamma(&cfg, &grid, None)?;
    out.extend(sweep_gamma(&cfg, &grid, Some(kappa))?);
    Ok(out)
}
