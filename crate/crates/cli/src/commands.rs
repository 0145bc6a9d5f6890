//! Subcommand bodies. Each returns data; printing and file output live in
//! the binary.

use anyhow::{bail, Context, Result};
use esd_core::experiments::{
    find_esd_threshold, ghz_retrieval_report, run_point, solve_equal_kappa, sweep_gamma, w_scaling_study,
    KappaSolution, KappaSpec, RetrievalReport, RetrievalStatus, SweepRecord, WScalingRow,
};
use esd_core::measures::Measure;

use crate::csv::format_sig;
use crate::scenario::ScenarioFile;

/// Digits used for scalars printed to the terminal.
pub const SCALAR_DIGITS: usize = 6;

pub fn scalar(x: f64) -> String {
    format_sig(x, SCALAR_DIGITS)
}

pub fn sweep(file: &ScenarioFile) -> Result<Vec<SweepRecord>> {
    let cfg = &file.config;
    if cfg.measures.is_empty() {
        bail!("scenario lists no measures; add `measures = ...`");
    }
    match &cfg.kappa {
        KappaSpec::None => Ok(sweep_gamma(cfg, &cfg.gamma.grid(), None)?),
        KappaSpec::Value(k) => Ok(sweep_gamma(cfg, &cfg.gamma.grid(), Some(*k))?),
        KappaSpec::Solve { lhs, rhs } => {
            let gamma = cfg
                .gamma
                .scalar()
                .context("kappa = solve(...) needs a single gamma value")?;
            let sol = solve_equal_kappa(cfg, gamma, lhs, rhs)?;
            Ok(vec![run_point(cfg, gamma, Some(sol.kappa))?])
        }
    }
}

pub fn threshold(file: &ScenarioFile, measure: &str) -> Result<Option<f64>> {
    let m: Measure = measure.parse()?;
    Ok(find_esd_threshold(&file.config, &m)?)
}

pub fn solve_kappa(file: &ScenarioFile, lhs: &str, rhs: &str) -> Result<KappaSolution> {
    let gamma = file
        .config
        .gamma
        .scalar()
        .context("solve-kappa needs a single gamma value")?;
    Ok(solve_equal_kappa(&file.config, gamma, &lhs.parse()?, &rhs.parse()?)?)
}

pub fn scaling_table(rows: &[WScalingRow]) -> String {
    let mut out = String::from("n,k,gamma_star,kappa_star,retrieved,prob,preserved_pairwise\n");
    for r in rows {
        let pair = r.preserved_pairwise.map(scalar).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.n,
            r.k,
            scalar(r.gamma_star),
            scalar(r.kappa_star),
            scalar(r.retrieved),
            scalar(r.success_prob),
            pair
        ));
    }
    out
}

pub fn scaling(n: usize, k: usize) -> Result<String> {
    Ok(scaling_table(&w_scaling_study(n, k)?))
}

pub fn ghz_report_text(report: &RetrievalReport) -> String {
    let status = match report.status {
        RetrievalStatus::NoRetrieval => "no-retrieval",
        RetrievalStatus::Retrieved => "retrieved",
        RetrievalStatus::NotApplicable => "not-applicable",
    };
    let mut out = format!("{status}\n");
    if let Some(g) = report.gamma {
        out.push_str(&format!("gamma = {}\n", scalar(g)));
    }
    let dead: Vec<String> = report.dead.iter().map(|m| m.to_string()).collect();
    out.push_str(&format!("dead = {}\n", dead.join(",")));
    if let Some((m, k, v)) = &report.revival {
        out.push_str(&format!("revived = {m} at kappa {} ({})\n", scalar(*k), scalar(*v)));
    }
    out
}

pub fn ghz_check(n: usize) -> Result<RetrievalReport> {
    Ok(ghz_retrieval_report(n, None)?)
}
