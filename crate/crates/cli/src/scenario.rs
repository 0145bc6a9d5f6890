//! Line-oriented `key = value` scenario files.
//!
//! ```text
//! # W state, damping on b and c
//! state    = w:3
//! decohere = b,c
//! filter   = a
//! gamma    = 0:0.01:1
//! kappa    = solve(pairwise:ab,pairwise:bc)
//! measures = pairwise:ab,pairwise:bc
//! ```

use std::collections::HashMap;
use std::path::PathBuf;

use esd_core::channels::{FilterParams, GadParams};
use esd_core::experiments::{GammaSpec, KappaSpec, ScenarioConfig};
use esd_core::linalg::QubitRegister;
use esd_core::measures::{letter_qubit, Measure};
use esd_core::states::StateId;
use thiserror::Error;

const KEYS: [&str; 8] = [
    "state", "decohere", "filter", "gamma", "kappa", "p", "measures", "output",
];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}` (first set on line {first})")]
    DuplicateKey { line: usize, key: String, first: usize },
    #[error("line {line}: {key}: {message}")]
    Invalid { line: usize, key: String, message: String },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioFile {
    pub config: ScenarioConfig,
    pub output: Option<PathBuf>,
}

struct Entries<'a> {
    values: HashMap<&'a str, (usize, &'a str)>,
}

impl<'a> Entries<'a> {
    fn get(&self, key: &str) -> Option<(usize, &'a str)> {
        self.values.get(key).copied()
    }

    fn invalid(&self, key: &str, message: impl ToString) -> ScenarioError {
        let line = self.get(key).map_or(0, |(l, _)| l);
        ScenarioError::Invalid {
            line,
            key: key.to_string(),
            message: message.to_string(),
        }
    }
}

pub fn parse_scenario(text: &str) -> Result<ScenarioFile, ScenarioError> {
    let mut values: HashMap<&str, (usize, &str)> = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ScenarioError::Syntax {
                line,
                text: content.to_string(),
            });
        };
        let key = key.trim();
        let Some(&known) = KEYS.iter().find(|k| **k == key) else {
            return Err(ScenarioError::UnknownKey {
                line,
                key: key.to_string(),
            });
        };
        if let Some(&(first, _)) = values.get(known) {
            return Err(ScenarioError::DuplicateKey {
                line,
                key: known.to_string(),
                first,
            });
        }
        values.insert(known, (line, value.trim()));
    }
    let entries = Entries { values };

    let (_, state_text) = entries.get("state").ok_or(ScenarioError::Missing("state"))?;
    let state: StateId = state_text.parse().map_err(|e| entries.invalid("state", e))?;
    let reg = state.register();

    let decohere = qubit_list(&entries, "decohere", reg)?;
    let filter_qubits = qubit_list(&entries, "filter", reg)?;
    if let Some(q) = filter_qubits.iter().find(|q| decohere.contains(q)) {
        return Err(entries.invalid(
            "filter",
            format!("qubit {} is also decohering", esd_core::measures::qubit_letter(*q)),
        ));
    }

    let p = match entries.get("p") {
        Some((_, text)) => {
            let p = number(&entries, "p", text)?;
            GadParams::new(0.0, p).map_err(|e| entries.invalid("p", e))?;
            p
        }
        None => GadParams::DEFAULT_P,
    };

    let gamma = match entries.get("gamma") {
        Some((_, text)) => {
            let spec = parse_gamma(&entries, text)?;
            spec.validate().map_err(|e| entries.invalid("gamma", e))?;
            spec
        }
        None => GammaSpec::Scalar(0.0),
    };

    let kappa = match entries.get("kappa") {
        Some((_, text)) => parse_kappa(&entries, text, reg)?,
        None => KappaSpec::None,
    };
    if kappa != KappaSpec::None && filter_qubits.is_empty() {
        return Err(entries.invalid("kappa", "kappa given but no filter qubits"));
    }

    let measures = match entries.get("measures") {
        Some((_, text)) => split_list(text)
            .map(|d| {
                let m: Measure = d.parse().map_err(|e| entries.invalid("measures", e))?;
                m.validate(reg).map_err(|e| entries.invalid("measures", e))?;
                Ok(m)
            })
            .collect::<Result<Vec<_>, _>>()?,
        None => Vec::new(),
    };

    let output = entries.get("output").map(|(_, text)| PathBuf::from(text));
    if output.as_ref().is_some_and(|o| o.as_os_str().is_empty()) {
        return Err(entries.invalid("output", "empty path"));
    }

    let config = ScenarioConfig {
        state,
        decohere,
        p,
        gamma,
        filter_qubits,
        kappa,
        measures,
    }
    .validated()
    .map_err(|e| ScenarioError::Invalid {
        line: 0,
        key: "scenario".into(),
        message: e.to_string(),
    })?;
    Ok(ScenarioFile { config, output })
}

fn split_list(text: &str) -> impl Iterator<Item = &str> {
    text.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn number(entries: &Entries, key: &str, text: &str) -> Result<f64, ScenarioError> {
    text.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| entries.invalid(key, format!("`{text}` is not a number")))
}

fn qubit_list(entries: &Entries, key: &str, reg: QubitRegister) -> Result<Vec<usize>, ScenarioError> {
    let Some((_, text)) = entries.get(key) else {
        return Ok(Vec::new());
    };
    let qubits = split_list(text)
        .map(|tok| {
            let mut chars = tok.chars();
            match (chars.next().and_then(letter_qubit), chars.next()) {
                (Some(q), None) => Ok(q),
                _ => Err(entries.invalid(key, format!("`{tok}` is not a qubit letter"))),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    reg.check_distinct(&qubits).map_err(|e| entries.invalid(key, e))?;
    Ok(qubits)
}

fn parse_gamma(entries: &Entries, text: &str) -> Result<GammaSpec, ScenarioError> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [g] => Ok(GammaSpec::Scalar(number(entries, "gamma", g)?)),
        [start, step, stop] => Ok(GammaSpec::Range {
            start: number(entries, "gamma", start)?,
            step: number(entries, "gamma", step)?,
            stop: number(entries, "gamma", stop)?,
        }),
        _ => Err(entries.invalid("gamma", "expected a number or start:step:stop")),
    }
}

fn parse_kappa(entries: &Entries, text: &str, reg: QubitRegister) -> Result<KappaSpec, ScenarioError> {
    if let Some(inner) = text.strip_prefix("solve(").and_then(|t| t.strip_suffix(')')) {
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        let [lhs, rhs] = parts.as_slice() else {
            return Err(entries.invalid("kappa", "expected solve(<lhs>,<rhs>)"));
        };
        let parse = |d: &str| -> Result<Measure, ScenarioError> {
            let m: Measure = d.parse().map_err(|e| entries.invalid("kappa", e))?;
            m.validate(reg).map_err(|e| entries.invalid("kappa", e))?;
            Ok(m)
        };
        return Ok(KappaSpec::Solve {
            lhs: parse(lhs)?,
            rhs: parse(rhs)?,
        });
    }
    let k = number(entries, "kappa", text)?;
    FilterParams::new(k).map_err(|e| entries.invalid("kappa", e))?;
    Ok(KappaSpec::Value(k))
}
