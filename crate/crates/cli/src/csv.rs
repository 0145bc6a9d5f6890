//! Sweep records as CSV: header `gamma,kappa,prob,<descriptors>`, numbers
//! with 12 significant digits, empty `kappa` field when unfiltered.

use esd_core::experiments::SweepRecord;
use esd_core::measures::Measure;
use thiserror::Error;

pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CsvError {
    #[error("no records to write")]
    Empty,
    #[error("record {index} has measures {found:?}, header has {expected:?}")]
    ColumnMismatch {
        index: usize,
        expected: Vec<String>,
        found: Vec<String>,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// `%g`-style formatting with `digits` significant digits.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mantissa), exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn descriptors(record: &SweepRecord) -> Vec<String> {
    record.values.iter().map(|(m, _)| m.to_string()).collect()
}

/// Serializes records sharing one measure list. Lines end with `\n`.
pub fn write_records(records: &[SweepRecord]) -> Result<String, CsvError> {
    let first = records.first().ok_or(CsvError::Empty)?;
    let header = descriptors(first);
    let mut out = String::from("gamma,kappa,prob");
    for d in &header {
        out.push(',');
        out.push_str(d);
    }
    out.push('\n');
    for (index, rec) in records.iter().enumerate() {
        let found = descriptors(rec);
        if found != header {
            return Err(CsvError::ColumnMismatch {
                index,
                expected: header,
                found,
            });
        }
        out.push_str(&format_sig(rec.gamma, SIGNIFICANT_DIGITS));
        out.push(',');
        if let Some(k) = rec.kappa {
            out.push_str(&format_sig(k, SIGNIFICANT_DIGITS));
        }
        out.push(',');
        out.push_str(&format_sig(rec.success_prob, SIGNIFICANT_DIGITS));
        for (_, v) in &rec.values {
            out.push(',');
            out.push_str(&format_sig(*v, SIGNIFICANT_DIGITS));
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn read_records(text: &str) -> Result<Vec<SweepRecord>, CsvError> {
    let err = |line: usize, message: String| CsvError::Parse { line, message };
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| err(1, "missing header".into()))?;
    let cols: Vec<&str> = header.split(',').collect();
    if cols.len() < 3 || cols[..3] != ["gamma", "kappa", "prob"] {
        return Err(err(
            1,
            format!("header must start with gamma,kappa,prob, got `{header}`"),
        ));
    }
    let measures = cols[3..]
        .iter()
        .map(|d| d.parse::<Measure>().map_err(|e| err(1, e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;

    let mut records = Vec::new();
    for (idx, row) in lines {
        let line = idx + 1;
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != cols.len() {
            return Err(err(
                line,
                format!("expected {} fields, got {}", cols.len(), fields.len()),
            ));
        }
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| err(line, format!("`{s}` is not a number")))
        };
        let kappa = if fields[1].is_empty() {
            None
        } else {
            Some(num(fields[1])?)
        };
        let values = measures
            .iter()
            .zip(&fields[3..])
            .map(|(m, s)| Ok((m.clone(), num(s)?)))
            .collect::<Result<Vec<_>, CsvError>>()?;
        records.push(SweepRecord {
            gamma: num(fields[0])?,
            kappa,
            success_prob: num(fields[2])?,
            values,
        });
    }
    Ok(records)
}
