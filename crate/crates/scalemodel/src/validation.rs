//! Empirical measurement ingestion and model error (MAPE).

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    Time,
    Speedup,
}

/// Measured (worker count, value) pairs, sorted by worker count.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalSeries {
    pub kind: SeriesKind,
    pub points: Vec<(u32, f64)>,
    pub reference_n: Option<u32>,
}

/// Parses the "n,value" CSV format. Values must be positive and worker
/// counts unique; rows come out sorted by n.
pub fn load_empirical_csv(text: &str, kind: SeriesKind) -> Result<EmpiricalSeries> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim_end() == "n,value" => {}
        _ => {
            return Err(Error::Csv {
                line: 1,
                msg: "missing header `n,value`".into(),
            })
        }
    }
    let mut points: Vec<(u32, f64)> = Vec::new();
    for (i, line) in lines {
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let (n_str, v_str) = line.split_once(',').ok_or_else(|| Error::Csv {
            line: i + 1,
            msg: "expected `n,value`".into(),
        })?;
        let n: u32 = n_str.trim().parse().map_err(|e| Error::Csv {
            line: i + 1,
            msg: format!("bad worker count: {e}"),
        })?;
        let value: f64 = v_str.trim().parse().map_err(|e| Error::Csv {
            line: i + 1,
            msg: format!("bad value: {e}"),
        })?;
        if points.iter().any(|&(m, _)| m == n) {
            return Err(Error::DuplicateN(n));
        }
        if !(value > 0.0) {
            return Err(Error::NonPositiveValue { n, value });
        }
        points.push((n, value));
    }
    points.sort_by_key(|&(n, _)| n);
    Ok(EmpiricalSeries {
        kind,
        points,
        reference_n: None,
    })
}

/// Converts a measured time series into speedups relative to the
/// measurement at `reference_n`.
pub fn normalize_to_reference(series: &EmpiricalSeries, reference_n: u32) -> Result<EmpiricalSeries> {
    if series.kind != SeriesKind::Time {
        return Err(Error::NotATimeSeries);
    }
    let t_ref = series
        .points
        .iter()
        .find(|&&(n, _)| n == reference_n)
        .map(|&(_, v)| v)
        .ok_or(Error::ReferenceMissing(reference_n))?;
    Ok(EmpiricalSeries {
        kind: SeriesKind::Speedup,
        points: series
            .points
            .iter()
            .map(|&(n, v)| (n, t_ref / v))
            .collect(),
        reference_n: Some(reference_n),
    })
}

/// Mean absolute percentage error over the measured worker counts:
/// 100 · mean(|pred − actual| / |actual|). Every measured n must have
/// a predicted value.
pub fn mape(predicted: &[(u32, f64)], actual: &EmpiricalSeries) -> Result<f64> {
    let missing: Vec<u32> = actual
        .points
        .iter()
        .map(|&(n, _)| n)
        .filter(|n| !predicted.iter().any(|&(m, _)| m == *n))
        .collect();
    if !missing.is_empty() {
        return Err(Error::UnmatchedPoints(missing));
    }
    if actual.points.is_empty() {
        return Err(Error::UnmatchedPoints(vec![]));
    }
    let mut sum = 0.0;
    for &(n, a) in &actual.points {
        if a == 0.0 {
            return Err(Error::NonPositiveValue { n, value: a });
        }
        let p = predicted
            .iter()
            .find(|&&(m, _)| m == n)
            .map(|&(_, v)| v)
            .expect("checked above");
        sum += (p - a).abs() / a.abs();
    }
    Ok(100.0 * sum / actual.points.len() as f64)
}
