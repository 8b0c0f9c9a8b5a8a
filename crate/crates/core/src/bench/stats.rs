use super::plan::Metric;
use super::record::RunRecord;
use crate::algorithm::{Algorithm, Variant};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GapError {
    #[error("baseline cost is zero")]
    ZeroBaseline,
    #[error("baseline cost is negative: {0}")]
    NegativeBaseline(f64),
}

/// Percentage improvement of `variant_cost` over `baseline_cost`; positive
/// means the variant is better.
pub fn compute_gap(baseline_cost: f64, variant_cost: f64) -> Result<f64, GapError> {
    if baseline_cost == 0.0 {
        return Err(GapError::ZeroBaseline);
    }
    if baseline_cost < 0.0 {
        return Err(GapError::NegativeBaseline(baseline_cost));
    }
    Ok(100.0 * (baseline_cost - variant_cost) / baseline_cost)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub mean: f64,
    /// Sample standard deviation; zero for a single value.
    pub stddev: f64,
}

fn median_sorted(v: &[f64]) -> f64 {
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

impl Stats {
    /// Quartiles are Tukey hinges: medians of the lower and upper halves,
    /// each half including the overall median when the count is odd.
    pub fn from_values(values: &[f64]) -> Option<Stats> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let n = v.len();
        let mean = v.iter().sum::<f64>() / n as f64;
        let stddev = if n > 1 {
            (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Some(Stats {
            min: v[0],
            q1: median_sorted(&v[..n.div_ceil(2)]),
            median: median_sorted(&v),
            q3: median_sorted(&v[n / 2..]),
            max: v[n - 1],
            mean,
            stddev,
        })
    }
}

/// Distribution of one metric for an (algorithm, variant, config, instance)
/// group. `stats` is `None` (reported as N/A) when every run failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub algorithm: Algorithm,
    pub variant: Variant,
    pub config_id: String,
    pub instance: String,
    pub metric: Metric,
    pub runs: usize,
    pub runs_with_result: usize,
    pub stats: Option<Stats>,
}

fn metric_for(algorithm: Algorithm, metric: Option<Metric>) -> Metric {
    metric.unwrap_or(if algorithm == Algorithm::BranchAndBound {
        Metric::Runtime
    } else {
        Metric::BestCost
    })
}

/// Groups records and computes order statistics over runs that produced a
/// tour. Output is sorted by group key.
pub fn summarize(records: &[RunRecord], metric: Option<Metric>) -> Vec<SummaryStats> {
    let mut groups: BTreeMap<(Algorithm, Variant, &str, &str), Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.algorithm, r.variant, &r.config_id, &r.instance))
            .or_default()
            .push(r);
    }
    groups
        .into_iter()
        .map(|((algorithm, variant, config_id, instance), rows)| {
            let metric = metric_for(algorithm, metric);
            let values: Vec<f64> = rows
                .iter()
                .filter(|r| r.status.has_result())
                .filter_map(|r| match metric {
                    Metric::BestCost => r.best_cost,
                    Metric::Runtime => Some(r.elapsed_s),
                })
                .collect();
            SummaryStats {
                algorithm,
                variant,
                config_id: config_id.to_string(),
                instance: instance.to_string(),
                metric,
                runs: rows.len(),
                runs_with_result: values.len(),
                stats: Stats::from_values(&values),
            }
        })
        .collect()
}

/// Median-based comparison of one group against the baseline group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapRow {
    pub algorithm: Algorithm,
    pub instance: String,
    pub metric: Metric,
    pub baseline_variant: Variant,
    pub baseline_config: String,
    pub variant: Variant,
    pub config_id: String,
    pub baseline_median: Option<f64>,
    pub variant_median: Option<f64>,
    /// `None` when either side has no result or the baseline is zero.
    pub gap_percent: Option<f64>,
}

/// Compares every group against the baseline group of the same algorithm
/// and instance. The baseline group has `variant == baseline`, preferring
/// the config id `original` when there are several.
pub fn gap_table(summary: &[SummaryStats], baseline: Variant) -> Vec<GapRow> {
    let mut rows = Vec::new();
    for s in summary {
        let candidates = summary
            .iter()
            .filter(|b| b.algorithm == s.algorithm && b.instance == s.instance && b.variant == baseline);
        let base = candidates
            .clone()
            .find(|b| b.config_id == "original")
            .or_else(|| candidates.clone().next());
        let Some(base) = base else { continue };
        if std::ptr::eq(base, s) {
            continue;
        }
        let baseline_median = base.stats.map(|st| st.median);
        let variant_median = s.stats.map(|st| st.median);
        let gap_percent = match (baseline_median, variant_median) {
            (Some(b), Some(v)) => compute_gap(b, v).ok(),
            _ => None,
        };
        rows.push(GapRow {
            algorithm: s.algorithm,
            instance: s.instance.clone(),
            metric: s.metric,
            baseline_variant: base.variant,
            baseline_config: base.config_id.clone(),
            variant: s.variant,
            config_id: s.config_id.clone(),
            baseline_median,
            variant_median,
            gap_percent,
        });
    }
    rows
}

fn cell(v: Option<f64>, signed: bool) -> String {
    match (v, signed) {
        (Some(x), true) => format!("{x:+.1}"),
        (Some(x), false) => format!("{x:.4}"),
        (None, _) => "N/A".to_string(),
    }
}

/// Plain-text gap table, one row per comparison.
pub fn format_gap_table(rows: &[GapRow]) -> String {
    let header = ["algorithm", "instance", "variant", "config", "baseline", "value", "gap_%"];
    let body: Vec<[String; 7]> = rows
        .iter()
        .map(|r| {
            [
                r.algorithm.to_string(),
                r.instance.clone(),
                r.variant.to_string(),
                r.config_id.clone(),
                cell(r.baseline_median, false),
                cell(r.variant_median, false),
                cell(r.gap_percent, true),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &body {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &[&str]| {
        let parts: Vec<String> = cells.iter().zip(widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(&header);
    for row in &body {
        line(&row.iter().map(String::as_str).collect::<Vec<_>>());
    }
    out
}
