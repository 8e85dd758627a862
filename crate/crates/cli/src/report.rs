//! Aggregate tables over completed runs: scalability, applicability to the
//! initial solution, and hop statistics.

use std::fmt::Write as _;

use crate::error::{CliError, CliResult};
use crate::run::ConfigRecords;

pub const SCALABILITY_COLUMNS: [&str; 6] = ["problem", "optimizer", "n", "runs", "solved", "median_ffe"];
pub const APPLICABILITY_COLUMNS: [&str; 9] = [
    "problem",
    "optimizer",
    "runs",
    "count_min",
    "count_max",
    "count_med",
    "pct_min",
    "pct_max",
    "pct_med",
];
pub const HOPS_COLUMNS: [&str; 9] = [
    "problem",
    "optimizer",
    "runs",
    "mods_med",
    "avg_hops",
    "std_hops",
    "hmax_med",
    "hmax_min",
    "hmax_max",
];

/// Median with the midpoint convention for even counts.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { (v[m - 1] + v[m]) / 2.0 })
}

fn min_max_med(values: &[f64]) -> Option<(f64, f64, f64)> {
    let med = median(values)?;
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Some((min, max, med))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalabilityRow {
    pub problem: String,
    pub optimizer: String,
    pub n: usize,
    pub runs: usize,
    pub solved: usize,
    /// Over solved runs only; `None` when nothing was solved.
    pub median_ffe: Option<f64>,
}

/// One row per configuration, ordered by optimizer, problem family and size.
pub fn summarize_scalability(groups: &[ConfigRecords]) -> Vec<ScalabilityRow> {
    let mut rows: Vec<ScalabilityRow> = groups
        .iter()
        .map(|g| {
            let hits: Vec<f64> = g.records.iter().filter_map(|r| r.ffe_to_optimum).map(|f| f as f64).collect();
            ScalabilityRow {
                problem: g.info.problem.clone(),
                optimizer: g.info.optimizer.clone(),
                n: g.info.n,
                runs: g.records.len(),
                solved: hits.len(),
                median_ffe: median(&hits),
            }
        })
        .collect();
    rows.sort_by(|a, b| {
        (&a.optimizer, family(&a.problem), a.n, &a.problem).cmp(&(&b.optimizer, family(&b.problem), b.n, &b.problem))
    });
    rows
}

/// The problem description without its `n=` field.
fn family(problem: &str) -> String {
    problem
        .split_whitespace()
        .filter(|t| !t.starts_with("n="))
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApplicabilityRow {
    pub problem: String,
    pub optimizer: String,
    pub runs: usize,
    /// Min, max and median of the per-run count of modifications that do
    /// not improve the initial solution.
    pub count: (f64, f64, f64),
    /// The same for the per-run percentage.
    pub pct: (f64, f64, f64),
}

/// One row per configuration with at least one run.
pub fn summarize_applicability(groups: &[ConfigRecords]) -> Vec<ApplicabilityRow> {
    groups
        .iter()
        .filter_map(|g| {
            let counts: Vec<f64> = g.records.iter().map(|r| r.hops.not_applicable_count() as f64).collect();
            let pcts: Vec<f64> = g.records.iter().map(|r| r.hops.not_applicable_pct()).collect();
            Some(ApplicabilityRow {
                problem: g.info.problem.clone(),
                optimizer: g.info.optimizer.clone(),
                runs: g.records.len(),
                count: min_max_med(&counts)?,
                pct: min_max_med(&pcts)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct HopStatsRow {
    pub problem: String,
    pub optimizer: String,
    pub runs: usize,
    /// Median modifications per run.
    pub mods_median: f64,
    /// Mean and population standard deviation over all modifications of
    /// all runs.
    pub avg_hops: f64,
    pub std_hops: f64,
    /// Median, min and max over runs of the per-run largest hop count.
    pub hops_max: (f64, f64, f64),
}

/// One row per configuration; fails when there is no run at all.
pub fn summarize_hop_stats(groups: &[ConfigRecords]) -> CliResult<Vec<HopStatsRow>> {
    if groups.iter().all(|g| g.records.is_empty()) {
        return Err(CliError::NoRecords);
    }
    Ok(groups
        .iter()
        .filter(|g| !g.records.is_empty())
        .map(|g| {
            let all: Vec<f64> = g
                .records
                .iter()
                .flat_map(|r| r.hops.per_modification_hops().iter().map(|&h| h as f64))
                .collect();
            let (avg, std) = if all.is_empty() {
                (0.0, 0.0)
            } else {
                let mean = all.iter().sum::<f64>() / all.len() as f64;
                let var = all.iter().map(|h| (h - mean).powi(2)).sum::<f64>() / all.len() as f64;
                (mean, var.sqrt())
            };
            let mods: Vec<f64> = g.records.iter().map(|r| r.hops.modifications() as f64).collect();
            let maxes: Vec<f64> = g.records.iter().map(|r| r.hops.max_hops() as f64).collect();
            HopStatsRow {
                problem: g.info.problem.clone(),
                optimizer: g.info.optimizer.clone(),
                runs: g.records.len(),
                mods_median: median(&mods).expect("non-empty"),
                avg_hops: avg,
                std_hops: std,
                hops_max: min_max_med(&maxes).map(|(lo, hi, med)| (med, lo, hi)).expect("non-empty"),
            }
        })
        .collect())
}

fn field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn table(columns: &[&str], rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut out = columns.join(",") + "\n";
    for row in rows {
        let cells: Vec<String> = row.iter().map(|c| field(c)).collect();
        writeln!(out, "{}", cells.join(",")).unwrap();
    }
    out
}

pub fn scalability_csv(rows: &[ScalabilityRow]) -> String {
    table(
        &SCALABILITY_COLUMNS,
        rows.iter().map(|r| {
            vec![
                r.problem.clone(),
                r.optimizer.clone(),
                r.n.to_string(),
                r.runs.to_string(),
                r.solved.to_string(),
                r.median_ffe.map_or(String::new(), |m| m.to_string()),
            ]
        }),
    )
}

pub fn applicability_csv(rows: &[ApplicabilityRow]) -> String {
    table(
        &APPLICABILITY_COLUMNS,
        rows.iter().map(|r| {
            vec![
                r.problem.clone(),
                r.optimizer.clone(),
                r.runs.to_string(),
                r.count.0.to_string(),
                r.count.1.to_string(),
                r.count.2.to_string(),
                r.pct.0.to_string(),
                r.pct.1.to_string(),
                r.pct.2.to_string(),
            ]
        }),
    )
}

pub fn hops_csv(rows: &[HopStatsRow]) -> String {
    table(
        &HOPS_COLUMNS,
        rows.iter().map(|r| {
            vec![
                r.problem.clone(),
                r.optimizer.clone(),
                r.runs.to_string(),
                r.mods_median.to_string(),
                r.avg_hops.to_string(),
                r.std_hops.to_string(),
                r.hops_max.0.to_string(),
                r.hops_max.1.to_string(),
                r.hops_max.2.to_string(),
            ]
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_conventions() {
        assert_eq!(median(&[4e5, 8e5, 6e5]), Some(6e5));
        assert_eq!(median(&[1.0, 2.0, 3.0, 4.0]), Some(2.5));
        assert_eq!(median(&[]), None);
    }

    #[test]
    fn family_drops_size() {
        assert_eq!(family("problem=concat fn=bimodal n=50 k=10"), "problem=concat fn=bimodal k=10");
    }

    #[test]
    fn quoting() {
        assert_eq!(field("a,b"), "\"a,b\"");
        assert_eq!(field("plain"), "plain");
    }
}
