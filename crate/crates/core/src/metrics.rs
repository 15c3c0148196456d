//! Aggregate metrics over coverage maps: mean path-loss improvement between
//! a baseline and a reflection-assisted map, and per-map distribution
//! summaries (mean, population spread, empirical CDF).
//!
//! All reductions run in grid index order so results are identical across
//! runs and worker counts.

use crate::engine::CoverageMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("coverage maps use different grids")]
    GridMismatch,
    #[error("mask mismatch at index {index}: maps cover different points")]
    MaskMismatch { index: usize },
    #[error("expected a reflection-off baseline and a reflection-on map")]
    ConfigMismatch,
    #[error("map has no unmasked points")]
    EmptyMap,
}

/// Distribution summary of one coverage map's minimum path loss.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfStats {
    /// Unmasked points included.
    pub count: usize,
    pub mean_db: f64,
    /// Population standard deviation (divisor N).
    pub std_db: f64,
    /// Empirical CDF at each distinct loss value, ascending; probabilities
    /// are P(X <= value) and the last entry is exactly 1.
    pub cdf: Vec<(f64, f64)>,
}

/// One height case in a sweep report.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub offset_m: f64,
    pub ris_height_m: f64,
    /// Mean improvement over the baseline, percent of summed dB loss.
    pub delta_pl_pct: f64,
    /// Same ratio computed over linear-power losses, for reference.
    pub delta_pl_linear_pct: f64,
    pub stats: CdfStats,
}

/// Aggregates of a full height sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub baseline: CdfStats,
    pub rows: Vec<SweepRow>,
}

fn check_pair(baseline: &CoverageMap, with_ris: &CoverageMap) -> Result<(), MetricsError> {
    if baseline.grid != with_ris.grid {
        return Err(MetricsError::GridMismatch);
    }
    if baseline.ris_enabled || !with_ris.ris_enabled {
        return Err(MetricsError::ConfigMismatch);
    }
    for (index, (a, b)) in baseline.pl_min_db.iter().zip(&with_ris.pl_min_db).enumerate() {
        if a.is_none() != b.is_none() {
            return Err(MetricsError::MaskMismatch { index });
        }
    }
    Ok(())
}

fn delta_with(
    baseline: &CoverageMap,
    with_ris: &CoverageMap,
    term: impl Fn(f64) -> f64,
) -> Result<f64, MetricsError> {
    check_pair(baseline, with_ris)?;
    let mut sum_base = 0.0;
    let mut sum_ris = 0.0;
    let mut any = false;
    for (a, b) in baseline.pl_min_db.iter().zip(&with_ris.pl_min_db) {
        if let (Some(a), Some(b)) = (a, b) {
            sum_base += term(*a);
            sum_ris += term(*b);
            any = true;
        }
    }
    if !any {
        return Err(MetricsError::EmptyMap);
    }
    Ok((1.0 - sum_ris / sum_base) * 100.0)
}

/// Mean path-loss improvement in percent: 100 * (1 - sum(with) / sum(base))
/// over the dB losses of jointly unmasked points. Positive when reflections
/// reduce loss.
pub fn delta_pl_mean(baseline: &CoverageMap, with_ris: &CoverageMap) -> Result<f64, MetricsError> {
    delta_with(baseline, with_ris, |db| db)
}

/// Same improvement ratio with each loss converted to linear power before
/// summing. Reported alongside the dB-domain figure for reference.
pub fn delta_pl_mean_linear(
    baseline: &CoverageMap,
    with_ris: &CoverageMap,
) -> Result<f64, MetricsError> {
    delta_with(baseline, with_ris, |db| 10f64.powf(db / 10.0))
}

/// Mean, population standard deviation, and empirical CDF of a map's
/// unmasked losses.
pub fn cdf_stats(map: &CoverageMap) -> Result<CdfStats, MetricsError> {
    let mut count = 0usize;
    let mut mean = 0.0f64;
    let mut m2 = 0.0f64;
    let mut values: Vec<f64> = Vec::new();
    for v in map.pl_min_db.iter().flatten() {
        count += 1;
        let delta = v - mean;
        mean += delta / count as f64;
        m2 += delta * (v - mean);
        values.push(*v);
    }
    if count == 0 {
        return Err(MetricsError::EmptyMap);
    }
    values.sort_by(f64::total_cmp);
    let n = values.len();
    let mut cdf: Vec<(f64, f64)> = Vec::new();
    for (i, v) in values.iter().enumerate() {
        let p = (i + 1) as f64 / n as f64;
        match cdf.last_mut() {
            // Equal values collapse to one step at the highest rank.
            Some(last) if last.0 == *v => last.1 = p,
            _ => cdf.push((*v, p)),
        }
    }
    Ok(CdfStats {
        count,
        mean_db: mean,
        std_db: (m2 / count as f64).sqrt(),
        cdf,
    })
}
