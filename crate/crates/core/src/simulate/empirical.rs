use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use super::{sample_model, SampleMatrix};
use crate::error::{Error, Result};
use crate::io;
use crate::model::ValidatedModel;
use crate::scalar::Real;
use crate::system::{system_sf, EvalGrid, Structure, SystemSpec};

/// Wilson score interval for `successes` out of `trials` at two-sided `level`.
pub fn wilson_interval(successes: usize, trials: usize, level: f64) -> Result<(f64, f64)> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidInput(format!(
            "confidence level must be in (0, 1), got {level}"
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidInput(
            "Wilson interval needs at least one trial".into(),
        ));
    }
    let z = Normal::standard().inverse_cdf(1.0 - 0.5 * (1.0 - level));
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z / n;
    let centre = (p + 0.5 * z2) / (1.0 + z2);
    let half = z / (1.0 + z2) * (p * (1.0 - p) / n + 0.25 * z2 / n).sqrt();
    Ok(((centre - half).clamp(0.0, p), (centre + half).clamp(p, 1.0)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct EmpiricalRow {
    t: f64,
    estimate: f64,
    ci_low: f64,
    ci_high: f64,
}

/// Empirical system survival on a grid with pointwise Wilson bands.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCurve<T> {
    pub grid: EvalGrid<T>,
    pub estimate: Vec<f64>,
    pub ci_low: Vec<f64>,
    pub ci_high: Vec<f64>,
    pub level: f64,
    pub n_samples: usize,
}

impl<T: Real> EmpiricalCurve<T> {
    fn rows(&self) -> Vec<EmpiricalRow> {
        self.grid
            .points()
            .iter()
            .enumerate()
            .map(|(k, t)| EmpiricalRow {
                t: t.as_f64(),
                estimate: self.estimate[k],
                ci_low: self.ci_low[k],
                ci_high: self.ci_high[k],
            })
            .collect()
    }

    /// CSV with header `t,estimate,ci_low,ci_high`.
    pub fn to_csv(&self) -> String {
        io::to_csv(&self.rows())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.rows()).expect("empirical rows serialize")
    }
}

/// Fraction of rows whose system lifetime (row min for series, max for
/// parallel) exceeds each grid point.
pub fn empirical_system_sf<T: Real>(
    samples: &SampleMatrix<T>,
    structure: Structure,
    grid: &EvalGrid<T>,
    level: f64,
) -> Result<EmpiricalCurve<T>> {
    let mut life: Vec<f64> = samples
        .rows()
        .map(|r| {
            let it = r.iter().map(|x| x.as_f64());
            match structure {
                Structure::Series => it.fold(f64::INFINITY, f64::min),
                Structure::Parallel => it.fold(0.0, f64::max),
            }
        })
        .collect();
    life.sort_by(f64::total_cmp);
    let trials = life.len();
    let (mut estimate, mut ci_low, mut ci_high) = (Vec::new(), Vec::new(), Vec::new());
    for t in grid.points() {
        let t = t.as_f64();
        let survivors = trials - life.partition_point(|&x| x <= t);
        let (lo, hi) = wilson_interval(survivors, trials, level)?;
        estimate.push(survivors as f64 / trials as f64);
        ci_low.push(lo);
        ci_high.push(hi);
    }
    Ok(EmpiricalCurve {
        grid: grid.clone(),
        estimate,
        ci_low,
        ci_high,
        level,
        n_samples: trials,
    })
}

/// Settings for [`mc_validate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub n_samples: usize,
    pub level: f64,
    pub seed: u64,
    /// Added to every analytic value; nonzero only to test the harness.
    pub fault_offset: f64,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            n_samples: 100_000,
            level: 0.99,
            seed: 0,
            fault_offset: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoveragePoint {
    pub t: f64,
    pub analytic: f64,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub covered: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageReport {
    pub coverage: f64,
    pub passed: bool,
    pub level: f64,
    pub n_samples: usize,
    pub points: Vec<CoveragePoint>,
}

impl CoverageReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("coverage report serializes")
    }
}

/// Minimum fraction of grid points whose analytic value must fall inside the
/// empirical band.
pub const COVERAGE_THRESHOLD: f64 = 0.95;

/// Samples the model, estimates the system SF and reports how often the
/// analytic SF lies inside the band.
pub fn mc_validate<T: Real>(
    model: &ValidatedModel<T>,
    structure: Structure,
    grid: &EvalGrid<T>,
    config: &McConfig,
) -> Result<(EmpiricalCurve<T>, CoverageReport)> {
    let samples = sample_model(model, config.n_samples, config.seed)?;
    let curve = empirical_system_sf(&samples, structure, grid, config.level)?;
    let spec = SystemSpec::dependent(model.clone(), structure);
    let mut points = Vec::with_capacity(grid.len());
    for (k, &t) in grid.points().iter().enumerate() {
        let analytic = system_sf(&spec, t)?.as_f64() + config.fault_offset;
        points.push(CoveragePoint {
            t: t.as_f64(),
            analytic,
            estimate: curve.estimate[k],
            ci_low: curve.ci_low[k],
            ci_high: curve.ci_high[k],
            covered: curve.ci_low[k] <= analytic && analytic <= curve.ci_high[k],
        });
    }
    let coverage = points.iter().filter(|p| p.covered).count() as f64 / points.len() as f64;
    let report = CoverageReport {
        coverage,
        passed: coverage >= COVERAGE_THRESHOLD,
        level: config.level,
        n_samples: config.n_samples,
        points,
    };
    Ok((curve, report))
}
