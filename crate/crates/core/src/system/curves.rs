use rayon::prelude::*;
use serde::Serialize;

use super::{
    numeric_value, provenance, system_function, EvalGrid, Provenance, ReliabilityFn, SystemSpec,
};
use crate::error::{Error, Result};
use crate::io;
use crate::scalar::Real;

/// One aligned column per reliability function; `None` marks a point where
/// the function is undefined.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveValues<T> {
    columns: [Vec<Option<T>>; 5],
}

impl<T: Real> CurveValues<T> {
    pub fn get(&self, which: ReliabilityFn) -> &[Option<T>] {
        &self.columns[which.index()]
    }
}

/// A point where some function could not be evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct PointFailure {
    pub t: f64,
    pub function: ReliabilityFn,
    pub error: Error,
}

/// Grid evaluation of all five functions for one system.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSet<T> {
    pub grid: EvalGrid<T>,
    pub values: CurveValues<T>,
    pub provenance: [Provenance; 5],
    pub failures: Vec<PointFailure>,
    /// Per function, the largest relative gap between the closed form and
    /// the numeric engine (verify mode only; `None` without a closed form).
    pub verification: Option<[Option<f64>; 5]>,
}

#[derive(Serialize)]
struct CurveRow {
    t: f64,
    sf: Option<f64>,
    fr: Option<f64>,
    rfr: Option<f64>,
    mrl: Option<f64>,
    ai: Option<f64>,
    provenance: String,
}

fn tolerable(e: &Error) -> bool {
    matches!(
        e,
        Error::Degenerate { .. } | Error::IntegrationFailure { .. }
    )
}

/// Evaluates every function at every grid point, in parallel over points.
/// Degenerate points are recorded as `None`; any other error aborts.
pub fn evaluate_curves<T: Real>(
    spec: &SystemSpec<T>,
    grid: &EvalGrid<T>,
    verify: bool,
) -> Result<CurveSet<T>> {
    let prov = ReliabilityFn::ALL.map(|f| provenance(spec, f));
    type PointOut<T> = ([Option<T>; 5], Vec<PointFailure>, [Option<f64>; 5]);
    let points: Vec<PointOut<T>> = grid
        .points()
        .par_iter()
        .map(|&t| -> Result<PointOut<T>> {
            let mut vals = [None; 5];
            let mut fails = Vec::new();
            let mut gaps = [None; 5];
            for f in ReliabilityFn::ALL {
                match system_function(spec, f, t) {
                    Ok(v) => vals[f.index()] = Some(v),
                    Err(e) if tolerable(&e) => fails.push(PointFailure {
                        t: t.as_f64(),
                        function: f,
                        error: e,
                    }),
                    Err(e) => return Err(e),
                }
                if verify && prov[f.index()] == Provenance::ClosedForm {
                    if let (Some(c), Ok(n)) = (vals[f.index()], numeric_value(spec, f, t)) {
                        let gap = ((c - n).abs() / c.abs().max(T::min_positive_value())).as_f64();
                        gaps[f.index()] = Some(gap);
                    }
                }
            }
            Ok((vals, fails, gaps))
        })
        .collect::<Result<_>>()?;

    let mut columns: [Vec<Option<T>>; 5] = Default::default();
    let mut failures = Vec::new();
    let mut worst: [Option<f64>; 5] = [None; 5];
    for (vals, fails, gaps) in points {
        for f in ReliabilityFn::ALL {
            columns[f.index()].push(vals[f.index()]);
            if let Some(g) = gaps[f.index()] {
                let w = worst[f.index()].get_or_insert(0.0);
                *w = w.max(g);
            }
        }
        failures.extend(fails);
    }
    Ok(CurveSet {
        grid: grid.clone(),
        values: CurveValues { columns },
        provenance: prov,
        failures,
        verification: verify.then_some(worst),
    })
}

impl<T: Real> CurveSet<T> {
    pub fn get(&self, which: ReliabilityFn) -> &[Option<T>] {
        self.values.get(which)
    }

    /// Five-letter provenance code in `sf,fr,rfr,mrl,ai` order, e.g. `CCCNC`.
    pub fn provenance_code(&self) -> String {
        self.provenance.iter().map(|p| p.code()).collect()
    }

    /// Fraction of grid points where at least one function is undefined.
    pub fn degenerate_fraction(&self) -> f64 {
        let bad = (0..self.grid.len())
            .filter(|&k| ReliabilityFn::ALL.iter().any(|&f| self.get(f)[k].is_none()))
            .count();
        bad as f64 / self.grid.len() as f64
    }

    fn rows(&self) -> Vec<CurveRow> {
        let code = self.provenance_code();
        self.grid
            .points()
            .iter()
            .enumerate()
            .map(|(k, &t)| CurveRow {
                t: t.as_f64(),
                sf: io::finite(self.get(ReliabilityFn::Sf)[k]),
                fr: io::finite(self.get(ReliabilityFn::Fr)[k]),
                rfr: io::finite(self.get(ReliabilityFn::Rfr)[k]),
                mrl: io::finite(self.get(ReliabilityFn::Mrl)[k]),
                ai: io::finite(self.get(ReliabilityFn::Ai)[k]),
                provenance: code.clone(),
            })
            .collect()
    }

    /// CSV with header `t,sf,fr,rfr,mrl,ai,provenance`.
    pub fn to_csv(&self) -> String {
        io::to_csv(&self.rows())
    }

    /// JSON array of per-point records.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.rows()).expect("curve rows serialize")
    }
}
