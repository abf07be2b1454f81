//! Relative error made by treating dependent components as independent.
//!
//! Every error is `(value_dependent - value_independent) / value_independent`.

mod assess;
mod closed;
mod ratio;

use rayon::prelude::*;
use serde::Serialize;

pub use assess::{
    assess_signs, AssessmentReport, BoundCheck, FunctionAssessment, SignLabel, SIGN_TOL,
};
pub use closed::{closed_form_error, printed_error};
pub use ratio::{monotone_ratio, monotone_ratio_ln, monotone_ratio_or_limit};

use crate::error::{Error, Result};
use crate::io;
use crate::model::{Baseline, ValidatedModel};
use crate::scalar::Real;
use crate::system::{
    check_time, system_function, system_ln_probs, EvalGrid, Provenance, ReliabilityFn, Structure,
    SystemSpec,
};

/// A dependent system and the independent system it is compared with.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorPair<T> {
    dependent: SystemSpec<T>,
    independent: SystemSpec<T>,
    baseline: Baseline,
}

impl<T: Real> ErrorPair<T> {
    pub fn new(model: ValidatedModel<T>, structure: Structure, baseline: Baseline) -> Result<Self> {
        let dependent = SystemSpec::dependent(model, structure);
        let independent =
            dependent.with_assumption(crate::system::Assumption::Independent(baseline))?;
        Ok(ErrorPair {
            dependent,
            independent,
            baseline,
        })
    }

    pub fn dependent(&self) -> &SystemSpec<T> {
        &self.dependent
    }

    pub fn independent(&self) -> &SystemSpec<T> {
        &self.independent
    }

    pub fn baseline(&self) -> Baseline {
        self.baseline
    }

    pub fn model(&self) -> &ValidatedModel<T> {
        self.dependent.model()
    }

    pub fn structure(&self) -> Structure {
        self.dependent.structure()
    }

    pub fn provenance(&self, which: ReliabilityFn) -> Provenance {
        if closed::available(self, which) {
            Provenance::ClosedForm
        } else {
            Provenance::Numeric
        }
    }

    /// The relative error in `which` at `t`, from the closed-form registry
    /// when it has an entry.
    pub fn error(&self, which: ReliabilityFn, t: T) -> Result<T> {
        check_time(t)?;
        match closed_form_error(self, which, t) {
            Some(v) if v.is_finite() => Ok(v),
            Some(_) => Err(Error::degenerate(
                t.as_f64(),
                format!("closed-form {which} error is not finite"),
            )),
            None => numeric_error(self, which, t),
        }
    }
}

/// The relative error computed from the two systems' reliability functions.
pub fn numeric_error<T: Real>(pair: &ErrorPair<T>, which: ReliabilityFn, t: T) -> Result<T> {
    if which == ReliabilityFn::Sf {
        let d = system_ln_probs(&pair.dependent, t)?.ln_sf;
        let i = system_ln_probs(&pair.independent, t)?.ln_sf;
        if !i.is_finite() {
            return Err(Error::degenerate(
                t.as_f64(),
                "independent survival underflows to 0",
            ));
        }
        return Ok((d - i).exp_m1());
    }
    let d = system_function(&pair.dependent, which, t)?;
    let i = system_function(&pair.independent, which, t)?;
    if i == T::zero() || !i.is_finite() {
        return Err(Error::degenerate(
            t.as_f64(),
            format!("independent {which} is {i}, relative error undefined"),
        ));
    }
    Ok((d - i) / i)
}

/// Relative errors of all five functions on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorCurve<T> {
    pub grid: EvalGrid<T>,
    columns: [Vec<Option<T>>; 5],
    pub provenance: [Provenance; 5],
    pair: ErrorPair<T>,
}

#[derive(Serialize)]
struct ErrorRow {
    t: f64,
    e_sf: Option<f64>,
    e_fr: Option<f64>,
    e_rfr: Option<f64>,
    e_mrl: Option<f64>,
    e_ai: Option<f64>,
}

impl<T: Real> ErrorCurve<T> {
    /// `None` marks a point where the error is undefined.
    pub fn get(&self, which: ReliabilityFn) -> &[Option<T>] {
        &self.columns[which.index()]
    }

    pub fn pair(&self) -> &ErrorPair<T> {
        &self.pair
    }

    /// First and last grid points at which every error is defined.
    pub fn usable_range(&self) -> Option<(f64, f64)> {
        let ok: Vec<f64> = (0..self.grid.len())
            .filter(|&k| self.columns.iter().all(|c| c[k].is_some()))
            .map(|k| self.grid.points()[k].as_f64())
            .collect();
        Some((*ok.first()?, *ok.last()?))
    }

    fn rows(&self) -> Vec<ErrorRow> {
        let col = |f: ReliabilityFn, k: usize| io::finite(self.get(f)[k]);
        self.grid
            .points()
            .iter()
            .enumerate()
            .map(|(k, &t)| ErrorRow {
                t: t.as_f64(),
                e_sf: col(ReliabilityFn::Sf, k),
                e_fr: col(ReliabilityFn::Fr, k),
                e_rfr: col(ReliabilityFn::Rfr, k),
                e_mrl: col(ReliabilityFn::Mrl, k),
                e_ai: col(ReliabilityFn::Ai, k),
            })
            .collect()
    }

    /// CSV with header `t,e_sf,e_fr,e_rfr,e_mrl,e_ai`.
    pub fn to_csv(&self) -> String {
        io::to_csv(&self.rows())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.rows()).expect("error rows serialize")
    }
}

/// Error curves of `pair` on `grid`, in parallel over points. Degenerate
/// points become `None`; other errors abort.
pub fn error_curve<T: Real>(pair: &ErrorPair<T>, grid: &EvalGrid<T>) -> Result<ErrorCurve<T>> {
    let rows: Vec<[Option<T>; 5]> = grid
        .points()
        .par_iter()
        .map(|&t| {
            let mut row = [None; 5];
            for f in ReliabilityFn::ALL {
                match pair.error(f, t) {
                    Ok(v) => row[f.index()] = Some(v),
                    Err(Error::Degenerate { .. } | Error::IntegrationFailure { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let mut columns: [Vec<Option<T>>; 5] = Default::default();
    for row in rows {
        for f in ReliabilityFn::ALL {
            columns[f.index()].push(row[f.index()]);
        }
    }
    Ok(ErrorCurve {
        grid: grid.clone(),
        columns,
        provenance: ReliabilityFn::ALL.map(|f| pair.provenance(f)),
        pair: pair.clone(),
    })
}

/// Builds the pair for `model` and evaluates its error curves.
pub fn relative_error_curve<T: Real>(
    model: &ValidatedModel<T>,
    structure: Structure,
    baseline: Baseline,
    grid: &EvalGrid<T>,
) -> Result<ErrorCurve<T>> {
    error_curve(&ErrorPair::new(model.clone(), structure, baseline)?, grid)
}
