//! Series and parallel system lifetimes built on a multivariate model.

pub(crate) mod closed_form;
mod curves;
mod grid;
pub(crate) mod numeric;

use std::fmt;
use std::str::FromStr;

pub use closed_form::{closed_form_value, parallel_density_closed_form};
pub use curves::{evaluate_curves, CurveSet, CurveValues};
pub use grid::{EvalGrid, Spacing};
pub use numeric::{cumulative_hazard_numeric, numeric_value};

use crate::error::{Error, Result};
use crate::model::{Baseline, ValidatedModel};
use crate::scalar::{ln_one_minus_exp, log_sum_exp, Real};
use crate::subset::all_subsets;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Structure {
    /// Fails at the first component failure.
    Series,
    /// Fails at the last component failure.
    Parallel,
}

impl Structure {
    pub fn name(self) -> &'static str {
        match self {
            Structure::Series => "series",
            Structure::Parallel => "parallel",
        }
    }
}

impl FromStr for Structure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "series" => Ok(Structure::Series),
            "parallel" => Ok(Structure::Parallel),
            _ => Err(Error::InvalidInput(format!("unknown structure `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Assumption {
    Dependent,
    Independent(Baseline),
}

/// The five reliability functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ReliabilityFn {
    Sf,
    Fr,
    Rfr,
    Mrl,
    Ai,
}

impl ReliabilityFn {
    pub const ALL: [ReliabilityFn; 5] = [
        ReliabilityFn::Sf,
        ReliabilityFn::Fr,
        ReliabilityFn::Rfr,
        ReliabilityFn::Mrl,
        ReliabilityFn::Ai,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ReliabilityFn::Sf => "sf",
            ReliabilityFn::Fr => "fr",
            ReliabilityFn::Rfr => "rfr",
            ReliabilityFn::Mrl => "mrl",
            ReliabilityFn::Ai => "ai",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for ReliabilityFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    ClosedForm,
    Numeric,
}

impl Provenance {
    pub fn code(self) -> char {
        match self {
            Provenance::ClosedForm => 'C',
            Provenance::Numeric => 'N',
        }
    }
}

/// A model, a structure and an independence assumption.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec<T> {
    model: ValidatedModel<T>,
    structure: Structure,
    assumption: Assumption,
    effective: ValidatedModel<T>,
}

impl<T: Real> SystemSpec<T> {
    pub fn new(
        model: ValidatedModel<T>,
        structure: Structure,
        assumption: Assumption,
    ) -> Result<Self> {
        let effective = match assumption {
            Assumption::Dependent => model.clone(),
            Assumption::Independent(b) => model.independent_counterpart(b)?,
        };
        Ok(SystemSpec {
            model,
            structure,
            assumption,
            effective,
        })
    }

    pub fn dependent(model: ValidatedModel<T>, structure: Structure) -> Self {
        SystemSpec {
            effective: model.clone(),
            model,
            structure,
            assumption: Assumption::Dependent,
        }
    }

    pub fn model(&self) -> &ValidatedModel<T> {
        &self.model
    }

    pub fn structure(&self) -> Structure {
        self.structure
    }

    pub fn assumption(&self) -> Assumption {
        self.assumption
    }

    /// The model actually evaluated: the original one, or its independent
    /// counterpart.
    pub fn effective_model(&self) -> &ValidatedModel<T> {
        &self.effective
    }

    /// The same model and structure under another assumption.
    pub fn with_assumption(&self, assumption: Assumption) -> Result<Self> {
        SystemSpec::new(self.model.clone(), self.structure, assumption)
    }
}

/// `ln F̄_sys(t)` and `ln F_sys(t)`, each computed without passing through
/// the complement of the other when that would lose precision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LnProbs<T> {
    pub ln_sf: T,
    pub ln_cdf: T,
}

impl<T: Real> LnProbs<T> {
    fn from_ln_sf(ln_sf: T) -> Self {
        LnProbs {
            ln_sf,
            ln_cdf: ln_one_minus_exp(ln_sf),
        }
    }

    fn from_ln_cdf(ln_cdf: T) -> Self {
        LnProbs {
            ln_sf: ln_one_minus_exp(ln_cdf),
            ln_cdf,
        }
    }
}

pub(crate) fn check_time<T: Real>(t: T) -> Result<()> {
    if !t.is_finite() || t <= T::zero() {
        return Err(Error::Domain(format!(
            "time must be finite and > 0, got {t}"
        )));
    }
    Ok(())
}

/// Log survival and log distribution function of the system lifetime.
pub fn system_ln_probs<T: Real>(spec: &SystemSpec<T>, t: T) -> Result<LnProbs<T>> {
    check_time(t)?;
    Ok(match spec.structure {
        Structure::Series => ln_probs_series(spec.effective_model(), t),
        Structure::Parallel => ln_probs_parallel(spec.effective_model(), t)?,
    })
}

pub(crate) fn ln_probs_series<T: Real>(model: &ValidatedModel<T>, t: T) -> LnProbs<T> {
    LnProbs::from_ln_sf(model.ln_sf_unchecked(&vec![t; model.n()]))
}

pub(crate) fn ln_probs_parallel<T: Real>(model: &ValidatedModel<T>, t: T) -> Result<LnProbs<T>> {
    let n = model.n();
    if model.family().is_independent() {
        let ln_cdf = (0..n)
            .map(|i| ln_one_minus_exp(model.ln_marginal_unchecked(i, t)))
            .sum();
        return Ok(LnProbs::from_ln_cdf(ln_cdf));
    }
    // F = sum_K (-1)^|K| expm1(l_K) is accurate while F is small; the signed
    // log-sum of exp(l_K) is accurate once F̄ is small.
    let mut point = vec![T::zero(); n];
    let mut cdf = T::zero();
    let mut spread = T::zero();
    let (mut odd, mut even) = (Vec::new(), Vec::new());
    for key in all_subsets(n)? {
        point.iter_mut().for_each(|x| *x = T::zero());
        for p in key.positions() {
            point[p] = t;
        }
        let l = model.ln_sf_unchecked(&point);
        spread += l.exp_m1().abs();
        if key.len() % 2 == 1 {
            cdf -= l.exp_m1();
            odd.push(l);
        } else {
            cdf += l.exp_m1();
            even.push(l);
        }
    }
    if cdf <= T::lit(0.5) {
        if cdf < -(T::epsilon() * T::lit(64.0) * spread) {
            return Err(Error::degenerate(
                t.as_f64(),
                format!("joint law is improper: P(all components failed by t) = {cdf} < 0"),
            ));
        }
        if cdf <= T::zero() {
            return Ok(LnProbs {
                ln_sf: T::zero(),
                ln_cdf: T::neg_infinity(),
            });
        }
        return Ok(LnProbs {
            ln_sf: (-cdf).ln_1p(),
            ln_cdf: cdf.ln(),
        });
    }
    let lp = log_sum_exp(&odd);
    let ln = log_sum_exp(&even);
    let ln_sf = if ln < lp {
        lp + ln_one_minus_exp(ln - lp)
    } else {
        T::neg_infinity()
    };
    Ok(LnProbs::from_ln_sf(ln_sf))
}

/// System survival probability at `t > 0`.
pub fn system_sf<T: Real>(spec: &SystemSpec<T>, t: T) -> Result<T> {
    if let Some(v) = closed_form_value(spec, ReliabilityFn::Sf, t) {
        check_time(t)?;
        return Ok(v);
    }
    system_ln_probs(spec, t).map(|p| p.ln_sf.exp())
}

/// Which path [`system_function`] takes for `which`.
pub fn provenance<T: Real>(spec: &SystemSpec<T>, which: ReliabilityFn) -> Provenance {
    if closed_form::available(spec, which) {
        Provenance::ClosedForm
    } else {
        Provenance::Numeric
    }
}

/// Any of the five functions at `t > 0`, from a closed form when one exists.
pub fn system_function<T: Real>(spec: &SystemSpec<T>, which: ReliabilityFn, t: T) -> Result<T> {
    check_time(t)?;
    if let Some(v) = closed_form_value(spec, which, t) {
        if v.is_finite() {
            return Ok(v);
        }
        return Err(Error::degenerate(
            t.as_f64(),
            format!("closed-form {which} is not finite"),
        ));
    }
    numeric_value(spec, which, t)
}

/// Aging class from the sign of `AI - 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AgingClass {
    Ifra,
    Dfra,
    /// `AI = 1` everywhere within tolerance, so both classes hold.
    IfraAndDfra,
    /// Neither holds; `at` is the first grid point violating whichever bound
    /// held at the start of the grid.
    Indeterminate {
        at: f64,
    },
}

/// Classifies the system as IFRA (`AI >= 1`) or DFRA (`AI <= 1`) on `grid`.
pub fn classify_aging<T: Real>(spec: &SystemSpec<T>, grid: &EvalGrid<T>) -> Result<AgingClass> {
    let tol = T::lit(1e-9);
    let mut ifra = true;
    let mut dfra = true;
    let mut first_ifra_fail = None;
    let mut first_dfra_fail = None;
    for &t in grid.points() {
        let ai = system_function(spec, ReliabilityFn::Ai, t)?;
        if ai < T::one() - tol {
            ifra = false;
            first_ifra_fail.get_or_insert(t.as_f64());
        }
        if ai > T::one() + tol {
            dfra = false;
            first_dfra_fail.get_or_insert(t.as_f64());
        }
    }
    Ok(match (ifra, dfra) {
        (true, true) => AgingClass::IfraAndDfra,
        (true, false) => AgingClass::Ifra,
        (false, true) => AgingClass::Dfra,
        (false, false) => AgingClass::Indeterminate {
            at: first_ifra_fail
                .unwrap_or(f64::NAN)
                .max(first_dfra_fail.unwrap_or(f64::NAN)),
        },
    })
}

#[cfg(test)]
mod tests;
