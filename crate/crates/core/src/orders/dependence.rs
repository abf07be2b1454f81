//! Orthant dependence and the series/parallel sign link.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::error_analysis::{ErrorPair, SIGN_TOL};
use crate::model::{Baseline, ValidatedModel};
use crate::scalar::Real;
use crate::system::{EvalGrid, ReliabilityFn, Structure};

/// Fewest sample points accepted by [`classify_orthant_dependence`].
pub const MIN_SAMPLE_POINTS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DependenceLabel {
    #[serde(rename = "PUOD")]
    Puod,
    #[serde(rename = "NUOD")]
    Nuod,
    #[serde(rename = "PLOD")]
    Plod,
    #[serde(rename = "NLOD")]
    Nlod,
    Independent,
    None,
}

/// The verdict for one orthant (upper: survival functions, lower:
/// distribution functions).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrthantVerdict {
    pub label: DependenceLabel,
    pub counterexample: Option<Vec<f64>>,
    /// Extremes of `joint - product` over the sample.
    pub max_excess: f64,
    pub min_excess: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DependenceReport {
    /// The upper-orthant label when it is decided, else the lower one.
    pub label: DependenceLabel,
    /// Present iff `label` is `None`.
    pub counterexample: Option<Vec<f64>>,
    pub upper: OrthantVerdict,
    pub lower: OrthantVerdict,
    pub sample_points: usize,
    /// Upper corner of the sampling box when the default sampler was used.
    pub sampling_box: Option<Vec<f64>>,
}

impl DependenceReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

fn orthant(
    excess: &[(f64, f64)],
    points: &[Vec<f64>],
    pos: DependenceLabel,
    neg: DependenceLabel,
) -> OrthantVerdict {
    let sign = |(d, tol): (f64, f64)| {
        if d > tol {
            1
        } else if d < -tol {
            -1
        } else {
            0
        }
    };
    let signs: Vec<i8> = excess.iter().map(|&e| sign(e)).collect();
    let first = signs.iter().copied().find(|&s| s != 0);
    let against = first.and_then(|f| signs.iter().position(|&s| s == -f));
    let label = match (first, against) {
        (None, _) => DependenceLabel::Independent,
        (Some(_), Some(_)) => DependenceLabel::None,
        (Some(1), None) => pos,
        (Some(_), None) => neg,
    };
    OrthantVerdict {
        label,
        counterexample: against.map(|k| points[k].clone()),
        max_excess: excess.iter().map(|e| e.0).fold(f64::NEG_INFINITY, f64::max),
        min_excess: excess.iter().map(|e| e.0).fold(f64::INFINITY, f64::min),
    }
}

/// Compares the joint survival and distribution functions with the products
/// of the true marginals at every sample point, with tolerance
/// `1e-12 + 1e-10 * product`.
pub fn classify_orthant_dependence<T: Real>(
    model: &ValidatedModel<T>,
    points: &[Vec<T>],
) -> Result<DependenceReport> {
    if points.len() < MIN_SAMPLE_POINTS {
        return Err(Error::InvalidInput(format!(
            "need at least {MIN_SAMPLE_POINTS} sample points, got {}",
            points.len()
        )));
    }
    let tol = |p: f64| 1e-12 + 1e-10 * p;
    let mut upper = Vec::with_capacity(points.len());
    let mut lower = Vec::with_capacity(points.len());
    for p in points {
        model.check_point(p)?;
        let margins: Vec<f64> = (0..model.n())
            .map(|i| model.marginal_sf(i + 1, p[i]).map(|s| s.as_f64()))
            .collect::<Result<_>>()?;
        let ps: f64 = margins.iter().product();
        let pc: f64 = margins.iter().map(|s| 1.0 - s).product();
        let js = model.joint_sf(p)?.as_f64();
        let jc = model.joint_cdf(p)?.as_f64();
        upper.push((js - ps, tol(ps)));
        lower.push((jc - pc, tol(pc)));
    }
    let as_f64: Vec<Vec<f64>> = points
        .iter()
        .map(|p| p.iter().map(|x| x.as_f64()).collect())
        .collect();
    let upper = orthant(
        &upper,
        &as_f64,
        DependenceLabel::Puod,
        DependenceLabel::Nuod,
    );
    let lower = orthant(
        &lower,
        &as_f64,
        DependenceLabel::Plod,
        DependenceLabel::Nlod,
    );
    let decided = |v: &OrthantVerdict| {
        !matches!(
            v.label,
            DependenceLabel::Independent | DependenceLabel::None
        )
    };
    let (label, counterexample) = if decided(&upper) {
        (upper.label, None)
    } else if decided(&lower) {
        (lower.label, None)
    } else if upper.label == DependenceLabel::Independent
        && lower.label == DependenceLabel::Independent
    {
        (DependenceLabel::Independent, None)
    } else {
        let ce = upper
            .counterexample
            .clone()
            .or_else(|| lower.counterexample.clone());
        (DependenceLabel::None, ce)
    };
    Ok(DependenceReport {
        label,
        counterexample,
        upper,
        lower,
        sample_points: points.len(),
        sampling_box: None,
    })
}

/// `q` with `P(T_i <= q) = p` for component `i` (1-based), by bisection.
pub fn marginal_quantile<T: Real>(model: &ValidatedModel<T>, i: usize, p: f64) -> Result<T> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidInput(format!(
            "probability must be in (0, 1), got {p}"
        )));
    }
    let target = (-p).ln_1p();
    let ln_sf = |q: f64| -> Result<f64> { Ok(model.marginal_sf(i, T::lit(q))?.as_f64().ln()) };
    let mut hi = 1.0;
    while ln_sf(hi)? > target {
        hi *= 2.0;
        if !hi.is_finite() || hi > 1e300 {
            return Err(Error::degenerate(
                hi,
                "marginal survival does not reach the quantile",
            ));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ln_sf(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    Ok(T::lit(0.5 * (lo + hi)))
}

/// A Latin hypercube of `count` points over `[0, q_1] x ... x [0, q_n]`,
/// `q_i` the 99.5th percentile of component `i`. Returns the points and the
/// box corner.
pub fn default_sample_points<T: Real>(
    model: &ValidatedModel<T>,
    count: usize,
    seed: u64,
) -> Result<(Vec<Vec<T>>, Vec<T>)> {
    let n = model.n();
    let corner: Vec<T> = (1..=n)
        .map(|i| marginal_quantile(model, i, 0.995))
        .collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = vec![vec![T::zero(); n]; count];
    for (d, &q) in corner.iter().enumerate() {
        let mut strata: Vec<usize> = (0..count).collect();
        strata.shuffle(&mut rng);
        for (p, &s) in points.iter_mut().zip(&strata) {
            let u: f64 = rng.random();
            p[d] = T::lit((s as f64 + u) / count as f64) * q;
        }
    }
    Ok((points, corner))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignLinkReport {
    pub passed: bool,
    /// Grid points where both errors are nonzero with the same sign.
    pub witnesses: Vec<f64>,
    /// Grid points where both errors are nonzero.
    pub compared_points: usize,
}

/// For two components, the series and parallel SF errors against the
/// true-marginal baseline have opposite signs wherever both are nonzero.
pub fn check_series_parallel_sign<T: Real>(
    model: &ValidatedModel<T>,
    grid: &EvalGrid<T>,
) -> Result<SignLinkReport> {
    if model.n() != 2 {
        return Err(Error::Unsupported(format!(
            "series/parallel sign link is defined for 2 components, got {}",
            model.n()
        )));
    }
    let series = ErrorPair::new(model.clone(), Structure::Series, Baseline::TrueMarginal)?;
    let parallel = ErrorPair::new(model.clone(), Structure::Parallel, Baseline::TrueMarginal)?;
    let mut witnesses = Vec::new();
    let mut compared = 0;
    for &t in grid.points() {
        let (Ok(es), Ok(ep)) = (
            series.error(ReliabilityFn::Sf, t),
            parallel.error(ReliabilityFn::Sf, t),
        ) else {
            continue;
        };
        let (es, ep) = (es.as_f64(), ep.as_f64());
        if es.abs() <= SIGN_TOL || ep.abs() <= SIGN_TOL {
            continue;
        }
        compared += 1;
        if es.signum() == ep.signum() {
            witnesses.push(t.as_f64());
        }
    }
    Ok(SignLinkReport {
        passed: witnesses.is_empty(),
        witnesses,
        compared_points: compared,
    })
}
