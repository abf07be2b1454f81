//! Over/under-assessment labels and the bound checks attached to them.

use serde::Serialize;

use super::ErrorCurve;
use crate::model::LifetimeModel;
use crate::scalar::Real;
use crate::system::{ReliabilityFn, Structure};

/// Errors within this absolute distance of 0 count as zero.
pub const SIGN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SignLabel {
    /// Over-assessment: the error is negative wherever it is nonzero.
    #[serde(rename = "OA")]
    Oa,
    /// Under-assessment: the error is positive wherever it is nonzero.
    #[serde(rename = "UA")]
    Ua,
    #[serde(rename = "zero")]
    Zero,
    #[serde(rename = "mixed")]
    Mixed,
    /// No grid point has a defined error.
    #[serde(rename = "undefined")]
    Undefined,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionAssessment {
    pub function: &'static str,
    pub label: SignLabel,
    /// Sign changes, each located by bisection to `1e-6` relative.
    pub sign_changes: Vec<f64>,
    pub defined_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub name: &'static str,
    pub satisfied: bool,
    /// First grid point where the bound fails.
    pub witness: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssessmentReport {
    pub functions: Vec<FunctionAssessment>,
    pub bounds: Vec<BoundCheck>,
}

impl AssessmentReport {
    pub fn label(&self, which: ReliabilityFn) -> SignLabel {
        self.functions[which.index()].label
    }

    pub fn bound(&self, name: &str) -> Option<&BoundCheck> {
        self.bounds.iter().find(|b| b.name == name)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

fn sign(v: f64) -> i8 {
    if v > SIGN_TOL {
        1
    } else if v < -SIGN_TOL {
        -1
    } else {
        0
    }
}

fn locate<T: Real>(
    curve: &ErrorCurve<T>,
    which: ReliabilityFn,
    mut lo: f64,
    mut hi: f64,
    s_lo: i8,
) -> f64 {
    for _ in 0..200 {
        if hi - lo <= 1e-6 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        match curve
            .pair()
            .error(which, T::lit(mid))
            .map(|v| sign(v.as_f64()))
        {
            Ok(0) => return mid,
            Ok(s) if s == s_lo => lo = mid,
            Ok(_) => hi = mid,
            Err(_) => break,
        }
    }
    0.5 * (lo + hi)
}

fn assess_one<T: Real>(curve: &ErrorCurve<T>, which: ReliabilityFn) -> FunctionAssessment {
    let mut prev: Option<(f64, i8)> = None;
    let (mut pos, mut neg, mut defined) = (false, false, 0);
    let mut sign_changes = Vec::new();
    for (&t, v) in curve.grid.points().iter().zip(curve.get(which)) {
        let Some(v) = v else { continue };
        defined += 1;
        let s = sign(v.as_f64());
        if s == 0 {
            continue;
        }
        pos |= s > 0;
        neg |= s < 0;
        let t = t.as_f64();
        if let Some((tp, sp)) = prev {
            if sp != s {
                sign_changes.push(locate(curve, which, tp, t, sp));
            }
        }
        prev = Some((t, s));
    }
    let label = match (defined, pos, neg) {
        (0, _, _) => SignLabel::Undefined,
        (_, true, true) => SignLabel::Mixed,
        (_, true, false) => SignLabel::Ua,
        (_, false, true) => SignLabel::Oa,
        (_, false, false) => SignLabel::Zero,
    };
    FunctionAssessment {
        function: which.name(),
        label,
        sign_changes,
        defined_points: defined,
    }
}

fn check<T: Real>(
    curve: &ErrorCurve<T>,
    name: &'static str,
    which: ReliabilityFn,
    ok: impl Fn(f64) -> bool,
) -> BoundCheck {
    let witness = curve
        .grid
        .points()
        .iter()
        .zip(curve.get(which))
        .find(|(_, v)| v.is_some_and(|v| !ok(v.as_f64())))
        .map(|(t, _)| t.as_f64());
    BoundCheck {
        name,
        satisfied: witness.is_none(),
        witness,
    }
}

/// On the initial stretch of the grid where `E_fr <= 0` (resp. `>= 0`),
/// `E_sf` must be `>= 0` (resp. `<= 0`).
fn fr_sign_implies_sf_sign<T: Real>(curve: &ErrorCurve<T>) -> BoundCheck {
    let fr = curve.get(ReliabilityFn::Fr);
    let sf = curve.get(ReliabilityFn::Sf);
    let mut witness = None;
    for dir in [-1.0, 1.0] {
        for (k, &t) in curve.grid.points().iter().enumerate() {
            let Some(r) = fr[k] else { break };
            if dir * r.as_f64() < -SIGN_TOL {
                break;
            }
            if let Some(s) = sf[k] {
                if dir * s.as_f64() > SIGN_TOL {
                    witness = witness.or(Some(t.as_f64()));
                    break;
                }
            }
        }
    }
    BoundCheck {
        name: "fr_sign_implies_sf_sign",
        satisfied: witness.is_none(),
        witness,
    }
}

fn constant<T: Real>(
    curve: &ErrorCurve<T>,
    name: &'static str,
    which: ReliabilityFn,
) -> BoundCheck {
    let first = curve.get(which).iter().flatten().next().map(|v| v.as_f64());
    check(curve, name, which, |v| {
        first.is_some_and(|f| (v - f).abs() <= SIGN_TOL * f.abs().max(1.0))
    })
}

fn family_bounds<T: Real>(curve: &ErrorCurve<T>) -> Vec<BoundCheck> {
    use ReliabilityFn::*;
    let pair = curve.pair();
    let n = pair.model().n() as f64;
    let zero = |v: f64| v.abs() <= SIGN_TOL;
    match (pair.model().model(), pair.structure()) {
        (LifetimeModel::Mome { .. }, Structure::Series) => vec![
            constant(curve, "e_fr_constant", Fr),
            check(curve, "e_ai_zero", Ai, zero),
            check(curve, "e_sf_abs_below_one", Sf, |v| v.abs() < 1.0),
            check(curve, "e_rfr_abs_below_one", Rfr, |v| v.abs() < 1.0),
        ],
        (LifetimeModel::Lee(_), Structure::Series) => vec![
            constant(curve, "e_fr_constant", Fr),
            check(curve, "e_ai_zero", Ai, zero),
        ],
        (LifetimeModel::Mg1 { .. }, Structure::Series) => {
            vec![check(curve, "e_ai_between_0_and_n_minus_1", Ai, |v| {
                v >= -SIGN_TOL && v <= n - 1.0 + SIGN_TOL
            })]
        }
        (LifetimeModel::Fgmw(p), Structure::Series) => {
            let g = p.gamma.as_f64();
            vec![
                check(curve, "e_sf_sign_matches_gamma", Sf, move |v| {
                    v * g.signum() >= -SIGN_TOL
                }),
                check(curve, "e_sf_abs_at_most_abs_gamma", Sf, move |v| {
                    v.abs() <= g.abs() + SIGN_TOL
                }),
            ]
        }
        (LifetimeModel::Fgmw(p), Structure::Parallel) => {
            let parity = if pair.model().n() % 2 == 1 { 1.0 } else { -1.0 };
            let g = p.gamma.as_f64() * parity;
            vec![check(
                curve,
                "e_sf_sign_matches_gamma_parity",
                Sf,
                move |v| v * g.signum() >= -SIGN_TOL,
            )]
        }
        _ => Vec::new(),
    }
}

/// Labels each function OA, UA, zero or mixed, and checks the general and
/// family-specific bounds on the errors.
pub fn assess_signs<T: Real>(curve: &ErrorCurve<T>) -> AssessmentReport {
    let functions = ReliabilityFn::ALL
        .iter()
        .map(|&f| assess_one(curve, f))
        .collect();
    let mut bounds = vec![
        check(curve, "e_sf_above_minus_one", ReliabilityFn::Sf, |v| {
            v > -1.0
        }),
        fr_sign_implies_sf_sign(curve),
    ];
    bounds.extend(family_bounds(curve));
    AssessmentReport { functions, bounds }
}
