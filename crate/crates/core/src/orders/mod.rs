//! Stochastic orders between two system lifetimes, checked on a grid, and
//! orthant dependence of a lifetime model.
//!
//! A grid can falsify an order or support it, never prove it; verdicts carry
//! the grid resolution.

mod dependence;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use dependence::{
    check_series_parallel_sign, classify_orthant_dependence, default_sample_points,
    marginal_quantile, DependenceLabel, DependenceReport, OrthantVerdict, SignLinkReport,
};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::system::{system_function, system_sf, EvalGrid, ReliabilityFn, SystemSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum OrderRelation {
    #[serde(rename = "ST")]
    St,
    #[serde(rename = "FR")]
    Fr,
    #[serde(rename = "RFR")]
    Rfr,
    #[serde(rename = "MRL")]
    Mrl,
    #[serde(rename = "LR")]
    Lr,
    #[serde(rename = "AF")]
    Af,
    #[serde(rename = "AI")]
    Ai,
}

impl OrderRelation {
    pub const ALL: [OrderRelation; 7] = [
        OrderRelation::St,
        OrderRelation::Fr,
        OrderRelation::Rfr,
        OrderRelation::Mrl,
        OrderRelation::Lr,
        OrderRelation::Af,
        OrderRelation::Ai,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OrderRelation::St => "ST",
            OrderRelation::Fr => "FR",
            OrderRelation::Rfr => "RFR",
            OrderRelation::Mrl => "MRL",
            OrderRelation::Lr => "LR",
            OrderRelation::Af => "AF",
            OrderRelation::Ai => "AI",
        }
    }
}

impl fmt::Display for OrderRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OrderRelation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        OrderRelation::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidInput(format!("unknown order relation `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    #[serde(rename = "A_leq_B")]
    ALeqB,
    #[serde(rename = "A_geq_B")]
    AGeqB,
    Equal,
    Crossing,
}

impl Direction {
    /// Whether a relation known to hold in direction `self` allows `other`
    /// for a relation it implies.
    fn allows(self, other: Direction) -> bool {
        match self {
            Direction::ALeqB => matches!(other, Direction::ALeqB | Direction::Equal),
            Direction::AGeqB => matches!(other, Direction::AGeqB | Direction::Equal),
            Direction::Equal => other == Direction::Equal,
            Direction::Crossing => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderVerdict {
    pub relation: OrderRelation,
    pub direction: Direction,
    /// Where the order flips: bisected crossings for pointwise relations,
    /// grid points where the ratio turns for LR and AF.
    pub witnesses: Vec<f64>,
    pub grid_resolution: f64,
    /// Grid points where a constituent function is undefined.
    pub skipped: Vec<f64>,
}

/// Relative slack absorbing closed-form/numeric and differentiation noise.
const ORDER_TOL: f64 = 1e-9;

fn sign(d: f64, scale: f64) -> i8 {
    if d > ORDER_TOL * scale {
        1
    } else if d < -ORDER_TOL * scale {
        -1
    } else {
        0
    }
}

fn density<T: Real>(spec: &SystemSpec<T>, t: T) -> Result<T> {
    Ok(system_function(spec, ReliabilityFn::Fr, t)? * system_sf(spec, t)?)
}

/// For a pointwise relation, `+1` if `A > B` in the order's sense at `t`,
/// `-1` if `A < B`, `0` within tolerance.
fn pointwise_sign<T: Real>(
    a: &SystemSpec<T>,
    b: &SystemSpec<T>,
    rel: OrderRelation,
    t: T,
) -> Result<i8> {
    let (f, flip) = match rel {
        OrderRelation::St => (ReliabilityFn::Sf, false),
        OrderRelation::Fr => (ReliabilityFn::Fr, true),
        OrderRelation::Rfr => (ReliabilityFn::Rfr, false),
        OrderRelation::Mrl => (ReliabilityFn::Mrl, false),
        OrderRelation::Ai => (ReliabilityFn::Ai, true),
        OrderRelation::Lr | OrderRelation::Af => unreachable!("ratio relation"),
    };
    let va = system_function(a, f, t)?.as_f64();
    let vb = system_function(b, f, t)?.as_f64();
    let s = sign(va - vb, va.abs().max(vb.abs()));
    Ok(if flip { -s } else { s })
}

fn ratio<T: Real>(a: &SystemSpec<T>, b: &SystemSpec<T>, rel: OrderRelation, t: T) -> Result<f64> {
    let (na, nb) = match rel {
        OrderRelation::Lr => (density(a, t)?, density(b, t)?),
        _ => (
            system_function(a, ReliabilityFn::Fr, t)?,
            system_function(b, ReliabilityFn::Fr, t)?,
        ),
    };
    let r = (na / nb).as_f64();
    if r.is_finite() {
        Ok(r)
    } else {
        Err(Error::degenerate(
            t.as_f64(),
            format!("{rel} ratio is not finite"),
        ))
    }
}

fn verdict_from_signs(signs: &[i8]) -> Direction {
    let pos = signs.iter().any(|&s| s > 0);
    let neg = signs.iter().any(|&s| s < 0);
    match (pos, neg) {
        (false, false) => Direction::Equal,
        (false, true) => Direction::ALeqB,
        (true, false) => Direction::AGeqB,
        (true, true) => Direction::Crossing,
    }
}

fn refine<T: Real>(
    a: &SystemSpec<T>,
    b: &SystemSpec<T>,
    rel: OrderRelation,
    mut lo: f64,
    mut hi: f64,
    s_lo: i8,
) -> f64 {
    for _ in 0..200 {
        if hi - lo <= 1e-6 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        match pointwise_sign(a, b, rel, T::lit(mid)) {
            Ok(0) => return mid,
            Ok(s) if s == s_lo => lo = mid,
            Ok(_) => hi = mid,
            Err(_) => break,
        }
    }
    0.5 * (lo + hi)
}

fn tolerable(e: &Error) -> bool {
    matches!(
        e,
        Error::Degenerate { .. } | Error::IntegrationFailure { .. }
    )
}

/// Checks whether `A <= B`, `A >= B`, both or neither in `relation` on `grid`.
/// Pointwise orders (ST, FR, RFR, MRL, AI) compare the defining functions;
/// LR and AF check the monotonicity of `f_A/f_B` and `r_A/r_B`. `A <=_AF B`
/// means `r_A/r_B` is non-decreasing (A ages faster).
pub fn compare_order<T: Real>(
    a: &SystemSpec<T>,
    b: &SystemSpec<T>,
    relation: OrderRelation,
    grid: &EvalGrid<T>,
) -> Result<OrderVerdict> {
    let mut skipped = Vec::new();
    let mut witnesses = Vec::new();
    let mut signs = Vec::new();
    match relation {
        OrderRelation::Lr | OrderRelation::Af => {
            let mut prev: Option<(f64, f64)> = None;
            let mut last_sign = 0;
            for &t in grid.points() {
                let g = match ratio(a, b, relation, t) {
                    Ok(g) => g,
                    Err(e) if tolerable(&e) => {
                        skipped.push(t.as_f64());
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                if let Some((_, gp)) = prev {
                    // Non-increasing ratio means A <= B for LR; non-decreasing for AF.
                    let mut s = sign(g - gp, g.abs().max(gp.abs()));
                    if relation == OrderRelation::Af {
                        s = -s;
                    }
                    if s != 0 {
                        if last_sign != 0 && s != last_sign {
                            witnesses.push(prev.unwrap().0);
                        }
                        last_sign = s;
                    }
                    signs.push(s);
                }
                prev = Some((t.as_f64(), g));
            }
        }
        _ => {
            let mut prev: Option<(f64, i8)> = None;
            for &t in grid.points() {
                let s = match pointwise_sign(a, b, relation, t) {
                    Ok(s) => s,
                    Err(e) if tolerable(&e) => {
                        skipped.push(t.as_f64());
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                signs.push(s);
                if s == 0 {
                    continue;
                }
                let t = t.as_f64();
                if let Some((tp, sp)) = prev {
                    if sp != s {
                        witnesses.push(refine(a, b, relation, tp, t, sp));
                    }
                }
                prev = Some((t, s));
            }
        }
    }
    if signs.is_empty() {
        return Err(Error::degenerate(
            grid.points()[0].as_f64(),
            format!("{relation} is undefined on the whole grid"),
        ));
    }
    Ok(OrderVerdict {
        relation,
        direction: verdict_from_signs(&signs),
        witnesses,
        grid_resolution: grid.resolution(),
        skipped,
    })
}

/// Verdicts for several relations over the same pair.
pub fn compare_orders<T: Real>(
    a: &SystemSpec<T>,
    b: &SystemSpec<T>,
    relations: &[OrderRelation],
    grid: &EvalGrid<T>,
) -> Result<Vec<OrderVerdict>> {
    relations
        .iter()
        .map(|&r| compare_order(a, b, r, grid))
        .collect()
}

/// Implications between orders: LR implies ST, FR, RFR and MRL; FR implies
/// ST and MRL; RFR implies ST; AF implies AI.
pub const IMPLICATIONS: [(OrderRelation, OrderRelation); 8] = [
    (OrderRelation::Lr, OrderRelation::St),
    (OrderRelation::Lr, OrderRelation::Fr),
    (OrderRelation::Lr, OrderRelation::Rfr),
    (OrderRelation::Lr, OrderRelation::Mrl),
    (OrderRelation::Fr, OrderRelation::St),
    (OrderRelation::Fr, OrderRelation::Mrl),
    (OrderRelation::Rfr, OrderRelation::St),
    (OrderRelation::Af, OrderRelation::Ai),
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    /// E.g. `LR=>ST`.
    pub edge: String,
    pub antecedent: Direction,
    pub consequent: Direction,
    pub witnesses: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImplicationAudit {
    pub consistent: bool,
    /// Edges whose antecedent and consequent were both present and decided.
    pub checked: Vec<String>,
    pub violations: Vec<Violation>,
}

/// Flags verdict sets that break the implication chain.
pub fn audit_implications(verdicts: &[OrderVerdict]) -> ImplicationAudit {
    let find = |r: OrderRelation| verdicts.iter().find(|v| v.relation == r);
    let mut checked = Vec::new();
    let mut violations = Vec::new();
    for (from, to) in IMPLICATIONS {
        let (Some(a), Some(c)) = (find(from), find(to)) else {
            continue;
        };
        if a.direction == Direction::Crossing {
            continue;
        }
        let edge = format!("{from}=>{to}");
        checked.push(edge.clone());
        if !a.direction.allows(c.direction) {
            violations.push(Violation {
                edge,
                antecedent: a.direction,
                consequent: c.direction,
                witnesses: c.witnesses.clone(),
            });
        }
    }
    ImplicationAudit {
        consistent: violations.is_empty(),
        checked,
        violations,
    }
}
