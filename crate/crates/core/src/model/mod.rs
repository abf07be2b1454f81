//! Multivariate lifetime families and their joint survival functions.
//!
//! Every family is evaluated in log space: [`ValidatedModel::ln_joint_sf`]
//! accumulates the exponent and only the caller exponentiates, so that
//! survival probabilities far below `f64::MIN_POSITIVE` still carry usable
//! information for ratios and hazards.

mod document;
mod params;

use std::fmt;
use std::str::FromStr;

pub use document::{example_document, schema, ModelDocument};
pub use params::{
    FgmParams, FrailtyParams, LeeParams, LuBhat1Params, LuBhat2Params, WeibullShapes,
};

use crate::error::{Error, Result};
use crate::scalar::{ln_expm1, log_sum_exp, softplus, Real};
use crate::subset::{all_subsets, SubsetRateMap, MAX_COMPONENTS};

/// The ten lifetime families, plus the internal product-of-marginals model
/// produced by [`ValidatedModel::independent_counterpart`] when a true
/// marginal is not itself exponential or Weibull.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    IndExp,
    Mome,
    Mg1,
    IndWeibull,
    Momw,
    Crowder,
    Lee,
    Lb1,
    Fgmw,
    Lb2,
    MarginalProduct,
}

impl Family {
    /// Families that can be described by a model document.
    pub const ALL: [Family; 10] = [
        Family::IndExp,
        Family::Mome,
        Family::Mg1,
        Family::IndWeibull,
        Family::Momw,
        Family::Crowder,
        Family::Lee,
        Family::Lb1,
        Family::Fgmw,
        Family::Lb2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::IndExp => "IndExp",
            Family::Mome => "MOME",
            Family::Mg1 => "MG1",
            Family::IndWeibull => "IndWeibull",
            Family::Momw => "MOMW",
            Family::Crowder => "Crowder",
            Family::Lee => "Lee",
            Family::Lb1 => "LB1",
            Family::Fgmw => "FGMW",
            Family::Lb2 => "LB2",
            Family::MarginalProduct => "MarginalProduct",
        }
    }

    pub fn is_independent(self) -> bool {
        matches!(
            self,
            Family::IndExp | Family::IndWeibull | Family::MarginalProduct
        )
    }

    /// Families built from independent exponential shocks.
    pub fn is_shock_model(self) -> bool {
        matches!(self, Family::Mome | Family::Momw | Family::Lee)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::invalid("family", format!("unknown family `{s}`")))
    }
}

/// Which product of marginals the independence assumption uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Baseline {
    /// Keeps only the singleton (first-order) parameters, dropping every
    /// interaction term. This is the comparison used by the closed-form errors.
    #[default]
    PaperLiteral,
    /// Uses each component's actual marginal distribution.
    TrueMarginal,
}

impl Baseline {
    pub fn name(self) -> &'static str {
        match self {
            Baseline::PaperLiteral => "paper-literal",
            Baseline::TrueMarginal => "true-marginal",
        }
    }
}

impl FromStr for Baseline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper-literal" => Ok(Baseline::PaperLiteral),
            "true-marginal" => Ok(Baseline::TrueMarginal),
            _ => Err(Error::InvalidInput(format!("unknown baseline `{s}`"))),
        }
    }
}

/// Unvalidated family descriptor. Use [`validate`] to obtain a [`ValidatedModel`].
#[derive(Debug, Clone, PartialEq)]
pub enum LifetimeModel<T> {
    IndExp {
        lambdas: Vec<T>,
    },
    Mome {
        rates: SubsetRateMap<T>,
    },
    Mg1 {
        rates: SubsetRateMap<T>,
    },
    IndWeibull {
        lambdas: Vec<T>,
        shapes: WeibullShapes<T>,
    },
    Momw {
        rates: SubsetRateMap<T>,
        shapes: WeibullShapes<T>,
    },
    Crowder {
        lambdas: Vec<T>,
        shapes: WeibullShapes<T>,
        frailty: FrailtyParams<T>,
    },
    Lee(LeeParams<T>),
    Lb1(LuBhat1Params<T>),
    Fgmw(FgmParams<T>),
    Lb2(LuBhat2Params<T>),
    MarginalProduct(Box<ValidatedModel<T>>),
}

impl<T: Real> LifetimeModel<T> {
    pub fn family(&self) -> Family {
        match self {
            LifetimeModel::IndExp { .. } => Family::IndExp,
            LifetimeModel::Mome { .. } => Family::Mome,
            LifetimeModel::Mg1 { .. } => Family::Mg1,
            LifetimeModel::IndWeibull { .. } => Family::IndWeibull,
            LifetimeModel::Momw { .. } => Family::Momw,
            LifetimeModel::Crowder { .. } => Family::Crowder,
            LifetimeModel::Lee(_) => Family::Lee,
            LifetimeModel::Lb1(_) => Family::Lb1,
            LifetimeModel::Fgmw(_) => Family::Fgmw,
            LifetimeModel::Lb2(_) => Family::Lb2,
            LifetimeModel::MarginalProduct(_) => Family::MarginalProduct,
        }
    }
}

/// A model whose parameters satisfy every family invariant. Immutable.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedModel<T> {
    model: LifetimeModel<T>,
    n: usize,
}

fn check_positive<T: Real>(field: &str, xs: &[T], n: usize) -> Result<()> {
    if xs.len() != n {
        return Err(Error::invalid(
            field,
            format!("expected {n} values, got {}", xs.len()),
        ));
    }
    for (i, &x) in xs.iter().enumerate() {
        if !(x.is_finite() && x > T::zero()) {
            return Err(Error::invalid(
                field,
                format!("entry {} must be finite and > 0, got {x}", i + 1),
            ));
        }
    }
    Ok(())
}

fn check_scalar<T: Real>(field: &str, x: T, ok: bool, constraint: &str) -> Result<()> {
    if !x.is_finite() || !ok {
        return Err(Error::invalid(field, format!("{constraint}, got {x}")));
    }
    Ok(())
}

/// Each component must be hit by at least one positive shock, otherwise its
/// lifetime is infinite with probability one.
fn check_covered<T: Real>(rates: &SubsetRateMap<T>) -> Result<()> {
    for i in 1..=rates.n() {
        if rates.covering_total(i) <= T::zero() {
            return Err(Error::invalid(
                "rates",
                format!("component {i} has no positive rate on any subset containing it"),
            ));
        }
    }
    Ok(())
}

/// Checks every family invariant and returns the immutable validated model.
pub fn validate<T: Real>(model: LifetimeModel<T>) -> Result<ValidatedModel<T>> {
    let n = match &model {
        LifetimeModel::IndExp { lambdas } => {
            check_positive("lambdas", lambdas, lambdas.len())?;
            lambdas.len()
        }
        LifetimeModel::Mome { rates } => {
            check_covered(rates)?;
            rates.n()
        }
        LifetimeModel::Mg1 { rates } => {
            for i in 1..=rates.n() {
                if rates.singleton(i) <= T::zero() {
                    return Err(Error::invalid(
                        "rates",
                        format!("MG1 singleton rate for component {i} must be > 0"),
                    ));
                }
            }
            rates.n()
        }
        LifetimeModel::IndWeibull { lambdas, shapes } => {
            check_positive("lambdas", lambdas, lambdas.len())?;
            check_positive("alphas", shapes.as_slice(), lambdas.len())?;
            lambdas.len()
        }
        LifetimeModel::Momw { rates, shapes } => {
            check_covered(rates)?;
            check_positive("alphas", shapes.as_slice(), rates.n())?;
            rates.n()
        }
        LifetimeModel::Crowder {
            lambdas,
            shapes,
            frailty,
        } => {
            check_positive("lambdas", lambdas, lambdas.len())?;
            check_positive("alphas", shapes.as_slice(), lambdas.len())?;
            check_scalar("l", frailty.l, frailty.l > T::zero(), "must be > 0")?;
            check_scalar(
                "gamma",
                frailty.gamma,
                frailty.gamma >= T::zero(),
                "must be >= 0",
            )?;
            lambdas.len()
        }
        LifetimeModel::Lee(p) => {
            check_covered(&p.rates)?;
            check_scalar("alpha", p.alpha, p.alpha > T::zero(), "must be > 0")?;
            check_positive("scales", &p.scales, p.rates.n())?;
            p.rates.n()
        }
        LifetimeModel::Lb1(p) => {
            check_positive("lambdas", &p.lambdas, p.lambdas.len())?;
            check_positive("alphas", &p.alphas, p.lambdas.len())?;
            check_scalar("delta", p.delta, p.delta >= T::zero(), "must be >= 0")?;
            check_scalar("m", p.m, p.m >= T::one(), "must be >= 1")?;
            p.lambdas.len()
        }
        LifetimeModel::Fgmw(p) => {
            check_positive("lambdas", &p.lambdas, p.lambdas.len())?;
            check_positive("alphas", &p.alphas, p.lambdas.len())?;
            check_scalar(
                "gamma",
                p.gamma,
                p.gamma > -T::one() && p.gamma < T::one(),
                "must lie in the open interval (-1, 1)",
            )?;
            p.lambdas.len()
        }
        LifetimeModel::Lb2(p) => {
            check_positive("lambdas", &p.lambdas, p.lambdas.len())?;
            check_positive("alphas", &p.alphas, p.lambdas.len())?;
            check_scalar(
                "gamma",
                p.gamma,
                p.gamma > T::zero() && p.gamma < T::one(),
                "must lie in the open interval (0, 1)",
            )?;
            p.lambdas.len()
        }
        LifetimeModel::MarginalProduct(inner) => inner.n(),
    };
    if n == 0 || n > MAX_COMPONENTS {
        return Err(Error::invalid(
            "n",
            format!("component count must be in 1..={MAX_COMPONENTS}, got {n}"),
        ));
    }
    Ok(ValidatedModel { model, n })
}

#[inline]
fn weibull_term<T: Real>(lambda: T, alpha: T, t: T) -> T {
    if t == T::zero() {
        T::zero()
    } else {
        lambda * t.powf(alpha)
    }
}

impl<T: Real> ValidatedModel<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> Family {
        self.model.family()
    }

    pub fn model(&self) -> &LifetimeModel<T> {
        &self.model
    }

    /// Checks a point of the orthant.
    pub fn check_point(&self, t: &[T]) -> Result<()> {
        if t.len() != self.n {
            return Err(Error::Domain(format!(
                "expected {} coordinates, got {}",
                self.n,
                t.len()
            )));
        }
        if let Some(bad) = t.iter().find(|x| !x.is_finite() || **x < T::zero()) {
            return Err(Error::Domain(format!(
                "coordinates must be finite and >= 0, got {bad}"
            )));
        }
        Ok(())
    }

    /// `ln P(T_1 > t_1, ..., T_n > t_n)`.
    pub fn ln_joint_sf(&self, t: &[T]) -> Result<T> {
        self.check_point(t)?;
        Ok(self.ln_sf_unchecked(t))
    }

    /// `P(T_1 > t_1, ..., T_n > t_n)`.
    pub fn joint_sf(&self, t: &[T]) -> Result<T> {
        self.ln_joint_sf(t).map(T::exp)
    }

    pub(crate) fn ln_sf_unchecked(&self, t: &[T]) -> T {
        match &self.model {
            LifetimeModel::IndExp { lambdas } => {
                -lambdas.iter().zip(t).map(|(&l, &x)| l * x).sum::<T>()
            }
            LifetimeModel::Mome { rates } => -rates
                .positive()
                .map(|(key, r)| r * key.positions().map(|p| t[p]).fold(T::zero(), T::max))
                .sum::<T>(),
            LifetimeModel::Mg1 { rates } => -rates
                .positive()
                .map(|(key, r)| r * key.positions().map(|p| t[p]).fold(T::one(), |a, b| a * b))
                .sum::<T>(),
            LifetimeModel::IndWeibull { lambdas, shapes } => -lambdas
                .iter()
                .zip(shapes.as_slice())
                .zip(t)
                .map(|((&l, &a), &x)| weibull_term(l, a, x))
                .sum::<T>(),
            LifetimeModel::Momw { rates, shapes } => {
                let a = shapes.as_slice();
                -rates
                    .positive()
                    .map(|(key, r)| {
                        r * key
                            .positions()
                            .map(|p| weibull_term(T::one(), a[p], t[p]))
                            .fold(T::zero(), T::max)
                    })
                    .sum::<T>()
            }
            LifetimeModel::Crowder {
                lambdas,
                shapes,
                frailty,
            } => {
                let s = lambdas
                    .iter()
                    .zip(shapes.as_slice())
                    .zip(t)
                    .map(|((&l, &a), &x)| weibull_term(l, a, x))
                    .sum::<T>();
                -frailty.excess_hazard(s)
            }
            LifetimeModel::Lee(p) => -p
                .rates
                .positive()
                .map(|(key, r)| {
                    r * key
                        .positions()
                        .map(|i| weibull_term(T::one(), p.alpha, p.scales[i] * t[i]))
                        .fold(T::zero(), T::max)
                })
                .sum::<T>(),
            LifetimeModel::Lb1(p) => {
                let base = (0..self.n)
                    .map(|i| weibull_term(p.lambdas[i], p.alphas[i], t[i]))
                    .sum::<T>();
                -(base + p.delta * p.w(t))
            }
            LifetimeModel::Fgmw(p) => {
                let mut cum = T::zero();
                let mut prod = T::one();
                for ((&l, &a), &ti) in p.lambdas.iter().zip(&p.alphas).zip(t) {
                    let x = weibull_term(l, a, ti);
                    cum += x;
                    prod *= -(-x).exp_m1();
                }
                -cum + (p.gamma * prod).ln_1p()
            }
            LifetimeModel::Lb2(p) => {
                let scaled: Vec<T> = (0..self.n)
                    .map(|i| weibull_term(p.lambdas[i], p.alphas[i], t[i]))
                    .filter(|&x| x > T::zero())
                    .map(|x| ln_expm1(x) / p.gamma)
                    .collect();
                if scaled.is_empty() {
                    return T::zero();
                }
                -softplus(p.gamma * log_sum_exp(&scaled))
            }
            LifetimeModel::MarginalProduct(inner) => (0..self.n)
                .map(|i| inner.ln_marginal_unchecked(i, t[i]))
                .sum::<T>(),
        }
    }

    /// Log marginal survival of component at zero-based position `pos`.
    pub(crate) fn ln_marginal_unchecked(&self, pos: usize, t: T) -> T {
        let mut point = vec![T::zero(); self.n];
        point[pos] = t;
        self.ln_sf_unchecked(&point)
    }

    /// `P(T_i > t)` for the 1-based component index `i`.
    pub fn marginal_sf(&self, i: usize, t: T) -> Result<T> {
        if i == 0 || i > self.n {
            return Err(Error::Domain(format!(
                "component index {i} outside 1..={}",
                self.n
            )));
        }
        if !t.is_finite() || t < T::zero() {
            return Err(Error::Domain(format!(
                "time must be finite and >= 0, got {t}"
            )));
        }
        Ok(self.ln_marginal_unchecked(i - 1, t).exp())
    }

    /// `P(T_1 <= t_1, ..., T_n <= t_n)` by inclusion-exclusion over the joint
    /// survival function. Independent families use the product directly.
    pub fn joint_cdf(&self, t: &[T]) -> Result<T> {
        self.check_point(t)?;
        if self.family().is_independent() {
            return Ok((0..self.n)
                .map(|i| -self.ln_marginal_unchecked(i, t[i]).exp_m1())
                .fold(T::one(), |a, b| a * b));
        }
        // F = sum over nonempty K of (-1)^|K| (S_K - 1); each S_K - 1 is formed
        // with expm1 so small probabilities keep their relative precision.
        let mut point = vec![T::zero(); self.n];
        let mut acc = T::zero();
        for key in all_subsets(self.n)? {
            point.iter_mut().for_each(|x| *x = T::zero());
            for p in key.positions() {
                point[p] = t[p];
            }
            let term = self.ln_sf_unchecked(&point).exp_m1();
            if key.len() % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        Ok(acc.max(T::zero()).min(T::one()))
    }

    /// The independence model that a system analyst would substitute.
    pub fn independent_counterpart(&self, baseline: Baseline) -> Result<ValidatedModel<T>> {
        let singletons = |rates: &SubsetRateMap<T>| -> Result<Vec<T>> {
            (1..=rates.n())
                .map(|i| {
                    let r = rates.singleton(i);
                    if r > T::zero() {
                        Ok(r)
                    } else {
                        Err(Error::invalid(
                            "baseline",
                            format!(
                                "paper-literal baseline needs a positive singleton rate for component {i}"
                            ),
                        ))
                    }
                })
                .collect()
        };
        let covering =
            |rates: &SubsetRateMap<T>| (1..=rates.n()).map(|i| rates.covering_total(i)).collect();
        let literal = baseline == Baseline::PaperLiteral;
        let model = match &self.model {
            LifetimeModel::IndExp { .. }
            | LifetimeModel::IndWeibull { .. }
            | LifetimeModel::MarginalProduct(_) => return Ok(self.clone()),
            LifetimeModel::Mome { rates } => LifetimeModel::IndExp {
                lambdas: if literal {
                    singletons(rates)?
                } else {
                    covering(rates)
                },
            },
            LifetimeModel::Mg1 { rates } => LifetimeModel::IndExp {
                lambdas: singletons(rates)?,
            },
            LifetimeModel::Momw { rates, shapes } => LifetimeModel::IndWeibull {
                lambdas: if literal {
                    singletons(rates)?
                } else {
                    covering(rates)
                },
                shapes: shapes.clone(),
            },
            LifetimeModel::Crowder {
                lambdas,
                shapes,
                frailty,
            } => {
                if literal {
                    LifetimeModel::IndWeibull {
                        lambdas: lambdas.clone(),
                        shapes: shapes.clone(),
                    }
                } else if frailty.gamma == T::zero() {
                    // exp(-(lambda t^alpha)^l) is Weibull(lambda^l, alpha l).
                    LifetimeModel::IndWeibull {
                        lambdas: lambdas.iter().map(|&l| l.powf(frailty.l)).collect(),
                        shapes: WeibullShapes::new(
                            shapes.as_slice().iter().map(|&a| a * frailty.l).collect(),
                        ),
                    }
                } else {
                    LifetimeModel::MarginalProduct(Box::new(self.clone()))
                }
            }
            LifetimeModel::Lee(p) => {
                let ca: Vec<T> = p.scales.iter().map(|&c| c.powf(p.alpha)).collect();
                let base = if literal {
                    singletons(&p.rates)?
                } else {
                    covering(&p.rates)
                };
                LifetimeModel::IndWeibull {
                    lambdas: base.iter().zip(&ca).map(|(&r, &c)| r * c).collect(),
                    shapes: WeibullShapes::new(vec![p.alpha; self.n]),
                }
            }
            LifetimeModel::Lb1(p) => {
                let factor = if literal {
                    T::one()
                } else {
                    T::one() + p.delta
                };
                LifetimeModel::IndWeibull {
                    lambdas: p.lambdas.iter().map(|&l| l * factor).collect(),
                    shapes: WeibullShapes::new(p.alphas.clone()),
                }
            }
            LifetimeModel::Fgmw(p) => LifetimeModel::IndWeibull {
                lambdas: p.lambdas.clone(),
                shapes: WeibullShapes::new(p.alphas.clone()),
            },
            LifetimeModel::Lb2(p) => LifetimeModel::IndWeibull {
                lambdas: p.lambdas.clone(),
                shapes: WeibullShapes::new(p.alphas.clone()),
            },
        };
        validate(model)
    }

    /// Weibull shape parameters when the family has them.
    pub fn shapes(&self) -> Option<Vec<T>> {
        match &self.model {
            LifetimeModel::IndWeibull { shapes, .. }
            | LifetimeModel::Momw { shapes, .. }
            | LifetimeModel::Crowder { shapes, .. } => Some(shapes.as_slice().to_vec()),
            LifetimeModel::Lee(p) => Some(vec![p.alpha; self.n]),
            LifetimeModel::Lb1(p) => Some(p.alphas.clone()),
            LifetimeModel::Fgmw(p) => Some(p.alphas.clone()),
            LifetimeModel::Lb2(p) => Some(p.alphas.clone()),
            _ => None,
        }
    }

    /// Converts to another scalar type.
    pub fn cast<U: Real>(&self) -> ValidatedModel<U> {
        let v = |xs: &[T]| xs.iter().map(|x| U::lit(x.as_f64())).collect::<Vec<U>>();
        let s = |x: T| U::lit(x.as_f64());
        let model = match &self.model {
            LifetimeModel::IndExp { lambdas } => LifetimeModel::IndExp {
                lambdas: v(lambdas),
            },
            LifetimeModel::Mome { rates } => LifetimeModel::Mome {
                rates: rates.cast(),
            },
            LifetimeModel::Mg1 { rates } => LifetimeModel::Mg1 {
                rates: rates.cast(),
            },
            LifetimeModel::IndWeibull { lambdas, shapes } => LifetimeModel::IndWeibull {
                lambdas: v(lambdas),
                shapes: WeibullShapes::new(v(shapes.as_slice())),
            },
            LifetimeModel::Momw { rates, shapes } => LifetimeModel::Momw {
                rates: rates.cast(),
                shapes: WeibullShapes::new(v(shapes.as_slice())),
            },
            LifetimeModel::Crowder {
                lambdas,
                shapes,
                frailty,
            } => LifetimeModel::Crowder {
                lambdas: v(lambdas),
                shapes: WeibullShapes::new(v(shapes.as_slice())),
                frailty: FrailtyParams {
                    l: s(frailty.l),
                    gamma: s(frailty.gamma),
                },
            },
            LifetimeModel::Lee(p) => LifetimeModel::Lee(LeeParams {
                alpha: s(p.alpha),
                scales: v(&p.scales),
                rates: p.rates.cast(),
            }),
            LifetimeModel::Lb1(p) => LifetimeModel::Lb1(LuBhat1Params {
                lambdas: v(&p.lambdas),
                alphas: v(&p.alphas),
                delta: s(p.delta),
                m: s(p.m),
            }),
            LifetimeModel::Fgmw(p) => LifetimeModel::Fgmw(FgmParams {
                lambdas: v(&p.lambdas),
                alphas: v(&p.alphas),
                gamma: s(p.gamma),
            }),
            LifetimeModel::Lb2(p) => LifetimeModel::Lb2(LuBhat2Params {
                lambdas: v(&p.lambdas),
                alphas: v(&p.alphas),
                gamma: s(p.gamma),
            }),
            LifetimeModel::MarginalProduct(inner) => {
                LifetimeModel::MarginalProduct(Box::new(inner.cast()))
            }
        };
        ValidatedModel { model, n: self.n }
    }
}

#[cfg(test)]
mod tests;
