//! Closed-form registry. Series systems: every family except LB2 has an
//! explicit cumulative hazard. Parallel systems: survival only, for the
//! families whose inclusion-exclusion terms have explicit exponents.

use super::{ReliabilityFn, Structure, SystemSpec};
use crate::model::{LifetimeModel, ValidatedModel};
use crate::scalar::Real;
use crate::subset::{all_subsets, SubsetKey, MAX_ENUMERATED};

/// `(H(t), H'(t))` with `F̄_series(t) = exp(-H(t))`.
pub(crate) fn series_hazard<T: Real>(model: &ValidatedModel<T>, t: T) -> Option<(T, T)> {
    let one = T::one();
    let weibull = |lambdas: &[T], alphas: &[T]| {
        lambdas
            .iter()
            .zip(alphas)
            .map(|(&l, &a)| (l * t.powf(a), l * a * t.powf(a - one)))
            .fold((T::zero(), T::zero()), |acc, x| (acc.0 + x.0, acc.1 + x.1))
    };
    Some(match model.model() {
        LifetimeModel::IndExp { lambdas } => {
            let total: T = lambdas.iter().copied().sum();
            (total * t, total)
        }
        LifetimeModel::Mome { rates } => (rates.total() * t, rates.total()),
        LifetimeModel::Mg1 { rates } => {
            rates
                .positive()
                .fold((T::zero(), T::zero()), |acc, (k, r)| {
                    let p = T::lit(k.len() as f64);
                    (acc.0 + r * t.powf(p), acc.1 + r * p * t.powf(p - one))
                })
        }
        LifetimeModel::IndWeibull { lambdas, shapes } => weibull(lambdas, shapes.as_slice()),
        LifetimeModel::Momw { rates, shapes } => {
            let a = shapes.as_slice();
            rates
                .positive()
                .fold((T::zero(), T::zero()), |acc, (k, r)| {
                    // max_i t^a_i picks the largest shape for t >= 1, the smallest below.
                    let pick = k.positions().map(|p| a[p]);
                    let s = if t >= one {
                        pick.fold(T::neg_infinity(), T::max)
                    } else {
                        pick.fold(T::infinity(), T::min)
                    };
                    (acc.0 + r * t.powf(s), acc.1 + r * s * t.powf(s - one))
                })
        }
        LifetimeModel::Crowder {
            lambdas,
            shapes,
            frailty,
        } => {
            let (s, ds) = weibull(lambdas, shapes.as_slice());
            (
                frailty.excess_hazard(s),
                frailty.excess_hazard_slope(s) * ds,
            )
        }
        LifetimeModel::Lee(p) => {
            let l = p.lambda_l();
            (l * t.powf(p.alpha), p.alpha * l * t.powf(p.alpha - one))
        }
        LifetimeModel::Lb1(p) => (-p.c(t), -p.c_prime(t)),
        LifetimeModel::Fgmw(p) => (
            -p.a(t) - (p.gamma * p.one_minus_theta(t)).ln_1p(),
            -p.a_prime(t) - p.phi_prime(t) / p.phi(t),
        ),
        LifetimeModel::Lb2(_) | LifetimeModel::MarginalProduct(_) => return None,
    })
}

/// `(c_K(t), c_K'(t))` with `F̄(t on K, 0 elsewhere) = exp(-c_K(t))`.
fn parallel_exponent<T: Real>(model: &ValidatedModel<T>, key: SubsetKey, t: T) -> Option<(T, T)> {
    let one = T::one();
    Some(match model.model() {
        LifetimeModel::IndExp { lambdas } => {
            let s: T = key.positions().map(|p| lambdas[p]).sum();
            (s * t, s)
        }
        LifetimeModel::Mome { rates } => {
            // A_K: every shock that hits at least one member of K.
            let a: T = rates
                .positive()
                .filter(|(s, _)| s.mask() & key.mask() != 0)
                .map(|(_, r)| r)
                .sum();
            (a * t, a)
        }
        LifetimeModel::Mg1 { rates } => rates
            .positive()
            .filter(|(s, _)| s.mask() & !key.mask() == 0)
            .fold((T::zero(), T::zero()), |acc, (s, r)| {
                let p = T::lit(s.len() as f64);
                (acc.0 + r * t.powf(p), acc.1 + r * p * t.powf(p - one))
            }),
        LifetimeModel::IndWeibull { lambdas, shapes } => {
            let a = shapes.as_slice();
            key.positions()
                .map(|p| {
                    (
                        lambdas[p] * t.powf(a[p]),
                        lambdas[p] * a[p] * t.powf(a[p] - one),
                    )
                })
                .fold((T::zero(), T::zero()), |acc, x| (acc.0 + x.0, acc.1 + x.1))
        }
        _ => return None,
    })
}

fn parallel_sum<T: Real>(model: &ValidatedModel<T>, t: T, term: impl Fn(T, T) -> T) -> Option<T> {
    let subsets = all_subsets(model.n()).ok()?;
    let mut acc = T::zero();
    for key in subsets {
        let (c, dc) = parallel_exponent(model, key, t)?;
        let v = term(c, dc);
        if key.len() % 2 == 1 {
            acc += v;
        } else {
            acc -= v;
        }
    }
    Some(acc)
}

pub(crate) fn available<T: Real>(spec: &SystemSpec<T>, which: ReliabilityFn) -> bool {
    let m = spec.effective_model();
    match (spec.structure(), which) {
        (_, ReliabilityFn::Mrl) => false,
        (Structure::Series, _) => !matches!(
            m.model(),
            LifetimeModel::Lb2(_) | LifetimeModel::MarginalProduct(_)
        ),
        (Structure::Parallel, ReliabilityFn::Sf) => {
            m.n() <= MAX_ENUMERATED
                && matches!(
                    m.model(),
                    LifetimeModel::IndExp { .. }
                        | LifetimeModel::Mome { .. }
                        | LifetimeModel::Mg1 { .. }
                        | LifetimeModel::IndWeibull { .. }
                        | LifetimeModel::Fgmw(_)
                )
        }
        (Structure::Parallel, _) => false,
    }
}

/// The closed form for `which` at `t`, or `None` when the registry has no
/// entry for this family, structure and function.
pub fn closed_form_value<T: Real>(spec: &SystemSpec<T>, which: ReliabilityFn, t: T) -> Option<T> {
    if !available(spec, which) || !(t.is_finite() && t > T::zero()) {
        return None;
    }
    let m = spec.effective_model();
    match spec.structure() {
        Structure::Series => {
            let (h, dh) = series_hazard(m, t)?;
            Some(match which {
                ReliabilityFn::Sf => (-h).exp(),
                ReliabilityFn::Fr => dh,
                ReliabilityFn::Rfr => dh / h.exp_m1(),
                ReliabilityFn::Ai => match m.model() {
                    LifetimeModel::IndExp { .. } | LifetimeModel::Mome { .. } => T::one(),
                    LifetimeModel::Lee(p) => p.alpha,
                    _ => t * dh / h,
                },
                ReliabilityFn::Mrl => return None,
            })
        }
        Structure::Parallel => match m.model() {
            LifetimeModel::Fgmw(p) => {
                let theta = p.theta(t);
                let sign = if m.n() % 2 == 1 { T::one() } else { -T::one() };
                Some(theta + sign * p.a(t).exp() * p.gamma * p.one_minus_theta(t))
            }
            _ => parallel_sum(m, t, |c, _| (-c).exp()),
        },
    }
}

/// `(F̄_T(t), F_T(t), f_T(t))` of a parallel system, for the families with
/// explicit inclusion-exclusion exponents and for FGMW. `F_T` is summed
/// directly so it keeps its precision near the origin.
pub(crate) fn parallel_sf_cdf_density<T: Real>(
    model: &ValidatedModel<T>,
    t: T,
) -> Option<(T, T, T)> {
    if let LifetimeModel::Fgmw(p) = model.model() {
        let sign = if model.n() % 2 == 1 {
            T::one()
        } else {
            -T::one()
        };
        let (dtheta, q, ea) = (p.theta_prime(t), p.one_minus_theta(t), p.a(t).exp());
        let sf = p.theta(t) + sign * p.gamma * ea * q;
        let cdf = q * (T::one() - sign * p.gamma * ea);
        let dsf = dtheta + sign * p.gamma * ea * (p.a_prime(t) * q - dtheta);
        return Some((sf, cdf, -dsf));
    }
    let sf = parallel_sum(model, t, |c, _| (-c).exp())?;
    let cdf = parallel_sum(model, t, |c, _| -(-c).exp_m1())?;
    let f = parallel_sum(model, t, |c, dc| dc * (-c).exp())?;
    Some((sf, cdf, f))
}

/// Parallel-system density `f_T(t)` as an explicit inclusion-exclusion sum,
/// for IndExp, MOME, MG1 and IndWeibull. Used as an oracle for the numeric
/// engine.
pub fn parallel_density_closed_form<T: Real>(spec: &SystemSpec<T>, t: T) -> Option<T> {
    if spec.structure() != Structure::Parallel {
        return None;
    }
    parallel_sum(spec.effective_model(), t, |c, dc| dc * (-c).exp())
}
