//! Closed-form relative errors. Series systems use the cumulative hazards of
//! both systems; parallel systems use their explicit survival, distribution
//! and density functions.

use super::ErrorPair;
use crate::model::{Baseline, LifetimeModel};
use crate::scalar::Real;
use crate::subset::MAX_ENUMERATED;
use crate::system::closed_form::{parallel_sf_cdf_density, series_hazard};
use crate::system::{ReliabilityFn, Structure};

pub(crate) fn available<T: Real>(pair: &ErrorPair<T>, which: ReliabilityFn) -> bool {
    if which == ReliabilityFn::Mrl {
        return false;
    }
    let d = pair.dependent().effective_model();
    let i = pair.independent().effective_model();
    if matches!(i.model(), LifetimeModel::MarginalProduct(_)) {
        return false;
    }
    match pair.structure() {
        Structure::Series => !matches!(d.model(), LifetimeModel::Lb2(_)),
        Structure::Parallel => {
            d.n() <= MAX_ENUMERATED
                && matches!(
                    d.model(),
                    LifetimeModel::IndExp { .. }
                        | LifetimeModel::Mome { .. }
                        | LifetimeModel::Mg1 { .. }
                        | LifetimeModel::IndWeibull { .. }
                        | LifetimeModel::Fgmw(_)
                )
        }
    }
}

/// The closed-form relative error in `which` at `t`, or `None` without a
/// registry entry. MRL never has one.
pub fn closed_form_error<T: Real>(pair: &ErrorPair<T>, which: ReliabilityFn, t: T) -> Option<T> {
    if !available(pair, which) || !(t.is_finite() && t > T::zero()) {
        return None;
    }
    let d = pair.dependent().effective_model();
    let i = pair.independent().effective_model();
    let one = T::one();
    match pair.structure() {
        Structure::Series => {
            if which == ReliabilityFn::Ai
                && matches!(
                    d.model(),
                    LifetimeModel::Mome { .. } | LifetimeModel::Lee(_)
                )
            {
                return Some(T::zero());
            }
            let (hd, dd) = series_hazard(d, t)?;
            let (hi, di) = series_hazard(i, t)?;
            Some(match which {
                ReliabilityFn::Sf => match (d.model(), i.model()) {
                    (LifetimeModel::Fgmw(p), LifetimeModel::IndWeibull { lambdas, shapes })
                        if p.lambdas == *lambdas && p.alphas == shapes.as_slice() =>
                    {
                        p.gamma * p.one_minus_theta(t)
                    }
                    _ => (hi - hd).exp_m1(),
                },
                ReliabilityFn::Fr => (dd - di) / di,
                ReliabilityFn::Rfr => dd / di * (hi.exp_m1() / hd.exp_m1()) - one,
                ReliabilityFn::Ai => dd * hi / (hd * di) - one,
                ReliabilityFn::Mrl => return None,
            })
        }
        Structure::Parallel => {
            let (sd, cd, fd) = parallel_sf_cdf_density(d, t)?;
            let (si, ci, fi) = parallel_sf_cdf_density(i, t)?;
            let fr_ratio = (fd / sd) / (fi / si);
            Some(match which {
                ReliabilityFn::Sf => match (d.model(), i.model()) {
                    // Same margins: the numerator is the copula term itself.
                    (LifetimeModel::Fgmw(p), LifetimeModel::IndWeibull { lambdas, shapes })
                        if p.lambdas == *lambdas && p.alphas == shapes.as_slice() =>
                    {
                        let sign = if d.n() % 2 == 1 { one } else { -one };
                        sign * p.gamma * p.a(t).exp() * p.one_minus_theta(t) / si
                    }
                    // Subtract whichever pair of probabilities is small.
                    _ if si < T::lit(0.5) => (sd - si) / si,
                    _ => (ci - cd) / si,
                },
                ReliabilityFn::Fr => fr_ratio - one,
                ReliabilityFn::Rfr => fd / fi * (ci / cd) - one,
                ReliabilityFn::Ai => fr_ratio * ((-ci).ln_1p() / (-cd).ln_1p()) - one,
                ReliabilityFn::Mrl => return None,
            })
        }
    }
}

/// Error expressions exactly as printed for LB1 series systems (against the
/// `exp(A)` baseline) and FGMW systems. Several of them disagree with the
/// definitions; [`closed_form_error`] holds the derived forms.
pub fn printed_error<T: Real>(pair: &ErrorPair<T>, which: ReliabilityFn, t: T) -> Option<T> {
    let one = T::one();
    let two = T::lit(2.0);
    match (pair.model().model(), pair.structure()) {
        (LifetimeModel::Lb1(p), Structure::Series) if pair.baseline() == Baseline::PaperLiteral => {
            let (a, da, b, db) = (p.a(t), p.a_prime(t), p.b(t), p.b_prime(t));
            match which {
                ReliabilityFn::Sf => Some(p.delta * b.exp() - one),
                ReliabilityFn::Fr => Some(-p.delta * db / da),
                ReliabilityFn::Ai => {
                    Some(p.delta * (db / da + b / a - two) / (one - p.delta * b / a))
                }
                _ => None,
            }
        }
        (LifetimeModel::Fgmw(p), Structure::Series) => match which {
            ReliabilityFn::Sf => Some(p.gamma * p.one_minus_theta(t)),
            ReliabilityFn::Fr => Some(p.phi_prime(t) / (p.phi(t) * p.a_prime(t))),
            _ => None,
        },
        (LifetimeModel::Fgmw(p), Structure::Parallel) => {
            let n_sign = if pair.model().n().is_multiple_of(2) {
                one
            } else {
                -one
            };
            let (theta, dtheta, ea, g) = (p.theta(t), p.theta_prime(t), p.a(t).exp(), p.gamma);
            match which {
                ReliabilityFn::Sf => Some(-n_sign * ea * g * p.one_minus_theta(t) / theta),
                ReliabilityFn::Fr => Some(
                    (dtheta + p.a_prime(t) * theta * (one - theta))
                        / (dtheta * (theta - one + n_sign * theta / (g * ea))),
                ),
                ReliabilityFn::Rfr => {
                    Some((theta - p.a_prime(t)) / (dtheta * (one + n_sign / (g * ea))))
                }
                _ => None,
            }
        }
        _ => None,
    }
}
