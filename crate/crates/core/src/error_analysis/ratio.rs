//! `h(t) = (gamma/beta) (e^(beta t^alpha) - 1) / (e^(gamma t^alpha) - 1) - 1`,
//! the ratio behind the sign of the RFR error in exponential-type models.
//! It increases in `t` when `beta > gamma`, decreases when `beta < gamma`,
//! and tends to 0 as `t -> 0`.

use crate::error::{Error, Result};
use crate::scalar::{ln_expm1, Real};

fn check<T: Real>(beta: T, gamma: T, alpha: T, t: T) -> Result<()> {
    for (name, v) in [("beta", beta), ("gamma", gamma), ("alpha", alpha)] {
        if !(v.is_finite() && v > T::zero()) {
            return Err(Error::invalid(
                name,
                format!("must be finite and > 0, got {v}"),
            ));
        }
    }
    if !t.is_finite() || t < T::zero() {
        return Err(Error::Domain(format!(
            "time must be finite and >= 0, got {t}"
        )));
    }
    if t == T::zero() {
        return Err(Error::degenerate(0.0, "ratio is 0/0 at t = 0"));
    }
    Ok(())
}

/// `ln(1 + h(t))`, finite wherever `h` would overflow.
pub fn monotone_ratio_ln<T: Real>(beta: T, gamma: T, alpha: T, t: T) -> Result<T> {
    check(beta, gamma, alpha, t)?;
    if beta == gamma {
        return Ok(T::zero());
    }
    let x = t.powf(alpha);
    Ok((gamma / beta).ln() + ln_expm1(beta * x) - ln_expm1(gamma * x))
}

/// `h(t)`; `t = 0` is a [`Error::Degenerate`].
pub fn monotone_ratio<T: Real>(beta: T, gamma: T, alpha: T, t: T) -> Result<T> {
    monotone_ratio_ln(beta, gamma, alpha, t).map(|l| l.exp_m1())
}

/// `h(t)` with the limit `h(0) = 0` substituted at `t = 0`.
pub fn monotone_ratio_or_limit<T: Real>(beta: T, gamma: T, alpha: T, t: T) -> Result<T> {
    if t == T::zero() {
        check(beta, gamma, alpha, T::one())?;
        return Ok(T::zero());
    }
    monotone_ratio(beta, gamma, alpha, t)
}
