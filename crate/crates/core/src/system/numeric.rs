//! Generic numeric engine: derivatives of `ln F̄`, the mean residual life
//! integral and the integrated hazard.

use std::cell::Cell;

use super::{check_time, system_function, system_ln_probs, ReliabilityFn, SystemSpec};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Smallest time at which the aging intensity is evaluated numerically.
pub const AI_MIN_TIME: f64 = 1e-10;

const MAX_DOUBLINGS: usize = 200;

/// Relative finite-difference step: about `1e-4` for `f64`, scaled with the
/// fifth root of machine epsilon (the optimum for a Richardson-corrected
/// central difference).
fn step<T: Real>(t: T) -> T {
    t * T::lit(0.15) * T::epsilon().powf(T::lit(0.2))
}

fn ln_sf_at<T: Real>(spec: &SystemSpec<T>, t: T) -> Result<T> {
    let l = system_ln_probs(spec, t)?.ln_sf;
    if l.is_finite() {
        Ok(l)
    } else {
        Err(Error::degenerate(
            t.as_f64(),
            "system survival underflows to 0",
        ))
    }
}

/// `d/dt g(t)` by central differences with one Richardson extrapolation.
pub(crate) fn derivative<T: Real>(mut g: impl FnMut(T) -> Result<T>, t: T) -> Result<T> {
    let h = step(t);
    let mut central = |h: T| -> Result<T> {
        let (a, b) = (t + h, t - h);
        Ok((g(a)? - g(b)?) / (a - b))
    };
    let coarse = central(h)?;
    let fine = central(h / T::lit(2.0))?;
    Ok((T::lit(4.0) * fine - coarse) / T::lit(3.0))
}

/// Failure rate `-d/dt ln F̄_sys(t)`.
pub(crate) fn numeric_fr<T: Real>(spec: &SystemSpec<T>, t: T) -> Result<T> {
    let d = derivative(|x| ln_sf_at(spec, x), t)?;
    Ok((-d).max(T::zero()))
}

/// Evaluates `which` by the numeric engine alone, ignoring closed forms.
pub fn numeric_value<T: Real>(spec: &SystemSpec<T>, which: ReliabilityFn, t: T) -> Result<T> {
    check_time(t)?;
    match which {
        ReliabilityFn::Sf => Ok(system_ln_probs(spec, t)?.ln_sf.exp()),
        ReliabilityFn::Fr => numeric_fr(spec, t),
        ReliabilityFn::Rfr => {
            let p = system_ln_probs(spec, t)?;
            if !p.ln_cdf.is_finite() || !p.ln_sf.is_finite() {
                return Err(Error::degenerate(
                    t.as_f64(),
                    "reversed failure rate needs 0 < F̄ < 1",
                ));
            }
            Ok(numeric_fr(spec, t)? * (p.ln_sf - p.ln_cdf).exp())
        }
        ReliabilityFn::Ai => {
            if t.as_f64() < AI_MIN_TIME {
                return Err(Error::degenerate(
                    t.as_f64(),
                    "aging intensity is not evaluated numerically this close to 0",
                ));
            }
            let h = -ln_sf_at(spec, t)?;
            if h <= T::zero() {
                return Err(Error::degenerate(
                    t.as_f64(),
                    "cumulative hazard is 0, aging intensity undefined",
                ));
            }
            Ok(t * numeric_fr(spec, t)? / h)
        }
        ReliabilityFn::Mrl => mean_residual_life(spec, t),
    }
}

/// `∫_t^∞ F̄(x) dx / F̄(t)`: adaptive Simpson over geometrically growing
/// segments, closed off with an exponential tail fitted to the last segment.
fn mean_residual_life<T: Real>(spec: &SystemSpec<T>, t: T) -> Result<T> {
    let l0 = ln_sf_at(spec, t)?;
    let fail = Cell::new(None);
    let g = |x: T| -> T {
        match system_ln_probs(spec, x) {
            Ok(p) => (p.ln_sf - l0).exp(),
            Err(e) => {
                fail.set(Some(e));
                T::zero()
            }
        }
    };
    let fr = numeric_fr(spec, t).unwrap_or(T::zero());
    let mut len = if fr > T::zero() {
        T::lit(0.5) / fr
    } else {
        t.max(T::one())
    };
    let rel = T::lit(1e-11).max(T::epsilon() * T::lit(16.0));
    let mut a = t;
    let mut ga = T::one();
    let mut total = T::zero();
    for _ in 0..MAX_DOUBLINGS {
        let b = a + len;
        if !b.is_finite() {
            break;
        }
        total += integrate(&g, a, b, rel);
        if let Some(e) = fail.take() {
            return Err(e);
        }
        let gb = g(b);
        if gb == T::zero() {
            return Ok(total);
        }
        let decay = (ga.ln() - gb.ln()) / (b - a);
        if gb < T::lit(1e-3) {
            if decay <= T::zero() {
                return Err(Error::IntegrationFailure {
                    t: t.as_f64(),
                    reason: "survival tail does not decay".into(),
                });
            }
            let tail = gb / decay;
            if tail <= rel * total {
                return Ok(total + tail);
            }
        }
        a = b;
        ga = gb;
        len = len + len;
    }
    Err(Error::IntegrationFailure {
        t: t.as_f64(),
        reason: "tail bound not established".into(),
    })
}

/// Function evaluations allowed per panel before refinement stops.
const PANEL_BUDGET: usize = 4096;

/// `∫_a^b f` by adaptive Simpson on eight initial panels.
pub(crate) fn integrate<T: Real>(f: &impl Fn(T) -> T, a: T, b: T, rel: T) -> T {
    const PANELS: usize = 8;
    let w = (b - a) / T::lit(PANELS as f64);
    let ends: Vec<T> = (0..=PANELS)
        .map(|k| {
            if k == PANELS {
                b
            } else {
                a + w * T::lit(k as f64)
            }
        })
        .collect();
    let vals: Vec<T> = ends.iter().map(|&x| f(x)).collect();
    let mut coarse = Vec::with_capacity(PANELS);
    for k in 0..PANELS {
        let m = (ends[k] + ends[k + 1]) / T::lit(2.0);
        let fm = f(m);
        let whole =
            (ends[k + 1] - ends[k]) / T::lit(6.0) * (vals[k] + T::lit(4.0) * fm + vals[k + 1]);
        coarse.push((m, fm, whole));
    }
    let scale = coarse.iter().map(|c| c.2.abs()).sum::<T>();
    let tol = (rel * scale).max(T::min_positive_value()) / T::lit(PANELS as f64);
    (0..PANELS)
        .map(|k| {
            let (m, fm, whole) = coarse[k];
            let budget = Cell::new(PANEL_BUDGET);
            let seg = Segment {
                a: ends[k],
                m,
                b: ends[k + 1],
                fa: vals[k],
                fm,
                fb: vals[k + 1],
                whole,
            };
            simpson(f, seg, tol, 32, &budget)
        })
        .sum()
}

#[derive(Clone, Copy)]
struct Segment<T> {
    a: T,
    m: T,
    b: T,
    fa: T,
    fm: T,
    fb: T,
    whole: T,
}

fn simpson<T: Real>(
    f: &impl Fn(T) -> T,
    s: Segment<T>,
    tol: T,
    depth: u32,
    budget: &Cell<usize>,
) -> T {
    let two = T::lit(2.0);
    let (lm, rm) = ((s.a + s.m) / two, (s.m + s.b) / two);
    let (flm, frm) = (f(lm), f(rm));
    budget.set(budget.get().saturating_sub(2));
    let six = T::lit(6.0);
    let left = (s.m - s.a) / six * (s.fa + T::lit(4.0) * flm + s.fm);
    let right = (s.b - s.m) / six * (s.fm + T::lit(4.0) * frm + s.fb);
    let delta = left + right - s.whole;
    let noise = T::epsilon() * T::lit(64.0) * (left.abs() + right.abs());
    if depth == 0
        || budget.get() == 0
        || delta.abs() <= T::lit(15.0) * tol.max(noise)
        || lm <= s.a
        || rm >= s.b
    {
        return left + right + delta / T::lit(15.0);
    }
    let l = Segment {
        a: s.a,
        m: lm,
        b: s.m,
        fa: s.fa,
        fm: flm,
        fb: s.fm,
        whole: left,
    };
    let r = Segment {
        a: s.m,
        m: rm,
        b: s.b,
        fa: s.fm,
        fm: frm,
        fb: s.fb,
        whole: right,
    };
    simpson(f, l, tol / two, depth - 1, budget) + simpson(f, r, tol / two, depth - 1, budget)
}

/// `∫_0^t FR(u) du`, with `u = t s^p` to tame the behaviour of Weibull-type
/// hazards at the origin.
pub fn cumulative_hazard_numeric<T: Real>(spec: &SystemSpec<T>, t: T) -> Result<T> {
    check_time(t)?;
    let min_shape = spec
        .effective_model()
        .shapes()
        .map(|a| a.into_iter().fold(T::infinity(), T::min))
        .unwrap_or(T::one());
    let p = T::lit(4.0).max((T::lit(2.0) / min_shape).ceil());
    let fail = Cell::new(None);
    let integrand = |s: T| -> T {
        if s <= T::zero() {
            return T::zero();
        }
        let u = t * s.powf(p);
        if u <= T::zero() {
            return T::zero();
        }
        match system_function(spec, ReliabilityFn::Fr, u) {
            Ok(r) => r * p * t * s.powf(p - T::one()),
            Err(e) => {
                fail.set(Some(e));
                T::zero()
            }
        }
    };
    let v = integrate(
        &integrand,
        T::zero(),
        T::one(),
        T::lit(1e-9).max(T::epsilon() * T::lit(64.0)),
    );
    match fail.take() {
        Some(e) => Err(e),
        None => Ok(v),
    }
}
