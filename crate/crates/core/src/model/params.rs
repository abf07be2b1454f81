//! Parameter records for the non-shock families and their derived evaluators.
//!
//! The `a`, `b`, `theta`, `phi` evaluators take a single system time `t`
//! (every coordinate equal), which is how series systems see the model.

use crate::scalar::Real;
use crate::subset::SubsetRateMap;

/// Per-component Weibull shapes.
#[derive(Debug, Clone, PartialEq)]
pub struct WeibullShapes<T>(Vec<T>);

impl<T: Real> WeibullShapes<T> {
    pub fn new(alphas: Vec<T>) -> Self {
        WeibullShapes(alphas)
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn min(&self) -> T {
        self.0.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn max(&self) -> T {
        self.0.iter().copied().fold(T::neg_infinity(), T::max)
    }
}

/// Outer power `l` and shift `gamma` of the frailty construction
/// `exp{gamma^l - (gamma + s)^l}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrailtyParams<T> {
    pub l: T,
    pub gamma: T,
}

impl<T: Real> FrailtyParams<T> {
    /// `H(s) = (gamma + s)^l - gamma^l`, accurate when `s << gamma`.
    pub fn excess_hazard(&self, s: T) -> T {
        if s == T::zero() {
            T::zero()
        } else if self.gamma > T::zero() {
            self.gamma.powf(self.l) * (self.l * (s / self.gamma).ln_1p()).exp_m1()
        } else {
            s.powf(self.l)
        }
    }

    /// `dH/ds = l (gamma + s)^(l-1)`.
    pub fn excess_hazard_slope(&self, s: T) -> T {
        self.l * (self.gamma + s).powf(self.l - T::one())
    }
}

/// Common shape, per-component scales and shock rates of the Lee family.
#[derive(Debug, Clone, PartialEq)]
pub struct LeeParams<T> {
    pub alpha: T,
    pub scales: Vec<T>,
    pub rates: SubsetRateMap<T>,
}

impl<T: Real> LeeParams<T> {
    /// `lambda_L = sum_S lambda_S max_{i in S} c_i^alpha`, the series system's
    /// Weibull rate.
    pub fn lambda_l(&self) -> T {
        self.rates
            .positive()
            .map(|(key, r)| {
                r * key
                    .positions()
                    .map(|i| self.scales[i].powf(self.alpha))
                    .fold(T::zero(), T::max)
            })
            .sum()
    }

    /// `sum_i lambda_i c_i^alpha`: singleton rates only.
    pub fn singleton_rate(&self) -> T {
        (0..self.scales.len())
            .map(|i| self.rates.singleton(i + 1) * self.scales[i].powf(self.alpha))
            .sum()
    }
}

/// Weibull margins with the additive `delta * w` interaction term.
#[derive(Debug, Clone, PartialEq)]
pub struct LuBhat1Params<T> {
    pub lambdas: Vec<T>,
    pub alphas: Vec<T>,
    pub delta: T,
    pub m: T,
}

impl<T: Real> LuBhat1Params<T> {
    /// `w(t_1..t_n) = (sum_i lambda_i^(1/m) t_i^(alpha_i/m))^m`.
    pub fn w(&self, t: &[T]) -> T {
        let inv = T::one() / self.m;
        let s: T = self
            .lambdas
            .iter()
            .zip(&self.alphas)
            .zip(t)
            .filter(|(_, &x)| x > T::zero())
            .map(|((&l, &a), &x)| (l * x.powf(a)).powf(inv))
            .sum();
        if s == T::zero() {
            T::zero()
        } else {
            s.powf(self.m)
        }
    }

    fn inner_sum(&self, t: T) -> T {
        let inv = T::one() / self.m;
        self.lambdas
            .iter()
            .zip(&self.alphas)
            .map(|(&l, &a)| (l * t.powf(a)).powf(inv))
            .sum()
    }

    /// `A(t) = -sum_i lambda_i t^alpha_i`.
    pub fn a(&self, t: T) -> T {
        -self
            .lambdas
            .iter()
            .zip(&self.alphas)
            .map(|(&l, &a)| l * t.powf(a))
            .sum::<T>()
    }

    pub fn a_prime(&self, t: T) -> T {
        -self
            .lambdas
            .iter()
            .zip(&self.alphas)
            .map(|(&l, &a)| l * a * t.powf(a - T::one()))
            .sum::<T>()
    }

    /// `B(t) = w(t, ..., t)`.
    pub fn b(&self, t: T) -> T {
        self.inner_sum(t).powf(self.m)
    }

    pub fn b_prime(&self, t: T) -> T {
        let inv = T::one() / self.m;
        let slope: T = self
            .lambdas
            .iter()
            .zip(&self.alphas)
            .map(|(&l, &a)| l.powf(inv) * a * t.powf(a * inv - T::one()))
            .sum();
        self.inner_sum(t).powf(self.m - T::one()) * slope
    }

    /// `C(t) = A(t) - delta B(t)`, the log survival of the series system.
    pub fn c(&self, t: T) -> T {
        self.a(t) - self.delta * self.b(t)
    }

    pub fn c_prime(&self, t: T) -> T {
        self.a_prime(t) - self.delta * self.b_prime(t)
    }
}

/// Weibull margins joined by the FGM copula.
#[derive(Debug, Clone, PartialEq)]
pub struct FgmParams<T> {
    pub lambdas: Vec<T>,
    pub alphas: Vec<T>,
    pub gamma: T,
}

impl<T: Real> FgmParams<T> {
    fn cums(&self, t: T) -> impl Iterator<Item = (T, T)> + '_ {
        self.lambdas
            .iter()
            .zip(&self.alphas)
            .map(move |(&l, &a)| (l * t.powf(a), l * a * t.powf(a - T::one())))
    }

    /// `A(t) = -sum_i lambda_i t^alpha_i`.
    pub fn a(&self, t: T) -> T {
        -self.cums(t).map(|(x, _)| x).sum::<T>()
    }

    pub fn a_prime(&self, t: T) -> T {
        -self.cums(t).map(|(_, dx)| dx).sum::<T>()
    }

    /// `ln(1 - theta(t)) = sum_i ln(1 - exp(-lambda_i t^alpha_i))`.
    fn ln_one_minus_theta(&self, t: T) -> T {
        self.cums(t)
            .map(|(x, _)| {
                if x > T::LN_2() {
                    (-(-x).exp()).ln_1p()
                } else {
                    (-(-x).exp_m1()).ln()
                }
            })
            .sum()
    }

    /// `1 - theta(t) = prod_i (1 - exp(-lambda_i t^alpha_i))`.
    pub fn one_minus_theta(&self, t: T) -> T {
        self.ln_one_minus_theta(t).exp()
    }

    /// `theta(t)`: the parallel survival of the independent margins, accurate
    /// when it is tiny.
    pub fn theta(&self, t: T) -> T {
        -self.ln_one_minus_theta(t).exp_m1()
    }

    pub fn theta_prime(&self, t: T) -> T {
        let p = self.one_minus_theta(t);
        -p * self.cums(t).map(|(x, dx)| dx / x.exp_m1()).sum::<T>()
    }

    /// `phi(t) = 1 + gamma (1 - theta(t))`.
    pub fn phi(&self, t: T) -> T {
        T::one() + self.gamma * self.one_minus_theta(t)
    }

    pub fn phi_prime(&self, t: T) -> T {
        -self.gamma * self.theta_prime(t)
    }
}

/// Weibull margins joined by the Gumbel-type copula with exponent `1/gamma`.
#[derive(Debug, Clone, PartialEq)]
pub struct LuBhat2Params<T> {
    pub lambdas: Vec<T>,
    pub alphas: Vec<T>,
    pub gamma: T,
}
