//! Exact samplers for the families with a simple stochastic construction,
//! and empirical system survival with binomial confidence bands.
//!
//! Row `k` of a sample draws from its own ChaCha stream `(seed, k)`, so the
//! matrix does not depend on how rows are scheduled across threads.

mod empirical;
mod stats;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use empirical::{
    empirical_system_sf, mc_validate, wilson_interval, CoveragePoint, CoverageReport,
    EmpiricalCurve, McConfig,
};
pub use stats::{ks_critical_value, ks_statistic, spearman_rho};

use crate::error::{Error, Result};
use crate::io;
use crate::model::{Family, LifetimeModel, ValidatedModel};
use crate::scalar::Real;
use crate::subset::SubsetRateMap;

/// `n_samples x n` lifetimes, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMatrix<T> {
    data: Vec<T>,
    n: usize,
    pub seed: u64,
    pub family: Family,
}

impl<T: Real> SampleMatrix<T> {
    /// Wraps externally produced rows; every entry must be finite and >= 0.
    pub fn from_rows(rows: &[Vec<T>], seed: u64, family: Family) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput(
                "rows must be nonempty and of equal length".into(),
            ));
        }
        if rows
            .iter()
            .flatten()
            .any(|x| !x.is_finite() || *x < T::zero())
        {
            return Err(Error::InvalidInput(
                "lifetimes must be finite and >= 0".into(),
            ));
        }
        Ok(SampleMatrix {
            data: rows.concat(),
            n,
            seed,
            family,
        })
    }

    pub fn n_samples(&self) -> usize {
        self.data.len() / self.n
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, k: usize) -> &[T] {
        &self.data[k * self.n..(k + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks_exact(self.n)
    }

    /// One row per replicate, columns `t1..tn`.
    pub fn to_csv(&self) -> String {
        let header: Vec<String> = (1..=self.n).map(|i| format!("t{i}")).collect();
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&header).expect("in-memory CSV write");
        for r in self.rows() {
            w.write_record(r.iter().map(|x| x.as_f64().to_string()))
                .expect("in-memory CSV write");
        }
        io::into_string(w)
    }
}

/// Standard exponential variate.
fn exp1(rng: &mut ChaCha8Rng) -> f64 {
    let u: f64 = rng.random();
    -(-u).ln_1p()
}

/// Shock-model draw: `Z_i = min over S containing i of E_S`, `E_S ~ Exp(lambda_S)`.
fn shocks<T: Real>(rates: &SubsetRateMap<T>, rng: &mut ChaCha8Rng, out: &mut [f64]) {
    out.fill(f64::INFINITY);
    for (key, r) in rates.positive() {
        let e = exp1(rng) / r.as_f64();
        for p in key.positions() {
            out[p] = out[p].min(e);
        }
    }
}

fn draw_row<T: Real>(model: &LifetimeModel<T>, rng: &mut ChaCha8Rng, out: &mut [f64]) {
    match model {
        LifetimeModel::IndExp { lambdas } => {
            for (o, l) in out.iter_mut().zip(lambdas) {
                *o = exp1(rng) / l.as_f64();
            }
        }
        LifetimeModel::IndWeibull { lambdas, shapes } => {
            for ((o, l), a) in out.iter_mut().zip(lambdas).zip(shapes.as_slice()) {
                *o = (exp1(rng) / l.as_f64()).powf(1.0 / a.as_f64());
            }
        }
        LifetimeModel::Mome { rates } => shocks(rates, rng, out),
        LifetimeModel::Momw { rates, shapes } => {
            shocks(rates, rng, out);
            for (o, a) in out.iter_mut().zip(shapes.as_slice()) {
                *o = o.powf(1.0 / a.as_f64());
            }
        }
        LifetimeModel::Lee(p) => {
            shocks(&p.rates, rng, out);
            let inv = 1.0 / p.alpha.as_f64();
            for (o, c) in out.iter_mut().zip(&p.scales) {
                *o = o.powf(inv) / c.as_f64();
            }
        }
        LifetimeModel::Fgmw(p) => {
            // (U, V) = (S_1(T_1), S_2(T_2)) has copula uv(1 + gamma(1-u)(1-v)):
            // U is uniform, V solves the conditional dC/du = w.
            let u: f64 = 1.0 - rng.random::<f64>();
            let w: f64 = rng.random();
            let a = p.gamma.as_f64() * (1.0 - 2.0 * u);
            let v = 2.0 * w / ((1.0 + a) + ((1.0 + a).powi(2) - 4.0 * a * w).sqrt());
            for (o, (s, (l, al))) in out
                .iter_mut()
                .zip([u, v].into_iter().zip(p.lambdas.iter().zip(&p.alphas)))
            {
                *o = (-s.ln() / l.as_f64()).powf(1.0 / al.as_f64());
            }
        }
        _ => unreachable!("sampler support is checked before drawing"),
    }
}

/// Whether [`sample_model`] has an exact sampler for `model`.
pub fn supports_sampling<T: Real>(model: &ValidatedModel<T>) -> bool {
    match model.family() {
        Family::IndExp | Family::IndWeibull | Family::Mome | Family::Momw | Family::Lee => true,
        Family::Fgmw => model.n() == 2,
        _ => false,
    }
}

/// Draws `n_samples` exact replicates of the component lifetimes.
pub fn sample_model<T: Real>(
    model: &ValidatedModel<T>,
    n_samples: usize,
    seed: u64,
) -> Result<SampleMatrix<T>> {
    if !supports_sampling(model) {
        return Err(Error::Unsupported(format!(
            "no exact sampler for {} with {} components",
            model.family(),
            model.n()
        )));
    }
    if n_samples == 0 {
        return Err(Error::InvalidInput("n_samples must be >= 1".into()));
    }
    let n = model.n();
    let mut data = vec![T::zero(); n_samples * n];
    data.par_chunks_mut(n).enumerate().for_each(|(k, row)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        let mut buf = vec![0.0; n];
        draw_row(model.model(), &mut rng, &mut buf);
        for (o, x) in row.iter_mut().zip(buf) {
            *o = T::lit(x);
        }
    });
    Ok(SampleMatrix {
        data,
        n,
        seed,
        family: model.family(),
    })
}
