use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// Strictly increasing, positive, finite evaluation times.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalGrid<T> {
    points: Vec<T>,
}

impl<T: Real> EvalGrid<T> {
    pub fn new(points: Vec<T>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("grid must not be empty".into()));
        }
        if let Some(bad) = points.iter().find(|x| !x.is_finite() || **x <= T::zero()) {
            return Err(Error::InvalidInput(format!(
                "grid points must be finite and > 0, got {bad}"
            )));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput(
                "grid points must be strictly increasing".into(),
            ));
        }
        Ok(EvalGrid { points })
    }

    /// `count` points from `start` to `stop` inclusive.
    pub fn spaced(start: T, stop: T, count: usize, spacing: Spacing) -> Result<Self> {
        if !(start.is_finite() && start > T::zero()) {
            return Err(Error::InvalidInput(format!(
                "grid start must be > 0, got {start}"
            )));
        }
        if !(stop.is_finite() && stop > start) {
            return Err(Error::InvalidInput(format!(
                "grid stop must exceed start, got {start}..{stop}"
            )));
        }
        if count < 2 {
            return Err(Error::InvalidInput("grid count must be at least 2".into()));
        }
        let last = T::lit((count - 1) as f64);
        let points = (0..count)
            .map(|k| {
                let f = T::lit(k as f64) / last;
                match spacing {
                    Spacing::Linear => start + (stop - start) * f,
                    Spacing::Log => (start.ln() + (stop.ln() - start.ln()) * f).exp(),
                }
            })
            .enumerate()
            .map(|(k, x)| {
                if k == 0 {
                    start
                } else if k == count - 1 {
                    stop
                } else {
                    x
                }
            })
            .collect();
        EvalGrid::new(points)
    }

    pub fn linear(start: T, stop: T, count: usize) -> Result<Self> {
        Self::spaced(start, stop, count, Spacing::Linear)
    }

    pub fn log(start: T, stop: T, count: usize) -> Result<Self> {
        Self::spaced(start, stop, count, Spacing::Log)
    }

    /// The default analysis grid: 200 log-spaced points on `[0.01, 10]`.
    pub fn default_grid() -> Self {
        Self::log(T::lit(0.01), T::lit(10.0), 200).expect("default grid is valid")
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Largest ratio between neighbouring points, minus one.
    pub fn resolution(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| (w[1] / w[0]).as_f64() - 1.0)
            .fold(0.0, f64::max)
    }
}

impl<T: Real> FromStr for EvalGrid<T> {
    type Err = Error;

    /// Parses `START:STOP:COUNT:SPACING` with spacing `linear` or `log`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("grid `{s}` is not START:STOP:COUNT:SPACING"));
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(bad());
        }
        let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let stop: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
        let spacing = match parts[3].trim() {
            "linear" | "lin" => Spacing::Linear,
            "log" => Spacing::Log,
            _ => return Err(bad()),
        };
        EvalGrid::spaced(T::lit(start), T::lit(stop), count, spacing)
    }
}
