//! Reliability of series and parallel systems whose components have dependent
//! multivariate exponential or Weibull lifetimes, and the error made by
//! treating those components as independent.
//!
//! The numeric core is generic over [`Real`] (`f32` or `f64`); the aliases at
//! the crate root fix the scalar to `f64`.

pub mod error;
pub mod error_analysis;
mod io;
pub mod model;
pub mod orders;
pub mod scalar;
pub mod simulate;
pub mod subset;
pub mod system;

pub use error::{Error, Result};
pub use model::{Baseline, Family, LifetimeModel, ModelDocument, ValidatedModel};
pub use orders::{
    audit_implications, compare_order, DependenceLabel, Direction, OrderRelation, OrderVerdict,
};
pub use scalar::Real;
pub use simulate::{mc_validate, sample_model, EmpiricalCurve, McConfig, SampleMatrix};
pub use subset::{SubsetKey, SubsetRateMap};
pub use system::{
    Assumption, CurveSet, EvalGrid, Provenance, ReliabilityFn, Structure, SystemSpec,
};

pub type Model = ValidatedModel<f64>;
pub type Spec = SystemSpec<f64>;
pub type Grid = EvalGrid<f64>;
pub type Curves = CurveSet<f64>;
pub type Samples = SampleMatrix<f64>;
pub type Empirical = EmpiricalCurve<f64>;
