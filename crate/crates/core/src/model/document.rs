use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{
    validate, Family, FgmParams, FrailtyParams, LeeParams, LifetimeModel, LuBhat1Params,
    LuBhat2Params, ValidatedModel, WeibullShapes,
};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::subset::{SubsetKey, SubsetRateMap};

/// JSON form of a model, e.g.
/// `{"family": "MOME", "n": 2, "rates": {"1": 1.0, "2": 1.0, "1,2": 0.5}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub family: String,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rates: Option<BTreeMap<String, f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambdas: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphas: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scales: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
}

/// Fields each family expects, with a one-line description.
pub fn schema(family: Family) -> &'static [(&'static str, &'static str)] {
    const RATES: (&str, &str) = (
        "rates",
        "map from comma-joined ascending subset keys to rates >= 0",
    );
    const LAMBDAS: (&str, &str) = ("lambdas", "n rates > 0");
    const ALPHAS: (&str, &str) = ("alphas", "n shapes > 0");
    match family {
        Family::IndExp => &[LAMBDAS],
        Family::Mome | Family::Mg1 => &[RATES],
        Family::IndWeibull => &[LAMBDAS, ALPHAS],
        Family::Momw => &[RATES, ALPHAS],
        Family::Crowder => &[
            LAMBDAS,
            ALPHAS,
            ("l", "outer power > 0"),
            ("gamma", "shift >= 0"),
        ],
        Family::Lee => &[
            RATES,
            ("alpha", "common shape > 0"),
            ("scales", "n scales > 0"),
        ],
        Family::Lb1 => &[
            LAMBDAS,
            ALPHAS,
            ("delta", "interaction weight >= 0"),
            ("m", "inner power >= 1"),
        ],
        Family::Fgmw => &[LAMBDAS, ALPHAS, ("gamma", "dependence in (-1, 1)")],
        Family::Lb2 => &[LAMBDAS, ALPHAS, ("gamma", "dependence in (0, 1)")],
        Family::MarginalProduct => &[],
    }
}

/// A small valid document for each family.
pub fn example_document(family: Family) -> Result<ModelDocument> {
    let mut doc = ModelDocument::empty(family, 2);
    let rates = |pairs: &[(&str, f64)]| {
        Some(
            pairs
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect::<BTreeMap<_, _>>(),
        )
    };
    match family {
        Family::IndExp => doc.lambdas = Some(vec![1.0, 2.0]),
        Family::Mome | Family::Mg1 => doc.rates = rates(&[("1", 1.0), ("2", 1.0), ("1,2", 0.5)]),
        Family::IndWeibull => {
            doc.lambdas = Some(vec![1.0, 0.5]);
            doc.alphas = Some(vec![1.5, 0.8]);
        }
        Family::Momw => {
            doc.rates = rates(&[("1", 1.0), ("2", 1.0), ("1,2", 0.5)]);
            doc.alphas = Some(vec![1.5, 1.5]);
        }
        Family::Crowder => {
            doc.lambdas = Some(vec![1.0, 0.5]);
            doc.alphas = Some(vec![1.5, 1.2]);
            doc.l = Some(0.7);
            doc.gamma = Some(0.5);
        }
        Family::Lee => {
            doc.rates = rates(&[("1", 1.0), ("2", 1.0), ("1,2", 0.5)]);
            doc.alpha = Some(1.5);
            doc.scales = Some(vec![1.0, 2.0]);
        }
        Family::Lb1 => {
            doc.lambdas = Some(vec![1.0, 0.5]);
            doc.alphas = Some(vec![1.5, 1.2]);
            doc.delta = Some(0.5);
            doc.m = Some(2.0);
        }
        Family::Fgmw => {
            doc.lambdas = Some(vec![1.0, 1.0]);
            doc.alphas = Some(vec![1.0, 1.0]);
            doc.gamma = Some(0.5);
        }
        Family::Lb2 => {
            doc.lambdas = Some(vec![1.0, 0.5]);
            doc.alphas = Some(vec![1.5, 1.2]);
            doc.gamma = Some(0.6);
        }
        Family::MarginalProduct => {
            return Err(Error::Unsupported(
                "MarginalProduct has no document form".into(),
            ))
        }
    }
    Ok(doc)
}

fn take<'a, V>(field: &'static str, v: &'a Option<V>) -> Result<&'a V> {
    v.as_ref()
        .ok_or_else(|| Error::invalid(field, "required for this family"))
}

fn to_vec<T: Real>(xs: &[f64]) -> Vec<T> {
    xs.iter().map(|&x| T::lit(x)).collect()
}

fn check_len(field: &'static str, xs: &[f64], n: usize) -> Result<()> {
    if xs.len() != n {
        return Err(Error::invalid(
            field,
            format!("expected {n} values, got {}", xs.len()),
        ));
    }
    Ok(())
}

impl ModelDocument {
    fn empty(family: Family, n: usize) -> Self {
        ModelDocument {
            family: family.name().to_string(),
            n,
            rates: None,
            lambdas: None,
            alphas: None,
            alpha: None,
            scales: None,
            l: None,
            gamma: None,
            delta: None,
            m: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("model document: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model document serializes")
    }

    fn present_fields(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.rates.is_some() {
            out.push("rates");
        }
        if self.lambdas.is_some() {
            out.push("lambdas");
        }
        if self.alphas.is_some() {
            out.push("alphas");
        }
        if self.alpha.is_some() {
            out.push("alpha");
        }
        if self.scales.is_some() {
            out.push("scales");
        }
        if self.l.is_some() {
            out.push("l");
        }
        if self.gamma.is_some() {
            out.push("gamma");
        }
        if self.delta.is_some() {
            out.push("delta");
        }
        if self.m.is_some() {
            out.push("m");
        }
        out
    }

    fn rate_map<T: Real>(&self) -> Result<SubsetRateMap<T>> {
        let entries = take("rates", &self.rates)?
            .iter()
            .map(|(k, &v)| SubsetKey::parse(k, self.n).map(|key| (key, T::lit(v))))
            .collect::<Result<Vec<_>>>()?;
        SubsetRateMap::new(self.n, entries)
    }

    /// Parses and validates the model.
    pub fn to_model<T: Real>(&self) -> Result<ValidatedModel<T>> {
        let family: Family = self.family.parse()?;
        let allowed = schema(family);
        if let Some(extra) = self
            .present_fields()
            .into_iter()
            .find(|f| !allowed.iter().any(|(name, _)| name == f))
        {
            return Err(Error::invalid(
                extra,
                format!("not a parameter of family {family}"),
            ));
        }
        let n = self.n;
        let weibull = |field: &'static str, v: &Option<Vec<f64>>| -> Result<Vec<T>> {
            let xs = take(field, v)?;
            check_len(field, xs, n)?;
            Ok(to_vec(xs))
        };
        let model = match family {
            Family::IndExp => LifetimeModel::IndExp {
                lambdas: weibull("lambdas", &self.lambdas)?,
            },
            Family::Mome => LifetimeModel::Mome {
                rates: self.rate_map()?,
            },
            Family::Mg1 => LifetimeModel::Mg1 {
                rates: self.rate_map()?,
            },
            Family::IndWeibull => LifetimeModel::IndWeibull {
                lambdas: weibull("lambdas", &self.lambdas)?,
                shapes: WeibullShapes::new(weibull("alphas", &self.alphas)?),
            },
            Family::Momw => LifetimeModel::Momw {
                rates: self.rate_map()?,
                shapes: WeibullShapes::new(weibull("alphas", &self.alphas)?),
            },
            Family::Crowder => LifetimeModel::Crowder {
                lambdas: weibull("lambdas", &self.lambdas)?,
                shapes: WeibullShapes::new(weibull("alphas", &self.alphas)?),
                frailty: FrailtyParams {
                    l: T::lit(*take("l", &self.l)?),
                    gamma: T::lit(*take("gamma", &self.gamma)?),
                },
            },
            Family::Lee => LifetimeModel::Lee(LeeParams {
                alpha: T::lit(*take("alpha", &self.alpha)?),
                scales: weibull("scales", &self.scales)?,
                rates: self.rate_map()?,
            }),
            Family::Lb1 => LifetimeModel::Lb1(LuBhat1Params {
                lambdas: weibull("lambdas", &self.lambdas)?,
                alphas: weibull("alphas", &self.alphas)?,
                delta: T::lit(*take("delta", &self.delta)?),
                m: T::lit(*take("m", &self.m)?),
            }),
            Family::Fgmw => LifetimeModel::Fgmw(FgmParams {
                lambdas: weibull("lambdas", &self.lambdas)?,
                alphas: weibull("alphas", &self.alphas)?,
                gamma: T::lit(*take("gamma", &self.gamma)?),
            }),
            Family::Lb2 => LifetimeModel::Lb2(LuBhat2Params {
                lambdas: weibull("lambdas", &self.lambdas)?,
                alphas: weibull("alphas", &self.alphas)?,
                gamma: T::lit(*take("gamma", &self.gamma)?),
            }),
            Family::MarginalProduct => unreachable!("not parseable from a name"),
        };
        validate(model)
    }

    /// Document form of a validated model.
    pub fn from_model<T: Real>(model: &ValidatedModel<T>) -> Result<Self> {
        let f = |x: T| x.as_f64();
        let v = |xs: &[T]| xs.iter().map(|x| x.as_f64()).collect::<Vec<_>>();
        let r = |rates: &SubsetRateMap<T>| {
            Some(
                rates
                    .iter()
                    .map(|(k, x)| (k.to_string(), x.as_f64()))
                    .collect::<BTreeMap<_, _>>(),
            )
        };
        let mut doc = ModelDocument::empty(model.family(), model.n());
        match model.model() {
            LifetimeModel::IndExp { lambdas } => doc.lambdas = Some(v(lambdas)),
            LifetimeModel::Mome { rates } | LifetimeModel::Mg1 { rates } => doc.rates = r(rates),
            LifetimeModel::IndWeibull { lambdas, shapes } => {
                doc.lambdas = Some(v(lambdas));
                doc.alphas = Some(v(shapes.as_slice()));
            }
            LifetimeModel::Momw { rates, shapes } => {
                doc.rates = r(rates);
                doc.alphas = Some(v(shapes.as_slice()));
            }
            LifetimeModel::Crowder {
                lambdas,
                shapes,
                frailty,
            } => {
                doc.lambdas = Some(v(lambdas));
                doc.alphas = Some(v(shapes.as_slice()));
                doc.l = Some(f(frailty.l));
                doc.gamma = Some(f(frailty.gamma));
            }
            LifetimeModel::Lee(p) => {
                doc.rates = r(&p.rates);
                doc.alpha = Some(f(p.alpha));
                doc.scales = Some(v(&p.scales));
            }
            LifetimeModel::Lb1(p) => {
                doc.lambdas = Some(v(&p.lambdas));
                doc.alphas = Some(v(&p.alphas));
                doc.delta = Some(f(p.delta));
                doc.m = Some(f(p.m));
            }
            LifetimeModel::Fgmw(p) => {
                doc.lambdas = Some(v(&p.lambdas));
                doc.alphas = Some(v(&p.alphas));
                doc.gamma = Some(f(p.gamma));
            }
            LifetimeModel::Lb2(p) => {
                doc.lambdas = Some(v(&p.lambdas));
                doc.alphas = Some(v(&p.alphas));
                doc.gamma = Some(f(p.gamma));
            }
            LifetimeModel::MarginalProduct(_) => {
                return Err(Error::Unsupported(
                    "MarginalProduct has no document form".into(),
                ))
            }
        }
        Ok(doc)
    }
}
