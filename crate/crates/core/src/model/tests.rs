use approx::assert_relative_eq;

use super::*;
use crate::subset::SubsetRateMap;

fn mome(pairs: &[(&[usize], f64)], n: usize) -> ValidatedModel<f64> {
    validate(LifetimeModel::Mome {
        rates: SubsetRateMap::from_pairs(n, pairs).unwrap(),
    })
    .unwrap()
}

fn fgmw(gamma: f64) -> ValidatedModel<f64> {
    validate(LifetimeModel::Fgmw(FgmParams {
        lambdas: vec![1.0, 1.0],
        alphas: vec![1.0, 1.0],
        gamma,
    }))
    .unwrap()
}

#[test]
fn validation_examples() {
    mome(&[(&[1], 1.0), (&[2], 1.0), (&[1, 2], 0.5)], 2);
    let neg = SubsetRateMap::from_pairs(2, &[(&[1, 2], -0.5)]);
    assert!(matches!(neg, Err(Error::InvalidParameter { .. })));
    let err = validate(LifetimeModel::Fgmw(FgmParams {
        lambdas: vec![1.0, 1.0],
        alphas: vec![1.0, 1.0],
        gamma: 1.0,
    }))
    .unwrap_err();
    assert!(matches!(err, Error::InvalidParameter { ref field, .. } if field == "gamma"));
}

#[test]
fn rejects_uncovered_component() {
    let rates = SubsetRateMap::from_pairs(3, &[(&[1, 2], 1.0)]).unwrap();
    assert!(validate(LifetimeModel::Mome { rates }).is_err());
}

#[test]
fn joint_sf_examples() {
    let ind = validate(LifetimeModel::IndExp {
        lambdas: vec![1.0, 2.0],
    })
    .unwrap();
    assert_eq!(ind.joint_sf(&[0.0, 0.0]).unwrap(), 1.0);
    let m = mome(&[(&[1], 1.0), (&[2], 1.0), (&[1, 2], 1.0)], 2);
    assert_relative_eq!(
        m.joint_sf(&[1.0, 1.0]).unwrap(),
        (-3.0f64).exp(),
        max_relative = 1e-15
    );
    let expected = (-2.0f64).exp() * (1.0 + 0.5 * (1.0 - (-1.0f64).exp()).powi(2));
    assert_relative_eq!(
        fgmw(0.5).joint_sf(&[1.0, 1.0]).unwrap(),
        expected,
        max_relative = 1e-14
    );
    assert_relative_eq!(expected, 0.1623737, epsilon = 1e-7);
}

#[test]
fn joint_sf_rejects_bad_points() {
    let m = fgmw(0.5);
    assert!(matches!(m.joint_sf(&[-1.0, 0.0]), Err(Error::Domain(_))));
    assert!(matches!(
        m.joint_sf(&[f64::NAN, 0.0]),
        Err(Error::Domain(_))
    ));
    assert!(matches!(m.joint_sf(&[1.0]), Err(Error::Domain(_))));
}

#[test]
fn marginal_examples() {
    let ind = validate(LifetimeModel::IndExp {
        lambdas: vec![1.0, 2.0],
    })
    .unwrap();
    assert_relative_eq!(ind.marginal_sf(2, 1.0).unwrap(), (-2.0f64).exp());
    let m = mome(&[(&[1], 1.0), (&[2], 1.0), (&[1, 2], 1.0)], 2);
    assert_relative_eq!(m.marginal_sf(1, 1.0).unwrap(), (-2.0f64).exp());
    assert_eq!(fgmw(-0.3).marginal_sf(2, 0.0).unwrap(), 1.0);
    assert!(m.marginal_sf(3, 1.0).is_err());
    assert!(m.marginal_sf(0, 1.0).is_err());
    assert!(m.marginal_sf(1, -1.0).is_err());
}

#[test]
fn counterpart_examples() {
    let m = mome(&[(&[1], 1.0), (&[2], 1.0), (&[1, 2], 1.0)], 2);
    let lit = m.independent_counterpart(Baseline::PaperLiteral).unwrap();
    assert_eq!(
        lit.model(),
        &LifetimeModel::IndExp {
            lambdas: vec![1.0, 1.0]
        }
    );
    let tru = m.independent_counterpart(Baseline::TrueMarginal).unwrap();
    assert_eq!(
        tru.model(),
        &LifetimeModel::IndExp {
            lambdas: vec![2.0, 2.0]
        }
    );
    let w = validate(LifetimeModel::IndWeibull {
        lambdas: vec![1.0, 2.0],
        shapes: WeibullShapes::new(vec![0.5, 3.0]),
    })
    .unwrap();
    assert_eq!(
        w.independent_counterpart(Baseline::PaperLiteral).unwrap(),
        w
    );
    assert_eq!(
        w.independent_counterpart(Baseline::TrueMarginal).unwrap(),
        w
    );
}

#[test]
fn true_marginal_counterparts_match_marginals() {
    let models = [
        example_document(Family::Crowder)
            .unwrap()
            .to_model::<f64>()
            .unwrap(),
        example_document(Family::Lee).unwrap().to_model().unwrap(),
        example_document(Family::Lb1).unwrap().to_model().unwrap(),
        example_document(Family::Lb2).unwrap().to_model().unwrap(),
        example_document(Family::Momw).unwrap().to_model().unwrap(),
        example_document(Family::Fgmw).unwrap().to_model().unwrap(),
    ];
    for m in &models {
        let c = m.independent_counterpart(Baseline::TrueMarginal).unwrap();
        assert!(c.family().is_independent());
        for i in 1..=m.n() {
            for &t in &[0.1, 0.7, 2.5] {
                assert_relative_eq!(
                    c.marginal_sf(i, t).unwrap(),
                    m.marginal_sf(i, t).unwrap(),
                    max_relative = 1e-12
                );
            }
        }
    }
}

#[test]
fn paper_literal_requires_singletons() {
    let m = mome(&[(&[1], 1.0), (&[1, 2], 1.0)], 2);
    assert!(m.independent_counterpart(Baseline::PaperLiteral).is_err());
    assert!(m.independent_counterpart(Baseline::TrueMarginal).is_ok());
}

#[test]
fn joint_cdf_matches_bivariate_identity() {
    // F(t1, t2) = 1 - S1 - S2 + S(t1, t2)
    for m in [
        fgmw(0.7),
        mome(&[(&[1], 0.3), (&[2], 1.2), (&[1, 2], 0.8)], 2),
        example_document(Family::Lb2).unwrap().to_model().unwrap(),
    ] {
        for &(a, b) in &[(0.3, 0.9), (1.5, 0.2), (2.0, 2.0)] {
            let direct = 1.0 - m.marginal_sf(1, a).unwrap() - m.marginal_sf(2, b).unwrap()
                + m.joint_sf(&[a, b]).unwrap();
            assert_relative_eq!(m.joint_cdf(&[a, b]).unwrap(), direct, max_relative = 1e-12);
        }
    }
}

#[test]
fn lb2_reduces_to_bivariate_form() {
    let m = example_document(Family::Lb2)
        .unwrap()
        .to_model::<f64>()
        .unwrap();
    let (l, a, g) = ([1.0, 0.5], [1.5, 1.2], 0.6);
    let (x1, x2) = (0.8, 1.7);
    let u = |i: usize, x: f64| ((l[i] * f64::powf(x, a[i])).exp() - 1.0).powf(1.0 / g);
    let expected = 1.0 / (1.0 + (u(0, x1) + u(1, x2)).powf(g));
    assert_relative_eq!(
        m.joint_sf(&[x1, x2]).unwrap(),
        expected,
        max_relative = 1e-13
    );
}

#[test]
fn log_space_survives_underflow() {
    let m = mome(&[(&[1], 1.0), (&[2], 1.0), (&[1, 2], 1.0)], 2);
    let l = m.ln_joint_sf(&[500.0, 500.0]).unwrap();
    assert_relative_eq!(l, -1500.0);
    assert_eq!(m.joint_sf(&[500.0, 500.0]).unwrap(), 0.0);
}

#[test]
fn document_round_trip() {
    for f in Family::ALL {
        let doc = example_document(f).unwrap();
        let model = doc.to_model::<f64>().unwrap();
        let back = ModelDocument::from_model(&model).unwrap();
        let again = ModelDocument::from_json(&back.to_json()).unwrap();
        assert_eq!(again.to_model::<f64>().unwrap(), model);
    }
}

#[test]
fn document_rejects_foreign_and_unknown_fields() {
    let bad = r#"{"family": "MOME", "n": 2, "rates": {"1": 1.0}, "alpha": 2.0}"#;
    let err = ModelDocument::from_json(bad)
        .unwrap()
        .to_model::<f64>()
        .unwrap_err();
    assert!(matches!(err, Error::InvalidParameter { ref field, .. } if field == "alpha"));
    let unknown = r#"{"family": "MOME", "n": 2, "rates": {"1": 1.0}, "beta": 2.0}"#;
    assert!(ModelDocument::from_json(unknown).is_err());
    let missing = r#"{"family": "IndWeibull", "n": 2, "lambdas": [1.0, 1.0]}"#;
    assert!(ModelDocument::from_json(missing)
        .unwrap()
        .to_model::<f64>()
        .is_err());
    let family = r#"{"family": "Gumbel", "n": 2}"#;
    assert!(ModelDocument::from_json(family)
        .unwrap()
        .to_model::<f64>()
        .is_err());
}

#[test]
fn f32_evaluation_tracks_f64() {
    for f in Family::ALL {
        let m64 = example_document(f).unwrap().to_model::<f64>().unwrap();
        let m32: ValidatedModel<f32> = m64.cast();
        let a = m64.joint_sf(&[0.4, 0.9]).unwrap();
        let b = m32.joint_sf(&[0.4, 0.9]).unwrap() as f64;
        assert_relative_eq!(a, b, max_relative = 1e-5);
    }
}
