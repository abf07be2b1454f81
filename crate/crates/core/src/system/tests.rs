use approx::assert_relative_eq;

use super::*;
use crate::model::{
    example_document, validate, Family, FrailtyParams, LifetimeModel, WeibullShapes,
};
use crate::subset::SubsetRateMap;

fn mome(pairs: &[(&[usize], f64)], n: usize) -> ValidatedModel<f64> {
    validate(LifetimeModel::Mome {
        rates: SubsetRateMap::from_pairs(n, pairs).unwrap(),
    })
    .unwrap()
}

fn mome111() -> ValidatedModel<f64> {
    mome(&[(&[1], 1.0), (&[2], 1.0), (&[1, 2], 1.0)], 2)
}

fn ind_exp(l: &[f64]) -> ValidatedModel<f64> {
    validate(LifetimeModel::IndExp {
        lambdas: l.to_vec(),
    })
    .unwrap()
}

fn ind_weibull(l: &[f64], a: &[f64]) -> ValidatedModel<f64> {
    validate(LifetimeModel::IndWeibull {
        lambdas: l.to_vec(),
        shapes: WeibullShapes::new(a.to_vec()),
    })
    .unwrap()
}

fn series(m: ValidatedModel<f64>) -> SystemSpec<f64> {
    SystemSpec::dependent(m, Structure::Series)
}

fn parallel(m: ValidatedModel<f64>) -> SystemSpec<f64> {
    SystemSpec::dependent(m, Structure::Parallel)
}

fn examples() -> Vec<ValidatedModel<f64>> {
    Family::ALL
        .iter()
        .map(|&f| example_document(f).unwrap().to_model().unwrap())
        .collect()
}

#[test]
fn system_sf_examples() {
    let p = parallel(ind_exp(&[1.0, 1.0]));
    assert_relative_eq!(
        system_sf(&p, 2f64.ln()).unwrap(),
        0.75,
        max_relative = 1e-14
    );
    assert_relative_eq!(
        system_sf(&series(mome111()), 1.0).unwrap(),
        (-3.0f64).exp(),
        max_relative = 1e-14
    );
    for m in examples() {
        let s = system_sf(&series(m.clone()), 1.0).unwrap();
        let p = system_sf(&parallel(m), 1.0).unwrap();
        assert!(p >= s);
    }
}

#[test]
fn system_sf_rejects_nonpositive_time() {
    let s = series(mome111());
    assert!(matches!(system_sf(&s, 0.0), Err(Error::Domain(_))));
    assert!(matches!(system_sf(&s, -1.0), Err(Error::Domain(_))));
    assert!(matches!(
        system_function(&s, ReliabilityFn::Fr, f64::NAN),
        Err(Error::Domain(_))
    ));
}

#[test]
fn system_function_examples() {
    let s = series(ind_exp(&[0.4, 2.5, 1.0]));
    for &t in &[0.01, 1.0, 7.0] {
        assert_eq!(system_function(&s, ReliabilityFn::Ai, t).unwrap(), 1.0);
        assert_relative_eq!(
            numeric_value(&s, ReliabilityFn::Ai, t).unwrap(),
            1.0,
            max_relative = 1e-9
        );
    }
    let s = series(mome111());
    assert_relative_eq!(system_function(&s, ReliabilityFn::Fr, 0.7).unwrap(), 3.0);
    assert_relative_eq!(
        numeric_value(&s, ReliabilityFn::Fr, 0.7).unwrap(),
        3.0,
        max_relative = 1e-10
    );
    let s = series(ind_weibull(&[1.0], &[2.0]));
    assert_relative_eq!(
        system_function(&s, ReliabilityFn::Ai, 1.3).unwrap(),
        2.0,
        max_relative = 1e-14
    );
    assert_relative_eq!(
        numeric_value(&s, ReliabilityFn::Ai, 1.3).unwrap(),
        2.0,
        max_relative = 1e-9
    );
}

#[test]
fn closed_form_examples() {
    let mg1 = validate(LifetimeModel::Mg1 {
        rates: SubsetRateMap::from_pairs(2, &[(&[1], 1.0), (&[2], 1.0), (&[1, 2], 0.5)]).unwrap(),
    })
    .unwrap();
    let v = closed_form_value(&series(mg1), ReliabilityFn::Sf, 2.0).unwrap();
    assert_relative_eq!(v, (-6.0f64).exp(), max_relative = 1e-14);

    let crowder = validate(LifetimeModel::Crowder {
        lambdas: vec![0.7, 1.3],
        shapes: WeibullShapes::new(vec![0.8, 2.0]),
        frailty: FrailtyParams { l: 1.0, gamma: 0.0 },
    })
    .unwrap();
    let w = series(ind_weibull(&[0.7, 1.3], &[0.8, 2.0]));
    for &t in &[0.05, 0.9, 3.0] {
        for f in [
            ReliabilityFn::Sf,
            ReliabilityFn::Fr,
            ReliabilityFn::Rfr,
            ReliabilityFn::Ai,
        ] {
            let a = closed_form_value(&series(crowder.clone()), f, t).unwrap();
            let b = closed_form_value(&w, f, t).unwrap();
            assert_relative_eq!(a, b, max_relative = 1e-14);
        }
    }

    let lee = example_document(Family::Lee)
        .unwrap()
        .to_model::<f64>()
        .unwrap();
    for &t in &[0.1, 2.0] {
        assert_eq!(
            closed_form_value(&series(lee.clone()), ReliabilityFn::Ai, t),
            Some(1.5)
        );
    }
}

#[test]
fn registry_coverage() {
    let lb2 = example_document(Family::Lb2)
        .unwrap()
        .to_model::<f64>()
        .unwrap();
    assert_eq!(
        closed_form_value(&series(lb2), ReliabilityFn::Sf, 1.0),
        None
    );
    let s = series(mome111());
    assert_eq!(closed_form_value(&s, ReliabilityFn::Mrl, 1.0), None);
    assert_eq!(
        closed_form_value(&parallel(mome111()), ReliabilityFn::Fr, 1.0),
        None
    );
    assert!(closed_form_value(&parallel(mome111()), ReliabilityFn::Sf, 1.0).is_some());
    let lee = example_document(Family::Lee)
        .unwrap()
        .to_model::<f64>()
        .unwrap();
    assert_eq!(
        closed_form_value(&parallel(lee), ReliabilityFn::Sf, 1.0),
        None
    );
}

#[test]
fn closed_forms_agree_with_numeric_engine() {
    let grid = EvalGrid::<f64>::log(0.02, 8.0, 25).unwrap();
    for m in examples() {
        for spec in [series(m.clone()), parallel(m.clone())] {
            for f in ReliabilityFn::ALL {
                for &t in grid.points() {
                    if let Some(c) = closed_form_value(&spec, f, t) {
                        let n = numeric_value(&spec, f, t).unwrap();
                        assert_relative_eq!(c, n, max_relative = 1e-8);
                    }
                }
            }
        }
    }
}

#[test]
fn momw_mixed_shapes_use_the_smaller_power_below_one() {
    let rates = SubsetRateMap::from_pairs(2, &[(&[1], 1.0), (&[2], 1.0), (&[1, 2], 0.5)]).unwrap();
    let m = validate(LifetimeModel::Momw {
        rates,
        shapes: WeibullShapes::new(vec![2.0, 0.5]),
    })
    .unwrap();
    let s = series(m);
    for &t in &[0.2, 0.7, 1.5, 4.0] {
        let exact = system_sf(&s, t).unwrap();
        let joint = s.model().joint_sf(&[t, t]).unwrap();
        assert_relative_eq!(exact, joint, max_relative = 1e-14);
        let literal = (-(t * t + t.sqrt() + 0.5 * t.powf(2.0))).exp();
        if t < 1.0 {
            assert!((literal - exact).abs() > 1e-3 * exact);
        } else {
            assert_relative_eq!(literal, exact, max_relative = 1e-14);
        }
    }
}

#[test]
fn inclusion_exclusion_matches_product_for_independent_models() {
    let cases = [
        ind_exp(&[0.5, 1.0, 2.0]),
        ind_weibull(&[0.5, 1.0, 2.0, 0.3], &[0.6, 1.0, 2.5, 1.2]),
    ];
    for m in cases {
        let p = parallel(m.clone());
        for &t in &[0.01, 0.3, 1.0, 4.0] {
            let cf = closed_form_value(&p, ReliabilityFn::Sf, t).unwrap();
            let prod = 1.0
                - (1..=m.n())
                    .map(|i| 1.0 - m.marginal_sf(i, t).unwrap())
                    .product::<f64>();
            assert!((cf - prod).abs() <= 1e-10 * prod.max(1e-300));
        }
    }
    // The same law written as a shock model goes through generic inclusion-exclusion.
    let shock = mome(&[(&[1], 0.5), (&[2], 1.0), (&[3], 2.0)], 3);
    for &t in &[0.01, 0.3, 1.0, 4.0] {
        let ie = ln_probs_parallel(&shock, t).unwrap().ln_sf.exp();
        let prod = 1.0 - (1.0 - (-0.5 * t).exp()) * (1.0 - (-t).exp()) * (1.0 - (-2.0 * t).exp());
        assert!((ie - prod).abs() <= 1e-10 * prod);
    }
}

#[test]
fn parallel_density_oracle_matches_numeric_density() {
    let models = [
        ind_exp(&[0.5, 1.5]),
        mome(
            &[
                (&[1], 0.5),
                (&[2], 1.0),
                (&[3], 0.7),
                (&[1, 2], 0.4),
                (&[1, 2, 3], 0.2),
            ],
            3,
        ),
        example_document(Family::Mg1).unwrap().to_model().unwrap(),
        ind_weibull(&[0.5, 1.5, 1.0], &[0.7, 1.4, 2.2]),
    ];
    for m in models {
        let p = parallel(m);
        for &t in &[0.05, 0.5, 2.0, 6.0] {
            let f = parallel_density_closed_form(&p, t).unwrap();
            let fr = numeric_value(&p, ReliabilityFn::Fr, t).unwrap();
            let sf = system_sf(&p, t).unwrap();
            assert_relative_eq!(fr * sf, f, max_relative = 1e-8);
        }
    }
}

#[test]
fn fgmw_parallel_matches_cdf_complement() {
    for n in [2usize, 3] {
        for &g in &[-0.8, 0.4, 0.9] {
            let m = validate(LifetimeModel::Fgmw(crate::model::FgmParams {
                lambdas: (0..n).map(|i| 0.5 + 0.4 * i as f64).collect(),
                alphas: (0..n).map(|i| 0.8 + 0.5 * i as f64).collect(),
                gamma: g,
            }))
            .unwrap();
            let p = parallel(m.clone());
            for &t in &[0.1, 0.8, 2.5] {
                let brute = 1.0 - m.joint_cdf(&vec![t; n]).unwrap();
                let cf = closed_form_value(&p, ReliabilityFn::Sf, t).unwrap();
                assert_relative_eq!(cf, brute, max_relative = 1e-12);
            }
        }
    }
}

#[test]
fn mean_residual_life_oracles() {
    let s = series(ind_exp(&[0.5, 1.5]));
    for &t in &[0.01, 1.0, 9.0] {
        assert_relative_eq!(
            system_function(&s, ReliabilityFn::Mrl, t).unwrap(),
            0.5,
            max_relative = 1e-9
        );
    }
    let p = parallel(ind_exp(&[1.0, 1.0]));
    for &t in &[0.01f64, 1.0, 9.0] {
        let (e1, e2) = ((-t).exp(), (-2.0 * t).exp());
        let expected = (2.0 * e1 - 0.5 * e2) / (2.0 * e1 - e2);
        assert_relative_eq!(
            system_function(&p, ReliabilityFn::Mrl, t).unwrap(),
            expected,
            max_relative = 1e-9
        );
    }
    let w = series(ind_weibull(&[1.0], &[2.0]));
    for &t in &[0.1, 1.0, 3.0] {
        let expected =
            std::f64::consts::PI.sqrt() / 2.0 * statrs::function::erf::erfc(t) * (t * t).exp();
        assert_relative_eq!(
            system_function(&w, ReliabilityFn::Mrl, t).unwrap(),
            expected,
            max_relative = 1e-8
        );
    }
}

#[test]
fn hazard_integrates_back_to_log_survival() {
    let mut models = examples();
    // LB1 with m > 1 and δ > 0 has no parallel lifetime law; m = 1 is proper.
    models.push(lb1(1.0));
    for m in models {
        let improper = matches!(m.model(), LifetimeModel::Lb1(p) if p.m > 1.0 && p.delta > 0.0);
        for spec in [series(m.clone()), parallel(m.clone())] {
            if improper && spec.structure() == Structure::Parallel {
                continue;
            }
            for &t in &[0.01, 0.5, 3.0] {
                let h = -system_ln_probs(&spec, t).unwrap().ln_sf;
                let integrated = cumulative_hazard_numeric(&spec, t).unwrap();
                assert!(
                    (integrated - h).abs() <= 1e-6 * h,
                    "{} {:?} t={t}: {integrated} vs {h}",
                    m.family(),
                    spec.structure()
                );
            }
        }
    }
}

fn lb1(m: f64) -> ValidatedModel<f64> {
    let mut d = example_document(Family::Lb1).unwrap();
    d.m = Some(m);
    d.to_model().unwrap()
}

#[test]
fn improper_lb1_parallel_is_degenerate_near_origin() {
    let s = parallel(lb1(2.0));
    for t in [0.01, 0.1, 0.3] {
        assert!(
            matches!(system_ln_probs(&s, t), Err(Error::Degenerate { .. })),
            "t={t}"
        );
    }
    assert!(system_ln_probs(&s, 1.0).is_ok());
    assert!(system_ln_probs(&parallel(lb1(1.0)), 0.01).is_ok());
}

#[test]
fn aging_classes() {
    let mg1 = example_document(Family::Mg1)
        .unwrap()
        .to_model::<f64>()
        .unwrap();
    let grid = EvalGrid::default_grid();
    assert_eq!(
        classify_aging(&series(mg1), &grid).unwrap(),
        AgingClass::Ifra
    );
    let w = ind_weibull(&[1.0, 2.0], &[0.5, 0.5]);
    assert_eq!(classify_aging(&series(w), &grid).unwrap(), AgingClass::Dfra);
    assert_eq!(
        classify_aging(&series(ind_exp(&[1.0, 3.0])), &grid).unwrap(),
        AgingClass::IfraAndDfra
    );
    let mixed = ind_weibull(&[1.0, 1.0], &[0.5, 3.0]);
    assert!(matches!(
        classify_aging(&series(mixed), &grid).unwrap(),
        AgingClass::Indeterminate { .. }
    ));
}

#[test]
fn numeric_ai_refuses_tiny_times() {
    let s = parallel(mome111());
    assert!(matches!(
        numeric_value(&s, ReliabilityFn::Ai, 1e-12),
        Err(Error::Degenerate { .. })
    ));
}

#[test]
fn parallel_enumeration_limit() {
    let rates = SubsetRateMap::from_pairs(
        21,
        &(1..=21)
            .map(|i| (vec![i], 1.0))
            .collect::<Vec<_>>()
            .iter()
            .map(|(k, r)| (k.as_slice(), *r))
            .collect::<Vec<_>>(),
    )
    .unwrap();
    let m = validate(LifetimeModel::Mome { rates }).unwrap();
    assert!(matches!(
        system_sf(&parallel(m), 1.0),
        Err(Error::SizeLimit { .. })
    ));
}

#[test]
fn grid_parsing() {
    let g: EvalGrid<f64> = "0.01:10:200:log".parse().unwrap();
    assert_eq!(g.len(), 200);
    assert_eq!(g.points()[0], 0.01);
    assert_eq!(g.points()[199], 10.0);
    let l: EvalGrid<f64> = "1:3:3:linear".parse().unwrap();
    assert_eq!(l.points(), &[1.0, 2.0, 3.0]);
    for bad in [
        "0:1:10:log",
        "1:1:10:log",
        "1:2:1:log",
        "1:2:10:cubic",
        "1:2:10",
    ] {
        assert!(bad.parse::<EvalGrid<f64>>().is_err(), "{bad}");
    }
    assert!(EvalGrid::new(vec![1.0, 1.0]).is_err());
}

#[test]
fn curve_set_serialization() {
    let grid = EvalGrid::log(0.1, 5.0, 10).unwrap();
    let c = evaluate_curves(&series(mome111()), &grid, true).unwrap();
    assert_eq!(c.provenance_code(), "CCCNC");
    let csv = c.to_csv();
    assert!(csv.starts_with("t,sf,fr,rfr,mrl,ai,provenance\n"));
    assert_eq!(csv.lines().count(), 11);
    let json = c.to_json();
    assert_eq!(json.as_array().unwrap().len(), 10);
    assert_eq!(json[0]["provenance"], "CCCNC");
    let v = c.verification.unwrap();
    assert!(v[0].unwrap() < 1e-8 && v[3].is_none());

    let lb2 = example_document(Family::Lb2)
        .unwrap()
        .to_model::<f64>()
        .unwrap();
    let c = evaluate_curves(&parallel(lb2), &grid, false).unwrap();
    assert_eq!(c.provenance_code(), "NNNNN");
    assert!(c.verification.is_none());
}

#[test]
fn undefined_points_become_empty_cells() {
    // Survival underflows in f32 well inside the grid.
    let m: ValidatedModel<f32> = ind_exp(&[30.0, 30.0]).cast();
    let s = SystemSpec::dependent(m, Structure::Series);
    let grid = EvalGrid::<f32>::linear(0.5, 3.0, 6).unwrap();
    let c = evaluate_curves(&s, &grid, false).unwrap();
    assert!(c.get(ReliabilityFn::Rfr).iter().all(|v| v.is_some()));
    let json = c.to_json();
    assert!(json
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["sf"].is_number() || r["sf"].is_null()));
}

#[test]
fn f32_tracks_f64() {
    for m in examples() {
        let s64 = series(m.clone());
        let s32 = SystemSpec::dependent(m.cast::<f32>(), Structure::Series);
        for f in [ReliabilityFn::Sf, ReliabilityFn::Fr, ReliabilityFn::Ai] {
            let a = system_function(&s64, f, 1.3).unwrap();
            let b = system_function(&s32, f, 1.3f32).unwrap() as f64;
            assert_relative_eq!(a, b, max_relative = 1e-3);
        }
    }
}
