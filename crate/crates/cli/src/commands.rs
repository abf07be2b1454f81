use std::fs;
use std::path::Path;

use relidep::error_analysis::{assess_signs, relative_error_curve};
use relidep::model::{example_document, schema};
use relidep::orders::{
    check_series_parallel_sign, classify_orthant_dependence, compare_orders, default_sample_points,
};
use relidep::simulate::{mc_validate, McConfig};
use relidep::system::evaluate_curves;
use relidep::{audit_implications, Assumption, Error, Family, Model, ModelDocument, Spec};
use serde_json::{json, Value};

use crate::{Cli, Command, Format, ModelArgs, Side};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_DEGENERATE: u8 = 3;
pub const EXIT_UNSUPPORTED: u8 = 4;

/// Fraction of undefined grid points above which a run exits with
/// [`EXIT_DEGENERATE`].
const DEGENERATE_LIMIT: f64 = 0.1;

enum Failure {
    Lib(Error),
    Io(String),
    Degenerate(f64),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

pub fn report_failure(kind: &str, message: &str) {
    eprintln!(
        "{}",
        json!({ "error": kind, "message": message.trim_end() })
    );
}

pub fn run(cli: &Cli) -> u8 {
    if let Some(k) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
        {
            report_failure("usage", &e.to_string());
            return EXIT_VALIDATION;
        }
    }
    match dispatch(cli) {
        Ok(()) => EXIT_OK,
        Err(Failure::Io(m)) => {
            report_failure("io", &m);
            EXIT_VALIDATION
        }
        Err(Failure::Degenerate(frac)) => {
            report_failure(
                "degenerate",
                &format!(
                    "{:.1}% of the grid is undefined (limit {:.0}%)",
                    100.0 * frac,
                    100.0 * DEGENERATE_LIMIT
                ),
            );
            EXIT_DEGENERATE
        }
        Err(Failure::Lib(e)) => {
            report_failure(e.kind(), &e.to_string());
            match e {
                Error::Unsupported(_) => EXIT_UNSUPPORTED,
                Error::Degenerate { .. } | Error::IntegrationFailure { .. } => EXIT_DEGENERATE,
                _ => EXIT_VALIDATION,
            }
        }
    }
}

fn load(path: &Path) -> Result<Model, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(ModelDocument::from_json(&text)?.to_model()?)
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    write_to(cli.out.as_deref(), text)
}

fn write_to(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON value serializes");
    s.push('\n');
    s
}

fn spec(model: &Model, args: &ModelArgs, side: Side) -> Result<Spec, Failure> {
    let assumption = match side {
        Side::Dependent => Assumption::Dependent,
        Side::Independent => Assumption::Independent(args.baseline),
    };
    Ok(Spec::new(model.clone(), args.structure, assumption)?)
}

fn check_degeneracy(frac: f64) -> Result<(), Failure> {
    if frac > DEGENERATE_LIMIT {
        Err(Failure::Degenerate(frac))
    } else {
        Ok(())
    }
}

fn dispatch(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Eval {
            model,
            assumption,
            verify,
        } => {
            let m = load(&model.model)?;
            let curves = evaluate_curves(&spec(&m, model, *assumption)?, &model.grid, *verify)?;
            match cli.format {
                Format::Csv => emit(cli, &curves.to_csv())?,
                Format::Json => emit(
                    cli,
                    &pretty(&json!({
                        "family": m.family().name(),
                        "structure": model.structure.name(),
                        "provenance": curves.provenance_code(),
                        "verification": curves.verification,
                        "points": curves.to_json(),
                    })),
                )?,
            }
            check_degeneracy(curves.degenerate_fraction())
        }
        Command::Error { model, report } => {
            let m = load(&model.model)?;
            let curve = relative_error_curve(&m, model.structure, model.baseline, &model.grid)?;
            let assessment = assess_signs(&curve);
            match cli.format {
                Format::Csv => {
                    emit(cli, &curve.to_csv())?;
                    if let Some(p) = report {
                        write_to(Some(p), &pretty(&assessment.to_json()))?;
                    }
                }
                Format::Json => emit(
                    cli,
                    &pretty(&json!({
                        "family": m.family().name(),
                        "structure": model.structure.name(),
                        "baseline": model.baseline.name(),
                        "usable_range": curve.usable_range(),
                        "curve": curve.to_json(),
                        "assessment": assessment.to_json(),
                    })),
                )?,
            }
            let defined = curve.usable_range().map_or(0, |(lo, hi)| {
                model
                    .grid
                    .points()
                    .iter()
                    .filter(|&&t| t >= lo && t <= hi)
                    .count()
            });
            check_degeneracy(1.0 - defined as f64 / model.grid.len() as f64)
        }
        Command::Order {
            model,
            a,
            b,
            relations,
        } => {
            let m = load(&model.model)?;
            let (sa, sb) = (spec(&m, model, *a)?, spec(&m, model, *b)?);
            let verdicts = compare_orders(&sa, &sb, relations, &model.grid)?;
            let audit = audit_implications(&verdicts);
            match cli.format {
                Format::Csv => {
                    let mut w = String::from("relation,direction,witnesses,skipped\n");
                    for v in &verdicts {
                        let ws: Vec<String> = v.witnesses.iter().map(f64::to_string).collect();
                        let direction =
                            serde_json::to_value(v.direction).expect("direction serializes");
                        w.push_str(&format!(
                            "{},{},{},{}\n",
                            v.relation,
                            direction.as_str().unwrap_or_default(),
                            ws.join(";"),
                            v.skipped.len()
                        ));
                    }
                    w.push_str(&format!(
                        "audit,{},,\n",
                        if audit.consistent {
                            "consistent"
                        } else {
                            "violated"
                        }
                    ));
                    emit(cli, &w)?;
                }
                Format::Json => emit(
                    cli,
                    &pretty(&json!({ "verdicts": verdicts, "audit": audit })),
                )?,
            }
            let worst = verdicts
                .iter()
                .map(|v| v.skipped.len() as f64 / model.grid.len() as f64)
                .fold(0.0, f64::max);
            check_degeneracy(worst)
        }
        Command::Depend {
            model,
            samples,
            seed,
        } => {
            let m = load(&model.model)?;
            let (points, corner) = default_sample_points(&m, *samples, *seed)?;
            let mut report = classify_orthant_dependence(&m, &points)?;
            report.sampling_box = Some(corner);
            let link = if m.n() == 2 {
                Some(check_series_parallel_sign(&m, &model.grid)?)
            } else {
                None
            };
            match cli.format {
                Format::Csv => {
                    let ce = report
                        .counterexample
                        .as_ref()
                        .map(|p| p.iter().map(f64::to_string).collect::<Vec<_>>().join(";"))
                        .unwrap_or_default();
                    let name = |l| serde_json::to_value(l).expect("label serializes");
                    emit(
                        cli,
                        &format!(
                            "label,upper,lower,counterexample,sign_link\n{},{},{},{},{}\n",
                            name(report.label).as_str().unwrap_or_default(),
                            name(report.upper.label).as_str().unwrap_or_default(),
                            name(report.lower.label).as_str().unwrap_or_default(),
                            ce,
                            link.as_ref()
                                .map_or("", |l| if l.passed { "pass" } else { "fail" })
                        ),
                    )?
                }
                Format::Json => emit(
                    cli,
                    &pretty(&json!({ "dependence": report, "sign_link": link })),
                )?,
            }
            Ok(())
        }
        Command::Simulate {
            model,
            samples,
            seed,
            level,
            report,
        } => {
            let m = load(&model.model)?;
            let config = McConfig {
                n_samples: *samples,
                level: *level,
                seed: *seed,
                fault_offset: 0.0,
            };
            let (curve, coverage) = mc_validate(&m, model.structure, &model.grid, &config)?;
            match cli.format {
                Format::Csv => {
                    emit(cli, &curve.to_csv())?;
                    if let Some(p) = report {
                        write_to(Some(p), &pretty(&coverage.to_json()))?;
                    }
                }
                Format::Json => emit(
                    cli,
                    &pretty(&json!({ "curve": curve.to_json(), "validation": coverage })),
                )?,
            }
            Ok(())
        }
        Command::Families { example } => {
            match example {
                Some(f) => emit(cli, &format!("{}\n", example_document(*f)?.to_json()))?,
                None => {
                    let list: Vec<Value> = Family::ALL
                        .iter()
                        .map(|&f| {
                            let fields: serde_json::Map<String, Value> = schema(f)
                                .iter()
                                .map(|(k, d)| (k.to_string(), json!(d)))
                                .collect();
                            json!({ "family": f.name(), "parameters": fields })
                        })
                        .collect();
                    match cli.format {
                        Format::Json => emit(cli, &pretty(&Value::Array(list)))?,
                        Format::Csv => {
                            let mut s = String::from("family,parameters\n");
                            for f in Family::ALL {
                                let names: Vec<&str> = schema(f).iter().map(|(k, _)| *k).collect();
                                s.push_str(&format!("{},{}\n", f.name(), names.join(";")));
                            }
                            emit(cli, &s)?
                        }
                    }
                }
            }
            Ok(())
        }
    }
}
