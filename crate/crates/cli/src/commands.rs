use crate::error::CliError;
use crate::io::{self, CurveRecord};
use crate::manifest::{self, FitSummary, ManifestBuilder};
use crate::{AugmentArgs, ClassifierArg, EvalArgs, FitArgs, ManifestArg, ProjectArgs, SynthArgs};
use fagc::eval::{
    evaluate, mean_and_stderr, Classifier, EvalConfig, LossConfig, SynthSpec, SynthTask,
    TrainConfig, LAMBDA_GRID,
};
use fagc::{
    category_seed, fit_curve, project as project_feature, sample_curve, FitConfig, LabeledDataset,
    PreShape, Provenance, K_GRID,
};
use rayon::prelude::*;
use serde_json::json;
use std::path::{Path, PathBuf};

/// Tolerance for the `augment --verify` on-curve check.
const ON_CURVE_TOL: f64 = 1e-9;

/// Relative output paths land under `$FAGC_OUTPUT_DIR` when set.
fn out_path(p: &Path) -> PathBuf {
    match std::env::var_os("FAGC_OUTPUT_DIR") {
        Some(dir) if p.is_relative() => PathBuf::from(dir).join(p),
        _ => p.to_path_buf(),
    }
}

fn manifest_path(arg: &ManifestArg, output: &Path) -> PathBuf {
    arg.manifest
        .as_deref()
        .map(out_path)
        .unwrap_or_else(|| manifest::default_path(output))
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Io(e.into()))
}

pub fn project(args: ProjectArgs) -> Result<(), CliError> {
    let output = out_path(&args.output);
    let rows = io::read_features(&args.input)?;
    let mut projected = Vec::with_capacity(rows.len());
    for (i, (label, values)) in rows.into_iter().enumerate() {
        let row = i + 1;
        let raw = io::raw_feature(&args.input, row, values)?;
        let z = project_feature(&raw).map_err(|e| {
            CliError::domain(format!(
                "{}: row {row} ({label}): {e}",
                args.input.display()
            ))
        })?;
        let (mx, my) = z.planar_means();
        println!(
            "row {row} {label}: ok dim {} -> {}, norm {:.3e} off, means ({mx:.1e}, {my:.1e})",
            raw.dim(),
            z.dim(),
            (z.norm() - 1.0).abs()
        );
        projected.push((label, z));
    }
    let dim = projected.first().map_or(0, |(_, z)| z.dim());
    io::write_preshapes(
        &output,
        projected
            .iter()
            .map(|(l, z)| (l.as_str(), z, Provenance::Real)),
        dim,
    )?;
    println!("projected {} rows to {}", projected.len(), output.display());

    let mut m = ManifestBuilder::new("project", json!({}));
    m.input(&args.input);
    m.output(&output);
    m.write(&manifest_path(&args.manifest, &output))?;
    Ok(())
}

pub fn fit(args: FitArgs) -> Result<(), CliError> {
    let output = out_path(&args.output);
    let config = FitConfig {
        num_candidates: args.fit.candidates,
        tol: args.fit.tol,
        max_iters: args.fit.max_iters,
        pair_seed: !args.fit.no_pair_seed,
    };
    config.validate()?;
    let data = io::read_preshapes(&args.input)?;
    if data.is_empty() {
        return Err(CliError::input(format!(
            "{}: no rows",
            args.input.display()
        )));
    }

    let fits: Vec<_> = pool(args.jobs)?.install(|| {
        data.categories()
            .par_iter()
            .map(|c| (c.label.as_str(), fit_curve(&c.real(), &config)))
            .collect()
    });
    let mut records = Vec::with_capacity(fits.len());
    let mut reports = Vec::with_capacity(fits.len());
    for (label, result) in fits {
        let (curve, report) =
            result.map_err(|e| CliError::domain(format!("label {label:?}: {e}")))?;
        println!(
            "{label}: theta {:.6} residual {:.6e} iterations {} converged {}",
            curve.theta(),
            report.best_residual,
            report.iterations,
            report.converged
        );
        records.push(CurveRecord {
            label: label.to_string(),
            curve,
            residual: report.best_residual,
        });
        reports.push(FitSummary::new(label, &report));
    }
    io::write_curves(&output, &records)?;

    let mut m = ManifestBuilder::new(
        "fit",
        json!({
            "candidates": config.num_candidates,
            "tol": config.tol,
            "max_iters": config.max_iters,
            "pair_seed": config.pair_seed,
            "jobs": args.jobs,
        }),
    );
    m.input(&args.input);
    m.output(&output);
    reports.into_iter().for_each(|r| m.fit_report(r));
    m.write(&manifest_path(&args.manifest, &output))?;
    Ok(())
}

fn sample_all(curves: &[CurveRecord], k: usize, seed: u64) -> Vec<(String, Vec<PreShape>)> {
    curves
        .par_iter()
        .map(|r| {
            (
                r.label.clone(),
                sample_curve(&r.curve, k, category_seed(seed, &r.label)),
            )
        })
        .collect()
}

fn as_dataset(samples: &[(String, Vec<PreShape>)]) -> Result<LabeledDataset, CliError> {
    let mut ds = LabeledDataset::new();
    for (label, shapes) in samples {
        for s in shapes {
            ds.push(label, s.clone(), Provenance::Augmented)?;
        }
    }
    Ok(ds)
}

pub fn augment(args: AugmentArgs) -> Result<(), CliError> {
    let output = out_path(&args.output);
    if args.k == 0 {
        return Err(CliError::input("--k must be at least 1"));
    }
    let curves = io::read_curves(&args.curves)?;
    let samples = pool(args.jobs)?.install(|| sample_all(&curves, args.k, args.seed));
    let dim = curves[0].curve.dim();
    io::write_preshapes(
        &output,
        samples.iter().flat_map(|(l, s)| {
            s.iter()
                .map(move |z| (l.as_str(), z, Provenance::Augmented))
        }),
        dim,
    )?;
    println!(
        "wrote {} rows ({} labels x {}) to {}",
        curves.len() * args.k,
        curves.len(),
        args.k,
        output.display()
    );

    if args.verify {
        let written = io::read_preshapes(&output)?;
        let mut worst = 0.0f64;
        for (label, m) in written.iter() {
            let record = curves
                .iter()
                .find(|r| r.label == label)
                .ok_or_else(|| CliError::domain(format!("row label {label:?} has no curve")))?;
            let d = record.curve.distance_to(&m.shape)?;
            if d >= ON_CURVE_TOL {
                return Err(CliError::domain(format!(
                    "verify: {label} row lies {d:e} rad off its curve"
                )));
            }
            worst = worst.max(d);
        }
        println!(
            "verify: {} rows on their curves (max distance {worst:e})",
            written.len()
        );
    }

    let mut m = ManifestBuilder::new(
        "augment",
        json!({ "k": args.k, "seed": args.seed, "verify": args.verify, "jobs": args.jobs }),
    );
    m.input(&args.curves);
    m.output(&output);
    m.write(&manifest_path(&args.manifest, &output))?;
    Ok(())
}

struct RunRow {
    classifier: &'static str,
    k: Option<usize>,
    lambda: f64,
    seed: u64,
    baseline: f64,
    augmented: f64,
}

pub fn eval(args: EvalArgs) -> Result<(), CliError> {
    let output = out_path(&args.output);
    let summary_path = args.summary.as_deref().map(out_path).unwrap_or_else(|| {
        let stem = output
            .file_stem()
            .unwrap_or_default()
            .to_string_lossy()
            .into_owned();
        output.with_file_name(format!("{stem}.summary.csv"))
    });
    if args.seeds == 0 {
        return Err(CliError::input("--seeds must be at least 1"));
    }
    if !args.lambda_sweep && !(0.0..=1.0).contains(&args.lambda) {
        return Err(CliError::input("--lambda must lie in [0, 1]"));
    }

    let real = io::read_preshapes(&args.real)?;
    let test = io::read_preshapes(&args.test)?;
    let fixed = args
        .augmented
        .as_deref()
        .map(io::read_preshapes)
        .transpose()?;
    let curves = args.curves.as_deref().map(io::read_curves).transpose()?;
    let check = |other: &LabeledDataset, what: &str| {
        real.check_compatible(other)
            .map_err(|e| CliError::input(format!("{what} does not match --real: {e}")))
    };
    check(&test, "--test")?;
    if let Some(f) = &fixed {
        check(f, "--augmented")?;
    }

    let classifiers: Vec<Classifier> = match args.classifier {
        ClassifierArg::Knn => vec![Classifier::Knn { k: args.knn_k }],
        ClassifierArg::Softmax => vec![Classifier::Softmax],
        ClassifierArg::Both => vec![Classifier::Knn { k: args.knn_k }, Classifier::Softmax],
    };
    let ks: Vec<Option<usize>> = match (&curves, args.k_sweep) {
        (Some(_), true) => K_GRID.iter().map(|&k| Some(k)).collect(),
        (Some(_), false) => vec![Some(args.k)],
        (None, _) => vec![None],
    };
    let lambdas: Vec<f64> = if args.lambda_sweep {
        LAMBDA_GRID.to_vec()
    } else {
        vec![args.lambda]
    };

    let mut jobs = Vec::new();
    for &classifier in &classifiers {
        for &k in &ks {
            for &lambda in &lambdas {
                for seed in args.seed..args.seed + args.seeds {
                    jobs.push((classifier, k, lambda, seed));
                }
            }
        }
    }
    let empty = LabeledDataset::new();
    let train_cfg = |seed| TrainConfig {
        learning_rate: args.learning_rate,
        epochs: args.epochs,
        batch_size: args.batch_size,
        augmented_batch_size: args.augmented_batch_size,
        seed,
    };

    let rows: Vec<Result<RunRow, CliError>> = pool(args.jobs)?.install(|| {
        jobs.par_iter()
            .map(|&(classifier, k, lambda, seed)| {
                let cfg = EvalConfig {
                    loss: LossConfig { lambda, seed },
                    train: train_cfg(seed),
                };
                let augmented = match (&curves, k) {
                    (Some(c), Some(k)) => as_dataset(&sample_all(c, k, seed))?,
                    _ => fixed.clone().unwrap_or_default(),
                };
                let baseline = evaluate(&real, &empty, &test, classifier, &cfg)?;
                let with = evaluate(&real, &augmented, &test, classifier, &cfg)?;
                Ok(RunRow {
                    classifier: classifier.name(),
                    k,
                    lambda,
                    seed,
                    baseline,
                    augmented: with,
                })
            })
            .collect()
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    write_results(&output, &summary_path, &rows, args.seeds as usize)?;

    let mut m = ManifestBuilder::new(
        "eval",
        json!({
            "classifier": format!("{:?}", args.classifier).to_lowercase(),
            "knn_k": args.knn_k,
            "lambda": lambdas,
            "k": ks,
            "seeds": args.seeds,
            "seed": args.seed,
            "learning_rate": args.learning_rate,
            "epochs": args.epochs,
            "batch_size": args.batch_size,
            "augmented_batch_size": args.augmented_batch_size,
            "gate_threshold": fagc::eval::GATE_THRESHOLD,
            "jobs": args.jobs,
        }),
    );
    m.input(&args.real);
    m.input(&args.test);
    for p in args.augmented.iter().chain(&args.curves) {
        m.input(p);
    }
    m.output(&output);
    m.output(&summary_path);
    m.write(&manifest_path(&args.manifest, &output))?;
    Ok(())
}

fn write_results(
    output: &Path,
    summary: &Path,
    rows: &[RunRow],
    seeds: usize,
) -> Result<(), CliError> {
    let io_err = |e: csv::Error| CliError::Io(e.into());
    let fmt_k = |k: Option<usize>| k.map_or_else(|| "fixed".to_string(), |k| k.to_string());

    let mut w = csv::Writer::from_path(output).map_err(io_err)?;
    w.write_record([
        "classifier",
        "k",
        "lambda",
        "seed",
        "baseline_accuracy",
        "augmented_accuracy",
        "gain",
    ])
    .map_err(io_err)?;
    for r in rows {
        w.write_record([
            r.classifier.to_string(),
            fmt_k(r.k),
            io::fmt_f64(r.lambda),
            r.seed.to_string(),
            io::fmt_f64(r.baseline),
            io::fmt_f64(r.augmented),
            io::fmt_f64(r.augmented - r.baseline),
        ])
        .map_err(io_err)?;
    }
    w.flush().map_err(|e| CliError::Io(e.into()))?;

    let mut w = csv::Writer::from_path(summary).map_err(io_err)?;
    w.write_record([
        "classifier",
        "k",
        "lambda",
        "seeds",
        "baseline_mean",
        "baseline_stderr",
        "augmented_mean",
        "augmented_stderr",
        "gain_mean",
        "gain_stderr",
    ])
    .map_err(io_err)?;
    for group in rows.chunks(seeds) {
        let col =
            |f: &dyn Fn(&RunRow) -> f64| mean_and_stderr(&group.iter().map(f).collect::<Vec<_>>());
        let (bm, bs) = col(&|r| r.baseline);
        let (am, as_) = col(&|r| r.augmented);
        let (gm, gs) = col(&|r| r.augmented - r.baseline);
        let r = &group[0];
        println!(
            "{} k={} lambda={}: baseline {bm:.4} ± {bs:.4}, augmented {am:.4} ± {as_:.4}, gain {gm:+.4} ± {gs:.4}",
            r.classifier,
            fmt_k(r.k),
            r.lambda
        );
        w.write_record([
            r.classifier.to_string(),
            fmt_k(r.k),
            io::fmt_f64(r.lambda),
            group.len().to_string(),
            io::fmt_f64(bm),
            io::fmt_f64(bs),
            io::fmt_f64(am),
            io::fmt_f64(as_),
            io::fmt_f64(gm),
            io::fmt_f64(gs),
        ])
        .map_err(io_err)?;
    }
    w.flush().map_err(|e| CliError::Io(e.into()))
}

pub fn synth(args: SynthArgs) -> Result<(), CliError> {
    let train_path = out_path(&args.train);
    let test_path = out_path(&args.test);
    let spec = SynthSpec {
        categories: args.categories,
        samples: args.samples,
        dim: args.dim,
        kappa: args.kappa,
        seed: args.seed,
    };
    let task = SynthTask::new(spec)?;
    for (path, per_category, stream) in [
        (&train_path, args.samples, 0),
        (&test_path, args.test_per_category, 1),
    ] {
        let rows = task.raw(per_category, stream);
        io::write_features(
            path,
            rows.iter().map(|(l, r)| (l.as_str(), r.values())),
            args.dim,
        )?;
        println!("wrote {} rows to {}", rows.len(), path.display());
    }

    let mut m = ManifestBuilder::new(
        "synth",
        json!({
            "categories": args.categories,
            "samples": args.samples,
            "dim": args.dim,
            "kappa": args.kappa,
            "test_per_category": args.test_per_category,
            "seed": args.seed,
        }),
    );
    m.output(&train_path);
    m.output(&test_path);
    m.write(&manifest_path(&args.manifest, &train_path))?;
    Ok(())
}
