//! Model evaluation the way the study frames it: accumulated xG against
//! actual goals, a linear fit and Pearson correlation against the
//! provider's stored per-shot xG, and calibration diagnostics.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::FeatureMatrix;
use crate::models::{
    log_loss, train_gbdt, train_logistic, GbdtHyper, LogisticHyper, ModelArtifact, ModelError,
    Prediction,
};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("series too short: need at least {need}, got {got}")]
    TooShort { need: usize, got: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("correlation undefined for a constant series")]
    ConstantSeries,
    #[error("need at least 2 calibration bins, got {0}")]
    BadBinCount(usize),
    #[error("k-fold requires 2 <= k <= n, got k={k} for n={n}")]
    BadFoldCount { k: usize, n: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Sum of probabilities. `+ 0.0` keeps the empty sum at +0.0.
pub fn accumulate_xg(predictions: &[f64]) -> f64 {
    predictions.iter().sum::<f64>() + 0.0
}

/// Sample Pearson correlation coefficient.
pub fn pearson(a: &[f64], b: &[f64]) -> Result<f64, EvalError> {
    if a.len() != b.len() {
        return Err(EvalError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.len() < 2 {
        return Err(EvalError::TooShort {
            need: 2,
            got: a.len(),
        });
    }
    let n = a.len() as f64;
    let mean_a = a.iter().sum::<f64>() / n;
    let mean_b = b.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_a = 0.0;
    let mut var_b = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        let dx = x - mean_a;
        let dy = y - mean_b;
        cov += dx * dy;
        var_a += dx * dx;
        var_b += dy * dy;
    }
    if var_a == 0.0 || var_b == 0.0 {
        return Err(EvalError::ConstantSeries);
    }
    Ok(cov / (var_a.sqrt() * var_b.sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub intercept: f64,
    pub slope: f64,
}

/// Ordinary least squares of y on x.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LineFit, EvalError> {
    if x.len() != y.len() {
        return Err(EvalError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(EvalError::TooShort {
            need: 2,
            got: x.len(),
        });
    }
    let n = x.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        sxx += (xi - mean_x) * (xi - mean_x);
        sxy += (xi - mean_x) * (yi - mean_y);
    }
    if sxx == 0.0 {
        return Err(EvalError::ConstantSeries);
    }
    let slope = sxy / sxx;
    Ok(LineFit {
        intercept: mean_y - slope * mean_x,
        slope,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationBin {
    pub lo: f64,
    pub hi: f64,
    pub mean_predicted: f64,
    pub goal_rate: f64,
    pub count: u64,
}

/// Equal-width probability bins over [0, 1].
pub fn calibration_bins(
    predictions: &[f64],
    labels: &[bool],
    n_bins: usize,
) -> Result<Vec<CalibrationBin>, EvalError> {
    if n_bins < 2 {
        return Err(EvalError::BadBinCount(n_bins));
    }
    if predictions.len() != labels.len() {
        return Err(EvalError::LengthMismatch {
            left: predictions.len(),
            right: labels.len(),
        });
    }
    let mut sums = vec![0.0; n_bins];
    let mut goals = vec![0u64; n_bins];
    let mut counts = vec![0u64; n_bins];
    for (&p, &y) in predictions.iter().zip(labels) {
        let bin = ((p * n_bins as f64) as usize).min(n_bins - 1);
        sums[bin] += p;
        goals[bin] += u64::from(y);
        counts[bin] += 1;
    }
    let width = 1.0 / n_bins as f64;
    Ok((0..n_bins)
        .map(|b| CalibrationBin {
            lo: b as f64 * width,
            hi: (b + 1) as f64 * width,
            mean_predicted: if counts[b] > 0 {
                sums[b] / counts[b] as f64
            } else {
                0.0
            },
            goal_rate: if counts[b] > 0 {
                goals[b] as f64 / counts[b] as f64
            } else {
                0.0
            },
            count: counts[b],
        })
        .collect())
}

/// How predictions were obtained for the report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum EvalMode {
    /// Predictions from a model on its own training corpus.
    InSample,
    /// Out-of-sample predictions stitched from k held-out folds.
    KFold { k: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub label: String,
    pub mode: EvalMode,
    pub samples: usize,
    pub accumulated_xg: f64,
    pub total_goals: u64,
    /// OLS of model xG (y) on benchmark xG (x).
    pub fit: LineFit,
    pub pearson_r: f64,
    pub mean_log_loss: f64,
    pub calibration: Vec<CalibrationBin>,
}

pub const DEFAULT_CALIBRATION_BINS: usize = 10;

/// Assemble the full report from aligned prediction/label/benchmark rows.
pub fn evaluate_predictions(
    label: &str,
    mode: EvalMode,
    predictions: &[Prediction],
    labels: &[bool],
    benchmark: &[f64],
    n_bins: usize,
) -> Result<EvaluationReport, EvalError> {
    let probs: Vec<f64> = predictions.iter().map(|p| p.probability).collect();
    if probs.len() != benchmark.len() {
        return Err(EvalError::LengthMismatch {
            left: probs.len(),
            right: benchmark.len(),
        });
    }
    Ok(EvaluationReport {
        label: label.to_string(),
        mode,
        samples: probs.len(),
        accumulated_xg: accumulate_xg(&probs),
        total_goals: labels.iter().filter(|&&y| y).count() as u64,
        fit: linear_fit(benchmark, &probs)?,
        pearson_r: pearson(benchmark, &probs)?,
        mean_log_loss: log_loss(&probs, labels)?,
        calibration: calibration_bins(&probs, labels, n_bins)?,
    })
}

/// In-sample evaluation of a trained model against the stored benchmark.
pub fn evaluate_model(
    label: &str,
    model: &ModelArtifact,
    matrix: &FeatureMatrix,
    benchmark: &[f64],
) -> Result<EvaluationReport, EvalError> {
    let predictions = model.predict_matrix(matrix)?;
    evaluate_predictions(
        label,
        EvalMode::InSample,
        &predictions,
        &matrix.labels,
        benchmark,
        DEFAULT_CALIBRATION_BINS,
    )
}

/// Which model family to retrain per fold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelSpec {
    Logistic(LogisticHyper),
    Gbdt(GbdtHyper),
}

impl ModelSpec {
    fn train(&self, matrix: &FeatureMatrix) -> Result<ModelArtifact, ModelError> {
        match self {
            ModelSpec::Logistic(h) => Ok(ModelArtifact::Logistic(train_logistic(matrix, h)?)),
            ModelSpec::Gbdt(h) => Ok(ModelArtifact::Gbdt(train_gbdt(matrix, h)?)),
        }
    }
}

/// Out-of-sample evaluation: each shot is predicted by the model trained
/// on the other k-1 folds. Fold assignment is a seeded shuffle.
pub fn evaluate_kfold(
    label: &str,
    spec: &ModelSpec,
    matrix: &FeatureMatrix,
    benchmark: &[f64],
    k: usize,
    seed: u64,
) -> Result<EvaluationReport, EvalError> {
    let n = matrix.n_rows();
    if k < 2 || k > n {
        return Err(EvalError::BadFoldCount { k, n });
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);

    let mut probs = vec![0.0; n];
    for fold in 0..k {
        let test: Vec<usize> = order
            .iter()
            .copied()
            .skip(fold)
            .step_by(k)
            .collect();
        let train: Vec<usize> = order
            .iter()
            .copied()
            .filter(|i| !test.contains(i))
            .collect();
        let model = spec.train(&matrix.select_rows(&train))?;
        let test_matrix = matrix.select_rows(&test);
        let fold_preds = model.predict_matrix(&test_matrix)?;
        for (&row, pred) in test.iter().zip(fold_preds) {
            probs[row] = pred.probability;
        }
    }
    let predictions: Vec<Prediction> = matrix
        .ids
        .iter()
        .zip(&probs)
        .map(|(id, &probability)| Prediction {
            event_id: id.clone(),
            probability,
        })
        .collect();
    evaluate_predictions(
        label,
        EvalMode::KFold { k, seed },
        &predictions,
        &matrix.labels,
        benchmark,
        DEFAULT_CALIBRATION_BINS,
    )
}

/// Aligned-text rendering of one report.
pub fn render_text(report: &EvaluationReport) -> String {
    let mut out = String::new();
    let mode = match report.mode {
        EvalMode::InSample => "in-sample".to_string(),
        EvalMode::KFold { k, seed } => format!("{k}-fold out-of-sample (seed {seed})"),
    };
    let _ = writeln!(out, "model: {}  [{}]", report.label, mode);
    let _ = writeln!(out, "samples:          {}", report.samples);
    let _ = writeln!(out, "accumulated xG:   {:.2}", report.accumulated_xg);
    let _ = writeln!(out, "actual goals:     {}", report.total_goals);
    let _ = writeln!(
        out,
        "fit vs benchmark: y = {:.2} + {:.2}x",
        report.fit.intercept, report.fit.slope
    );
    let _ = writeln!(out, "pearson r:        {:.3}", report.pearson_r);
    let _ = writeln!(out, "mean log-loss:    {:.4}", report.mean_log_loss);
    let _ = writeln!(out, "calibration bins:");
    let _ = writeln!(out, "  range         mean-pred   goal-rate   count");
    for bin in &report.calibration {
        let _ = writeln!(
            out,
            "  [{:.2},{:.2})   {:>9.4}   {:>9.4}   {:>5}",
            bin.lo, bin.hi, bin.mean_predicted, bin.goal_rate, bin.count
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn accumulate_reference_values() {
        assert_eq!(accumulate_xg(&[]), 0.0);
        assert_eq!(accumulate_xg(&[0.25, 0.75]), 1.0);
    }

    #[test]
    fn accumulate_is_additive_over_concatenation() {
        let a = [0.1, 0.4, 0.3];
        let b = [0.9, 0.2];
        let joined: Vec<f64> = a.iter().chain(&b).copied().collect();
        assert!(
            (accumulate_xg(&joined) - (accumulate_xg(&a) + accumulate_xg(&b))).abs() < 1e-15
        );
    }

    #[test]
    fn pearson_reference_values() {
        let a = [1.0, 2.0, 3.0];
        assert!((pearson(&a, &a).unwrap() - 1.0).abs() < 1e-15);
        assert!((pearson(&a, &[3.0, 2.0, 1.0]).unwrap() + 1.0).abs() < 1e-15);
        // Hand computation: 9 / sqrt(84).
        let r = pearson(&a, &[1.0, 2.0, 4.0]).unwrap();
        assert!((r - 9.0 / 84.0_f64.sqrt()).abs() < 1e-12);
        assert!((r - 0.9820).abs() < 1e-4);
    }

    #[test]
    fn pearson_error_paths() {
        assert!(matches!(
            pearson(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(EvalError::ConstantSeries)
        ));
        assert!(matches!(
            pearson(&[1.0], &[1.0]),
            Err(EvalError::TooShort { .. })
        ));
        assert!(matches!(
            pearson(&[1.0, 2.0], &[1.0]),
            Err(EvalError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn pearson_symmetry_and_affine_equivariance() {
        let a = [0.2, 0.5, 0.1, 0.9, 0.3];
        let b = [0.3, 0.1, 0.7, 0.8, 0.2];
        let r1 = pearson(&a, &b).unwrap();
        let r2 = pearson(&b, &a).unwrap();
        assert!((r1 - r2).abs() < 1e-15);
        let scaled: Vec<f64> = a.iter().map(|x| 3.0 * x + 11.0).collect();
        assert!((pearson(&scaled, &b).unwrap() - r1).abs() < 1e-12);
        let negated: Vec<f64> = a.iter().map(|x| -2.0 * x + 1.0).collect();
        assert!((pearson(&negated, &b).unwrap() + r1).abs() < 1e-12);
    }

    #[test]
    fn linear_fit_reference_values() {
        let fit = linear_fit(&[0.0, 1.0, 2.0], &[0.0, 1.0, 2.0]).unwrap();
        assert!((fit.intercept).abs() < 1e-15 && (fit.slope - 1.0).abs() < 1e-15);
        let fit = linear_fit(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]).unwrap();
        assert!((fit.intercept - 1.0).abs() < 1e-12 && (fit.slope - 2.0).abs() < 1e-12);
        assert!(matches!(
            linear_fit(&[2.0, 2.0], &[1.0, 3.0]),
            Err(EvalError::ConstantSeries)
        ));
    }

    #[test]
    fn ols_residuals_sum_to_zero() {
        let x = [0.3, 1.7, 2.2, 4.8, 5.1, 6.9];
        let y = [1.1, 0.4, 2.9, 3.8, 3.2, 7.0];
        let fit = linear_fit(&x, &y).unwrap();
        let residual_sum: f64 = x
            .iter()
            .zip(&y)
            .map(|(&xi, &yi)| yi - (fit.intercept + fit.slope * xi))
            .sum();
        let scale: f64 = y.iter().map(|v| v.abs()).sum();
        assert!(residual_sum.abs() / scale <= 1e-9);
    }

    #[test]
    fn calibration_bins_monte_carlo() {
        // Labels drawn with probability equal to the prediction.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 100_000;
        let mut preds = Vec::with_capacity(n);
        let mut labels = Vec::with_capacity(n);
        for _ in 0..n {
            let p: f64 = rng.random();
            preds.push(p);
            labels.push(rng.random::<f64>() < p);
        }
        let bins = calibration_bins(&preds, &labels, 10).unwrap();
        assert_eq!(bins.iter().map(|b| b.count).sum::<u64>(), n as u64);
        for bin in bins {
            assert!(
                (bin.mean_predicted - bin.goal_rate).abs() <= 0.02,
                "bin [{}, {}): {} vs {}",
                bin.lo,
                bin.hi,
                bin.mean_predicted,
                bin.goal_rate
            );
        }
    }

    #[test]
    fn calibration_bins_edge_cases() {
        let preds = vec![0.5; 10];
        let labels: Vec<bool> = (0..10).map(|i| i % 2 == 0).collect();
        let bins = calibration_bins(&preds, &labels, 10).unwrap();
        let occupied: Vec<_> = bins.iter().filter(|b| b.count > 0).collect();
        assert_eq!(occupied.len(), 1);
        assert!((occupied[0].goal_rate - 0.5).abs() < 1e-15);

        let empty = calibration_bins(&[], &[], 5).unwrap();
        assert!(empty.iter().all(|b| b.count == 0));

        assert!(matches!(
            calibration_bins(&[0.5], &[true], 1),
            Err(EvalError::BadBinCount(1))
        ));
    }

    #[test]
    fn self_comparison_is_perfect() {
        let benchmark = [0.1, 0.4, 0.2, 0.8, 0.5];
        let predictions: Vec<Prediction> = benchmark
            .iter()
            .enumerate()
            .map(|(i, &probability)| Prediction {
                event_id: format!("e{i}"),
                probability,
            })
            .collect();
        let labels = [false, true, false, true, false];
        let report = evaluate_predictions(
            "self",
            EvalMode::InSample,
            &predictions,
            &labels,
            &benchmark,
            10,
        )
        .unwrap();
        assert!((report.pearson_r - 1.0).abs() < 1e-12);
        assert!((report.fit.slope - 1.0).abs() < 1e-12);
        assert!(report.fit.intercept.abs() < 1e-12);
    }

    #[test]
    fn kfold_covers_every_row_and_is_deterministic() {
        let rows: Vec<Vec<f64>> = (0..60).map(|i| vec![(i % 12) as f64 / 12.0]).collect();
        let refs: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
        let labels: Vec<bool> = (0..60).map(|i| (i % 12) >= 6).collect();
        let m = crate::models::testutil::numeric_matrix(&refs, &labels);
        let benchmark: Vec<f64> = (0..60).map(|i| (i % 12) as f64 / 12.0).collect();
        let spec = ModelSpec::Gbdt(GbdtHyper {
            n_trees: 5,
            min_samples_leaf: 2,
            ..GbdtHyper::default()
        });
        let a = evaluate_kfold("oos", &spec, &m, &benchmark, 5, 9).unwrap();
        let b = evaluate_kfold("oos", &spec, &m, &benchmark, 5, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.samples, 60);
        assert!(matches!(a.mode, EvalMode::KFold { k: 5, seed: 9 }));
        assert!(matches!(
            evaluate_kfold("oos", &spec, &m, &benchmark, 1, 9),
            Err(EvalError::BadFoldCount { .. })
        ));
    }
}
