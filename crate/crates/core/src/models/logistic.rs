//! L2-regularized logistic regression trained by full-batch gradient
//! descent. The corpus is small (~15k rows, ~16 columns), so determinism
//! and the intercept calibration identity are worth more than speed.

use serde::{Deserialize, Serialize};

use crate::exec;
use crate::features::FeatureMatrix;
use crate::models::{
    check_both_classes, clamp_probability, sigmoid, ModelError, Prediction,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticHyper {
    pub learning_rate: f64,
    pub max_iters: u32,
    /// Stop when the loss improves by less than this.
    pub tol: f64,
    /// L2 strength; the penalty is `l2/2 * ||w||^2`, intercept excluded.
    pub l2: f64,
    pub seed: u64,
}

impl Default for LogisticHyper {
    fn default() -> Self {
        Self {
            learning_rate: 2.0,
            max_iters: 20_000,
            tol: 1e-12,
            l2: 0.0,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainMeta {
    pub iterations_run: u32,
    pub final_loss: f64,
    pub seed: u64,
    pub learning_rate: f64,
    pub l2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub intercept: f64,
    pub fingerprint: String,
    pub meta: TrainMeta,
}

impl LinearModel {
    pub fn decision_value(&self, row: &[f64]) -> f64 {
        let dot: f64 = self.weights.iter().zip(row).map(|(w, x)| w * x).sum();
        dot + self.intercept
    }

    pub fn predict_raw(&self, row: &[f64]) -> f64 {
        clamp_probability(sigmoid(self.decision_value(row)))
    }

    /// Predict every row of a matrix; row order is preserved.
    pub fn predict_matrix(&self, matrix: &FeatureMatrix) -> Result<Vec<Prediction>, ModelError> {
        check_fingerprint(&self.fingerprint, matrix.fingerprint())?;
        Ok(exec::map_indices(matrix.n_rows(), |i| Prediction {
            event_id: matrix.ids[i].clone(),
            probability: self.predict_raw(matrix.row(i)),
        }))
    }
}

fn check_fingerprint(model: &str, data: &str) -> Result<(), ModelError> {
    if model == data {
        Ok(())
    } else {
        Err(ModelError::SchemaMismatch {
            model: model.to_string(),
            data: data.to_string(),
        })
    }
}

/// Mean log-loss plus the L2 penalty, and its gradient.
fn loss_and_gradient(
    matrix: &FeatureMatrix,
    weights: &[f64],
    intercept: f64,
    l2: f64,
) -> (f64, Vec<f64>, f64) {
    let n = matrix.n_rows() as f64;
    let d = matrix.n_cols();
    let mut grad_w = vec![0.0; d];
    let mut grad_b = 0.0;
    let mut loss = 0.0;
    for (i, row) in matrix.rows().enumerate() {
        let z: f64 = weights.iter().zip(row).map(|(w, x)| w * x).sum::<f64>() + intercept;
        let p = sigmoid(z);
        let y = f64::from(u8::from(matrix.labels[i]));
        let pc = clamp_probability(p);
        loss -= y * pc.ln() + (1.0 - y) * (1.0 - pc).ln();
        let err = p - y;
        for (g, x) in grad_w.iter_mut().zip(row) {
            *g += err * x;
        }
        grad_b += err;
    }
    loss /= n;
    for (g, w) in grad_w.iter_mut().zip(weights) {
        *g = *g / n + l2 * w;
        loss += 0.5 * l2 * w * w;
    }
    (loss, grad_w, grad_b / n)
}

/// Train by full-batch gradient descent from zero initialization. Stops at
/// `max_iters` or when the loss improvement drops below `tol`.
pub fn train_logistic(
    matrix: &FeatureMatrix,
    hyper: &LogisticHyper,
) -> Result<LinearModel, ModelError> {
    check_both_classes(&matrix.labels)?;
    let d = matrix.n_cols();
    let mut weights = vec![0.0; d];
    let mut intercept = 0.0;
    let mut prev_loss = f64::INFINITY;
    let mut iterations_run = 0;
    let mut final_loss = f64::NAN;

    for iter in 0..hyper.max_iters {
        let (loss, grad_w, grad_b) = loss_and_gradient(matrix, &weights, intercept, hyper.l2);
        if !loss.is_finite() {
            return Err(ModelError::NonFiniteLoss { iteration: iter });
        }
        final_loss = loss;
        if (prev_loss - loss).abs() < hyper.tol {
            break;
        }
        prev_loss = loss;
        for (w, g) in weights.iter_mut().zip(&grad_w) {
            *w -= hyper.learning_rate * g;
        }
        intercept -= hyper.learning_rate * grad_b;
        iterations_run = iter + 1;
    }
    if iterations_run == hyper.max_iters {
        // Record the loss at the final parameter values.
        let (loss, _, _) = loss_and_gradient(matrix, &weights, intercept, hyper.l2);
        if !loss.is_finite() {
            return Err(ModelError::NonFiniteLoss {
                iteration: hyper.max_iters,
            });
        }
        final_loss = loss;
    }

    Ok(LinearModel {
        weights,
        intercept,
        fingerprint: matrix.fingerprint().to_string(),
        meta: TrainMeta {
            iterations_run,
            final_loss,
            seed: hyper.seed,
            learning_rate: hyper.learning_rate,
            l2: hyper.l2,
        },
    })
}

/// Predict a single matrix row.
pub fn predict_logistic(
    model: &LinearModel,
    matrix: &FeatureMatrix,
    row: usize,
) -> Result<Prediction, ModelError> {
    check_fingerprint(&model.fingerprint, matrix.fingerprint())?;
    Ok(Prediction {
        event_id: matrix.ids[row].clone(),
        probability: model.predict_raw(matrix.row(row)),
    })
}

#[cfg(test)]
pub(crate) fn numeric_gradient(
    matrix: &FeatureMatrix,
    weights: &[f64],
    intercept: f64,
    l2: f64,
) -> (Vec<f64>, f64) {
    let h = 1e-6;
    let loss_at = |w: &[f64], b: f64| loss_and_gradient(matrix, w, b, l2).0;
    let mut grad = vec![0.0; weights.len()];
    let mut w = weights.to_vec();
    for i in 0..w.len() {
        let orig = w[i];
        w[i] = orig + h;
        let up = loss_at(&w, intercept);
        w[i] = orig - h;
        let down = loss_at(&w, intercept);
        w[i] = orig;
        grad[i] = (up - down) / (2.0 * h);
    }
    let gb = (loss_at(&w, intercept + h) - loss_at(&w, intercept - h)) / (2.0 * h);
    (grad, gb)
}

#[cfg(test)]
pub(crate) fn analytic_gradient(
    matrix: &FeatureMatrix,
    weights: &[f64],
    intercept: f64,
    l2: f64,
) -> (Vec<f64>, f64) {
    let (_, gw, gb) = loss_and_gradient(matrix, weights, intercept, l2);
    (gw, gb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::FeatureMatrix;
    use crate::models::testutil::numeric_matrix;

    fn tiny_matrix(rows: &[(&[f64], bool)]) -> FeatureMatrix {
        let data: Vec<&[f64]> = rows.iter().map(|(r, _)| *r).collect();
        let labels: Vec<bool> = rows.iter().map(|(_, l)| *l).collect();
        numeric_matrix(&data, &labels)
    }

    /// Brute-force grid search over (w, b) for the regularized loss.
    fn grid_search_1d(matrix: &FeatureMatrix, l2: f64) -> (f64, f64, f64) {
        let mut best = (f64::INFINITY, 0.0, 0.0);
        let mut w = -10.0;
        while w <= 10.0 {
            let mut b = -10.0;
            while b <= 10.0 {
                let preds: Vec<f64> = matrix
                    .rows()
                    .map(|r| clamp_probability(sigmoid(w * r[0] + b)))
                    .collect();
                let base = log_loss_plain(&preds, &matrix.labels);
                let loss = base + 0.5 * l2 * w * w;
                if loss < best.0 {
                    best = (loss, w, b);
                }
                b += 0.05;
            }
            w += 0.05;
        }
        best
    }

    fn log_loss_plain(preds: &[f64], labels: &[bool]) -> f64 {
        crate::models::log_loss(preds, labels).unwrap()
    }

    #[test]
    fn one_feature_set_matches_grid_oracle() {
        let m = tiny_matrix(&[(&[0.0], false), (&[1.0], true)]);
        let hyper = LogisticHyper {
            l2: 0.1,
            max_iters: 50_000,
            learning_rate: 1.0,
            tol: 0.0,
            seed: 1,
        };
        let model = train_logistic(&m, &hyper).unwrap();
        let p1 = model.predict_raw(&[1.0]);
        let p0 = model.predict_raw(&[0.0]);
        assert!(p1 > 0.5 && 0.5 > p0, "p1={p1} p0={p0}");

        let (oracle_loss, _, _) = grid_search_1d(&m, 0.1);
        assert!(
            model.meta.final_loss <= oracle_loss + 1e-3,
            "GD loss {} vs grid oracle {}",
            model.meta.final_loss,
            oracle_loss
        );
    }

    #[test]
    fn single_class_labels_error() {
        let m = tiny_matrix(&[(&[0.0], false), (&[1.0], false)]);
        assert!(matches!(
            train_logistic(&m, &LogisticHyper::default()),
            Err(ModelError::SingleClass)
        ));
    }

    #[test]
    fn zero_iterations_predicts_one_half() {
        let m = tiny_matrix(&[(&[0.0], false), (&[1.0], true)]);
        let hyper = LogisticHyper {
            max_iters: 0,
            ..LogisticHyper::default()
        };
        let model = train_logistic(&m, &hyper).unwrap();
        for p in model.predict_matrix(&m).unwrap() {
            assert_eq!(p.probability, 0.5);
        }
    }

    #[test]
    fn predict_reference_values() {
        let m = tiny_matrix(&[(&[0.5], true), (&[0.2], false)]);
        let mut model = train_logistic(
            &m,
            &LogisticHyper {
                max_iters: 0,
                ..LogisticHyper::default()
            },
        )
        .unwrap();
        // w=0, b=0: everything is 0.5.
        assert_eq!(model.predict_raw(&[123.0]), 0.5);
        // Clamp engages for a huge intercept.
        model.intercept = 50.0;
        assert_eq!(model.predict_raw(&[0.0]), 1.0 - crate::models::PROBABILITY_EPSILON);
        // Hand sigmoid evaluation.
        model.intercept = 0.0;
        model.weights = vec![1.0];
        assert!((model.predict_raw(&[0.5]) - 0.6225).abs() < 1e-4);
    }

    #[test]
    fn schema_mismatch_is_rejected() {
        let m = tiny_matrix(&[(&[0.0], false), (&[1.0], true)]);
        let mut model = train_logistic(&m, &LogisticHyper::default()).unwrap();
        model.fingerprint = "something-else".into();
        assert!(matches!(
            model.predict_matrix(&m),
            Err(ModelError::SchemaMismatch { .. })
        ));
        assert!(matches!(
            predict_logistic(&model, &m, 0),
            Err(ModelError::SchemaMismatch { .. })
        ));
    }

    #[test]
    fn gradient_matches_central_differences() {
        let m = tiny_matrix(&[
            (&[0.1, 0.9], true),
            (&[0.4, 0.3], false),
            (&[0.8, 0.2], true),
            (&[0.2, 0.7], false),
        ]);
        let weights = vec![0.3, -0.7];
        let (gw, gb) = analytic_gradient(&m, &weights, 0.11, 0.05);
        let (nw, nb) = numeric_gradient(&m, &weights, 0.11, 0.05);
        for (a, n) in gw.iter().zip(&nw) {
            assert!((a - n).abs() / n.abs().max(1e-8) < 1e-6, "{a} vs {n}");
        }
        assert!((gb - nb).abs() / nb.abs().max(1e-8) < 1e-6);
    }

    #[test]
    fn intercept_calibration_identity() {
        // Unregularized convergence: sum of predictions equals sum of labels.
        let m = tiny_matrix(&[
            (&[0.0], false),
            (&[0.25], false),
            (&[0.5], true),
            (&[0.75], true),
            (&[1.0], false),
            (&[0.9], true),
        ]);
        let hyper = LogisticHyper {
            learning_rate: 5.0,
            max_iters: 200_000,
            tol: 0.0,
            l2: 0.0,
            seed: 0,
        };
        let model = train_logistic(&m, &hyper).unwrap();
        let sum_p: f64 = m.rows().map(|r| model.predict_raw(r)).sum();
        let sum_y = m.goals() as f64;
        assert!(
            (sum_p - sum_y).abs() / sum_y <= 1e-4,
            "sum_p={sum_p} sum_y={sum_y}"
        );
    }
}
