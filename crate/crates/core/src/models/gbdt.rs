//! Gradient boosting on log-loss: the base score is the log-odds of
//! training prevalence, each round fits a regression tree to the negative
//! gradient (y - p), and leaves take one-step Newton values.

use serde::{Deserialize, Serialize};

use crate::exec;
use crate::features::FeatureMatrix;
use crate::models::tree::{fit_regression_tree, TreeNode, TreeParams};
use crate::models::{
    check_both_classes, clamp_probability, log_loss, sigmoid, ModelError, Prediction,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GbdtHyper {
    pub n_trees: u32,
    pub learning_rate: f64,
    pub max_depth: u32,
    pub min_samples_leaf: usize,
    pub seed: u64,
}

impl Default for GbdtHyper {
    fn default() -> Self {
        Self {
            n_trees: 200,
            learning_rate: 0.1,
            max_depth: 3,
            min_samples_leaf: 20,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GbdtMeta {
    pub seed: u64,
    pub training_rows: usize,
    /// Training log-loss after each boosting round.
    pub train_log_loss_by_round: Vec<f64>,
    pub final_train_log_loss: f64,
}

/// An additive ensemble of depth-limited regression trees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoostedForest {
    /// Log-odds of training prevalence.
    pub base_score: f64,
    pub trees: Vec<TreeNode>,
    pub learning_rate: f64,
    pub fingerprint: String,
    pub hyper: GbdtHyper,
    pub meta: GbdtMeta,
}

impl BoostedForest {
    pub fn raw_score(&self, row: &[f64]) -> f64 {
        let sum: f64 = self.trees.iter().map(|t| t.route(row)).sum();
        self.base_score + self.learning_rate * sum
    }

    pub fn predict_raw(&self, row: &[f64]) -> f64 {
        clamp_probability(sigmoid(self.raw_score(row)))
    }

    pub fn predict_matrix(&self, matrix: &FeatureMatrix) -> Result<Vec<Prediction>, ModelError> {
        self.check_fingerprint(matrix)?;
        Ok(exec::map_indices(matrix.n_rows(), |i| Prediction {
            event_id: matrix.ids[i].clone(),
            probability: self.predict_raw(matrix.row(i)),
        }))
    }

    /// Sequential twin of [`predict_matrix`] for benchmarking.
    pub fn predict_matrix_seq(
        &self,
        matrix: &FeatureMatrix,
    ) -> Result<Vec<Prediction>, ModelError> {
        self.check_fingerprint(matrix)?;
        Ok(exec::map_indices_seq(matrix.n_rows(), |i| Prediction {
            event_id: matrix.ids[i].clone(),
            probability: self.predict_raw(matrix.row(i)),
        }))
    }

    fn check_fingerprint(&self, matrix: &FeatureMatrix) -> Result<(), ModelError> {
        if self.fingerprint == matrix.fingerprint() {
            Ok(())
        } else {
            Err(ModelError::SchemaMismatch {
                model: self.fingerprint.clone(),
                data: matrix.fingerprint().to_string(),
            })
        }
    }
}

fn train_impl(
    matrix: &FeatureMatrix,
    hyper: &GbdtHyper,
    parallel: bool,
) -> Result<BoostedForest, ModelError> {
    check_both_classes(&matrix.labels)?;
    let n = matrix.n_rows();
    let positives = matrix.goals() as f64;
    let prevalence = positives / n as f64;
    let base_score = (prevalence / (1.0 - prevalence)).ln();

    let params = TreeParams {
        max_depth: hyper.max_depth,
        min_samples_leaf: hyper.min_samples_leaf.max(1),
    };
    let all: Vec<usize> = (0..n).collect();
    let targets: Vec<f64> = matrix
        .labels
        .iter()
        .map(|&y| f64::from(u8::from(y)))
        .collect();

    let mut scores = vec![base_score; n];
    let mut residuals = vec![0.0; n];
    let mut hessians = vec![0.0; n];
    let mut trees = Vec::with_capacity(hyper.n_trees as usize);
    let mut losses = Vec::with_capacity(hyper.n_trees as usize);

    for _round in 0..hyper.n_trees {
        for i in 0..n {
            let p = sigmoid(scores[i]);
            residuals[i] = targets[i] - p;
            hessians[i] = p * (1.0 - p);
        }
        let tree = fit_regression_tree(matrix, &all, &residuals, &hessians, &params, parallel);
        for i in 0..n {
            scores[i] += hyper.learning_rate * tree.route(matrix.row(i));
        }
        trees.push(tree);
        let probs: Vec<f64> = scores.iter().map(|&s| clamp_probability(sigmoid(s))).collect();
        losses.push(log_loss(&probs, &matrix.labels)?);
    }

    let final_loss = match losses.last() {
        Some(&loss) => loss,
        None => {
            let probs: Vec<f64> =
                scores.iter().map(|&s| clamp_probability(sigmoid(s))).collect();
            log_loss(&probs, &matrix.labels)?
        }
    };

    Ok(BoostedForest {
        base_score,
        trees,
        learning_rate: hyper.learning_rate,
        fingerprint: matrix.fingerprint().to_string(),
        hyper: *hyper,
        meta: GbdtMeta {
            seed: hyper.seed,
            training_rows: n,
            train_log_loss_by_round: losses,
            final_train_log_loss: final_loss,
        },
    })
}

/// Train a boosted forest; split search fans out across features when the
/// `parallel` feature is enabled, with results bit-identical to sequential.
pub fn train_gbdt(matrix: &FeatureMatrix, hyper: &GbdtHyper) -> Result<BoostedForest, ModelError> {
    train_impl(matrix, hyper, true)
}

/// Sequential twin of [`train_gbdt`] for benchmarking.
pub fn train_gbdt_seq(
    matrix: &FeatureMatrix,
    hyper: &GbdtHyper,
) -> Result<BoostedForest, ModelError> {
    train_impl(matrix, hyper, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::testutil::numeric_matrix;
    use proptest::prelude::*;

    #[test]
    fn zero_tree_forest_predicts_prevalence() {
        let m = numeric_matrix(
            &[&[0.0], &[1.0], &[2.0], &[3.0]],
            &[true, false, false, true],
        );
        let hyper = GbdtHyper {
            n_trees: 0,
            ..GbdtHyper::default()
        };
        let forest = train_gbdt(&m, &hyper).unwrap();
        for p in forest.predict_matrix(&m).unwrap() {
            assert_eq!(p.probability, 0.5);
        }

        // Prevalence 0.25.
        let m = numeric_matrix(
            &[&[0.0], &[1.0], &[2.0], &[3.0]],
            &[true, false, false, false],
        );
        let forest = train_gbdt(&m, &hyper).unwrap();
        for p in forest.predict_matrix(&m).unwrap() {
            assert!((p.probability - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn separable_data_beats_base_rate_loss() {
        let rows: Vec<Vec<f64>> = (0..40).map(|i| vec![i as f64]).collect();
        let refs: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
        let labels: Vec<bool> = (0..40).map(|i| i >= 20).collect();
        let m = numeric_matrix(&refs, &labels);
        let hyper = GbdtHyper {
            n_trees: 20,
            min_samples_leaf: 2,
            ..GbdtHyper::default()
        };
        let forest = train_gbdt(&m, &hyper).unwrap();
        // Base rate is 0.5 everywhere: loss ln 2.
        let base_loss = std::f64::consts::LN_2;
        assert!(
            forest.meta.final_train_log_loss < base_loss,
            "{} !< {base_loss}",
            forest.meta.final_train_log_loss
        );
    }

    #[test]
    fn min_leaf_equal_to_n_blocks_all_splits() {
        let m = numeric_matrix(
            &[&[0.0], &[1.0], &[2.0], &[3.0]],
            &[true, false, false, true],
        );
        let hyper = GbdtHyper {
            n_trees: 5,
            min_samples_leaf: 4,
            ..GbdtHyper::default()
        };
        let forest = train_gbdt(&m, &hyper).unwrap();
        // Every tree is a single leaf whose residuals sum to ~0, so the
        // prediction stays at the base rate.
        for p in forest.predict_matrix(&m).unwrap() {
            assert!((p.probability - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn training_loss_is_monotone_non_increasing() {
        let rows: Vec<Vec<f64>> = (0..60)
            .map(|i| vec![(i % 10) as f64, ((i * 7) % 13) as f64])
            .collect();
        let refs: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
        let labels: Vec<bool> = (0..60).map(|i| (i % 10) >= 5).collect();
        let m = numeric_matrix(&refs, &labels);
        let hyper = GbdtHyper {
            n_trees: 30,
            min_samples_leaf: 3,
            ..GbdtHyper::default()
        };
        let forest = train_gbdt(&m, &hyper).unwrap();
        let losses = &forest.meta.train_log_loss_by_round;
        for pair in losses.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-12, "{} > {}", pair[1], pair[0]);
        }
    }

    #[test]
    fn stump_prediction_formula() {
        let m = numeric_matrix(&[&[0.0], &[1.0]], &[false, true]);
        let hyper = GbdtHyper {
            n_trees: 1,
            min_samples_leaf: 1,
            max_depth: 1,
            ..GbdtHyper::default()
        };
        let forest = train_gbdt(&m, &hyper).unwrap();
        assert_eq!(forest.trees.len(), 1);
        let leaf = forest.trees[0].route(&[0.0]);
        let expected = sigmoid(forest.base_score + forest.learning_rate * leaf);
        assert_eq!(forest.predict_raw(&[0.0]), clamp_probability(expected));
    }

    #[test]
    fn single_class_is_rejected() {
        let m = numeric_matrix(&[&[0.0], &[1.0]], &[true, true]);
        assert!(matches!(
            train_gbdt(&m, &GbdtHyper::default()),
            Err(ModelError::SingleClass)
        ));
    }

    #[test]
    fn training_is_deterministic_and_parallel_matches_sequential() {
        let rows: Vec<Vec<f64>> = (0..80)
            .map(|i| vec![(i % 16) as f64, ((i * 5) % 7) as f64, ((i * 11) % 23) as f64])
            .collect();
        let refs: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
        let labels: Vec<bool> = (0..80).map(|i| (i * 13) % 5 == 0).collect();
        let m = numeric_matrix(&refs, &labels);
        let hyper = GbdtHyper {
            n_trees: 12,
            min_samples_leaf: 4,
            ..GbdtHyper::default()
        };
        let a = train_gbdt(&m, &hyper).unwrap();
        let b = train_gbdt(&m, &hyper).unwrap();
        let c = train_gbdt_seq(&m, &hyper).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        let pa = a.predict_matrix(&m).unwrap();
        let pc = c.predict_matrix_seq(&m).unwrap();
        assert_eq!(pa, pc);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn training_stays_finite_and_clamped(
            raw in proptest::collection::vec((0.0..1.0f64, proptest::bool::ANY), 8..40),
        ) {
            let rows: Vec<Vec<f64>> = raw.iter().map(|(x, _)| vec![*x]).collect();
            let refs: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
            let mut labels: Vec<bool> = raw.iter().map(|(_, y)| *y).collect();
            // Force both classes to be present.
            labels[0] = true;
            let last = labels.len() - 1;
            labels[last] = false;
            let m = numeric_matrix(&refs, &labels);
            let hyper = GbdtHyper { n_trees: 8, min_samples_leaf: 1, ..GbdtHyper::default() };
            let forest = train_gbdt(&m, &hyper).unwrap();
            for tree in &forest.trees {
                prop_assert!(tree.depth() <= hyper.max_depth);
            }
            for p in forest.predict_matrix(&m).unwrap() {
                prop_assert!(p.probability.is_finite());
                prop_assert!(p.probability >= crate::models::PROBABILITY_EPSILON);
                prop_assert!(p.probability <= 1.0 - crate::models::PROBABILITY_EPSILON);
            }
            for loss in &forest.meta.train_log_loss_by_round {
                prop_assert!(loss.is_finite());
            }
        }
    }
}
