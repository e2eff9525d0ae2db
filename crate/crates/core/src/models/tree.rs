//! Depth-limited regression trees fitted to boosting residuals. Splits are
//! found by exact threshold enumeration over sorted unique feature values,
//! greedily maximizing variance reduction; leaves take a one-step Newton
//! value with a floored denominator.

use serde::{Deserialize, Serialize};

use crate::exec;
use crate::features::FeatureMatrix;

/// Ties in split gain resolve to the lowest feature index, then the lowest
/// threshold, so parallel and sequential search are bit-identical.
const GAIN_EPSILON: f64 = 1e-12;

pub(crate) const LEAF_DENOMINATOR_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "kebab-case")]
pub enum TreeNode {
    Leaf {
        value: f64,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
}

impl TreeNode {
    /// Log-odds contribution for one row: route `value <= threshold` left.
    pub fn route(&self, row: &[f64]) -> f64 {
        match self {
            TreeNode::Leaf { value } => *value,
            TreeNode::Split {
                feature,
                threshold,
                left,
                right,
            } => {
                if row[*feature] <= *threshold {
                    left.route(row)
                } else {
                    right.route(row)
                }
            }
        }
    }

    pub fn depth(&self) -> u32 {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Split { left, right, .. } => left.leaf_count() + right.leaf_count(),
        }
    }
}

pub(crate) struct TreeParams {
    pub max_depth: u32,
    pub min_samples_leaf: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct SplitCandidate {
    gain: f64,
    feature: usize,
    threshold: f64,
}

/// Best boundary for one feature: maximizes the drop in residual SSE.
/// Within a feature, ties keep the lowest threshold.
fn best_split_for_feature(
    matrix: &FeatureMatrix,
    indices: &[usize],
    residuals: &[f64],
    feature: usize,
    min_leaf: usize,
) -> Option<SplitCandidate> {
    let mut pairs: Vec<(f64, f64)> = indices
        .iter()
        .map(|&i| (matrix.row(i)[feature], residuals[i]))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = pairs.len();
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    let parent_score = total * total / n as f64;

    let mut best: Option<SplitCandidate> = None;
    let mut left_sum = 0.0;
    for k in 1..n {
        left_sum += pairs[k - 1].1;
        if pairs[k - 1].0 == pairs[k].0 {
            continue;
        }
        if k < min_leaf || n - k < min_leaf {
            continue;
        }
        let right_sum = total - left_sum;
        let score =
            left_sum * left_sum / k as f64 + right_sum * right_sum / (n - k) as f64;
        let gain = score - parent_score;
        if gain > best.map_or(GAIN_EPSILON, |b| b.gain) {
            best = Some(SplitCandidate {
                gain,
                feature,
                threshold: pairs[k - 1].0,
            });
        }
    }
    best
}

fn best_split(
    matrix: &FeatureMatrix,
    indices: &[usize],
    residuals: &[f64],
    min_leaf: usize,
    parallel: bool,
) -> Option<SplitCandidate> {
    let per_feature: Vec<Option<SplitCandidate>> = if parallel {
        exec::map_indices(matrix.n_cols(), |f| {
            best_split_for_feature(matrix, indices, residuals, f, min_leaf)
        })
    } else {
        exec::map_indices_seq(matrix.n_cols(), |f| {
            best_split_for_feature(matrix, indices, residuals, f, min_leaf)
        })
    };
    // Ordered fold: the first feature with the strictly best gain wins.
    let mut best: Option<SplitCandidate> = None;
    for candidate in per_feature.into_iter().flatten() {
        if best.map_or(true, |b| candidate.gain > b.gain) {
            best = Some(candidate);
        }
    }
    best
}

fn leaf_value(indices: &[usize], residuals: &[f64], hessians: &[f64]) -> f64 {
    let num: f64 = indices.iter().map(|&i| residuals[i]).sum();
    let den: f64 = indices.iter().map(|&i| hessians[i]).sum();
    num / den.max(LEAF_DENOMINATOR_FLOOR)
}

fn split_node(
    matrix: &FeatureMatrix,
    indices: &[usize],
    residuals: &[f64],
    hessians: &[f64],
    params: &TreeParams,
    depth: u32,
    parallel: bool,
) -> TreeNode {
    if depth >= params.max_depth || indices.len() < 2 * params.min_samples_leaf {
        return TreeNode::Leaf {
            value: leaf_value(indices, residuals, hessians),
        };
    }
    let Some(split) = best_split(matrix, indices, residuals, params.min_samples_leaf, parallel)
    else {
        return TreeNode::Leaf {
            value: leaf_value(indices, residuals, hessians),
        };
    };
    let (left, right): (Vec<usize>, Vec<usize>) = indices
        .iter()
        .partition(|&&i| matrix.row(i)[split.feature] <= split.threshold);
    TreeNode::Split {
        feature: split.feature,
        threshold: split.threshold,
        left: Box::new(split_node(
            matrix, &left, residuals, hessians, params, depth + 1, parallel,
        )),
        right: Box::new(split_node(
            matrix, &right, residuals, hessians, params, depth + 1, parallel,
        )),
    }
}

pub(crate) fn fit_regression_tree(
    matrix: &FeatureMatrix,
    indices: &[usize],
    residuals: &[f64],
    hessians: &[f64],
    params: &TreeParams,
    parallel: bool,
) -> TreeNode {
    split_node(matrix, indices, residuals, hessians, params, 0, parallel)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(rows: &[&[f64]]) -> FeatureMatrix {
        crate::models::testutil::numeric_matrix(rows, &vec![false; rows.len()])
    }

    /// Independent oracle: recompute SSE from scratch for every possible
    /// (feature, threshold) pair.
    fn brute_force_best(
        m: &FeatureMatrix,
        residuals: &[f64],
        min_leaf: usize,
    ) -> Option<(usize, f64, f64)> {
        let n = m.n_rows();
        let sse = |idx: &[usize]| {
            if idx.is_empty() {
                return 0.0;
            }
            let mean: f64 = idx.iter().map(|&i| residuals[i]).sum::<f64>() / idx.len() as f64;
            idx.iter()
                .map(|&i| (residuals[i] - mean).powi(2))
                .sum::<f64>()
        };
        let all: Vec<usize> = (0..n).collect();
        let parent = sse(&all);
        let mut best: Option<(usize, f64, f64)> = None;
        for f in 0..m.n_cols() {
            let mut values: Vec<f64> = (0..n).map(|i| m.row(i)[f]).collect();
            values.sort_by(f64::total_cmp);
            values.dedup();
            for &t in values.iter().take(values.len().saturating_sub(1)) {
                let (l, r): (Vec<usize>, Vec<usize>) =
                    all.iter().partition(|&&i| m.row(i)[f] <= t);
                if l.len() < min_leaf || r.len() < min_leaf {
                    continue;
                }
                let gain = parent - sse(&l) - sse(&r);
                let better = match best {
                    None => gain > 1e-12,
                    Some((_, _, g)) => gain > g,
                };
                if better {
                    best = Some((f, t, gain));
                }
            }
        }
        best
    }

    #[test]
    fn split_matches_brute_force_oracle() {
        let m = matrix(&[
            &[1.0, 5.0],
            &[2.0, 4.0],
            &[3.0, 9.0],
            &[4.0, 1.0],
            &[5.0, 2.0],
            &[6.0, 8.0],
        ]);
        let residuals = [0.2, 0.3, -0.5, 0.9, 1.0, -0.4];
        let found = best_split(&m, &[0, 1, 2, 3, 4, 5], &residuals, 1, false).unwrap();
        let (of, ot, og) = brute_force_best(&m, &residuals, 1).unwrap();
        assert_eq!(found.feature, of);
        assert_eq!(found.threshold, ot);
        assert!((found.gain - og).abs() < 1e-9);
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let rows: Vec<Vec<f64>> = (0..64)
            .map(|i| {
                vec![
                    (i % 7) as f64,
                    ((i * 13) % 11) as f64 / 3.0,
                    ((i * 29) % 17) as f64,
                ]
            })
            .collect();
        let refs: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
        let m = matrix(&refs);
        let residuals: Vec<f64> = (0..64).map(|i| ((i * 31) % 13) as f64 - 6.0).collect();
        let hessians = vec![0.25; 64];
        let idx: Vec<usize> = (0..64).collect();
        let params = TreeParams {
            max_depth: 3,
            min_samples_leaf: 4,
        };
        let seq = fit_regression_tree(&m, &idx, &residuals, &hessians, &params, false);
        let par = fit_regression_tree(&m, &idx, &residuals, &hessians, &params, true);
        assert_eq!(seq, par);
        assert!(seq.depth() <= 3);
    }

    #[test]
    fn min_leaf_blocks_splits() {
        let m = matrix(&[&[0.0], &[1.0], &[2.0], &[3.0]]);
        let residuals = [1.0, -1.0, 1.0, -1.0];
        let hessians = [0.25; 4];
        let params = TreeParams {
            max_depth: 3,
            min_samples_leaf: 4,
        };
        let tree = fit_regression_tree(&m, &[0, 1, 2, 3], &residuals, &hessians, &params, false);
        assert!(matches!(tree, TreeNode::Leaf { .. }));
    }

    #[test]
    fn constant_feature_yields_leaf() {
        let m = matrix(&[&[2.0], &[2.0], &[2.0], &[2.0]]);
        let residuals = [1.0, -1.0, 0.5, -0.5];
        let hessians = [0.25; 4];
        let params = TreeParams {
            max_depth: 3,
            min_samples_leaf: 1,
        };
        let tree = fit_regression_tree(&m, &[0, 1, 2, 3], &residuals, &hessians, &params, false);
        assert!(matches!(tree, TreeNode::Leaf { .. }));
    }

    #[test]
    fn leaf_is_newton_step_with_floor() {
        let residuals = [0.5, 0.3];
        let hessians = [0.2, 0.05];
        let v = leaf_value(&[0, 1], &residuals, &hessians);
        assert!((v - 0.8 / 0.25).abs() < 1e-15);
        // Floored denominator on a vanishing hessian.
        let v = leaf_value(&[0], &[1.0], &[0.0]);
        assert_eq!(v, 1.0 / LEAF_DENOMINATOR_FLOOR);
    }

    #[test]
    fn routing_respects_threshold_boundary() {
        let tree = TreeNode::Split {
            feature: 0,
            threshold: 1.5,
            left: Box::new(TreeNode::Leaf { value: -1.0 }),
            right: Box::new(TreeNode::Leaf { value: 1.0 }),
        };
        assert_eq!(tree.route(&[1.5]), -1.0);
        assert_eq!(tree.route(&[1.5000001]), 1.0);
    }
}
