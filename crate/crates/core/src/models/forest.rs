//! CART trees with Gini splits and a bagged random forest.

use rand::seq::index::sample;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataio::{LabeledDataset, N_CLASSES};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// `1 - sum_c p_c^2`.
pub fn gini(counts: &[usize; N_CLASSES]) -> f64 {
    let n: usize = counts.iter().sum();
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    1.0 - counts.iter().map(|&c| (c as f64 / n).powi(2)).sum::<f64>()
}

/// Lowest class among those with the most votes.
pub fn mode(votes: &[usize; N_CLASSES]) -> usize {
    let mut best = 0;
    for c in 1..N_CLASSES {
        if votes[c] > votes[best] {
            best = c;
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum TreeNode {
    Leaf {
        class: usize,
    },
    /// Rows with `x[feature] <= threshold` go left.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// Nodes stored flat; index 0 is the root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub nodes: Vec<TreeNode>,
    pub seed: u64,
}

impl DecisionTree {
    pub fn predict_row(&self, x: &[f64]) -> usize {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                TreeNode::Leaf { class } => return class,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => i = if x[feature] <= threshold { left } else { right },
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[TreeNode], i: usize) -> usize {
            match nodes[i] {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => 1 + walk(nodes, left).max(walk(nodes, right)),
            }
        }
        walk(&self.nodes, 0)
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, TreeNode::Leaf { .. })).count()
    }
}

/// Order in which trees are grown. Both produce the same forest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrainingSchedule {
    Sequential,
    #[default]
    Parallel,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ForestParams {
    pub n_trees: usize,
    /// Features tried per split; `None` means `floor(sqrt(n_features))`.
    pub mtry: Option<usize>,
    pub max_depth: Option<usize>,
    pub min_leaf: usize,
    /// Disable to grow each tree on the full training set (diagnostics).
    pub bootstrap: bool,
    pub seed: u64,
    pub schedule: TrainingSchedule,
}

impl Default for ForestParams {
    fn default() -> Self {
        Self {
            n_trees: 100,
            mtry: None,
            max_depth: None,
            min_leaf: 1,
            bootstrap: true,
            seed: 42,
            schedule: TrainingSchedule::Parallel,
        }
    }
}

impl ForestParams {
    pub fn resolved_mtry(&self, n_features: usize) -> usize {
        self.mtry
            .unwrap_or_else(|| ((n_features as f64).sqrt().floor() as usize).max(1))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomForestModel {
    pub trees: Vec<DecisionTree>,
    pub mtry: usize,
    pub n_features: usize,
}

struct Grower<'a> {
    x: &'a Matrix,
    labels: &'a [usize],
    mtry: usize,
    max_depth: Option<usize>,
    min_leaf: usize,
    nodes: Vec<TreeNode>,
}

struct Candidate {
    decrease: f64,
    feature: usize,
    threshold: f64,
}

impl Grower<'_> {
    fn counts(&self, rows: &[usize]) -> [usize; N_CLASSES] {
        let mut c = [0; N_CLASSES];
        for &r in rows {
            c[self.labels[r]] += 1;
        }
        c
    }

    /// Best split on one feature: largest impurity decrease, then lowest threshold.
    fn best_on_feature(&self, rows: &[usize], feature: usize, parent: f64) -> Option<Candidate> {
        let mut sorted: Vec<(f64, usize)> = rows.iter().map(|&r| (self.x.get(r, feature), self.labels[r])).collect();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let n = sorted.len();
        let total = self.counts(rows);
        let mut left = [0usize; N_CLASSES];
        let mut best: Option<Candidate> = None;
        for i in 0..n - 1 {
            left[sorted[i].1] += 1;
            let (v, next) = (sorted[i].0, sorted[i + 1].0);
            if v == next {
                continue;
            }
            let n_left = i + 1;
            if n_left < self.min_leaf || n - n_left < self.min_leaf {
                continue;
            }
            let mut right = total;
            for c in 0..N_CLASSES {
                right[c] -= left[c];
            }
            let w = n_left as f64 / n as f64;
            let decrease = parent - w * gini(&left) - (1.0 - w) * gini(&right);
            let mut threshold = 0.5 * (v + next);
            if threshold >= next {
                threshold = v;
            }
            if best.as_ref().is_none_or(|b| decrease > b.decrease) {
                best = Some(Candidate {
                    decrease,
                    feature,
                    threshold,
                });
            }
        }
        best
    }

    fn best_split(&self, rows: &[usize], features: &[usize], parent: f64) -> Option<Candidate> {
        let mut best: Option<Candidate> = None;
        for &f in features {
            if let Some(c) = self.best_on_feature(rows, f, parent) {
                let better = match &best {
                    None => true,
                    Some(b) => {
                        c.decrease > b.decrease
                            || (c.decrease == b.decrease && (c.feature, c.threshold) < (b.feature, b.threshold))
                    }
                };
                if better {
                    best = Some(c);
                }
            }
        }
        best
    }

    fn grow(&mut self, rows: Vec<usize>, depth: usize, rng: &mut ChaCha8Rng) -> usize {
        let id = self.nodes.len();
        let counts = self.counts(&rows);
        let majority = mode(&counts);
        self.nodes.push(TreeNode::Leaf { class: majority });
        let impurity = gini(&counts);
        let depth_ok = self.max_depth.is_none_or(|d| depth < d);
        if impurity == 0.0 || !depth_ok || rows.len() < 2 * self.min_leaf {
            return id;
        }
        let p = self.x.cols();
        let mut tried: Vec<usize> = sample(rng, p, self.mtry).into_vec();
        tried.sort_unstable();
        let mut split = self.best_split(&rows, &tried, impurity);
        if split.is_none() {
            // the sampled features are constant here; look at the rest
            let rest: Vec<usize> = (0..p).filter(|f| !tried.contains(f)).collect();
            split = self.best_split(&rows, &rest, impurity);
        }
        let Some(split) = split else {
            return id;
        };
        let (l_rows, r_rows): (Vec<usize>, Vec<usize>) = rows
            .iter()
            .partition(|&&r| self.x.get(r, split.feature) <= split.threshold);
        let left = self.grow(l_rows, depth + 1, rng);
        let right = self.grow(r_rows, depth + 1, rng);
        self.nodes[id] = TreeNode::Split {
            feature: split.feature,
            threshold: split.threshold,
            left,
            right,
        };
        id
    }
}

fn grow_tree(x: &Matrix, labels: &[usize], params: &ForestParams, mtry: usize, seed: u64) -> DecisionTree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = x.rows();
    let rows: Vec<usize> = if params.bootstrap {
        (0..n).map(|_| rng.random_range(0..n)).collect()
    } else {
        (0..n).collect()
    };
    let mut grower = Grower {
        x,
        labels,
        mtry,
        max_depth: params.max_depth,
        min_leaf: params.min_leaf,
        nodes: Vec::new(),
    };
    grower.grow(rows, 0, &mut rng);
    DecisionTree {
        nodes: grower.nodes,
        seed,
    }
}

pub fn train_rf(train: &LabeledDataset, params: &ForestParams) -> Result<RandomForestModel> {
    let p = train.n_features();
    let mtry = params.resolved_mtry(p);
    if params.n_trees == 0 || mtry == 0 || mtry > p || params.min_leaf == 0 {
        return Err(Error::InvalidParameter(format!(
            "random forest needs T >= 1, 1 <= mtry <= {p} and min_leaf >= 1 \
             (got T = {}, mtry = {mtry}, min_leaf = {})",
            params.n_trees, params.min_leaf
        )));
    }
    if train.n_samples() == 0 {
        return Err(Error::EmptyInput("training set".into()));
    }
    let mut master = ChaCha8Rng::seed_from_u64(params.seed);
    let seeds: Vec<u64> = (0..params.n_trees).map(|_| master.next_u64()).collect();
    let (x, labels) = (train.features(), train.labels());
    let trees = match params.schedule {
        TrainingSchedule::Sequential => seeds.iter().map(|&s| grow_tree(x, labels, params, mtry, s)).collect(),
        TrainingSchedule::Parallel => seeds
            .par_iter()
            .map(|&s| grow_tree(x, labels, params, mtry, s))
            .collect(),
    };
    Ok(RandomForestModel {
        trees,
        mtry,
        n_features: p,
    })
}

impl RandomForestModel {
    pub fn votes(&self, x: &[f64]) -> [usize; N_CLASSES] {
        let mut v = [0; N_CLASSES];
        for t in &self.trees {
            v[t.predict_row(x)] += 1;
        }
        v
    }

    pub fn predict(&self, features: &Matrix) -> Result<Vec<usize>> {
        if features.cols() != self.n_features {
            return Err(Error::DimensionMismatch {
                expected: self.n_features,
                found: features.cols(),
            });
        }
        Ok((0..features.rows())
            .into_par_iter()
            .map(|r| mode(&self.votes(features.row(r))))
            .collect())
    }
}

pub fn predict_rf(model: &RandomForestModel, features: &Matrix) -> Result<Vec<usize>> {
    model.predict(features)
}
