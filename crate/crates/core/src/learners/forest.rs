//! Random forest of variance-reduction regression trees.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::data::Matrix;
use crate::rng::{derive_seed, seeded_rng, SeedRng};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForestParams {
    pub tree_count: usize,
    /// Features tried per split; `None` means `ceil(sqrt(d))`.
    pub mtry: Option<usize>,
    /// Minimum number of (bootstrap) rows in each child of a split.
    pub min_leaf: usize,
    pub max_depth: Option<usize>,
    /// Resample each tree's rows with replacement.
    pub bootstrap: bool,
}

impl Default for ForestParams {
    fn default() -> Self {
        Self {
            tree_count: 500,
            mtry: None,
            min_leaf: 5,
            max_depth: None,
            bootstrap: true,
        }
    }
}

impl ForestParams {
    pub fn validate(&self) -> Result<()> {
        if self.tree_count < 1 {
            return Err(Error::InvalidArgument("forest needs tree_count >= 1".into()));
        }
        if self.min_leaf < 1 {
            return Err(Error::InvalidArgument("forest needs min_leaf >= 1".into()));
        }
        if self.mtry == Some(0) {
            return Err(Error::InvalidArgument("forest needs mtry >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Node {
    Leaf(f64),
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
struct Tree {
    nodes: Vec<Node>,
}

impl Tree {
    fn predict(&self, x: &[f64]) -> f64 {
        let mut at = 0;
        loop {
            match self.nodes[at] {
                Node::Leaf(v) => return v,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => at = if x[feature] <= threshold { left } else { right },
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Forest {
    trees: Vec<Tree>,
}

impl Forest {
    pub(super) fn fit(params: &ForestParams, x: &Matrix, target: &[f64], seed: u64) -> Self {
        let d = x.cols();
        let mtry = params
            .mtry
            .unwrap_or_else(|| (d as f64).sqrt().ceil() as usize)
            .clamp(1, d);
        let trees = (0..params.tree_count)
            .map(|t| {
                let mut rng = seeded_rng(derive_seed(seed, t as u64));
                let n = x.rows();
                let mut rows: Vec<usize> = if params.bootstrap {
                    (0..n).map(|_| rng.random_range(0..n)).collect()
                } else {
                    (0..n).collect()
                };
                let mut builder = TreeBuilder {
                    x,
                    target,
                    params,
                    mtry,
                    rng: &mut rng,
                    nodes: Vec::new(),
                    scratch: Vec::with_capacity(n),
                    features: (0..d).collect(),
                };
                builder.build(&mut rows, 0);
                Tree {
                    nodes: builder.nodes,
                }
            })
            .collect();
        Forest { trees }
    }

    pub(super) fn predict(&self, x: &[f64]) -> f64 {
        self.trees.iter().map(|t| t.predict(x)).sum::<f64>() / self.trees.len() as f64
    }
}

struct TreeBuilder<'a> {
    x: &'a Matrix,
    target: &'a [f64],
    params: &'a ForestParams,
    mtry: usize,
    rng: &'a mut SeedRng,
    nodes: Vec<Node>,
    scratch: Vec<(f64, f64)>,
    features: Vec<usize>,
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    gain: f64,
}

impl TreeBuilder<'_> {
    /// Builds the subtree over `rows` and returns its node index.
    fn build(&mut self, rows: &mut [usize], depth: usize) -> usize {
        let id = self.nodes.len();
        let n = rows.len();
        let sum: f64 = rows.iter().map(|&i| self.target[i]).sum();
        let leaf_value = sum / n as f64;
        self.nodes.push(Node::Leaf(leaf_value));

        let depth_capped = self.params.max_depth.is_some_and(|cap| depth >= cap);
        if depth_capped || n < 2 * self.params.min_leaf {
            return id;
        }
        let first = self.target[rows[0]];
        if rows.iter().all(|&i| self.target[i] == first) {
            return id;
        }

        let Some(best) = self.best_split(rows, sum) else {
            return id;
        };

        // stable partition: left rows first
        let mut split = 0;
        for k in 0..n {
            if self.x.get(rows[k], best.feature) <= best.threshold {
                rows.swap(split, k);
                split += 1;
            }
        }
        let (left_rows, right_rows) = rows.split_at_mut(split);
        let left = self.build(left_rows, depth + 1);
        let right = self.build(right_rows, depth + 1);
        self.nodes[id] = Node::Split {
            feature: best.feature,
            threshold: best.threshold,
            left,
            right,
        };
        id
    }

    fn best_split(&mut self, rows: &[usize], total: f64) -> Option<BestSplit> {
        let d = self.features.len();
        for i in 0..self.mtry {
            let j = self.rng.random_range(i..d);
            self.features.swap(i, j);
        }
        let mut candidates = self.features[..self.mtry].to_vec();
        // ties resolve to the lowest feature index, then the lowest threshold
        candidates.sort_unstable();

        let n = rows.len();
        let min_leaf = self.params.min_leaf;
        let base = total * total / n as f64;
        let mut best: Option<BestSplit> = None;
        for &f in &candidates {
            self.scratch.clear();
            self.scratch
                .extend(rows.iter().map(|&i| (self.x.get(i, f), self.target[i])));
            self.scratch.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut left_sum = 0.0;
            for k in 1..n {
                left_sum += self.scratch[k - 1].1;
                if k < min_leaf || n - k < min_leaf {
                    continue;
                }
                let (lo, hi) = (self.scratch[k - 1].0, self.scratch[k].0);
                if lo >= hi {
                    continue;
                }
                let right_sum = total - left_sum;
                let gain = left_sum * left_sum / k as f64
                    + right_sum * right_sum / (n - k) as f64
                    - base;
                if gain > best.as_ref().map_or(1e-12, |b| b.gain) {
                    let mut threshold = 0.5 * (lo + hi);
                    if threshold >= hi {
                        threshold = lo;
                    }
                    best = Some(BestSplit {
                        feature: f,
                        threshold,
                        gain,
                    });
                }
            }
        }
        best
    }
}
