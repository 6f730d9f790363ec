use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, StreamRng};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExtraTreesParams {
    pub n_trees: usize,
    pub max_depth: usize,
    pub min_leaf: usize,
    /// Features tried per split; `None` means `ceil(sqrt(d))`.
    pub max_features: Option<usize>,
}

impl Default for ExtraTreesParams {
    fn default() -> Self {
        ExtraTreesParams {
            n_trees: 100,
            max_depth: 12,
            min_leaf: 2,
            max_features: None,
        }
    }
}

#[derive(Debug, Clone)]
enum Node {
    Leaf(f64),
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone)]
struct Tree {
    nodes: Vec<Node>,
}

impl Tree {
    fn proba(&self, x: &[f64]) -> f64 {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                Node::Leaf(p) => return p,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => i = if x[feature] < threshold { left } else { right },
            }
        }
    }
}

/// Mean of per-tree leaf frequencies of class 1.
#[derive(Debug, Clone)]
pub(crate) struct Forest {
    trees: Vec<Tree>,
}

impl Forest {
    pub fn proba(&self, x: &[f64]) -> f64 {
        self.trees.iter().map(|t| t.proba(x)).sum::<f64>() / self.trees.len() as f64
    }
}

fn gini(pos: usize, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let p = pos as f64 / n as f64;
    2.0 * p * (1.0 - p)
}

struct Builder<'a> {
    xs: &'a [&'a [f64]],
    ys: &'a [u8],
    params: &'a ExtraTreesParams,
    max_features: usize,
    nodes: Vec<Node>,
}

impl Builder<'_> {
    fn leaf(&mut self, rows: &[usize]) -> usize {
        let pos = rows.iter().filter(|&&r| self.ys[r] == 1).count();
        self.nodes.push(Node::Leaf(pos as f64 / rows.len() as f64));
        self.nodes.len() - 1
    }

    /// Best of `max_features` random (feature, uniform threshold) candidates
    /// by weighted Gini impurity; `None` when no candidate respects
    /// `min_leaf`.
    fn choose(&self, rows: &[usize], rng: &mut StreamRng) -> Option<(usize, f64)> {
        let d = self.xs[0].len();
        let mut best: Option<(f64, usize, f64)> = None;
        for feature in index::sample(rng, d, self.max_features.min(d)).into_iter() {
            let (lo, hi) = rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &r| {
                let v = self.xs[r][feature];
                (lo.min(v), hi.max(v))
            });
            if lo >= hi {
                continue;
            }
            let threshold = rng.random_range(lo..hi);
            if threshold <= lo {
                continue;
            }
            let (mut n_left, mut pos_left, mut pos) = (0, 0, 0);
            for &r in rows {
                let y = usize::from(self.ys[r] == 1);
                pos += y;
                if self.xs[r][feature] < threshold {
                    n_left += 1;
                    pos_left += y;
                }
            }
            let n_right = rows.len() - n_left;
            if n_left < self.params.min_leaf || n_right < self.params.min_leaf {
                continue;
            }
            let impurity = n_left as f64 * gini(pos_left, n_left) + n_right as f64 * gini(pos - pos_left, n_right);
            if best.is_none_or(|b| impurity < b.0) {
                best = Some((impurity, feature, threshold));
            }
        }
        best.map(|(_, f, t)| (f, t))
    }

    fn grow(&mut self, rows: Vec<usize>, depth: usize, rng: &mut StreamRng) -> usize {
        let pos = rows.iter().filter(|&&r| self.ys[r] == 1).count();
        let pure = pos == 0 || pos == rows.len();
        if pure || depth >= self.params.max_depth || rows.len() < 2 * self.params.min_leaf {
            return self.leaf(&rows);
        }
        let Some((feature, threshold)) = self.choose(&rows, rng) else {
            return self.leaf(&rows);
        };
        let (left_rows, right_rows): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&r| self.xs[r][feature] < threshold);
        let at = self.nodes.len();
        self.nodes.push(Node::Leaf(0.0));
        let left = self.grow(left_rows, depth + 1, rng);
        let right = self.grow(right_rows, depth + 1, rng);
        self.nodes[at] = Node::Split {
            feature,
            threshold,
            left,
            right,
        };
        at
    }
}

pub(crate) fn fit(xs: &[&[f64]], ys: &[u8], params: &ExtraTreesParams, seed: u64) -> Result<Forest> {
    if params.n_trees == 0 || params.min_leaf == 0 || params.max_features == Some(0) {
        return Err(Error::InvalidInput("extra_trees needs n_trees, min_leaf and max_features >= 1".into()));
    }
    let d = xs[0].len();
    let max_features = params.max_features.unwrap_or_else(|| (d as f64).sqrt().ceil() as usize).max(1);
    let trees = (0..params.n_trees)
        .map(|t| {
            let mut rng = rng::stream(seed, &format!("extra_trees/{t}"));
            let mut b = Builder {
                xs,
                ys,
                params,
                max_features,
                nodes: Vec::new(),
            };
            b.grow((0..xs.len()).collect(), 0, &mut rng);
            Tree { nodes: b.nodes }
        })
        .collect();
    Ok(Forest { trees })
}
