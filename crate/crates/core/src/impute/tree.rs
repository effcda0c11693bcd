//! CART classification trees with Gini impurity and axis-aligned splits.

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    /// Features considered per split; `None` means all of them.
    pub max_features: Option<usize>,
    pub min_leaf: usize,
    pub max_depth: Option<usize>,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams { max_features: None, min_leaf: 1, max_depth: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Node {
    Leaf { class: usize },
    /// `x[feature] <= threshold` goes left.
    Split { feature: usize, threshold: f64, left: usize, right: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub nodes: Vec<Node>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Split {
    pub feature: usize,
    pub threshold: f64,
    /// Size-weighted mean Gini impurity of the two children.
    pub impurity: f64,
}

pub fn gini(counts: &[usize], n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    1.0 - counts.iter().map(|&c| (c as f64 / n).powi(2)).sum::<f64>()
}

fn majority(counts: &[usize]) -> usize {
    let mut best = 0;
    for (k, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = k;
        }
    }
    best
}

fn midpoint(a: f64, b: f64) -> f64 {
    let m = a + (b - a) / 2.0;
    if m < b {
        m
    } else {
        a
    }
}

/// Lowest-impurity split of `rows` over `features`, with both children
/// holding at least `min_leaf` rows. Candidate thresholds lie midway
/// between consecutive distinct values. Ties keep the earliest candidate.
pub fn best_split(
    x: &[Vec<f64>],
    y: &[usize],
    n_classes: usize,
    rows: &[usize],
    features: &[usize],
    min_leaf: usize,
) -> Option<Split> {
    let n = rows.len();
    let min_leaf = min_leaf.max(1);
    if n < 2 * min_leaf {
        return None;
    }
    let mut total = vec![0usize; n_classes];
    for &i in rows {
        total[y[i]] += 1;
    }
    let mut order = rows.to_vec();
    let mut best: Option<Split> = None;
    let mut left = vec![0usize; n_classes];
    let mut right = vec![0usize; n_classes];
    for &f in features {
        order.sort_by(|&a, &b| x[a][f].total_cmp(&x[b][f]));
        left.iter_mut().for_each(|c| *c = 0);
        right.copy_from_slice(&total);
        for k in 0..n - 1 {
            let c = y[order[k]];
            left[c] += 1;
            right[c] -= 1;
            let nl = k + 1;
            let nr = n - nl;
            let (a, b) = (x[order[k]][f], x[order[k + 1]][f]);
            if nl < min_leaf || nr < min_leaf || a >= b {
                continue;
            }
            let imp = (nl as f64 * gini(&left, nl) + nr as f64 * gini(&right, nr)) / n as f64;
            if best.map_or(true, |s| imp < s.impurity) {
                best = Some(Split { feature: f, threshold: midpoint(a, b), impurity: imp });
            }
        }
    }
    best
}

impl DecisionTree {
    /// Grows a tree on `rows` (which may repeat, as in a bootstrap sample).
    pub fn fit<R: Rng>(
        x: &[Vec<f64>],
        y: &[usize],
        n_classes: usize,
        rows: &[usize],
        params: &TreeParams,
        rng: &mut R,
    ) -> DecisionTree {
        let d = x.first().map_or(0, Vec::len);
        let m = params.max_features.unwrap_or(d).clamp(1, d.max(1));
        let mut nodes = Vec::new();
        // (node slot, rows, depth)
        let mut stack = vec![(0usize, rows.to_vec(), 0usize)];
        nodes.push(Node::Leaf { class: 0 });
        while let Some((slot, members, depth)) = stack.pop() {
            let mut counts = vec![0usize; n_classes];
            for &i in &members {
                counts[y[i]] += 1;
            }
            let class = majority(&counts);
            let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
            let depth_capped = params.max_depth.is_some_and(|md| depth >= md);
            if pure || depth_capped || d == 0 {
                nodes[slot] = Node::Leaf { class };
                continue;
            }
            let features: Vec<usize> = if m >= d { (0..d).collect() } else { sample(rng, d, m).into_vec() };
            let Some(split) = best_split(x, y, n_classes, &members, &features, params.min_leaf) else {
                nodes[slot] = Node::Leaf { class };
                continue;
            };
            let (l, r): (Vec<usize>, Vec<usize>) =
                members.iter().partition(|&&i| x[i][split.feature] <= split.threshold);
            let li = nodes.len();
            nodes.push(Node::Leaf { class });
            nodes.push(Node::Leaf { class });
            nodes[slot] = Node::Split { feature: split.feature, threshold: split.threshold, left: li, right: li + 1 };
            stack.push((li + 1, r, depth + 1));
            stack.push((li, l, depth + 1));
        }
        DecisionTree { nodes }
    }

    pub fn predict(&self, row: &[f64]) -> usize {
        let mut k = 0;
        loop {
            match self.nodes[k] {
                Node::Leaf { class } => return class,
                Node::Split { feature, threshold, left, right } => {
                    k = if row[feature] <= threshold { left } else { right };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn go(t: &DecisionTree, k: usize) -> usize {
            match t.nodes[k] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + go(t, left).max(go(t, right)),
            }
        }
        go(self, 0)
    }
}
