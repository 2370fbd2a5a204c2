//! CART regression trees with variance-reduction splits.

use crate::error::{Error, Result};
use crate::numerics::Rng;

/// Flat-arena tree node.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum Node {
    Leaf { value: f64 },
    Split { feature: usize, threshold: f64, left: usize, right: usize },
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DecisionTree {
    pub nodes: Vec<Node>,
    pub n_features: usize,
    pub max_depth: Option<usize>,
    pub min_leaf: usize,
}

/// Best split of one feature: `(sse_after, threshold)`.
///
/// Thresholds are midpoints between consecutive distinct sorted values;
/// rows with `x <= threshold` go left. Both sides must keep `min_leaf` rows.
fn best_split_on_feature(
    xs: &[Vec<f64>],
    ys: &[f64],
    rows: &[usize],
    feature: usize,
    min_leaf: usize,
) -> Option<(f64, f64)> {
    let mut order: Vec<usize> = rows.to_vec();
    order.sort_by(|&a, &b| {
        xs[a][feature]
            .partial_cmp(&xs[b][feature])
            .unwrap()
            .then(a.cmp(&b))
    });
    let n = order.len();

    // Prefix sums over the sorted order for O(1) SSE of each cut.
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let prefix: Vec<(f64, f64)> = order
        .iter()
        .map(|&i| {
            sum += ys[i];
            sum_sq += ys[i] * ys[i];
            (sum, sum_sq)
        })
        .collect();
    let (total, total_sq) = prefix[n - 1];

    let mut best: Option<(f64, f64)> = None;
    for cut in min_leaf..=(n - min_leaf) {
        if cut == n {
            break;
        }
        let lo = xs[order[cut - 1]][feature];
        let hi = xs[order[cut]][feature];
        if lo == hi {
            continue;
        }
        let (ls, lsq) = prefix[cut - 1];
        let rs = total - ls;
        let rsq = total_sq - lsq;
        let nl = cut as f64;
        let nr = (n - cut) as f64;
        let sse = (lsq - ls * ls / nl) + (rsq - rs * rs / nr);
        let threshold = (lo + hi) / 2.0;
        match best {
            Some((bs, _)) if sse >= bs => {}
            _ => best = Some((sse, threshold)),
        }
    }
    best
}

fn mean(ys: &[f64], rows: &[usize]) -> f64 {
    rows.iter().map(|&i| ys[i]).sum::<f64>() / rows.len() as f64
}

impl DecisionTree {
    /// Fit a CART on the given rows. When `feature_subset_size` is below
    /// the feature count, each split draws that many distinct candidate
    /// features from `rng`; with the full size no randomness is consumed,
    /// so a full-feature tree is bit-identical to the deterministic CART.
    pub fn fit(
        xs: &[Vec<f64>],
        ys: &[f64],
        rows: &[usize],
        max_depth: Option<usize>,
        min_leaf: usize,
        feature_subset_size: usize,
        rng: &mut Rng,
    ) -> Result<DecisionTree> {
        if rows.is_empty() {
            return Err(Error::degenerate("tree needs at least one row"));
        }
        if min_leaf == 0 {
            return Err(Error::invalid("min_leaf must be at least 1"));
        }
        let n_features = xs[0].len();
        if feature_subset_size == 0 || feature_subset_size > n_features {
            return Err(Error::invalid(format!(
                "feature subset size must lie in 1..={n_features}"
            )));
        }
        let mut tree = DecisionTree { nodes: Vec::new(), n_features, max_depth, min_leaf };
        tree.grow(xs, ys, rows, 0, feature_subset_size, rng);
        Ok(tree)
    }

    fn grow(
        &mut self,
        xs: &[Vec<f64>],
        ys: &[f64],
        rows: &[usize],
        depth: usize,
        m: usize,
        rng: &mut Rng,
    ) -> usize {
        let node_mean = mean(ys, rows);
        let node_sse: f64 = rows.iter().map(|&i| (ys[i] - node_mean) * (ys[i] - node_mean)).sum();
        // Purity is judged relative to the target magnitude so constant
        // targets stop splitting despite summation crumbs.
        let scale: f64 = rows.iter().map(|&i| ys[i] * ys[i]).sum::<f64>().max(1e-300);
        let pure = node_sse <= f64::EPSILON * scale;
        let depth_capped = self.max_depth.is_some_and(|d| depth >= d);
        if depth_capped || rows.len() < 2 * self.min_leaf || pure {
            self.nodes.push(Node::Leaf { value: node_mean });
            return self.nodes.len() - 1;
        }

        // Candidate features: all of them, or a drawn subset of size m.
        let candidates: Vec<usize> = if m == self.n_features {
            (0..self.n_features).collect()
        } else {
            let mut pool: Vec<usize> = (0..self.n_features).collect();
            for i in 0..m {
                let j = i + rng.next_index(pool.len() - i);
                pool.swap(i, j);
            }
            let mut chosen = pool[..m].to_vec();
            chosen.sort_unstable();
            chosen
        };

        let mut best: Option<(f64, usize, f64)> = None;
        for &f in &candidates {
            if let Some((sse, threshold)) = best_split_on_feature(xs, ys, rows, f, self.min_leaf) {
                match best {
                    Some((bs, _, _)) if sse >= bs => {}
                    _ => best = Some((sse, f, threshold)),
                }
            }
        }

        // A split must strictly reduce the SSE; ties collapse to a leaf.
        let Some((split_sse, feature, threshold)) = best else {
            self.nodes.push(Node::Leaf { value: node_mean });
            return self.nodes.len() - 1;
        };
        if split_sse >= node_sse {
            self.nodes.push(Node::Leaf { value: node_mean });
            return self.nodes.len() - 1;
        }

        let (left_rows, right_rows): (Vec<usize>, Vec<usize>) =
            rows.iter().partition(|&&i| xs[i][feature] <= threshold);

        // Reserve the split slot before growing children.
        self.nodes.push(Node::Leaf { value: node_mean });
        let slot = self.nodes.len() - 1;
        let left = self.grow(xs, ys, &left_rows, depth + 1, m, rng);
        let right = self.grow(xs, ys, &right_rows, depth + 1, m, rng);
        self.nodes[slot] = Node::Split { feature, threshold, left, right };
        slot
    }

    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n_features {
            return Err(Error::invalid(format!(
                "expected {} features, got {}",
                self.n_features,
                x.len()
            )));
        }
        // The root always occupies slot 0: grow() reserves it before
        // recursing into children.
        let mut idx = 0;
        loop {
            match &self.nodes[idx] {
                Node::Leaf { value } => return Ok(*value),
                Node::Split { feature, threshold, left, right } => {
                    idx = if x[*feature] <= *threshold { *left } else { *right };
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RngStream;

    fn full_rng() -> Rng {
        RngStream::new(0).child("tree-test").rng()
    }

    fn fit_plain(xs: &[Vec<f64>], ys: &[f64], max_depth: Option<usize>, min_leaf: usize) -> DecisionTree {
        let rows: Vec<usize> = (0..xs.len()).collect();
        let m = xs[0].len();
        DecisionTree::fit(xs, ys, &rows, max_depth, min_leaf, m, &mut full_rng()).unwrap()
    }

    #[test]
    fn constant_targets_give_single_leaf() {
        let xs: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64]).collect();
        let ys = vec![4.2; 10];
        let tree = fit_plain(&xs, &ys, None, 1);
        assert_eq!(tree.nodes.len(), 1);
        assert!((tree.predict(&[3.0]).unwrap() - 4.2).abs() < 1e-12);
    }

    #[test]
    fn step_function_split_lands_between_four_and_five() {
        let xs: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64]).collect();
        let ys: Vec<f64> = (0..10).map(|i| if i < 5 { 0.0 } else { 1.0 }).collect();
        let tree = fit_plain(&xs, &ys, Some(1), 1);
        match &tree.nodes[0] {
            Node::Split { threshold, .. } => {
                assert!(*threshold > 4.0 && *threshold <= 5.0, "threshold {threshold}");
            }
            other => panic!("expected a split, got {other:?}"),
        }
        for i in 0..10 {
            let want = if i < 5 { 0.0 } else { 1.0 };
            assert_eq!(tree.predict(&[i as f64]).unwrap(), want);
        }
    }

    #[test]
    fn brute_force_best_split_oracle() {
        // Compare the chosen root split against exhaustive enumeration.
        let mut rng = RngStream::new(3).child("split-oracle").rng();
        let n = 40;
        let xs: Vec<Vec<f64>> = (0..n).map(|_| vec![rng.next_normal(), rng.next_normal()]).collect();
        let ys: Vec<f64> = xs.iter().map(|x| x[0].signum() + 0.3 * x[1] + 0.1 * rng.next_normal()).collect();
        let tree = fit_plain(&xs, &ys, Some(1), 1);
        let Node::Split { feature, threshold, .. } = &tree.nodes[0] else {
            panic!("expected split");
        };

        let sse_of = |f: usize, th: f64| -> f64 {
            let (mut ls, mut ln, mut rs, mut rn) = (0.0, 0usize, 0.0, 0usize);
            for (x, &y) in xs.iter().zip(&ys) {
                if x[f] <= th {
                    ls += y;
                    ln += 1;
                } else {
                    rs += y;
                    rn += 1;
                }
            }
            let (lm, rm) = (ls / ln as f64, rs / rn as f64);
            xs.iter()
                .zip(&ys)
                .map(|(x, &y)| {
                    let m = if x[f] <= th { lm } else { rm };
                    (y - m) * (y - m)
                })
                .sum()
        };
        let got = sse_of(*feature, *threshold);
        for f in 0..2 {
            let mut vals: Vec<f64> = xs.iter().map(|x| x[f]).collect();
            vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for w in vals.windows(2) {
                if w[0] == w[1] {
                    continue;
                }
                let th = (w[0] + w[1]) / 2.0;
                assert!(got <= sse_of(f, th) + 1e-9, "beaten by feature {f} at {th}");
            }
        }
    }

    #[test]
    fn depth_zero_is_global_mean_stump() {
        let xs: Vec<Vec<f64>> = (0..6).map(|i| vec![i as f64]).collect();
        let ys = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let tree = fit_plain(&xs, &ys, Some(0), 1);
        assert_eq!(tree.nodes.len(), 1);
        assert_eq!(tree.predict(&[100.0]).unwrap(), 3.5);
    }

    #[test]
    fn min_leaf_is_respected() {
        let xs: Vec<Vec<f64>> = (0..8).map(|i| vec![i as f64]).collect();
        let ys: Vec<f64> = (0..8).map(|i| i as f64).collect();
        let tree = fit_plain(&xs, &ys, None, 3);
        // Count rows reaching each leaf.
        for i in 0..8 {
            tree.predict(&[i as f64]).unwrap();
        }
        fn count(tree: &DecisionTree, node: usize, xs: &[Vec<f64>], idxs: &[usize]) -> Vec<usize> {
            match &tree.nodes[node] {
                Node::Leaf { .. } => vec![idxs.len()],
                Node::Split { feature, threshold, left, right } => {
                    let (l, r): (Vec<usize>, Vec<usize>) =
                        idxs.iter().partition(|&&i| xs[i][*feature] <= *threshold);
                    let mut out = count(tree, *left, xs, &l);
                    out.extend(count(tree, *right, xs, &r));
                    out
                }
            }
        }
        let sizes = count(&tree, 0, &xs, &(0..8).collect::<Vec<_>>());
        assert!(sizes.iter().all(|&s| s >= 3), "leaf sizes {sizes:?}");
    }

    #[test]
    fn width_mismatch_is_an_error() {
        let xs: Vec<Vec<f64>> = (0..4).map(|i| vec![i as f64, 0.0]).collect();
        let ys = vec![0.0, 1.0, 2.0, 3.0];
        let tree = fit_plain(&xs, &ys, None, 1);
        assert!(tree.predict(&[1.0]).is_err());
    }
}
