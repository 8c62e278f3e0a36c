//! Exact one-dimensional k-means.
//!
//! In one dimension every optimal clustering is a partition of the sorted
//! values into contiguous runs, so the minimum within-cluster sum of squared
//! deviations can be found by dynamic programming over split points instead
//! of Lloyd iterations. Equal values are never split across clusters.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KMeansError {
    #[error("cannot cluster an empty list")]
    EmptyInput,
    #[error("cluster count must be at least 1")]
    ZeroClusters,
    #[error("values must be finite")]
    NonFinite,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cluster {
    pub center: f64,
    pub values: Vec<f64>,
}

impl Cluster {
    fn from_values(values: Vec<f64>) -> Self {
        let center = values.iter().sum::<f64>() / values.len() as f64;
        Self { center, values }
    }

    pub fn sse(&self) -> f64 {
        self.values.iter().map(|v| (v - self.center).powi(2)).sum()
    }

    pub fn contains(&self, v: f64) -> bool {
        self.values.contains(&v)
    }
}

/// Total within-cluster sum of squared deviations.
pub fn total_sse(clusters: &[Cluster]) -> f64 {
    clusters.iter().map(Cluster::sse).sum()
}

/// Partitions `values` into at most `k` clusters, ascending by center.
///
/// When there are fewer distinct values than `k`, each distinct value becomes
/// its own cluster. Among partitions with equal cost the one with the smaller
/// top (highest-valued) cluster wins, applied from the top down.
pub fn kmeans_1d(values: &[f64], k: usize) -> Result<Vec<Cluster>, KMeansError> {
    if values.is_empty() {
        return Err(KMeansError::EmptyInput);
    }
    if k == 0 {
        return Err(KMeansError::ZeroClusters);
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(KMeansError::NonFinite);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);

    // runs of equal values: (value, count)
    let mut runs: Vec<(f64, usize)> = Vec::new();
    for v in &sorted {
        match runs.last_mut() {
            Some((rv, n)) if *rv == *v => *n += 1,
            _ => runs.push((*v, 1)),
        }
    }
    let m = runs.len();
    if m <= k {
        return Ok(runs
            .iter()
            .map(|&(v, n)| Cluster {
                center: v,
                values: vec![v; n],
            })
            .collect());
    }

    // prefix sums over runs, centered for numerical stability
    let shift = sorted.iter().sum::<f64>() / sorted.len() as f64;
    let mut cnt = vec![0.0; m + 1];
    let mut sum = vec![0.0; m + 1];
    let mut sq = vec![0.0; m + 1];
    for (i, &(v, n)) in runs.iter().enumerate() {
        let d = v - shift;
        let n = n as f64;
        cnt[i + 1] = cnt[i] + n;
        sum[i + 1] = sum[i] + n * d;
        sq[i + 1] = sq[i] + n * d * d;
    }
    // cost of runs[i..j]
    let cost = |i: usize, j: usize| -> f64 {
        let n = cnt[j] - cnt[i];
        let s = sum[j] - sum[i];
        (sq[j] - sq[i] - s * s / n).max(0.0)
    };

    // best[c][j]: min cost of covering runs[..j] with c+1 clusters
    let mut best = vec![vec![f64::INFINITY; m + 1]; k];
    let mut start = vec![vec![0usize; m + 1]; k];
    for (j, b) in best[0].iter_mut().enumerate().skip(1) {
        *b = cost(0, j);
    }
    for c in 1..k {
        for j in (c + 1)..=m {
            let mut best_cost = f64::INFINITY;
            let mut best_start = c;
            // highest start first: ties keep the smaller last cluster
            for i in (c..j).rev() {
                let total = best[c - 1][i] + cost(i, j);
                if total < best_cost - tie_eps(best_cost) {
                    best_cost = total;
                    best_start = i;
                }
            }
            best[c][j] = best_cost;
            start[c][j] = best_start;
        }
    }

    let mut bounds = Vec::with_capacity(k);
    let mut j = m;
    for c in (0..k).rev() {
        let i = if c == 0 { 0 } else { start[c][j] };
        bounds.push((i, j));
        j = i;
    }
    bounds.reverse();

    Ok(bounds
        .into_iter()
        .map(|(i, j)| {
            let vals = runs[i..j]
                .iter()
                .flat_map(|&(v, n)| std::iter::repeat_n(v, n))
                .collect();
            Cluster::from_values(vals)
        })
        .collect())
}

fn tie_eps(reference: f64) -> f64 {
    if reference.is_finite() {
        1e-12 * reference.abs().max(1.0)
    } else {
        0.0
    }
}
