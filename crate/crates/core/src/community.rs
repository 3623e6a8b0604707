//! Surgery, community extraction and partition quality metrics.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{connected_components, Graph, WeightVector};

/// A labeling of every vertex with a dense community id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    labels: Vec<usize>,
    num_communities: usize,
}

impl Partition {
    pub(crate) fn from_dense(labels: Vec<usize>, num_communities: usize) -> Self {
        debug_assert!(labels.iter().all(|&l| l < num_communities));
        Partition {
            labels,
            num_communities,
        }
    }

    /// Relabels arbitrary ids densely in order of first appearance.
    pub fn from_labels<T: Eq + std::hash::Hash>(raw: &[T]) -> Self {
        let mut ids: HashMap<&T, usize> = HashMap::new();
        let labels = raw
            .iter()
            .map(|l| {
                let next = ids.len();
                *ids.entry(l).or_insert(next)
            })
            .collect();
        Partition {
            labels,
            num_communities: ids.len(),
        }
    }

    pub fn singletons(n: usize) -> Self {
        Partition::from_dense((0..n).collect(), n)
    }

    pub fn single_block(n: usize) -> Self {
        Partition::from_dense(vec![0; n], usize::from(n > 0))
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn num_communities(&self) -> usize {
        self.num_communities
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_communities];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    /// Members of each community, in vertex order.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.num_communities];
        for (v, &l) in self.labels.iter().enumerate() {
            blocks[l].push(v);
        }
        blocks
    }
}

fn same_size(a: &Partition, b: &Partition) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::Mismatch(format!(
            "partitions over {} and {} vertices",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

/// Nonzero cells of the contingency table of two partitions.
fn contingency(a: &Partition, b: &Partition) -> HashMap<(usize, usize), usize> {
    let mut cells = HashMap::new();
    for (&x, &y) in a.labels.iter().zip(&b.labels) {
        *cells.entry((x, y)).or_insert(0) += 1;
    }
    cells
}

fn pairs(k: usize) -> f64 {
    let k = k as f64;
    k * (k - 1.0) / 2.0
}

/// Adjusted Rand index (Hubert & Arabie).
///
/// Two identical trivial partitions (all singletons, or one block) score 1.
pub fn ari(a: &Partition, b: &Partition) -> Result<f64> {
    same_size(a, b)?;
    let index: f64 = contingency(a, b).values().map(|&c| pairs(c)).sum();
    let rows: f64 = a.sizes().into_iter().map(pairs).sum();
    let cols: f64 = b.sizes().into_iter().map(pairs).sum();
    let total = pairs(a.len());
    if total == 0.0 {
        return Ok(1.0);
    }
    let expected = rows * cols / total;
    let max = (rows + cols) / 2.0;
    if max == expected {
        return Ok(1.0);
    }
    Ok((index - expected) / (max - expected))
}

fn entropy(sizes: &[usize], n: f64) -> f64 {
    sizes
        .iter()
        .filter(|&&s| s > 0)
        .map(|&s| {
            let p = s as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Normalized mutual information, `2 I(A;B) / (H(A) + H(B))`, natural logs.
pub fn nmi(a: &Partition, b: &Partition) -> Result<f64> {
    same_size(a, b)?;
    let n = a.len() as f64;
    let sa = a.sizes();
    let sb = b.sizes();
    let h = entropy(&sa, n) + entropy(&sb, n);
    if h == 0.0 {
        return Ok(1.0);
    }
    let mutual: f64 = contingency(a, b)
        .into_iter()
        .map(|((x, y), c)| {
            let c = c as f64;
            c / n * (n * c / (sa[x] as f64 * sb[y] as f64)).ln()
        })
        .sum();
    Ok((2.0 * mutual / h).clamp(0.0, 1.0))
}

/// Newman modularity of `partition` on the unweighted topology of `graph`.
pub fn modularity(graph: &Graph, partition: &Partition) -> Result<f64> {
    modularity_masked(graph, partition, None)
}

/// Modularity on the subgraph keeping edges with a `true` mask entry.
pub fn modularity_masked(
    graph: &Graph,
    partition: &Partition,
    keep: Option<&[bool]>,
) -> Result<f64> {
    if partition.len() != graph.vertex_count() {
        return Err(Error::Mismatch(format!(
            "partition covers {} vertices, graph has {}",
            partition.len(),
            graph.vertex_count()
        )));
    }
    // Counts are integers, so Q = (4m sum e_c - sum d_c^2) / 4m^2 is exact up
    // to the final division for any graph below 2^26 edges.
    let k = partition.num_communities();
    let mut internal = vec![0_u64; k];
    let mut degree = vec![0_u64; k];
    let mut m = 0_u64;
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        if keep.is_some_and(|mask| !mask[e]) {
            continue;
        }
        m += 1;
        let (cu, cv) = (partition.labels[u], partition.labels[v]);
        degree[cu] += 1;
        degree[cv] += 1;
        if cu == cv {
            internal[cu] += 1;
        }
    }
    if m == 0 {
        return Ok(0.0);
    }
    let inside: u128 = internal.iter().map(|&e| e as u128).sum();
    let spread: u128 = degree.iter().map(|&d| (d as u128).pow(2)).sum();
    let m = m as u128;
    let numerator = (4 * m * inside) as f64 - spread as f64;
    Ok(numerator / (4 * m * m) as f64)
}

fn surgery_mask(weights: &WeightVector, cutoff: f64) -> Vec<bool> {
    weights.as_slice().iter().map(|&w| w <= cutoff).collect()
}

/// Removes every edge heavier than `cutoff` and returns the components.
pub fn surgery(graph: &Graph, weights: &WeightVector, cutoff: f64) -> Partition {
    connected_components(graph, &surgery_mask(weights, cutoff))
}

/// Scores of the partition produced by one surgery cutoff.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub cutoff: f64,
    pub num_communities: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ari: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub nmi: Option<f64>,
    pub modularity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub entries: Vec<MetricsReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub best_by_ari: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub best_by_nmi: Option<usize>,
    pub best_by_modularity: Option<usize>,
}

impl SweepReport {
    pub fn best_ari(&self) -> Option<&MetricsReport> {
        self.best_by_ari.map(|i| &self.entries[i])
    }

    pub fn best_nmi(&self) -> Option<&MetricsReport> {
        self.best_by_nmi.map(|i| &self.entries[i])
    }

    pub fn best_modularity(&self) -> Option<&MetricsReport> {
        self.best_by_modularity.map(|i| &self.entries[i])
    }
}

/// Distinct weight values, largest first.
pub fn cutoff_candidates(weights: &WeightVector) -> Vec<f64> {
    let mut cutoffs = weights.as_slice().to_vec();
    cutoffs.sort_by(|a, b| b.total_cmp(a));
    cutoffs.dedup();
    cutoffs
}

/// First index of the maximum; `None` when nothing is scored.
fn argmax(values: impl Iterator<Item = Option<f64>>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.enumerate() {
        if let Some(v) = v {
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((i, v));
            }
        }
    }
    best.map(|(i, _)| i)
}

/// Evaluates surgery at every distinct weight, from the heaviest down.
///
/// Modularity of each candidate is measured on the graph that remains after
/// surgery. ARI and NMI are only filled in when a ground truth is given.
pub fn sweep(
    graph: &Graph,
    weights: &WeightVector,
    ground_truth: Option<&Partition>,
) -> Result<SweepReport> {
    weights.check_against(graph)?;
    if let Some(truth) = ground_truth {
        if truth.len() != graph.vertex_count() {
            return Err(Error::Mismatch(format!(
                "ground truth labels {} vertices, graph has {}",
                truth.len(),
                graph.vertex_count()
            )));
        }
    }
    let entries = cutoff_candidates(weights)
        .into_par_iter()
        .map(|cutoff| {
            let keep = surgery_mask(weights, cutoff);
            let partition = connected_components(graph, &keep);
            let modularity = modularity_masked(graph, &partition, Some(&keep))?;
            let (ari, nmi) = match ground_truth {
                Some(truth) => (Some(ari(&partition, truth)?), Some(nmi(&partition, truth)?)),
                None => (None, None),
            };
            Ok(MetricsReport {
                cutoff,
                num_communities: partition.num_communities(),
                ari,
                nmi,
                modularity,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(SweepReport {
        best_by_ari: argmax(entries.iter().map(|r| r.ari)),
        best_by_nmi: argmax(entries.iter().map(|r| r.nmi)),
        best_by_modularity: argmax(entries.iter().map(|r| Some(r.modularity))),
        entries,
    })
}
