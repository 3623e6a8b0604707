//! Random graph corpora and brute-force oracles shared by the integration
//! tests. Nothing here calls into the walk or metric code it is used to check.

#![allow(dead_code)]

use entropy_flow::{Graph, WeightVector};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Connected graph on `n` vertices: a random spanning tree plus each other
/// pair independently with probability `p`.
pub fn random_connected(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        edges.push((parent, order[i]));
    }
    for u in 0..n {
        for v in (u + 1)..n {
            let present = edges
                .iter()
                .any(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u));
            if !present && rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_index_edges(n, &edges).unwrap()
}

/// Arbitrary simple graph, possibly disconnected.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_index_edges(n, &edges).unwrap()
}

pub fn random_weights(rng: &mut ChaCha8Rng, graph: &Graph, lo: f64, hi: f64) -> WeightVector {
    WeightVector::new(
        (0..graph.edge_count())
            .map(|_| rng.gen_range(lo..=hi))
            .collect(),
    )
    .unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The fixed corpus of connected graphs used by several suites.
pub fn corpus(seed: u64, count: usize, max_n: usize) -> Vec<(Graph, WeightVector)> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(2..=max_n);
            let p = rng.gen_range(0.05..0.6);
            let g = random_connected(&mut rng, n, p);
            let w = random_weights(&mut rng, &g, 0.1, 10.0);
            (g, w)
        })
        .collect()
}

/// Dense weighted adjacency matrix (0 for non-edges).
pub fn adjacency(graph: &Graph, weights: &WeightVector) -> Vec<Vec<f64>> {
    let n = graph.vertex_count();
    let mut a = vec![vec![0.0; n]; n];
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        a[u][v] = weights[e];
        a[v][u] = weights[e];
    }
    a
}

/// Hop distances by Floyd-Warshall; `usize::MAX` when unreachable.
pub fn hop_distances(graph: &Graph) -> Vec<Vec<usize>> {
    let n = graph.vertex_count();
    let inf = usize::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for &(u, v) in graph.edges() {
        d[u][v] = 1;
        d[v][u] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| if x >= inf { usize::MAX } else { x })
                .collect()
        })
        .collect()
}

/// Outward path probability by enumerating every outward path from `x`.
pub fn brute_outward_mass(graph: &Graph, weights: &WeightVector, x: usize) -> Vec<f64> {
    let n = graph.vertex_count();
    let a = adjacency(graph, weights);
    let dist = &hop_distances(graph)[x];
    let mut mass = vec![0.0; n];

    fn walk(a: &[Vec<f64>], dist: &[usize], at: usize, prob: f64, mass: &mut [f64]) {
        mass[at] += prob;
        let next = dist[at] + 1;
        let denom: f64 = (0..a.len())
            .filter(|&u| a[at][u] > 0.0 && dist[u] == next)
            .map(|u| a[at][u])
            .sum();
        for u in 0..a.len() {
            if a[at][u] > 0.0 && dist[u] == next {
                walk(a, dist, u, prob * a[at][u] / denom, mass);
            }
        }
    }

    walk(&a, dist, x, 1.0, &mut mass);
    mass
}

/// Walk distribution straight from the piecewise definition, on top of the
/// brute-force path sum.
pub fn brute_walk(graph: &Graph, weights: &WeightVector, x: usize, alpha: f64) -> Vec<f64> {
    let paths = brute_outward_mass(graph, weights, x);
    let dist = &hop_distances(graph)[x];
    (0..graph.vertex_count())
        .map(|z| {
            if dist[z] == usize::MAX {
                return 0.0;
            }
            let j = dist[z];
            let continues = graph.neighbors(z).iter().any(|&(u, _)| dist[u] == j + 1);
            let lazy = if continues { alpha } else { 1.0 };
            (1.0 - alpha).powi(j as i32) * lazy * paths[z]
        })
        .collect()
}

/// Every set partition of `0..n` as restricted growth strings.
pub fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        let max = prefix.iter().copied().max().map_or(0, |m| m + 1);
        for label in 0..=max {
            prefix.push(label);
            extend(prefix, n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), n, &mut out);
    out
}

/// ARI from explicit pair agreement counts over all vertex pairs.
pub fn brute_ari(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len();
    let (mut both, mut in_a, mut in_b, mut total) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..n {
        for j in (i + 1)..n {
            let sa = a[i] == a[j];
            let sb = b[i] == b[j];
            total += 1.0;
            if sa {
                in_a += 1.0;
            }
            if sb {
                in_b += 1.0;
            }
            if sa && sb {
                both += 1.0;
            }
        }
    }
    if total == 0.0 {
        return 1.0;
    }
    let expected = in_a * in_b / total;
    let max = (in_a + in_b) / 2.0;
    if max == expected {
        return 1.0;
    }
    (both - expected) / (max - expected)
}

/// `(1/2m) sum_{u,v} (A_uv - k_u k_v / 2m) [c_u == c_v]` over all ordered pairs.
pub fn double_sum_modularity(graph: &Graph, labels: &[usize]) -> f64 {
    let n = graph.vertex_count();
    let m = graph.edge_count() as f64;
    if m == 0.0 {
        return 0.0;
    }
    let mut a = vec![vec![0.0; n]; n];
    for &(u, v) in graph.edges() {
        a[u][v] = 1.0;
        a[v][u] = 1.0;
    }
    let k: Vec<f64> = a.iter().map(|row| row.iter().sum()).collect();
    let mut q = 0.0;
    for u in 0..n {
        for v in 0..n {
            if labels[u] == labels[v] {
                q += a[u][v] - k[u] * k[v] / (2.0 * m);
            }
        }
    }
    q / (2.0 * m)
}

/// Component labels by union-find, canonicalized to the lowest member.
pub fn union_find_components(graph: &Graph, keep: &[bool]) -> Vec<usize> {
    let mut uf = petgraph::unionfind::UnionFind::<usize>::new(graph.vertex_count());
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        if keep[e] {
            uf.union(u, v);
        }
    }
    let reps = uf.into_labeling();
    canonical(&reps)
}

/// Relabels so that equal labels stay equal and ids follow first appearance.
pub fn canonical(labels: &[usize]) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    labels
        .iter()
        .map(|l| {
            let next = map.len();
            *map.entry(*l).or_insert(next)
        })
        .collect()
}
