//! Small graphs with known flows, and the bundled benchmark networks.

use crate::graph::{Graph, WeightVector};
use crate::io::{parse_edge_list, parse_labels, Dataset};

const BRIDGED_TRIANGLES_EDGES: &str = include_str!("../data/bridged_triangles.edges");
const KARATE_EDGES: &str = include_str!("../data/karate.edges");
const KARATE_LABELS: &str = include_str!("../data/karate.labels");

/// Two unit-weight triangles `x1 x2 x3` and `x4 x5 x6` joined by `x3 x4`.
pub fn bridged_triangles() -> (Graph, WeightVector) {
    Graph::from_records(parse_edge_list(BRIDGED_TRIANGLES_EDGES).expect("bundled fixture parses"))
        .expect("bundled fixture is a simple graph")
}

/// A single edge `0 1` of weight `w0`.
pub fn segment(w0: f64) -> (Graph, WeightVector) {
    uniform(2, &[(0, 1)], w0)
}

/// Triangle `0 1 2` with every weight `w0`.
pub fn triangle(w0: f64) -> (Graph, WeightVector) {
    uniform(3, &[(0, 1), (1, 2), (0, 2)], w0)
}

/// Cycle on `n >= 3` vertices with every weight `w0`.
pub fn cycle(n: usize, w0: f64) -> (Graph, WeightVector) {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    uniform(n, &edges, w0)
}

fn uniform(n: usize, edges: &[(usize, usize)], w0: f64) -> (Graph, WeightVector) {
    let g = Graph::from_index_edges(n, edges).expect("fixture is a simple graph");
    let w = WeightVector::new(vec![w0; edges.len()]).expect("fixture weight is positive");
    (g, w)
}

/// Zachary's karate club with the two-faction ground truth.
pub fn karate() -> Dataset {
    let (graph, initial_weights) =
        Graph::from_records(parse_edge_list(KARATE_EDGES).expect("bundled fixture parses"))
            .expect("bundled fixture is a simple graph");
    let truth = parse_labels(&graph, KARATE_LABELS).expect("bundled labels cover the graph");
    Dataset {
        name: "karate".into(),
        graph,
        initial_weights,
        ground_truth: Some(truth),
    }
}
