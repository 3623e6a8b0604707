//! Euler runs on graphs whose flow is known in closed form.
//!
//! On a single edge and on an equal-weight triangle the edge entropy does not
//! depend on the weights, so the exact solution is a straight line and the
//! Euler iterates must lie on it.

use serde::Serialize;

use crate::error::Result;
use crate::fixtures;
use crate::flow::{
    closed_form_equal_triangle, closed_form_segment, equal_triangle_entropy, run_flow_scaled,
    segment_entropy, FlowConfig,
};

/// Entropy multiplier used to check that the harness notices a wrong flow.
pub const FAULT_SCALE: f64 = 1.0 + 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Segment,
    Triangle,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleRow {
    pub shape: Shape,
    pub alpha: f64,
    pub w0: f64,
    pub step_size: f64,
    pub steps: usize,
    /// Closed-form growth rate of every weight.
    pub slope: f64,
    /// Largest `|euler - exact|` over all edges and steps.
    pub max_deviation: f64,
}

#[derive(Debug, Clone)]
pub struct OracleGrid {
    pub alphas: Vec<f64>,
    pub w0s: Vec<f64>,
    pub step_sizes: Vec<f64>,
    pub steps: usize,
}

impl Default for OracleGrid {
    fn default() -> Self {
        OracleGrid {
            alphas: (1..=9).map(|i| i as f64 / 10.0).collect(),
            w0s: vec![0.5, 1.0, 2.0],
            step_sizes: vec![0.01, 0.1],
            steps: 100,
        }
    }
}

pub fn run_row(
    shape: Shape,
    config: &FlowConfig,
    w0: f64,
    entropy_scale: f64,
) -> Result<OracleRow> {
    let ((graph, weights), exact, slope): (_, fn(f64, f64, f64) -> f64, _) = match shape {
        Shape::Segment => (
            fixtures::segment(w0),
            closed_form_segment,
            segment_entropy(config.alpha),
        ),
        Shape::Triangle => (
            fixtures::triangle(w0),
            closed_form_equal_triangle,
            equal_triangle_entropy(config.alpha),
        ),
    };
    let trace = run_flow_scaled(&graph, &weights, config, entropy_scale)?;
    let mut max_deviation: f64 = 0.0;
    for (j, snapshot) in trace.weights.iter().enumerate() {
        let target = exact(config.alpha, w0, j as f64 * config.step_size);
        for &w in snapshot.as_slice() {
            max_deviation = max_deviation.max((w - target).abs());
        }
    }
    Ok(OracleRow {
        shape,
        alpha: config.alpha,
        w0,
        step_size: config.step_size,
        steps: config.num_steps,
        slope,
        max_deviation,
    })
}

/// Every (shape, alpha, w0, s) combination of the grid, plus the stationary
/// triangle at alpha = 1/3.
pub fn closed_form_suite(grid: &OracleGrid, inject_fault: bool) -> Result<Vec<OracleRow>> {
    let scale = if inject_fault { FAULT_SCALE } else { 1.0 };
    let mut alphas = grid.alphas.clone();
    if !alphas.contains(&(1.0 / 3.0)) {
        alphas.push(1.0 / 3.0);
    }
    let mut rows = Vec::new();
    for shape in [Shape::Segment, Shape::Triangle] {
        for &alpha in &alphas {
            for &w0 in &grid.w0s {
                for &s in &grid.step_sizes {
                    let config = FlowConfig::new(alpha, s, grid.steps);
                    rows.push(run_row(shape, &config, w0, scale)?);
                }
            }
        }
    }
    Ok(rows)
}
