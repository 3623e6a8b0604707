//! Edge entropies and the explicit-Euler entropy flow.
//!
//! The entropy of an edge `xy` is a KL divergence between the walk
//! distributions of its two endpoints. The flow raises every weight at the
//! rate of its edge entropy: `w(t_j) = w(t_{j-1}) + s * D(t_{j-1})`, with all
//! entropies of a step read from the same weight snapshot.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, WeightVector};
use crate::walk::{all_distributions, check_alpha, walk_distribution, WalkDistribution};

pub const DEFAULT_ENTROPY_TOLERANCE: f64 = 1e-6;
pub const DEFAULT_GROWTH_FLOOR: f64 = 1e-3;
pub const DEFAULT_WINDOW: usize = 10;

/// Which divergence drives the flow on edge `xy`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// `KL(R_x, R_y) + KL(R_y, R_x)`
    #[default]
    Symmetric,
    /// `KL(R_x, R_y)`
    Forward,
    /// `KL(R_y, R_x)`
    Backward,
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sym" | "symmetric" => Ok(Variant::Symmetric),
            "forward" => Ok(Variant::Forward),
            "backward" => Ok(Variant::Backward),
            other => Err(Error::Parameter(format!(
                "unknown variant {other:?} (expected sym, forward or backward)"
            ))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Symmetric => "symmetric",
            Variant::Forward => "forward",
            Variant::Backward => "backward",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowConfig {
    pub alpha: f64,
    pub step_size: f64,
    pub num_steps: usize,
    pub variant: Variant,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig {
            alpha: 0.5,
            step_size: 0.01,
            num_steps: 20,
            variant: Variant::Symmetric,
        }
    }
}

impl FlowConfig {
    pub fn new(alpha: f64, step_size: f64, num_steps: usize) -> Self {
        FlowConfig {
            alpha,
            step_size,
            num_steps,
            variant: Variant::Symmetric,
        }
    }

    pub fn with_variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        if !(self.step_size.is_finite() && self.step_size > 0.0) {
            return Err(Error::Parameter(format!(
                "step size must be positive, got {}",
                self.step_size
            )));
        }
        Ok(())
    }
}

/// `sum_z P(z) ln(P(z) / Q(z))` over the support of `P`.
///
/// Both distributions must be supported on the same vertices.
pub fn kl_divergence(p: &WalkDistribution, q: &WalkDistribution) -> Result<f64> {
    kl(p.mass(), q.mass())
}

fn kl(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::Mismatch(format!(
            "distributions over {} and {} vertices",
            p.len(),
            q.len()
        )));
    }
    let mut sum = 0.0;
    for (z, (&pz, &qz)) in p.iter().zip(q).enumerate() {
        match (pz > 0.0, qz > 0.0) {
            (true, true) => sum += pz * (pz / qz).ln(),
            (false, false) => {}
            _ => return Err(Error::SupportMismatch(z)),
        }
    }
    Ok(sum)
}

fn entropy_between(p: &[f64], q: &[f64], variant: Variant) -> Result<f64> {
    Ok(match variant {
        Variant::Symmetric => kl(p, q)? + kl(q, p)?,
        Variant::Forward => kl(p, q)?,
        Variant::Backward => kl(q, p)?,
    })
}

/// Entropy of a single edge under the current weights.
pub fn edge_entropy(
    graph: &Graph,
    weights: &WeightVector,
    edge: usize,
    alpha: f64,
    variant: Variant,
) -> Result<f64> {
    let (x, y) = graph.edge(edge);
    let rx = walk_distribution(graph, weights, x, alpha)?;
    let ry = walk_distribution(graph, weights, y, alpha)?;
    entropy_between(rx.mass(), ry.mass(), variant)
}

/// Entropies of all edges, indexed like the edge list.
pub fn edge_entropies(
    graph: &Graph,
    weights: &WeightVector,
    alpha: f64,
    variant: Variant,
) -> Result<Vec<f64>> {
    weights.check_against(graph)?;
    let dists = all_distributions(graph, weights, alpha)?;
    graph
        .edges()
        .par_iter()
        .map(|&(x, y)| entropy_between(dists[x].mass(), dists[y].mass(), variant))
        .collect()
}

/// One synchronous Euler step. Returns the new weights and the entropies
/// they were advanced with.
pub fn flow_step(
    graph: &Graph,
    state: &WeightVector,
    config: &FlowConfig,
) -> Result<(WeightVector, Vec<f64>)> {
    config.validate()?;
    advance(graph, state, config, 0, 1.0)
}

fn advance(
    graph: &Graph,
    state: &WeightVector,
    config: &FlowConfig,
    step: usize,
    entropy_scale: f64,
) -> Result<(WeightVector, Vec<f64>)> {
    let mut entropies = edge_entropies(graph, state, config.alpha, config.variant)?;
    if entropy_scale != 1.0 {
        entropies.iter_mut().for_each(|d| *d *= entropy_scale);
    }
    let mut next = Vec::with_capacity(state.len());
    for (e, (&w, &d)) in state.as_slice().iter().zip(&entropies).enumerate() {
        let updated = w + config.step_size * d;
        if !d.is_finite() || !updated.is_finite() || updated <= 0.0 {
            return Err(Error::NumericalAbort { step, edge: e });
        }
        next.push(updated);
    }
    Ok((WeightVector::from_trusted(next), entropies))
}

/// Weight snapshots `w(t_0)..w(t_N)` and the entropies `D(t_0)..D(t_{N-1})`
/// that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowTrace {
    pub config: FlowConfig,
    pub weights: Vec<WeightVector>,
    pub entropies: Vec<Vec<f64>>,
}

impl FlowTrace {
    pub fn initial(&self) -> &WeightVector {
        &self.weights[0]
    }

    pub fn last(&self) -> &WeightVector {
        self.weights.last().expect("trace holds at least w0")
    }

    pub fn steps(&self) -> usize {
        self.entropies.len()
    }
}

pub fn run_flow(graph: &Graph, w0: &WeightVector, config: &FlowConfig) -> Result<FlowTrace> {
    run_flow_scaled(graph, w0, config, 1.0)
}

pub(crate) fn run_flow_scaled(
    graph: &Graph,
    w0: &WeightVector,
    config: &FlowConfig,
    entropy_scale: f64,
) -> Result<FlowTrace> {
    config.validate()?;
    w0.check_against(graph)?;
    let mut weights = Vec::with_capacity(config.num_steps + 1);
    let mut entropies = Vec::with_capacity(config.num_steps);
    weights.push(w0.clone());
    for step in 0..config.num_steps {
        let (next, d) = advance(graph, weights.last().unwrap(), config, step, entropy_scale)?;
        weights.push(next);
        entropies.push(d);
    }
    Ok(FlowTrace {
        config: *config,
        weights,
        entropies,
    })
}

/// Exact solution of the flow on a single edge.
pub fn closed_form_segment(alpha: f64, w0: f64, t: f64) -> f64 {
    w0 + t * segment_entropy(alpha)
}

/// Exact solution of the flow on a triangle with equal initial weights.
pub fn closed_form_equal_triangle(alpha: f64, w0: f64, t: f64) -> f64 {
    w0 + t * equal_triangle_entropy(alpha)
}

/// Symmetric edge entropy of a single edge; independent of its weight.
pub fn segment_entropy(alpha: f64) -> f64 {
    (2.0 - 4.0 * alpha) * ((1.0 - alpha) / alpha).ln()
}

/// Symmetric edge entropy of every edge of an equal-weight triangle.
pub fn equal_triangle_entropy(alpha: f64) -> f64 {
    (3.0 * alpha - 1.0) * (2.0 * alpha / (1.0 - alpha)).ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrajectoryKind {
    Converged,
    Diverging,
    Undetermined,
}

/// Heuristic finite-horizon reading of where a trajectory is heading: all
/// entropies vanishing, or every weight still growing at a steady rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryVerdict {
    pub kind: TrajectoryKind,
    pub final_entropy_max: f64,
    pub window_growth_min: f64,
}

pub fn classify_trajectory(
    trace: &FlowTrace,
    entropy_tolerance: f64,
    growth_floor: f64,
    window: usize,
) -> Result<TrajectoryVerdict> {
    if window == 0 || trace.weights.len() < window + 1 {
        return Err(Error::Parameter(format!(
            "trajectory classification needs a window of at least 1 and {} weight snapshots, trace has {}",
            window + 1,
            trace.weights.len()
        )));
    }
    let final_entropy_max = trace
        .entropies
        .last()
        .map(|d| d.iter().copied().fold(0.0_f64, f64::max))
        .unwrap_or(0.0);
    let end = trace.last().as_slice();
    let start = trace.weights[trace.weights.len() - 1 - window].as_slice();
    let span = window as f64 * trace.config.step_size;
    let window_growth_min = end
        .iter()
        .zip(start)
        .map(|(b, a)| (b - a) / span)
        .fold(f64::INFINITY, f64::min);

    let kind = if final_entropy_max < entropy_tolerance {
        TrajectoryKind::Converged
    } else if window_growth_min > growth_floor {
        TrajectoryKind::Diverging
    } else {
        TrajectoryKind::Undetermined
    };
    Ok(TrajectoryVerdict {
        kind,
        final_entropy_max,
        window_growth_min,
    })
}
