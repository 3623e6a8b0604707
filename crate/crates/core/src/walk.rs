//! The α-lazy outward random walk.
//!
//! A walk started at `x` stays put with probability α. Otherwise it moves
//! strictly outward through the BFS shells of `x`, choosing the next vertex
//! in proportion to edge weight among the current vertex's next-shell
//! neighbors, and at each vertex that could continue outward it again stops
//! with probability α. A vertex in the last reachable position (no
//! next-shell neighbor) absorbs all mass that arrives there.
//!
//! The outward path probability is a sum over exponentially many paths, but
//! each factor only depends on two consecutive shell vertices, so a forward
//! sweep over the shells computes it in `O(|E|)` per source.

use crate::error::{Error, Result};
use crate::graph::{shells, Graph, ShellDecomposition, WeightVector};

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "alpha must lie in (0,1), got {alpha}"
        )))
    }
}

/// Probability mass of the walk from one source over all vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkDistribution {
    source: usize,
    alpha: f64,
    mass: Vec<f64>,
}

impl WalkDistribution {
    pub fn source(&self) -> usize {
        self.source
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Per-vertex mass; zero outside the source's component.
    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn total(&self) -> f64 {
        self.mass.iter().sum()
    }

    /// A bare distribution, for comparing against externally computed mass.
    pub fn from_mass(source: usize, alpha: f64, mass: Vec<f64>) -> Self {
        WalkDistribution {
            source,
            alpha,
            mass,
        }
    }
}

/// Outward path probability `P(x, z)` for every vertex `z`.
///
/// Entries are zero outside the source's component and 1 at the source.
pub fn outward_mass(
    graph: &Graph,
    weights: &WeightVector,
    shells: &ShellDecomposition,
) -> Vec<f64> {
    sweep(graph, weights, shells).0
}

/// Forward sweep over the shells; also reports which vertices pass mass on.
fn sweep(graph: &Graph, weights: &WeightVector, sd: &ShellDecomposition) -> (Vec<f64>, Vec<bool>) {
    let n = graph.vertex_count();
    let mut mass = vec![0.0; n];
    let mut outward = vec![false; n];
    mass[sd.source()] = 1.0;
    for (j, shell) in sd.shells().iter().enumerate() {
        let next = Some(j + 1);
        for &u in shell {
            let denom: f64 = graph
                .neighbors(u)
                .iter()
                .filter(|&&(v, _)| sd.shell_of(v) == next)
                .map(|&(_, e)| weights[e])
                .sum();
            if denom == 0.0 {
                continue;
            }
            outward[u] = true;
            let carried = mass[u] / denom;
            for &(v, e) in graph.neighbors(u) {
                if sd.shell_of(v) == next {
                    mass[v] += carried * weights[e];
                }
            }
        }
    }
    (mass, outward)
}

/// Walk distribution of `source` with laziness `alpha`.
///
/// A source with no neighbors keeps all of its mass.
pub fn walk_distribution(
    graph: &Graph,
    weights: &WeightVector,
    source: usize,
    alpha: f64,
) -> Result<WalkDistribution> {
    check_alpha(alpha)?;
    let sd = shells(graph, source);
    Ok(distribution_from_shells(graph, weights, &sd, alpha))
}

pub(crate) fn distribution_from_shells(
    graph: &Graph,
    weights: &WeightVector,
    sd: &ShellDecomposition,
    alpha: f64,
) -> WalkDistribution {
    let (mut mass, outward) = sweep(graph, weights, sd);
    let stay = 1.0 - alpha;
    for (j, shell) in sd.shells().iter().enumerate() {
        let damp = stay.powi(j as i32);
        for &v in shell {
            let lazy = if outward[v] { alpha } else { 1.0 };
            mass[v] *= damp * lazy;
        }
    }
    WalkDistribution {
        source: sd.source(),
        alpha,
        mass,
    }
}

/// Walk distributions of every vertex, computed in parallel.
pub fn all_distributions(
    graph: &Graph,
    weights: &WeightVector,
    alpha: f64,
) -> Result<Vec<WalkDistribution>> {
    use rayon::prelude::*;

    check_alpha(alpha)?;
    Ok((0..graph.vertex_count())
        .into_par_iter()
        .map(|x| distribution_from_shells(graph, weights, &shells(graph, x), alpha))
        .collect())
}
