//! Stochastic watershed: every tree edge is re-valued with the probability
//! that random Poisson markers end up on both of its sides.
//!
//! For a tree edge `e_st` of weight `w`, removing every tree edge of weight
//! `>= w` leaves two components `R_s` and `R_t`. With `Λ(R)` the expected
//! number of markers falling in `R`,
//!
//! ```text
//! P(cut) = 1 - exp(-Λ(R_s)) - exp(-Λ(R_t)) + exp(-Λ(R_s) - Λ(R_t))
//!        = (1 - exp(-Λ(R_s))) (1 - exp(-Λ(R_t)))
//! ```
//!
//! `Λ` is the pixel sum of the marker density over the region. Pair-modulated
//! models additionally scale both masses by a factor `χ(R_s, R_t)` for that
//! edge only.

use crate::error::{check_dims, Error, Result};
use crate::graph::{MinimumSpanningTree, RegionStats, UnionFind};
use crate::hierarchy::marker_forest;
use crate::partition::LabelMap;
use crate::prior::{combine_priors, DensityFactor, ProbabilityMap};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;

/// Additive constant in the denominator of the transition factor.
pub const TRANSITION_EPSILON: f64 = 0.01;

/// Above this expected count the probability of an empty region underflows.
const SATURATED_MASS: f64 = 1e6;

/// Probability that a Poisson variable with mean `lambda` is zero.
pub fn poisson_zero_prob(lambda: f64) -> Result<f64> {
    if lambda.is_nan() || lambda < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "expected marker count must be non-negative, got {lambda}"
        )));
    }
    Ok((-lambda).exp())
}

/// Probability that both regions receive at least one marker.
pub fn cut_probability(lambda_s: f64, lambda_t: f64) -> Result<f64> {
    poisson_zero_prob(lambda_s)?;
    poisson_zero_prob(lambda_t)?;
    Ok(cut_probability_unchecked(lambda_s, lambda_t))
}

#[inline]
fn cut_probability_unchecked(lambda_s: f64, lambda_t: f64) -> f64 {
    (-(-lambda_s).exp_m1()) * (-(-lambda_t).exp_m1())
}

/// Per-edge modulation of the marker density.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChiKind {
    /// `χ = w_st`, the current edge weight (volume stochastic watershed).
    Volume,
    /// `χ = max(m_s, m_t) (1 - min(m_s, m_t)) / (0.01 + σ_s σ_t)` where `m`
    /// and `σ` are the prior mean and standard deviation of each side, read
    /// from the aggregated [`RegionStats`] prior sums.
    Transition,
}

/// Transition factor of two regions.
pub fn transition_chi(a: &RegionStats, b: &RegionStats) -> f64 {
    let (ma, mb) = (a.prior_moments(), b.prior_moments());
    let hi = ma.mean.max(mb.mean);
    let lo = ma.mean.min(mb.mean);
    hi * (1.0 - lo) / (TRANSITION_EPSILON + ma.std * mb.std)
}

fn chi_factor(kind: Option<ChiKind>, weight: f64, a: &RegionStats, b: &RegionStats) -> f64 {
    match kind {
        None => 1.0,
        Some(ChiKind::Volume) => weight,
        Some(ChiKind::Transition) => transition_chi(a, b),
    }
}

/// How markers are spread over the image.
#[derive(Debug, Clone, PartialEq)]
pub enum MarkerDensityModel {
    /// Constant density `lambda` markers per pixel.
    Uniform { lambda: f64 },
    /// Density `theta(x, y) * lambda`.
    PriorModulated { lambda: f64, prior: ProbabilityMap },
    /// Density `(theta_1 + theta_2 + ...) * lambda`.
    MultiPrior {
        lambda: f64,
        priors: Vec<ProbabilityMap>,
    },
    /// Base density scaled per edge by `χ(R_s, R_t)`.
    PairModulated {
        base: Box<MarkerDensityModel>,
        chi: ChiKind,
    },
}

impl MarkerDensityModel {
    pub fn lambda(&self) -> f64 {
        match self {
            Self::Uniform { lambda }
            | Self::PriorModulated { lambda, .. }
            | Self::MultiPrior { lambda, .. } => *lambda,
            Self::PairModulated { base, .. } => base.lambda(),
        }
    }

    fn validate(&self) -> Result<()> {
        let lambda = self.lambda();
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "marker density must be positive, got {lambda}"
            )));
        }
        match self {
            Self::MultiPrior { priors, .. } if priors.is_empty() => Err(Error::InvalidArgument(
                "multi-prior model needs at least one prior".into(),
            )),
            Self::PairModulated { base, .. } if matches!(**base, Self::PairModulated { .. }) => {
                Err(Error::InvalidArgument("pair modulation cannot be nested".into()))
            }
            _ => Ok(()),
        }
    }
}

/// A density model integrated over the nodes of a tree: the expected marker
/// count of every fine region, plus the optional pair modulation.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkerDensity {
    node_mass: Vec<f64>,
    chi: Option<ChiKind>,
}

impl MarkerDensity {
    /// Integrates `model` over the regions.
    ///
    /// Uniform densities only need the region areas from `stats`; prior-based
    /// densities also need the pixel partition the stats came from.
    pub fn resolve(
        model: &MarkerDensityModel,
        stats: &[RegionStats],
        partition: Option<&LabelMap>,
    ) -> Result<Self> {
        model.validate()?;
        let integrate = |factor: &DensityFactor, lambda: f64| -> Result<Vec<f64>> {
            let part = partition.ok_or_else(|| {
                Error::Mismatch("prior-modulated density needs the pixel partition".into())
            })?;
            check_dims(part.dims(), factor.dims())?;
            if part.num_labels() != stats.len() {
                return Err(Error::Mismatch(format!(
                    "partition has {} regions, tree has {} nodes",
                    part.num_labels(),
                    stats.len()
                )));
            }
            let mut mass = vec![0.0; stats.len()];
            for (&l, &f) in part.labels().iter().zip(factor.values()) {
                mass[l as usize] += f;
            }
            mass.iter_mut().for_each(|m| *m *= lambda);
            Ok(mass)
        };
        let (node_mass, chi) = match model {
            MarkerDensityModel::Uniform { lambda } => (
                stats.iter().map(|s| s.pixel_area as f64 * lambda).collect(),
                None,
            ),
            MarkerDensityModel::PriorModulated { lambda, prior } => {
                (integrate(&DensityFactor::from(prior), *lambda)?, None)
            }
            MarkerDensityModel::MultiPrior { lambda, priors } => {
                (integrate(&combine_priors(priors)?, *lambda)?, None)
            }
            MarkerDensityModel::PairModulated { base, chi } => {
                (Self::resolve(base, stats, partition)?.node_mass, Some(*chi))
            }
        };
        Ok(Self { node_mass, chi })
    }

    /// Density from explicit per-node expected marker counts.
    pub fn from_node_masses(node_mass: Vec<f64>, chi: Option<ChiKind>) -> Result<Self> {
        if let Some(m) = node_mass.iter().find(|m| !(m.is_finite() && **m >= 0.0)) {
            return Err(Error::InvalidArgument(format!("invalid node mass {m}")));
        }
        Ok(Self { node_mass, chi })
    }

    pub fn node_mass(&self) -> &[f64] {
        &self.node_mass
    }

    pub fn chi(&self) -> Option<ChiKind> {
        self.chi
    }

    fn check(&self, mst: &MinimumSpanningTree) -> Result<()> {
        if self.node_mass.len() != mst.num_nodes() {
            return Err(Error::Mismatch(format!(
                "density covers {} nodes, tree has {}",
                self.node_mass.len(),
                mst.num_nodes()
            )));
        }
        Ok(())
    }
}

/// A tree whose weights are cut probabilities.
#[derive(Debug, Clone)]
pub struct ReweightedTree {
    tree: MinimumSpanningTree,
}

impl ReweightedTree {
    pub fn tree(&self) -> &MinimumSpanningTree {
        &self.tree
    }

    pub fn into_tree(self) -> MinimumSpanningTree {
        self.tree
    }

    /// New weights, indexed like the tree's edges.
    pub fn weights(&self) -> Vec<f64> {
        self.tree.edges().iter().map(|e| e.weight).collect()
    }
}

/// Closed-form stochastic-watershed weights.
///
/// Edges are swept in ascending `(weight, id)` order with a union-find that
/// aggregates region stats and marker mass. All edges of an equal-weight
/// plateau are evaluated against the components present before the plateau,
/// then merged together.
pub fn reweight(mst: &MinimumSpanningTree, density: &MarkerDensity) -> Result<ReweightedTree> {
    density.check(mst)?;
    let edges = mst.edges();
    let order = mst.ascending_order();
    let mut uf = UnionFind::with_payload(mst.stats().to_vec(), density.node_mass.clone());
    let mut weights = vec![0.0; edges.len()];
    let mut start = 0;
    while start < order.len() {
        let level = edges[order[start]].weight;
        let end = start
            + order[start..]
                .iter()
                .take_while(|&&i| edges[i].weight == level)
                .count();
        for &idx in &order[start..end] {
            let e = &edges[idx];
            let (s, t) = (e.source as usize, e.target as usize);
            let chi = chi_factor(density.chi, e.weight, &uf.stats(s), &uf.stats(t));
            weights[idx] = cut_probability_unchecked(chi * uf.mass(s), chi * uf.mass(t));
        }
        for &idx in &order[start..end] {
            uf.union(edges[idx].source as usize, edges[idx].target as usize);
        }
        start = end;
    }
    Ok(ReweightedTree {
        tree: mst.with_weights(&weights)?,
    })
}

/// Applies [`reweight`] repeatedly, each stage consuming the previous
/// stage's weights.
pub fn chain_sws(mst: &MinimumSpanningTree, stages: &[MarkerDensity]) -> Result<ReweightedTree> {
    let (first, rest) = stages
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("chain needs at least one stage".into()))?;
    let mut current = reweight(mst, first)?;
    for stage in rest {
        current = reweight(current.tree(), stage)?;
    }
    Ok(current)
}

/// Deterministic random stream of one trial.
fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Clone, Copy)]
enum MarkerDraw {
    Never,
    Always,
    Sample(Poisson<f64>),
}

impl MarkerDraw {
    fn new(mass: f64) -> Self {
        if mass <= 0.0 {
            Self::Never
        } else if mass > SATURATED_MASS {
            Self::Always
        } else {
            Self::Sample(Poisson::new(mass).expect("mass is positive and finite"))
        }
    }

    fn marked(&self, rng: &mut ChaCha8Rng) -> bool {
        match self {
            Self::Never => false,
            Self::Always => true,
            Self::Sample(d) => d.sample(rng) >= 1.0,
        }
    }
}

/// Nodes reachable from `start` through edges strictly lighter than `level`.
fn lower_component(mst: &MinimumSpanningTree, start: u32, level: f64) -> Vec<u32> {
    let mut seen = vec![false; mst.num_nodes()];
    let mut stack = vec![start];
    let mut out = Vec::new();
    seen[start as usize] = true;
    while let Some(v) = stack.pop() {
        out.push(v);
        for &(w, idx) in mst.neighbors(v as usize) {
            if !seen[w as usize] && mst.edges()[idx as usize].weight < level {
                seen[w as usize] = true;
                stack.push(w);
            }
        }
    }
    out
}

/// Monte-Carlo stochastic watershed: the fraction of trials in which random
/// markers cut each edge.
///
/// Every trial draws an independent Poisson count for each node; nodes with
/// at least one marker seed a marker-based segmentation. Fewer than two
/// markers cut nothing. For pair-modulated densities each edge gets its own
/// draw with masses scaled by that edge's `χ`, computed from the components
/// found by walking the tree. Trial `i` uses the ChaCha8 stream `i` of
/// `seed`, so the result does not depend on the thread count.
pub fn simulate_sws(
    mst: &MinimumSpanningTree,
    density: &MarkerDensity,
    trials: u64,
    seed: u64,
) -> Result<Vec<f64>> {
    density.check(mst)?;
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let order = mst.ascending_order();
    let n_edges = mst.edges().len();

    let counts: Vec<u64> = match density.chi {
        None => {
            let draws: Vec<MarkerDraw> = density.node_mass.iter().map(|&m| MarkerDraw::new(m)).collect();
            (0..trials)
                .into_par_iter()
                .fold(
                    || vec![0u64; n_edges],
                    |mut acc, trial| {
                        let mut rng = trial_rng(seed, trial);
                        let marked: Vec<bool> = draws.iter().map(|d| d.marked(&mut rng)).collect();
                        if marked.iter().filter(|&&m| m).count() >= 2 {
                            for (a, c) in acc.iter_mut().zip(marker_forest(mst, &order, &marked)) {
                                *a += u64::from(c);
                            }
                        }
                        acc
                    },
                )
                .reduce(|| vec![0u64; n_edges], add_counts)
        }
        Some(kind) => {
            let chis: Vec<f64> = mst
                .edges()
                .iter()
                .map(|e| {
                    let side = |v: u32| {
                        lower_component(mst, v, e.weight)
                            .into_iter()
                            .fold(RegionStats::default(), |acc, u| acc.merged(&mst.stats()[u as usize]))
                    };
                    chi_factor(Some(kind), e.weight, &side(e.source), &side(e.target))
                })
                .collect();
            (0..trials)
                .into_par_iter()
                .fold(
                    || vec![0u64; n_edges],
                    |mut acc, trial| {
                        let mut rng = trial_rng(seed, trial);
                        for (idx, &chi) in chis.iter().enumerate() {
                            let marked: Vec<bool> = density
                                .node_mass
                                .iter()
                                .map(|&m| MarkerDraw::new(chi * m).marked(&mut rng))
                                .collect();
                            if marked.iter().filter(|&&m| m).count() >= 2
                                && marker_forest(mst, &order, &marked)[idx]
                            {
                                acc[idx] += 1;
                            }
                        }
                        acc
                    },
                )
                .reduce(|| vec![0u64; n_edges], add_counts)
        }
    };
    Ok(counts.into_iter().map(|c| c as f64 / trials as f64).collect())
}

fn add_counts(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}
