//! Hierarchical image segmentation with the stochastic watershed on region
//! adjacency graphs.
//!
//! The pipeline goes image → fine partition → region adjacency graph →
//! minimum spanning tree → re-valued tree → merge tree, from which threshold,
//! region-count and marker segmentations and ultrametric contour maps are
//! extracted. Marker densities can be modulated by a per-pixel prior so that
//! regions of interest receive finer detail.

pub mod error;
pub mod graph;
pub mod hierarchy;
pub mod io;
pub mod partition;
pub mod pipeline;
pub mod prior;
pub mod raster;
pub mod sws;

pub use error::{Error, Result};
pub use graph::{
    boruvka_mst, build_rag, threshold_partition, Dissimilarity, MinimumSpanningTree, MstEdge,
    RagEdge, RegionAdjacencyGraph, RegionStats, UnionFind,
};
pub use hierarchy::{
    build_merge_tree, marker_cut, render_ucm, saliency, MergeTree, SaliencyMap,
    UltrametricContourMap,
};
pub use partition::{flat_zone_partition, ingest_labels, LabelMap, NodeLabeling};
pub use pipeline::{FineGraph, GraphOptions};
pub use prior::{combine_priors, ingest_prior, region_prior_stats, ProbabilityMap};
pub use raster::Raster;
pub use sws::{
    chain_sws, cut_probability, poisson_zero_prob, reweight, simulate_sws, ChiKind, MarkerDensity,
    MarkerDensityModel, ReweightedTree,
};
