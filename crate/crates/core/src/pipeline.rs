//! End-to-end assembly of the fine partition, its graph and spanning tree.

use crate::error::Result;
use crate::graph::{boruvka_mst, build_rag, Dissimilarity, MinimumSpanningTree, RegionAdjacencyGraph};
use crate::hierarchy::{build_merge_tree, render_ucm, saliency, MergeTree, UltrametricContourMap};
use crate::partition::{flat_zone_partition, LabelMap, DEFAULT_QUANTIZATION};
use crate::prior::ProbabilityMap;
use crate::raster::Raster;
use crate::sws::{chain_sws, MarkerDensity, MarkerDensityModel, ReweightedTree};

#[derive(Debug, Clone)]
pub struct FineGraph {
    pub partition: LabelMap,
    pub graph: RegionAdjacencyGraph,
    pub mst: MinimumSpanningTree,
}

#[derive(Debug, Clone, Copy)]
pub struct GraphOptions {
    pub dissimilarity: Dissimilarity,
    pub quantization: u32,
}

impl Default for GraphOptions {
    fn default() -> Self {
        Self {
            dissimilarity: Dissimilarity::MeanColor,
            quantization: DEFAULT_QUANTIZATION,
        }
    }
}

impl FineGraph {
    /// Uses `partition` when given, otherwise the flat zones of `image`.
    pub fn build(
        image: &Raster,
        partition: Option<LabelMap>,
        prior: Option<&ProbabilityMap>,
        options: GraphOptions,
    ) -> Result<Self> {
        let partition = match partition {
            Some(p) => p,
            None => flat_zone_partition(image, options.quantization)?,
        };
        let graph = build_rag(image, &partition, options.dissimilarity, prior)?;
        let mst = boruvka_mst(&graph)?;
        Ok(Self {
            partition,
            graph,
            mst,
        })
    }

    pub fn resolve(&self, model: &MarkerDensityModel) -> Result<MarkerDensity> {
        MarkerDensity::resolve(model, self.mst.stats(), Some(&self.partition))
    }

    /// Chained stochastic watershed over `models`.
    pub fn reweight(&self, models: &[MarkerDensityModel]) -> Result<ReweightedTree> {
        let stages = models
            .iter()
            .map(|m| self.resolve(m))
            .collect::<Result<Vec<_>>>()?;
        chain_sws(&self.mst, &stages)
    }

    pub fn ucm(&self, tree: &MergeTree) -> Result<UltrametricContourMap> {
        render_ucm(&saliency(tree, &self.graph)?, &self.partition)
    }

    pub fn hierarchy(tree: &MinimumSpanningTree) -> MergeTree {
        build_merge_tree(tree)
    }
}
