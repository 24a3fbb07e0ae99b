//! Region adjacency graphs, their minimum spanning trees and the disjoint-set
//! structure shared by every merge-based computation.

mod mst;
mod rag;
mod union_find;

pub use mst::{boruvka_mst, threshold_partition, MinimumSpanningTree, MstEdge};
pub use rag::{build_rag, Dissimilarity, RagEdge, RegionAdjacencyGraph};
pub use union_find::UnionFind;

use crate::prior::PriorMoments;
use crate::raster::MAX_CHANNELS;

/// Additive per-region accumulators.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RegionStats {
    pub pixel_area: u64,
    pub color_sum: [f64; MAX_CHANNELS],
    pub prior_sum: f64,
    pub prior_sq_sum: f64,
}

impl RegionStats {
    /// Stats of a region made of `area` pixels with no colour or prior data.
    pub fn with_area(area: u64) -> Self {
        Self {
            pixel_area: area,
            ..Self::default()
        }
    }

    pub fn merge_from(&mut self, other: &RegionStats) {
        self.pixel_area += other.pixel_area;
        for (a, b) in self.color_sum.iter_mut().zip(other.color_sum) {
            *a += b;
        }
        self.prior_sum += other.prior_sum;
        self.prior_sq_sum += other.prior_sq_sum;
    }

    pub fn merged(mut self, other: &RegionStats) -> Self {
        self.merge_from(other);
        self
    }

    pub fn mean_color(&self, channel: usize) -> f64 {
        self.color_sum[channel] / self.pixel_area as f64
    }

    pub fn prior_moments(&self) -> PriorMoments {
        PriorMoments::from_sums(self.pixel_area as f64, self.prior_sum, self.prior_sq_sum)
    }
}

/// Strict total order on edges: weight first, then edge id.
#[inline]
pub(crate) fn edge_order(wa: f64, ia: u32, wb: f64, ib: u32) -> std::cmp::Ordering {
    wa.total_cmp(&wb).then(ia.cmp(&ib))
}
