use super::{RegionStats, UnionFind};
use crate::error::{Error, Result};
use crate::partition::{ensure_same_dims, for_each_boundary, LabelMap};
use crate::prior::ProbabilityMap;
use crate::raster::Raster;

/// Edge dissimilarity between adjacent regions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Dissimilarity {
    /// L1 distance between the per-region mean channel vectors.
    #[default]
    MeanColor,
    /// Minimum, over boundary pixel pairs, of the largest per-channel
    /// absolute difference.
    MinGradient,
}

impl std::str::FromStr for Dissimilarity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mean-color" => Ok(Self::MeanColor),
            "min-gradient" => Ok(Self::MinGradient),
            other => Err(Error::InvalidArgument(format!(
                "unknown dissimilarity `{other}`"
            ))),
        }
    }
}

/// Undirected weighted edge; `source < target`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RagEdge {
    pub source: u32,
    pub target: u32,
    pub weight: f64,
}

/// Graph over the regions of a fine partition.
///
/// Edge `i` is `edges()[i]`; edges are sorted by `(source, target)`, which
/// also fixes the tie-breaking order used by every downstream algorithm.
#[derive(Debug, Clone)]
pub struct RegionAdjacencyGraph {
    edges: Vec<RagEdge>,
    stats: Vec<RegionStats>,
    channels: usize,
}

impl RegionAdjacencyGraph {
    /// Builds a graph from explicit edges. Endpoints may be given in either
    /// order; edges are renumbered in `(min, max)` lexicographic order.
    pub fn from_edges(stats: Vec<RegionStats>, edges: &[(u32, u32, f64)]) -> Result<Self> {
        let n = stats.len();
        if n == 0 {
            return Err(Error::InvalidArgument("graph has no nodes".into()));
        }
        let mut list = Vec::with_capacity(edges.len());
        for &(a, b, w) in edges {
            if a == b {
                return Err(Error::InvalidArgument(format!("self-loop on node {a}")));
            }
            if a as usize >= n || b as usize >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge ({a}, {b}) references a node outside 0..{n}"
                )));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "edge ({a}, {b}) has invalid weight {w}"
                )));
            }
            list.push(RagEdge {
                source: a.min(b),
                target: a.max(b),
                weight: w,
            });
        }
        list.sort_by_key(|e| (e.source, e.target));
        if let Some(dup) = list
            .windows(2)
            .find(|p| (p[0].source, p[0].target) == (p[1].source, p[1].target))
        {
            return Err(Error::InvalidArgument(format!(
                "duplicate edge ({}, {})",
                dup[0].source, dup[0].target
            )));
        }
        let graph = Self {
            edges: list,
            stats,
            channels: 1,
        };
        graph.ensure_connected()?;
        Ok(graph)
    }

    fn ensure_connected(&self) -> Result<()> {
        let mut uf = UnionFind::new(self.num_nodes());
        let mut components = self.num_nodes();
        for e in &self.edges {
            if uf.union(e.source as usize, e.target as usize).is_some() {
                components -= 1;
            }
        }
        if components != 1 {
            return Err(Error::Disconnected { components });
        }
        Ok(())
    }

    pub fn num_nodes(&self) -> usize {
        self.stats.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[RagEdge] {
        &self.edges
    }

    pub fn stats(&self) -> &[RegionStats] {
        &self.stats
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    /// Id of the edge joining `a` and `b`, if any.
    pub fn find_edge(&self, a: u32, b: u32) -> Option<usize> {
        let key = (a.min(b), a.max(b));
        self.edges
            .binary_search_by_key(&key, |e| (e.source, e.target))
            .ok()
    }
}

/// Builds the region adjacency graph of `partition` over `image`.
///
/// When `prior` is given, its values are accumulated into each region's
/// prior sums.
pub fn build_rag(
    image: &Raster,
    partition: &LabelMap,
    dissimilarity: Dissimilarity,
    prior: Option<&ProbabilityMap>,
) -> Result<RegionAdjacencyGraph> {
    ensure_same_dims(partition, image.dims())?;
    if let Some(p) = prior {
        ensure_same_dims(partition, p.dims())?;
    }
    let channels = image.channels();
    let mut stats = vec![RegionStats::default(); partition.num_labels()];
    for (idx, &l) in partition.labels().iter().enumerate() {
        let s = &mut stats[l as usize];
        s.pixel_area += 1;
        for (c, &v) in image.pixel(idx).iter().enumerate() {
            s.color_sum[c] += f64::from(v);
        }
        if let Some(p) = prior {
            let t = p.values()[idx];
            s.prior_sum += t;
            s.prior_sq_sum += t * t;
        }
    }

    let mut boundary: Vec<(u32, u32, f64)> = Vec::new();
    for_each_boundary(partition, |a, b, p, q| {
        let grad = match dissimilarity {
            Dissimilarity::MeanColor => 0.0,
            Dissimilarity::MinGradient => image
                .pixel(p)
                .iter()
                .zip(image.pixel(q))
                .map(|(&u, &v)| (f64::from(u) - f64::from(v)).abs())
                .fold(0.0, f64::max),
        };
        boundary.push((a.min(b), a.max(b), grad));
    });
    boundary.sort_unstable_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)).then(x.2.total_cmp(&y.2)));
    // Sorted so the first entry of every run carries the minimum gradient.
    boundary.dedup_by_key(|e| (e.0, e.1));

    let edges = boundary
        .into_iter()
        .map(|(a, b, grad)| {
            let weight = match dissimilarity {
                Dissimilarity::MeanColor => (0..channels)
                    .map(|c| (stats[a as usize].mean_color(c) - stats[b as usize].mean_color(c)).abs())
                    .sum(),
                Dissimilarity::MinGradient => grad,
            };
            RagEdge {
                source: a,
                target: b,
                weight,
            }
        })
        .collect();
    let graph = RegionAdjacencyGraph {
        edges,
        stats,
        channels,
    };
    graph.ensure_connected()?;
    Ok(graph)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_pixels_mean_color() {
        let img = Raster::gray8(2, 1, vec![10, 50]).unwrap();
        let part = LabelMap::new(2, 1, vec![0, 1]).unwrap();
        let g = build_rag(&img, &part, Dissimilarity::MeanColor, None).unwrap();
        assert_eq!(g.num_edges(), 1);
        assert_eq!(g.edges()[0].weight, 40.0);
    }

    #[test]
    fn constant_image_has_zero_weights() {
        let img = Raster::gray8(4, 4, vec![9; 16]).unwrap();
        let labels = (0..16).map(|i| ((i % 4) / 2 + 2 * ((i / 4) / 2)) as u32).collect();
        let part = LabelMap::new(4, 4, labels).unwrap();
        for kind in [Dissimilarity::MeanColor, Dissimilarity::MinGradient] {
            let g = build_rag(&img, &part, kind, None).unwrap();
            assert_eq!(g.num_edges(), 4);
            assert!(g.edges().iter().all(|e| e.weight == 0.0));
        }
    }

    #[test]
    fn min_gradient_takes_weakest_boundary_pair() {
        // 0 0 | 1 1 labels, boundary pairs (5,9) and (7,8) => min of max diff = 1
        let img = Raster::gray8(4, 2, vec![0, 5, 9, 0, 0, 7, 8, 0]).unwrap();
        let part = LabelMap::new(4, 2, vec![0, 0, 1, 1, 0, 0, 1, 1]).unwrap();
        let g = build_rag(&img, &part, Dissimilarity::MinGradient, None).unwrap();
        assert_eq!(g.edges()[0].weight, 1.0);
    }

    #[test]
    fn rgb_mean_color_uses_l1() {
        let img = Raster::new(2, 1, 3, 255, vec![0, 0, 0, 10, 20, 30]).unwrap();
        let part = LabelMap::new(2, 1, vec![0, 1]).unwrap();
        let g = build_rag(&img, &part, Dissimilarity::MeanColor, None).unwrap();
        assert_eq!(g.edges()[0].weight, 60.0);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let img = Raster::gray8(2, 1, vec![0, 0]).unwrap();
        let part = LabelMap::new(1, 2, vec![0, 1]).unwrap();
        assert!(matches!(
            build_rag(&img, &part, Dissimilarity::MeanColor, None),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn prior_sums_accumulate() {
        let img = Raster::gray8(2, 1, vec![0, 0]).unwrap();
        let part = LabelMap::new(2, 1, vec![0, 0]).unwrap();
        let prior = ProbabilityMap::new(2, 1, vec![0.5, 1.0]).unwrap();
        let g = build_rag(&img, &part, Dissimilarity::MeanColor, Some(&prior)).unwrap();
        assert_eq!(g.stats()[0].prior_sum, 1.5);
        assert_eq!(g.stats()[0].prior_sq_sum, 1.25);
    }

    #[test]
    fn from_edges_validation() {
        let stats = vec![RegionStats::with_area(1); 3];
        assert!(RegionAdjacencyGraph::from_edges(stats.clone(), &[(0, 0, 1.0)]).is_err());
        assert!(RegionAdjacencyGraph::from_edges(stats.clone(), &[(0, 1, 1.0), (1, 0, 2.0)]).is_err());
        assert!(RegionAdjacencyGraph::from_edges(stats.clone(), &[(0, 1, -1.0), (1, 2, 1.0)]).is_err());
        assert!(matches!(
            RegionAdjacencyGraph::from_edges(stats.clone(), &[(0, 1, 1.0)]),
            Err(Error::Disconnected { components: 2 })
        ));
        let g = RegionAdjacencyGraph::from_edges(stats, &[(2, 1, 1.0), (1, 0, 2.0)]).unwrap();
        assert_eq!(g.edges()[0].source, 0);
        assert_eq!(g.find_edge(2, 1), Some(1));
    }
}
