use super::{edge_order, RegionAdjacencyGraph, RegionStats, UnionFind};
use crate::error::{Error, Result};
use crate::partition::NodeLabeling;

/// Tree edge; `id` is the id of the originating graph edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MstEdge {
    pub id: u32,
    pub source: u32,
    pub target: u32,
    pub weight: f64,
}

/// Spanning tree over the regions, with per-node stats and an adjacency
/// index.
///
/// Edges are stored sorted by `id`. Weights may be replaced (see
/// [`MinimumSpanningTree::with_weights`]) so that the same topology can be
/// re-valued and processed again.
#[derive(Debug, Clone)]
pub struct MinimumSpanningTree {
    edges: Vec<MstEdge>,
    stats: Vec<RegionStats>,
    adjacency: Vec<Vec<(u32, u32)>>,
}

impl MinimumSpanningTree {
    /// Wraps `edges` after checking that they form a spanning tree over
    /// `stats.len()` nodes.
    pub fn from_tree_edges(stats: Vec<RegionStats>, mut edges: Vec<MstEdge>) -> Result<Self> {
        let n = stats.len();
        if n == 0 {
            return Err(Error::InvalidArgument("tree has no nodes".into()));
        }
        if edges.len() + 1 != n {
            return Err(Error::InvalidArgument(format!(
                "{} edges cannot span {n} nodes",
                edges.len()
            )));
        }
        let mut uf = UnionFind::new(n);
        for e in &edges {
            if e.source as usize >= n || e.target as usize >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge {} references a node outside 0..{n}",
                    e.id
                )));
            }
            if !e.weight.is_finite() || e.weight < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "edge {} has invalid weight {}",
                    e.id, e.weight
                )));
            }
            if uf.union(e.source as usize, e.target as usize).is_none() {
                return Err(Error::InvalidArgument(format!("edge {} closes a cycle", e.id)));
            }
        }
        edges.sort_by_key(|e| e.id);
        if edges.windows(2).any(|p| p[0].id == p[1].id) {
            return Err(Error::InvalidArgument("duplicate edge id".into()));
        }
        let mut adjacency = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            adjacency[e.source as usize].push((e.target, i as u32));
            adjacency[e.target as usize].push((e.source, i as u32));
        }
        Ok(Self {
            edges,
            stats,
            adjacency,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.stats.len()
    }

    pub fn edges(&self) -> &[MstEdge] {
        &self.edges
    }

    pub fn stats(&self) -> &[RegionStats] {
        &self.stats
    }

    /// `(neighbour, edge index)` pairs of `node`.
    pub fn neighbors(&self, node: usize) -> &[(u32, u32)] {
        &self.adjacency[node]
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// Edge indices in ascending `(weight, id)` order.
    pub fn ascending_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.edges.len()).collect();
        order.sort_unstable_by(|&a, &b| {
            let (ea, eb) = (&self.edges[a], &self.edges[b]);
            edge_order(ea.weight, ea.id, eb.weight, eb.id)
        });
        order
    }

    /// Same topology with new per-edge weights, indexed like [`Self::edges`].
    pub fn with_weights(&self, weights: &[f64]) -> Result<Self> {
        if weights.len() != self.edges.len() {
            return Err(Error::Mismatch(format!(
                "{} weights for {} edges",
                weights.len(),
                self.edges.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidArgument(format!("invalid weight {w}")));
        }
        let mut out = self.clone();
        for (e, &w) in out.edges.iter_mut().zip(weights) {
            e.weight = w;
        }
        Ok(out)
    }
}

/// Minimum spanning tree by Borůvka's algorithm.
///
/// Edges are compared by `(weight, id)`, a strict total order, so the result
/// is unique and matches Kruskal's algorithm under the same order.
pub fn boruvka_mst(graph: &RegionAdjacencyGraph) -> Result<MinimumSpanningTree> {
    let n = graph.num_nodes();
    let edges = graph.edges();
    let mut uf = UnionFind::new(n);
    let mut components = n;
    let mut chosen = Vec::with_capacity(n.saturating_sub(1));
    let mut cheapest: Vec<Option<u32>> = vec![None; n];
    let better = |cand: u32, cur: Option<u32>| match cur {
        None => true,
        Some(c) => {
            let (a, b) = (&edges[cand as usize], &edges[c as usize]);
            edge_order(a.weight, cand, b.weight, c).is_lt()
        }
    };

    while components > 1 {
        cheapest.iter_mut().for_each(|c| *c = None);
        let mut found = false;
        for (i, e) in edges.iter().enumerate() {
            let (ra, rb) = (uf.find(e.source as usize), uf.find(e.target as usize));
            if ra == rb {
                continue;
            }
            found = true;
            let i = i as u32;
            if better(i, cheapest[ra]) {
                cheapest[ra] = Some(i);
            }
            if better(i, cheapest[rb]) {
                cheapest[rb] = Some(i);
            }
        }
        if !found {
            return Err(Error::Disconnected { components });
        }
        for c in cheapest.iter().flatten() {
            let e = &edges[*c as usize];
            if uf.union(e.source as usize, e.target as usize).is_some() {
                components -= 1;
                chosen.push(MstEdge {
                    id: *c,
                    source: e.source,
                    target: e.target,
                    weight: e.weight,
                });
            }
        }
    }
    MinimumSpanningTree::from_tree_edges(graph.stats().to_vec(), chosen)
}

/// Connected components of the tree after removing every edge heavier than
/// `lambda`.
pub fn threshold_partition(mst: &MinimumSpanningTree, lambda: f64) -> NodeLabeling {
    let mut uf = UnionFind::new(mst.num_nodes());
    for e in mst.edges().iter().filter(|e| e.weight <= lambda) {
        uf.union(e.source as usize, e.target as usize);
    }
    NodeLabeling::from_keys(&uf.roots())
}
