use crate::error::{Error, Result};
use crate::graph::{MinimumSpanningTree, MstEdge, RegionStats, UnionFind};
use crate::partition::NodeLabeling;
use serde::{Deserialize, Serialize};

/// One binary merge of the dendrogram.
///
/// Node ids `0..num_leaves` are leaves; merge `k` creates node
/// `num_leaves + k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge {
    pub left: u32,
    pub right: u32,
    pub altitude: f64,
}

/// Indexed hierarchy of partitions stored as a binary merge tree.
///
/// Merges are kept in creation order; altitudes are non-decreasing along it.
#[derive(Debug, Clone)]
pub struct MergeTree {
    num_leaves: usize,
    merges: Vec<Merge>,
    parent: Vec<u32>,
    stats: Vec<RegionStats>,
}

impl MergeTree {
    /// Rebuilds a tree from its merge list. Leaf stats are left empty.
    pub fn from_merges(num_leaves: usize, merges: Vec<Merge>) -> Result<Self> {
        if num_leaves == 0 {
            return Err(Error::InvalidArgument("hierarchy has no leaves".into()));
        }
        if merges.len() + 1 != num_leaves {
            return Err(Error::InvalidArgument(format!(
                "{} merges for {num_leaves} leaves",
                merges.len()
            )));
        }
        let total = 2 * num_leaves - 1;
        let mut parent = vec![u32::MAX; total];
        let mut stats = vec![RegionStats::default(); total];
        let mut prev = f64::NEG_INFINITY;
        for (k, m) in merges.iter().enumerate() {
            let id = (num_leaves + k) as u32;
            if !m.altitude.is_finite() || m.altitude < prev {
                return Err(Error::InvalidArgument(format!(
                    "merge {k} altitude {} breaks the non-decreasing order",
                    m.altitude
                )));
            }
            prev = m.altitude;
            for child in [m.left, m.right] {
                if child >= id || parent[child as usize] != u32::MAX || m.left == m.right {
                    return Err(Error::InvalidArgument(format!(
                        "merge {k} has invalid child {child}"
                    )));
                }
                parent[child as usize] = id;
            }
            stats[id as usize] = stats[m.left as usize].merged(&stats[m.right as usize]);
        }
        Ok(Self {
            num_leaves,
            merges,
            parent,
            stats,
        })
    }

    pub fn num_leaves(&self) -> usize {
        self.num_leaves
    }

    pub fn num_nodes(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> u32 {
        (self.num_nodes() - 1) as u32
    }

    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    /// Parent of `node`, `None` for the root.
    pub fn parent(&self, node: u32) -> Option<u32> {
        match self.parent[node as usize] {
            u32::MAX => None,
            p => Some(p),
        }
    }

    /// Merge level of `node`; leaves sit at 0.
    pub fn altitude(&self, node: u32) -> f64 {
        let n = self.num_leaves as u32;
        if node < n {
            0.0
        } else {
            self.merges[(node - n) as usize].altitude
        }
    }

    pub fn stats(&self, node: u32) -> &RegionStats {
        &self.stats[node as usize]
    }

    /// Leaf labeling after applying the first `count` merges.
    fn apply_merges(&self, count: usize) -> NodeLabeling {
        let mut uf = UnionFind::new(self.num_leaves);
        let mut rep: Vec<u32> = (0..self.num_leaves as u32).collect();
        rep.reserve(self.merges.len());
        for (k, m) in self.merges.iter().enumerate() {
            let (a, b) = (rep[m.left as usize], rep[m.right as usize]);
            if k < count {
                uf.union(a as usize, b as usize);
            }
            rep.push(a);
        }
        NodeLabeling::from_keys(&uf.roots())
    }

    /// Partition grouping leaves under every node with altitude `<= lambda`.
    pub fn threshold_cut(&self, lambda: f64) -> NodeLabeling {
        let count = self.merges.partition_point(|m| m.altitude <= lambda);
        self.apply_merges(count)
    }

    /// Partition with exactly `k` regions: the `k - 1` last merges are undone.
    pub fn k_cut(&self, k: usize) -> Result<NodeLabeling> {
        if k == 0 || k > self.num_leaves {
            return Err(Error::InvalidArgument(format!(
                "k = {k} outside 1..={}",
                self.num_leaves
            )));
        }
        Ok(self.apply_merges(self.num_leaves - k))
    }

    /// A spanning tree whose Kruskal order replays exactly these merges: merge
    /// `k` becomes an edge with id `k` between a leaf of each child.
    pub fn to_spanning_tree(&self) -> Result<MinimumSpanningTree> {
        let mut rep: Vec<u32> = (0..self.num_leaves as u32).collect();
        let edges = self
            .merges
            .iter()
            .enumerate()
            .map(|(k, m)| {
                let (a, b) = (rep[m.left as usize], rep[m.right as usize]);
                rep.push(a);
                MstEdge {
                    id: k as u32,
                    source: a,
                    target: b,
                    weight: m.altitude,
                }
            })
            .collect();
        MinimumSpanningTree::from_tree_edges(self.stats[..self.num_leaves].to_vec(), edges)
    }
}

/// Kruskal replay of the tree edges in ascending `(weight, id)` order; each
/// merge sits at its edge's weight and carries the summed child stats.
pub fn build_merge_tree(mst: &MinimumSpanningTree) -> MergeTree {
    let n = mst.num_nodes();
    let mut uf = UnionFind::new(n);
    let mut cluster: Vec<u32> = (0..n as u32).collect();
    let mut parent = vec![u32::MAX; 2 * n - 1];
    let mut stats = mst.stats().to_vec();
    stats.reserve(n.saturating_sub(1));
    let mut merges = Vec::with_capacity(n.saturating_sub(1));
    for idx in mst.ascending_order() {
        let e = &mst.edges()[idx];
        let (ra, rb) = (uf.find(e.source as usize), uf.find(e.target as usize));
        let (left, right) = (cluster[ra], cluster[rb]);
        let id = (n + merges.len()) as u32;
        let root = uf.union(ra, rb).expect("tree edges never close a cycle");
        cluster[root] = id;
        parent[left as usize] = id;
        parent[right as usize] = id;
        stats.push(stats[left as usize].merged(&stats[right as usize]));
        merges.push(Merge {
            left,
            right,
            altitude: e.weight,
        });
    }
    MergeTree {
        num_leaves: n,
        merges,
        parent,
        stats,
    }
}

/// Serialized form: `{"num_leaves": n, "merges": [[left, right, altitude], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HierarchyDocument {
    pub num_leaves: usize,
    pub merges: Vec<(u32, u32, f64)>,
}

impl From<&MergeTree> for HierarchyDocument {
    fn from(tree: &MergeTree) -> Self {
        Self {
            num_leaves: tree.num_leaves,
            merges: tree
                .merges
                .iter()
                .map(|m| (m.left, m.right, m.altitude))
                .collect(),
        }
    }
}

impl TryFrom<HierarchyDocument> for MergeTree {
    type Error = Error;

    fn try_from(doc: HierarchyDocument) -> Result<Self> {
        let merges = doc
            .merges
            .into_iter()
            .map(|(left, right, altitude)| Merge {
                left,
                right,
                altitude,
            })
            .collect();
        MergeTree::from_merges(doc.num_leaves, merges)
    }
}
