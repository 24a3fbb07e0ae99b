use super::MergeTree;
use crate::error::{Error, Result};
use crate::graph::RegionAdjacencyGraph;

/// Lowest-common-ancestor queries on a merge tree by binary lifting.
#[derive(Debug, Clone)]
pub struct AncestorIndex {
    depth: Vec<u32>,
    up: Vec<Vec<u32>>,
}

impl AncestorIndex {
    pub fn new(tree: &MergeTree) -> Self {
        let total = tree.num_nodes();
        let root = tree.root();
        let mut parent = vec![root; total];
        let mut depth = vec![0u32; total];
        // Parents always have larger ids than their children.
        for node in (0..root).rev() {
            let p = tree.parent(node).expect("non-root node has a parent");
            parent[node as usize] = p;
            depth[node as usize] = depth[p as usize] + 1;
        }
        let levels = (usize::BITS - total.leading_zeros()).max(1) as usize;
        let mut up = Vec::with_capacity(levels);
        up.push(parent);
        for j in 1..levels {
            let prev = &up[j - 1];
            let next = prev.iter().map(|&p| prev[p as usize]).collect();
            up.push(next);
        }
        Self { depth, up }
    }

    pub fn lca(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        if self.depth[a as usize] < self.depth[b as usize] {
            std::mem::swap(&mut a, &mut b);
        }
        let mut diff = self.depth[a as usize] - self.depth[b as usize];
        let mut j = 0;
        while diff > 0 {
            if diff & 1 == 1 {
                a = self.up[j][a as usize];
            }
            diff >>= 1;
            j += 1;
        }
        if a == b {
            return a;
        }
        for level in self.up.iter().rev() {
            if level[a as usize] != level[b as usize] {
                a = level[a as usize];
                b = level[b as usize];
            }
        }
        self.up[0][a as usize]
    }
}

/// Level at which each pair of adjacent regions is merged, keyed by
/// `(min, max)` node pair and sorted by key.
#[derive(Debug, Clone, PartialEq)]
pub struct SaliencyMap {
    entries: Vec<((u32, u32), f64)>,
}

impl SaliencyMap {
    pub fn entries(&self) -> &[((u32, u32), f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, a: u32, b: u32) -> Option<f64> {
        let key = (a.min(b), a.max(b));
        self.entries
            .binary_search_by_key(&key, |e| e.0)
            .ok()
            .map(|i| self.entries[i].1)
    }

    /// Saliency values in entry order.
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|e| e.1)
    }
}

/// Saliency of arbitrary leaf pairs.
pub fn saliency_for_pairs(tree: &MergeTree, pairs: &[(u32, u32)]) -> Result<SaliencyMap> {
    let n = tree.num_leaves() as u32;
    let index = AncestorIndex::new(tree);
    let mut entries = Vec::with_capacity(pairs.len());
    for &(a, b) in pairs {
        if a >= n || b >= n {
            return Err(Error::Mismatch(format!(
                "pair ({a}, {b}) is outside the {n} leaves of the hierarchy"
            )));
        }
        let key = (a.min(b), a.max(b));
        let value = if a == b { 0.0 } else { tree.altitude(index.lca(a, b)) };
        entries.push((key, value));
    }
    entries.sort_unstable_by_key(|e| e.0);
    entries.dedup_by_key(|e| e.0);
    Ok(SaliencyMap { entries })
}

/// Saliency of every graph edge: the altitude of the lowest common ancestor
/// of its endpoints.
pub fn saliency(tree: &MergeTree, graph: &RegionAdjacencyGraph) -> Result<SaliencyMap> {
    if tree.num_leaves() != graph.num_nodes() {
        return Err(Error::Mismatch(format!(
            "hierarchy has {} leaves, graph has {} nodes",
            tree.num_leaves(),
            graph.num_nodes()
        )));
    }
    let pairs: Vec<(u32, u32)> = graph.edges().iter().map(|e| (e.source, e.target)).collect();
    saliency_for_pairs(tree, &pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{boruvka_mst, RegionStats};
    use crate::hierarchy::build_merge_tree;

    #[test]
    fn triangle_saliencies() {
        let g = RegionAdjacencyGraph::from_edges(
            vec![RegionStats::with_area(1); 3],
            &[(0, 1, 1.0), (1, 2, 2.0), (0, 2, 3.0)],
        )
        .unwrap();
        let t = build_merge_tree(&boruvka_mst(&g).unwrap());
        let s = saliency(&t, &g).unwrap();
        assert_eq!(s.get(0, 1), Some(1.0));
        assert_eq!(s.get(2, 1), Some(2.0));
        assert_eq!(s.get(0, 2), Some(2.0));
    }

    #[test]
    fn mismatched_graph_is_rejected() {
        let stats = vec![RegionStats::with_area(1); 3];
        let g3 = RegionAdjacencyGraph::from_edges(stats, &[(0, 1, 1.0), (1, 2, 2.0)]).unwrap();
        let g2 = RegionAdjacencyGraph::from_edges(vec![RegionStats::with_area(1); 2], &[(0, 1, 1.0)])
            .unwrap();
        let t = build_merge_tree(&boruvka_mst(&g2).unwrap());
        assert!(matches!(saliency(&t, &g3), Err(Error::Mismatch(_))));
    }
}
