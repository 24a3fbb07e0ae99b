use crate::error::{Error, Result};
use crate::graph::{MinimumSpanningTree, UnionFind};
use crate::partition::NodeLabeling;

/// Minimum spanning forest rooted in the marked nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkerSegmentation {
    /// Owning marker of every node.
    pub owner: Vec<u32>,
    /// Per tree edge (indexed like the tree's edges): whether it was cut.
    pub cut: Vec<bool>,
}

impl MarkerSegmentation {
    pub fn labeling(&self) -> NodeLabeling {
        NodeLabeling::from_keys(&self.owner)
    }
}

/// Greedy flooding in ascending `(weight, id)` order: an edge is merged
/// unless both of its sides already hold a marker.
///
/// `order` must be [`MinimumSpanningTree::ascending_order`]; it is taken as a
/// parameter so repeated calls can share it.
pub fn marker_forest(mst: &MinimumSpanningTree, order: &[usize], marked: &[bool]) -> Vec<bool> {
    let mut uf = UnionFind::new(mst.num_nodes());
    let mut has_marker = marked.to_vec();
    let mut cut = vec![false; mst.edges().len()];
    for &idx in order {
        let e = &mst.edges()[idx];
        let (ra, rb) = (uf.find(e.source as usize), uf.find(e.target as usize));
        if has_marker[ra] && has_marker[rb] {
            cut[idx] = true;
        } else {
            let either = has_marker[ra] || has_marker[rb];
            let root = uf.union(ra, rb).expect("tree edges never close a cycle");
            has_marker[root] = either;
        }
    }
    cut
}

/// Marker-based segmentation: every segment contains exactly one marker.
pub fn marker_cut(mst: &MinimumSpanningTree, markers: &[u32]) -> Result<MarkerSegmentation> {
    if markers.is_empty() {
        return Err(Error::InvalidArgument("marker set is empty".into()));
    }
    let n = mst.num_nodes();
    let mut marked = vec![false; n];
    for &m in markers {
        if m as usize >= n {
            return Err(Error::InvalidArgument(format!(
                "marker {m} outside 0..{n}"
            )));
        }
        marked[m as usize] = true;
    }
    let cut = marker_forest(mst, &mst.ascending_order(), &marked);

    let mut owner = vec![u32::MAX; n];
    let mut stack = Vec::new();
    for m in (0..n as u32).filter(|&m| marked[m as usize]) {
        owner[m as usize] = m;
        stack.push(m);
        while let Some(v) = stack.pop() {
            for &(w, idx) in mst.neighbors(v as usize) {
                if !cut[idx as usize] && owner[w as usize] == u32::MAX {
                    owner[w as usize] = m;
                    stack.push(w);
                }
            }
        }
    }
    Ok(MarkerSegmentation { owner, cut })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{MstEdge, RegionStats};

    fn path(weights: &[f64]) -> MinimumSpanningTree {
        let edges = weights
            .iter()
            .enumerate()
            .map(|(i, &w)| MstEdge {
                id: i as u32,
                source: i as u32,
                target: i as u32 + 1,
                weight: w,
            })
            .collect();
        MinimumSpanningTree::from_tree_edges(vec![RegionStats::with_area(1); weights.len() + 1], edges)
            .unwrap()
    }

    #[test]
    fn single_marker_floods_everything() {
        let t = path(&[1.0, 5.0, 2.0]);
        let seg = marker_cut(&t, &[2]).unwrap();
        assert_eq!(seg.owner, vec![2; 4]);
        assert_eq!(seg.labeling().num_labels(), 1);
    }

    #[test]
    fn endpoints_cut_highest_edge() {
        let t = path(&[1.0, 5.0, 2.0]);
        let seg = marker_cut(&t, &[0, 3]).unwrap();
        assert_eq!(seg.cut, vec![false, true, false]);
        assert_eq!(seg.owner, vec![0, 0, 3, 3]);
    }

    #[test]
    fn all_nodes_marked_gives_fine_partition() {
        let t = path(&[1.0, 5.0, 2.0]);
        let seg = marker_cut(&t, &[0, 1, 2, 3]).unwrap();
        assert_eq!(seg.labeling(), NodeLabeling::singletons(4));
    }

    #[test]
    fn rejects_bad_markers() {
        let t = path(&[1.0]);
        assert!(marker_cut(&t, &[]).is_err());
        assert!(marker_cut(&t, &[7]).is_err());
    }
}
