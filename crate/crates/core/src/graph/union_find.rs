use super::RegionStats;

/// Disjoint sets with union by rank and path halving.
///
/// Each root carries the aggregated [`RegionStats`] and the aggregated
/// expected marker count of its members.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
    stats: Vec<RegionStats>,
    mass: Vec<f64>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
            stats: vec![RegionStats::default(); n],
            mass: vec![0.0; n],
        }
    }

    /// Sets with per-element stats and marker mass.
    pub fn with_payload(stats: Vec<RegionStats>, mass: Vec<f64>) -> Self {
        assert_eq!(stats.len(), mass.len(), "payload lengths differ");
        let n = stats.len();
        Self {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
            stats,
            mass,
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let grand = self.parent[self.parent[x] as usize];
            self.parent[x] = grand;
            x = grand as usize;
        }
        x
    }

    /// Merges the sets of `a` and `b`. Returns the new root, or `None` if they
    /// were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> Option<usize> {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return None;
        }
        let (root, child) = match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => (rb, ra),
            std::cmp::Ordering::Greater => (ra, rb),
            std::cmp::Ordering::Equal => {
                self.rank[ra] += 1;
                (ra, rb)
            }
        };
        self.parent[child] = root as u32;
        let child_stats = self.stats[child];
        self.stats[root].merge_from(&child_stats);
        self.mass[root] += self.mass[child];
        Some(root)
    }

    /// Aggregated stats of the set containing `x`.
    pub fn stats(&mut self, x: usize) -> RegionStats {
        let r = self.find(x);
        self.stats[r]
    }

    /// Aggregated marker mass of the set containing `x`.
    pub fn mass(&mut self, x: usize) -> f64 {
        let r = self.find(x);
        self.mass[r]
    }

    /// Root of every element.
    pub fn roots(&mut self) -> Vec<u32> {
        (0..self.len()).map(|i| self.find(i) as u32).collect()
    }
}
