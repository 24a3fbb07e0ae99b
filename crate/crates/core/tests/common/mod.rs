//! Brute-force oracles and random fixtures shared by the integration and
//! acceptance tests. Nothing here calls into the algorithms it checks.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rsw_core::{ingest_labels, LabelMap, MinimumSpanningTree, MstEdge, Raster, RegionStats};
use std::collections::VecDeque;

pub type Edge = (u32, u32, f64);

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Components by breadth-first search over the edges accepted by `keep`,
/// numbered by smallest member.
pub fn components(n: usize, edges: &[Edge], keep: impl Fn(usize, &Edge) -> bool) -> Vec<u32> {
    let mut adj = vec![Vec::new(); n];
    for (i, e) in edges.iter().enumerate() {
        if keep(i, e) {
            adj[e.0 as usize].push(e.1 as usize);
            adj[e.1 as usize].push(e.0 as usize);
        }
    }
    let mut label = vec![u32::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if label[s] != u32::MAX {
            continue;
        }
        label[s] = next;
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            for &w in &adj[v] {
                if label[w] == u32::MAX {
                    label[w] = next;
                    q.push_back(w);
                }
            }
        }
        next += 1;
    }
    label
}

pub fn num_components(labels: &[u32]) -> usize {
    labels.iter().copied().max().map_or(0, |m| m as usize + 1)
}

/// Minimum spanning-tree weight by enumerating every acyclic edge subset of
/// size `n - 1`.
pub fn exhaustive_mst_weight(n: usize, edges: &[Edge]) -> f64 {
    fn root(parent: &[usize], mut x: usize) -> usize {
        while parent[x] != x {
            x = parent[x];
        }
        x
    }
    fn go(n: usize, edges: &[Edge], i: usize, taken: usize, weight: f64, parent: &mut Vec<usize>, best: &mut f64) {
        if taken == n - 1 {
            *best = best.min(weight);
            return;
        }
        if i == edges.len() || edges.len() - i < n - 1 - taken {
            return;
        }
        let (a, b, w) = edges[i];
        let (ra, rb) = (root(parent, a as usize), root(parent, b as usize));
        if ra != rb {
            parent[ra] = rb;
            go(n, edges, i + 1, taken + 1, weight + w, parent, best);
            parent[ra] = ra;
        }
        go(n, edges, i + 1, taken, weight, parent, best);
    }
    let mut best = f64::INFINITY;
    let mut parent: Vec<usize> = (0..n).collect();
    if n == 1 {
        return 0.0;
    }
    go(n, edges, 0, 0, 0.0, &mut parent, &mut best);
    best
}

/// Random connected graph: a random spanning tree plus extra edges with
/// probability `density`. Weights are distinct when `distinct` is set,
/// otherwise drawn from a handful of integers.
pub fn random_graph(r: &mut ChaCha8Rng, n: usize, density: f64, distinct: bool) -> Vec<Edge> {
    let mut nodes: Vec<u32> = (0..n as u32).collect();
    nodes.shuffle(r);
    let mut pairs = std::collections::BTreeSet::new();
    for i in 1..n {
        let j = r.random_range(0..i);
        let (a, b) = (nodes[i], nodes[j]);
        pairs.insert((a.min(b), a.max(b)));
    }
    for a in 0..n as u32 {
        for b in a + 1..n as u32 {
            if r.random_bool(density) {
                pairs.insert((a, b));
            }
        }
    }
    let mut weights: Vec<f64> = if distinct {
        let mut w: Vec<f64> = (0..pairs.len()).map(|i| i as f64 * 0.5 + 0.25).collect();
        w.shuffle(r);
        w
    } else {
        (0..pairs.len()).map(|_| r.random_range(0..4) as f64).collect()
    };
    pairs
        .into_iter()
        .map(|(a, b)| (a, b, weights.pop().unwrap()))
        .collect()
}

/// Random tree with distinct weights and random areas in `1..=max_area`.
pub fn random_tree(r: &mut ChaCha8Rng, n: usize, max_area: u64) -> MinimumSpanningTree {
    let mut weights: Vec<f64> = (1..n).map(|i| i as f64).collect();
    weights.shuffle(r);
    let edges = (1..n)
        .map(|i| MstEdge {
            id: (i - 1) as u32,
            source: r.random_range(0..i) as u32,
            target: i as u32,
            weight: weights[i - 1],
        })
        .collect();
    let stats = (0..n)
        .map(|_| RegionStats::with_area(r.random_range(1..=max_area)))
        .collect();
    MinimumSpanningTree::from_tree_edges(stats, edges).unwrap()
}

pub fn tree_edges(t: &MinimumSpanningTree) -> Vec<Edge> {
    t.edges().iter().map(|e| (e.source, e.target, e.weight)).collect()
}

/// Indices of the tree edges on the path from `s` to `t`.
pub fn tree_path(n: usize, edges: &[Edge], s: u32, t: u32) -> Vec<usize> {
    let mut adj = vec![Vec::new(); n];
    for (i, e) in edges.iter().enumerate() {
        adj[e.0 as usize].push((e.1 as usize, i));
        adj[e.1 as usize].push((e.0 as usize, i));
    }
    let mut via = vec![None; n];
    let mut seen = vec![false; n];
    seen[s as usize] = true;
    let mut q = VecDeque::from([s as usize]);
    while let Some(v) = q.pop_front() {
        for &(w, i) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                via[w] = Some((v, i));
                q.push_back(w);
            }
        }
    }
    let mut path = Vec::new();
    let mut cur = t as usize;
    while let Some((prev, i)) = via[cur] {
        path.push(i);
        cur = prev;
    }
    path
}

pub fn path_max(n: usize, edges: &[Edge], s: u32, t: u32) -> f64 {
    tree_path(n, edges, s, t)
        .into_iter()
        .map(|i| edges[i].2)
        .fold(0.0, f64::max)
}

/// Marker segmentation by removing the heaviest edge between every pair of
/// markers.
pub fn brute_marker_cut(n: usize, edges: &[Edge], markers: &[u32]) -> Vec<u32> {
    let mut removed = vec![false; edges.len()];
    for (i, &a) in markers.iter().enumerate() {
        for &b in &markers[i + 1..] {
            if a == b {
                continue;
            }
            let path = tree_path(n, edges, a, b);
            let heaviest = *path
                .iter()
                .max_by(|&&x, &&y| edges[x].2.total_cmp(&edges[y].2))
                .unwrap();
            removed[heaviest] = true;
        }
    }
    components(n, edges, |i, _| !removed[i])
}

/// Canonical renumbering by first appearance.
pub fn canonical(labels: &[u32]) -> Vec<u32> {
    let mut map = std::collections::HashMap::new();
    labels
        .iter()
        .map(|&l| {
            let next = map.len() as u32;
            *map.entry(l).or_insert(next)
        })
        .collect()
}

/// Random image with a Voronoi-like fine partition of roughly `seeds`
/// regions and per-region intensities plus noise.
pub fn random_scene(r: &mut ChaCha8Rng, w: usize, h: usize, seeds: usize) -> (Raster, LabelMap) {
    let centers: Vec<(f64, f64)> = (0..seeds)
        .map(|_| (r.random_range(0.0..w as f64), r.random_range(0.0..h as f64)))
        .collect();
    let tone: Vec<f64> = (0..seeds).map(|_| r.random_range(20.0..235.0)).collect();
    let mut owner = vec![0u32; w * h];
    let mut data = vec![0u8; w * h];
    for y in 0..h {
        for x in 0..w {
            let (best, _) = centers
                .iter()
                .enumerate()
                .map(|(i, c)| (i, (c.0 - x as f64).powi(2) + (c.1 - y as f64).powi(2)))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            owner[y * w + x] = best as u32;
            let noise: f64 = r.random_range(-15.0..15.0);
            data[y * w + x] = (tone[best] + noise).clamp(0.0, 255.0) as u8;
        }
    }
    (
        Raster::gray8(w, h, data).unwrap(),
        ingest_labels(w, h, &owner).unwrap(),
    )
}

/// Flood fill of pixels with equal labels; returns per-pixel component ids.
pub fn pixel_components(w: usize, h: usize, labels: &[u32]) -> Vec<u32> {
    let mut edges = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let p = y * w + x;
            if x + 1 < w && labels[p] == labels[p + 1] {
                edges.push((p as u32, (p + 1) as u32, 0.0));
            }
            if y + 1 < h && labels[p] == labels[p + w] {
                edges.push((p as u32, (p + w) as u32, 0.0));
            }
        }
    }
    components(w * h, &edges, |_, _| true)
}

/// Poisson draw by inversion of the cumulative distribution.
pub fn poisson_draw(r: &mut ChaCha8Rng, mean: f64) -> u64 {
    let u: f64 = r.random();
    let mut k = 0u64;
    let mut p = (-mean).exp();
    let mut cdf = p;
    while u > cdf && k < 10_000 {
        k += 1;
        p *= mean / k as f64;
        cdf += p;
    }
    k
}
