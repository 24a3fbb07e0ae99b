//! Fine partitions: label maps over the pixel grid, their normalization and
//! validation, and labelings of graph nodes produced by hierarchy cuts.
//!
//! All connectivity is 4-connectivity.

use crate::error::{check_dims, Error, Result};
use crate::raster::Raster;

/// Default number of quantization levels for [`flat_zone_partition`].
pub const DEFAULT_QUANTIZATION: u32 = 16;

/// Row-major per-pixel region labels.
///
/// Labels are contiguous `0..num_labels` and every label class is a
/// non-empty 4-connected pixel set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    width: usize,
    height: usize,
    labels: Vec<u32>,
    num_labels: usize,
}

impl LabelMap {
    /// Validates `labels` without renumbering.
    pub fn new(width: usize, height: usize, labels: Vec<u32>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidLabels("empty label map".into()));
        }
        if labels.len() != width * height {
            return Err(Error::InvalidLabels(format!(
                "expected {} labels, got {}",
                width * height,
                labels.len()
            )));
        }
        let num_labels = labels.iter().copied().max().map_or(0, |m| m as usize + 1);
        let mut seen = vec![false; num_labels];
        for &l in &labels {
            seen[l as usize] = true;
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(Error::InvalidLabels(format!(
                "labels are not contiguous: {missing} is unused"
            )));
        }
        let (_, components) = label_components(width, height, &labels);
        if components != num_labels {
            return Err(Error::InvalidLabels(format!(
                "{num_labels} labels form {components} 4-connected components"
            )));
        }
        Ok(Self {
            width,
            height,
            labels,
            num_labels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn num_labels(&self) -> usize {
        self.num_labels
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u32 {
        self.labels[y * self.width + x]
    }

    /// Pixel count of every label.
    pub fn areas(&self) -> Vec<u64> {
        let mut areas = vec![0u64; self.num_labels];
        for &l in &self.labels {
            areas[l as usize] += 1;
        }
        areas
    }

    /// Merges fine regions according to a labeling of the nodes.
    pub fn coarsen(&self, nodes: &NodeLabeling) -> Result<LabelMap> {
        if nodes.len() != self.num_labels {
            return Err(Error::Mismatch(format!(
                "labeling covers {} nodes but the partition has {} regions",
                nodes.len(),
                self.num_labels
            )));
        }
        let labels = self.labels.iter().map(|&l| nodes.label(l as usize)).collect();
        LabelMap::new(self.width, self.height, labels)
    }
}

/// Connected-component labeling of equal-valued 4-connected pixels.
///
/// Components are numbered in raster order of their first pixel.
fn label_components<T: PartialEq>(width: usize, height: usize, values: &[T]) -> (Vec<u32>, usize) {
    const UNSET: u32 = u32::MAX;
    let mut out = vec![UNSET; values.len()];
    let mut stack = Vec::new();
    let mut next = 0u32;
    for start in 0..values.len() {
        if out[start] != UNSET {
            continue;
        }
        out[start] = next;
        stack.push(start);
        while let Some(p) = stack.pop() {
            let (x, y) = (p % width, p / width);
            let mut visit = |q: usize| {
                if out[q] == UNSET && values[q] == values[start] {
                    out[q] = next;
                    stack.push(q);
                }
            };
            if x > 0 {
                visit(p - 1);
            }
            if x + 1 < width {
                visit(p + 1);
            }
            if y > 0 {
                visit(p - width);
            }
            if y + 1 < height {
                visit(p + width);
            }
        }
        next += 1;
    }
    (out, next as usize)
}

/// Normalizes an arbitrary integer raster into a [`LabelMap`].
///
/// Every 4-connected class of equal input values becomes one label; labels
/// are numbered in raster order of first appearance, so the result is a
/// fixed point of this function.
pub fn ingest_labels(width: usize, height: usize, raster: &[u32]) -> Result<LabelMap> {
    if width == 0 || height == 0 || raster.len() != width * height {
        return Err(Error::InvalidLabels(format!(
            "raster of {} values does not fit {width}x{height}",
            raster.len()
        )));
    }
    let (labels, num_labels) = label_components(width, height, raster);
    Ok(LabelMap {
        width,
        height,
        labels,
        num_labels,
    })
}

/// Connected components of the channel-wise quantized image.
///
/// Each sample `v` maps to level `v * levels / (maxval + 1)`.
pub fn flat_zone_partition(image: &Raster, levels: u32) -> Result<LabelMap> {
    if !(2..=65536).contains(&levels) {
        return Err(Error::InvalidArgument(format!(
            "quantization must be in 2..=65536, got {levels}"
        )));
    }
    let ch = image.channels();
    let denom = u64::from(image.maxval()) + 1;
    let keys: Vec<u64> = image
        .data()
        .chunks_exact(ch)
        .map(|px| {
            px.iter().fold(0u64, |acc, &v| {
                (acc << 20) | (u64::from(v) * u64::from(levels) / denom)
            })
        })
        .collect();
    let (labels, num_labels) = label_components(image.width(), image.height(), &keys);
    Ok(LabelMap {
        width: image.width(),
        height: image.height(),
        labels,
        num_labels,
    })
}

/// Sorted, deduplicated `(min, max)` label pairs that touch across a
/// horizontal or vertical pixel boundary.
pub fn adjacent_pairs(map: &LabelMap) -> Vec<(u32, u32)> {
    let mut pairs = Vec::new();
    for_each_boundary(map, |a, b, _, _| pairs.push((a.min(b), a.max(b))));
    pairs.sort_unstable();
    pairs.dedup();
    pairs
}

/// Calls `f(label_p, label_q, p, q)` for every 4-adjacent pixel pair `p < q`
/// whose labels differ.
pub(crate) fn for_each_boundary(map: &LabelMap, mut f: impl FnMut(u32, u32, usize, usize)) {
    let (w, h) = map.dims();
    let labels = map.labels();
    for y in 0..h {
        for x in 0..w {
            let p = y * w + x;
            if x + 1 < w && labels[p] != labels[p + 1] {
                f(labels[p], labels[p + 1], p, p + 1);
            }
            if y + 1 < h && labels[p] != labels[p + w] {
                f(labels[p], labels[p + w], p, p + w);
            }
        }
    }
}

pub(crate) fn ensure_same_dims(map: &LabelMap, dims: (usize, usize)) -> Result<()> {
    check_dims(map.dims(), dims)
}

/// Assignment of graph nodes to segments.
///
/// Segments are numbered by their smallest node, so two labelings describing
/// the same partition compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeLabeling {
    labels: Vec<u32>,
    num_labels: usize,
}

impl NodeLabeling {
    /// Canonicalizes arbitrary per-node group keys (e.g. union-find roots).
    pub fn from_keys<K: Copy + Into<u64>>(keys: &[K]) -> Self {
        let mut remap = std::collections::HashMap::new();
        let labels = keys
            .iter()
            .map(|&k| {
                let next = remap.len() as u32;
                *remap.entry(k.into()).or_insert(next)
            })
            .collect();
        Self {
            labels,
            num_labels: remap.len(),
        }
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            labels: (0..n as u32).collect(),
            num_labels: n,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn num_labels(&self) -> usize {
        self.num_labels
    }

    #[inline]
    pub fn label(&self, node: usize) -> u32 {
        self.labels[node]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// True when every segment of `self` lies inside one segment of `coarser`.
    pub fn refines(&self, coarser: &NodeLabeling) -> bool {
        if self.len() != coarser.len() {
            return false;
        }
        let mut image = vec![u32::MAX; self.num_labels];
        for (node, &l) in self.labels.iter().enumerate() {
            let target = coarser.labels[node];
            let slot = &mut image[l as usize];
            if *slot == u32::MAX {
                *slot = target;
            } else if *slot != target {
                return false;
            }
        }
        true
    }
}
