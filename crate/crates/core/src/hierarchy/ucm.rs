//! Ultrametric contour maps on the inter-pixel grid.
//!
//! For a `w x h` image the map is `(2w + 1) x (2h + 1)`. Pixel `(x, y)` sits
//! at cell `(2x + 1, 2y + 1)`; the wall between horizontally adjacent pixels
//! is at `(2x + 2, 2y + 1)`, between vertically adjacent pixels at
//! `(2x + 1, 2y + 2)`. Cells with both coordinates even are junctions. The
//! outer frame stays at 0.

use super::SaliencyMap;
use crate::error::{Error, Result};
use crate::partition::{ingest_labels, LabelMap};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq)]
pub struct UltrametricContourMap {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

/// Linear display scaling recorded next to a quantized map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UcmScale {
    pub min: f64,
    pub max: f64,
}

impl UltrametricContourMap {
    /// Dimensions of the wall raster.
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    /// Dimensions of the underlying image.
    pub fn image_dims(&self) -> (usize, usize) {
        ((self.width - 1) / 2, (self.height - 1) / 2)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, cx: usize, cy: usize) -> f64 {
        self.values[cy * self.width + cx]
    }

    /// Regions obtained by treating every wall with value `> lambda` as a
    /// contour and flood-filling the pixels. Labels follow raster order.
    pub fn threshold_regions(&self, lambda: f64) -> LabelMap {
        let (w, h) = self.image_dims();
        let mut labels = vec![u32::MAX; w * h];
        let mut next = 0u32;
        let mut stack = Vec::new();
        for start in 0..w * h {
            if labels[start] != u32::MAX {
                continue;
            }
            labels[start] = next;
            stack.push(start);
            while let Some(p) = stack.pop() {
                let (x, y) = (p % w, p / w);
                let (cx, cy) = (2 * x + 1, 2 * y + 1);
                let mut go = |q: usize, wall: f64| {
                    if wall <= lambda && labels[q] == u32::MAX {
                        labels[q] = next;
                        stack.push(q);
                    }
                };
                if x > 0 {
                    go(p - 1, self.get(cx - 1, cy));
                }
                if x + 1 < w {
                    go(p + 1, self.get(cx + 1, cy));
                }
                if y > 0 {
                    go(p - w, self.get(cx, cy - 1));
                }
                if y + 1 < h {
                    go(p + w, self.get(cx, cy + 1));
                }
            }
            next += 1;
        }
        ingest_labels(w, h, &labels).expect("dimensions are consistent")
    }

    pub fn scale(&self) -> UcmScale {
        let (min, max) = self
            .values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        UcmScale { min, max }
    }

    /// Values mapped linearly from `[min, max]` onto `[0, 65535]`.
    pub fn to_u16(&self) -> (Vec<u16>, UcmScale) {
        let scale = self.scale();
        let range = scale.max - scale.min;
        let data = self
            .values
            .iter()
            .map(|&v| {
                if range > 0.0 {
                    ((v - scale.min) / range * 65535.0).round() as u16
                } else {
                    0
                }
            })
            .collect();
        (data, scale)
    }

    /// 8-bit display rendering with inverted contrast: strong contours dark,
    /// background white.
    pub fn to_inverted_u8(&self) -> Vec<u8> {
        let scale = self.scale();
        let range = scale.max - scale.min;
        self.values
            .iter()
            .map(|&v| {
                let s = if range > 0.0 { (v - scale.min) / range } else { 0.0 };
                255 - (s * 255.0).round() as u8
            })
            .collect()
    }
}

/// Paints every inter-pixel wall with the saliency of the label pair it
/// separates; junctions take the maximum of their incident walls.
pub fn render_ucm(saliency: &SaliencyMap, partition: &LabelMap) -> Result<UltrametricContourMap> {
    let (w, h) = partition.dims();
    let (cw, ch) = (2 * w + 1, 2 * h + 1);
    let mut values = vec![0.0f64; cw * ch];
    let lookup = |a: u32, b: u32| saliency.get(a, b).ok_or(Error::MissingEdge(a.min(b), a.max(b)));
    for y in 0..h {
        for x in 0..w {
            let l = partition.get(x, y);
            if x + 1 < w {
                let r = partition.get(x + 1, y);
                if r != l {
                    values[(2 * y + 1) * cw + 2 * x + 2] = lookup(l, r)?;
                }
            }
            if y + 1 < h {
                let d = partition.get(x, y + 1);
                if d != l {
                    values[(2 * y + 2) * cw + 2 * x + 1] = lookup(l, d)?;
                }
            }
        }
    }
    for cy in (2..ch - 1).step_by(2) {
        for cx in (2..cw - 1).step_by(2) {
            let m = values[(cy - 1) * cw + cx]
                .max(values[(cy + 1) * cw + cx])
                .max(values[cy * cw + cx - 1])
                .max(values[cy * cw + cx + 1]);
            values[cy * cw + cx] = m;
        }
    }
    Ok(UltrametricContourMap {
        width: cw,
        height: ch,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::{saliency_for_pairs, Merge, MergeTree};

    #[test]
    fn single_region_has_no_walls() {
        let part = LabelMap::new(3, 2, vec![0; 6]).unwrap();
        let tree = MergeTree::from_merges(1, vec![]).unwrap();
        let s = saliency_for_pairs(&tree, &[]).unwrap();
        let ucm = render_ucm(&s, &part).unwrap();
        assert_eq!(ucm.dims(), (7, 5));
        assert!(ucm.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn half_planes_give_one_vertical_wall() {
        let part = LabelMap::new(4, 3, vec![0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 1, 1]).unwrap();
        let tree = MergeTree::from_merges(2, vec![Merge { left: 0, right: 1, altitude: 7.0 }]).unwrap();
        let s = saliency_for_pairs(&tree, &[(0, 1)]).unwrap();
        let ucm = render_ucm(&s, &part).unwrap();
        let (cw, ch) = ucm.dims();
        for cy in 0..ch {
            for cx in 0..cw {
                let expected = if cx == 4 && cy > 0 && cy < ch - 1 { 7.0 } else { 0.0 };
                assert_eq!(ucm.get(cx, cy), expected, "cell ({cx}, {cy})");
            }
        }
        assert_eq!(ucm.threshold_regions(6.9).num_labels(), 2);
        assert_eq!(ucm.threshold_regions(7.0).num_labels(), 1);

        let (q, scale) = ucm.to_u16();
        assert_eq!(scale, UcmScale { min: 0.0, max: 7.0 });
        assert_eq!(q[cw + 4], 65535);
        assert_eq!(ucm.to_inverted_u8()[cw + 4], 0);
        assert_eq!(ucm.to_inverted_u8()[0], 255);
    }

    #[test]
    fn missing_pair_is_an_error() {
        let part = LabelMap::new(2, 1, vec![0, 1]).unwrap();
        let tree = MergeTree::from_merges(2, vec![Merge { left: 0, right: 1, altitude: 1.0 }]).unwrap();
        let s = saliency_for_pairs(&tree, &[]).unwrap();
        assert!(matches!(render_ucm(&s, &part), Err(Error::MissingEdge(0, 1))));
    }
}
