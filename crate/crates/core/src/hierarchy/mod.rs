//! Indexed hierarchies built from a weighted spanning tree: merge trees,
//! saliency, ultrametric contour maps and the segmentations that can be
//! read off them.

mod markers;
mod merge_tree;
mod saliency;
mod ucm;

pub use markers::{marker_cut, marker_forest, MarkerSegmentation};
pub use merge_tree::{build_merge_tree, HierarchyDocument, Merge, MergeTree};
pub use saliency::{saliency, saliency_for_pairs, AncestorIndex, SaliencyMap};
pub use ucm::{render_ucm, UcmScale, UltrametricContourMap};
