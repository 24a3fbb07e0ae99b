//! File formats: Netpbm rasters, 16-bit label maps, UCM rasters with their
//! scaling sidecar, hierarchy documents and density-model configs.

mod config;
mod pnm;

pub use config::{DensityConfig, DensityMode};
pub use pnm::{decode_pnm, encode_pnm, read_image, write_image};

use crate::error::{Error, Result};
use crate::hierarchy::{HierarchyDocument, MergeTree, UcmScale, UltrametricContourMap};
use crate::partition::{ingest_labels, LabelMap};
use crate::raster::Raster;
use std::path::{Path, PathBuf};

/// Largest label value a 16-bit PGM can hold.
pub const MAX_LABEL: usize = 65535;

/// Label map as a 16-bit PGM (`maxval` 65535).
pub fn labelmap_to_raster(labels: &LabelMap) -> Result<Raster> {
    if labels.num_labels() > MAX_LABEL + 1 {
        return Err(Error::InvalidArgument(format!(
            "{} labels do not fit a 16-bit PGM",
            labels.num_labels()
        )));
    }
    let data = labels.labels().iter().map(|&l| l as u16).collect();
    Raster::new(labels.width(), labels.height(), 1, 65535, data)
}

pub fn write_labelmap(labels: &LabelMap, path: impl AsRef<Path>) -> Result<()> {
    write_image(&labelmap_to_raster(labels)?, path)
}

/// Reads a single-channel label raster and normalizes it with
/// [`ingest_labels`].
pub fn read_labelmap(path: impl AsRef<Path>) -> Result<LabelMap> {
    let raster = read_image(path)?;
    if raster.channels() != 1 {
        return Err(Error::Format("label map must be a PGM".into()));
    }
    let values: Vec<u32> = raster.data().iter().map(|&v| u32::from(v)).collect();
    ingest_labels(raster.width(), raster.height(), &values)
}

/// Sidecar path of a UCM raster: same stem, `.json` extension.
pub fn ucm_sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("json")
}

/// Writes the UCM as a 16-bit PGM scaled linearly from `[min, max]`, and the
/// scale as `{"min": .., "max": ..}` next to it.
pub fn write_ucm(ucm: &UltrametricContourMap, path: impl AsRef<Path>) -> Result<UcmScale> {
    let path = path.as_ref();
    let (data, scale) = ucm.to_u16();
    let (w, h) = ucm.dims();
    write_image(&Raster::new(w, h, 1, 65535, data)?, path)?;
    std::fs::write(ucm_sidecar_path(path), serde_json::to_vec(&scale)?)?;
    Ok(scale)
}

/// Inverted-contrast 8-bit rendering of a UCM.
pub fn write_ucm_display(ucm: &UltrametricContourMap, path: impl AsRef<Path>) -> Result<()> {
    let (w, h) = ucm.dims();
    write_image(&Raster::gray8(w, h, ucm.to_inverted_u8())?, path)
}

pub fn write_hierarchy(tree: &MergeTree, path: impl AsRef<Path>) -> Result<()> {
    let mut bytes = serde_json::to_vec(&HierarchyDocument::from(tree))?;
    bytes.push(b'\n');
    std::fs::write(path, bytes)?;
    Ok(())
}

pub fn read_hierarchy(path: impl AsRef<Path>) -> Result<MergeTree> {
    let doc: HierarchyDocument = serde_json::from_slice(&std::fs::read(path)?)?;
    MergeTree::try_from(doc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labelmap_roundtrip_and_overflow() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("l.pgm");
        let m = LabelMap::new(3, 2, vec![0, 0, 1, 2, 2, 1]).unwrap();
        write_labelmap(&m, &p).unwrap();
        assert_eq!(read_labelmap(&p).unwrap(), m);

        let big = ingest_labels(70000, 1, &(0..70000).collect::<Vec<u32>>()).unwrap();
        assert!(write_labelmap(&big, dir.path().join("big.pgm")).is_err());
    }

    #[test]
    fn single_region_file_is_constant() {
        let m = LabelMap::new(4, 4, vec![0; 16]).unwrap();
        let bytes = encode_pnm(&labelmap_to_raster(&m).unwrap());
        let header = b"P5\n4 4\n65535\n";
        assert!(bytes.starts_with(header));
        assert!(bytes[header.len()..].iter().all(|&b| b == 0));
    }
}
