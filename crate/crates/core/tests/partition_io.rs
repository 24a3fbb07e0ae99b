mod common;

use common::{pixel_components, rng};
use proptest::prelude::*;
use rand::Rng;
use rsw_core::io::{decode_pnm, encode_pnm, read_labelmap, write_labelmap, write_ucm};
use rsw_core::{flat_zone_partition, ingest_labels, LabelMap, Raster};

fn check_label_map(map: &LabelMap) {
    let (w, h) = map.dims();
    let labels = map.labels();
    let n = map.num_labels();
    assert!(labels.iter().all(|&l| (l as usize) < n));
    // Every class is one 4-connected component.
    let comp = pixel_components(w, h, labels);
    assert_eq!(common::num_components(&comp), n);
}

#[test]
fn ingest_keeps_pixel_counts_of_connected_pieces() {
    let mut r = rng(21);
    for _ in 0..20 {
        let (w, h) = (r.random_range(1..20), r.random_range(1..20));
        let raw: Vec<u32> = (0..w * h).map(|_| r.random_range(0..4) * 10).collect();
        let map = ingest_labels(w, h, &raw).unwrap();
        check_label_map(&map);
        let comp = pixel_components(w, h, &raw);
        assert_eq!(map.num_labels(), common::num_components(&comp));
        // Same pixel grouping as the flood-fill oracle.
        assert_eq!(common::canonical(map.labels()), common::canonical(&comp));
    }
}

#[test]
fn ramp_quantizes_into_bands() {
    let (w, h) = (5, 256);
    let data: Vec<u8> = (0..w * h).map(|i| (i / w) as u8).collect();
    let map = flat_zone_partition(&Raster::gray8(w, h, data).unwrap(), 4).unwrap();
    assert_eq!(map.num_labels(), 4);
    for y in 0..h {
        for x in 0..w {
            assert_eq!(map.get(x, y) as usize, y / 64);
        }
    }
}

#[test]
fn checkerboard_flat_zones_are_single_pixels() {
    let data: Vec<u8> = (0..36).map(|i| if (i % 6 + i / 6) % 2 == 0 { 0 } else { 255 }).collect();
    let map = flat_zone_partition(&Raster::gray8(6, 6, data).unwrap(), 16).unwrap();
    assert_eq!(map.num_labels(), 36);
}

#[test]
fn pnm_header_cases() {
    let one = decode_pnm(b"P5\n1 1\n255\n\x00").unwrap();
    assert_eq!((one.width(), one.height(), one.data()), (1, 1, &[0u16][..]));
    let rgb = decode_pnm(b"P6\n3 1\n255\n\x01\x02\x03\x04\x05\x06\x07\x08\x09").unwrap();
    assert_eq!(rgb.channels(), 3);
    assert_eq!(rgb.pixel(2), &[7, 8, 9]);
    assert!(decode_pnm(b"P3\n1 1\n255\n0").is_err());
    assert!(decode_pnm(b"P5\n2 2\n255\n\x00").is_err());
}

#[test]
fn label_and_ucm_files_are_deterministic() {
    let mut r = rng(22);
    let (image, fine) = common::random_scene(&mut r, 32, 24, 30);
    let g = rsw_core::FineGraph::build(&image, Some(fine), None, Default::default()).unwrap();
    let tree = rsw_core::FineGraph::hierarchy(&g.mst);
    let ucm = g.ucm(&tree).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for run in 0..2 {
        let l = dir.path().join(format!("l{run}.pgm"));
        let u = dir.path().join(format!("u{run}.pgm"));
        write_labelmap(&g.partition, &l).unwrap();
        write_ucm(&ucm, &u).unwrap();
        outputs.push((
            std::fs::read(&l).unwrap(),
            std::fs::read(&u).unwrap(),
            std::fs::read(u.with_extension("json")).unwrap(),
        ));
        assert_eq!(read_labelmap(&l).unwrap(), g.partition);
    }
    assert_eq!(outputs[0], outputs[1]);
}

proptest! {
    #[test]
    fn ingest_is_idempotent(w in 1usize..12, h in 1usize..12, seed in any::<u64>()) {
        let mut r = rng(seed);
        let raw: Vec<u32> = (0..w * h).map(|_| r.random_range(0..3)).collect();
        let once = ingest_labels(w, h, &raw).unwrap();
        let twice = ingest_labels(w, h, once.labels()).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn flat_zones_are_valid_label_maps(
        w in 1usize..16, h in 1usize..16, levels in 2u32..20, rgb in any::<bool>(), seed in any::<u64>()
    ) {
        let mut r = rng(seed);
        let ch = if rgb { 3 } else { 1 };
        let data: Vec<u16> = (0..w * h * ch).map(|_| r.random_range(0..8) * 32).collect();
        let image = Raster::new(w, h, ch, 255, data).unwrap();
        let map = flat_zone_partition(&image, levels).unwrap();
        check_label_map(&map);
        prop_assert!(LabelMap::new(w, h, map.labels().to_vec()).is_ok());
    }

    #[test]
    fn pnm_roundtrip(
        w in 1usize..10, h in 1usize..10, rgb in any::<bool>(), maxval in 1u16..=65535, seed in any::<u64>()
    ) {
        let mut r = rng(seed);
        let ch = if rgb { 3 } else { 1 };
        let data: Vec<u16> = (0..w * h * ch).map(|_| r.random_range(0..=maxval)).collect();
        let raster = Raster::new(w, h, ch, maxval, data).unwrap();
        prop_assert_eq!(decode_pnm(&encode_pnm(&raster)).unwrap(), raster);
    }
}
