//! Binary Netpbm images: PGM (`P5`) and PPM (`P6`), 8 or 16 bits per sample.
//!
//! Header: magic, width, height and maxval as ASCII decimals separated by
//! whitespace (`#` comments allowed), then exactly one whitespace byte and
//! the raw samples. Samples are one byte when `maxval < 256`, otherwise two
//! bytes big-endian. Writers emit `P5\n{w} {h}\n{maxval}\n` followed by the
//! payload, with no comments.

use crate::error::{Error, Result};
use crate::raster::Raster;
use std::path::Path;

struct Header {
    channels: usize,
    width: usize,
    height: usize,
    maxval: u16,
    offset: usize,
}

fn parse_header(bytes: &[u8]) -> Result<Header> {
    let channels = match bytes.get(..2) {
        Some(b"P5") => 1,
        Some(b"P6") => 3,
        Some(m) => {
            return Err(Error::Format(format!(
                "unsupported magic {:?}",
                String::from_utf8_lossy(m)
            )))
        }
        None => return Err(Error::Format("file too short for a header".into())),
    };
    let mut pos = 2;
    let mut fields = [0u64; 3];
    for field in fields.iter_mut() {
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                _ => break,
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        if start == pos || pos - start > 10 {
            return Err(Error::Format(format!("malformed header field at byte {start}")));
        }
        *field = std::str::from_utf8(&bytes[start..pos])
            .expect("digits are ascii")
            .parse()
            .map_err(|_| Error::Format("header number out of range".into()))?;
    }
    if !bytes.get(pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(Error::Format("missing whitespace after maxval".into()));
    }
    let [width, height, maxval] = fields;
    if width == 0 || height == 0 {
        return Err(Error::Format(format!("invalid size {width}x{height}")));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(Error::Format(format!("invalid maxval {maxval}")));
    }
    Ok(Header {
        channels,
        width: width as usize,
        height: height as usize,
        maxval: maxval as u16,
        offset: pos + 1,
    })
}

pub fn decode_pnm(bytes: &[u8]) -> Result<Raster> {
    let h = parse_header(bytes)?;
    let samples = h
        .width
        .checked_mul(h.height)
        .and_then(|n| n.checked_mul(h.channels))
        .ok_or_else(|| Error::Format("image too large".into()))?;
    let wide = h.maxval > 255;
    let need = samples * if wide { 2 } else { 1 };
    let payload = &bytes[h.offset..];
    if payload.len() < need {
        return Err(Error::Format(format!(
            "truncated payload: expected {need} bytes, found {}",
            payload.len()
        )));
    }
    let data: Vec<u16> = if wide {
        payload[..need]
            .chunks_exact(2)
            .map(|b| u16::from_be_bytes([b[0], b[1]]))
            .collect()
    } else {
        payload[..need].iter().map(|&b| u16::from(b)).collect()
    };
    Raster::new(h.width, h.height, h.channels, h.maxval, data).map_err(|e| match e {
        Error::InvalidArgument(msg) => Error::Format(msg),
        other => other,
    })
}

pub fn encode_pnm(raster: &Raster) -> Vec<u8> {
    let magic = if raster.channels() == 1 { "P5" } else { "P6" };
    let mut out = format!(
        "{magic}\n{} {}\n{}\n",
        raster.width(),
        raster.height(),
        raster.maxval()
    )
    .into_bytes();
    if raster.maxval() > 255 {
        out.reserve(raster.data().len() * 2);
        for &v in raster.data() {
            out.extend_from_slice(&v.to_be_bytes());
        }
    } else {
        out.extend(raster.data().iter().map(|&v| v as u8));
    }
    out
}

pub fn read_image(path: impl AsRef<Path>) -> Result<Raster> {
    decode_pnm(&std::fs::read(path)?)
}

pub fn write_image(raster: &Raster, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, encode_pnm(raster))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_black_pixel() {
        let r = decode_pnm(b"P5\n1 1\n255\n\0").unwrap();
        assert_eq!(r.dims(), (1, 1));
        assert_eq!(r.data(), &[0]);
    }

    #[test]
    fn rgb_row_has_three_channels() {
        let r = decode_pnm(b"P6 3 1 255\n\x01\x02\x03\x04\x05\x06\x07\x08\x09").unwrap();
        assert_eq!(r.channels(), 3);
        assert_eq!(r.pixel(2), &[7, 8, 9]);
    }

    #[test]
    fn comments_and_sixteen_bit() {
        let r = decode_pnm(b"P5\n# made by hand\n2 1\n# more\n65535\n\x01\x00\xff\xff").unwrap();
        assert_eq!(r.data(), &[256, 65535]);
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(decode_pnm(b"P2\n1 1\n255\n0"), Err(Error::Format(_))));
        assert!(matches!(decode_pnm(b"P5\n2 2\n255\n\0\0\0"), Err(Error::Format(_))));
        assert!(matches!(decode_pnm(b"P5\n2 x\n255\n"), Err(Error::Format(_))));
        assert!(matches!(decode_pnm(b"P5\n1 1\n70000\n\0\0"), Err(Error::Format(_))));
        assert!(matches!(decode_pnm(b"P5\n1 1\n100\n\xff"), Err(Error::Format(_))));
        assert!(matches!(decode_pnm(b"P"), Err(Error::Format(_))));
    }

    #[test]
    fn encoded_layout_is_fixed() {
        let r = Raster::new(2, 1, 1, 65535, vec![1, 258]).unwrap();
        assert_eq!(encode_pnm(&r), b"P5\n2 1\n65535\n\x00\x01\x01\x02".to_vec());
    }
}
