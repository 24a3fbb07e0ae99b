use crate::error::{Error, Result};

/// Maximum number of interleaved channels a raster can hold (RGB).
pub const MAX_CHANNELS: usize = 3;

/// An interleaved, row-major image with 1 or 3 channels and up to 16 bits
/// per sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    width: usize,
    height: usize,
    channels: usize,
    maxval: u16,
    data: Vec<u16>,
}

impl Raster {
    pub fn new(
        width: usize,
        height: usize,
        channels: usize,
        maxval: u16,
        data: Vec<u16>,
    ) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidArgument("raster must be non-empty".into()));
        }
        if channels != 1 && channels != MAX_CHANNELS {
            return Err(Error::InvalidArgument(format!(
                "unsupported channel count {channels}"
            )));
        }
        if maxval == 0 {
            return Err(Error::InvalidArgument("maxval must be positive".into()));
        }
        if data.len() != width * height * channels {
            return Err(Error::InvalidArgument(format!(
                "expected {} samples, got {}",
                width * height * channels,
                data.len()
            )));
        }
        if let Some(v) = data.iter().find(|&&v| v > maxval) {
            return Err(Error::InvalidArgument(format!(
                "sample {v} exceeds maxval {maxval}"
            )));
        }
        Ok(Self {
            width,
            height,
            channels,
            maxval,
            data,
        })
    }

    /// Single-channel raster from 8-bit samples.
    pub fn gray8(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        Self::new(width, height, 1, 255, data.into_iter().map(u16::from).collect())
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

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn maxval(&self) -> u16 {
        self.maxval
    }

    pub fn data(&self) -> &[u16] {
        &self.data
    }

    /// Samples of the pixel at linear index `idx`.
    #[inline]
    pub fn pixel(&self, idx: usize) -> &[u16] {
        &self.data[idx * self.channels..(idx + 1) * self.channels]
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, c: usize) -> u16 {
        self.data[(y * self.width + x) * self.channels + c]
    }
}
