//! Spatial priors: per-pixel probability maps of belonging to an object of
//! interest, their combination into marker-density factors, and per-region
//! moments.

use crate::error::{check_dims, Error, Result};
use crate::partition::LabelMap;
use crate::raster::Raster;

/// Per-pixel probability in `[0, 1]`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityMap {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl ProbabilityMap {
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 || values.len() != width * height {
            return Err(Error::InvalidArgument(format!(
                "{} prior values do not fit {width}x{height}",
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidArgument(format!(
                "prior value {v} outside [0, 1]"
            )));
        }
        Ok(Self {
            width,
            height,
            values,
        })
    }

    pub fn constant(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
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

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[y * self.width + x]
    }
}

/// Rescales a raster from `[0, maxval]` to `[0, 1]` and resamples it to
/// `target_dims` by nearest neighbour when the sizes differ.
///
/// Multi-channel rasters are reduced to the mean of their channels.
pub fn ingest_prior(raster: &Raster, target_dims: (usize, usize)) -> ProbabilityMap {
    let (sw, sh) = raster.dims();
    let (tw, th) = target_dims;
    let scale = f64::from(raster.maxval()) * raster.channels() as f64;
    let sample = |x: usize, y: usize| {
        let px = raster.pixel(y * sw + x);
        px.iter().map(|&v| f64::from(v)).sum::<f64>() / scale
    };
    let mut values = Vec::with_capacity(tw * th);
    for y in 0..th {
        let sy = y * sh / th;
        for x in 0..tw {
            let sx = x * sw / tw;
            values.push(sample(sx, sy).clamp(0.0, 1.0));
        }
    }
    ProbabilityMap {
        width: tw,
        height: th,
        values,
    }
}

/// Per-pixel multiplier of the base marker density. Unlike a
/// [`ProbabilityMap`] it may exceed 1.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityFactor {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl DensityFactor {
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

impl From<&ProbabilityMap> for DensityFactor {
    fn from(map: &ProbabilityMap) -> Self {
        Self {
            width: map.width,
            height: map.height,
            values: map.values.clone(),
        }
    }
}

/// Pixel-wise sum of several priors.
pub fn combine_priors(maps: &[ProbabilityMap]) -> Result<DensityFactor> {
    let first = maps
        .first()
        .ok_or_else(|| Error::InvalidArgument("no priors to combine".into()))?;
    let mut out = DensityFactor::from(first);
    for m in &maps[1..] {
        check_dims(out.dims(), m.dims())?;
        for (acc, v) in out.values.iter_mut().zip(&m.values) {
            *acc += v;
        }
    }
    Ok(out)
}

/// Mean and population standard deviation of prior values over a region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriorMoments {
    pub mean: f64,
    pub std: f64,
}

impl PriorMoments {
    /// Moments from running sums; a negative variance from rounding is
    /// clamped to zero.
    pub fn from_sums(area: f64, sum: f64, sq_sum: f64) -> Self {
        if area <= 0.0 {
            return Self { mean: 0.0, std: 0.0 };
        }
        let mean = sum / area;
        let var = (sq_sum / area - mean * mean).max(0.0);
        Self {
            mean,
            std: var.sqrt(),
        }
    }
}

/// Moments of `map` over every region of `partition`.
pub fn region_prior_stats(map: &ProbabilityMap, partition: &LabelMap) -> Result<Vec<PriorMoments>> {
    check_dims(partition.dims(), map.dims())?;
    let n = partition.num_labels();
    let mut sums = vec![(0.0f64, 0.0f64, 0.0f64); n];
    for (&l, &v) in partition.labels().iter().zip(&map.values) {
        let s = &mut sums[l as usize];
        s.0 += 1.0;
        s.1 += v;
        s.2 += v * v;
    }
    Ok(sums
        .into_iter()
        .map(|(a, s, q)| PriorMoments::from_sums(a, s, q))
        .collect())
}
