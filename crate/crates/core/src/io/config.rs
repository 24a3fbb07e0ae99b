use crate::error::{Error, Result};
use crate::prior::ProbabilityMap;
use crate::sws::{ChiKind, MarkerDensityModel};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DensityMode {
    Uniform,
    Prior,
    MultiPrior,
    Volume,
    Transition,
}

/// JSON description of a marker density:
/// `{"mode": "uniform" | "prior" | "multi-prior" | "volume" | "transition",
///   "lambda": <float>, "priors": ["file.pgm", ...]}`.
///
/// `volume` and `transition` modulate a uniform base density. `transition`
/// reads region moments from its single prior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityConfig {
    pub mode: DensityMode,
    pub lambda: f64,
    #[serde(default)]
    pub priors: Vec<PathBuf>,
}

impl DensityConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    fn validate(&self) -> Result<()> {
        let expected = match self.mode {
            DensityMode::Uniform | DensityMode::Volume => 0..=0,
            DensityMode::Prior | DensityMode::Transition => 1..=1,
            DensityMode::MultiPrior => 1..=usize::MAX,
        };
        if !expected.contains(&self.priors.len()) {
            return Err(Error::InvalidArgument(format!(
                "mode {:?} does not accept {} prior file(s)",
                self.mode,
                self.priors.len()
            )));
        }
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "lambda must be positive, got {}",
                self.lambda
            )));
        }
        Ok(())
    }

    /// Prior whose values feed the region stats, if the mode needs one.
    pub fn stats_prior(&self) -> Option<&Path> {
        match self.mode {
            DensityMode::Transition => self.priors.first().map(PathBuf::as_path),
            _ => None,
        }
    }

    /// Builds the model from already loaded priors, given in `priors` order.
    pub fn to_model(&self, priors: Vec<ProbabilityMap>) -> Result<MarkerDensityModel> {
        if priors.len() != self.priors.len() {
            return Err(Error::InvalidArgument(format!(
                "config lists {} priors, {} were loaded",
                self.priors.len(),
                priors.len()
            )));
        }
        let lambda = self.lambda;
        let uniform = MarkerDensityModel::Uniform { lambda };
        Ok(match self.mode {
            DensityMode::Uniform => uniform,
            DensityMode::Prior => MarkerDensityModel::PriorModulated {
                lambda,
                prior: priors.into_iter().next().expect("validated"),
            },
            DensityMode::MultiPrior => MarkerDensityModel::MultiPrior { lambda, priors },
            DensityMode::Volume => MarkerDensityModel::PairModulated {
                base: Box::new(uniform),
                chi: ChiKind::Volume,
            },
            DensityMode::Transition => MarkerDensityModel::PairModulated {
                base: Box::new(uniform),
                chi: ChiKind::Transition,
            },
        })
    }
}
