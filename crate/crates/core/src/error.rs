use thiserror::Error;

/// Errors produced by the segmentation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected_w}x{expected_h}, got {got_w}x{got_h}")]
    DimensionMismatch {
        expected_w: usize,
        expected_h: usize,
        got_w: usize,
        got_h: usize,
    },
    #[error("invalid label map: {0}")]
    InvalidLabels(String),
    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("graph/tree mismatch: {0}")]
    Mismatch(String),
    #[error("missing adjacency for label pair ({0}, {1})")]
    MissingEdge(u32, u32),
    #[error("malformed image: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dims(expected: (usize, usize), got: (usize, usize)) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch {
            expected_w: expected.0,
            expected_h: expected.1,
            got_w: got.0,
            got_h: got.1,
        });
    }
    Ok(())
}
