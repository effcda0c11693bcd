use std::io;

use thiserror::Error;

/// Precondition violations on otherwise well-formed values.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("the unknown roof class has no gable/hip or complexity features")]
    UnknownRoofHasNoFeatures,
    #[error("unrecognized roof code {0:?}")]
    BadRoofCode(String),
    #[error("unrecognized roof source {0:?}")]
    BadRoofSource(String),
    #[error("latitude {0} is outside the Web Mercator range")]
    BeyondMercatorCutoff(f64),
    #[error("coordinate ({lat}, {lon}) is out of range")]
    BadCoordinate { lat: f64, lon: f64 },
    #[error("building area must be positive, got {0}")]
    NonPositiveArea(f64),
    #[error("image size {0} px is outside 224..=1280")]
    ImageSizeOutOfRange(u32),
    #[error("no zoom in 15..=21 covers a {extent_m} m crop at latitude {lat} with {size_px} px")]
    UncoverableExtent { lat: f64, extent_m: f64, size_px: u32 },
    #[error("building {0} is not in the neighbor index")]
    NotIndexed(String),
    #[error("search radius must be positive, got {0}")]
    BadRadius(f64),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("model file: {0}")]
    Model(String),
    #[error("{0}")]
    Input(String),
}

impl Error {
    pub(crate) fn from_csv(err: csv::Error) -> Error {
        let line = err.position().map(|p| p.line()).unwrap_or(0);
        match err.into_kind() {
            csv::ErrorKind::Io(e) => Error::Io(e),
            kind => Error::Parse { line, message: csv_kind_message(&kind) },
        }
    }
}

fn csv_kind_message(kind: &csv::ErrorKind) -> String {
    match kind {
        csv::ErrorKind::Utf8 { err, .. } => format!("invalid UTF-8: {err}"),
        csv::ErrorKind::UnequalLengths { expected_len, len, .. } => {
            format!("expected {expected_len} fields, found {len}")
        }
        other => format!("{other:?}"),
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
