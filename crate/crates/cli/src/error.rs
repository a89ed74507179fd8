use std::path::{Path, PathBuf};

use regprog::detect::DetectError;
use regprog::dsl::DslError;
use regprog::geometry::GeometryError;
use regprog::manip::ManipError;
use regprog::raster::RasterError;
use regprog::synth::SynthError;
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot access {}: {source}", path.display())]
    File {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {message}", path.display())]
    Schema { path: PathBuf, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("replayed program differs from {}", path.display())]
    ReplayMismatch { path: PathBuf },
    #[error(transparent)]
    Detect(#[from] DetectError),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error(transparent)]
    Manip(#[from] ManipError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl CliError {
    pub fn file(path: &Path, source: std::io::Error) -> Self {
        CliError::File {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn schema(path: &Path, message: impl Into<String>) -> Self {
        CliError::Schema {
            path: path.to_path_buf(),
            message: message.into(),
        }
    }

    /// Maps an image read failure to a file or schema error.
    pub fn raster(path: &Path, e: RasterError) -> Self {
        match e {
            RasterError::Io(source) => CliError::file(path, source),
            other => CliError::schema(path, other.to_string()),
        }
    }

    pub fn dsl(path: &Path, e: DslError) -> Self {
        CliError::schema(path, e.to_string())
    }

    /// True for problems with the inputs themselves, as opposed to failures
    /// of the algorithms on valid inputs.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            CliError::File { .. } | CliError::Schema { .. } | CliError::Usage(_)
        )
    }

    pub fn exit_code(&self) -> i32 {
        if self.is_input_error() {
            2
        } else {
            1
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::File { .. } => "file_error",
            CliError::Schema { .. } => "schema_error",
            CliError::Usage(_) => "usage_error",
            CliError::ReplayMismatch { .. } => "replay_mismatch",
            CliError::Detect(e) => match e {
                DetectError::TooSmall { .. } => "image_too_small",
                DetectError::NoDominantDisplacement { .. } => "no_dominant_displacement",
                DetectError::NoSecondDirection { .. } => "no_second_direction",
                DetectError::NoObjects => "no_objects",
                _ => "detect_failed",
            },
            CliError::Synth(e) => match e {
                SynthError::InsufficientCentroids { .. } => "insufficient_centroids",
                SynthError::NoLattice | SynthError::EmptyLattice => "no_lattice",
                SynthError::NoInliers => "no_inliers",
                SynthError::InvalidConfig(_) => "invalid_config",
                _ => "synth_failed",
            },
            CliError::Manip(e) => match e {
                ManipError::Uncovered { .. } => "uncovered_hole",
                ManipError::NoNewDraws => "no_new_draws",
                ManipError::Raster(RasterError::NoSameAttributeSources) => {
                    "no_same_attribute_sources"
                }
                ManipError::Raster(RasterError::NoSources) => "no_sources",
                ManipError::Raster(RasterError::Dimensions { .. }) => "dimension_mismatch",
                _ => "manipulation_failed",
            },
            CliError::Geometry(_) => "invalid_centroids",
        }
    }

    pub fn detail(&self) -> Value {
        match self {
            CliError::File { path, source } => {
                json!({ "path": path, "io": source.kind().to_string() })
            }
            CliError::Schema { path, .. } | CliError::ReplayMismatch { path } => {
                json!({ "path": path })
            }
            CliError::Detect(DetectError::NoDominantDisplacement { votes }) => {
                json!({ "votes": votes })
            }
            CliError::Synth(SynthError::InsufficientCentroids { found }) => {
                json!({ "found": found, "required": 4 })
            }
            CliError::Manip(ManipError::Uncovered { count, pixels }) => {
                json!({ "count": count, "pixels": pixels })
            }
            CliError::Manip(ManipError::Raster(RasterError::Dimensions { expected, got })) => {
                json!({ "expected": expected, "got": got })
            }
            _ => json!({}),
        }
    }

    /// The stderr document: `{"code", "message", "detail"}`.
    pub fn to_json(&self) -> Value {
        json!({
            "code": self.code(),
            "message": self.to_string(),
            "detail": self.detail(),
        })
    }
}
