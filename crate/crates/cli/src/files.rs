//! On-disk interchange: centroid JSON, program text, run manifests, images.

use std::fs;
use std::path::Path;

use regprog::dsl::{self, DrawCommand, RegularityProgram};
use regprog::geometry::{CentroidSet, Point2};
use regprog::raster::{self, Mask, RasterImage};
use regprog::synth::SynthConfig;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CentroidPoint {
    pub x: f64,
    pub y: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attribute: Option<i64>,
}

/// `{ "width", "height", "points": [{"x", "y", "attribute"?}] }`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CentroidFile {
    pub width: u32,
    pub height: u32,
    pub points: Vec<CentroidPoint>,
}

impl CentroidFile {
    pub fn from_set(set: &CentroidSet<f64>) -> Self {
        Self {
            width: set.width(),
            height: set.height(),
            points: set
                .points()
                .iter()
                .map(|p| CentroidPoint {
                    x: p.x,
                    y: p.y,
                    attribute: None,
                })
                .collect(),
        }
    }

    pub fn from_draws(draws: &[DrawCommand], width: u32, height: u32) -> Self {
        Self {
            width,
            height,
            points: draws
                .iter()
                .map(|d| CentroidPoint {
                    x: d.position.x as f64,
                    y: d.position.y as f64,
                    attribute: Some(d.attribute as i64),
                })
                .collect(),
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.width == 0 || self.height == 0 {
            return Err(format!(
                "bounds must be positive, got {}x{}",
                self.width, self.height
            ));
        }
        for (k, p) in self.points.iter().enumerate() {
            if !(p.x.is_finite() && p.y.is_finite()) {
                return Err(format!("point {k} has a non-finite coordinate"));
            }
            if p.x < 0.0 || p.y < 0.0 || p.x >= self.width as f64 || p.y >= self.height as f64 {
                return Err(format!(
                    "point {k} ({}, {}) lies outside the {}x{} frame",
                    p.x, p.y, self.width, self.height
                ));
            }
            if matches!(p.attribute, Some(a) if a < 0) {
                return Err(format!("point {k} has a negative attribute"));
            }
        }
        Ok(())
    }

    pub fn to_set(&self) -> Result<CentroidSet<f64>, CliError> {
        let pts = self.points.iter().map(|p| Point2::new(p.x, p.y)).collect();
        Ok(CentroidSet::new(pts, self.width, self.height)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("centroid file serializes") + "\n"
    }
}

/// The configuration and outcome of one `synth` run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub config: SynthConfig,
    pub use_attributes: bool,
    /// The centroids the synthesis ran on.
    pub centroids: CentroidFile,
    /// Image used for attribute search, relative to the working directory
    /// of the original run.
    #[serde(default)]
    pub image: Option<String>,
    pub program: String,
    pub costs: Costs,
    pub timing: Timing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Costs {
    pub lattice: f64,
    #[serde(default)]
    pub attribute: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Timing {
    pub detect_seconds: Option<f64>,
    pub synth_seconds: f64,
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::file(path, e))
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::file(path, e))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::schema(path, e.to_string()))
}

pub fn read_centroids(path: &Path) -> Result<CentroidFile, CliError> {
    let file: CentroidFile = read_json(path)?;
    file.validate().map_err(|m| CliError::schema(path, m))?;
    Ok(file)
}

pub fn read_manifest(path: &Path) -> Result<RunManifest, CliError> {
    let m: RunManifest = read_json(path)?;
    m.centroids
        .validate()
        .map_err(|msg| CliError::schema(path, msg))?;
    Ok(m)
}

pub fn read_program(path: &Path) -> Result<RegularityProgram, CliError> {
    dsl::parse(&read_text(path)?).map_err(|e| CliError::dsl(path, e))
}

pub fn read_image(path: &Path) -> Result<RasterImage, CliError> {
    raster::read_image(path).map_err(|e| CliError::raster(path, e))
}

pub fn read_mask(path: &Path) -> Result<Mask, CliError> {
    raster::read_mask_png(path).map_err(|e| CliError::raster(path, e))
}

pub fn write_image(path: &Path, img: &RasterImage) -> Result<(), CliError> {
    raster::write_image(path, img).map_err(|e| CliError::raster(path, e))
}

/// Path for a file that lives next to `out`, e.g. the manifest beside the
/// program.
pub fn sibling(out: &Path, name: &str) -> std::path::PathBuf {
    out.parent().map_or_else(|| name.into(), |d| d.join(name))
}
