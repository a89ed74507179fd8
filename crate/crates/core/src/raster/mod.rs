//! RGB images with a validity mask, file I/O, and aggregation stacks.

mod image;
mod io;
mod stack;

pub use self::image::{Mask, RasterImage, Rgb};
pub use io::{
    decode_png, encode_png, read_image, read_mask_png, read_png, read_ppm, write_image, write_png,
    write_ppm,
};
pub use stack::{
    attribute_filter, build_stack, build_stack_with_cells, AggregationStack, StackLayer,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RasterError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("image decode error: {0}")]
    Decode(String),
    #[error("malformed PPM: {0}")]
    Ppm(String),
    #[error("dimension mismatch: expected {expected:?}, got {got:?}")]
    Dimensions {
        expected: (u32, u32),
        got: (u32, u32),
    },
    #[error("no source objects")]
    NoSources,
    #[error("no same-attribute sources")]
    NoSameAttributeSources,
    #[error("target draw {0} out of range")]
    BadTarget(usize),
    #[error("unsupported image format for {0}")]
    UnsupportedFormat(String),
}
