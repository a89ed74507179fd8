use std::io::Cursor;
use std::path::Path;

use image::{ColorType, DynamicImage, ImageEncoder, ImageFormat};

use super::{Mask, RasterError, RasterImage};

/// Decodes a PNG. Grayscale is expanded to RGB; pixels with alpha 0 become
/// holes.
pub fn decode_png(bytes: &[u8]) -> Result<RasterImage, RasterError> {
    let img = image::load_from_memory_with_format(bytes, ImageFormat::Png)
        .map_err(|e| RasterError::Decode(e.to_string()))?;
    Ok(from_dynamic(img))
}

fn from_dynamic(img: DynamicImage) -> RasterImage {
    let (w, h) = (img.width(), img.height());
    if img.color().has_alpha() {
        let rgba = img.to_rgba8();
        let mut out = RasterImage::empty(w, h);
        for (x, y, p) in rgba.enumerate_pixels() {
            if p[3] != 0 {
                out.set(x, y, [p[0], p[1], p[2]]);
            }
        }
        out
    } else {
        let rgb = img.to_rgb8();
        RasterImage::from_fn(w, h, |x, y| {
            let p = rgb.get_pixel(x, y);
            [p[0], p[1], p[2]]
        })
    }
}

/// Encodes RGB when the image has no holes, RGBA with alpha 0 at holes
/// otherwise.
pub fn encode_png(img: &RasterImage) -> Result<Vec<u8>, RasterError> {
    let mut buf = Vec::new();
    let enc = image::codecs::png::PngEncoder::new(Cursor::new(&mut buf));
    let result = if img.is_complete() {
        let data: Vec<u8> = img.pixels().iter().flatten().copied().collect();
        enc.write_image(&data, img.width(), img.height(), ColorType::Rgb8.into())
    } else {
        let data: Vec<u8> = img
            .pixels()
            .iter()
            .zip(img.validity())
            .flat_map(|(p, &v)| [p[0], p[1], p[2], if v { 255 } else { 0 }])
            .collect();
        enc.write_image(&data, img.width(), img.height(), ColorType::Rgba8.into())
    };
    result.map_err(|e| RasterError::Decode(e.to_string()))?;
    Ok(buf)
}

pub fn read_png(path: impl AsRef<Path>) -> Result<RasterImage, RasterError> {
    decode_png(&std::fs::read(path)?)
}

pub fn write_png(path: impl AsRef<Path>, img: &RasterImage) -> Result<(), RasterError> {
    std::fs::write(path, encode_png(img)?)?;
    Ok(())
}

/// Reads a single-channel (or any) PNG as a hole mask: non-zero luma marks a
/// hole.
pub fn read_mask_png(path: impl AsRef<Path>) -> Result<Mask, RasterError> {
    let img = image::load_from_memory_with_format(&std::fs::read(path)?, ImageFormat::Png)
        .map_err(|e| RasterError::Decode(e.to_string()))?;
    let luma = img.to_luma8();
    let mut m = Mask::new(luma.width(), luma.height(), false);
    for (x, y, p) in luma.enumerate_pixels() {
        if p[0] != 0 {
            m.set(x, y, true);
        }
    }
    Ok(m)
}

/// Binary PPM (P6, maxval 255). PPM carries no mask: all pixels are valid.
pub fn read_ppm(bytes: &[u8]) -> Result<RasterImage, RasterError> {
    let mut pos = 0usize;
    let mut fields = Vec::new();
    while fields.len() < 4 {
        while pos < bytes.len() && (bytes[pos].is_ascii_whitespace() || bytes[pos] == b'#') {
            if bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            } else {
                pos += 1;
            }
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(RasterError::Ppm("truncated header".into()));
        }
        fields.push(String::from_utf8_lossy(&bytes[start..pos]).into_owned());
    }
    if fields[0] != "P6" {
        return Err(RasterError::Ppm(format!("unsupported magic {}", fields[0])));
    }
    let parse = |s: &str| {
        s.parse::<u32>()
            .map_err(|_| RasterError::Ppm(format!("bad number {s}")))
    };
    let (w, h, maxval) = (parse(&fields[1])?, parse(&fields[2])?, parse(&fields[3])?);
    if maxval != 255 {
        return Err(RasterError::Ppm(format!("unsupported maxval {maxval}")));
    }
    pos += 1; // single whitespace after maxval
    let need = (w as usize) * (h as usize) * 3;
    let data = bytes
        .get(pos..pos + need)
        .ok_or_else(|| RasterError::Ppm("truncated pixel data".into()))?;
    Ok(RasterImage::from_fn(w, h, |x, y| {
        let k = ((y * w + x) * 3) as usize;
        [data[k], data[k + 1], data[k + 2]]
    }))
}

/// Writes P6; holes are written as black.
pub fn write_ppm(img: &RasterImage) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    for p in img.pixels() {
        out.extend_from_slice(p);
    }
    out
}

fn extension(path: &Path) -> String {
    path.extension()
        .and_then(|e| e.to_str())
        .unwrap_or("")
        .to_ascii_lowercase()
}

/// Reads `.png` or `.ppm` by extension.
pub fn read_image(path: impl AsRef<Path>) -> Result<RasterImage, RasterError> {
    let path = path.as_ref();
    match extension(path).as_str() {
        "png" => read_png(path),
        "ppm" => read_ppm(&std::fs::read(path)?),
        _ => Err(RasterError::UnsupportedFormat(path.display().to_string())),
    }
}

/// Writes `.png` or `.ppm` by extension.
pub fn write_image(path: impl AsRef<Path>, img: &RasterImage) -> Result<(), RasterError> {
    let path = path.as_ref();
    match extension(path).as_str() {
        "png" => write_png(path, img),
        "ppm" => Ok(std::fs::write(path, write_ppm(img))?),
        _ => Err(RasterError::UnsupportedFormat(path.display().to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RasterImage {
        RasterImage::from_fn(7, 5, |x, y| [(x * 30) as u8, (y * 40) as u8, (x * y) as u8])
    }

    #[test]
    fn png_round_trip_with_holes() {
        let mut img = sample();
        let bytes = encode_png(&img).unwrap();
        assert_eq!(decode_png(&bytes).unwrap(), img);
        img.punch(3, 2);
        img.punch(0, 0);
        let back = decode_png(&encode_png(&img).unwrap()).unwrap();
        assert_eq!(back, img);
        assert_eq!(back.hole_count(), 2);
    }

    #[test]
    fn ppm_round_trip() {
        let img = sample();
        let bytes = write_ppm(&img);
        assert!(bytes.starts_with(b"P6\n7 5\n255\n"));
        assert_eq!(read_ppm(&bytes).unwrap(), img);
    }

    #[test]
    fn ppm_with_comment_and_errors() {
        let mut bytes = b"P6 # comment\n2 1\n255\n".to_vec();
        bytes.extend_from_slice(&[1, 2, 3, 4, 5, 6]);
        let img = read_ppm(&bytes).unwrap();
        assert_eq!(img.get(1, 0), Some([4, 5, 6]));
        assert!(read_ppm(b"P3\n1 1\n255\n").is_err());
        assert!(read_ppm(b"P6\n2 2\n255\n\x00").is_err());
    }

    #[test]
    fn gray_png_expands() {
        let gray = image::GrayImage::from_fn(3, 2, |x, _| image::Luma([x as u8 * 50]));
        let mut buf = Vec::new();
        DynamicImage::ImageLuma8(gray)
            .write_to(&mut Cursor::new(&mut buf), ImageFormat::Png)
            .unwrap();
        let img = decode_png(&buf).unwrap();
        assert_eq!(img.get(2, 1), Some([100, 100, 100]));
    }
}
