use std::io::{self, Cursor};
use std::path::Path;

use image::codecs::bmp::BmpEncoder;
use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{DynamicImage, ExtendedColorType, ImageEncoder, ImageError, ImageReader};
use msface_core::imaging::{thermal_to_gray, Image, ImagingError};

use super::{read_to_string, write_file};
use crate::error::{Error, Result};

fn quantize(img: &Image) -> Vec<u8> {
    img.pixels().iter().map(|v| (v * 255.0).round().clamp(0.0, 255.0) as u8).collect()
}

fn decode_error(path: &Path, e: ImageError) -> Error {
    match e {
        ImageError::IoError(source) => Error::io(path, source),
        ImageError::Unsupported(u) => Error::UnsupportedFormat { path: path.into(), detail: u.to_string() },
        // Truncated or corrupt payloads surface as decoding errors.
        other => Error::io(path, io::Error::new(io::ErrorKind::InvalidData, other.to_string())),
    }
}

/// Loads an 8-bit single-channel BMP or binary PGM; byte `v` maps to `v / 255`.
///
/// Palette BMPs decode to RGB; they are accepted when the palette is gray.
pub fn load_grayscale(path: &Path) -> Result<Image> {
    let reader = ImageReader::open(path)
        .map_err(|e| Error::io(path, e))?
        .with_guessed_format()
        .map_err(|e| Error::io(path, e))?;
    if reader.format().is_none() {
        return Err(Error::UnsupportedFormat { path: path.into(), detail: "unrecognized container".into() });
    }
    let decoded = reader.decode().map_err(|e| decode_error(path, e))?;
    let (w, h) = (decoded.width() as usize, decoded.height() as usize);
    let bytes: Vec<u8> = match decoded {
        DynamicImage::ImageLuma8(buf) => buf.into_raw(),
        DynamicImage::ImageRgb8(buf) => {
            let raw = buf.into_raw();
            gray_from_channels(path, &raw, 3)?
        }
        DynamicImage::ImageRgba8(buf) => {
            let raw = buf.into_raw();
            gray_from_channels(path, &raw, 4)?
        }
        other => {
            return Err(Error::UnsupportedFormat {
                path: path.into(),
                detail: format!("expected 8-bit grayscale, found {:?}", other.color()),
            })
        }
    };
    let pixels = bytes.iter().map(|&b| f64::from(b) / 255.0).collect();
    Ok(Image::new(w, h, pixels)?)
}

fn gray_from_channels(path: &Path, raw: &[u8], n: usize) -> Result<Vec<u8>> {
    raw.chunks_exact(n)
        .map(|px| {
            if px[0] == px[1] && px[1] == px[2] {
                Ok(px[0])
            } else {
                Err(Error::UnsupportedFormat { path: path.into(), detail: "color image".into() })
            }
        })
        .collect()
}

fn encode(img: &Image, write: impl FnOnce(&mut Cursor<Vec<u8>>, &[u8], u32, u32) -> image::ImageResult<()>) -> Vec<u8> {
    let mut out = Cursor::new(Vec::new());
    write(&mut out, &quantize(img), img.width() as u32, img.height() as u32).expect("in-memory 8-bit encode");
    out.into_inner()
}

/// Binary (P5) PGM, quantized to 8 bits.
pub fn save_pgm(path: &Path, img: &Image) -> Result<()> {
    let bytes = encode(img, |out, buf, w, h| {
        PnmEncoder::new(out).with_subtype(PnmSubtype::Graymap(SampleEncoding::Binary)).write_image(
            buf,
            w,
            h,
            ExtendedColorType::L8,
        )
    });
    write_file(path, &bytes)
}

/// Uncompressed 8-bit BMP.
pub fn save_bmp(path: &Path, img: &Image) -> Result<()> {
    let bytes = encode(img, |out, buf, w, h| BmpEncoder::new(out).encode(buf, w, h, ExtendedColorType::L8));
    write_file(path, &bytes)
}

/// Parses a comma-separated matrix of reals, one scanline per line.
pub fn read_thermal_rows(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = read_to_string(path)?;
    let mut rows = Vec::new();
    for (r, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .enumerate()
            .map(|(c, cell)| {
                let t = cell.trim();
                t.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| Error::NonNumericCell {
                    path: path.into(),
                    row: r,
                    col: c,
                    text: t.into(),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

/// Loads a temperature matrix and min-max maps it to gray levels.
pub fn load_thermal_matrix(path: &Path) -> Result<Image> {
    let rows = read_thermal_rows(path)?;
    thermal_to_gray(&rows).map_err(|e| match e {
        ImagingError::RaggedRows { row, expected, found } => {
            Error::RaggedRows { path: path.into(), row, expected, found }
        }
        other => other.into(),
    })
}

pub fn write_thermal_matrix(path: &Path, rows: &[Vec<f64>]) -> Result<()> {
    let mut s = String::new();
    for row in rows {
        let cells: Vec<String> = row.iter().map(|t| format!("{t:.4}")).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    write_file(path, s.as_bytes())
}

/// Dispatches on extension: `.csv` is a thermal matrix, anything else an
/// 8-bit image.
pub fn load_image(path: &Path) -> Result<Image> {
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("csv") => load_thermal_matrix(path),
        _ => load_grayscale(path),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pgm_bytes_scale_linearly() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.pgm");
        let mut bytes = b"P5\n2 2\n255\n".to_vec();
        bytes.extend([0u8, 255, 128, 64]);
        std::fs::write(&path, bytes).unwrap();
        let img = load_grayscale(&path).unwrap();
        assert_eq!(img.pixels(), &[0.0, 1.0, 128.0 / 255.0, 64.0 / 255.0]);
    }

    #[test]
    fn truncated_pgm_is_io_failure() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.pgm");
        let mut bytes = b"P5\n4 4\n255\n".to_vec();
        bytes.extend([1u8, 2, 3]);
        std::fs::write(&path, bytes).unwrap();
        assert!(matches!(load_grayscale(&path), Err(Error::Io { .. })), "{:?}", load_grayscale(&path));
    }

    #[test]
    fn unknown_container_is_unsupported() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.bin");
        std::fs::write(&path, b"definitely not an image").unwrap();
        assert!(matches!(load_grayscale(&path), Err(Error::UnsupportedFormat { .. })));
    }

    #[test]
    fn missing_file_is_io_failure() {
        assert!(matches!(load_grayscale(Path::new("/nonexistent/x.pgm")), Err(Error::Io { .. })));
    }

    #[test]
    fn thermal_errors() {
        let dir = tempfile::tempdir().unwrap();
        let ragged = dir.path().join("r.csv");
        std::fs::write(&ragged, "1,2,3\n4,5\n").unwrap();
        assert!(matches!(load_thermal_matrix(&ragged), Err(Error::RaggedRows { row: 1, .. })));
        let text = dir.path().join("n.csv");
        std::fs::write(&text, "1,2\n3,warm\n").unwrap();
        assert!(matches!(load_thermal_matrix(&text), Err(Error::NonNumericCell { row: 1, col: 1, .. })));
    }

    #[test]
    fn thermal_matrix_maps_min_max() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        std::fs::write(&path, "20,30\n25,35\n").unwrap();
        let img = load_image(&path).unwrap();
        let want = [0.0, 2.0 / 3.0, 1.0 / 3.0, 1.0];
        for (a, b) in img.pixels().iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
    }
}
