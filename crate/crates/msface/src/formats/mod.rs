//! On-disk formats: 8-bit grayscale images, thermal temperature matrices and
//! the CSV interchange files produced by the harness.

mod image_io;
pub mod tables;

pub use image_io::{
    load_grayscale, load_image, load_thermal_matrix, read_thermal_rows, save_bmp, save_pgm, write_thermal_matrix,
};

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Writes `contents`, creating parent directories.
pub fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}
