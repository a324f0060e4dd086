use std::path::Path;

use msface_core::dataset::{parse_sample_code, Catalog, GridShape, SampleKey};
use walkdir::WalkDir;

use crate::error::{Error, Result};

/// Extensions recognized as dataset captures.
pub const CAPTURE_EXTENSIONS: [&str; 3] = ["pgm", "bmp", "csv"];

/// Walks `root` and catalogs every file named `<code>.<ext>`.
///
/// Files whose stem is not a valid code are ignored. In strict mode the
/// completeness grid is the 41-person database; in relaxed mode it is the
/// smallest grid covering the keys found.
pub fn scan_dataset(root: &Path, strict: bool) -> Result<Catalog> {
    let meta = std::fs::metadata(root).map_err(|e| Error::io(root, e))?;
    if !meta.is_dir() {
        return Err(Error::io(root, std::io::Error::new(std::io::ErrorKind::NotADirectory, "not a directory")));
    }
    let mut entries: Vec<(SampleKey, String)> = Vec::new();
    for entry in WalkDir::new(root).sort_by_file_name() {
        let entry = entry.map_err(|e| {
            let path = e.path().unwrap_or(root).to_path_buf();
            Error::io(path, e.into())
        })?;
        if !entry.file_type().is_file() {
            continue;
        }
        let path = entry.path();
        let ext_ok = path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| CAPTURE_EXTENSIONS.iter().any(|c| e.eq_ignore_ascii_case(c)));
        let Some(stem) = path.file_stem().and_then(|s| s.to_str()) else { continue };
        if !ext_ok {
            continue;
        }
        if let Ok(key) = parse_sample_code(stem, strict) {
            entries.push((key, path.to_string_lossy().into_owned()));
        }
    }
    let grid = if strict { GridShape::DATABASE } else { GridShape::covering(entries.iter().map(|(k, _)| k)) };
    Ok(Catalog::from_entries(entries, grid)?)
}
