use std::path::{Path, PathBuf};

use msface_core::dataset::synth::gray_to_temperature;
use msface_core::dataset::{Catalog, SampleKey, Sensor, SynthParams, Synthesizer};
use rayon::prelude::*;

use crate::error::Result;
use crate::formats::{save_pgm, write_thermal_matrix};

/// `<root>/<ID>/S<session>/<code>.<ext>`; thermal captures are temperature
/// matrices, the others binary PGM.
pub fn capture_path(root: &Path, key: &SampleKey) -> PathBuf {
    let ext = if key.sensor() == Sensor::Th { "csv" } else { "pgm" };
    root.join(format!("{:02}", key.person().0)).join(format!("S{}", key.session())).join(format!("{key}.{ext}"))
}

/// Writes the full synthetic grid under `out` and returns its catalog.
///
/// Captures are generated in parallel; every file depends only on
/// `(params, key)`.
pub fn generate_synthetic(params: &SynthParams, out: &Path) -> Result<Catalog> {
    let synth = Synthesizer::new(params.clone())?;
    let keys = synth.keys();
    let entries = keys
        .par_iter()
        .map(|key| {
            let path = capture_path(out, key);
            let img = synth.sample(key);
            if key.sensor() == Sensor::Th {
                let rows: Vec<Vec<f64>> = (0..img.height())
                    .map(|y| img.as_matrix().row(y).iter().map(|&v| gray_to_temperature(v)).collect())
                    .collect();
                write_thermal_matrix(&path, &rows)?;
            } else {
                save_pgm(&path, &img)?;
            }
            Ok((*key, path.to_string_lossy().into_owned()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Catalog::from_entries(entries, params.grid())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_follows_person_and_session() {
        let key = msface_core::dataset::parse_sample_code("07S2TIR3", true).unwrap();
        assert_eq!(capture_path(Path::new("r"), &key), Path::new("r/07/S2/07S2TIR3.csv"));
    }
}
