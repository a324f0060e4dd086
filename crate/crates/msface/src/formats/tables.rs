//! CSV interchange: catalogs, distance tables, truth labels, fusion curves and
//! surfaces, and inspection dumps of coefficient-domain matrices.
//!
//! Distance entries and surface rates are written with Rust's shortest
//! round-trip float formatting, so an exported file re-imports to the exact
//! same values.

use std::fmt::Write as _;
use std::path::Path;

use msface_core::dataset::Catalog;
use msface_core::features::{DiscriminabilityMap, Freq, SelectionMask};
use msface_core::fusion::GridResult;
use msface_core::transform::CoefMatrix;
use msface_core::{DistanceTable, PersonId, TemplateLabel};

use super::{read_to_string, write_file};
use crate::error::{Error, Result};

/// Marks the header of a grid searched on the test cell itself.
pub const DIAGNOSTIC_LABEL: &str = "diagnostic (test-optimized)";

fn bad(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::BadCsv { path: path.into(), line, msg: msg.into() }
}

fn parse_f64(path: &Path, line: usize, cell: &str) -> Result<f64> {
    cell.trim().parse().map_err(|_| bad(path, line, format!("{cell:?} is not a number")))
}

/// Non-empty, non-comment lines with 1-based line numbers.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
}

pub fn catalog_csv(catalog: &Catalog) -> String {
    let mut s = String::from("code,person,session,sensor,illumination,sample,path\n");
    for (key, path) in catalog.entries() {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            key,
            key.person(),
            key.session(),
            key.sensor().name(),
            key.illumination().code(),
            key.sample(),
            path
        );
    }
    s
}

pub fn write_catalog(path: &Path, catalog: &Catalog) -> Result<()> {
    write_file(path, catalog_csv(catalog).as_bytes())
}

pub fn distance_table_csv(table: &DistanceTable) -> String {
    let mut s = String::from("probe");
    for t in table.template_labels() {
        let _ = write!(s, ",{t}");
    }
    s.push('\n');
    for (r, probe) in table.probe_labels().iter().enumerate() {
        s.push_str(probe);
        for v in table.row(r) {
            let _ = write!(s, ",{v}");
        }
        s.push('\n');
    }
    s
}

pub fn write_distance_table(path: &Path, table: &DistanceTable) -> Result<()> {
    write_file(path, distance_table_csv(table).as_bytes())
}

fn parse_template_label(path: &Path, line: usize, cell: &str) -> Result<TemplateLabel> {
    let parsed = cell.split_once(':').and_then(|(p, i)| Some((p.parse().ok()?, i.parse().ok()?)));
    match parsed {
        Some((person, index)) => Ok(TemplateLabel { person: PersonId(person), index }),
        None => Err(bad(path, line, format!("{cell:?} is not a person:index label"))),
    }
}

pub fn read_distance_table(path: &Path) -> Result<DistanceTable> {
    let text = read_to_string(path)?;
    let mut lines = data_lines(&text);
    let (hline, header) = lines.next().ok_or_else(|| bad(path, 1, "empty table"))?;
    let mut cells = header.split(',');
    if cells.next() != Some("probe") {
        return Err(bad(path, hline, "header must start with `probe`"));
    }
    let templates = cells.map(|c| parse_template_label(path, hline, c)).collect::<Result<Vec<_>>>()?;
    let mut probes = Vec::new();
    let mut data = Vec::new();
    for (n, line) in lines {
        let mut cells = line.split(',');
        probes.push(cells.next().unwrap_or_default().to_string());
        let before = data.len();
        for c in cells {
            data.push(parse_f64(path, n, c)?);
        }
        if data.len() - before != templates.len() {
            return Err(bad(path, n, format!("expected {} distances, found {}", templates.len(), data.len() - before)));
        }
    }
    DistanceTable::from_parts(probes, templates, data).map_err(|e| bad(path, hline, e.to_string()))
}

pub fn truth_csv(probes: &[String], truth: &[PersonId]) -> String {
    let mut s = String::from("probe,person\n");
    for (p, t) in probes.iter().zip(truth) {
        let _ = writeln!(s, "{p},{t}");
    }
    s
}

pub fn write_truth(path: &Path, probes: &[String], truth: &[PersonId]) -> Result<()> {
    write_file(path, truth_csv(probes, truth).as_bytes())
}

/// Returns `(probe labels, persons)` in file order.
pub fn read_truth(path: &Path) -> Result<(Vec<String>, Vec<PersonId>)> {
    let text = read_to_string(path)?;
    let mut probes = Vec::new();
    let mut persons = Vec::new();
    for (n, line) in data_lines(&text).skip(1) {
        let (probe, person) = line.split_once(',').ok_or_else(|| bad(path, n, "expected probe,person"))?;
        let person = person.trim().parse().map_err(|_| bad(path, n, format!("{person:?} is not a person id")))?;
        probes.push(probe.to_string());
        persons.push(PersonId(person));
    }
    Ok((probes, persons))
}

/// Curve (2-way) or surface (3-way) as CSV.
///
/// A surface has a `alpha\beta` header with the beta axis, then one row per
/// alpha. A curve has an `alpha,rate` header and one row per alpha. Both end
/// with a `# best,...` line.
pub fn grid_csv(result: &GridResult, diagnostic: bool) -> String {
    let mut s = String::new();
    if diagnostic {
        let _ = writeln!(s, "# trained weights: {DIAGNOSTIC_LABEL}");
    }
    match result.betas() {
        Some(betas) => {
            s.push_str("alpha\\beta");
            for b in betas {
                let _ = write!(s, ",{b}");
            }
            s.push('\n');
            for (i, a) in result.alphas().iter().enumerate() {
                let _ = write!(s, "{a}");
                for j in 0..betas.len() {
                    let _ = write!(s, ",{}", result.rate_at(i, j).percent());
                }
                s.push('\n');
            }
        }
        None => {
            s.push_str("alpha,rate\n");
            for (i, a) in result.alphas().iter().enumerate() {
                let _ = writeln!(s, "{a},{}", result.rate_at(i, 0).percent());
            }
        }
    }
    let best = result.best_rate();
    let _ = write!(s, "# best,alpha={}", result.best_alpha());
    if let Some(b) = result.best_beta() {
        let _ = write!(s, ",beta={b}");
    }
    let _ = writeln!(
        s,
        ",rate={},correct={},total={},in_simplex={}",
        best.percent(),
        best.correct,
        best.total,
        result.best_in_simplex()
    );
    s
}

pub fn write_grid(path: &Path, result: &GridResult, diagnostic: bool) -> Result<()> {
    write_file(path, grid_csv(result, diagnostic).as_bytes())
}

/// A re-imported curve or surface.
#[derive(Debug, Clone, PartialEq)]
pub struct GridImport {
    pub alphas: Vec<f64>,
    pub betas: Option<Vec<f64>>,
    /// Row-major percentages, one row per alpha.
    pub rates: Vec<f64>,
    /// `key=value` pairs of the `# best` line.
    pub best: Vec<(String, String)>,
}

impl GridImport {
    pub fn best_value(&self, key: &str) -> Option<&str> {
        self.best.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

pub fn read_grid(path: &Path) -> Result<GridImport> {
    let text = read_to_string(path)?;
    let best = text
        .lines()
        .find_map(|l| l.strip_prefix("# best,"))
        .map(|rest| {
            rest.split(',').filter_map(|kv| kv.split_once('=')).map(|(k, v)| (k.to_string(), v.to_string())).collect()
        })
        .unwrap_or_default();
    let mut lines = data_lines(&text);
    let (hline, header) = lines.next().ok_or_else(|| bad(path, 1, "empty grid"))?;
    let mut head = header.split(',');
    let betas = match head.next() {
        Some("alpha") => None,
        Some("alpha\\beta") => Some(head.map(|c| parse_f64(path, hline, c)).collect::<Result<Vec<_>>>()?),
        _ => return Err(bad(path, hline, "unrecognized grid header")),
    };
    let width = betas.as_ref().map_or(1, Vec::len);
    let mut alphas = Vec::new();
    let mut rates = Vec::new();
    for (n, line) in lines {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != width + 1 {
            return Err(bad(path, n, format!("expected {} cells, found {}", width + 1, cells.len())));
        }
        alphas.push(parse_f64(path, n, cells[0])?);
        for c in &cells[1..] {
            rates.push(parse_f64(path, n, c)?);
        }
    }
    Ok(GridImport { alphas, betas, rates, best })
}

/// Coefficient matrix dump, one frequency row per line.
pub fn coef_matrix_csv(coefs: &CoefMatrix) -> String {
    let mut s = String::new();
    let (rows, _) = coefs.shape();
    for r in 0..rows {
        let cells: Vec<String> = coefs.as_matrix().row(r).iter().map(|v| v.to_string()).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

/// `row,col,score` for every frequency, in row-major order.
pub fn discriminability_csv(map: &DiscriminabilityMap) -> String {
    let (rows, cols) = map.shape();
    let mut s = format!("# variant={}\nrow,col,score\n", map.variant());
    for r in 0..rows {
        for c in 0..cols {
            let _ = writeln!(s, "{r},{c},{}", map.score(Freq::new(r, c)));
        }
    }
    s
}

/// `row,col,rank` for every selected frequency, rank 1 first.
pub fn selection_mask_csv(mask: &SelectionMask) -> String {
    let mut s = format!("# mode={}\nrow,col,rank\n", mask.mode());
    for (i, f) in mask.positions().iter().enumerate() {
        let _ = writeln!(s, "{},{},{}", f.row, f.col, i + 1);
    }
    s
}
