//! Experiment orchestration: window sweeps, illumination-mismatch matrices,
//! fusion matrices and standalone weight searches.
//!
//! Every operation returns a [`Report`] of in-memory artifacts; nothing
//! touches the output directory until [`write_report`] stores them next to a
//! manifest of their SHA-256 hashes.

use std::fmt::Write as _;
use std::path::Path;

use msface_core::dataset::{Catalog, SplitSpec};
use msface_core::features::MaskMode;
use msface_core::fusion::{fuse_fixed, grid_search_2, grid_search_3, normalize_minmax, FusionError, GridResult};
use msface_core::matcher::{identification_rate, identify};
use msface_core::{DistanceTable, IdentificationRate, Illumination, PersonId, Sensor};
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::config::{ExperimentConfig, FusionRule, MaskKind};
use crate::error::{Error, Result};
use crate::formats::tables::{self, DIAGNOSTIC_LABEL};
use crate::formats::write_file;
use crate::pipeline::{FeatureStore, PreparedSplit, SensorRun};
use crate::scan::scan_dataset;

pub const MANIFEST_NAME: &str = "manifest.txt";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    Single,
    Fixed,
    Trained,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Single => "single",
            Rule::Fixed => "fixed",
            Rule::Trained => "trained",
        }
    }
}

/// One cell of a results table.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub sensors: Vec<Sensor>,
    pub normalized: bool,
    pub train_illumination: Illumination,
    pub train_sessions: Vec<u8>,
    pub test_illumination: Illumination,
    pub test_session: u8,
    pub coefficients: usize,
    pub rule: Rule,
    /// `None` when the cell could not be evaluated.
    pub rate: Option<IdentificationRate>,
    pub weights: Option<Vec<f64>>,
}

impl ResultRow {
    pub fn sensor_label(&self) -> String {
        sensor_label(&self.sensors)
    }
}

fn sensor_label(sensors: &[Sensor]) -> String {
    sensors.iter().map(|s| s.name()).collect::<Vec<_>>().join("&")
}

fn yes_no(v: bool) -> &'static str {
    if v {
        "YES"
    } else {
        "NO"
    }
}

fn rate_cell(rate: Option<IdentificationRate>) -> String {
    rate.map_or_else(|| "NA".to_string(), |r| r.to_string())
}

/// Named output file contents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl Artifact {
    fn new(name: impl Into<String>, text: String) -> Self {
        Artifact { name: name.into(), bytes: text.into_bytes() }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub rows: Vec<ResultRow>,
    pub artifacts: Vec<Artifact>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn artifact(&self, name: &str) -> Option<&Artifact> {
        self.artifacts.iter().find(|a| a.name == name)
    }
}

/// Train/test illumination and test session of one matrix cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cell {
    pub normalize: bool,
    pub train: Illumination,
    pub test: Illumination,
    pub session: u8,
}

/// Missing captures or misaligned probe sets turn a cell into `NA`; anything
/// else is a real failure.
fn is_missing_data(e: &Error) -> bool {
    matches!(
        e,
        Error::Dataset(_)
            | Error::Fusion(FusionError::LabelMismatch(_))
            | Error::Fusion(FusionError::ShapeMismatch { .. })
    )
}

pub struct Harness {
    cfg: ExperimentConfig,
    catalog: Catalog,
    store: FeatureStore,
}

impl Harness {
    /// Scans `cfg.root` and prepares an empty coefficient cache.
    pub fn open(cfg: ExperimentConfig) -> Result<Self> {
        let catalog = scan_dataset(&cfg.root, cfg.strict)?;
        Self::new(cfg, catalog)
    }

    pub fn new(cfg: ExperimentConfig, catalog: Catalog) -> Result<Self> {
        cfg.validate()?;
        if catalog.is_empty() {
            return Err(Error::config("root", format!("no captures found under {}", cfg.root.display())));
        }
        let store = FeatureStore::new(cfg.saturate, cfg.resize);
        Ok(Harness { cfg, catalog, store })
    }

    pub fn config(&self) -> &ExperimentConfig {
        &self.cfg
    }

    pub fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    pub fn store(&self) -> &FeatureStore {
        &self.store
    }

    /// The cross product of normalization, train illumination, test
    /// illumination and test session, in config order.
    pub fn cells(&self) -> Vec<Cell> {
        let c = &self.cfg;
        let mut out = Vec::new();
        for &normalize in &c.normalize {
            for &train in &c.train_illuminations {
                for &test in &c.test_illuminations {
                    for &session in &c.test_sessions {
                        out.push(Cell { normalize, train, test, session });
                    }
                }
            }
        }
        out
    }

    pub fn spec(&self, sensor: Sensor, cell: &Cell) -> Result<SplitSpec> {
        Ok(SplitSpec::new(&self.cfg.train_sessions, cell.session, cell.train, cell.test, sensor)?)
    }

    fn mask_mode(&self, size: usize) -> MaskMode {
        match self.cfg.mask {
            MaskKind::Square => MaskMode::Square(size),
            MaskKind::TopK => MaskMode::TopK(size),
        }
    }

    pub fn prepare(&self, sensor: Sensor, cell: &Cell) -> Result<PreparedSplit> {
        PreparedSplit::load(&self.store, &self.catalog, &self.spec(sensor, cell)?, cell.normalize)
    }

    /// Single-sensor run of one cell with the configured mask.
    pub fn sensor_run(&self, sensor: Sensor, cell: &Cell) -> Result<SensorRun> {
        self.prepare(sensor, cell)?.run(self.mask_mode(self.cfg.window), self.cfg.variant, self.cfg.p)
    }

    fn row(&self, sensors: Vec<Sensor>, cell: &Cell, coefficients: usize, rule: Rule) -> ResultRow {
        ResultRow {
            sensors,
            normalized: cell.normalize,
            train_illumination: cell.train,
            train_sessions: self.cfg.train_sessions.clone(),
            test_illumination: cell.test,
            test_session: cell.session,
            coefficients,
            rule,
            rate: None,
            weights: None,
        }
    }

    /// Runs every cell of every configured sensor, one sensor at a time so
    /// the coefficient cache holds a single sensor.
    fn all_sensor_runs(&self, cells: &[Cell], warnings: &mut Vec<String>) -> Result<Vec<Vec<Option<SensorRun>>>> {
        let mut per_sensor = Vec::new();
        for &sensor in &self.cfg.sensors {
            let runs: Vec<Result<SensorRun>> = cells.par_iter().map(|cell| self.sensor_run(sensor, cell)).collect();
            self.store.clear();
            let mut kept = Vec::with_capacity(runs.len());
            for (cell, run) in cells.iter().zip(runs) {
                match run {
                    Ok(r) => kept.push(Some(r)),
                    Err(e) if is_missing_data(&e) => {
                        warnings.push(format!("{} {}: {e}", sensor.name(), cell_name(cell)));
                        kept.push(None);
                    }
                    Err(e) => return Err(e),
                }
            }
            per_sensor.push(kept);
        }
        Ok(per_sensor)
    }

    /// Identification rate as a function of the window size for every
    /// sensor and matched illumination.
    pub fn sweep_window_sizes(&self) -> Result<Report> {
        let c = &self.cfg;
        if c.window_min == 0 {
            return Err(Error::config("window_min", "must be at least 1"));
        }
        let sizes: Vec<usize> = (c.window_min..=c.window_max).collect();
        let mut report = Report::default();
        let mut summary = String::from(
            "sensor,normalization,illumination,train_sessions,test_session,best_n,best_coefficients,best_rate,max_n_rate\n",
        );
        for &sensor in &c.sensors {
            let mut cells = Vec::new();
            for &normalize in &c.normalize {
                for &ill in &c.train_illuminations {
                    for &session in &c.test_sessions {
                        cells.push(Cell { normalize, train: ill, test: ill, session });
                    }
                }
            }
            let curves: Vec<Result<Vec<(usize, usize, IdentificationRate)>>> = cells
                .par_iter()
                .map(|cell| {
                    let prepared = self.prepare(sensor, cell)?;
                    sizes
                        .iter()
                        .map(|&n| {
                            let (mask, _) = prepared.mask(self.mask_mode(n), c.variant)?;
                            let table = prepared.score(&mask, c.p)?;
                            let rate = identification_rate(&identify(&table), &prepared.truth())?;
                            Ok((n, mask.dimension(), rate))
                        })
                        .collect()
                })
                .collect();
            self.store.clear();
            for (cell, curve) in cells.iter().zip(curves) {
                let tag =
                    format!("{}_{}_{}_S{}", sensor.name(), cell.train.code(), yes_no(cell.normalize), cell.session);
                let prefix = format!(
                    "{},{},{},{},{}",
                    sensor.name(),
                    yes_no(cell.normalize),
                    cell.train.code(),
                    join_sessions(&c.train_sessions),
                    cell.session
                );
                let points = match curve {
                    Ok(points) => points,
                    Err(e) if is_missing_data(&e) => {
                        report.warnings.push(format!("{tag}: {e}"));
                        let _ = writeln!(summary, "{prefix},NA,NA,NA,NA");
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                let mut csv = String::from("n,coefficients,rate\n");
                let mut best = 0;
                for (i, (n, k, r)) in points.iter().enumerate() {
                    let _ = writeln!(csv, "{n},{k},{r}");
                    if r > &points[best].2 {
                        best = i;
                    }
                }
                let (bn, bk, br) = points[best];
                let last = points.last().expect("non-empty size range").2;
                let _ = writeln!(summary, "{prefix},{bn},{bk},{br},{last}");
                report.artifacts.push(Artifact::new(format!("sweep/{tag}.csv"), csv));
                for (_, k, r) in points {
                    let mut row = self.row(vec![sensor], cell, k, Rule::Single);
                    row.rate = Some(r);
                    report.rows.push(row);
                }
            }
        }
        push_warnings(&mut summary, &report.warnings);
        report.artifacts.insert(0, Artifact::new("sweep.csv", summary));
        Ok(report)
    }

    /// Single-sensor rates for every sensor x normalization x train
    /// illumination x test illumination x test session.
    pub fn run_mismatch_matrix(&self) -> Result<Report> {
        let cells = self.cells();
        let mut report = Report::default();
        let runs = self.all_sensor_runs(&cells, &mut report.warnings)?;
        for (si, &sensor) in self.cfg.sensors.iter().enumerate() {
            for (cell, run) in cells.iter().zip(&runs[si]) {
                let coefficients = run.as_ref().map_or(0, |r| r.mask.dimension());
                let mut row = self.row(vec![sensor], cell, coefficients, Rule::Single);
                if let Some(r) = run {
                    row.rate = Some(identification_rate(&identify(&r.table), &r.truth)?);
                    if self.cfg.export_tables {
                        report.artifacts.push(table_artifact(&row, &r.table));
                    }
                }
                report.rows.push(row);
            }
        }
        let groups: Vec<Vec<Sensor>> = self.cfg.sensors.iter().map(|&s| vec![s]).collect();
        let matrix = self.matrix_csv(&groups, &report.rows, None, &report.warnings);
        report.artifacts.insert(0, Artifact::new("mismatch.csv", matrix));
        report.artifacts.insert(1, Artifact::new("mismatch_rows.csv", rows_csv(&report.rows)));
        Ok(report)
    }

    /// Sensor pairs and the triple, fused with the fixed rule and, when
    /// configured, the grid-searched rule.
    pub fn run_fusion_matrix(&self) -> Result<Report> {
        let sensors = &self.cfg.sensors;
        if sensors.len() < 2 {
            return Err(Error::config("sensors", "fusion needs at least two sensors"));
        }
        let combos = combinations(sensors.len());
        let cells = self.cells();
        let mut report = Report::default();
        let runs = self.all_sensor_runs(&cells, &mut report.warnings)?;

        /// `None` when a member sensor has no run for the cell.
        type Fused = Option<(usize, Result<IdentificationRate>, Option<Result<GridResult>>)>;
        let jobs: Vec<(usize, usize)> = (0..combos.len()).flat_map(|k| (0..cells.len()).map(move |i| (k, i))).collect();
        let fused: Vec<Fused> = jobs
            .par_iter()
            .map(|&(k, i)| {
                let picked: Vec<&SensorRun> = combos[k].iter().map(|&s| runs[s][i].as_ref()).collect::<Option<_>>()?;
                let tables: Vec<DistanceTable> = picked
                    .iter()
                    .map(|r| if self.cfg.score_normalization { normalize_minmax(&r.table) } else { r.table.clone() })
                    .collect();
                let refs: Vec<&DistanceTable> = tables.iter().collect();
                let truth = &picked[0].truth;
                let fixed =
                    fuse_fixed(&refs).map_err(Error::from).and_then(|t| Ok(identification_rate(&identify(&t), truth)?));
                let grid = (self.cfg.fusion == FusionRule::Grid).then(|| search(&refs, truth, self.cfg.step));
                Some((picked[0].mask.dimension(), fixed, grid))
            })
            .collect();

        let mut fixed_rows = Vec::new();
        let mut trained_rows = Vec::new();
        for (&(k, i), f) in jobs.iter().zip(fused) {
            let members: Vec<Sensor> = combos[k].iter().map(|&s| sensors[s]).collect();
            let cell = &cells[i];
            let unavailable = || format!("{} {}: fused cell unavailable", sensor_label(&members), cell_name(cell));
            let Some((coefficients, fixed, grid)) = f else {
                report.warnings.push(unavailable());
                fixed_rows.push(self.row(members.clone(), cell, 0, Rule::Fixed));
                if self.cfg.fusion == FusionRule::Grid {
                    trained_rows.push(self.row(members, cell, 0, Rule::Trained));
                }
                continue;
            };
            let mut row = self.row(members.clone(), cell, coefficients, Rule::Fixed);
            match fixed {
                Ok(r) => row.rate = Some(r),
                Err(e) if is_missing_data(&e) => report.warnings.push(format!("{}: {e}", unavailable())),
                Err(e) => return Err(e),
            }
            fixed_rows.push(row.clone());
            if let Some(g) = grid {
                row.rule = Rule::Trained;
                row.rate = None;
                match g {
                    Ok(g) => {
                        row.rate = Some(g.best_rate());
                        row.weights = Some(g.best_weights().as_slice().to_vec());
                        let name = format!(
                            "{}/{}_{}_{}-{}_S{}.csv",
                            if g.is_three_way() { "contours" } else { "curves" },
                            members.iter().map(|s| s.name()).collect::<Vec<_>>().join("-"),
                            yes_no(cell.normalize),
                            cell.train.code(),
                            cell.test.code(),
                            cell.session
                        );
                        report.artifacts.push(Artifact::new(name, tables::grid_csv(&g, true)));
                    }
                    Err(e) if is_missing_data(&e) => {}
                    Err(e) => return Err(e),
                }
                trained_rows.push(row);
            }
        }
        let groups: Vec<Vec<Sensor>> = combos.iter().map(|c| c.iter().map(|&s| sensors[s]).collect()).collect();
        let mut front =
            vec![Artifact::new("fusion.csv", self.matrix_csv(&groups, &fixed_rows, None, &report.warnings))];
        if !trained_rows.is_empty() {
            front.push(Artifact::new(
                "fusion_trained.csv",
                self.matrix_csv(&groups, &trained_rows, Some(DIAGNOSTIC_LABEL), &report.warnings),
            ));
        }
        report.rows = fixed_rows;
        report.rows.extend(trained_rows);
        front.push(Artifact::new("fusion_rows.csv", rows_csv(&report.rows)));
        front.append(&mut report.artifacts);
        report.artifacts = front;
        Ok(report)
    }

    /// Distance tables and truth labels of the first configured cell, one
    /// table per sensor, ready for the standalone grid search.
    pub fn extract(&self) -> Result<Report> {
        let c = &self.cfg;
        let cell = Cell {
            normalize: c.normalize[0],
            train: c.train_illuminations[0],
            test: c.test_illuminations[0],
            session: c.test_sessions[0],
        };
        let mut report = Report::default();
        let mut truth_written = false;
        for &sensor in &c.sensors {
            let run = self.sensor_run(sensor, &cell)?;
            let mut row = self.row(vec![sensor], &cell, run.mask.dimension(), Rule::Single);
            row.rate = Some(identification_rate(&identify(&run.table), &run.truth)?);
            report.rows.push(row);
            let name = sensor.name();
            report.artifacts.push(Artifact::new(format!("tables/{name}.csv"), tables::distance_table_csv(&run.table)));
            report.artifacts.push(Artifact::new(format!("masks/{name}.csv"), tables::selection_mask_csv(&run.mask)));
            if let Some(map) = &run.map {
                report.artifacts.push(Artifact::new(format!("maps/{name}.csv"), tables::discriminability_csv(map)));
            }
            if !truth_written {
                report
                    .artifacts
                    .push(Artifact::new("truth.csv", tables::truth_csv(run.table.probe_labels(), &run.truth)));
                truth_written = true;
            }
        }
        report.artifacts.push(Artifact::new("rates.csv", rows_csv(&report.rows)));
        Ok(report)
    }

    /// Table-shaped CSV: one row per group x normalization x train
    /// illumination, one column per test illumination x session.
    fn matrix_csv(
        &self,
        groups: &[Vec<Sensor>],
        rows: &[ResultRow],
        label: Option<&str>,
        warnings: &[String],
    ) -> String {
        let c = &self.cfg;
        let mut s = String::new();
        if let Some(l) = label {
            let _ = writeln!(s, "# trained weights: {l}");
        }
        let _ = write!(s, "sensors,normalization,train_illumination");
        for t in &c.test_illuminations {
            for k in &c.test_sessions {
                let _ = write!(s, ",{}_S{k}", t.code());
            }
        }
        s.push('\n');
        let width = c.test_illuminations.len() * c.test_sessions.len();
        let mut chunks = rows.chunks(width);
        for g in groups {
            for &normalize in &c.normalize {
                for train in &c.train_illuminations {
                    let chunk = chunks.next().expect("rows follow the config cross product");
                    let _ = write!(s, "{},{},{}", sensor_label(g), yes_no(normalize), train.code());
                    for r in chunk {
                        let _ = write!(s, ",{}", rate_cell(r.rate));
                    }
                    s.push('\n');
                }
            }
        }
        push_warnings(&mut s, warnings);
        s
    }
}

fn search(tables: &[&DistanceTable], truth: &[PersonId], step: f64) -> Result<GridResult> {
    Ok(match tables {
        [a, b] => grid_search_2(a, b, truth, step)?,
        [a, b, c] => grid_search_3(a, b, c, truth, step)?,
        _ => return Err(Error::config("tables", "the grid search takes two or three tables")),
    })
}

/// All pairs in order, then the triple.
fn combinations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(vec![i, j]);
        }
    }
    if n >= 3 {
        out.push((0..n.min(3)).collect());
    }
    out
}

fn cell_name(cell: &Cell) -> String {
    format!("{} {}->{} S{}", yes_no(cell.normalize), cell.train.code(), cell.test.code(), cell.session)
}

fn join_sessions(s: &[u8]) -> String {
    s.iter().map(u8::to_string).collect::<Vec<_>>().join("&")
}

fn push_warnings(s: &mut String, warnings: &[String]) {
    for w in warnings {
        let _ = writeln!(s, "# warning: {w}");
    }
}

fn table_artifact(row: &ResultRow, table: &DistanceTable) -> Artifact {
    let name = format!(
        "tables/{}_{}_{}-{}_S{}.csv",
        row.sensor_label(),
        yes_no(row.normalized),
        row.train_illumination.code(),
        row.test_illumination.code(),
        row.test_session
    );
    Artifact::new(name, tables::distance_table_csv(table))
}

/// Long-format results, one line per row.
pub fn rows_csv(rows: &[ResultRow]) -> String {
    let mut s = String::from(
        "sensors,normalization,train_illumination,train_sessions,test_illumination,test_session,coefficients,rule,rate,correct,total,weights\n",
    );
    for r in rows {
        let (correct, total) =
            r.rate.map_or(("NA".into(), "NA".into()), |x| (x.correct.to_string(), x.total.to_string()));
        let weights =
            r.weights.as_ref().map_or(String::new(), |w| w.iter().map(f64::to_string).collect::<Vec<_>>().join(";"));
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.sensor_label(),
            yes_no(r.normalized),
            r.train_illumination.code(),
            join_sessions(&r.train_sessions),
            r.test_illumination.code(),
            r.test_session,
            r.coefficients,
            r.rule.name(),
            rate_cell(r.rate),
            correct,
            total,
            weights
        );
    }
    s
}

/// Grid search over distance tables read from disk.
pub fn run_grid(cfg: &ExperimentConfig) -> Result<(GridResult, Report)> {
    cfg.validate()?;
    if !(2..=3).contains(&cfg.tables.len()) {
        return Err(Error::config("tables", "give two or three distance table CSVs"));
    }
    let truth_path = cfg.truth.as_ref().ok_or_else(|| Error::config("truth", "a truth label CSV is required"))?;
    let loaded = cfg.tables.iter().map(|p| tables::read_distance_table(p)).collect::<Result<Vec<_>>>()?;
    let (probes, truth) = tables::read_truth(truth_path)?;
    if probes != loaded[0].probe_labels() {
        return Err(Error::config("truth", "probe labels do not match the first table"));
    }
    let normalized: Vec<DistanceTable> =
        if cfg.score_normalization { loaded.iter().map(normalize_minmax).collect() } else { loaded };
    let refs: Vec<&DistanceTable> = normalized.iter().collect();
    let result = search(&refs, &truth, cfg.step)?;
    let name = if result.is_three_way() { "contour.csv" } else { "curve.csv" };
    let report = Report {
        rows: Vec::new(),
        artifacts: vec![Artifact::new(name, tables::grid_csv(&result, true))],
        warnings: Vec::new(),
    };
    Ok((result, report))
}

/// Run manifest: command, seed, the configuration and artifact hashes.
/// The output directory itself is left out so relocated runs compare equal.
pub fn manifest(command: &str, cfg: &ExperimentConfig, artifacts: &[Artifact]) -> String {
    let mut s = format!("command = {command}\nseed = {}\n[config]\n", cfg.seed);
    for line in cfg.to_text().lines().filter(|l| !l.starts_with("out ")) {
        s.push_str(line);
        s.push('\n');
    }
    s.push_str("[artifacts]\n");
    let mut sorted: Vec<&Artifact> = artifacts.iter().collect();
    sorted.sort_by(|a, b| a.name.cmp(&b.name));
    for a in sorted {
        let _ = writeln!(s, "{}  {}", hex::encode(Sha256::digest(&a.bytes)), a.name);
    }
    s
}

/// Writes every artifact under `out` plus the manifest; logs warnings.
pub fn write_report(out: &Path, command: &str, cfg: &ExperimentConfig, report: &Report) -> Result<()> {
    for w in &report.warnings {
        log::warn!("{w}");
    }
    for a in &report.artifacts {
        write_file(&out.join(&a.name), &a.bytes)?;
    }
    write_file(&out.join(MANIFEST_NAME), manifest(command, cfg, &report.artifacts).as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combination_blocks() {
        assert_eq!(combinations(3), vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 1, 2]]);
        assert_eq!(combinations(2), vec![vec![0, 1]]);
    }

    #[test]
    fn manifest_is_sorted_and_ignores_out() {
        let cfg = ExperimentConfig::default();
        let arts = vec![Artifact::new("b.csv", "x".into()), Artifact::new("a.csv", "y".into())];
        let m = manifest("mismatch", &cfg, &arts);
        assert!(m.find("  a.csv").unwrap() < m.find("  b.csv").unwrap());
        assert!(!m.contains("\nout = "));
        let other = ExperimentConfig { out: "elsewhere".into(), ..Default::default() };
        assert_eq!(manifest("mismatch", &other, &arts), m);
    }

    #[test]
    fn na_rows_render() {
        let row = ResultRow {
            sensors: vec![Sensor::Vis, Sensor::Th],
            normalized: true,
            train_illumination: Illumination::Na,
            train_sessions: vec![1, 2],
            test_illumination: Illumination::Ir,
            test_session: 3,
            coefficients: 400,
            rule: Rule::Fixed,
            rate: None,
            weights: None,
        };
        assert!(rows_csv(&[row]).ends_with("VIS&TH,YES,NA,1&2,IR,3,400,fixed,NA,NA,NA,\n"));
    }
}
