//! File formats: sample sets (CSV or JSON), grid and map dumps, optimizer
//! histories and ΔHV curves.
//!
//! Floats are written in Rust's shortest round-trip form, so reading a
//! written file back reproduces every value bit for bit.

use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::AugmentedGrid;
use crate::smoo::RunHistory;
use crate::transport::{EmpiricalCOMap, Orientation, SampleSet};

/// Name of the optional column holding replication ids in sample CSVs.
pub const REPLICATION_COLUMN: &str = "replication";

pub fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

fn parse_f64(field: &str, line: u64) -> Result<f64> {
    field.trim().parse().map_err(|_| Error::invalid(format!("line {line}: `{field}` is not a number")))
}

/// Reads a sample set from CSV: a header of objective names, optionally
/// including a `replication` column of unsigned ids, then one row per point.
pub fn read_samples_csv<R: Read>(reader: R, label: &str, orientation: Orientation) -> Result<SampleSet> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let rep_col = headers.iter().position(|h| h == REPLICATION_COLUMN);
    let mut points = Vec::new();
    let mut reps = Vec::new();
    for (row, record) in rdr.records().enumerate() {
        let record = record?;
        let line = row as u64 + 2;
        let mut point = Vec::with_capacity(record.len());
        for (c, field) in record.iter().enumerate() {
            if Some(c) == rep_col {
                let id = field
                    .parse::<u64>()
                    .map_err(|_| Error::invalid(format!("line {line}: replication id `{field}` is not an integer")))?;
                reps.push(id);
            } else {
                point.push(parse_f64(field, line)?);
            }
        }
        points.push(point);
    }
    let set = SampleSet::new(label, orientation, points)?;
    match rep_col {
        Some(_) => set.with_replications(reps),
        None => Ok(set),
    }
}

pub fn write_samples_csv<W: Write>(set: &SampleSet, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Vec<String> = (0..set.dim()).map(|j| format!("f{}", j + 1)).collect();
    if set.replications.is_some() {
        header.push(REPLICATION_COLUMN.to_string());
    }
    w.write_record(&header)?;
    for (i, p) in set.points.iter().enumerate() {
        let mut row: Vec<String> = p.iter().map(|&v| fmt_f64(v)).collect();
        if let Some(reps) = &set.replications {
            row.push(reps[i].to_string());
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Loads a sample set from `path`: JSON when the extension is `.json`, CSV
/// otherwise. The label defaults to the file stem; `orientation`, when
/// given, overrides the file's own.
pub fn load_samples(path: &Path, orientation: Option<Orientation>) -> Result<SampleSet> {
    let label = path.file_stem().and_then(|s| s.to_str()).unwrap_or("sample").to_string();
    let file = BufReader::new(File::open(path)?);
    let mut set = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        let mut set: SampleSet = serde_json::from_reader(file)?;
        if set.label.is_empty() {
            set.label = label;
        }
        set.validate()?;
        set
    } else {
        read_samples_csv(file, &label, orientation.unwrap_or_default())?
    };
    if let Some(o) = orientation {
        set.orientation = o;
    }
    Ok(set)
}

/// Grid dump: `k,radius,dir_index,x0..`. Origin copies have `k = 0` and
/// `dir_index` equal to the copy number.
pub fn write_grid_csv<W: Write>(grid: &AugmentedGrid, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["k".to_string(), "radius".into(), "dir_index".into()];
    header.extend((0..grid.dim()).map(|j| format!("x{j}")));
    w.write_record(&header)?;
    for (g, p) in grid.points().enumerate() {
        let (k, s) = grid.level_of(g);
        let dir = s.unwrap_or_else(|| g - grid.origin_indices().start);
        let mut row = vec![k.to_string(), fmt_f64(grid.spec().radius(k)), dir.to_string()];
        row.extend(p.iter().map(|&v| fmt_f64(v)));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Map dump: `sample_index,rank,sign_0..,grid_index`.
pub fn write_map_csv<W: Write>(map: &EmpiricalCOMap, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["sample_index".to_string(), "rank".into()];
    header.extend((0..map.dim()).map(|j| format!("sign_{j}")));
    header.push("grid_index".into());
    w.write_record(&header)?;
    for i in 0..map.len() {
        let mut row = vec![i.to_string(), map.rank(i).to_string()];
        row.extend(map.sign(i).iter().map(|&v| fmt_f64(v)));
        row.push(map.forward(i).to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Quantile-region dump for bi-objective candidates:
/// `candidate,sample_index,f1,f2,rank,in_region`, where `in_region` marks
/// samples of rank at most `level`.
pub fn write_front_csv<W: Write>(maps: &[EmpiricalCOMap], level: usize, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["candidate", "sample_index", "f1", "f2", "rank", "in_region"])?;
    for (c, map) in maps.iter().enumerate() {
        if map.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: map.dim() });
        }
        for i in 0..map.len() {
            let p = map.sample(i);
            let rank = map.rank(i);
            w.write_record([
                c.to_string(),
                i.to_string(),
                fmt_f64(p[0]),
                fmt_f64(p[1]),
                rank.to_string(),
                u8::from(rank <= level).to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// History CSV: `replication,generation,evaluations,delta_hv`, one row per
/// checkpoint.
pub fn write_history_csv<W: Write>(histories: &[RunHistory], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["replication", "generation", "evaluations", "delta_hv"])?;
    for h in histories {
        for c in &h.checkpoints {
            w.write_record([
                h.replication.to_string(),
                c.generation.to_string(),
                c.evaluations.to_string(),
                fmt_f64(c.delta_hv),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub budget_fraction: f64,
    pub delta_hv_mean: f64,
    pub delta_hv_ci_low: f64,
    pub delta_hv_ci_high: f64,
}

/// Mean ΔHV per checkpoint across replications with a normal 95% interval.
/// `budget` is the evaluation count that maps to fraction 1.
pub fn delta_hv_curve(histories: &[RunHistory], budget: u64) -> Result<Vec<CurvePoint>> {
    let Some(first) = histories.first() else {
        return Ok(Vec::new());
    };
    let len = first.checkpoints.len();
    if histories.iter().any(|h| h.checkpoints.len() != len) {
        return Err(Error::invalid("histories have different checkpoint counts"));
    }
    let r = histories.len() as f64;
    Ok((0..len)
        .map(|c| {
            let vals: Vec<f64> = histories.iter().map(|h| h.checkpoints[c].delta_hv).collect();
            let evals = histories.iter().map(|h| h.checkpoints[c].evaluations as f64).sum::<f64>() / r;
            let mean = vals.iter().sum::<f64>() / r;
            let sd = if vals.len() > 1 {
                (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (r - 1.0)).sqrt()
            } else {
                0.0
            };
            let half = 1.96 * sd / r.sqrt();
            CurvePoint {
                budget_fraction: evals / budget as f64,
                delta_hv_mean: mean,
                delta_hv_ci_low: mean - half,
                delta_hv_ci_high: mean + half,
            }
        })
        .collect())
}

pub fn write_curve_csv<W: Write>(curve: &[CurvePoint], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["budget_fraction", "delta_hv_mean", "delta_hv_ci_low", "delta_hv_ci_high"])?;
    for p in curve {
        w.write_record([
            fmt_f64(p.budget_fraction),
            fmt_f64(p.delta_hv_mean),
            fmt_f64(p.delta_hv_ci_low),
            fmt_f64(p.delta_hv_ci_high),
        ])?;
    }
    w.flush()?;
    Ok(())
}
