//! CSV formats read and written by the pipeline.
//!
//! * features:   `label,f1,...,fn`
//! * pre-shapes: `label,c1,...,c2n[,source]`
//! * curves:     a `# fagc-curves v1` line, then
//!   `label,theta,residual,v1,...,v2n,w1,...,w2n`

use crate::error::CliError;
use anyhow::{anyhow, Context};
use fagc::{GeodesicCurve, LabeledDataset, PreShape, Provenance, RawFeature};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

pub const CURVES_SCHEMA: &str = "# fagc-curves v1";

/// Shortest decimal form that parses back to the same bits.
pub fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn reader(path: &Path) -> Result<csv::Reader<File>, CliError> {
    let file = File::open(path)
        .with_context(|| format!("cannot open {}", path.display()))
        .map_err(CliError::Input)?;
    Ok(csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(file))
}

fn headers(rdr: &mut csv::Reader<File>, path: &Path) -> Result<Vec<String>, CliError> {
    let h = rdr
        .headers()
        .with_context(|| format!("{}: unreadable header", path.display()))
        .map_err(CliError::Input)?;
    Ok(h.iter().map(|s| s.trim().to_string()).collect())
}

fn expect_columns(path: &Path, got: &[String], prefix: &str) -> Result<usize, CliError> {
    if got.first().map(String::as_str) != Some("label") {
        return Err(CliError::input(format!(
            "{}: first column must be `label`",
            path.display()
        )));
    }
    let n = got.len() - 1;
    for (i, name) in got[1..].iter().enumerate() {
        if *name != format!("{prefix}{}", i + 1) {
            return Err(CliError::input(format!(
                "{}: column {} should be `{prefix}{}`, found `{name}`",
                path.display(),
                i + 2,
                i + 1
            )));
        }
    }
    Ok(n)
}

fn parse_cell(path: &Path, row: usize, column: &str, cell: &str) -> Result<f64, CliError> {
    cell.trim().parse::<f64>().map_err(|_| {
        CliError::input(format!(
            "{}: row {row}: column `{column}` is not a number: {cell:?}",
            path.display()
        ))
    })
}

/// Rows of a feature file as `(label, values)`. Row numbers in errors count
/// data rows from 1.
pub fn read_features(path: &Path) -> Result<Vec<(String, Vec<f64>)>, CliError> {
    let mut rdr = reader(path)?;
    let cols = headers(&mut rdr, path)?;
    let n = expect_columns(path, &cols, "f")?;
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 1;
        let rec =
            rec.map_err(|e| CliError::input(format!("{}: row {row}: {e}", path.display())))?;
        if rec.len() != n + 1 {
            return Err(CliError::input(format!(
                "{}: row {row}: expected {} fields, found {}",
                path.display(),
                n + 1,
                rec.len()
            )));
        }
        let values = rec
            .iter()
            .skip(1)
            .zip(&cols[1..])
            .map(|(cell, col)| parse_cell(path, row, col, cell))
            .collect::<Result<Vec<_>, _>>()?;
        out.push((rec[0].to_string(), values));
    }
    Ok(out)
}

pub fn raw_feature(path: &Path, row: usize, values: Vec<f64>) -> Result<RawFeature, CliError> {
    RawFeature::new(values)
        .map_err(|e| CliError::input(format!("{}: row {row}: {e}", path.display())))
}

pub fn write_features<'a>(
    path: &Path,
    rows: impl IntoIterator<Item = (&'a str, &'a [f64])>,
    dim: usize,
) -> Result<(), CliError> {
    let mut w = csv_writer(path)?;
    let mut header = vec!["label".to_string()];
    header.extend((1..=dim).map(|i| format!("f{i}")));
    w.write_record(&header).map_err(write_err)?;
    for (label, values) in rows {
        let mut rec = vec![label.to_string()];
        rec.extend(values.iter().map(|&v| fmt_f64(v)));
        w.write_record(&rec).map_err(write_err)?;
    }
    w.flush().map_err(|e| CliError::Io(e.into()))
}

/// Reads a pre-shape file. Rows without a `source` column are real.
pub fn read_preshapes(path: &Path) -> Result<LabeledDataset, CliError> {
    let mut rdr = reader(path)?;
    let mut cols = headers(&mut rdr, path)?;
    let has_source = cols.last().map(String::as_str) == Some("source");
    if has_source {
        cols.pop();
    }
    let n = expect_columns(path, &cols, "c")?;
    let mut ds = LabeledDataset::new();
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 1;
        let rec =
            rec.map_err(|e| CliError::input(format!("{}: row {row}: {e}", path.display())))?;
        let expected = n + 1 + usize::from(has_source);
        if rec.len() != expected {
            return Err(CliError::input(format!(
                "{}: row {row}: expected {expected} fields, found {}",
                path.display(),
                rec.len()
            )));
        }
        let coords = rec
            .iter()
            .skip(1)
            .take(n)
            .zip(&cols[1..])
            .map(|(cell, col)| parse_cell(path, row, col, cell))
            .collect::<Result<Vec<_>, _>>()?;
        let provenance = if has_source {
            rec[n + 1]
                .trim()
                .parse::<Provenance>()
                .map_err(|e| CliError::input(format!("{}: row {row}: {e}", path.display())))?
        } else {
            Provenance::Real
        };
        let shape = PreShape::new(coords)
            .map_err(|e| CliError::input(format!("{}: row {row}: {e}", path.display())))?;
        ds.push(&rec[0], shape, provenance)
            .map_err(|e| CliError::input(format!("{}: row {row}: {e}", path.display())))?;
    }
    Ok(ds)
}

pub fn write_preshapes<'a>(
    path: &Path,
    rows: impl IntoIterator<Item = (&'a str, &'a PreShape, Provenance)>,
    dim: usize,
) -> Result<(), CliError> {
    let mut w = csv_writer(path)?;
    let mut header = vec!["label".to_string()];
    header.extend((1..=dim).map(|i| format!("c{i}")));
    header.push("source".into());
    w.write_record(&header).map_err(write_err)?;
    for (label, shape, provenance) in rows {
        let mut rec = vec![label.to_string()];
        rec.extend(shape.coords().iter().map(|&v| fmt_f64(v)));
        rec.push(provenance.as_str().into());
        w.write_record(&rec).map_err(write_err)?;
    }
    w.flush().map_err(|e| CliError::Io(e.into()))
}

#[derive(Debug, Clone)]
pub struct CurveRecord {
    pub label: String,
    pub curve: GeodesicCurve,
    pub residual: f64,
}

pub fn write_curves(path: &Path, records: &[CurveRecord]) -> Result<(), CliError> {
    let file = File::create(path)
        .with_context(|| format!("cannot create {}", path.display()))
        .map_err(CliError::Io)?;
    let mut out = BufWriter::new(file);
    writeln!(out, "{CURVES_SCHEMA}").map_err(|e| CliError::Io(e.into()))?;
    let mut w = csv::Writer::from_writer(out);
    let dim = records.first().map_or(0, |r| r.curve.dim());
    let mut header = vec!["label".to_string(), "theta".into(), "residual".into()];
    header.extend((1..=dim).map(|i| format!("v{i}")));
    header.extend((1..=dim).map(|i| format!("w{i}")));
    w.write_record(&header).map_err(write_err)?;
    for r in records {
        let mut rec = vec![
            r.label.clone(),
            fmt_f64(r.curve.theta()),
            fmt_f64(r.residual),
        ];
        rec.extend(r.curve.v_star().coords().iter().map(|&v| fmt_f64(v)));
        rec.extend(r.curve.w_star().coords().iter().map(|&v| fmt_f64(v)));
        w.write_record(&rec).map_err(write_err)?;
    }
    w.flush().map_err(|e| CliError::Io(e.into()))
}

pub fn read_curves(path: &Path) -> Result<Vec<CurveRecord>, CliError> {
    let file = File::open(path)
        .with_context(|| format!("cannot open {}", path.display()))
        .map_err(CliError::Input)?;
    let mut buf = BufReader::new(file);
    let mut first = String::new();
    buf.read_line(&mut first)
        .map_err(|e| CliError::Input(e.into()))?;
    if first.trim_end() != CURVES_SCHEMA {
        return Err(CliError::input(format!(
            "{}: missing schema line `{CURVES_SCHEMA}`",
            path.display()
        )));
    }
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(buf);
    let cols: Vec<String> = rdr
        .headers()
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?
        .iter()
        .map(str::to_string)
        .collect();
    if cols.len() < 3
        || cols[..3] != ["label", "theta", "residual"]
        || !(cols.len() - 3).is_multiple_of(2)
    {
        return Err(CliError::input(format!(
            "{}: header must be label,theta,residual,v1..vD,w1..wD",
            path.display()
        )));
    }
    let dim = (cols.len() - 3) / 2;
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 1;
        let rec =
            rec.map_err(|e| CliError::input(format!("{}: row {row}: {e}", path.display())))?;
        if rec.len() != cols.len() {
            return Err(CliError::input(format!(
                "{}: row {row}: expected {} fields, found {}",
                path.display(),
                cols.len(),
                rec.len()
            )));
        }
        let nums = rec
            .iter()
            .skip(1)
            .zip(&cols[1..])
            .map(|(cell, col)| parse_cell(path, row, col, cell))
            .collect::<Result<Vec<_>, _>>()?;
        let bad =
            |e: fagc::FagcError| CliError::input(format!("{}: row {row}: {e}", path.display()));
        let v = PreShape::new(nums[2..2 + dim].to_vec()).map_err(bad)?;
        let w = PreShape::new(nums[2 + dim..].to_vec()).map_err(bad)?;
        let curve = GeodesicCurve::new(v, w).map_err(bad)?;
        if (curve.theta() - nums[0]).abs() > 1e-9 {
            return Err(CliError::input(format!(
                "{}: row {row}: theta {} disagrees with endpoint angle {}",
                path.display(),
                nums[0],
                curve.theta()
            )));
        }
        out.push(CurveRecord {
            label: rec[0].to_string(),
            curve,
            residual: nums[1],
        });
    }
    if out.is_empty() {
        return Err(CliError::input(format!(
            "{}: no curve records",
            path.display()
        )));
    }
    Ok(out)
}

fn csv_writer(path: &Path) -> Result<csv::Writer<File>, CliError> {
    csv::Writer::from_path(path)
        .with_context(|| format!("cannot create {}", path.display()))
        .map_err(CliError::Io)
}

fn write_err(e: csv::Error) -> CliError {
    CliError::Io(anyhow!(e))
}
