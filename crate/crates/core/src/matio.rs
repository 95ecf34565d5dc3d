//! File formats: text matrices, weight vectors, JSON reports and SVG
//! scatter plots.
//!
//! Matrices are plain text with one row per line and entries separated by
//! commas and/or whitespace. Output always uses commas and the shortest
//! decimal form that parses back to the same `f64`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::ErrorKind;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::mds::PointConfiguration;

pub const SCHEMA_VERSION: &str = "1";

/// Dense row-major matrix as stored on disk.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<f64>,
}

impl MatrixFile {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.cols + j]
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.entries)
    }

    pub fn from_dmatrix(m: &DMatrix<f64>) -> Self {
        let entries = m
            .row_iter()
            .flat_map(|r| r.iter().copied().collect::<Vec<_>>())
            .collect();
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            entries,
        }
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| match source.kind() {
        ErrorKind::NotFound => Error::FileMissing {
            path: path.to_path_buf(),
        },
        _ => Error::Io {
            path: path.to_path_buf(),
            source,
        },
    })
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_number(token: &str, line: usize) -> Result<f64> {
    let value: f64 = token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("cannot parse `{token}` as a number"),
    })?;
    if !value.is_finite() {
        return Err(Error::NonFiniteInput {
            line,
            token: token.to_string(),
        });
    }
    Ok(value)
}

fn tokens(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
}

/// Parses matrix text. Blank lines are skipped; line numbers in errors are
/// 1-based.
pub fn parse_matrix(text: &str) -> Result<MatrixFile> {
    let mut entries = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let row = tokens(line)
            .map(|t| parse_number(t, line_no))
            .collect::<Result<Vec<_>>>()?;
        if row.is_empty() {
            continue;
        }
        match cols {
            None => cols = Some(row.len()),
            Some(c) if c != row.len() => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected {c} entries, found {}", row.len()),
                })
            }
            Some(_) => {}
        }
        entries.extend(row);
        rows += 1;
    }
    let cols = cols.ok_or(Error::Parse {
        line: 1,
        message: "no matrix entries".into(),
    })?;
    Ok(MatrixFile {
        rows,
        cols,
        entries,
    })
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<MatrixFile> {
    parse_matrix(&read_text(path.as_ref())?)
}

/// Shortest round-trip decimal, switching to exponent form for very large
/// or very small magnitudes.
pub fn format_number(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 {
        // keep the sign of negative zero so files round-trip bit for bit
        if x.is_sign_negative() { "-0" } else { "0" }.to_string()
    } else if (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn format_matrix(m: &MatrixFile) -> String {
    let mut out = String::new();
    for i in 0..m.rows {
        for j in 0..m.cols {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&format_number(m.get(i, j)));
        }
        out.push('\n');
    }
    out
}

pub fn write_matrix(m: &MatrixFile, path: impl AsRef<Path>) -> Result<()> {
    if let Some(pos) = m.entries.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteEntry {
            i: pos / m.cols.max(1),
            j: pos % m.cols.max(1),
        });
    }
    write_text(path.as_ref(), &format_matrix(m))
}

/// Parses `n` weights; see [`check_weights`].
pub fn parse_weights(text: &str, n: usize, normalize: bool) -> Result<Vec<f64>> {
    let mut w = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        for t in tokens(line) {
            w.push(parse_number(t, idx + 1)?);
        }
    }
    check_weights(w, n, normalize)
}

/// Validates `n` nonnegative weights. With `normalize` they are divided by
/// their sum; without it they must already sum to one within `1e-9`, and
/// the remaining drift is divided out so the mass is one to rounding.
pub fn check_weights(mut w: Vec<f64>, n: usize, normalize: bool) -> Result<Vec<f64>> {
    if w.len() != n {
        return Err(Error::WeightCount {
            expected: n,
            found: w.len(),
        });
    }
    if let Some((index, &value)) = w.iter().enumerate().find(|(_, &v)| v.is_nan() || v < 0.0) {
        return Err(Error::NegativeWeight { index, value });
    }
    let sum: f64 = w.iter().sum();
    if sum == 0.0 {
        return Err(Error::ZeroWeightSum);
    }
    if !normalize && (sum - 1.0).abs() > 1e-9 {
        return Err(Error::WeightSumNotOne { sum });
    }
    w.iter_mut().for_each(|x| *x /= sum);
    Ok(w)
}

pub fn read_weights(path: impl AsRef<Path>, n: usize, normalize: bool) -> Result<Vec<f64>> {
    parse_weights(&read_text(path.as_ref())?, n, normalize)
}

/// `{"schema_version": "1", "command": …, "parameters": {…}, "results": {…}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: String,
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub results: BTreeMap<String, Value>,
}

impl ReportDocument {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.into(),
            parameters: BTreeMap::new(),
            results: BTreeMap::new(),
        }
    }

    pub fn parameter(&mut self, key: &str, value: impl Serialize) -> Result<&mut Self> {
        self.parameters
            .insert(key.to_string(), checked_value(key, value)?);
        Ok(self)
    }

    pub fn result(&mut self, key: &str, value: impl Serialize) -> Result<&mut Self> {
        self.results
            .insert(key.to_string(), checked_value(key, value)?);
        Ok(self)
    }

    /// Numeric result; non-finite values are rejected because JSON would
    /// silently store them as `null`.
    pub fn number(&mut self, key: &str, value: f64) -> Result<&mut Self> {
        check_finite(key, &[value])?;
        self.result(key, value)
    }

    pub fn numbers(&mut self, key: &str, values: &[f64]) -> Result<&mut Self> {
        check_finite(key, values)?;
        self.result(key, values)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidReport(format!(
                "schema_version `{}`, expected `{SCHEMA_VERSION}`",
                self.schema_version
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        self.validate()?;
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}

fn checked_value(key: &str, value: impl Serialize) -> Result<Value> {
    serde_json::to_value(&value).map_err(|e| Error::InvalidReport(format!("`{key}`: {e}")))
}

fn check_finite(key: &str, values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidReport(format!(
            "non-finite value under `{key}`"
        )))
    }
}

pub fn write_report(report: &ReportDocument, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &report.to_json()?)
}

pub fn read_report(path: impl AsRef<Path>) -> Result<ReportDocument> {
    let doc: ReportDocument = serde_json::from_str(&read_text(path.as_ref())?)?;
    doc.validate()?;
    Ok(doc)
}

pub const CANVAS_SIZE: f64 = 800.0;
pub const CANVAS_MARGIN: f64 = 0.05;

/// Affine map from data coordinates to the SVG canvas, with one scale for
/// both axes and the bounding box centered.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterLayout {
    pub center: (f64, f64),
    pub scale: f64,
}

impl ScatterLayout {
    pub fn fit(points: &[(f64, f64)]) -> Self {
        let (mut lo_x, mut hi_x) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut lo_y, mut hi_y) = (f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in points {
            lo_x = lo_x.min(x);
            hi_x = hi_x.max(x);
            lo_y = lo_y.min(y);
            hi_y = hi_y.max(y);
        }
        if points.is_empty() {
            return Self {
                center: (0.0, 0.0),
                scale: 1.0,
            };
        }
        let span = (hi_x - lo_x).max(hi_y - lo_y);
        let usable = CANVAS_SIZE * (1.0 - 2.0 * CANVAS_MARGIN);
        Self {
            center: (0.5 * (lo_x + hi_x), 0.5 * (lo_y + hi_y)),
            scale: if span > 0.0 { usable / span } else { 1.0 },
        }
    }

    /// Canvas position; the y axis points up.
    pub fn to_canvas(&self, x: f64, y: f64) -> (f64, f64) {
        let mid = 0.5 * CANVAS_SIZE;
        (
            mid + (x - self.center.0) * self.scale,
            mid - (y - self.center.1) * self.scale,
        )
    }

    pub fn from_canvas(&self, cx: f64, cy: f64) -> (f64, f64) {
        let mid = 0.5 * CANVAS_SIZE;
        (
            self.center.0 + (cx - mid) / self.scale,
            self.center.1 - (cy - mid) / self.scale,
        )
    }
}

fn projected<P: PointConfiguration + ?Sized>(
    e: &P,
    axes: (usize, usize),
) -> Result<Vec<(f64, f64)>> {
    let dim = e.dim();
    for axis in [axes.0, axes.1] {
        if axis >= dim {
            return Err(Error::AxisOutOfRange { axis, dim });
        }
    }
    let x = e.coords();
    Ok((0..x.nrows())
        .map(|i| (x[(i, axes.0)], x[(i, axes.1)]))
        .collect())
}

/// Standalone SVG 1.1 scatter plot of two embedding axes.
pub fn scatter_svg<P: PointConfiguration + ?Sized>(e: &P, axes: (usize, usize)) -> Result<String> {
    let points = projected(e, axes)?;
    let layout = ScatterLayout::fit(&points);
    let size = CANVAS_SIZE;
    let margin = CANVAS_SIZE * CANVAS_MARGIN;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#
    );
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r##"<rect x="{margin}" y="{margin}" width="{w}" height="{w}" fill="none" stroke="#999999" stroke-width="1"/>"##,
        w = size - 2.0 * margin
    );
    let _ = writeln!(
        svg,
        r#"<text x="{x}" y="{y}" font-family="sans-serif" font-size="14" text-anchor="middle">dim {i}</text>"#,
        x = size / 2.0,
        y = size - margin / 3.0,
        i = axes.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{x}" y="{y}" font-family="sans-serif" font-size="14" text-anchor="middle" transform="rotate(-90 {x} {y})">dim {j}</text>"#,
        x = margin / 2.0,
        y = size / 2.0,
        j = axes.1
    );
    let _ = writeln!(svg, r##"<g fill="#1f77b4" fill-opacity="0.8">"##);
    for &(x, y) in &points {
        let (cx, cy) = layout.to_canvas(x, y);
        let _ = writeln!(svg, r#"<circle cx="{cx:.6}" cy="{cy:.6}" r="3"/>"#);
    }
    svg.push_str("</g>\n</svg>\n");
    Ok(svg)
}

pub fn render_scatter_svg<P: PointConfiguration + ?Sized>(
    e: &P,
    axes: (usize, usize),
    path: impl AsRef<Path>,
) -> Result<()> {
    write_text(path.as_ref(), &scatter_svg(e, axes)?)
}
