//! Run artifacts: TSV tables, SVG line plots and the JSON manifest.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::CliError;

/// Column table written as tab-separated text.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn to_tsv(&self) -> String {
        let mut s = self.columns.join("\t");
        s.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|v| format!("{v:.16e}")).collect();
            s.push_str(&cells.join("\t"));
            s.push('\n');
        }
        s
    }
}

/// One polyline of a plot.
#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn from_table(t: &Table, x: &str, y: &str, label: impl Into<String>) -> Self {
        let xs = t.column(x).unwrap_or_default();
        let ys = t.column(y).unwrap_or_default();
        Self { label: label.into(), points: xs.into_iter().zip(ys).collect() }
    }
}

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"];
const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 48.0;

/// Line plot with axis box, bounds labels and a legend. Non-finite points
/// break the polyline.
pub fn svg_plot(title: &str, xlabel: &str, ylabel: &str, series: &[Series]) -> String {
    let finite = series.iter().flat_map(|s| s.points.iter()).filter(|p| p.0.is_finite() && p.1.is_finite());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in finite {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !(x0 < x1) {
        (x0, x1) = (x0.min(0.0) - 1.0, x1.max(0.0) + 1.0);
    }
    if !(y0 < y1) {
        (y0, y1) = (y0.min(0.0) - 1.0, y1.max(0.0) + 1.0);
    }
    let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>"#, W - 2.0 * PAD, H - 2.0 * PAD);
    let _ = writeln!(s, r#"<text x="{}" y="20" text-anchor="middle" font-size="13">{}</text>"#, W / 2.0, escape(title));
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, W / 2.0, H - 10.0, escape(xlabel));
    let _ = writeln!(s, r#"<text x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">{}</text>"#, H / 2.0, H / 2.0, escape(ylabel));
    let _ = writeln!(s, r#"<text x="{PAD}" y="{}" text-anchor="start">{x0:.4}</text>"#, H - PAD + 14.0);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{x1:.4}</text>"#, W - PAD, H - PAD + 14.0);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{y0:.4}</text>"#, PAD - 4.0, H - PAD);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{y1:.4}</text>"#, PAD - 4.0, PAD + 8.0);

    for (i, ser) in series.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let mut run: Vec<String> = Vec::new();
        let flush = |run: &mut Vec<String>, s: &mut String| {
            if run.len() > 1 {
                let _ = writeln!(s, r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#, run.join(" "));
            }
            run.clear();
        };
        for &(x, y) in &ser.points {
            if x.is_finite() && y.is_finite() {
                run.push(format!("{:.2},{:.2}", sx(x), sy(y)));
            } else {
                flush(&mut run, &mut s);
            }
        }
        flush(&mut run, &mut s);
        let ly = PAD + 14.0 + 14.0 * i as f64;
        let _ = writeln!(s, r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{colour}" stroke-width="2"/>"#, W - PAD - 110.0, ly - 4.0, W - PAD - 90.0, ly - 4.0);
        let _ = writeln!(s, r#"<text x="{}" y="{ly}">{}</text>"#, W - PAD - 86.0, escape(&ser.label));
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Everything a run produces, before it touches the disk.
#[derive(Debug, Default)]
pub struct Artifacts {
    pub tables: Vec<(String, Table)>,
    pub figures: Vec<(String, String)>,
    /// Scalar results, keyed for the manifest and for sweeps.
    pub derived: BTreeMap<String, f64>,
    pub notes: Vec<String>,
    pub timings: BTreeMap<String, f64>,
}

impl Artifacts {
    pub fn table(&mut self, name: impl Into<String>, t: Table) {
        self.tables.push((name.into(), t));
    }

    pub fn figure(&mut self, name: impl Into<String>, svg: String) {
        self.figures.push((name.into(), svg));
    }

    pub fn set(&mut self, key: &str, v: f64) {
        self.derived.insert(key.to_string(), v);
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    kind: &'a str,
    config: &'a Value,
    derived: BTreeMap<&'a str, Value>,
    notes: &'a [String],
    files: Vec<String>,
    timings_s: &'a BTreeMap<String, f64>,
}

fn number(v: f64) -> Value {
    serde_json::Number::from_f64(v).map(Value::Number).unwrap_or_else(|| Value::String(format!("{v}")))
}

/// Write tables, optionally figures, and `manifest.json` into `dir`.
/// Returns the paths written.
pub fn write_artifacts(dir: &Path, kind: &str, config: &Value, a: &Artifacts, svg: bool) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut written = Vec::new();
    let mut put = |name: &str, body: &str| -> Result<(), CliError> {
        let p = dir.join(name);
        fs::write(&p, body).map_err(|e| CliError::io(&p, e))?;
        written.push(p);
        Ok(())
    };
    for (name, t) in &a.tables {
        put(&format!("{name}.tsv"), &t.to_tsv())?;
    }
    if svg {
        for (name, body) in &a.figures {
            put(&format!("{name}.svg"), body)?;
        }
    }
    drop(put);
    let files = written.iter().filter_map(|p| p.file_name()).map(|f| f.to_string_lossy().into_owned()).collect();
    let m = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        kind,
        config,
        derived: a.derived.iter().map(|(k, v)| (k.as_str(), number(*v))).collect(),
        notes: &a.notes,
        files,
        timings_s: &a.timings,
    };
    let body = serde_json::to_string_pretty(&m).expect("manifest serializes");
    let p = dir.join("manifest.json");
    fs::write(&p, body + "\n").map_err(|e| CliError::io(&p, e))?;
    written.push(p);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tsv_has_seventeen_digits() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec![0.1, -2.0]);
        let s = t.to_tsv();
        assert_eq!(s, "a\tb\n1.0000000000000001e-1\t-2.0000000000000000e0\n");
        let back: f64 = s.lines().nth(1).unwrap().split('\t').next().unwrap().parse().unwrap();
        assert_eq!(back, 0.1);
    }

    #[test]
    fn svg_breaks_on_nan() {
        let ser = Series { label: "s".into(), points: vec![(0.0, 0.0), (1.0, 1.0), (2.0, f64::NAN), (3.0, 0.0), (4.0, 2.0)] };
        let svg = svg_plot("t", "x", "y", &[ser]);
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.ends_with("</svg>\n"));
    }
}
