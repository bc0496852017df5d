//! CSV, JSON and SVG renderings of a [`Report`].

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::config::Format;
use crate::error::CliError;
use crate::report::Report;

pub const CSV_HEADER: &str = "n,raw,scaled,defect,residual,wall_ms";
pub const SVG_WIDTH: f64 = 800.0;
pub const SVG_HEIGHT: f64 = 500.0;

/// A float with 17 significant digits, enough to recover it exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

pub fn to_csv(report: &Report) -> String {
    let mut s = String::with_capacity(64 * (report.rows.len() + 1));
    s.push_str(CSV_HEADER);
    s.push('\n');
    for r in &report.rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{:.3}",
            r.n,
            fmt_opt(r.raw),
            fmt_opt(r.scaled),
            fmt_opt(r.defect),
            fmt_opt(r.residual),
            r.wall_ms
        );
    }
    s
}

/// Pretty JSON whose floats carry 17 significant digits.
struct Sig17<'a>(PrettyFormatter<'a>);

impl Formatter for Sig17<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(fmt_f64(value).as_bytes())
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json(report: &Report) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17(PrettyFormatter::new()));
    report.serialize(&mut ser).expect("report serialization is infallible");
    buf.push(b'\n');
    String::from_utf8(buf).expect("json is utf-8")
}

pub fn from_json(text: &str) -> serde_json::Result<Report> {
    serde_json::from_str(text)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Scaled values against `n` on a logarithmic axis, with the extrapolated
/// limit drawn as a dashed rule.
pub fn to_svg(report: &Report) -> String {
    let (left, right, top, bottom) = (90.0, 30.0, 50.0, 60.0);
    let pw = SVG_WIDTH - left - right;
    let ph = SVG_HEIGHT - top - bottom;
    let pts: Vec<(f64, f64)> = report
        .rows
        .iter()
        .filter_map(|r| r.scaled.map(|s| (r.n as f64, s)))
        .collect();
    let limit = report.extrapolation.as_ref().map(|e| e.limit);

    let ns: Vec<f64> = report.rows.iter().map(|r| r.n as f64).collect();
    let (x_lo, x_hi) = match (ns.first(), ns.last()) {
        (Some(&a), Some(&b)) if b > a => (a.ln(), b.ln()),
        (Some(&a), _) => (a.ln() - 0.5, a.ln() + 0.5),
        _ => (0.0, 1.0),
    };
    // halved values keep the span finite for extreme inputs
    let ys: Vec<f64> = pts.iter().map(|p| p.1).chain(limit).map(|y| 0.5 * y).collect();
    let (mut y_lo, mut y_hi) = ys.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &y| {
        (lo.min(y), hi.max(y))
    });
    if !y_lo.is_finite() {
        (y_lo, y_hi) = (0.0, 0.5);
    }
    let pad = if y_hi > y_lo {
        0.08 * (y_hi - y_lo)
    } else {
        0.5 * y_lo.abs().max(1e-12)
    };
    y_lo -= pad;
    y_hi += pad;

    let sx = |n: f64| left + pw * (n.ln() - x_lo) / (x_hi - x_lo);
    let sy = |y: f64| top + ph * ((y_hi - 0.5 * y) / (y_hi - y_lo));
    let tick = |k: usize| (2.0 * (y_lo + (y_hi - y_lo) * k as f64 / 4.0)).clamp(f64::MIN, f64::MAX);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="28" text-anchor="middle" font-size="16">{}</text>"#,
        SVG_WIDTH / 2.0,
        escape(&report.experiment)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for &n in &ns {
        let x = sx(n);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{}" x2="{x:.2}" y2="{}" stroke="black"/><text x="{x:.2}" y="{}" text-anchor="middle">{n}</text>"#,
            top + ph,
            top + ph + 5.0,
            top + ph + 20.0
        );
    }
    for k in 0..=4 {
        let y = tick(k);
        let py = top + ph * (4 - k) as f64 / 4.0;
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{py:.2}" x2="{left}" y2="{py:.2}" stroke="black"/><text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
            left - 5.0,
            left - 8.0,
            py + 4.0,
            format_tick(y)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">n (log scale)</text>"#,
        left + pw / 2.0,
        SVG_HEIGHT - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{}" text-anchor="middle" transform="rotate(-90 20 {})">scaled value</text>"#,
        top + ph / 2.0,
        top + ph / 2.0
    );
    if let Some(l) = limit {
        let py = sy(l);
        let _ = writeln!(
            s,
            r#"<line x1="{left}" y1="{py:.2}" x2="{}" y2="{py:.2}" stroke="firebrick" stroke-dasharray="6 4"/><text x="{}" y="{:.2}" text-anchor="end" fill="firebrick">limit {}</text>"#,
            left + pw,
            left + pw - 4.0,
            py - 6.0,
            format_tick(l)
        );
    }
    if !pts.is_empty() {
        let path: Vec<String> = pts.iter().map(|&(n, y)| format!("{:.2},{:.2}", sx(n), sy(y))).collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="2"/>"#,
            path.join(" ")
        );
        for &(n, y) in &pts {
            let _ = writeln!(
                s,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3.5" fill="steelblue"/>"#,
                sx(n),
                sy(y)
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

fn format_tick(y: f64) -> String {
    if y != 0.0 && (y.abs() < 1e-3 || y.abs() >= 1e5) {
        format!("{y:.3e}")
    } else {
        format!("{y:.6}")
    }
}

/// Writes `<experiment>.<ext>` into `dir` for each requested format.
pub fn write_report(report: &Report, formats: &[Format], dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    if formats.is_empty() {
        return Ok(Vec::new());
    }
    fs::create_dir_all(dir).map_err(|source| CliError::Write {
        path: dir.display().to_string(),
        source,
    })?;
    let mut written = Vec::with_capacity(formats.len());
    for &f in formats {
        let body = match f {
            Format::Csv => to_csv(report),
            Format::Json => to_json(report),
            Format::Svg => to_svg(report),
        };
        let path = dir.join(format!("{}.{}", report.experiment, f.extension()));
        fs::write(&path, body).map_err(|source| CliError::Write {
            path: path.display().to_string(),
            source,
        })?;
        written.push(path);
    }
    Ok(written)
}
