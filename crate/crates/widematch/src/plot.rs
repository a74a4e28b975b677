//! Deterministic SVG line plots of the long-format bundle tables.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::bundle::{SNR_CSV, SWEEP_CSV, TRANSMISSION_CSV};
use crate::{Error, Result};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
/// Fraction of the data span added on each side of both axes.
pub const MARGIN: f64 = 0.05;

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

/// A `x, strategy, y` table split into one series per strategy, in order of
/// first appearance.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

pub fn read_long_csv(path: &Path) -> Result<Table> {
    let data_err = |message: String| Error::Data { path: path.display().to_string(), message };
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::io(path, e))?;
    let header = r.headers().map_err(|e| Error::io(path, e))?.clone();
    if header.len() != 3 {
        return Err(data_err(format!("expected 3 columns, found {}", header.len())));
    }
    let mut series: Vec<Series> = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| Error::io(path, e))?;
        let parse = |k: usize| {
            rec[k].parse::<f64>().map_err(|_| data_err(format!("row {}: invalid number {:?}", i + 2, &rec[k])))
        };
        let (x, y) = (parse(0)?, parse(2)?);
        match series.iter_mut().find(|s| s.name == rec[1]) {
            Some(s) => s.points.push((x, y)),
            None => series.push(Series { name: rec[1].to_string(), points: vec![(x, y)] }),
        }
    }
    Ok(Table { x_label: header[0].to_string(), y_label: header[2].to_string(), series })
}

/// Data range widened by [`MARGIN`] on each side. Non-finite values are
/// ignored; a degenerate range is widened around its value.
pub fn axis_range(values: impl IntoIterator<Item = f64>) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in values.into_iter().filter(|v| v.is_finite()) {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo > hi {
        return (0.0, 1.0);
    }
    let span = if hi > lo { hi - lo } else { lo.abs().max(1.0) };
    (lo - MARGIN * span, hi + MARGIN * span)
}

/// Round step near `span / 5` (1, 2 or 5 times a power of ten).
fn tick_step(span: f64) -> f64 {
    let raw = span / 5.0;
    let p = 10f64.powf(raw.log10().floor());
    let m = raw / p;
    p * if m < 1.5 {
        1.0
    } else if m < 3.5 {
        2.0
    } else if m < 7.5 {
        5.0
    } else {
        10.0
    }
}

/// Engineering exponent for tick labels.
fn exponent(lo: f64, hi: f64) -> i32 {
    let m = lo.abs().max(hi.abs());
    if m == 0.0 || (1e-2..1e3).contains(&m) {
        0
    } else {
        3 * (m.log10() / 3.0).floor() as i32
    }
}

fn color(name: &str, index: usize) -> &'static str {
    let known = ["ideal", "optimal", "frequency-flat", "conjugate-match", "ladder", "no-match"];
    match known.iter().position(|k| *k == name) {
        Some(i) => PALETTE[i],
        None => PALETTE[index % PALETTE.len()],
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn axis_label(name: &str, exp: i32) -> String {
    if exp == 0 {
        escape(name)
    } else {
        format!("{} (x1e{exp})", escape(name))
    }
}

pub fn render_svg(table: &Table, title: &str) -> String {
    let (x0, x1) = axis_range(table.series.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
    let (y0, y1) = axis_range(table.series.iter().flat_map(|s| s.points.iter().map(|p| p.1)));
    let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + (y1 - y) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15">{}</text>"#, LEFT + pw / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );

    let (ex, ey) = (exponent(x0, x1), exponent(y0, y1));
    for (lo, hi, exp, horizontal) in [(x0, x1, ex, true), (y0, y1, ey, false)] {
        let step = tick_step(hi - lo);
        let mut k = (lo / step).ceil() as i64;
        while (k as f64) * step <= hi {
            let v = k as f64 * step;
            let label = format!("{}", round_label(v / 10f64.powi(exp)));
            if horizontal {
                let x = sx(v);
                let _ = writeln!(s, r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{TOP}" stroke="#e0e0e0"/>"##, TOP + ph);
                let _ = writeln!(s, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{label}</text>"#, TOP + ph + 16.0);
            } else {
                let y = sy(v);
                let _ = writeln!(s, r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#e0e0e0"/>"##, LEFT + pw);
                let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{label}</text>"#, LEFT - 6.0, y + 4.0);
            }
            k += 1;
        }
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 16.0,
        axis_label(&table.x_label, ex)
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        axis_label(&table.y_label, ey)
    );

    for (i, series) in table.series.iter().enumerate() {
        let c = color(&series.name, i);
        let pts: Vec<String> = series
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline class="series" data-name="{}" fill="none" stroke="{c}" stroke-width="1.5" points="{}"/>"#,
            escape(&series.name),
            pts.join(" ")
        );
        let ly = TOP + 10.0 + 18.0 * i as f64;
        let lx = LEFT + pw + 12.0;
        let _ = writeln!(s, r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{c}" stroke-width="2"/>"#, lx + 20.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, lx + 26.0, ly + 4.0, escape(&series.name));
    }
    s.push_str("</svg>\n");
    s
}

/// Strips float noise such as `0.30000000000000004` from tick labels.
fn round_label(v: f64) -> f64 {
    let r = (v * 1e9).round() / 1e9;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Writes one SVG per table present in the bundle directory.
pub fn emit_plots(dir: &Path) -> Result<Vec<PathBuf>> {
    if !dir.is_dir() {
        return Err(Error::io(dir, "bundle directory not found"));
    }
    let mut out = Vec::new();
    for (csv, title) in [
        (TRANSMISSION_CSV, "Transmission coefficient"),
        (SNR_CSV, "Signal-to-noise ratio"),
        (SWEEP_CSV, "Achievable rate versus bandwidth"),
    ] {
        let src = dir.join(csv);
        if !src.exists() {
            continue;
        }
        let table = read_long_csv(&src)?;
        let dst = src.with_extension("svg");
        fs::write(&dst, render_svg(&table, title)).map_err(|e| Error::io(&dst, e))?;
        out.push(dst);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> Table {
        Table {
            x_label: "f_hz".into(),
            y_label: "value".into(),
            series: vec![
                Series { name: "optimal".into(), points: vec![(4.9e9, 0.2), (7e9, 0.9), (9.1e9, 0.3)] },
                Series { name: "no-match".into(), points: vec![(4.9e9, 0.1), (7e9, 0.4), (9.1e9, 0.1)] },
            ],
        }
    }

    #[test]
    fn range_has_five_percent_margin() {
        let (lo, hi) = axis_range([4.9e9, 9.1e9]);
        assert!((lo - (4.9e9 - 0.21e9)).abs() < 1.0);
        assert!((hi - (9.1e9 + 0.21e9)).abs() < 1.0);
        let (lo, hi) = axis_range([2.0, 2.0]);
        assert!((lo - 1.9).abs() < 1e-12 && (hi - 2.1).abs() < 1e-12);
        assert_eq!(axis_range([f64::NAN]), (0.0, 1.0));
    }

    #[test]
    fn one_polyline_per_series() {
        let svg = render_svg(&table(), "T");
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains(r#"data-name="no-match""#));
        assert_eq!(svg, render_svg(&table(), "T"));
    }

    #[test]
    fn ticks_are_round() {
        assert_eq!(tick_step(4.62e9), 1e9);
        assert_eq!(tick_step(0.9), 0.2);
        assert_eq!(exponent(4.69e9, 9.31e9), 9);
        assert_eq!(exponent(-0.05, 1.05), 0);
    }
}
