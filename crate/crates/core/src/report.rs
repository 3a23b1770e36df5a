//! SVG radar and bar charts for one or more scored devices.
//!
//! Radar axes run runtime (up), accuracy (right), scalability (down) and
//! capacity (left), so opposite axes pair up as in the overall-score area.
//! Each axis is scaled to the largest value across the compared devices.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::scoring::ScoreSet;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

const AXES: [&str; 4] = ["runtime", "accuracy", "scalability", "capacity"];
/// Unit direction of each axis in SVG coordinates (y grows downwards).
const DIRS: [(f64, f64); 4] = [(0.0, -1.0), (1.0, 0.0), (0.0, 1.0), (-1.0, 0.0)];

const SIZE: f64 = 600.0;
const RADIUS: f64 = 200.0;

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn values(s: &ScoreSet) -> [f64; 4] {
    [s.runtime, s.accuracy, s.scalability, s.capacity]
}

/// Per-axis maxima across devices, 1 where nothing is positive.
pub fn axis_maxima(sets: &[ScoreSet]) -> [f64; 4] {
    let mut max = [0.0f64; 4];
    for s in sets {
        for (m, v) in max.iter_mut().zip(values(s)) {
            *m = m.max(v);
        }
    }
    max.map(|m| if m > 0.0 { m } else { 1.0 })
}

/// Polygon vertices for one device, centred on the canvas.
pub fn radar_points(s: &ScoreSet, maxima: &[f64; 4]) -> [(f64, f64); 4] {
    let c = SIZE / 2.0;
    let v = values(s);
    std::array::from_fn(|k| {
        let r = RADIUS * (v[k] / maxima[k]).clamp(0.0, 1.0);
        (c + r * DIRS[k].0, c + r * DIRS[k].1)
    })
}

pub fn radar_svg(sets: &[ScoreSet]) -> String {
    let maxima = axis_maxima(sets);
    let c = SIZE / 2.0;
    let title = AXES
        .iter()
        .zip(maxima)
        .map(|(a, m)| format!("{a} max {m:.3}"))
        .collect::<Vec<_>>()
        .join(", ");
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(svg, "<title>Sub-scores ({})</title>", escape(&title));
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for ring in 1..=4 {
        let r = RADIUS * ring as f64 / 4.0;
        let pts: Vec<String> = DIRS
            .iter()
            .map(|(dx, dy)| format!("{:.3},{:.3}", c + r * dx, c + r * dy))
            .collect();
        let _ = writeln!(
            svg,
            r##"<polygon points="{}" fill="none" stroke="#cccccc"/>"##,
            pts.join(" ")
        );
    }
    for (k, (dx, dy)) in DIRS.iter().enumerate() {
        let (x, y) = (c + RADIUS * dx, c + RADIUS * dy);
        let _ = writeln!(
            svg,
            r##"<line x1="{c}" y1="{c}" x2="{x:.3}" y2="{y:.3}" stroke="#888888"/>"##
        );
        let (lx, ly) = (c + (RADIUS + 30.0) * dx, c + (RADIUS + 30.0) * dy + 5.0);
        let _ = writeln!(
            svg,
            r#"<text x="{lx:.3}" y="{ly:.3}" text-anchor="middle" font-family="sans-serif" font-size="14">{} ({:.2})</text>"#,
            AXES[k], maxima[k]
        );
    }
    for (i, s) in sets.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = radar_points(s, &maxima)
            .iter()
            .map(|(x, y)| format!("{x:.3},{y:.3}"))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polygon class="device" data-device="{}" points="{}" fill="{colour}" fill-opacity="0.25" stroke="{colour}" stroke-width="2"/>"#,
            escape(&s.device),
            pts.join(" ")
        );
        let y = 20.0 + 20.0 * i as f64;
        let _ = writeln!(
            svg,
            r#"<rect class="legend" x="10" y="{:.1}" width="12" height="12" fill="{colour}"/>"#,
            y - 10.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="28" y="{y:.1}" font-family="sans-serif" font-size="13">{} (overall {:.2})</text>"#,
            escape(&s.device),
            s.overall
        );
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn bar_svg(sets: &[ScoreSet]) -> String {
    let width = 120.0 + 90.0 * sets.len() as f64;
    let height = 360.0;
    let base = 300.0;
    let top = 40.0;
    let max = sets
        .iter()
        .map(|s| s.overall)
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(svg, "<title>Overall score (max {max:.3})</title>");
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r##"<line x1="60" y1="{base}" x2="{:.1}" y2="{base}" stroke="#333333"/>"##,
        width - 20.0
    );
    for (i, s) in sets.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let h = (base - top) * (s.overall / max).clamp(0.0, 1.0);
        let x = 80.0 + 90.0 * i as f64;
        let _ = writeln!(
            svg,
            r#"<rect class="bar" data-device="{}" x="{x:.1}" y="{:.3}" width="60" height="{h:.3}" fill="{colour}"/>"#,
            escape(&s.device),
            base - h
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.3}" text-anchor="middle" font-family="sans-serif" font-size="12">{:.2}</text>"#,
            x + 30.0,
            base - h - 6.0,
            s.overall
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-family="sans-serif" font-size="12">{}</text>"#,
            x + 30.0,
            base + 18.0,
            escape(&s.device)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Writes `radar.svg` and `overall.svg` into `out_dir`.
pub fn render_report(sets: &[ScoreSet], out_dir: &Path) -> Result<Vec<PathBuf>> {
    if sets.is_empty() {
        return Err(Error::Scoring("no score sets to report".into()));
    }
    let radar = out_dir.join("radar.svg");
    let bars = out_dir.join("overall.svg");
    std::fs::write(&radar, radar_svg(sets)).map_err(|e| Error::io(&radar, e))?;
    std::fs::write(&bars, bar_svg(sets)).map_err(|e| Error::io(&bars, e))?;
    Ok(vec![radar, bars])
}
