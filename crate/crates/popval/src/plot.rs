//! Deterministic SVG scatter plots of p-value/posterior-probability pairs.
//!
//! The emitter is a pure function of its input: same points, same bytes.
//! That makes the plots diffable and lets golden tests pin output exactly.
//! Axes span the unit square, a dashed identity line marks perfect
//! agreement, and each record contributes one circular marker.

use crate::error::{parse, Result};

const CANVAS: f64 = 480.0;
const MARGIN: f64 = 40.0;
const PLOT: f64 = CANVAS - 2.0 * MARGIN;

/// Extracts `(x, y)` pairs from CSV text by column name.
///
/// The first line must be a header containing both requested columns.
/// Parse failures name the offending line (1-based, counting the header).
pub fn parse_pairs_csv(text: &str, x_col: &str, y_col: &str) -> Result<Vec<(f64, f64)>> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| parse("CSV is empty: expected a header line"))?;
    let columns: Vec<&str> = header.split(',').map(str::trim).collect();
    let find = |name: &str| -> Result<usize> {
        columns
            .iter()
            .position(|c| *c == name)
            .ok_or_else(|| parse(format!("CSV line 1: no column named '{name}' in header")))
    };
    let xi = find(x_col)?;
    let yi = find(y_col)?;

    let mut points = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != columns.len() {
            return Err(parse(format!(
                "CSV line {lineno}: expected {} fields, found {}",
                columns.len(),
                fields.len()
            )));
        }
        let get = |col: usize, name: &str| -> Result<f64> {
            fields[col].trim().parse::<f64>().map_err(|_| {
                parse(format!(
                    "CSV line {lineno}: cannot parse '{}' in column '{name}' as a number",
                    fields[col]
                ))
            })
        };
        points.push((get(xi, x_col)?, get(yi, y_col)?));
    }
    Ok(points)
}

/// Largest vertical distance from the identity line, `max |y - x|`.
///
/// For a scatter of (p, PoP) pairs this equals the record set's maximum
/// absolute difference.
pub fn max_vertical_deviation(points: &[(f64, f64)]) -> f64 {
    points
        .iter()
        .map(|&(x, y)| (y - x).abs())
        .fold(0.0, f64::max)
}

fn to_px_x(v: f64) -> f64 {
    MARGIN + v * PLOT
}

fn to_px_y(v: f64) -> f64 {
    MARGIN + (1.0 - v) * PLOT
}

/// Renders a unit-square scatter as a standalone SVG document.
///
/// Layout: 480x480 canvas, 40px margins, axes over [0, 1] with ticks every
/// 0.25, a dashed identity line, and one radius-2.5 marker per point.  All
/// coordinates are written with two decimals, so output is byte-identical
/// across runs and platforms for the same input.
pub fn scatter_svg(points: &[(f64, f64)], x_label: &str, y_label: &str) -> String {
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{c}\" height=\"{c}\" viewBox=\"0 0 {c} {c}\">\n",
        c = CANVAS as u32
    ));
    svg.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{c}\" height=\"{c}\" fill=\"white\"/>\n",
        c = CANVAS as u32
    ));

    // Plot frame.
    svg.push_str(&format!(
        "  <rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n",
        MARGIN, MARGIN, PLOT, PLOT
    ));

    // Ticks and grid labels at 0, 0.25, 0.5, 0.75, 1.
    for i in 0..=4u32 {
        let v = f64::from(i) / 4.0;
        let x = to_px_x(v);
        let y = to_px_y(v);
        svg.push_str(&format!(
            "  <line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"black\" stroke-width=\"1\"/>\n",
            CANVAS - MARGIN,
            CANVAS - MARGIN + 5.0
        ));
        svg.push_str(&format!(
            "  <text x=\"{x:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{v:.2}</text>\n",
            CANVAS - MARGIN + 18.0
        ));
        svg.push_str(&format!(
            "  <line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"black\" stroke-width=\"1\"/>\n",
            MARGIN - 5.0,
            MARGIN
        ));
        svg.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{v:.2}</text>\n",
            MARGIN - 8.0,
            y + 4.0
        ));
    }

    // Dashed identity line y = x.
    svg.push_str(&format!(
        "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"gray\" stroke-width=\"1\" stroke-dasharray=\"6 4\"/>\n",
        to_px_x(0.0),
        to_px_y(0.0),
        to_px_x(1.0),
        to_px_y(1.0)
    ));

    // Axis labels.
    svg.push_str(&format!(
        "  <text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
        CANVAS / 2.0,
        CANVAS - 6.0,
        xml_escape(x_label)
    ));
    svg.push_str(&format!(
        "  <text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 {:.2} {:.2})\">{}</text>\n",
        12.0,
        CANVAS / 2.0,
        12.0,
        CANVAS / 2.0,
        xml_escape(y_label)
    ));

    // Markers.
    for &(x, y) in points {
        svg.push_str(&format!(
            "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"steelblue\" fill-opacity=\"0.6\"/>\n",
            to_px_x(x),
            to_px_y(y)
        ));
    }

    svg.push_str("</svg>\n");
    svg
}

fn xml_escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
