//! SVG learning curves from a `iteration,algorithm,msd_db` CSV.
//!
//! Output depends only on the CSV content: series are ordered by algorithm
//! name and coloured by that order, and every coordinate is printed with a
//! fixed number of decimals. Non-finite values and the zero-MSD sentinel are
//! not drawn; they split a series into separate polylines.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::metrics::ZERO_MSD_DB;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];
const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 50.0;
const TICKS: usize = 5;

type Series = BTreeMap<String, Vec<(f64, f64)>>;

fn parse(text: &str) -> Result<Series> {
    let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| Error::Malformed(e.to_string()))?.clone();
    if headers.iter().collect::<Vec<_>>() != ["iteration", "algorithm", "msd_db"] {
        return Err(Error::Malformed(format!(
            "expected header `iteration,algorithm,msd_db`, got `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut series = Series::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Malformed(e.to_string()))?;
        let row = i + 2;
        let field = |k: usize| record.get(k).ok_or_else(|| Error::Malformed(format!("row {row}: missing field")));
        let iteration: f64 = field(0)?
            .parse::<u64>()
            .map_err(|_| Error::Malformed(format!("row {row}: bad iteration")))? as f64;
        let value: f64 = field(2)?
            .parse()
            .map_err(|_| Error::Malformed(format!("row {row}: bad msd_db")))?;
        series.entry(field(1)?.to_owned()).or_default().push((iteration, value));
    }
    if series.is_empty() {
        return Err(Error::Malformed("no data rows".into()));
    }
    Ok(series)
}

fn drawable(v: f64) -> bool {
    v.is_finite() && v > ZERO_MSD_DB
}

fn tick_values(lo: f64, hi: f64) -> Vec<f64> {
    (0..TICKS).map(|k| lo + (hi - lo) * k as f64 / (TICKS - 1) as f64).collect()
}

/// Renders the CSV text as an SVG document.
pub fn render_svg(csv_text: &str) -> Result<String> {
    let series = parse(csv_text)?;
    let points = series.values().flatten();
    let (mut x_lo, mut x_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_lo, mut y_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in points {
        x_lo = x_lo.min(x);
        x_hi = x_hi.max(x);
        if drawable(y) {
            y_lo = y_lo.min(y);
            y_hi = y_hi.max(y);
        }
    }
    if x_hi <= x_lo {
        x_hi = x_lo + 1.0;
    }
    if !y_lo.is_finite() {
        (y_lo, y_hi) = (-1.0, 1.0);
    } else if y_hi - y_lo < 1e-9 {
        (y_lo, y_hi) = (y_lo - 1.0, y_hi + 1.0);
    } else {
        let pad = 0.05 * (y_hi - y_lo);
        (y_lo, y_hi) = (y_lo - pad, y_hi + pad);
    }

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = |y: f64| TOP + (y_hi - y) / (y_hi - y_lo) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    for x in tick_values(x_lo, x_hi) {
        let px = sx(x);
        let _ = writeln!(
            svg,
            r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{x:.0}</text>"#,
            TOP + plot_h,
            TOP + plot_h + 5.0,
            TOP + plot_h + 18.0
        );
    }
    for y in tick_values(y_lo, y_hi) {
        let py = sy(y);
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{y:.1}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            py + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">iteration</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="15" y="{:.2}" text-anchor="middle" transform="rotate(-90 15 {:.2})">MSD (dB)</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    for (k, (name, pts)) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let mut segment: Vec<String> = Vec::new();
        let flush = |segment: &mut Vec<String>, svg: &mut String| {
            if !segment.is_empty() {
                let _ = writeln!(
                    svg,
                    r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                    segment.join(" ")
                );
                segment.clear();
            }
        };
        for &(x, y) in pts {
            if drawable(y) {
                segment.push(format!("{:.2},{:.2}", sx(x), sy(y)));
            } else {
                flush(&mut segment, &mut svg);
            }
        }
        flush(&mut segment, &mut svg);

        let ly = TOP + 15.0 + 18.0 * k as f64;
        let lx = LEFT + plot_w + 10.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 20.0,
            lx + 25.0,
            ly + 4.0,
            escape(name)
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn render_svg_file(path: &Path) -> Result<String> {
    render_svg(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_curve_is_one_horizontal_polyline() {
        let csv = "iteration,algorithm,msd_db\n0,DLMS,-10.000000\n1,DLMS,-10.000000\n2,DLMS,-10.000000\n";
        let svg = render_svg(csv).unwrap();
        let lines: Vec<_> = svg.lines().filter(|l| l.starts_with("<polyline")).collect();
        assert_eq!(lines.len(), 1);
        let pts = lines[0].split("points=\"").nth(1).unwrap().trim_end_matches("\"/>");
        let ys: Vec<_> = pts.split(' ').map(|p| p.split(',').nth(1).unwrap()).collect();
        assert_eq!(ys.len(), 3);
        assert!(ys.iter().all(|y| *y == ys[0]));
    }

    #[test]
    fn output_is_deterministic_and_ordered() {
        let csv = "iteration,algorithm,msd_db\n0,DSELMS,1\n0,DLMS,2\n1,DSELMS,0.5\n1,DLMS,inf\n";
        let a = render_svg(csv).unwrap();
        assert_eq!(a, render_svg(csv).unwrap());
        let dlms = a.find(">DLMS<").unwrap();
        let dselms = a.find(">DSELMS<").unwrap();
        assert!(dlms < dselms);
        assert!(!a.contains("inf"));
    }

    #[test]
    fn empty_body_is_rejected() {
        let err = render_svg("iteration,algorithm,msd_db\n").unwrap_err();
        assert!(err.to_string().contains("no data rows"));
        assert!(render_svg("a,b\n1,2\n").is_err());
        assert!(render_svg("iteration,algorithm,msd_db\nx,DLMS,1\n").is_err());
    }
}
