//! CSV tables and SVG line plots.

use crate::error::{Error, Result};
use std::fmt::Write;

/// A CSV cell: numbers print in shortest round-trip exponent form.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// Comma separated, header row, LF line endings.
pub fn csv_table(header: &[&str], rows: &[Vec<Cell>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .map(|c| match c {
                Cell::Num(v) => format!("{v:e}"),
                Cell::Text(s) => s.clone(),
            })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl Series {
    pub fn new(name: &str, x: Vec<f64>, y: Vec<f64>) -> Self {
        Series { name: name.to_string(), x, y }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SvgStyle {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_y: bool,
    /// Shaded x interval.
    pub shade: Option<(f64, f64)>,
}

pub const WIDTH: f64 = 960.0;
pub const HEIGHT: f64 = 540.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Renders line series into a fixed 960x540 SVG. Output depends only on the inputs.
pub fn emit_svg(series: &[Series], style: &SvgStyle) -> Result<String> {
    if series.is_empty() {
        return Err(Error::invalid("series", "need at least one series"));
    }
    let ty = |y: f64| if style.log_y { if y > 0.0 { y.log10() } else { f64::NAN } } else { y };
    let mut xr = (f64::INFINITY, f64::NEG_INFINITY);
    let mut yr = (f64::INFINITY, f64::NEG_INFINITY);
    for s in series {
        if s.x.len() != s.y.len() {
            return Err(Error::invalid("series", format!("{}: x and y lengths differ", s.name)));
        }
        for (x, y) in s.x.iter().zip(&s.y) {
            let y = ty(*y);
            if x.is_finite() && y.is_finite() {
                xr = (xr.0.min(*x), xr.1.max(*x));
                yr = (yr.0.min(y), yr.1.max(y));
            }
        }
    }
    if !(xr.0.is_finite() && yr.0.is_finite()) {
        return Err(Error::invalid("series", "no finite points to plot"));
    }
    if xr.1 == xr.0 {
        xr = (xr.0 - 0.5, xr.1 + 0.5);
    }
    if yr.1 == yr.0 {
        yr = (yr.0 - 0.5, yr.1 + 0.5);
    }
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + (x - xr.0) / (xr.1 - xr.0) * pw;
    let py = |y: f64| TOP + (1.0 - (y - yr.0) / (yr.1 - yr.0)) * ph;

    let mut o = String::new();
    let _ = writeln!(
        o,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(o, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    if let Some((a, b)) = style.shade {
        let (a, b) = (a.max(xr.0).min(xr.1), b.max(xr.0).min(xr.1));
        if b > a {
            let _ = writeln!(
                o,
                r##"<rect class="shade" x="{:.2}" y="{TOP:.2}" width="{:.2}" height="{ph:.2}" fill="#ffd54f" fill-opacity="0.35"/>"##,
                px(a),
                px(b) - px(a)
            );
        }
    }
    let _ = writeln!(
        o,
        r#"<rect x="{LEFT:.2}" y="{TOP:.2}" width="{pw:.2}" height="{ph:.2}" fill="none" stroke="black"/>"#
    );
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let xv = xr.0 + f * (xr.1 - xr.0);
        let yv = yr.0 + f * (yr.1 - yr.0);
        let ylab = if style.log_y { format!("1e{yv:.1}") } else { format!("{yv:.3e}") };
        let _ = writeln!(
            o,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">{:.3e}</text>"#,
            px(xv),
            TOP + ph + 18.0,
            xv
        );
        let _ = writeln!(
            o,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            py(yv) + 4.0,
            ylab
        );
    }
    let _ = writeln!(
        o,
        r#"<text x="{:.2}" y="28" font-size="16" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(&style.title)
    );
    let _ = writeln!(
        o,
        r#"<text x="{:.2}" y="{:.2}" font-size="13" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 14.0,
        escape(&style.x_label)
    );
    let _ = writeln!(
        o,
        r#"<text x="18" y="{:.2}" font-size="13" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(&style.y_label)
    );
    for (n, s) in series.iter().enumerate() {
        let color = COLORS[n % COLORS.len()];
        // non-finite points split the line
        let mut runs: Vec<Vec<String>> = vec![Vec::new()];
        for (x, y) in s.x.iter().zip(&s.y) {
            let y = ty(*y);
            if x.is_finite() && y.is_finite() {
                runs.last_mut().unwrap().push(format!("{:.2},{:.2}", px(*x), py(y)));
            } else if !runs.last().unwrap().is_empty() {
                runs.push(Vec::new());
            }
        }
        for run in runs.iter().filter(|r| !r.is_empty()) {
            let _ = writeln!(
                o,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                run.join(" ")
            );
        }
        let ly = TOP + 16.0 + 18.0 * n as f64;
        let lx = LEFT + pw - 170.0;
        let _ = writeln!(
            o,
            r#"<line class="legend" x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"#,
            lx + 24.0
        );
        let _ = writeln!(
            o,
            r#"<text x="{:.2}" y="{:.2}" font-size="12">{}</text>"#,
            lx + 30.0,
            ly + 4.0,
            escape(&s.name)
        );
    }
    o.push_str("</svg>\n");
    Ok(o)
}
