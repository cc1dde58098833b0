//! Self-contained SVG line plots with a log-scaled x axis.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{CliError, CliResult};
use crate::output::{atomic_write, Table};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

/// Column used for the horizontal axis: `x` if present, else the first one.
pub fn x_column(table: &Table) -> &str {
    if table.columns.iter().any(|c| c == "x") {
        "x"
    } else {
        &table.columns[0]
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders (x, y_field) from `table`; identical input gives identical bytes.
pub fn render_svg(table: &Table, y_field: &str) -> CliResult<String> {
    let x_name = x_column(table).to_string();
    let xs = table.column(&x_name)?;
    let ys = table.column(y_field)?;
    if xs.len() < 2 {
        return Err(CliError::validation(format!(
            "a plot needs at least 2 rows, got {}",
            xs.len()
        )));
    }
    if let Some(bad) = xs.iter().find(|&&x| !(x > 0.0 && x.is_finite())) {
        return Err(CliError::validation(format!(
            "log-scaled axis needs positive finite `{x_name}`, got {bad}"
        )));
    }
    if let Some(bad) = ys.iter().find(|y| !y.is_finite()) {
        return Err(CliError::validation(format!("`{y_field}` has non-finite value {bad}")));
    }

    let lx: Vec<f64> = xs.iter().map(|x| x.log10()).collect();
    let (x_lo, x_hi) = bounds(&lx);
    let (y_lo, y_hi) = bounds(&ys);
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |v: f64| LEFT + (v - x_lo) / (x_hi - x_lo) * plot_w;
    let py = |v: f64| TOP + (y_hi - v) / (y_hi - y_lo) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );

    // decade ticks on the x axis
    let mut d = x_lo.ceil() as i32;
    while d as f64 <= x_hi + 1e-12 {
        let x = px(d as f64);
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" font-size="12" text-anchor="middle">1e{d}</text>"#,
            TOP + plot_h,
            TOP + plot_h + 5.0,
            TOP + plot_h + 20.0
        );
        d += 1;
    }
    for i in 0..=4 {
        let v = y_lo + (y_hi - y_lo) * i as f64 / 4.0;
        let y = py(v);
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" font-size="12" text-anchor="end">{v:.4e}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-size="14" text-anchor="middle">{} (log scale)</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 15.0,
        escape(&x_name)
    );
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{:.2}" font-size="14" text-anchor="middle" transform="rotate(-90 20 {:.2})">{}</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0,
        escape(y_field)
    );

    let points: Vec<String> = lx
        .iter()
        .zip(&ys)
        .map(|(&x, &y)| format!("{:.3},{:.3}", px(x), py(y)))
        .collect();
    let _ = writeln!(
        svg,
        r#"<polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{}"/>"#,
        points.join(" ")
    );
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Padded range; a constant series gets a unit-width band.
fn bounds(v: &[f64]) -> (f64, f64) {
    let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

pub fn emit_svg_plot(table: &Table, y_field: &str, path: &Path) -> CliResult<()> {
    let svg = render_svg(table, y_field)?;
    atomic_write(path, svg.as_bytes())
}
