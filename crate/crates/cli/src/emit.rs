//! CSV and SVG writers for result tables.

use std::fmt::Write as _;

use crate::error::{CliError, Result};
use crate::run::Table;

/// Seventeen significant digits: enough to round-trip any double.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

/// Render `table` as CSV. Sweep tables are long-format with two leading
/// `sweep_param,sweep_value` columns.
pub fn to_csv(table: &Table) -> String {
    let mut out = String::new();
    if table.sweep_parameter.is_some() {
        out.push_str("sweep_param,sweep_value,");
    }
    out.push_str(&table.columns.join(","));
    out.push('\n');
    for series in &table.series {
        let prefix = match (table.sweep_parameter, series.sweep_value) {
            (Some(name), Some(v)) => format!("{name},{},", format_number(v)),
            _ => String::new(),
        };
        for row in &series.rows {
            out.push_str(&prefix);
            let cells: Vec<String> = row.iter().map(|&x| format_number(x)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
    }
    out
}

/// What to draw: named columns against `t`, or one column against another.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selection {
    Lines(Vec<String>),
    Parametric { x: String, y: String },
}

impl Selection {
    /// Parse `"W,S"` or `"parametric:Rx,Rz"`.
    pub fn parse(text: &str) -> Result<Self> {
        let names = |s: &str| -> Vec<String> { s.split(',').map(|c| c.trim().to_string()).collect() };
        if let Some(rest) = text.strip_prefix("parametric:") {
            let cols = names(rest);
            if cols.len() != 2 || cols.iter().any(String::is_empty) {
                return Err(CliError::Validation(format!(
                    "parametric selection needs exactly two columns, got `{rest}`"
                )));
            }
            return Ok(Selection::Parametric {
                x: cols[0].clone(),
                y: cols[1].clone(),
            });
        }
        let cols = names(text);
        if cols.iter().any(String::is_empty) {
            return Err(CliError::Validation(format!("bad SVG selection `{text}`")));
        }
        Ok(Selection::Lines(cols))
    }

    fn columns(&self) -> Vec<&str> {
        match self {
            Selection::Lines(cols) => cols.iter().map(String::as_str).collect(),
            Selection::Parametric { x, y } => vec![x, y],
        }
    }
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;
const TICKS: usize = 5;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

struct Curve {
    label: String,
    points: Vec<(f64, f64)>,
}

#[derive(Clone, Copy)]
struct Range {
    lo: f64,
    hi: f64,
}

impl Range {
    fn of<'a>(values: impl Iterator<Item = &'a f64>) -> Self {
        let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
        if !(lo.is_finite() && hi.is_finite()) {
            return Range { lo: 0.0, hi: 1.0 };
        }
        if hi - lo < 1e-12 * (1.0 + lo.abs().max(hi.abs())) {
            let pad = 0.5 * (1.0 + lo.abs());
            return Range {
                lo: lo - pad,
                hi: hi + pad,
            };
        }
        Range { lo, hi }
    }

    /// Widen to multiples of a 1-2-5 step giving about `TICKS` intervals.
    fn nice(self) -> (Self, f64) {
        let raw = (self.hi - self.lo) / TICKS as f64;
        let magnitude = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 5.0, 10.0]
            .iter()
            .map(|m| m * magnitude)
            .find(|s| *s >= raw * (1.0 - 1e-9))
            .unwrap_or(10.0 * magnitude);
        let lo = (self.lo / step + 1e-9).floor() * step;
        let hi = (self.hi / step - 1e-9).ceil() * step;
        (Range { lo, hi }, step)
    }

    fn ticks(&self, step: f64) -> Vec<f64> {
        let n = ((self.hi - self.lo) / step).round() as usize;
        (0..=n).map(|i| self.lo + i as f64 * step).collect()
    }

    fn map(&self, v: f64, from: f64, to: f64) -> f64 {
        from + (v - self.lo) / (self.hi - self.lo) * (to - from)
    }
}

fn tick_label(v: f64) -> String {
    let v = if v.abs() < 1e-12 { 0.0 } else { v };
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Render the selected columns of `table` as an SVG line chart.
pub fn to_svg(table: &Table, selection: &Selection) -> Result<String> {
    let mut index = Vec::new();
    for name in selection.columns() {
        let k = table.column_index(name).ok_or_else(|| {
            CliError::Validation(format!(
                "SVG selection names unknown column `{name}`; available: {}",
                table.columns.join(",")
            ))
        })?;
        index.push(k);
    }
    if table.series.iter().all(|s| s.rows.is_empty()) {
        return Err(CliError::Validation("cannot plot an empty table".into()));
    }

    let suffix = |v: Option<f64>| match (table.sweep_parameter, v) {
        (Some(p), Some(v)) => format!(" ({p}={})", tick_label(v)),
        _ => String::new(),
    };
    let mut curves = Vec::new();
    let (x_label, y_label) = match selection {
        Selection::Lines(cols) => {
            for series in &table.series {
                for (col, &k) in cols.iter().zip(&index) {
                    curves.push(Curve {
                        label: format!("{col}{}", suffix(series.sweep_value)),
                        points: series.rows.iter().map(|r| (r[0], r[k])).collect(),
                    });
                }
            }
            ("t".to_string(), cols.join(", "))
        }
        Selection::Parametric { x, y } => {
            for series in &table.series {
                curves.push(Curve {
                    label: format!("({x}, {y}){}", suffix(series.sweep_value)),
                    points: series.rows.iter().map(|r| (r[index[0]], r[index[1]])).collect(),
                });
            }
            (x.clone(), y.clone())
        }
    };

    let (xr, x_step) = Range::of(curves.iter().flat_map(|c| c.points.iter().map(|p| &p.0))).nice();
    let (yr, y_step) = Range::of(curves.iter().flat_map(|c| c.points.iter().map(|p| &p.1))).nice();
    let (x0, x1) = (LEFT, WIDTH - RIGHT);
    let (y0, y1) = (HEIGHT - BOTTOM, TOP);

    let mut svg = String::new();
    let w = &mut svg;
    // Writing into a String cannot fail.
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(w, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        w,
        r#"<rect x="{x0}" y="{y1}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        x1 - x0,
        y0 - y1
    );
    for xv in xr.ticks(x_step) {
        let px = xr.map(xv, x0, x1);
        let _ = writeln!(
            w,
            r#"<line x1="{px:.2}" y1="{y0}" x2="{px:.2}" y2="{}" stroke="black"/><text x="{px:.2}" y="{}" text-anchor="middle">{}</text>"#,
            y0 + 5.0,
            y0 + 20.0,
            tick_label(xv)
        );
    }
    for yv in yr.ticks(y_step) {
        let py = yr.map(yv, y0, y1);
        let _ = writeln!(
            w,
            r#"<line x1="{}" y1="{py:.2}" x2="{x0}" y2="{py:.2}" stroke="black"/><text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
            x0 - 5.0,
            x0 - 8.0,
            py + 4.0,
            tick_label(yv)
        );
    }
    let _ = writeln!(
        w,
        r#"<text x="{:.2}" y="{}" text-anchor="middle">{}</text>"#,
        0.5 * (x0 + x1),
        HEIGHT - 10.0,
        escape(&x_label)
    );
    let _ = writeln!(
        w,
        r#"<text x="15" y="{:.2}" text-anchor="middle" transform="rotate(-90 15 {:.2})">{}</text>"#,
        0.5 * (y0 + y1),
        0.5 * (y0 + y1),
        escape(&y_label)
    );

    for (i, curve) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let points: Vec<String> = curve
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", xr.map(x, x0, x1), yr.map(y, y0, y1)))
            .collect();
        let _ = writeln!(
            w,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{}"/>"#,
            points.join(" ")
        );
        let ly = TOP + 10.0 + 18.0 * i as f64;
        let _ = writeln!(
            w,
            r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
            x1 + 10.0,
            x1 + 30.0,
            x1 + 35.0,
            ly + 4.0,
            escape(&curve.label)
        );
    }
    let _ = writeln!(w, "</svg>");
    Ok(svg)
}
