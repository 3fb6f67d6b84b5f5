//! Objective-space and hypothesis-space charts as CSV, text and standalone
//! SVG.

use std::fmt::Write;

use crate::data::mask_complexity;
use crate::error::{Error, Result};
use crate::moga::Snapshot;
use crate::pareto::Frontier;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 460.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 170.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 55.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"];

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct OsSeries {
    pub label: String,
    /// `(complexity, error)` sorted by complexity.
    pub points: Vec<(f64, f64)>,
}

/// Error against complexity for the frontier, optionally overlaid with
/// population snapshots from earlier generations.
#[derive(Clone, Debug, PartialEq)]
pub struct OsPlot {
    pub series: Vec<OsSeries>,
    pub x_label: String,
}

pub fn os_plot(frontier: &Frontier, snapshots: &[Snapshot], count_intercept: bool) -> OsPlot {
    let shift = f64::from(u8::from(count_intercept));
    let mut series: Vec<OsSeries> = snapshots
        .iter()
        .map(|s| {
            let mut points: Vec<(f64, f64)> =
                s.objectives.iter().map(|o| (o.complexity as f64 + shift, o.error)).collect();
            points.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
            OsSeries { label: format!("generation {}", s.generation), points }
        })
        .collect();
    series.push(OsSeries {
        label: "frontier".into(),
        points: frontier
            .iter()
            .map(|m| (mask_complexity(&m.mask, count_intercept) as f64, m.objective.error))
            .collect(),
    });
    let x_label = if count_intercept { "number of coefficients" } else { "number of variables" };
    OsPlot { series, x_label: x_label.into() }
}

impl OsPlot {
    /// `series,complexity,mse` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("series,complexity,mse\n");
        for s in &self.series {
            for (x, y) in &s.points {
                let _ = writeln!(out, "{},{},{}", s.label, x, y);
            }
        }
        out
    }

    /// Standalone SVG with one polyline per series. With `log_y` the error
    /// axis is base-10 logarithmic; non-positive errors are drawn at the
    /// smallest positive error present.
    pub fn to_svg(&self, log_y: bool) -> String {
        let all: Vec<(f64, f64)> = self.series.iter().flat_map(|s| s.points.iter().copied()).collect();
        let min_pos = all.iter().map(|p| p.1).filter(|&v| v > 0.0).fold(f64::INFINITY, f64::min);
        let ty = |v: f64| -> f64 {
            if log_y {
                let v = if v > 0.0 { v } else if min_pos.is_finite() { min_pos } else { 1.0 };
                v.log10()
            } else {
                v
            }
        };
        let (mut x0, mut x1) = bounds(all.iter().map(|p| p.0));
        let (mut y0, mut y1) = bounds(all.iter().map(|p| ty(p.1)));
        if x1 <= x0 {
            x0 -= 0.5;
            x1 += 0.5;
        }
        if y1 <= y0 {
            y0 -= 0.5;
            y1 += 0.5;
        }
        let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        let px = |x: f64| MARGIN_LEFT + (x - x0) / (x1 - x0) * plot_w;
        let py = |y: f64| MARGIN_TOP + (1.0 - (ty(y) - y0) / (y1 - y0)) * plot_h;
        let py_raw = |t: f64| MARGIN_TOP + (1.0 - (t - y0) / (y1 - y0)) * plot_h;

        let mut svg = svg_header();
        let _ = writeln!(
            svg,
            r##"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="#333"/>"##
        );
        for i in 0..=5 {
            let x = x0 + (x1 - x0) * i as f64 / 5.0;
            let _ = writeln!(
                svg,
                r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="middle">{}</text>"#,
                px(x),
                HEIGHT - MARGIN_BOTTOM + 16.0,
                tick(x)
            );
            let t = y0 + (y1 - y0) * i as f64 / 5.0;
            let label = if log_y { tick(10f64.powf(t)) } else { tick(t) };
            let _ = writeln!(
                svg,
                r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{}</text>"#,
                MARGIN_LEFT - 6.0,
                py_raw(t) + 4.0,
                label
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="13" text-anchor="middle">{}</text>"#,
            MARGIN_LEFT + plot_w / 2.0,
            HEIGHT - 12.0,
            escape(&self.x_label)
        );
        let y_title = if log_y { "mean squared error (log scale)" } else { "mean squared error" };
        let _ = writeln!(
            svg,
            r#"<text x="18" y="{:.2}" font-size="13" text-anchor="middle" transform="rotate(-90 18 {:.2})">{y_title}</text>"#,
            MARGIN_TOP + plot_h / 2.0,
            MARGIN_TOP + plot_h / 2.0
        );

        for (i, s) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let pts: Vec<String> = s.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
            let _ = writeln!(
                svg,
                r#"<g class="series" data-label="{}"><polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                escape(&s.label),
                pts.join(" ")
            );
            for &(x, y) in &s.points {
                let _ = writeln!(svg, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#, px(x), py(y));
            }
            svg.push_str("</g>\n");
            let ly = MARGIN_TOP + 14.0 + 18.0 * i as f64;
            let lx = WIDTH - MARGIN_RIGHT + 14.0;
            let _ = writeln!(
                svg,
                r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}" font-size="11">{}</text>"#,
                lx + 18.0,
                lx + 24.0,
                ly + 4.0,
                escape(&s.label)
            );
        }
        svg.push_str("</svg>\n");
        svg
    }
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

fn tick(v: f64) -> String {
    if v == 0.0 || (1e-3..1e5).contains(&v.abs()) {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.2e}")
    }
}

fn svg_header() -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    )
}

/// Variable membership across frontier models: `cells[row][col]` is true
/// when `variables[row]` is in the model at `complexities[col]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HsMatrix {
    pub variables: Vec<String>,
    pub complexities: Vec<usize>,
    pub cells: Vec<Vec<bool>>,
}

/// Builds the membership matrix for frontier models within `range`
/// (inclusive). Rows are the variables used by at least one of those
/// models, ordered by the first complexity at which they appear, then by
/// name.
pub fn hs_plot(frontier: &Frontier, names: &[String], range: Option<(usize, usize)>) -> Result<HsMatrix> {
    let (lo, hi) = range.unwrap_or((0, usize::MAX));
    let models: Vec<_> = frontier.in_range(lo, hi).collect();
    if let Some(m) = models.iter().find(|m| m.mask.len() != names.len()) {
        return Err(Error::Dimension(format!("mask of {} bits against {} names", m.mask.len(), names.len())));
    }
    let mut first_seen: Vec<(usize, &str, usize)> = Vec::new();
    for (j, name) in names.iter().enumerate() {
        if let Some(m) = models.iter().find(|m| m.mask.get(j)) {
            first_seen.push((m.objective.complexity, name.as_str(), j));
        }
    }
    first_seen.sort();
    let cells = first_seen.iter().map(|&(_, _, j)| models.iter().map(|m| m.mask.get(j)).collect()).collect();
    Ok(HsMatrix {
        variables: first_seen.iter().map(|&(_, name, _)| name.to_string()).collect(),
        complexities: models.iter().map(|m| m.objective.complexity).collect(),
        cells,
    })
}

impl HsMatrix {
    /// Aligned table: a header of complexities, then one row of `1`/`0` per
    /// variable.
    pub fn to_text(&self) -> String {
        let name_w = self.variables.iter().map(|v| v.chars().count()).max().unwrap_or(0).max(8);
        let col_w = self.complexities.iter().map(|c| c.to_string().len()).max().unwrap_or(1) + 1;
        let mut out = format!("{:<name_w$}", "variable");
        for c in &self.complexities {
            let _ = write!(out, "{c:>col_w$}");
        }
        out.push('\n');
        for (name, row) in self.variables.iter().zip(&self.cells) {
            let pad = name_w - name.chars().count();
            out.push_str(name);
            out.push_str(&" ".repeat(pad));
            for &on in row {
                let _ = write!(out, "{:>col_w$}", if on { "1" } else { "0" });
            }
            out.push('\n');
        }
        out
    }

    /// Gantt-style chart: a grey cell marks a variable present in a model.
    /// Each cell carries `data-row`, `data-col` and `data-on` attributes.
    pub fn to_svg(&self) -> String {
        let cell = 18.0;
        let label_w = 12.0 + 7.0 * self.variables.iter().map(|v| v.chars().count()).max().unwrap_or(4) as f64;
        let top = 40.0;
        let w = label_w + cell * self.complexities.len() as f64 + 20.0;
        let h = top + cell * self.variables.len() as f64 + 40.0;
        let mut svg = format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        );
        for (c, complexity) in self.complexities.iter().enumerate() {
            let _ = writeln!(
                svg,
                r#"<text x="{:.1}" y="{:.1}" font-size="10" text-anchor="middle">{complexity}</text>"#,
                label_w + cell * (c as f64 + 0.5),
                top - 8.0
            );
        }
        for (r, (name, row)) in self.variables.iter().zip(&self.cells).enumerate() {
            let y = top + cell * r as f64;
            let _ = writeln!(
                svg,
                r#"<text x="{:.1}" y="{:.1}" font-size="11" text-anchor="end">{}</text>"#,
                label_w - 6.0,
                y + cell * 0.7,
                escape(name)
            );
            for (c, &on) in row.iter().enumerate() {
                let fill = if on { "#808080" } else { "#ffffff" };
                let _ = writeln!(
                    svg,
                    r##"<rect class="cell" data-row="{r}" data-col="{c}" data-on="{}" x="{:.1}" y="{y:.1}" width="{cell}" height="{cell}" fill="{fill}" stroke="#cccccc"/>"##,
                    u8::from(on),
                    label_w + cell * c as f64
                );
            }
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="middle">number of variables</text>"#,
            label_w + cell * self.complexities.len() as f64 / 2.0,
            h - 12.0
        );
        svg.push_str("</svg>\n");
        svg
    }
}
