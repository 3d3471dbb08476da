//! Dependency-free SVG charts.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::portfolio::{DensityClass, Heatmap2D, RankingRow, VectorField};

const W: f64 = 720.0;
const H: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

fn esc(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
    invert_y: bool,
    out: String,
}

impl Frame {
    fn new(title: &str, x: (f64, f64), y: (f64, f64), invert_y: bool) -> Self {
        let pad = |(lo, hi): (f64, f64)| {
            if hi > lo {
                (lo, hi)
            } else {
                (lo - 0.5, hi + 0.5)
            }
        };
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">"#
        );
        let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="{}" y="22" font-size="14" text-anchor="middle">{}</text>"#,
            W / 2.0,
            esc(title)
        );
        Self {
            x: pad(x),
            y: pad(y),
            invert_y,
            out,
        }
    }

    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (W - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        let t = (y - self.y.0) / (self.y.1 - self.y.0);
        let t = if self.invert_y { t } else { 1.0 - t };
        TOP + t * (H - TOP - BOTTOM)
    }

    fn axes(&mut self, x_label: &str, y_label: &str, ticks: usize) {
        let (x0, x1, y0, y1) = (LEFT, W - RIGHT, TOP, H - BOTTOM);
        let _ = writeln!(
            self.out,
            r##"<path d="M{x0},{y0} V{y1} H{x1}" fill="none" stroke="#333"/>"##
        );
        for i in 0..=ticks {
            let t = i as f64 / ticks as f64;
            let xv = self.x.0 + t * (self.x.1 - self.x.0);
            let yv = self.y.0 + t * (self.y.1 - self.y.0);
            let (px, py) = (self.px(xv), self.py(yv));
            let _ = writeln!(
                self.out,
                r#"<text x="{px:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
                y1 + 16.0,
                tick(xv)
            );
            let _ = writeln!(
                self.out,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
                x0 - 6.0,
                py + 4.0,
                tick(yv)
            );
        }
        let _ = writeln!(
            self.out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            (x0 + x1) / 2.0,
            H - 12.0,
            esc(x_label)
        );
        let _ = writeln!(
            self.out,
            r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
            (y0 + y1) / 2.0,
            (y0 + y1) / 2.0,
            esc(y_label)
        );
    }

    fn legend(&mut self, entries: &[(String, &str)]) {
        for (i, (label, color)) in entries.iter().enumerate() {
            let y = TOP + 8.0 + 16.0 * i as f64;
            let x = W - RIGHT + 14.0;
            let _ = writeln!(
                self.out,
                r#"<rect x="{x}" y="{:.1}" width="10" height="10" fill="{color}"/>"#,
                y - 8.0
            );
            let _ = writeln!(
                self.out,
                r#"<text x="{}" y="{:.1}">{}</text>"#,
                x + 14.0,
                y + 1.0,
                esc(label)
            );
        }
    }

    fn finish(mut self) -> String {
        self.out.push_str("</svg>\n");
        self.out
    }
}

fn tick(v: f64) -> String {
    if v.fract().abs() < 1e-9 {
        format!("{}", v as i64)
    } else {
        format!("{v:.2}")
    }
}

fn extent(vals: impl Iterator<Item = f64>) -> (f64, f64) {
    vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    })
}

/// Rank of each region per year, rank 1 on top.
pub fn bump_chart(rows: &[RankingRow], title: &str) -> String {
    if rows.is_empty() {
        return Frame::new(title, (0.0, 1.0), (1.0, 2.0), true).finish();
    }
    let xs = extent(rows.iter().map(|r| r.year as f64));
    let max_rank = rows.iter().map(|r| r.rank).max().unwrap_or(1) as f64;
    let mut f = Frame::new(title, xs, (1.0, max_rank), true);
    f.axes("year", "rank", (xs.1 - xs.0).clamp(1.0, 10.0) as usize);
    let mut series: BTreeMap<&str, Vec<(f64, f64)>> = BTreeMap::new();
    for r in rows {
        series
            .entry(&r.region)
            .or_default()
            .push((r.year as f64, r.rank as f64));
    }
    let mut by_final: Vec<(&str, Vec<(f64, f64)>)> = series.into_iter().collect();
    by_final.sort_by(|a, b| {
        let last = |s: &Vec<(f64, f64)>| s.last().map_or((0.0, 0.0), |p| (-p.0, p.1));
        last(&a.1)
            .partial_cmp(&last(&b.1))
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.0.cmp(b.0))
    });
    let mut legend = Vec::new();
    for (i, (region, pts)) in by_final.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        polyline(&mut f, pts, color);
        for &(x, y) in pts {
            let _ = writeln!(
                f.out,
                r#"<circle cx="{:.1}" cy="{:.1}" r="4" fill="{color}"/>"#,
                f.px(x),
                f.py(y)
            );
        }
        legend.push((region.to_string(), color));
    }
    f.legend(&legend);
    f.finish()
}

fn polyline(f: &mut Frame, pts: &[(f64, f64)], color: &str) {
    let d: Vec<String> = pts
        .iter()
        .map(|&(x, y)| format!("{:.1},{:.1}", f.px(x), f.py(y)))
        .collect();
    let _ = writeln!(
        f.out,
        r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
        d.join(" ")
    );
}

/// One line per named series.
pub fn line_chart(
    series: &[(String, Vec<(f64, f64)>)],
    title: &str,
    x_label: &str,
    y_label: &str,
) -> String {
    let all = || series.iter().flat_map(|s| s.1.iter());
    if all().next().is_none() {
        return Frame::new(title, (0.0, 1.0), (0.0, 1.0), false).finish();
    }
    let mut f = Frame::new(
        title,
        extent(all().map(|p| p.0)),
        extent(all().map(|p| p.1)),
        false,
    );
    f.axes(x_label, y_label, 5);
    let mut legend = Vec::new();
    for (i, (name, pts)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        polyline(&mut f, pts, color);
        legend.push((name.clone(), color));
    }
    f.legend(&legend);
    f.finish()
}

fn density_legend() -> Vec<(String, &'static str)> {
    [
        DensityClass::Low,
        DensityClass::Intermediate,
        DensityClass::High,
    ]
    .into_iter()
    .map(|d| (format!("{} density", d.as_str()), d.color()))
    .collect()
}

/// Nonempty bins filled with their density-class color.
pub fn heatmap_svg(h: &Heatmap2D, title: &str, x_label: &str, y_label: &str) -> String {
    let xs = (h.x_edges[0], *h.x_edges.last().unwrap_or(&1.0));
    let ys = (h.y_edges[0], *h.y_edges.last().unwrap_or(&1.0));
    let mut f = Frame::new(title, xs, ys, false);
    for (ix, iy, _, d) in h.cells() {
        let (x0, x1) = (f.px(h.x_edges[ix]), f.px(h.x_edges[ix + 1]));
        let (y0, y1) = (f.py(h.y_edges[iy + 1]), f.py(h.y_edges[iy]));
        let _ = writeln!(
            f.out,
            r#"<rect x="{x0:.1}" y="{y0:.1}" width="{:.1}" height="{:.1}" fill="{}"/>"#,
            (x1 - x0).max(0.5),
            (y1 - y0).max(0.5),
            d.color()
        );
    }
    f.axes(x_label, y_label, 5);
    f.legend(&density_legend());
    f.finish()
}

/// Mean displacement arrows from bin centers, colored by density class.
pub fn vector_field_svg(v: &VectorField, title: &str) -> String {
    let xs = (v.x_edges[0], *v.x_edges.last().unwrap_or(&1.0));
    let ys = (v.y_edges[0], *v.y_edges.last().unwrap_or(&1.0));
    let mut f = Frame::new(title, xs, ys, false);
    f.axes(v.x_axis.as_str(), v.y_axis.as_str(), 5);
    for c in &v.cells {
        let (x0, y0) = (f.px(c.x_center), f.py(c.y_center));
        let (x1, y1) = (f.px(c.x_center + c.dx), f.py(c.y_center + c.dy));
        let color = c.density.color();
        let _ = writeln!(
            f.out,
            r#"<line x1="{x0:.1}" y1="{y0:.1}" x2="{x1:.1}" y2="{y1:.1}" stroke="{color}" stroke-width="1.5"/>"#
        );
        let _ = writeln!(
            f.out,
            r#"<circle cx="{x1:.1}" cy="{y1:.1}" r="2" fill="{color}"/>"#
        );
    }
    f.legend(&density_legend());
    f.finish()
}
