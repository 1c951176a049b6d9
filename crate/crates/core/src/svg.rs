//! Deterministic log-log SVG plots with dashed reference-slope guides.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// Line of the given log-log slope through the last point of the first series.
#[derive(Debug, Clone, PartialEq)]
pub struct Guide {
    pub slope: f64,
    pub label: String,
}

impl Guide {
    pub fn slope(slope: f64) -> Self {
        Guide { slope, label: format!("slope {slope}") }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotLabels {
    pub title: String,
    pub x: String,
    pub y: String,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

struct Axes {
    lx: (f64, f64),
    ly: (f64, f64),
}

impl Axes {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x.log10() - self.lx.0) / (self.lx.1 - self.lx.0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        self.py_log(y.log10())
    }

    fn py_log(&self, ly: f64) -> f64 {
        HEIGHT - BOTTOM - (ly - self.ly.0) / (self.ly.1 - self.ly.0) * (HEIGHT - TOP - BOTTOM)
    }
}

/// Decade-aligned bounds of `values`.
fn decades(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v.log10()), b.max(v.log10())));
    let (lo, hi) = (lo.floor(), hi.ceil());
    if hi > lo {
        (lo, hi)
    } else {
        (lo, lo + 1.0)
    }
}

/// Render the series on log-log axes. Fails on empty input or any
/// nonpositive or non-finite coordinate.
pub fn render_svg(series: &[Series], guides: &[Guide], labels: &PlotLabels) -> Result<String> {
    if series.is_empty() || series.iter().any(|s| s.points.is_empty()) {
        return Err(Error::Plot("nothing to plot: empty series".into()));
    }
    for s in series {
        if let Some((x, y)) = s.points.iter().find(|(x, y)| !(*x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())) {
            return Err(Error::Plot(format!("series '{}' has a nonpositive value ({x}, {y}) on a log axis", s.label)));
        }
    }
    let all = || series.iter().flat_map(|s| s.points.iter().copied());
    let axes = Axes { lx: decades(all().map(|p| p.0)), ly: decades(all().map(|p| p.1)) };

    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(w, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(w, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, TOP, HEIGHT - BOTTOM);
    let _ = writeln!(w, r#"<defs><clipPath id="plot-area"><rect x="{x0}" y="{y0}" width="{}" height="{}"/></clipPath></defs>"#, x1 - x0, y1 - y0);
    let _ = writeln!(w, r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, escape(&labels.title));

    // decade grid and tick labels
    for d in (axes.lx.0 as i32)..=(axes.lx.1 as i32) {
        let x = axes.px(10f64.powi(d));
        let _ = writeln!(w, r##"<line x1="{x:.2}" y1="{y0}" x2="{x:.2}" y2="{y1}" stroke="#dddddd"/>"##);
        let _ = writeln!(w, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">1e{d}</text>"#, y1 + 16.0);
    }
    for d in (axes.ly.0 as i32)..=(axes.ly.1 as i32) {
        let y = axes.py(10f64.powi(d));
        let _ = writeln!(w, r##"<line x1="{x0}" y1="{y:.2}" x2="{x1}" y2="{y:.2}" stroke="#dddddd"/>"##);
        let _ = writeln!(w, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">1e{d}</text>"#, x0 - 6.0, y + 4.0);
    }
    let _ = writeln!(w, r#"<rect x="{x0}" y="{y0}" width="{}" height="{}" fill="none" stroke="black"/>"#, x1 - x0, y1 - y0);
    let _ = writeln!(w, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, (x0 + x1) / 2.0, HEIGHT - 16.0, escape(&labels.x));
    let _ = writeln!(
        w,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(&labels.y)
    );

    let _ = writeln!(w, r#"<g clip-path="url(#plot-area)">"#);
    let anchor = *series[0].points.last().expect("nonempty series");
    let (xa, xb) = (10f64.powf(axes.lx.0), 10f64.powf(axes.lx.1));
    for g in guides {
        // endpoints in log space stay finite even far outside the box
        let ly = |x: f64| anchor.1.log10() + g.slope * (x.log10() - anchor.0.log10());
        let _ = writeln!(
            w,
            r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#555555" stroke-dasharray="6,4"/>"##,
            axes.px(xa),
            axes.py_log(ly(xa)),
            axes.px(xb),
            axes.py_log(ly(xb))
        );
    }
    for (i, s) in series.iter().enumerate() {
        let pts: Vec<String> = s.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", axes.px(x), axes.py(y))).collect();
        let _ = writeln!(w, r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#, COLORS[i % COLORS.len()], pts.join(" "));
    }
    let _ = writeln!(w, "</g>");

    // legend
    let mut ly = y0 + 16.0;
    for (i, s) in series.iter().enumerate() {
        let _ = writeln!(w, r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{}" stroke-width="1.5"/>"#, x1 - 150.0, x1 - 130.0, COLORS[i % COLORS.len()]);
        let _ = writeln!(w, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, x1 - 124.0, ly + 4.0, escape(&s.label));
        ly += 16.0;
    }
    for g in guides {
        let _ = writeln!(w, r##"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="#555555" stroke-dasharray="6,4"/>"##, x1 - 150.0, x1 - 130.0);
        let _ = writeln!(w, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, x1 - 124.0, ly + 4.0, escape(&g.label));
        ly += 16.0;
    }
    let _ = writeln!(w, "</svg>");
    Ok(out)
}

pub fn write_svg(path: &Path, series: &[Series], guides: &[Guide], labels: &PlotLabels) -> Result<()> {
    let text = render_svg(series, guides, labels)?;
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels() -> PlotLabels {
        PlotLabels { title: "t".into(), x: "x".into(), y: "y".into() }
    }

    #[test]
    fn rejects_empty_and_nonpositive_data() {
        assert!(render_svg(&[], &[], &labels()).is_err());
        let empty = Series { label: "a".into(), points: vec![] };
        assert!(render_svg(&[empty], &[], &labels()).is_err());
        let bad = Series { label: "a".into(), points: vec![(1.0, 1.0), (2.0, 0.0)] };
        assert!(matches!(render_svg(&[bad], &[], &labels()), Err(Error::Plot(_))));
    }

    #[test]
    fn output_is_deterministic() {
        let s = Series { label: "1/x".into(), points: (1..20).map(|i| (i as f64, 1.0 / i as f64)).collect() };
        let a = render_svg(std::slice::from_ref(&s), &[Guide::slope(-1.0)], &labels()).unwrap();
        let b = render_svg(&[s], &[Guide::slope(-1.0)], &labels()).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("stroke-dasharray"));
    }
}
