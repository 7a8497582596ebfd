//! Minimal SVG line charts for curve tables.

use std::fmt::Write;

/// One line on the chart. Points need not share x-values with other series.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    /// `(x, y, standard error)`, sorted by x.
    pub points: Vec<(f64, f64, f64)>,
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 180.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 56.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Renders the series with ±1 SE error bars. Consecutive points of a series
/// are joined only if no other series has an x-value between them.
pub fn render(series: &[Series], title: Option<&str>, x_label: &str, y_label: &str) -> String {
    let mut xs: Vec<f64> = series.iter().flat_map(|s| s.points.iter().map(|p| p.0)).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let (x_min, x_max) = match (xs.first(), xs.last()) {
        (Some(&a), Some(&b)) if a < b => (a, b),
        (Some(&a), _) => (a - 1.0, a + 1.0),
        _ => (0.0, 1.0),
    };
    let (mut y_min, mut y_max) = (0.0f64, 1.0f64);
    for p in series.iter().flat_map(|s| &s.points) {
        y_min = y_min.min(p.1 - p.2);
        y_max = y_max.max(p.1 + p.2);
    }
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = |y: f64| TOP + (y_max - y) / (y_max - y_min) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if let Some(t) = title {
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            LEFT + plot_w / 2.0,
            escape(t)
        );
    }
    // axes and ticks
    let _ = writeln!(
        svg,
        r#"<path d="M{LEFT:.2},{TOP:.2}V{:.2}H{:.2}" fill="none" stroke="black"/>"#,
        TOP + plot_h,
        LEFT + plot_w
    );
    for &x in &xs {
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            sx(x),
            TOP + plot_h + 18.0,
            x
        );
    }
    for k in 0..=5 {
        let y = y_min + (y_max - y_min) * k as f64 / 5.0;
        let _ = writeln!(
            svg,
            r##"<line x1="{LEFT:.2}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#dddddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{y:.2}</text>"##,
            LEFT + plot_w,
            LEFT - 6.0,
            sy(y) + 4.0,
            py = sy(y),
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 14.0,
        escape(x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0,
        escape(y_label)
    );

    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let slot = |x: f64| xs.binary_search_by(|v| v.total_cmp(&x)).unwrap_or(0);
        let mut path = String::new();
        let mut prev: Option<usize> = None;
        for p in &s.points {
            let here = slot(p.0);
            let cmd = if prev == Some(here.wrapping_sub(1)) { 'L' } else { 'M' };
            let _ = write!(path, "{cmd}{:.2},{:.2}", sx(p.0), sy(p.1));
            prev = Some(here);
        }
        let _ = writeln!(svg, r#"<path d="{path}" fill="none" stroke="{color}" stroke-width="2"/>"#);
        for p in &s.points {
            let (x, lo, hi) = (sx(p.0), sy(p.1 - p.2), sy(p.1 + p.2));
            let _ = writeln!(
                svg,
                r#"<path d="M{x:.2},{lo:.2}V{hi:.2}M{:.2},{lo:.2}H{:.2}M{:.2},{hi:.2}H{:.2}" stroke="{color}"/><circle cx="{x:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                x - 4.0,
                x + 4.0,
                x - 4.0,
                x + 4.0,
                sy(p.1)
            );
        }
        let ly = TOP + 10.0 + 20.0 * i as f64;
        let lx = LEFT + plot_w + 16.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 24.0,
            lx + 30.0,
            ly + 4.0,
            escape(&s.name)
        );
    }
    svg.push_str("</svg>\n");
    svg
}
