//! Self-contained SVG line charts derived from the CSV data.

use std::fmt::Write as _;

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 540.0;
const MARGIN_LEFT: f64 = 86.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 44.0;
const MARGIN_BOTTOM: f64 = 58.0;
const PALETTE: [&str; 5] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];
const MAX_POINTS_PER_SERIES: usize = 1600;

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

pub struct ChartSpec {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub series: Vec<Series>,
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let a = v.abs();
    if (1e-3..1e4).contains(&a) {
        let s = format!("{v:.4}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    } else {
        format!("{v:.2e}")
    }
}

pub fn line_chart(spec: &ChartSpec) -> String {
    let tx = |v: f64| if spec.log_x { v.log10() } else { v };
    let ty = |v: f64| if spec.log_y { v.log10() } else { v };

    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for s in &spec.series {
        for &(x, y) in &s.points {
            if (spec.log_x && x <= 0.0) || (spec.log_y && y <= 0.0) {
                continue;
            }
            xs.push(tx(x));
            ys.push(ty(y));
        }
    }
    let (x_min, x_max) = bounds(&xs);
    let (y_min, y_max) = bounds(&ys);

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let to_px = |x: f64, y: f64| {
        let px = MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
        let py = MARGIN_TOP + (y_max - y) / (y_max - y_min) * plot_h;
        (px, py)
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(
        svg,
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
    );
    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">{}</text>",
        WIDTH / 2.0,
        escape(&spec.title)
    );

    // gridlines and tick labels
    const TICKS: usize = 6;
    for i in 0..TICKS {
        let fx = x_min + (x_max - x_min) * i as f64 / (TICKS - 1) as f64;
        let fy = y_min + (y_max - y_min) * i as f64 / (TICKS - 1) as f64;
        let (px, _) = to_px(fx, y_min);
        let (_, py) = to_px(x_min, fy);
        let _ = writeln!(
            svg,
            "<line x1=\"{px:.1}\" y1=\"{MARGIN_TOP}\" x2=\"{px:.1}\" y2=\"{:.1}\" stroke=\"#dddddd\"/>",
            MARGIN_TOP + plot_h
        );
        let _ = writeln!(
            svg,
            "<line x1=\"{MARGIN_LEFT}\" y1=\"{py:.1}\" x2=\"{:.1}\" y2=\"{py:.1}\" stroke=\"#dddddd\"/>",
            MARGIN_LEFT + plot_w
        );
        let xv = if spec.log_x { 10f64.powf(fx) } else { fx };
        let yv = if spec.log_y { 10f64.powf(fy) } else { fy };
        let _ = writeln!(
            svg,
            "<text x=\"{px:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">{}</text>",
            MARGIN_TOP + plot_h + 16.0,
            fmt_tick(xv)
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">{}</text>",
            MARGIN_LEFT - 6.0,
            py + 4.0,
            fmt_tick(yv)
        );
    }

    // frame
    let _ = writeln!(
        svg,
        "<rect x=\"{MARGIN_LEFT}\" y=\"{MARGIN_TOP}\" width=\"{plot_w}\" height=\"{plot_h}\" fill=\"none\" stroke=\"black\"/>"
    );

    // axis labels
    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">{}</text>",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 14.0,
        escape(&spec.x_label)
    );
    let _ = writeln!(
        svg,
        "<text x=\"20\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 20 {})\">{}</text>",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0,
        escape(&spec.y_label)
    );

    // series
    for (i, s) in spec.series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<(f64, f64)> = s
            .points
            .iter()
            .filter(|(x, y)| !(spec.log_x && *x <= 0.0) && !(spec.log_y && *y <= 0.0))
            .map(|&(x, y)| (tx(x), ty(y)))
            .collect();
        let stride = (pts.len() / MAX_POINTS_PER_SERIES).max(1);
        let mut path = String::new();
        for (j, &(x, y)) in pts.iter().enumerate() {
            if j % stride != 0 && j != pts.len() - 1 {
                continue;
            }
            let (px, py) = to_px(x, y);
            let _ = write!(path, "{px:.2},{py:.2} ");
        }
        let _ = writeln!(
            svg,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.3\"/>",
            path.trim_end()
        );
        // legend entry
        let ly = MARGIN_TOP + 16.0 + 18.0 * i as f64;
        let lx = MARGIN_LEFT + plot_w - 190.0;
        let _ = writeln!(
            svg,
            "<line x1=\"{lx:.1}\" y1=\"{ly:.1}\" x2=\"{:.1}\" y2=\"{ly:.1}\" stroke=\"{color}\" stroke-width=\"2\"/>",
            lx + 26.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>",
            lx + 32.0,
            ly + 4.0,
            escape(&s.label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn bounds(values: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if lo == hi {
        // degenerate range: widen symmetrically
        let pad = lo.abs().max(1.0) * 0.1;
        return (lo - pad, hi + pad);
    }
    let pad = (hi - lo) * 0.04;
    (lo - pad, hi + pad)
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
