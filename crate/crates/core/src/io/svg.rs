//! Minimal SVG emitter for log-log sweep plots: one polyline per series,
//! labeled axes with decade ticks, no external renderer.

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 150.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 55.0;

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Render series of positive `(x, y)` points on log-log axes.  Points with
/// nonpositive or non-finite coordinates are dropped.
pub fn render_loglog_plot(
    title: &str,
    xlabel: &str,
    ylabel: &str,
    series: &[(String, Vec<(f64, f64)>)],
) -> String {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (_, pts) in series {
        for &(x, y) in pts {
            if x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite() {
                xs.push(x.log10());
                ys.push(y.log10());
            }
        }
    }
    let (x_lo, x_hi) = bounds(&xs);
    let (y_lo, y_hi) = bounds(&ys);
    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let map_x = |lx: f64| MARGIN_L + (lx - x_lo) / (x_hi - x_lo) * plot_w;
    let map_y = |ly: f64| HEIGHT - MARGIN_B - (ly - y_lo) / (y_hi - y_lo) * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"22\" font-family=\"sans-serif\" font-size=\"15\" text-anchor=\"middle\">{}</text>\n",
        MARGIN_L + plot_w / 2.0,
        escape(title)
    ));
    // axes
    svg.push_str(&format!(
        "  <line x1=\"{MARGIN_L}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        HEIGHT - MARGIN_B,
        WIDTH - MARGIN_R,
        HEIGHT - MARGIN_B
    ));
    svg.push_str(&format!(
        "  <line x1=\"{MARGIN_L}\" y1=\"{MARGIN_T}\" x2=\"{MARGIN_L}\" y2=\"{}\" stroke=\"black\"/>\n",
        HEIGHT - MARGIN_B
    ));
    // decade ticks
    for d in (x_lo.floor() as i64)..=(x_hi.ceil() as i64) {
        let lx = d as f64;
        if lx < x_lo - 1e-9 || lx > x_hi + 1e-9 {
            continue;
        }
        let px = map_x(lx);
        svg.push_str(&format!(
            "  <line x1=\"{px}\" y1=\"{}\" x2=\"{px}\" y2=\"{}\" stroke=\"black\"/>\n",
            HEIGHT - MARGIN_B,
            HEIGHT - MARGIN_B + 5.0
        ));
        svg.push_str(&format!(
            "  <text x=\"{px}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">1e{d}</text>\n",
            HEIGHT - MARGIN_B + 18.0
        ));
    }
    for d in (y_lo.floor() as i64)..=(y_hi.ceil() as i64) {
        let ly = d as f64;
        if ly < y_lo - 1e-9 || ly > y_hi + 1e-9 {
            continue;
        }
        let py = map_y(ly);
        svg.push_str(&format!(
            "  <line x1=\"{}\" y1=\"{py}\" x2=\"{MARGIN_L}\" y2=\"{py}\" stroke=\"black\"/>\n",
            MARGIN_L - 5.0
        ));
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">1e{d}</text>\n",
            MARGIN_L - 8.0,
            py + 4.0
        ));
    }
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
        MARGIN_L + plot_w / 2.0,
        HEIGHT - 12.0,
        escape(xlabel)
    ));
    svg.push_str(&format!(
        "  <text x=\"18\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 {})\">{}</text>\n",
        MARGIN_T + plot_h / 2.0,
        MARGIN_T + plot_h / 2.0,
        escape(ylabel)
    ));
    // series
    for (idx, (label, pts)) in series.iter().enumerate() {
        let color = COLORS[idx % COLORS.len()];
        let path: Vec<String> = pts
            .iter()
            .filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", map_x(x.log10()), map_y(y.log10())))
            .collect();
        if path.len() >= 2 {
            svg.push_str(&format!(
                "  <polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\"/>\n",
                path.join(" ")
            ));
        }
        for p in &path {
            let (px, py) = p.split_once(',').expect("point format");
            svg.push_str(&format!(
                "  <circle cx=\"{px}\" cy=\"{py}\" r=\"2.6\" fill=\"{color}\"/>\n"
            ));
        }
        let ly = MARGIN_T + 16.0 * idx as f64 + 10.0;
        let lx = WIDTH - MARGIN_R + 12.0;
        svg.push_str(&format!(
            "  <line x1=\"{lx}\" y1=\"{ly}\" x2=\"{}\" y2=\"{ly}\" stroke=\"{color}\" stroke-width=\"2\"/>\n",
            lx + 18.0
        ));
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n",
            lx + 24.0,
            ly + 4.0,
            escape(label)
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

fn bounds(values: &[f64]) -> (f64, f64) {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if (hi - lo).abs() < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        let pad = (hi - lo) * 0.06;
        (lo - pad, hi + pad)
    }
}
