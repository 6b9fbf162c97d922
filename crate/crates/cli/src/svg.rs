//! Minimal line charts; enough to eyeball a convergence sequence.

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

fn axis_value(v: f64, log: bool) -> f64 {
    if log {
        v.max(f64::MIN_POSITIVE).log10()
    } else {
        v
    }
}

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

/// One polyline per series, with markers and a legend. With `log`, both
/// axes are base-10 logarithmic.
pub fn line_chart(x_label: &str, series: &[(&str, &[(f64, f64)])], log: bool) -> String {
    let points = || series.iter().flat_map(|(_, s)| s.iter());
    let (x0, x1) = span(points().map(|p| axis_value(p.0, log)));
    let (y0, y1) = span(points().map(|p| axis_value(p.1, log)));
    let sx = |x: f64| MARGIN + (axis_value(x, log) - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (axis_value(y, log) - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    );
    out.push_str(&format!(
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n<path d=\"M{MARGIN} {m}V{b}H{r}\" stroke=\"black\" fill=\"none\"/>\n",
        m = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    ));
    let scale = if log { " (log)" } else { "" };
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{x_label}{scale}</text>\n",
        WIDTH / 2.0,
        HEIGHT - 20.0
    ));
    for (k, label) in [(0.0, y0), (1.0, y1)] {
        let value = if log { 10f64.powf(label) } else { label };
        let y = HEIGHT - MARGIN - k * (HEIGHT - 2.0 * MARGIN);
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{y:.1}\" text-anchor=\"end\">{value:.4}</text>\n",
            MARGIN - 6.0
        ));
    }
    for (i, (name, pts)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        out.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"/>\n",
            path.join(" ")
        ));
        for &(x, y) in pts.iter() {
            out.push_str(&format!("<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{color}\"/>\n", sx(x), sy(y)));
        }
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" fill=\"{color}\">{name}</text>\n",
            WIDTH - MARGIN - 80.0,
            MARGIN + 16.0 * i as f64
        ));
    }
    out.push_str("</svg>\n");
    out
}
