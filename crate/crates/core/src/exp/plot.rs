//! Minimal self-contained SVG renderings: line charts and histograms.
//!
//! Output is deterministic: fixed canvas, fixed decimal formatting, no
//! timestamps or generated identifiers.

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 56.0;

fn fmt(v: f64) -> String {
    format!("{v:.3}")
}

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn from_points(points: impl Iterator<Item = (f64, f64)>) -> Self {
        let mut f = Frame {
            x_min: f64::INFINITY,
            x_max: f64::NEG_INFINITY,
            y_min: f64::INFINITY,
            y_max: f64::NEG_INFINITY,
        };
        for (x, y) in points {
            f.x_min = f.x_min.min(x);
            f.x_max = f.x_max.max(x);
            f.y_min = f.y_min.min(y);
            f.y_max = f.y_max.max(y);
        }
        if !f.x_min.is_finite() {
            f = Frame {
                x_min: 0.0,
                x_max: 1.0,
                y_min: 0.0,
                y_max: 1.0,
            };
        }
        if f.x_max - f.x_min == 0.0 {
            f.x_max = f.x_min + 1.0;
        }
        if f.y_max - f.y_min == 0.0 {
            f.y_max = f.y_min + 1.0;
        }
        f
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        let px = MARGIN + (x - self.x_min) / (self.x_max - self.x_min) * (WIDTH - 2.0 * MARGIN);
        let py =
            HEIGHT - MARGIN - (y - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - 2.0 * MARGIN);
        (px, py)
    }
}

fn document_open(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" \
         font-family=\"monospace\" font-size=\"12\">\n\
         <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
        WIDTH / 2.0,
        escape(title)
    )
}

fn axes(frame: &Frame, xlabel: &str, ylabel: &str) -> String {
    let (x0, y0) = (MARGIN, HEIGHT - MARGIN);
    let (x1, y1) = (WIDTH - MARGIN, MARGIN);
    let mut s = format!(
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>\n\
         <line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"black\"/>\n"
    );
    s.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
        (x0 + x1) / 2.0,
        HEIGHT - 12.0,
        escape(xlabel)
    ));
    s.push_str(&format!(
        "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}</text>\n",
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(ylabel)
    ));
    for (anchor, value, px, py) in [
        ("start", frame.x_min, x0, y0 + 18.0),
        ("end", frame.x_max, x1, y0 + 18.0),
    ] {
        s.push_str(&format!(
            "<text x=\"{px}\" y=\"{py}\" text-anchor=\"{anchor}\">{}</text>\n",
            fmt(value)
        ));
    }
    s.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n",
        x0 - 4.0,
        y0,
        fmt(frame.y_min)
    ));
    s.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n",
        x0 - 4.0,
        y1 + 4.0,
        fmt(frame.y_max)
    ));
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

const SERIES_COLORS: &[&str] = &["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"];

/// Multi-series line chart; each series is a name with `(x, y)` points.
pub fn line_plot(
    title: &str,
    xlabel: &str,
    ylabel: &str,
    series: &[(&str, Vec<(f64, f64)>)],
) -> String {
    let frame = Frame::from_points(series.iter().flat_map(|(_, pts)| pts.iter().copied()));
    let mut svg = document_open(title);
    svg.push_str(&axes(&frame, xlabel, ylabel));
    for (idx, (name, pts)) in series.iter().enumerate() {
        let color = SERIES_COLORS[idx % SERIES_COLORS.len()];
        let path: Vec<String> = pts
            .iter()
            .map(|&(x, y)| {
                let (px, py) = frame.map(x, y);
                format!("{},{}", fmt(px), fmt(py))
            })
            .collect();
        svg.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
            path.join(" ")
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" fill=\"{color}\">{}</text>\n",
            WIDTH - MARGIN + 4.0,
            MARGIN + 16.0 * idx as f64,
            escape(name)
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

/// Histogram of values with equal-width bins over the data range.
pub fn histogram(title: &str, xlabel: &str, values: &[f64], bins: usize) -> String {
    let bins = bins.max(1);
    let finite: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    let (lo, hi) = finite.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| {
        (l.min(v), h.max(v))
    });
    let (lo, hi) = if lo.is_finite() && hi > lo {
        (lo, hi)
    } else if lo.is_finite() {
        (lo - 0.5, lo + 0.5)
    } else {
        (0.0, 1.0)
    };
    let mut counts = vec![0usize; bins];
    for &v in &finite {
        let idx = (((v - lo) / (hi - lo) * bins as f64) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    let frame = Frame {
        x_min: lo,
        x_max: hi,
        y_min: 0.0,
        y_max: counts.iter().copied().max().unwrap_or(1).max(1) as f64,
    };
    let mut svg = document_open(title);
    svg.push_str(&axes(&frame, xlabel, "count"));
    let bin_w = (hi - lo) / bins as f64;
    for (i, &c) in counts.iter().enumerate() {
        let (px0, py) = frame.map(lo + i as f64 * bin_w, c as f64);
        let (px1, pbase) = frame.map(lo + (i + 1) as f64 * bin_w, 0.0);
        svg.push_str(&format!(
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#1f77b4\" stroke=\"white\"/>\n",
            fmt(px0),
            fmt(py),
            fmt((px1 - px0).max(0.0)),
            fmt((pbase - py).max(0.0)),
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_plot_is_deterministic_and_well_formed() {
        let series = vec![("resid", vec![(0.0, 1.0), (1.0, 0.5), (2.0, 0.25)])];
        let a = line_plot("decay", "iteration", "residual", &series);
        let b = line_plot("decay", "iteration", "residual", &series);
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.ends_with("</svg>\n"));
        assert!(a.contains("polyline"));
    }

    #[test]
    fn histogram_counts_every_finite_value() {
        let vals = [0.1, 0.2, 0.3, 0.9, f64::INFINITY];
        let svg = histogram("gaps", "gap", &vals, 4);
        assert_eq!(svg.matches("<rect").count(), 1 + 4, "canvas plus one per bin");
    }

    #[test]
    fn degenerate_inputs_still_render() {
        let svg = histogram("empty", "x", &[], 5);
        assert!(svg.contains("</svg>"));
        let one = line_plot("point", "x", "y", &[("s", vec![(1.0, 1.0)])]);
        assert!(one.contains("polyline"));
    }

    #[test]
    fn markup_in_labels_is_escaped() {
        let svg = line_plot("a<b&c", "x", "y", &[("s", vec![(0.0, 0.0), (1.0, 1.0)])]);
        assert!(svg.contains("a&lt;b&amp;c"));
        assert!(!svg.contains("a<b"));
    }
}
