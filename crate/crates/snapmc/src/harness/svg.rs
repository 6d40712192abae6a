//! Minimal self-contained SVG emission for the three figure kinds: K-curve
//! overlays, per-method quantile bars, and delta-sweep bands.

use crate::kfunction::KEstimate;

use super::study::{DeltaSweepTable, StudySummary};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 150.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 55.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

/// Which fitted parameter a figure shows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotParam {
    Phi,
    Sigma2,
}

impl PlotParam {
    fn axis_label(self) -> &'static str {
        match self {
            PlotParam::Phi => "phi estimate",
            PlotParam::Sigma2 => "sigma2 estimate",
        }
    }
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn of(xs: impl Iterator<Item = f64>, ys: impl Iterator<Item = f64>) -> Frame {
        let mut x0 = f64::INFINITY;
        let mut x1 = f64::NEG_INFINITY;
        for v in xs.filter(|v| v.is_finite()) {
            x0 = x0.min(v);
            x1 = x1.max(v);
        }
        let mut y0 = f64::INFINITY;
        let mut y1 = f64::NEG_INFINITY;
        for v in ys.filter(|v| v.is_finite()) {
            y0 = y0.min(v);
            y1 = y1.max(v);
        }
        if !x0.is_finite() || x1 <= x0 {
            x1 = x0 + 1.0;
        }
        if !y0.is_finite() {
            y0 = 0.0;
            y1 = 1.0;
        }
        if y1 <= y0 {
            y1 = y0 + 1.0;
        }
        // headroom
        let pad = 0.05 * (y1 - y0);
        Frame {
            x0,
            x1,
            y0: y0 - pad,
            y1: y1 + pad,
        }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN_L + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - MARGIN_L - MARGIN_R)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN_B - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - MARGIN_T - MARGIN_B)
    }
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if a >= 1e5 || a < 1e-3 {
        format!("{v:.2e}")
    } else if a >= 100.0 {
        format!("{v:.0}")
    } else {
        format!("{v:.2}")
    }
}

struct Svg {
    body: String,
}

impl Svg {
    fn new(title: &str) -> Svg {
        let mut body = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
             viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">\n"
        );
        body.push_str(&format!(
            "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n<text x=\"{}\" y=\"22\" \
             font-size=\"15\">{}</text>\n",
            MARGIN_L,
            escape(title)
        ));
        Svg { body }
    }

    fn axes(&mut self, f: &Frame, xlabel: &str, ylabel: &str) {
        let (px0, px1) = (MARGIN_L, WIDTH - MARGIN_R);
        let (py0, py1) = (HEIGHT - MARGIN_B, MARGIN_T);
        self.body.push_str(&format!(
            "<line x1=\"{px0}\" y1=\"{py0}\" x2=\"{px1}\" y2=\"{py0}\" stroke=\"black\"/>\n\
             <line x1=\"{px0}\" y1=\"{py0}\" x2=\"{px0}\" y2=\"{py1}\" stroke=\"black\"/>\n"
        ));
        for i in 0..=4 {
            let xv = f.x0 + (f.x1 - f.x0) * i as f64 / 4.0;
            let yv = f.y0 + (f.y1 - f.y0) * i as f64 / 4.0;
            let xp = f.px(xv);
            let yp = f.py(yv);
            self.body.push_str(&format!(
                "<line x1=\"{xp}\" y1=\"{py0}\" x2=\"{xp}\" y2=\"{}\" stroke=\"black\"/>\n\
                 <text x=\"{xp}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
                py0 + 5.0,
                py0 + 20.0,
                fmt_tick(xv)
            ));
            self.body.push_str(&format!(
                "<line x1=\"{}\" y1=\"{yp}\" x2=\"{px0}\" y2=\"{yp}\" stroke=\"black\"/>\n\
                 <text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n",
                px0 - 5.0,
                px0 - 8.0,
                yp + 4.0,
                fmt_tick(yv)
            ));
        }
        self.body.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
            (px0 + px1) / 2.0,
            HEIGHT - 12.0,
            escape(xlabel)
        ));
        self.body.push_str(&format!(
            "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}</text>\n",
            (py0 + py1) / 2.0,
            (py0 + py1) / 2.0,
            escape(ylabel)
        ));
    }

    fn polyline(&mut self, pts: &[(f64, f64)], f: &Frame, color: &str, width: f64, dash: Option<&str>) {
        if pts.len() < 2 {
            return;
        }
        let coords: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", f.px(x), f.py(y)))
            .collect();
        let dash = dash.map_or(String::new(), |d| format!(" stroke-dasharray=\"{d}\""));
        self.body.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"{width}\"{dash}/>\n",
            coords.join(" ")
        ));
    }

    fn band(&mut self, xs: &[f64], lo: &[f64], hi: &[f64], f: &Frame, color: &str, opacity: f64) {
        if xs.len() < 2 {
            return;
        }
        let mut coords = Vec::with_capacity(xs.len() * 2);
        for (x, y) in xs.iter().zip(hi.iter()) {
            coords.push(format!("{:.2},{:.2}", f.px(*x), f.py(*y)));
        }
        for (x, y) in xs.iter().rev().zip(lo.iter().rev()) {
            coords.push(format!("{:.2},{:.2}", f.px(*x), f.py(*y)));
        }
        self.body.push_str(&format!(
            "<polygon points=\"{}\" fill=\"{color}\" fill-opacity=\"{opacity}\" stroke=\"none\"/>\n",
            coords.join(" ")
        ));
    }

    fn legend(&mut self, entries: &[(String, &str)]) {
        let x = WIDTH - MARGIN_R + 12.0;
        for (i, (label, color)) in entries.iter().enumerate() {
            let y = MARGIN_T + 18.0 * i as f64 + 10.0;
            self.body.push_str(&format!(
                "<line x1=\"{x}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"{color}\" stroke-width=\"2.5\"/>\n\
                 <text x=\"{}\" y=\"{}\">{}</text>\n",
                x + 22.0,
                x + 28.0,
                y + 4.0,
                escape(label)
            ));
        }
    }

    fn finish(mut self) -> String {
        self.body.push_str("</svg>\n");
        self.body
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Overlayed K-function curves with a legend, one polyline per labeled
/// estimate.
pub fn plot_k_curves(title: &str, curves: &[(String, &KEstimate)]) -> String {
    let f = Frame::of(
        curves.iter().flat_map(|(_, k)| k.r.iter().copied()),
        curves.iter().flat_map(|(_, k)| k.khat.iter().copied()),
    );
    let mut svg = Svg::new(title);
    svg.axes(&f, "r", "K(r)");
    let mut legend = Vec::new();
    for (i, (label, k)) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<(f64, f64)> = k.r.iter().copied().zip(k.khat.iter().copied()).collect();
        svg.polyline(&pts, &f, color, 1.8, None);
        legend.push((label.clone(), color));
    }
    svg.legend(&legend);
    svg.finish()
}

/// Boxplot-style quantile bars (5-95 whisker, 25-75 box, median tick) per
/// method and corruption fraction. The dashed line marks the true value.
pub fn plot_summary_bars(
    title: &str,
    summary: &StudySummary,
    param: PlotParam,
    truth: Option<f64>,
) -> String {
    let groups = &summary.groups;
    let pick = |g: &super::study::SummaryGroup| match param {
        PlotParam::Phi => g.phi_q,
        PlotParam::Sigma2 => g.sigma2_q,
    };
    let n = groups.len().max(1);
    let f = Frame::of(
        (0..n).map(|i| i as f64),
        groups
            .iter()
            .flat_map(|g| pick(g).into_iter())
            .chain(truth.into_iter()),
    );
    // widen x so bars are inset
    let f = Frame {
        x0: -0.7,
        x1: (n - 1) as f64 + 0.7,
        ..f
    };
    let mut svg = Svg::new(title);
    svg.axes(&f, "method x corruption", param.axis_label());
    if let Some(t) = truth {
        svg.polyline(&[(f.x0, t), (f.x1, t)], &f, "#555555", 1.0, Some("6 4"));
    }
    let mut legend = Vec::new();
    for (i, g) in groups.iter().enumerate() {
        let q = pick(g);
        let color = PALETTE[i % PALETTE.len()];
        let x = i as f64;
        let w = 0.28;
        // whisker 5-95
        svg.polyline(&[(x, q[0]), (x, q[4])], &f, color, 1.4, None);
        // box 25-75
        let (bx0, bx1) = (f.px(x - w / 2.0), f.px(x + w / 2.0));
        let (by0, by1) = (f.py(q[3]), f.py(q[1]));
        svg.body.push_str(&format!(
            "<rect x=\"{bx0}\" y=\"{by0}\" width=\"{}\" height=\"{}\" fill=\"{color}\" fill-opacity=\"0.35\" stroke=\"{color}\"/>\n",
            bx1 - bx0,
            (by1 - by0).max(1.0)
        ));
        // median tick
        svg.polyline(&[(x - w / 2.0, q[2]), (x + w / 2.0, q[2])], &f, color, 2.2, None);
        legend.push((format!("{} @ {}", g.method, g.corruption), color));
    }
    svg.legend(&legend);
    svg.finish()
}

/// Delta-sweep band plot: median line, interquartile band, and 5-95 band
/// for one corruption fraction.
pub fn plot_delta_bands(
    title: &str,
    table: &DeltaSweepTable,
    corruption: f64,
    param: PlotParam,
    truth: Option<f64>,
) -> String {
    let mut rows: Vec<&super::study::DeltaSweepRow> = table
        .rows
        .iter()
        .filter(|r| (r.corruption - corruption).abs() < 1e-12)
        .collect();
    rows.sort_by(|a, b| a.delta.partial_cmp(&b.delta).unwrap());
    let pick = |r: &super::study::DeltaSweepRow| match param {
        PlotParam::Phi => r.phi_q,
        PlotParam::Sigma2 => r.sigma2_q,
    };
    let xs: Vec<f64> = rows.iter().map(|r| r.delta).collect();
    let f = Frame::of(
        xs.iter().copied(),
        rows.iter()
            .flat_map(|r| pick(r).into_iter())
            .chain(truth.into_iter()),
    );
    let mut svg = Svg::new(title);
    svg.axes(&f, "delta", param.axis_label());
    let q: Vec<[f64; 5]> = rows.iter().map(|r| pick(r)).collect();
    let col = |i: usize| -> Vec<f64> { q.iter().map(|v| v[i]).collect() };
    svg.band(&xs, &col(0), &col(4), &f, "#bbbbbb", 0.5);
    svg.band(&xs, &col(1), &col(3), &f, "#888888", 0.55);
    let med: Vec<(f64, f64)> = xs.iter().copied().zip(col(2)).collect();
    svg.polyline(&med, &f, PALETTE[0], 2.0, None);
    if let Some(t) = truth {
        svg.polyline(&[(f.x0, t), (f.x1, t)], &f, "#555555", 1.0, Some("6 4"));
    }
    svg.legend(&[
        ("median".into(), PALETTE[0]),
        ("25-75%".into(), "#888888"),
        ("5-95%".into(), "#bbbbbb"),
    ]);
    svg.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kfunction::{KEstimate, KVariant};

    fn kest(scale: f64) -> KEstimate {
        let r: Vec<f64> = (0..=20).map(|i| i as f64).collect();
        let khat = r.iter().map(|&x| scale * x * x).collect();
        KEstimate::new(r, khat, KVariant::Hom, 100, "test".into()).unwrap()
    }

    #[test]
    fn k_curve_overlay_has_one_polyline_per_curve() {
        let ks: Vec<KEstimate> = (1..=5).map(|i| kest(i as f64)).collect();
        let curves: Vec<(String, &KEstimate)> = ks
            .iter()
            .enumerate()
            .map(|(i, k)| (format!("curve {i}"), k))
            .collect();
        let svg = plot_k_curves("overlay", &curves);
        assert_eq!(svg.matches("<polyline").count(), 5);
        for i in 0..5 {
            assert!(svg.contains(&format!("curve {i}")));
        }
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn sweep_band_plot_structure() {
        let table = DeltaSweepTable {
            rows: (0..8)
                .map(|i| super::super::study::DeltaSweepRow {
                    corruption: 0.6,
                    delta: 5.0 * i as f64,
                    n: 10,
                    converged: 10,
                    phi_q: [25.0, 28.0, 30.0, 32.0, 35.0],
                    sigma2_q: [1.5, 1.8, 2.0, 2.2, 2.5],
                })
                .collect(),
        };
        let svg = plot_delta_bands("sweep", &table, 0.6, PlotParam::Phi, Some(30.0));
        assert_eq!(svg.matches("<polygon").count(), 2);
        assert!(svg.contains("median"));
    }
}
