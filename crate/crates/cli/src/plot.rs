//! Minimal SVG line charts drawn from the experiment CSV files.

use std::fmt::Write;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 200.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 60.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    pub dashed: bool,
}

pub struct LineChart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

impl LineChart {
    pub fn to_svg(&self) -> String {
        let pts = self.series.iter().flat_map(|s| s.points.iter());
        let (mut x0, mut x1, mut y0, mut y1) = (
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        );
        for &(x, y) in pts {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if !x0.is_finite() {
            (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
        }
        if x1 <= x0 {
            x1 = x0 + 1.0;
        }
        y0 = y0.min(0.0);
        if y1 <= y0 {
            y1 = y0 + 1.0;
        }
        let pw = WIDTH - MARGIN_L - MARGIN_R;
        let ph = HEIGHT - MARGIN_T - MARGIN_B;
        let sx = |x: f64| MARGIN_L + (x - x0) / (x1 - x0) * pw;
        let sy = |y: f64| MARGIN_T + ph - (y - y0) / (y1 - y0) * ph;

        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
            MARGIN_L + pw / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            svg,
            r#"<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
        );
        for i in 0..=5 {
            let fx = x0 + (x1 - x0) * i as f64 / 5.0;
            let fy = y0 + (y1 - y0) * i as f64 / 5.0;
            let _ = writeln!(
                svg,
                r##"<line x1="{0:.1}" y1="{1}" x2="{0:.1}" y2="{2}" stroke="#ddd"/><text x="{0:.1}" y="{3}" text-anchor="middle">{4}</text>"##,
                sx(fx),
                MARGIN_T,
                MARGIN_T + ph,
                MARGIN_T + ph + 18.0,
                tick(fx)
            );
            let _ = writeln!(
                svg,
                r##"<line x1="{1}" y1="{0:.1}" x2="{2}" y2="{0:.1}" stroke="#ddd"/><text x="{3}" y="{0:.1}" text-anchor="end" dy="4">{4}</text>"##,
                sy(fy),
                MARGIN_L,
                MARGIN_L + pw,
                MARGIN_L - 6.0,
                tick(fy)
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            MARGIN_L + pw / 2.0,
            HEIGHT - 15.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            svg,
            r#"<text transform="translate(18,{}) rotate(-90)" text-anchor="middle">{}</text>"#,
            MARGIN_T + ph / 2.0,
            escape(&self.y_label)
        );
        for (i, s) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let path: Vec<String> = s
                .points
                .iter()
                .map(|&(x, y)| format!("{:.1},{:.1}", sx(x), sy(y)))
                .collect();
            let dash = if s.dashed {
                r#" stroke-dasharray="6,4""#
            } else {
                ""
            };
            let _ = writeln!(
                svg,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.8"{dash}/>"#,
                path.join(" ")
            );
            for &(x, y) in &s.points {
                let _ = writeln!(
                    svg,
                    r#"<circle cx="{:.1}" cy="{:.1}" r="2.5" fill="{color}"/>"#,
                    sx(x),
                    sy(y)
                );
            }
            let ly = MARGIN_T + 14.0 + 18.0 * i as f64;
            let lx = WIDTH - MARGIN_R + 12.0;
            let _ = writeln!(
                svg,
                r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"{dash}/><text x="{}" y="{}">{}</text>"#,
                lx + 22.0,
                lx + 28.0,
                ly + 4.0,
                escape(&s.name)
            );
        }
        svg.push_str("</svg>\n");
        svg
    }
}

fn tick(v: f64) -> String {
    let s = format!("{v:.2}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn parse(csv: &str) -> (Vec<&str>, Vec<Vec<&str>>) {
    let mut lines = csv.lines();
    let header = lines.next().unwrap_or_default().split(',').collect();
    (header, lines.map(|l| l.split(',').collect()).collect())
}

fn column(header: &[&str], name: &str) -> usize {
    header
        .iter()
        .position(|h| *h == name)
        .unwrap_or_else(|| panic!("CSV has no column {name}"))
}

fn num(s: &str) -> f64 {
    s.parse().unwrap_or(f64::NAN)
}

/// ADR versus `K`: one curve per factorization plus both baselines.
pub fn adr_chart(csv: &str, title: &str) -> LineChart {
    let (header, rows) = parse(csv);
    let (k, cfg, cont, quant, prop) = (
        column(&header, "k_db"),
        column(&header, "config"),
        column(&header, "adr_baseline_cont"),
        column(&header, "adr_baseline_quant"),
        column(&header, "adr_proposed"),
    );
    let mut series: Vec<Series> = Vec::new();
    let mut cont_pts = Vec::new();
    let mut quant_pts = Vec::new();
    for r in &rows {
        let x = num(r[k]);
        if cont_pts.last().map(|p: &(f64, f64)| p.0) != Some(x) {
            cont_pts.push((x, num(r[cont])));
            quant_pts.push((x, num(r[quant])));
        }
        match series.iter_mut().find(|s| s.name == r[cfg]) {
            Some(s) => s.points.push((x, num(r[prop]))),
            None => series.push(Series {
                name: r[cfg].to_string(),
                points: vec![(x, num(r[prop]))],
                dashed: false,
            }),
        }
    }
    series.push(Series {
        name: "baseline (continuous)".into(),
        points: cont_pts,
        dashed: true,
    });
    series.push(Series {
        name: "baseline (quantized)".into(),
        points: quant_pts,
        dashed: true,
    });
    LineChart {
        title: title.into(),
        x_label: "Rician factor K [dB]".into(),
        y_label: "ADR [bit/s/Hz]".into(),
        series,
    }
}

/// Payload ratio per configuration, one curve per number of factors.
pub fn payload_chart(csv: &str) -> LineChart {
    let (header, rows) = parse(csv);
    let (p, sum, pr) = (
        column(&header, "p"),
        column(&header, "sum_np"),
        column(&header, "payload_ratio"),
    );
    let mut series: Vec<Series> = Vec::new();
    for r in &rows {
        let name = format!("P = {}", r[p]);
        let pt = (num(r[sum]), num(r[pr]));
        match series.iter_mut().find(|s| s.name == name) {
            Some(s) => s.points.push(pt),
            None => series.push(Series {
                name,
                points: vec![pt],
                dashed: false,
            }),
        }
    }
    for s in &mut series {
        s.points.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    LineChart {
        title: "Feedback payload ratio".into(),
        x_label: "fed-back phases".into(),
        y_label: "payload ratio".into(),
        series,
    }
}
