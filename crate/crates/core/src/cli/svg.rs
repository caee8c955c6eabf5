//! Minimal SVG line plots and heat maps.

use std::fmt::Write as _;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub dashed: bool,
}

impl Series {
    pub fn new(label: impl Into<String>, x: Vec<f64>, y: Vec<f64>) -> Self {
        Series { label: label.into(), x, y, dashed: false }
    }

    pub fn dashed(mut self) -> Self {
        self.dashed = true;
        self
    }
}

/// One axes box of a figure.
#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub title: String,
    pub xlabel: String,
    pub ylabel: String,
    pub series: Vec<Series>,
    /// Horizontal reference lines `(label, y)`.
    pub hlines: Vec<(String, f64)>,
    pub note: Option<String>,
    pub log_y: bool,
}

impl Panel {
    pub fn new(title: impl Into<String>, xlabel: impl Into<String>, ylabel: impl Into<String>) -> Self {
        Panel {
            title: title.into(),
            xlabel: xlabel.into(),
            ylabel: ylabel.into(),
            series: Vec::new(),
            hlines: Vec::new(),
            note: None,
            log_y: false,
        }
    }

    pub fn with(mut self, s: Series) -> Self {
        self.series.push(s);
        self
    }
}

const PW: f64 = 560.0;
const PH: f64 = 260.0;
const ML: f64 = 80.0;
const MR: f64 = 150.0;
const MT: f64 = 36.0;
const MB: f64 = 50.0;

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo <= 1e-12 * lo.abs().max(1e-300) {
        let pad = if lo == 0.0 { 1.0 } else { 0.05 * lo.abs() };
        return (lo - pad, hi + pad);
    }
    (lo, hi)
}

fn ticks(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..=n)
        .map(|k| lo + (hi - lo) * k as f64 / n as f64)
        .map(|v| if v.abs() < 1e-9 * (hi - lo).abs() { 0.0 } else { v })
        .collect()
}

fn fmt_tick(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-3..1e5).contains(&a) {
        format!("{v:.2e}")
    } else {
        let s = format!("{v:.4}");
        let s = s.trim_end_matches('0').trim_end_matches('.').to_string();
        if s == "-0" {
            "0".into()
        } else {
            s
        }
    }
}

/// Stack the panels vertically into one figure.
pub fn figure(title: &str, panels: &[Panel]) -> String {
    let width = ML + PW + MR;
    let height = 30.0 + panels.len() as f64 * (PH + MT + MB);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text class="figure-title" x="{}" y="20" text-anchor="middle" font-size="15">{}</text>"#, width / 2.0, esc(title));
    for (k, p) in panels.iter().enumerate() {
        let top = 30.0 + k as f64 * (PH + MT + MB) + MT;
        panel(&mut s, p, top);
    }
    s.push_str("</svg>\n");
    s
}

fn panel(s: &mut String, p: &Panel, top: f64) {
    let tf = |v: f64| if p.log_y { v.max(1e-300).log10() } else { v };
    let (x0, x1) = range(p.series.iter().flat_map(|r| r.x.iter().copied()));
    let (y0, y1) = range(p.series.iter().flat_map(|r| r.y.iter().map(|&v| tf(v))).chain(p.hlines.iter().map(|h| tf(h.1))));
    let px = |x: f64| ML + (x - x0) / (x1 - x0) * PW;
    let py = |y: f64| top + PH - (tf(y) - y0) / (y1 - y0) * PH;
    let _ = writeln!(s, r#"<g class="panel">"#);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle" font-size="13">{}</text>"#, ML + PW / 2.0, top - 10.0, esc(&p.title));
    let _ = writeln!(s, r##"<rect x="{ML}" y="{top}" width="{PW}" height="{PH}" fill="none" stroke="#333"/>"##);
    for t in ticks(x0, x1, 5) {
        let x = px(t);
        let _ = writeln!(s, r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#333"/>"##, top + PH, top + PH + 5.0);
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, top + PH + 18.0, fmt_tick(t));
    }
    for t in ticks(y0, y1, 4) {
        let y = top + PH - (t - y0) / (y1 - y0) * PH;
        let label = if p.log_y { format!("1e{t:.1}") } else { fmt_tick(t) };
        let _ = writeln!(s, r##"<line x1="{:.2}" y1="{y:.2}" x2="{ML}" y2="{y:.2}" stroke="#333"/>"##, ML - 5.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{label}</text>"#, ML - 8.0, y + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, ML + PW / 2.0, top + PH + 38.0, esc(&p.xlabel));
    let _ = writeln!(
        s,
        r#"<text x="{0}" y="{1}" text-anchor="middle" transform="rotate(-90 {0} {1})">{2}</text>"#,
        18.0,
        top + PH / 2.0,
        esc(&p.ylabel)
    );
    for (label, y) in &p.hlines {
        let yy = py(*y);
        let _ = writeln!(
            s,
            r##"<line class="reference" x1="{ML}" y1="{yy:.2}" x2="{:.2}" y2="{yy:.2}" stroke="#777" stroke-dasharray="2,3"/>"##,
            ML + PW
        );
        let _ = writeln!(s, r##"<text x="{:.2}" y="{:.2}" fill="#777">{}</text>"##, ML + PW + 6.0, yy + 4.0, esc(label));
    }
    for (k, r) in p.series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let pts: Vec<String> = r
            .x
            .iter()
            .zip(&r.y)
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|(&x, &y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let dash = if r.dashed { r#" stroke-dasharray="6,4""# } else { "" };
        let _ = writeln!(s, r#"<polyline class="series" fill="none" stroke="{color}" stroke-width="1.6"{dash} points="{}"/>"#, pts.join(" "));
        let ly = top + 14.0 + 16.0 * k as f64;
        let _ = writeln!(s, r#"<line x1="{0:.2}" y1="{ly:.2}" x2="{1:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"{dash}/>"#, ML + PW + 8.0, ML + PW + 28.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, ML + PW + 32.0, ly + 4.0, esc(&r.label));
    }
    if let Some(note) = &p.note {
        let _ = writeln!(s, r#"<text class="note" x="{:.2}" y="{:.2}">{}</text>"#, ML + 8.0, top + 16.0, esc(note));
    }
    s.push_str("</g>\n");
}

/// Space-time map of `values[time][station]`.
pub fn heat_map(title: &str, xlabel: &str, ylabel: &str, x: &[f64], t: &[f64], values: &[Vec<f64>], unit: &str) -> String {
    let width = ML + PW + MR;
    let height = MT + PH + MB + 10.0;
    let (v0, v1) = range(values.iter().flatten().copied());
    let (x0, x1) = edges(x);
    let (t0, t1) = edges(t);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text class="figure-title" x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#, width / 2.0, esc(title));
    let top = MT;
    let cell = |lo: &[f64], i: usize, a: f64, b: f64| -> (f64, f64) {
        let l = if i == 0 { a } else { 0.5 * (lo[i - 1] + lo[i]) };
        let r = if i + 1 == lo.len() { b } else { 0.5 * (lo[i] + lo[i + 1]) };
        (l, r)
    };
    for (j, row) in values.iter().enumerate() {
        let (ta, tb) = cell(t, j, t0, t1);
        for (i, &v) in row.iter().enumerate() {
            let (xa, xb) = cell(x, i, x0, x1);
            let rx = ML + (xa - x0) / (x1 - x0) * PW;
            let rw = (xb - xa) / (x1 - x0) * PW;
            let ry = top + PH - (tb - t0) / (t1 - t0) * PH;
            let rh = (tb - ta) / (t1 - t0) * PH;
            let _ = writeln!(
                s,
                r#"<rect class="cell" x="{rx:.2}" y="{ry:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                rw + 0.3,
                rh + 0.3,
                colormap((v - v0) / (v1 - v0))
            );
        }
    }
    let _ = writeln!(s, r##"<rect x="{ML}" y="{top}" width="{PW}" height="{PH}" fill="none" stroke="#333"/>"##);
    for tk in ticks(x0, x1, 5) {
        let xx = ML + (tk - x0) / (x1 - x0) * PW;
        let _ = writeln!(s, r#"<text x="{xx:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, top + PH + 18.0, fmt_tick(tk));
    }
    for tk in ticks(t0, t1, 4) {
        let yy = top + PH - (tk - t0) / (t1 - t0) * PH;
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, ML - 8.0, yy + 4.0, fmt_tick(tk));
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, ML + PW / 2.0, top + PH + 38.0, esc(xlabel));
    let _ = writeln!(
        s,
        r#"<text x="{0}" y="{1}" text-anchor="middle" transform="rotate(-90 {0} {1})">{2}</text>"#,
        18.0,
        top + PH / 2.0,
        esc(ylabel)
    );
    for k in 0..=20 {
        let f = k as f64 / 20.0;
        let yy = top + PH - f * PH;
        let _ = writeln!(s, r#"<rect x="{:.2}" y="{:.2}" width="16" height="{:.2}" fill="{}"/>"#, ML + PW + 20.0, yy - PH / 20.0, PH / 20.0 + 0.3, colormap(f));
    }
    let _ = writeln!(s, r#"<text class="colorbar-max" x="{:.2}" y="{:.2}">{} {}</text>"#, ML + PW + 40.0, top + 10.0, fmt_tick(v1), esc(unit));
    let _ = writeln!(s, r#"<text class="colorbar-min" x="{:.2}" y="{:.2}">{} {}</text>"#, ML + PW + 40.0, top + PH, fmt_tick(v0), esc(unit));
    s.push_str("</svg>\n");
    s
}

fn edges(v: &[f64]) -> (f64, f64) {
    match v.len() {
        0 => (0.0, 1.0),
        1 => (v[0] - 0.5, v[0] + 0.5),
        n => (v[0] - 0.5 * (v[1] - v[0]), v[n - 1] + 0.5 * (v[n - 1] - v[n - 2])),
    }
}

/// Blue-white-red ramp for `f` in `[0, 1]`.
fn colormap(f: f64) -> String {
    let f = if f.is_finite() { f.clamp(0.0, 1.0) } else { 0.5 };
    let (r, g, b) = if f < 0.5 {
        let u = f / 0.5;
        (59.0 + u * (245.0 - 59.0), 76.0 + u * (245.0 - 76.0), 192.0 + u * (245.0 - 192.0))
    } else {
        let u = (f - 0.5) / 0.5;
        (245.0 + u * (180.0 - 245.0), 245.0 + u * (4.0 - 245.0), 245.0 + u * (38.0 - 245.0))
    };
    format!("rgb({},{},{})", r.round() as u8, g.round() as u8, b.round() as u8)
}
