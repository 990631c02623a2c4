use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::Context;
use stechkin_core::constants as cst;
use stechkin_core::trig::ell_function;

use crate::report::VerificationReport;

const W: f64 = 640.0;
const H: f64 = 420.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

/// Minimal SVG line chart with linear axes.
pub fn line_plot(title: &str, xlabel: &str, ylabel: &str, series: &[Series]) -> String {
    let all = series.iter().flat_map(|s| s.points.iter()).filter(|p| p.0.is_finite() && p.1.is_finite());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all {
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
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let pad = 0.05 * (y1 - y0);
    let (y0, y1) = (y0 - pad, y1 + pad);
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (W - 2.0 * MARGIN);
    let sy = |y: f64| H - MARGIN - (y - y0) / (y1 - y0) * (H - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#, W / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<path d="M{m} {t} L{m} {b} L{r} {b}" stroke="black" fill="none"/>"#,
        m = MARGIN,
        t = MARGIN,
        b = H - MARGIN,
        r = W - MARGIN
    );
    for i in 0..=4 {
        let fx = x0 + (x1 - x0) * f64::from(i) / 4.0;
        let fy = y0 + (y1 - y0) * f64::from(i) / 4.0;
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, sx(fx), H - MARGIN + 16.0, tick(fx));
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#, MARGIN - 6.0, sy(fy) + 4.0, tick(fy));
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, W / 2.0, H - 18.0, escape(xlabel));
    let _ = writeln!(
        s,
        r#"<text x="16" y="{y}" text-anchor="middle" transform="rotate(-90 16 {y})">{}</text>"#,
        escape(ylabel),
        y = H / 2.0
    );
    for (i, ser) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let d: Vec<String> = ser
            .points
            .iter()
            .filter(|p| p.0.is_finite() && p.1.is_finite())
            .enumerate()
            .map(|(j, &(x, y))| format!("{}{:.2} {:.2}", if j == 0 { "M" } else { "L" }, sx(x), sy(y)))
            .collect();
        let _ = writeln!(s, r#"<path d="{}" stroke="{color}" stroke-width="1.8" fill="none"/>"#, d.join(" "));
        let ly = MARGIN + 16.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{ly:.1}" fill="{color}" text-anchor="end">{}</text>"#,
            W - MARGIN,
            escape(&ser.name)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-2 || v.abs() >= 1e4) {
        format!("{v:.1e}")
    } else {
        format!("{v:.3}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Corpus maximum of `E/(γ*_r ω_r)` against `r`, one series per `α`.
pub fn ratio_plot(report: &VerificationReport) -> String {
    let mut alphas: Vec<f64> = report.ratio_samples.iter().map(|s| s.alpha).collect();
    alphas.sort_by(f64::total_cmp);
    alphas.dedup();
    let series: Vec<Series> = alphas
        .iter()
        .map(|&a| {
            let mut rs: Vec<u32> = report.ratio_samples.iter().filter(|s| s.alpha == a).map(|s| s.r).collect();
            rs.sort_unstable();
            rs.dedup();
            let points = rs
                .iter()
                .map(|&r| {
                    let max = report
                        .ratio_samples
                        .iter()
                        .filter(|s| s.alpha == a && s.r == r && s.ratio_over_gamma.is_finite())
                        .map(|s| s.ratio_over_gamma)
                        .fold(f64::NEG_INFINITY, f64::max);
                    (f64::from(r), max)
                })
                .collect();
            Series { name: format!("δ = {a}π/n"), points }
        })
        .collect();
    line_plot("max E/(γ*_r ω_r) over the corpus", "r", "ratio / γ*_r", &series)
}

/// `1 − μ²_{2k}` with the `c/√(2k)` envelope.
pub fn mu_plot() -> String {
    let ks: Vec<u32> = (1..=60).collect();
    let val = |k: u32| 1.0 - cst::mu_squared(k).expect("k ≥ 1");
    let env = |c: f64| ks.iter().map(|&k| (f64::from(k), c / (2.0 * f64::from(k)).sqrt())).collect();
    let series = [
        Series { name: "1 − μ²".into(), points: ks.iter().map(|&k| (f64::from(k), val(k))).collect() },
        Series { name: "2/(3√(2k))".into(), points: env(2.0 / 3.0) },
        Series { name: "5/(4√(2k))".into(), points: env(1.25) },
    ];
    line_plot("1 − μ²_{2k} and its envelope", "k", "value", &series)
}

/// `ℓ(x)` against `1 + (4/π²) ln(x+1)`.
pub fn ell_plot() -> anyhow::Result<String> {
    let xs: Vec<f64> = (0..=40).map(|i| 1.0 + f64::from(i)).collect();
    let mut ell = Vec::new();
    for &x in &xs {
        ell.push((x, ell_function(x, 1e-6)?.value));
    }
    let bound = xs
        .iter()
        .map(|&x| (x, 1.0 + 4.0 / (std::f64::consts::PI.powi(2)) * (x + 1.0).ln()))
        .collect();
    let series = [Series { name: "ℓ(x)".into(), points: ell }, Series { name: "log bound".into(), points: bound }];
    Ok(line_plot("ℓ(x) and the logarithmic bound", "x", "value", &series))
}

pub const PLOT_NAMES: [&str; 3] = ["ratio-vs-r.svg", "mu-envelope.svg", "ell-vs-log-bound.svg"];

pub fn write_plots(report: &VerificationReport, dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let bodies = [ratio_plot(report), mu_plot(), ell_plot()?];
    let mut out = Vec::new();
    for (name, body) in PLOT_NAMES.iter().zip(bodies) {
        let path = dir.join(name);
        std::fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
        out.push(path);
    }
    Ok(out)
}
