use std::fmt::Write as _;
use std::path::Path;

use super::summary::SummaryRow;
use crate::error::{Error, Result};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 160.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

struct Curve<'a> {
    method: &'a str,
    features: usize,
    points: Vec<(f64, f64)>,
}

fn curves(summary: &[SummaryRow]) -> Vec<Curve<'_>> {
    let mut out: Vec<Curve> = Vec::new();
    for row in summary.iter().filter(|r| r.mean_success.is_finite()) {
        let point = (row.n_per_population as f64, row.mean_success);
        match out
            .iter_mut()
            .find(|c| c.method == row.method && c.features == row.features)
        {
            Some(c) => c.points.push(point),
            None => out.push(Curve {
                method: &row.method,
                features: row.features,
                points: vec![point],
            }),
        }
    }
    for c in &mut out {
        c.points.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    out
}

/// Renders success rate against `N` (log scale): one polyline per method and
/// `K`, oracle curves dashed, and a vertical marker for each `K` at the `N`
/// where `NK = 1/γ²`.
pub fn render_svg(summary: &[SummaryRow]) -> Result<String> {
    let curves = curves(summary);
    if curves.is_empty() {
        return Err(Error::InvalidInput(
            "summary has no plottable points".into(),
        ));
    }
    let xs = curves.iter().flat_map(|c| c.points.iter().map(|p| p.0));
    let (lo, hi) = xs.fold((f64::INFINITY, 0.0f64), |(l, h), x| (l.min(x), h.max(x)));
    let (lo, hi) = if hi > lo {
        (lo.log10(), hi.log10())
    } else {
        (lo.log10() - 0.5, lo.log10() + 0.5)
    };
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |n: f64| LEFT + (n.log10() - lo) / (hi - lo) * plot_w;
    let sy = |r: f64| TOP + (1.0 - r) * plot_h;

    let mut keys: Vec<usize> = curves.iter().map(|c| c.features).collect();
    keys.sort_unstable();
    keys.dedup();
    let color = |k: usize| PALETTE[keys.iter().position(|&x| x == k).unwrap() % PALETTE.len()];

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    for tick in 0..=10 {
        let r = tick as f64 / 10.0;
        let y = sy(r);
        let _ = writeln!(
            s,
            r##"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{r:.1}</text>"##,
            LEFT - 5.0,
            LEFT - 8.0,
            y + 4.0
        );
    }
    let mut ns: Vec<f64> = curves
        .iter()
        .flat_map(|c| c.points.iter().map(|p| p.0))
        .collect();
    ns.sort_by(f64::total_cmp);
    ns.dedup();
    for n in ns {
        let x = sx(n);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{n}</text>"#,
            TOP + plot_h,
            TOP + plot_h + 5.0,
            TOP + plot_h + 18.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">N (individuals per population)</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text x="15" y="{:.2}" text-anchor="middle" transform="rotate(-90 15 {:.2})">success rate</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    let gamma = summary[0].gamma;
    if gamma > 0.0 {
        for &k in &keys {
            let n_star = 1.0 / (gamma * gamma * k as f64);
            let pos = n_star.log10();
            if pos >= lo && pos <= hi {
                let x = sx(n_star);
                let _ = writeln!(
                    s,
                    r#"<line class="marker" x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{:.2}" stroke="{}" stroke-width="1" stroke-dasharray="2,3"/>"#,
                    TOP + plot_h,
                    color(k)
                );
            }
        }
    }

    for (i, c) in curves.iter().enumerate() {
        let pts: Vec<String> = c
            .points
            .iter()
            .map(|&(n, r)| format!("{:.2},{:.2}", sx(n), sy(r)))
            .collect();
        let dash = if c.method == "oracle" {
            r#" stroke-dasharray="6,4""#
        } else {
            ""
        };
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{}" stroke-width="2"{dash} points="{}"/>"#,
            color(c.features),
            pts.join(" ")
        );
        let ly = TOP + 10.0 + 16.0 * i as f64;
        let lx = WIDTH - RIGHT + 10.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{}" stroke-width="2"{dash}/><text x="{:.2}" y="{:.2}">{} K={}</text>"#,
            lx + 20.0,
            color(c.features),
            lx + 25.0,
            ly + 4.0,
            c.method,
            c.features
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Plotted points as CSV: `method,K,N,mean_success,std_success`.
pub fn render_points_csv(summary: &[SummaryRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["method", "K", "N", "mean_success", "std_success"])?;
    for r in summary.iter().filter(|r| r.mean_success.is_finite()) {
        w.write_record([
            r.method.clone(),
            r.features.to_string(),
            r.n_per_population.to_string(),
            r.mean_success.to_string(),
            r.std_success.to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

/// Writes the SVG to `svg_path` and the plotted points next to it.
pub fn emit_plot(summary: &[SummaryRow], svg_path: &Path, points_path: &Path) -> Result<()> {
    if summary.is_empty() {
        return Err(Error::InvalidInput("summary is empty".into()));
    }
    let svg = render_svg(summary)?;
    let points = render_points_csv(summary)?;
    std::fs::write(svg_path, svg).map_err(|e| Error::io(svg_path, e))?;
    std::fs::write(points_path, points).map_err(|e| Error::io(points_path, e))?;
    Ok(())
}
