//! Curve serialization: canonical CSV and a fixed-layout SVG line
//! chart of (n, s). Both are byte-deterministic for a given curve.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::speedup::SpeedupCurve;

/// Scientific notation with 9 significant digits, enough to round-trip
/// the model outputs through the published CSV contract.
fn fmt_value(v: f64) -> String {
    format!("{v:.8e}")
}

/// Renders the curve as CSV with the header
/// `n,t_cp,t_cm,t_total,speedup`, rows sorted by n.
pub fn emit_curve_csv(curve: &SpeedupCurve) -> String {
    let mut out = String::from("n,t_cp,t_cm,t_total,speedup\n");
    for p in &curve.points {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            p.n,
            fmt_value(p.t_cp),
            fmt_value(p.t_cm),
            fmt_value(p.t_total),
            fmt_value(p.speedup)
        );
    }
    out
}

const SVG_W: f64 = 800.0;
const SVG_H: f64 = 500.0;
const MARGIN_LEFT: f64 = 65.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 20.0;
const MARGIN_BOTTOM: f64 = 45.0;
const TICKS: u32 = 5;

fn fmt_coord(v: f64) -> String {
    format!("{v:.2}")
}

/// Renders a standalone 800×500 SVG with one polyline of (n, s(n)),
/// linear axes and tick labels. Needs at least two points.
pub fn emit_curve_svg(curve: &SpeedupCurve) -> Result<String> {
    if curve.points.len() < 2 {
        return Err(Error::TooFewPoints(curve.points.len()));
    }
    let n_min = curve.points.first().expect("non-empty").n as f64;
    let n_max = curve.points.last().expect("non-empty").n as f64;
    let s_max = curve
        .points
        .iter()
        .map(|p| p.speedup)
        .fold(f64::NEG_INFINITY, f64::max);
    let s_top = s_max * 1.05;

    let plot_w = SVG_W - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = SVG_H - MARGIN_TOP - MARGIN_BOTTOM;
    let x = |n: f64| MARGIN_LEFT + (n - n_min) / (n_max - n_min) * plot_w;
    let y = |s: f64| MARGIN_TOP + plot_h - s / s_top * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {SVG_W} {SVG_H}\" \
         font-family=\"sans-serif\" font-size=\"12\">"
    );
    let _ = writeln!(
        svg,
        "<rect x=\"0\" y=\"0\" width=\"{SVG_W}\" height=\"{SVG_H}\" fill=\"white\"/>"
    );

    // axes
    let x0 = fmt_coord(MARGIN_LEFT);
    let y0 = fmt_coord(MARGIN_TOP + plot_h);
    let x1 = fmt_coord(MARGIN_LEFT + plot_w);
    let y1 = fmt_coord(MARGIN_TOP);
    let _ = writeln!(
        svg,
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>"
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"black\"/>"
    );

    for i in 0..TICKS {
        let frac = i as f64 / (TICKS - 1) as f64;

        let n = n_min + frac * (n_max - n_min);
        let tx = fmt_coord(x(n));
        let ty0 = fmt_coord(MARGIN_TOP + plot_h);
        let ty1 = fmt_coord(MARGIN_TOP + plot_h + 6.0);
        let _ = writeln!(
            svg,
            "<line x1=\"{tx}\" y1=\"{ty0}\" x2=\"{tx}\" y2=\"{ty1}\" stroke=\"black\"/>"
        );
        let _ = writeln!(
            svg,
            "<text x=\"{tx}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
            fmt_coord(MARGIN_TOP + plot_h + 20.0),
            fmt_coord(n)
        );

        let s = frac * s_top;
        let sy = fmt_coord(y(s));
        let sx0 = fmt_coord(MARGIN_LEFT - 6.0);
        let _ = writeln!(
            svg,
            "<line x1=\"{sx0}\" y1=\"{sy}\" x2=\"{x0}\" y2=\"{sy}\" stroke=\"black\"/>"
        );
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>",
            fmt_coord(MARGIN_LEFT - 10.0),
            fmt_coord(y(s) + 4.0),
            fmt_coord(s)
        );
    }

    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">workers n</text>",
        fmt_coord(MARGIN_LEFT + plot_w / 2.0),
        fmt_coord(SVG_H - 8.0)
    );
    let _ = writeln!(
        svg,
        "<text x=\"14\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 14 {})\">speedup s(n)</text>",
        fmt_coord(MARGIN_TOP + plot_h / 2.0),
        fmt_coord(MARGIN_TOP + plot_h / 2.0)
    );

    let points: Vec<String> = curve
        .points
        .iter()
        .map(|p| format!("{},{}", fmt_coord(x(p.n as f64)), fmt_coord(y(p.speedup))))
        .collect();
    let _ = writeln!(
        svg,
        "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"{}\"/>",
        points.join(" ")
    );
    svg.push_str("</svg>\n");
    Ok(svg)
}
