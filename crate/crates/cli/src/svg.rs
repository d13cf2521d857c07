//! Hand-written SVG figures.

use std::fmt::Write;

use veil_core::synthesis::Scanline;
use veil_core::PRESERVED_THRESHOLD;

use crate::sweep::SweepResult;

const PLOT_W: f64 = 640.0;
const PLOT_H: f64 = 400.0;
const MARGIN: f64 = 60.0;
const TICKS: usize = 5;

fn header(out: &mut String, w: f64, h: f64) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".to_owned() } else { s.to_owned() }
}

/// Line plot of anonymity against the swept value, with the preservation
/// threshold dashed.
pub fn sweep_plot(result: &SweepResult) -> String {
    let (x0, x1) = (result.values[0], result.values[result.values.len() - 1]);
    let inner_w = PLOT_W - 2.0 * MARGIN;
    let inner_h = PLOT_H - 2.0 * MARGIN;
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * inner_w;
    let py = |a: f64| PLOT_H - MARGIN - a * inner_h;

    let mut out = String::new();
    header(&mut out, PLOT_W, PLOT_H);
    let name = result.parameter.name();
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="14">Anonymity A vs {name}</text>"#,
        PLOT_W / 2.0
    );
    let (left, right, top, bottom) = (MARGIN, PLOT_W - MARGIN, MARGIN, PLOT_H - MARGIN);
    let _ = writeln!(
        out,
        r#"<path d="M{left:.2},{top:.2} L{left:.2},{bottom:.2} L{right:.2},{bottom:.2}" fill="none" stroke="black"/>"#
    );
    for i in 0..=TICKS {
        let frac = i as f64 / TICKS as f64;
        let x = px(x0 + frac * (x1 - x0));
        let y = py(frac);
        let _ = writeln!(
            out,
            r#"<line x1="{x:.2}" y1="{bottom:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#,
            bottom + 5.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            bottom + 18.0,
            tick_label(x0 + frac * (x1 - x0))
        );
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{left:.2}" y2="{y:.2}" stroke="black"/>"#,
            left - 5.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            left - 8.0,
            y + 4.0,
            tick_label(frac)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{name}</text>"#,
        PLOT_W / 2.0,
        PLOT_H - 16.0
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">A</text>"#,
        PLOT_H / 2.0,
        PLOT_H / 2.0
    );

    let ty = py(PRESERVED_THRESHOLD);
    let _ = writeln!(
        out,
        r##"<line x1="{left:.2}" y1="{ty:.2}" x2="{right:.2}" y2="{ty:.2}" stroke="#c00000" stroke-dasharray="6 4"/>"##
    );
    let _ = writeln!(
        out,
        r##"<text x="{:.2}" y="{:.2}" text-anchor="end" fill="#c00000">A = {PRESERVED_THRESHOLD}</text>"##,
        right - 4.0,
        ty - 6.0
    );

    let points: Vec<String> = result
        .values
        .iter()
        .zip(&result.rows)
        .map(|(v, r)| format!("{:.2},{:.2}", px(*v), py(r.anonymity())))
        .collect();
    let _ = writeln!(
        out,
        r##"<polyline points="{}" fill="none" stroke="#1f4e9c" stroke-width="2"/>"##,
        points.join(" ")
    );
    for p in &points {
        let (cx, cy) = p.split_once(',').expect("points are x,y pairs");
        let _ = writeln!(out, r##"<circle cx="{cx}" cy="{cy}" r="3" fill="#1f4e9c"/>"##);
    }
    out.push_str("</svg>\n");
    out
}

/// One horizontal strip of a scanline; `holes` pixels are drawn red.
pub struct Strip<'a> {
    pub label: &'a str,
    pub line: &'a Scanline,
    pub holes: Option<&'a [bool]>,
}

const STRIP_H: f64 = 32.0;
const STRIP_GAP: f64 = 12.0;
const LABEL_W: f64 = 90.0;

fn colour(v: f64, hole: bool) -> String {
    if hole {
        return "#d00000".to_owned();
    }
    let g = (v.clamp(0.0, 1.0) * 255.0).round() as u8;
    format!("#{g:02x}{g:02x}{g:02x}")
}

/// Stacks scanlines as grey strips, one pixel per SVG unit. Runs of equal
/// colour are merged into one rectangle.
pub fn strips(items: &[Strip<'_>]) -> String {
    let width = items.iter().map(|s| s.line.width()).max().unwrap_or(0) as f64;
    let w = LABEL_W + width + 10.0;
    let h = STRIP_GAP + items.len() as f64 * (STRIP_H + STRIP_GAP);
    let mut out = String::new();
    header(&mut out, w, h);
    for (k, strip) in items.iter().enumerate() {
        let y = STRIP_GAP + k as f64 * (STRIP_H + STRIP_GAP);
        let _ = writeln!(
            out,
            r#"<text x="6" y="{:.2}">{}</text>"#,
            y + STRIP_H / 2.0 + 4.0,
            strip.label
        );
        let px = strip.line.pixels();
        let fills: Vec<String> = px
            .iter()
            .enumerate()
            .map(|(u, v)| colour(*v, strip.holes.is_some_and(|m| m[u])))
            .collect();
        let mut u = 0;
        while u < fills.len() {
            let mut end = u + 1;
            while end < fills.len() && fills[end] == fills[u] {
                end += 1;
            }
            let _ = writeln!(
                out,
                r#"<rect x="{}" y="{y}" width="{}" height="{STRIP_H}" fill="{}"/>"#,
                LABEL_W + u as f64,
                end - u,
                fills[u]
            );
            u = end;
        }
    }
    out.push_str("</svg>\n");
    out
}
