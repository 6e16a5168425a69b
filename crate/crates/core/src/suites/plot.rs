//! SVG picture of `log|𝔗_c|` over the parallelogram with the located zeros
//! and the points `p1`, `p2` marked.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::abel_jacobi::PeriodMap;
use crate::config::RunConfig;
use crate::curve::Pair;
use crate::error::{Error, Result};
use crate::riemann::{locate_zeros, ThetaPullback};
use crate::sampling::{random_shift, stream};

use super::{complex_cells, Cell, Check, Report, Table};

pub const PLOT_STREAM: u64 = 30_000;
const MAX_DRAWS: usize = 50;
const SIZE: f64 = 480.0;
const MARGIN: f64 = 20.0;
/// Colour range of `log10|𝔗_c|`.
const LOG_RANGE: (f64, f64) = (-3.0, 2.0);

/// A generic shift from the plot stream with its two zeros.
pub fn plot_shift(map: &PeriodMap, seed: u64) -> Result<(Pair, [Complex64; 2], usize)> {
    let mut rng = stream(seed, PLOT_STREAM);
    let mut last = Error::DegenerateC("no draws".into());
    for resamples in 0..MAX_DRAWS {
        let c = random_shift(&mut rng, map.curve());
        match locate_zeros(&ThetaPullback::new(map, c)) {
            Ok(z) => return Ok((c, z, resamples)),
            Err(e) if e.is_resample() => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

fn shade(v: f64) -> (u8, u8, u8) {
    let (lo, hi) = LOG_RANGE;
    let x = if v.is_finite() { ((v - lo) / (hi - lo)).clamp(0.0, 1.0) } else { 1.0 };
    // dark blue at the zeros, pale yellow at the pole
    let lerp = |a: f64, b: f64| (a + (b - a) * x).round() as u8;
    (lerp(20.0, 250.0), lerp(30.0, 240.0), lerp(110.0, 170.0))
}

pub fn render(map: &PeriodMap, c: Pair, zeros: &[Complex64; 2], n: usize) -> Result<String> {
    let curve = map.curve();
    let tp = ThetaPullback::new(map, c);
    let corners = [curve.point(0.0, 0.0), curve.point(1.0, 0.0), curve.point(1.0, 1.0), curve.point(0.0, 1.0)];
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for z in corners {
        x0 = x0.min(z.re);
        x1 = x1.max(z.re);
        y0 = y0.min(z.im);
        y1 = y1.max(z.im);
    }
    let scale = SIZE / (x1 - x0).max(y1 - y0);
    let width = (x1 - x0) * scale + 2.0 * MARGIN;
    let height = (y1 - y0) * scale + 2.0 * MARGIN;
    let pt = |z: Complex64| (MARGIN + (z.re - x0) * scale, MARGIN + (y1 - z.im) * scale);

    let mut s = String::new();
    let w = |e: std::fmt::Error| Error::Config(e.to_string());
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8" standalone="yes"?>"#).map_err(w)?;
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.1}" height="{height:.1}" viewBox="0 0 {width:.1} {height:.1}">"#
    )
    .map_err(w)?;
    writeln!(s, "<title>log10 |T_c| on the fundamental parallelogram</title>").map_err(w)?;
    writeln!(s, r#"<g stroke="none">"#).map_err(w)?;
    let h = 1.0 / n as f64;
    for i in 0..n {
        for j in 0..n {
            let (si, tj) = (i as f64 * h, j as f64 * h);
            let v = tp.value(curve.point(si + 0.5 * h, tj + 0.5 * h)).map(|v| v.norm().log10()).unwrap_or(f64::INFINITY);
            let (r, g, b) = shade(v);
            let quad = [(si, tj), (si + h, tj), (si + h, tj + h), (si, tj + h)].map(|(a, b)| pt(curve.point(a, b)));
            write!(s, r##"<polygon fill="#{r:02x}{g:02x}{b:02x}" points=""##).map_err(w)?;
            for (k, (x, y)) in quad.iter().enumerate() {
                write!(s, "{}{x:.2},{y:.2}", if k == 0 { "" } else { " " }).map_err(w)?;
            }
            writeln!(s, r#""/>"#).map_err(w)?;
        }
    }
    writeln!(s, "</g>").map_err(w)?;
    let outline: Vec<String> = corners.iter().map(|&z| pt(z)).map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
    writeln!(s, r#"<polygon fill="none" stroke="black" stroke-width="1" points="{}"/>"#, outline.join(" ")).map_err(w)?;
    for (class, z, colour) in [("node", curve.p1(), "#1b9e77"), ("pole", curve.p2(), "#d95f02")] {
        let (x, y) = pt(z);
        writeln!(s, r#"<rect class="{class}" x="{:.2}" y="{:.2}" width="8" height="8" fill="{colour}" stroke="black"/>"#, x - 4.0, y - 4.0)
            .map_err(w)?;
    }
    for z in zeros {
        let (x, y) = pt(*z);
        writeln!(s, r##"<circle class="zero" cx="{x:.2}" cy="{y:.2}" r="5" fill="#e7298a" stroke="white"/>"##).map_err(w)?;
    }
    writeln!(s, "</svg>").map_err(w)?;
    Ok(s)
}

pub fn run(cfg: &RunConfig) -> Result<Report> {
    let map = cfg.period_map()?;
    let (c, zeros, resamples) = plot_shift(&map, cfg.seed)?;
    let svg = render(&map, c, &zeros, cfg.plot_resolution)?;
    let markers = svg.matches(r#"class="zero""#).count();
    let mut t = Table::new("zeroset_plot", &["c1_re", "c1_im", "c2_re", "c2_im", "q1_re", "q1_im", "q2_re", "q2_im", "resamples"]);
    let mut row: Vec<Cell> = Vec::new();
    for z in [c.0, c.1, zeros[0], zeros[1]] {
        row.extend(complex_cells(z));
    }
    row.push(resamples.into());
    t.push(row);
    Ok(Report {
        tables: vec![t],
        files: vec![("zeroset.svg".into(), svg)],
        checks: vec![Check::below("zero_markers_minus_two", (markers as f64 - 2.0).abs(), 0.5)],
        log: vec![format!("plotted c = ({}, {})", c.0, c.1)],
    })
}
