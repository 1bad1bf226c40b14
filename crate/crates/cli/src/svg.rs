//! Static SVG figures of strand trajectories and braid diagrams.

use std::fmt::Write as _;

use braidflow::braids::Strand;
use braidflow::geometry::Point2;
use braidflow::ScenarioResult;
use clap::ValueEnum;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SvgKind {
    Trajectories,
    BraidDiagram,
}

impl SvgKind {
    pub fn file_stem(self) -> &'static str {
        match self {
            SvgKind::Trajectories => "trajectories",
            SvgKind::BraidDiagram => "braid-diagram",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SvgError {
    #[error("no strands to draw")]
    Empty,
}

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];
const SIZE: f64 = 480.0;
const MARGIN: f64 = 24.0;
const MAX_VERTICES: usize = 720;

fn color(i: usize) -> &'static str {
    PALETTE[i % PALETTE.len()]
}

fn n(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn is_constant(s: &Strand<f64>) -> bool {
    s.trajectory.max_displacement() < 1e-9
}

fn sampled(points: &[Point2<f64>]) -> impl Iterator<Item = &Point2<f64>> {
    let stride = points.len().div_ceil(MAX_VERTICES).max(1);
    points.iter().step_by(stride)
}

fn header(out: &mut String, width: f64, height: f64, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = n(width),
        h = n(height)
    );
    let _ = writeln!(out, "<title>{title}</title>");
    let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
}

/// Draws every strand of `result`: moving strands as closed paths,
/// equilibria as dots. Output depends only on the trajectories.
pub fn emit_svg(result: &ScenarioResult, kind: SvgKind) -> Result<String, SvgError> {
    let strands = result.strands.strands();
    if strands.is_empty() {
        return Err(SvgError::Empty);
    }
    let title = format!("{} {}", result.config.name, kind.file_stem());
    Ok(match kind {
        SvgKind::Trajectories => trajectories(strands, &title),
        SvgKind::BraidDiagram => braid_diagram(strands, &title),
    })
}

fn trajectories(strands: &[Strand<f64>], title: &str) -> String {
    let (mut lo, mut hi) =
        (Point2::new(f64::INFINITY, f64::INFINITY), Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
    for s in strands {
        for p in &s.trajectory.positions {
            lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
    }
    let span = (hi.x - lo.x).max(hi.y - lo.y).max(0.2) * 1.1;
    let mid = (lo + hi) * 0.5;
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let map = |p: &Point2<f64>| (SIZE / 2.0 + (p.x - mid.x) * scale, SIZE / 2.0 - (p.y - mid.y) * scale);

    let mut out = String::new();
    header(&mut out, SIZE, SIZE, title);
    for (i, s) in strands.iter().enumerate() {
        let (x0, y0) = map(&s.trajectory.positions[0]);
        if is_constant(s) {
            let _ = writeln!(
                out,
                r#"<circle class="equilibrium" data-strand="{}" cx="{}" cy="{}" r="4" fill="{}"/>"#,
                s.label,
                n(x0),
                n(y0),
                color(i)
            );
        } else {
            let mut d = String::new();
            for (k, p) in sampled(&s.trajectory.positions).enumerate() {
                let (x, y) = map(p);
                let _ = write!(d, "{}{} {} ", if k == 0 { "M" } else { "L" }, n(x), n(y));
            }
            d.push('Z');
            let _ = writeln!(
                out,
                r#"<path class="strand" data-strand="{}" d="{d}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
                s.label,
                color(i)
            );
            let _ =
                writeln!(out, r#"<circle class="start" cx="{}" cy="{}" r="2.5" fill="{}"/>"#, n(x0), n(y0), color(i));
        }
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" fill="{}">{}</text>"#,
            n(x0 + 6.0),
            n(y0 - 6.0),
            color(i),
            s.label
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Time runs left to right; height is the x-coordinate. Crossings of the
/// projection are marked, with the strand of larger y on top.
fn braid_diagram(strands: &[Strand<f64>], title: &str) -> String {
    let width = 2.0 * SIZE;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for s in strands {
        for p in &s.trajectory.positions {
            lo = lo.min(p.x);
            hi = hi.max(p.x);
        }
    }
    let span = (hi - lo).max(0.2) * 1.1;
    let mid = 0.5 * (lo + hi);
    let map =
        |t: f64, x: f64| (MARGIN + t * (width - 2.0 * MARGIN), SIZE / 2.0 - (x - mid) / span * (SIZE - 2.0 * MARGIN));

    let mut out = String::new();
    header(&mut out, width, SIZE, title);
    for (i, s) in strands.iter().enumerate() {
        let tr = &s.trajectory;
        let stride = tr.positions.len().div_ceil(MAX_VERTICES).max(1);
        let mut d = String::new();
        let idx: Vec<usize> =
            (0..tr.positions.len()).step_by(stride).chain(std::iter::once(tr.positions.len() - 1)).collect();
        for (k, &j) in idx.iter().enumerate() {
            if k > 0 && j == idx[k - 1] {
                continue;
            }
            let (x, y) = map(tr.times[j], tr.positions[j].x);
            let _ = write!(d, "{}{} {} ", if k == 0 { "M" } else { "L" }, n(x), n(y));
        }
        let _ = writeln!(
            out,
            r#"<path class="strand" data-strand="{}" d="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
            s.label,
            d.trim_end(),
            color(i)
        );
        let (x0, y0) = map(0.0, tr.positions[0].x);
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="end" fill="{}">{}</text>"#,
            n(x0 - 4.0),
            n(y0 + 4.0),
            color(i),
            s.label
        );
    }
    for a in 0..strands.len() {
        for b in 0..a {
            let (pa, pb) = (&strands[a].trajectory, &strands[b].trajectory);
            for k in 1..pa.positions.len() {
                let d0 = pa.positions[k - 1].x - pb.positions[k - 1].x;
                let d1 = pa.positions[k].x - pb.positions[k].x;
                if d0 == 0.0 || d0.signum() == d1.signum() {
                    continue;
                }
                let f = d0 / (d0 - d1);
                let t = pa.times[k - 1] + f * (pa.times[k] - pa.times[k - 1]);
                let x = pa.positions[k - 1].x + f * (pa.positions[k].x - pa.positions[k - 1].x);
                let ya = pa.positions[k - 1].y + f * (pa.positions[k].y - pa.positions[k - 1].y);
                let yb = pb.positions[k - 1].y + f * (pb.positions[k].y - pb.positions[k - 1].y);
                let over = if ya > yb { a } else { b };
                let (cx, cy) = map(t, x);
                let _ = writeln!(
                    out,
                    r##"<circle class="crossing" data-over="{}" cx="{}" cy="{}" r="3" fill="{}" stroke="#000000" stroke-width="0.5"/>"##,
                    strands[over].label,
                    n(cx),
                    n(cy),
                    color(over)
                );
            }
        }
    }
    out.push_str("</svg>\n");
    out
}
