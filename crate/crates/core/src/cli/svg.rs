//! Deterministic SVG drawings of planar scenes.

use std::f64::consts::PI;
use std::fmt::Write;

use crate::circumradius::Circumsolution;
use crate::error::{Error, Result};
use crate::geomkit::{Kernel, PointSet};

const SIZE: f64 = 600.0;
const PADDING: f64 = 0.05;
const DIRECTIONS: usize = 360;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// Points, a kernel and any number of covering copies `λK + x` of it.
#[derive(Debug, Clone)]
pub struct Scene {
    pub points: PointSet,
    pub kernel: Kernel,
    pub solutions: Vec<Circumsolution>,
    pub seed: u64,
}

enum Shape {
    Circle { c: [f64; 2], r: f64 },
    Polygon(Vec<[f64; 2]>),
    Marker([f64; 2]),
}

impl Shape {
    fn extent(&self) -> Vec<[f64; 2]> {
        match self {
            Shape::Circle { c, r } => vec![[c[0] - r, c[1] - r], [c[0] + r, c[1] + r]],
            Shape::Polygon(v) => v.clone(),
            Shape::Marker(p) => vec![*p],
        }
    }
}

/// Boundary of `K`, as support points over evenly spaced directions.
fn outline(kernel: &Kernel) -> Result<Vec<[f64; 2]>> {
    let mut out: Vec<[f64; 2]> = Vec::new();
    for k in 0..DIRECTIONS {
        let t = 2.0 * PI * k as f64 / DIRECTIONS as f64;
        let p = kernel.support_point(&[t.cos(), t.sin()])?;
        let p = [p[0], p[1]];
        let same = |q: &[f64; 2]| (q[0] - p[0]).abs() < 1e-9 && (q[1] - p[1]).abs() < 1e-9;
        if !out.last().is_some_and(same) && !out.first().is_some_and(same) {
            out.push(p);
        }
    }
    Ok(out)
}

fn placed(kernel: &Kernel, base: &[[f64; 2]], lambda: f64, at: [f64; 2]) -> Shape {
    if lambda <= 0.0 {
        return Shape::Marker(at);
    }
    match kernel {
        Kernel::Ball { .. } => Shape::Circle { c: at, r: lambda },
        _ => Shape::Polygon(base.iter().map(|p| [at[0] + lambda * p[0], at[1] + lambda * p[1]]).collect()),
    }
}

/// Renders a two-dimensional scene: the kernel at the origin (dashed), each
/// covering copy (solid; a cross when `λ = 0`) and the labelled points.
pub fn render_svg(scene: &Scene) -> Result<String> {
    if scene.kernel.dim() != 2 || (!scene.points.is_empty() && scene.points.dim() != 2) {
        return Err(Error::PreconditionUnmet("rendering needs two-dimensional input".into()));
    }
    scene.kernel.validate()?;
    let base = match scene.kernel {
        Kernel::Ball { .. } => Vec::new(),
        _ => outline(&scene.kernel)?,
    };
    let reference = placed(&scene.kernel, &base, 1.0, [0.0, 0.0]);
    let copies: Vec<Shape> = scene
        .solutions
        .iter()
        .map(|s| placed(&scene.kernel, &base, s.radius, [s.center[0], s.center[1]]))
        .collect();

    let mut all: Vec<[f64; 2]> = reference.extent();
    copies.iter().for_each(|c| all.extend(c.extent()));
    all.extend(scene.points.points().iter().map(|p| [p[0], p[1]]));
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in &all {
        for i in 0..2 {
            lo[i] = lo[i].min(p[i]);
            hi[i] = hi[i].max(p[i]);
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
    let scale = SIZE * (1.0 - 2.0 * PADDING) / span;
    let mid = [(lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0];
    let tx = |p: [f64; 2]| -> (f64, f64) {
        (
            SIZE / 2.0 + (p[0] - mid[0]) * scale,
            SIZE / 2.0 - (p[1] - mid[1]) * scale,
        )
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="600" height="600" viewBox="0 0 600 600" data-seed="{}">"#,
        scene.seed
    );
    svg.push_str("<rect width=\"600\" height=\"600\" fill=\"#ffffff\"/>\n");
    draw(&mut svg, &reference, &tx, scale, "#999999", true);
    for (i, c) in copies.iter().enumerate() {
        draw(&mut svg, c, &tx, scale, COLORS[i % COLORS.len()], false);
    }
    for (i, p) in scene.points.points().iter().enumerate() {
        let (x, y) = tx([p[0], p[1]]);
        let _ = writeln!(svg, r##"<circle cx="{x:.3}" cy="{y:.3}" r="3.000" fill="#000000"/>"##);
        if scene.points.labels().is_some() {
            let _ = writeln!(
                svg,
                r##"<text x="{:.3}" y="{:.3}" font-size="12" fill="#000000">{}</text>"##,
                x + 5.0,
                y - 5.0,
                escape(&scene.points.label(i))
            );
        }
    }
    for (i, s) in scene.solutions.iter().enumerate() {
        let _ = writeln!(
            svg,
            r##"<text x="10.000" y="{:.3}" font-size="12" fill="{}">λ = {:.6}</text>"##,
            20.0 + 16.0 * i as f64,
            COLORS[i % COLORS.len()],
            s.radius
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn draw(svg: &mut String, shape: &Shape, tx: &dyn Fn([f64; 2]) -> (f64, f64), scale: f64, color: &str, dashed: bool) {
    let dash = if dashed { r#" stroke-dasharray="6 4""# } else { "" };
    match shape {
        Shape::Circle { c, r } => {
            let (x, y) = tx(*c);
            let _ = writeln!(
                svg,
                r#"<circle cx="{x:.3}" cy="{y:.3}" r="{:.3}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>"#,
                r * scale
            );
        }
        Shape::Polygon(v) => {
            let pts: Vec<String> = v
                .iter()
                .map(|p| {
                    let (x, y) = tx(*p);
                    format!("{x:.3},{y:.3}")
                })
                .collect();
            let _ = writeln!(
                svg,
                r#"<polygon points="{}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>"#,
                pts.join(" ")
            );
        }
        Shape::Marker(p) => {
            let (x, y) = tx(*p);
            let _ = writeln!(
                svg,
                r#"<path d="M{:.3},{:.3} L{:.3},{:.3} M{:.3},{:.3} L{:.3},{:.3}" stroke="{color}" stroke-width="2"/>"#,
                x - 6.0,
                y - 6.0,
                x + 6.0,
                y + 6.0,
                x - 6.0,
                y + 6.0,
                x + 6.0,
                y - 6.0
            );
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
