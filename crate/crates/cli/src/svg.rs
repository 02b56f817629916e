//! SVG projection of the three-point complex onto the plane orthogonal
//! to (1,1,1). Presentation only; coordinates here are lossy floats.

use dvy_core::rat::Rat;
use dvy_core::tightspan::ThreePointComplex;

fn project(p: &[Rat; 3]) -> (f64, f64) {
    let a = p[0].to_f64();
    let b = p[1].to_f64();
    let c = p[2].to_f64();
    let x = (a - b) / 2f64.sqrt();
    let y = (a + b - 2.0 * c) / 6f64.sqrt();
    (x, y)
}

pub fn complex_svg(complex: &ThreePointComplex, labels: &[String]) -> String {
    let v: Vec<(f64, f64)> = complex.v.iter().map(project).collect();
    let u: Vec<(f64, f64)> = complex.u.iter().map(project).collect();
    let all: Vec<(f64, f64)> = v.iter().chain(u.iter()).copied().collect();
    let min_x = all.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let max_x = all.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let min_y = all.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let max_y = all.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let span = (max_x - min_x).max(max_y - min_y).max(1e-9);
    let margin = 0.15 * span;
    let scale = 400.0 / (span + 2.0 * margin);
    let tx = |x: f64| (x - min_x + margin) * scale;
    let ty = |y: f64| (max_y - y + margin) * scale; // flip y for screen coords

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"440\" height=\"440\" viewBox=\"0 0 {:.4} {:.4}\">\n",
        (span + 2.0 * margin) * scale,
        (span + 2.0 * margin) * scale
    ));
    let mut line = |p: (f64, f64), q: (f64, f64), class: &str| {
        out.push_str(&format!(
            "  <line x1=\"{:.4}\" y1=\"{:.4}\" x2=\"{:.4}\" y2=\"{:.4}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
            tx(p.0), ty(p.1), tx(q.0), ty(q.1), class
        ));
    };
    // Tetrahedral cell edges (degenerate when beta = 0), then the legs.
    for i in 0..4 {
        for j in i + 1..4 {
            line(u[i], u[j], "#4477aa");
        }
    }
    for i in 0..3 {
        line(u[i + 1], v[i], "#222222");
    }
    for (i, p) in v.iter().enumerate() {
        out.push_str(&format!(
            "  <circle cx=\"{:.4}\" cy=\"{:.4}\" r=\"4\" fill=\"#cc3311\"/>\n",
            tx(p.0),
            ty(p.1)
        ));
        let label = labels.get(i).cloned().unwrap_or_else(|| format!("v{}", i + 1));
        out.push_str(&format!(
            "  <text x=\"{:.4}\" y=\"{:.4}\" font-size=\"14\">{}</text>\n",
            tx(p.0) + 6.0,
            ty(p.1) - 6.0,
            label
        ));
    }
    for p in &u {
        out.push_str(&format!(
            "  <circle cx=\"{:.4}\" cy=\"{:.4}\" r=\"3\" fill=\"#4477aa\"/>\n",
            tx(p.0),
            ty(p.1)
        ));
    }
    out.push_str("</svg>\n");
    out
}
