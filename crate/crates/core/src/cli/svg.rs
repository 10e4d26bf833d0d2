//! Plain SVG scatter plots.
//!
//! Density plots shade each atom on a 256-step gray ramp: a Rydberg density
//! ρ in [0, 1] is drawn with gray level `255 - round(255·ρ)`, so ground-state
//! atoms are white and fully excited atoms are black.

use std::fmt::Write;

use crate::geometry::Point;

const SIZE: f64 = 512.0;

/// Gray level for a density on the 256-step ramp.
pub fn gray_level(density: f64) -> u8 {
    255 - (255.0 * density.clamp(0.0, 1.0)).round() as u8
}

fn header(title: &str, w: f64, h: f64) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{:.0}" viewBox="0 0 {w} {h}">"#,
        SIZE * h / w
    );
    let _ = writeln!(s, "<title>{}</title>", escape(title));
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white" stroke="black" stroke-width="{}"/>"#, w / 400.0);
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// One black circle per dot on the unit square.
pub fn dots_svg(points: &[Point], title: &str) -> String {
    let mut s = header(title, 1.0, 1.0);
    for p in points {
        let _ = writeln!(s, r#"<circle cx="{:.6}" cy="{:.6}" r="0.012" fill="black"/>"#, p.x, p.y);
    }
    s.push_str("</svg>\n");
    s
}

/// Atoms in micrometres over the device area, shaded by density.
pub fn density_svg(positions: &[Point], densities: &[f64], area: (f64, f64), title: &str) -> String {
    let (w, h) = area;
    let r = 1.2;
    let mut s = header(title, w, h);
    for (p, &d) in positions.iter().zip(densities) {
        let g = gray_level(d);
        let _ = writeln!(
            s,
            r#"<circle cx="{:.4}" cy="{:.4}" r="{r}" fill="rgb({g},{g},{g})" stroke="black" stroke-width="0.2"><title>{:.6}</title></circle>"#,
            p.x, p.y, d
        );
    }
    s.push_str("</svg>\n");
    s
}
