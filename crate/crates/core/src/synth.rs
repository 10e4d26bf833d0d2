//! Vector silhouettes for fixtures and resolution tests.
//!
//! Shapes live in the unit square with y pointing down. A shape is a list of
//! layers painted in order: solid layers darken the pixels they cover, hole
//! layers restore the background. Pixels are sampled at their centres, so the
//! same shape can be rasterized at any size.

use crate::error::Result;
use crate::imaging::GrayImage;

pub const BACKGROUND: u8 = 255;
pub const FOREGROUND: u8 = 0;

#[derive(Debug, Clone, PartialEq)]
pub enum Geom {
    Polygon(Vec<(f64, f64)>),
    Circle { cx: f64, cy: f64, r: f64 },
}

impl Geom {
    fn contains(&self, x: f64, y: f64) -> bool {
        match self {
            Geom::Circle { cx, cy, r } => (x - cx).powi(2) + (y - cy).powi(2) <= r * r,
            Geom::Polygon(v) => {
                // Even-odd crossing test.
                let mut inside = false;
                let mut j = v.len() - 1;
                for i in 0..v.len() {
                    let (xi, yi) = v[i];
                    let (xj, yj) = v[j];
                    if (yi > y) != (yj > y) && x < (xj - xi) * (y - yi) / (yj - yi) + xi {
                        inside = !inside;
                    }
                    j = i;
                }
                inside
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub solid: bool,
    pub geom: Geom,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Shape {
    pub name: &'static str,
    pub layers: Vec<Layer>,
}

impl Shape {
    pub fn covers(&self, x: f64, y: f64) -> bool {
        let mut on = false;
        for l in &self.layers {
            if l.geom.contains(x, y) {
                on = l.solid;
            }
        }
        on
    }

    /// Dark silhouette on a white `size`×`size` canvas.
    pub fn rasterize(&self, size: usize) -> Result<GrayImage> {
        let mut img = GrayImage::filled(size, size, BACKGROUND)?;
        let s = size as f64;
        for y in 0..size {
            for x in 0..size {
                if self.covers((x as f64 + 0.5) / s, (y as f64 + 0.5) / s) {
                    img.set(x, y, FOREGROUND);
                }
            }
        }
        Ok(img)
    }
}

fn solid(geom: Geom) -> Layer {
    Layer { solid: true, geom }
}

fn hole(geom: Geom) -> Layer {
    Layer { solid: false, geom }
}

fn poly(pts: &[(f64, f64)]) -> Geom {
    Geom::Polygon(pts.to_vec())
}

fn circle(cx: f64, cy: f64, r: f64) -> Geom {
    Geom::Circle { cx, cy, r }
}

fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Geom {
    poly(&[(x0, y0), (x1, y0), (x1, y1), (x0, y1)])
}

/// Rectangle of the given length and width along the segment a→b.
fn bar(a: (f64, f64), b: (f64, f64), width: f64) -> Geom {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len = (dx * dx + dy * dy).sqrt();
    let (nx, ny) = (-dy / len * width / 2.0, dx / len * width / 2.0);
    poly(&[
        (a.0 + nx, a.1 + ny),
        (b.0 + nx, b.1 + ny),
        (b.0 - nx, b.1 - ny),
        (a.0 - nx, a.1 - ny),
    ])
}

fn regular(cx: f64, cy: f64, r: f64, n: usize, phase: f64) -> Geom {
    let pts: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let a = phase + std::f64::consts::TAU * k as f64 / n as f64;
            (cx + r * a.cos(), cy + r * a.sin())
        })
        .collect();
    Geom::Polygon(pts)
}

pub fn triangle() -> Shape {
    Shape {
        name: "triangle",
        layers: vec![solid(poly(&[(0.5, 0.15), (0.86, 0.8), (0.14, 0.8)]))],
    }
}

/// The built-in tool and object silhouettes, sorted by name. The plain
/// [`triangle`] is kept separate.
pub fn silhouettes() -> Vec<Shape> {
    let mut v = vec![
        Shape {
            name: "arrow",
            layers: vec![solid(poly(&[
                (0.15, 0.42), (0.55, 0.42), (0.55, 0.25), (0.85, 0.5),
                (0.55, 0.75), (0.55, 0.58), (0.15, 0.58),
            ]))],
        },
        Shape {
            name: "bolt",
            layers: vec![
                solid(rect(0.3, 0.15, 0.7, 0.32)),
                solid(rect(0.42, 0.32, 0.58, 0.8)),
                solid(poly(&[(0.42, 0.8), (0.58, 0.8), (0.5, 0.88)])),
                hole(poly(&[(0.58, 0.45), (0.52, 0.5), (0.58, 0.55)])),
                hole(poly(&[(0.58, 0.6), (0.52, 0.65), (0.58, 0.7)])),
            ],
        },
        Shape {
            name: "bracket",
            layers: vec![
                solid(poly(&[(0.2, 0.15), (0.38, 0.15), (0.38, 0.66), (0.82, 0.66), (0.82, 0.84), (0.2, 0.84)])),
                hole(circle(0.29, 0.35, 0.045)),
            ],
        },
        Shape {
            name: "cup",
            layers: vec![
                solid(circle(0.66, 0.5, 0.17)),
                hole(circle(0.66, 0.5, 0.1)),
                solid(poly(&[(0.15, 0.2), (0.65, 0.2), (0.6, 0.82), (0.2, 0.82)])),
            ],
        },
        Shape {
            name: "hammer",
            layers: vec![
                solid(poly(&[(0.15, 0.18), (0.7, 0.18), (0.85, 0.26), (0.7, 0.34), (0.15, 0.34)])),
                solid(rect(0.38, 0.34, 0.5, 0.86)),
            ],
        },
        Shape {
            name: "house",
            layers: vec![
                solid(poly(&[(0.5, 0.12), (0.86, 0.45), (0.78, 0.45), (0.78, 0.86), (0.22, 0.86), (0.22, 0.45), (0.14, 0.45)])),
                hole(rect(0.43, 0.62, 0.57, 0.86)),
            ],
        },
        Shape {
            name: "key",
            layers: vec![
                solid(circle(0.28, 0.5, 0.15)),
                solid(rect(0.4, 0.45, 0.86, 0.55)),
                solid(rect(0.7, 0.55, 0.75, 0.66)),
                solid(rect(0.79, 0.55, 0.86, 0.62)),
            ],
        },
        Shape {
            name: "nut",
            layers: vec![solid(regular(0.5, 0.5, 0.36, 6, 0.0)), hole(circle(0.5, 0.5, 0.1))],
        },
        Shape {
            name: "pliers",
            layers: vec![
                solid(poly(&[(0.5, 0.12), (0.58, 0.4), (0.5, 0.5), (0.42, 0.4)])),
                solid(bar((0.47, 0.45), (0.25, 0.87), 0.08)),
                solid(bar((0.53, 0.45), (0.75, 0.87), 0.08)),
            ],
        },
        Shape {
            name: "screwdriver",
            layers: vec![
                solid(rect(0.12, 0.4, 0.45, 0.6)),
                solid(rect(0.45, 0.47, 0.78, 0.53)),
                solid(poly(&[(0.78, 0.45), (0.88, 0.5), (0.78, 0.55)])),
            ],
        },
        Shape {
            name: "star",
            layers: vec![solid(Geom::Polygon(
                (0..10)
                    .map(|k| {
                        let r = if k % 2 == 0 { 0.38 } else { 0.16 };
                        let a = -std::f64::consts::FRAC_PI_2 + std::f64::consts::PI * k as f64 / 5.0;
                        (0.5 + r * a.cos(), 0.52 + r * a.sin())
                    })
                    .collect(),
            ))],
        },
        Shape {
            name: "wrench",
            layers: vec![
                solid(bar((0.3, 0.3), (0.72, 0.72), 0.1)),
                solid(circle(0.26, 0.26, 0.13)),
                hole(bar((0.1, 0.1), (0.26, 0.26), 0.09)),
                solid(circle(0.75, 0.75, 0.1)),
            ],
        },
    ];
    v.sort_by_key(|s| s.name);
    v
}

pub fn by_name(name: &str) -> Option<Shape> {
    silhouettes().into_iter().find(|s| s.name == name)
}
