//! Placement of sparse dots as atoms on the device plane.
//!
//! Lengths are micrometres and frequencies are angular (rad/µs). Use
//! [`mhz_to_rad_per_us`] and [`rad_per_us_to_mhz`] at interface boundaries
//! when a cyclic-frequency value is needed.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SdrError};
use crate::generalization::DotCloud;
use crate::geometry::Point;

pub fn mhz_to_rad_per_us(f: f64) -> f64 {
    TAU * f
}

pub fn rad_per_us_to_mhz(w: f64) -> f64 {
    w / TAU
}

/// Geometry and drive limits of the target device.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HardwareProfile {
    /// µm
    pub area_width: f64,
    /// µm
    pub area_height: f64,
    /// µm
    pub min_spacing: f64,
    pub max_atoms: usize,
    /// Van der Waals coefficient, rad/µs·µm⁶.
    pub c6: f64,
    /// rad/µs
    pub omega_max: f64,
    /// rad/µs
    pub delta_abs_max: f64,
    /// µs
    pub t_max: f64,
}

impl Default for HardwareProfile {
    /// Publicly documented limits of a 256-site neutral-atom analog device.
    fn default() -> Self {
        HardwareProfile {
            area_width: 75.0,
            area_height: 76.0,
            min_spacing: 4.0,
            max_atoms: 256,
            c6: TAU * 862_690.0,
            omega_max: TAU * 2.5,
            delta_abs_max: TAU * 20.0,
            t_max: 4.0,
        }
    }
}

impl HardwareProfile {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("area_width", self.area_width),
            ("area_height", self.area_height),
            ("min_spacing", self.min_spacing),
            ("c6", self.c6),
            ("omega_max", self.omega_max),
            ("delta_abs_max", self.delta_abs_max),
            ("t_max", self.t_max),
        ];
        for (name, v) in fields {
            if !(v > 0.0 && v.is_finite()) {
                return Err(SdrError::invalid(format!("profile.{name} = {v} must be positive")));
            }
        }
        if self.max_atoms == 0 {
            return Err(SdrError::invalid("profile.max_atoms must be >= 1"));
        }
        Ok(())
    }

    /// Blockade radius (c6/Ω)^{1/6} in µm for drive strength `omega`.
    pub fn blockade_radius(&self, omega: f64) -> f64 {
        blockade_radius(self.c6, omega)
    }
}

pub fn blockade_radius(c6: f64, omega: f64) -> f64 {
    (c6 / omega).powf(1.0 / 6.0)
}

/// Atoms on the device plane plus per-site local-detuning weights α_j.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomRegister {
    pub positions: Vec<Point>,
    pub local_scale: Vec<f64>,
    pub profile: HardwareProfile,
    pub provenance: String,
    /// Indices of the source dots merged into each atom.
    pub sources: Vec<Vec<usize>>,
}

impl AtomRegister {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Violation {
    OutOfArea { index: usize, x: f64, y: f64 },
    TooClose { i: usize, j: usize, distance: f64 },
    TooManyAtoms { count: usize, max: usize },
    ScaleCountMismatch { positions: usize, scales: usize },
    ScaleOutOfRange { index: usize, value: f64 },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Violation::OutOfArea { index, x, y } => {
                write!(f, "atom {index} at ({x}, {y}) lies outside the device area")
            }
            Violation::TooClose { i, j, distance } => {
                write!(f, "atoms {i} and {j} are {distance} um apart")
            }
            Violation::TooManyAtoms { count, max } => write!(f, "{count} atoms exceed the limit {max}"),
            Violation::ScaleCountMismatch { positions, scales } => {
                write!(f, "{scales} local scales for {positions} atoms")
            }
            Violation::ScaleOutOfRange { index, value } => {
                write!(f, "local scale {value} of atom {index} outside [0, 1]")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbedOptions {
    /// Uniform α_j for every site.
    pub alpha: f64,
    /// Fail on spacing conflicts instead of merging them.
    pub strict: bool,
}

impl Default for EmbedOptions {
    fn default() -> Self {
        EmbedOptions {
            alpha: 1.0,
            strict: false,
        }
    }
}

fn closest_violation(points: &[Point], min_spacing: f64) -> Option<(usize, usize, f64)> {
    let mut best: Option<(usize, usize, f64)> = None;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d = points[i].dist(points[j]);
            if d < min_spacing && best.map_or(true, |(_, _, bd)| d < bd) {
                best = Some((i, j, d));
            }
        }
    }
    best
}

/// Map a dot cloud onto the device area.
///
/// The cloud's bounding box is centred in the area and scaled uniformly by
/// `min(area_width, area_height)` (divided by the box's larger side when that
/// exceeds 1). Pairs closer than `min_spacing` are merged closest-first into
/// their midpoint, unless `strict` is set.
pub fn embed(cloud: &DotCloud, profile: &HardwareProfile, opts: EmbedOptions) -> Result<AtomRegister> {
    embed_points(&cloud.points, profile, opts, &cloud.source)
}

pub fn embed_points(
    points: &[Point],
    profile: &HardwareProfile,
    opts: EmbedOptions,
    provenance: &str,
) -> Result<AtomRegister> {
    profile.validate()?;
    if points.is_empty() {
        return Err(SdrError::invalid("cannot embed an empty cloud"));
    }
    if points.len() > profile.max_atoms {
        return Err(SdrError::Hardware(format!(
            "{} dots exceed the device limit of {} atoms",
            points.len(),
            profile.max_atoms
        )));
    }
    if !(0.0..=1.0).contains(&opts.alpha) {
        return Err(SdrError::invalid(format!("alpha {} outside [0, 1]", opts.alpha)));
    }

    let (mut minx, mut maxx, mut miny, mut maxy) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for p in points {
        minx = minx.min(p.x);
        maxx = maxx.max(p.x);
        miny = miny.min(p.y);
        maxy = maxy.max(p.y);
    }
    let extent = (maxx - minx).max(maxy - miny);
    let s = profile.area_width.min(profile.area_height) / extent.max(1.0);
    let (cx, cy) = (0.5 * (minx + maxx), 0.5 * (miny + maxy));
    let (ax, ay) = (0.5 * profile.area_width, 0.5 * profile.area_height);
    let mut positions: Vec<Point> = points
        .iter()
        .map(|p| Point::new(ax + (p.x - cx) * s, ay + (p.y - cy) * s))
        .collect();
    let mut sources: Vec<Vec<usize>> = (0..points.len()).map(|i| vec![i]).collect();

    while let Some((i, j, d)) = closest_violation(&positions, profile.min_spacing) {
        if opts.strict {
            return Err(SdrError::Hardware(format!(
                "atoms {i} and {j} are {d:.4} um apart (minimum {} um)",
                profile.min_spacing
            )));
        }
        positions[i] = positions[i].midpoint(positions[j]);
        positions.remove(j);
        let merged = sources.remove(j);
        sources[i].extend(merged);
        sources[i].sort_unstable();
    }
    if points.len() > 2 && positions.len() < 2 {
        return Err(SdrError::Hardware(format!(
            "spacing repair collapsed {} dots into a single atom",
            points.len()
        )));
    }

    let register = AtomRegister {
        local_scale: vec![opts.alpha; positions.len()],
        positions,
        profile: profile.clone(),
        provenance: provenance.to_string(),
        sources,
    };
    let violations = validate(&register);
    if let Some(v) = violations.first() {
        return Err(SdrError::Hardware(v.to_string()));
    }
    Ok(register)
}

/// Every geometric or metadata violation; empty means valid.
pub fn validate(register: &AtomRegister) -> Vec<Violation> {
    let p = &register.profile;
    let mut out = Vec::new();
    if register.positions.len() > p.max_atoms {
        out.push(Violation::TooManyAtoms {
            count: register.positions.len(),
            max: p.max_atoms,
        });
    }
    if register.local_scale.len() != register.positions.len() {
        out.push(Violation::ScaleCountMismatch {
            positions: register.positions.len(),
            scales: register.local_scale.len(),
        });
    }
    for (index, &value) in register.local_scale.iter().enumerate() {
        if !(0.0..=1.0).contains(&value) {
            out.push(Violation::ScaleOutOfRange { index, value });
        }
    }
    for (index, q) in register.positions.iter().enumerate() {
        if !(0.0..=p.area_width).contains(&q.x) || !(0.0..=p.area_height).contains(&q.y) {
            out.push(Violation::OutOfArea { index, x: q.x, y: q.y });
        }
    }
    for i in 0..register.positions.len() {
        for j in i + 1..register.positions.len() {
            let distance = register.positions[i].dist(register.positions[j]);
            if distance < p.min_spacing {
                out.push(Violation::TooClose { i, j, distance });
            }
        }
    }
    out
}

/// Symmetric van der Waals matrix V_jk = c6 / d_jk⁶, zero on the diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionMatrix {
    n: usize,
    data: Vec<f64>,
}

impl InteractionMatrix {
    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.data[j * self.n + k]
    }
}

pub fn interaction_matrix(register: &AtomRegister) -> Result<InteractionMatrix> {
    let n = register.positions.len();
    let c6 = register.profile.c6;
    let mut data = vec![0.0; n * n];
    for j in 0..n {
        for k in j + 1..n {
            let d = register.positions[j].dist(register.positions[k]);
            if d == 0.0 {
                return Err(SdrError::CoincidentAtoms(j, k));
            }
            let v = c6 / d.powi(6);
            data[j * n + k] = v;
            data[k * n + j] = v;
        }
    }
    Ok(InteractionMatrix { n, data })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cloud(pts: &[(f64, f64)]) -> DotCloud {
        DotCloud {
            points: pts.iter().map(|&(x, y)| Point::new(x, y)).collect(),
            source_polyline_ids: vec![0; pts.len()],
            epsilon: 0.0,
            source: "t".into(),
            width: 1,
            height: 1,
        }
    }

    fn register(pts: &[(f64, f64)]) -> AtomRegister {
        AtomRegister {
            positions: pts.iter().map(|&(x, y)| Point::new(x, y)).collect(),
            local_scale: vec![1.0; pts.len()],
            profile: HardwareProfile::default(),
            provenance: String::new(),
            sources: (0..pts.len()).map(|i| vec![i]).collect(),
        }
    }

    #[test]
    fn default_c6() {
        assert!((HardwareProfile::default().c6 - 5_420_441.0).abs() < 1.0);
    }

    #[test]
    fn single_dot_centered() {
        let r = embed(&cloud(&[(0.5, 0.5)]), &HardwareProfile::default(), EmbedOptions::default()).unwrap();
        assert_eq!(r.positions, vec![Point::new(37.5, 38.0)]);
        assert_eq!(r.local_scale, vec![1.0]);
    }

    #[test]
    fn two_dots_scaled_by_short_side() {
        let r = embed(&cloud(&[(0.1, 0.5), (0.9, 0.5)]), &HardwareProfile::default(), EmbedOptions::default()).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r.positions[0].dist(r.positions[1]) - 60.0).abs() < 1e-12);
        assert!(validate(&r).is_empty());
    }

    #[test]
    fn close_pair_merges_to_midpoint() {
        let r = embed(&cloud(&[(0.5, 0.5), (0.51, 0.5)]), &HardwareProfile::default(), EmbedOptions::default()).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r.sources, vec![vec![0, 1]]);
        assert!((r.positions[0].x - 37.5).abs() < 1e-12);
    }

    #[test]
    fn strict_mode_rejects_close_pair() {
        let opts = EmbedOptions { strict: true, ..Default::default() };
        let err = embed(&cloud(&[(0.5, 0.5), (0.51, 0.5)]), &HardwareProfile::default(), opts).unwrap_err();
        assert!(matches!(err, SdrError::Hardware(m) if m.contains("atoms 0 and 1")));
    }

    #[test]
    fn too_many_dots() {
        let p = HardwareProfile { max_atoms: 2, ..Default::default() };
        assert!(matches!(
            embed(&cloud(&[(0.0, 0.0), (0.5, 0.5), (1.0, 1.0)]), &p, EmbedOptions::default()),
            Err(SdrError::Hardware(_))
        ));
    }

    #[test]
    fn cascade_collapse_is_an_error() {
        let c = cloud(&[(0.5, 0.5), (0.51, 0.5), (0.5, 0.51)]);
        assert!(matches!(
            embed(&c, &HardwareProfile::default(), EmbedOptions::default()),
            Err(SdrError::Hardware(_))
        ));
    }

    #[test]
    fn validate_reports() {
        assert!(validate(&register(&[(10.0, 10.0), (20.0, 10.0)])).is_empty());
        assert_eq!(
            validate(&register(&[(80.0, 10.0)])),
            vec![Violation::OutOfArea { index: 0, x: 80.0, y: 10.0 }]
        );
        assert_eq!(
            validate(&register(&[(0.0, 0.0), (2.0, 0.0)])),
            vec![Violation::TooClose { i: 0, j: 1, distance: 2.0 }]
        );
    }

    #[test]
    fn interaction_values() {
        let v4 = interaction_matrix(&register(&[(10.0, 10.0), (14.0, 10.0)])).unwrap();
        // c6 / 4^6 = 5 420 441.02 / 4096
        assert!((v4.get(0, 1) - 1323.35).abs() < 0.01);
        assert_eq!(v4.get(0, 1), v4.get(1, 0));
        assert_eq!(v4.get(0, 0), 0.0);
        let v8 = interaction_matrix(&register(&[(10.0, 10.0), (18.0, 10.0)])).unwrap();
        assert!((v8.get(0, 1) - v4.get(0, 1) / 64.0).abs() < 1e-12);
        let one = interaction_matrix(&register(&[(1.0, 1.0)])).unwrap();
        assert_eq!((one.size(), one.get(0, 0)), (1, 0.0));
        assert!(matches!(
            interaction_matrix(&register(&[(1.0, 1.0), (1.0, 1.0)])),
            Err(SdrError::CoincidentAtoms(0, 1))
        ));
    }

    #[test]
    fn blockade_radius_decreases_with_drive() {
        let p = HardwareProfile::default();
        let mut prev = f64::INFINITY;
        for k in 1..50 {
            let r = p.blockade_radius(k as f64);
            assert!(r < prev);
            prev = r;
        }
        assert!((p.blockade_radius(p.omega_max) - 8.375).abs() < 0.01);
    }
}
