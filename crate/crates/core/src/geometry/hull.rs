use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::Disc;

/// Relative collinearity tolerance of the monotone chain.
pub const COLLINEAR_TOLERANCE: f64 = 1e-12;

/// Convex polygon with counterclockwise vertices; the chain closes implicitly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolygonHull {
    vertices: Vec<Complex64>,
}

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a - o).re * (b - o).im - (a - o).im * (b - o).re
}

/// Minimal convex polygon containing `points` (Andrew's monotone chain).
pub fn convex_hull(points: &[Complex64]) -> Result<PolygonHull> {
    let mut pts: Vec<Complex64> = points
        .iter()
        .copied()
        .filter(|p| p.re.is_finite() && p.im.is_finite())
        .collect();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() < 3 {
        return Err(Error::DegenerateHull(format!("{} distinct points", pts.len())));
    }
    let extent = pts
        .iter()
        .map(|p| (p - pts[0]).norm())
        .fold(0.0, f64::max);
    let tol = COLLINEAR_TOLERANCE * extent * extent;

    let mut lower: Vec<Complex64> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= tol {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Complex64> = Vec::with_capacity(pts.len());
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= tol {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        return Err(Error::DegenerateHull("all points are collinear".into()));
    }
    Ok(PolygonHull { vertices: lower })
}

impl PolygonHull {
    /// Validates a counterclockwise strictly convex vertex chain.
    pub fn new(vertices: Vec<Complex64>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::DegenerateHull(format!("{} vertices", vertices.len())));
        }
        let n = vertices.len();
        let extent = vertices.iter().map(|p| (p - vertices[0]).norm()).fold(0.0, f64::max);
        let tol = COLLINEAR_TOLERANCE * extent * extent;
        for i in 0..n {
            if cross(vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]) < -tol {
                return Err(Error::InvalidDomain(
                    "polygon vertices are not counterclockwise convex".into(),
                ));
            }
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Complex64] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (Complex64, Complex64)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for a in &self.vertices {
            for b in &self.vertices {
                d = d.max((a - b).norm());
            }
        }
        d
    }

    /// Inside or on the boundary, with the signed-area test relaxed by `slack`.
    pub fn contains(&self, w: Complex64, slack: f64) -> bool {
        self.edges().all(|(a, b)| {
            let len = (b - a).norm();
            cross(a, b, w) >= -slack * len
        })
    }

    /// Nearest boundary point and its distance.
    pub fn nearest_boundary_point(&self, w: Complex64) -> (f64, Complex64) {
        self.edges()
            .map(|(a, b)| {
                let p = closest_on_segment(a, b, w);
                ((w - p).norm(), p)
            })
            .min_by(|x, y| x.0.total_cmp(&y.0))
            .expect("polygon has edges")
    }

    /// Hausdorff distance between the polygon boundary and the circle `∂disc`.
    ///
    /// The polygon side is exact; the circle side is sampled at eight
    /// points per vertex.
    pub fn hausdorff_to_circle(&self, disc: &Disc) -> f64 {
        let c = disc.center();
        let r = disc.radius();
        let mut worst: f64 = 0.0;
        for (a, b) in self.edges() {
            let ends = ((a - c).norm() - r).abs().max(((b - c).norm() - r).abs());
            let foot = (closest_on_segment(a, b, c) - c).norm();
            worst = worst.max(ends).max(r - foot);
        }
        let samples = 8 * self.vertices.len();
        let mut angles: Vec<(f64, usize)> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| ((v - c).arg(), i))
            .collect();
        angles.sort_by(|x, y| x.0.total_cmp(&y.0));
        let n = self.vertices.len();
        for k in 0..samples {
            let t = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / samples as f64;
            let y = c + Complex64::from_polar(r, t);
            let pos = angles.partition_point(|(a, _)| *a < t) % n;
            let anchor = angles[pos].1;
            let mut best = f64::INFINITY;
            for offset in 0..4 {
                let i = (anchor + n + offset - 2) % n;
                let p = closest_on_segment(self.vertices[i], self.vertices[(i + 1) % n], y);
                best = best.min((y - p).norm());
            }
            worst = worst.max(best);
        }
        worst
    }

    /// Vertex list as `x,y` CSV rows with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y\n");
        for v in &self.vertices {
            out.push_str(&format!("{},{}\n", v.re, v.im));
        }
        out
    }
}

pub(crate) fn closest_on_segment(a: Complex64, b: Complex64, w: Complex64) -> Complex64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return a;
    }
    let t = ((w - a) * ab.conj()).re / len2;
    a + ab * t.clamp(0.0, 1.0)
}
