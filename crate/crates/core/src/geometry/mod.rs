//! Planar image domains and their convex hulls.
//!
//! Canonical domains (disc, half-plane, strip, crescent) are handled in
//! closed form; a sampled boundary falls back to a polygonal hull. All
//! distances are unsigned distances to the boundary of the convex hull.

mod hull;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use hull::{convex_hull, PolygonHull, COLLINEAR_TOLERANCE};

const BOUNDARY_TOLERANCE: f64 = 1e-9;
const CONTAINMENT_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Disc {
    center: Complex64,
    radius: f64,
}

impl Disc {
    pub fn new(center: Complex64, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidDomain(format!("disc radius must be positive, got {radius}")));
        }
        Ok(Self { center, radius })
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn contains(&self, w: Complex64, slack: f64) -> bool {
        (w - self.center).norm() < self.radius + slack
    }

    pub fn boundary_samples(&self, n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|k| self.center + Complex64::from_polar(self.radius, 2.0 * PI * k as f64 / n as f64))
            .collect()
    }

    fn nearest_boundary_point(&self, w: Complex64) -> (f64, Complex64) {
        let rel = w - self.center;
        let norm = rel.norm();
        let dir = if norm > 0.0 { rel / norm } else { Complex64::new(1.0, 0.0) };
        ((self.radius - norm).abs(), self.center + dir * self.radius)
    }
}

/// `{w : Re(conj(n)·w) < offset}` with outward unit normal `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfPlane {
    unit_normal: Complex64,
    offset: f64,
}

fn unit(normal: Complex64) -> Result<(Complex64, f64)> {
    let norm = normal.norm();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::InvalidDomain("normal must be nonzero".into()));
    }
    Ok((normal / norm, norm))
}

impl HalfPlane {
    /// Normalizes `normal`, rescaling `offset` so the set is unchanged.
    pub fn new(normal: Complex64, offset: f64) -> Result<Self> {
        let (unit_normal, norm) = unit(normal)?;
        Ok(Self {
            unit_normal,
            offset: offset / norm,
        })
    }

    pub fn unit_normal(&self) -> Complex64 {
        self.unit_normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn level(&self, w: Complex64) -> f64 {
        (self.unit_normal.conj() * w).re
    }

    pub fn contains(&self, w: Complex64, slack: f64) -> bool {
        self.level(w) < self.offset + slack
    }

    fn nearest_boundary_point(&self, w: Complex64) -> (f64, Complex64) {
        let gap = self.offset - self.level(w);
        (gap.abs(), w + self.unit_normal * gap)
    }
}

/// `{w : low < Re(conj(n)·w) < high}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Strip {
    unit_normal: Complex64,
    low: f64,
    high: f64,
}

impl Strip {
    pub fn new(normal: Complex64, low: f64, high: f64) -> Result<Self> {
        let (unit_normal, norm) = unit(normal)?;
        if !(low < high) {
            return Err(Error::InvalidDomain(format!("strip needs low < high, got {low} and {high}")));
        }
        Ok(Self {
            unit_normal,
            low: low / norm,
            high: high / norm,
        })
    }

    pub fn unit_normal(&self) -> Complex64 {
        self.unit_normal
    }

    pub fn low(&self) -> f64 {
        self.low
    }

    pub fn high(&self) -> f64 {
        self.high
    }

    pub fn width(&self) -> f64 {
        self.high - self.low
    }

    pub fn level(&self, w: Complex64) -> f64 {
        (self.unit_normal.conj() * w).re
    }

    pub fn contains(&self, w: Complex64, slack: f64) -> bool {
        let s = self.level(w);
        s > self.low - slack && s < self.high + slack
    }

    fn nearest_boundary_point(&self, w: Complex64) -> (f64, Complex64) {
        let s = self.level(w);
        let to_high = self.high - s;
        let to_low = s - self.low;
        if to_high.abs() <= to_low.abs() {
            (to_high.abs(), w + self.unit_normal * to_high)
        } else {
            (to_low.abs(), w - self.unit_normal * to_low)
        }
    }
}

/// Region between two internally tangent discs: `outer ∩ (closure of inner)ᶜ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrescentDomain {
    outer: Disc,
    inner: Disc,
}

impl CrescentDomain {
    pub fn new(outer: Disc, inner: Disc) -> Result<Self> {
        let gap = (outer.center - inner.center).norm();
        if !(inner.radius < outer.radius) {
            return Err(Error::InvalidDomain("inner disc must be smaller than the outer disc".into()));
        }
        if (gap + inner.radius - outer.radius).abs() > 1e-12 * outer.radius {
            return Err(Error::InvalidDomain(format!(
                "discs are not internally tangent: |Δcenter| + r_inner - r_outer = {:e}",
                gap + inner.radius - outer.radius
            )));
        }
        Ok(Self { outer, inner })
    }

    pub fn outer(&self) -> Disc {
        self.outer
    }

    pub fn inner(&self) -> Disc {
        self.inner
    }

    pub fn tangency_point(&self) -> Complex64 {
        let dir = self.inner.center - self.outer.center;
        self.outer.center + dir / dir.norm() * self.outer.radius
    }

    pub fn contains(&self, w: Complex64, slack: f64) -> bool {
        self.outer.contains(w, slack) && (w - self.inner.center).norm() > self.inner.radius - slack
    }

    /// Boundary samples distributed by arc length over both circles.
    pub fn boundary_samples(&self, n: usize) -> Vec<Complex64> {
        let total = self.outer.radius + self.inner.radius;
        let n_outer = ((n as f64) * self.outer.radius / total).round() as usize;
        let mut pts = self.outer.boundary_samples(n_outer);
        pts.extend(self.inner.boundary_samples(n - n_outer));
        pts
    }
}

/// Builds `U ∩ U₁ᶜ`, where `U₁` has half the radius of `U` and touches `∂U`
/// internally at the point antipodal to `zeta0`.
pub fn build_crescent(u: Disc, zeta0: Complex64) -> Result<CrescentDomain> {
    let rel = zeta0 - u.center;
    let off = (rel.norm() - u.radius).abs();
    if off > BOUNDARY_TOLERANCE * u.radius {
        return Err(Error::NotOnBoundary {
            point: zeta0,
            distance: off,
        });
    }
    let dir = rel / rel.norm();
    let inner = Disc::new(u.center - dir * (0.5 * u.radius), 0.5 * u.radius)?;
    CrescentDomain::new(u, inner)
}

/// Planar image domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "lowercase")]
pub enum Domain {
    Disc(Disc),
    HalfPlane(HalfPlane),
    Strip(Strip),
    Crescent(CrescentDomain),
    /// Closed polygonal boundary; `spacing` is the largest gap between consecutive samples.
    Sampled { boundary: Vec<Complex64>, spacing: f64 },
    Polygon(PolygonHull),
}

/// Distance from a point to the hull boundary, with a realizing boundary point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HullDistance {
    pub distance: f64,
    pub nearest: Complex64,
    /// True when the query point lies outside the hull.
    pub outside: bool,
}

impl Domain {
    pub fn sampled(boundary: Vec<Complex64>) -> Result<Self> {
        if boundary.len() < 3 {
            return Err(Error::InvalidDomain("sampled boundary needs at least 3 points".into()));
        }
        let n = boundary.len();
        let spacing = (0..n)
            .map(|i| (boundary[(i + 1) % n] - boundary[i]).norm())
            .fold(0.0, f64::max);
        Ok(Domain::Sampled { boundary, spacing })
    }

    /// Re-checks variant invariants (used after deserialization).
    pub fn validate(&self) -> Result<()> {
        match self {
            Domain::Disc(d) => Disc::new(d.center, d.radius).map(|_| ()),
            Domain::HalfPlane(h) => {
                if (h.unit_normal.norm() - 1.0).abs() > 1e-12 {
                    Err(Error::InvalidDomain("half-plane normal must have modulus 1".into()))
                } else {
                    Ok(())
                }
            }
            Domain::Strip(s) => {
                if (s.unit_normal.norm() - 1.0).abs() > 1e-12 {
                    Err(Error::InvalidDomain("strip normal must have modulus 1".into()))
                } else {
                    Strip::new(s.unit_normal, s.low, s.high).map(|_| ())
                }
            }
            Domain::Crescent(c) => CrescentDomain::new(c.outer, c.inner).map(|_| ()),
            Domain::Sampled { boundary, spacing } => {
                if boundary.len() < 3 || !(*spacing > 0.0) {
                    Err(Error::InvalidDomain("sampled boundary needs ≥ 3 points and positive spacing".into()))
                } else {
                    convex_hull(boundary).map(|_| ())
                }
            }
            Domain::Polygon(p) => PolygonHull::new(p.vertices().to_vec()).map(|_| ()),
        }
    }

    /// Bounded hulls and the half-plane/strip variants all have `G̃ ≠ ℂ`.
    pub fn hull_is_proper(&self) -> bool {
        true
    }

    /// Characteristic length used to scale tolerances.
    pub fn scale(&self) -> f64 {
        match self {
            Domain::Disc(d) => d.radius,
            Domain::HalfPlane(h) => 1.0 + h.offset.abs(),
            Domain::Strip(s) => s.width(),
            Domain::Crescent(c) => c.outer.radius,
            Domain::Sampled { boundary, .. } => bbox_diameter(boundary),
            Domain::Polygon(p) => p.diameter(),
        }
    }

    /// Membership with absolute slack `slack · scale()`.
    pub fn contains(&self, w: Complex64, slack: f64) -> bool {
        let tol = slack * self.scale();
        match self {
            Domain::Disc(d) => d.contains(w, tol),
            Domain::HalfPlane(h) => h.contains(w, tol),
            Domain::Strip(s) => s.contains(w, tol),
            Domain::Crescent(c) => c.contains(w, tol),
            Domain::Sampled { boundary, .. } => point_in_polygon(boundary, w),
            Domain::Polygon(p) => p.contains(w, tol),
        }
    }

    /// True when `disc ⊂ self`, up to relative slack.
    pub fn contains_disc(&self, disc: &Disc) -> bool {
        let tol = CONTAINMENT_SLACK * self.scale();
        let (c, r) = (disc.center, disc.radius);
        match self {
            Domain::Disc(d) => (c - d.center).norm() + r <= d.radius + tol,
            Domain::HalfPlane(h) => h.level(c) + r <= h.offset + tol,
            Domain::Strip(s) => s.level(c) - r >= s.low - tol && s.level(c) + r <= s.high + tol,
            Domain::Crescent(cr) => {
                (c - cr.outer.center).norm() + r <= cr.outer.radius + tol
                    && (c - cr.inner.center).norm() >= r + cr.inner.radius - tol
            }
            Domain::Sampled { boundary, .. } => {
                point_in_polygon(boundary, c) && polyline_distance(boundary, c) >= r - tol
            }
            Domain::Polygon(p) => p.contains(c, tol) && p.nearest_boundary_point(c).0 >= r - tol,
        }
    }
}

fn bbox_diameter(points: &[Complex64]) -> f64 {
    let (mut lo, mut hi) = (points[0], points[0]);
    for p in points {
        lo = Complex64::new(lo.re.min(p.re), lo.im.min(p.im));
        hi = Complex64::new(hi.re.max(p.re), hi.im.max(p.im));
    }
    (hi - lo).norm()
}

fn point_in_polygon(boundary: &[Complex64], w: Complex64) -> bool {
    let n = boundary.len();
    let mut inside = false;
    for i in 0..n {
        let a = boundary[i];
        let b = boundary[(i + 1) % n];
        if (a.im > w.im) != (b.im > w.im) {
            let x = a.re + (w.im - a.im) / (b.im - a.im) * (b.re - a.re);
            if w.re < x {
                inside = !inside;
            }
        }
    }
    inside
}

fn polyline_distance(boundary: &[Complex64], w: Complex64) -> f64 {
    let n = boundary.len();
    (0..n)
        .map(|i| (w - hull::closest_on_segment(boundary[i], boundary[(i + 1) % n], w)).norm())
        .fold(f64::INFINITY, f64::min)
}

/// Convex hull `G̃` of a domain.
pub fn hull_of_domain(d: &Domain) -> Result<Domain> {
    Ok(match d {
        Domain::Disc(_) | Domain::HalfPlane(_) | Domain::Strip(_) | Domain::Polygon(_) => d.clone(),
        Domain::Crescent(c) => Domain::Disc(c.outer),
        Domain::Sampled { boundary, .. } => Domain::Polygon(convex_hull(boundary)?),
    })
}

/// Distance from `w` to `∂G̃` and a boundary point realizing it.
pub fn dist_to_hull_boundary(w: Complex64, d: &Domain) -> Result<HullDistance> {
    let hull = hull_of_domain(d)?;
    let (distance, nearest) = match &hull {
        Domain::Disc(disc) => disc.nearest_boundary_point(w),
        Domain::HalfPlane(h) => h.nearest_boundary_point(w),
        Domain::Strip(s) => s.nearest_boundary_point(w),
        Domain::Polygon(p) => p.nearest_boundary_point(w),
        Domain::Crescent(_) | Domain::Sampled { .. } => unreachable!("hull is canonical"),
    };
    Ok(HullDistance {
        distance,
        nearest,
        outside: !hull.contains(w, 0.0),
    })
}

/// Supporting half-plane of `G̃` whose boundary line passes through `p`.
///
/// At polygon vertices the normal bisects the two adjacent edge normals.
pub fn support_halfplane_at(d: &Domain, p: Complex64) -> Result<HalfPlane> {
    let hull = hull_of_domain(d)?;
    let tol = BOUNDARY_TOLERANCE * hull.scale();
    let off_boundary = |distance: f64| Error::NotOnBoundary { point: p, distance };
    match &hull {
        Domain::Disc(disc) => {
            let rel = p - disc.center;
            let gap = (rel.norm() - disc.radius).abs();
            if gap > tol {
                return Err(off_boundary(gap));
            }
            let n = rel / rel.norm();
            Ok(HalfPlane {
                unit_normal: n,
                offset: (n.conj() * p).re,
            })
        }
        Domain::HalfPlane(h) => {
            let gap = (h.offset - h.level(p)).abs();
            if gap > tol {
                return Err(off_boundary(gap));
            }
            Ok(*h)
        }
        Domain::Strip(s) => {
            let level = s.level(p);
            if (level - s.high).abs() <= tol {
                Ok(HalfPlane {
                    unit_normal: s.unit_normal,
                    offset: s.high,
                })
            } else if (level - s.low).abs() <= tol {
                Ok(HalfPlane {
                    unit_normal: -s.unit_normal,
                    offset: -s.low,
                })
            } else {
                Err(off_boundary((level - s.high).abs().min((level - s.low).abs())))
            }
        }
        Domain::Polygon(poly) => {
            let verts = poly.vertices();
            let n = verts.len();
            let edge_normal = |i: usize| {
                let e = verts[(i + 1) % n] - verts[i];
                Complex64::new(e.im, -e.re) / e.norm()
            };
            if let Some(i) = verts.iter().position(|v| (v - p).norm() <= tol) {
                let bis = edge_normal((i + n - 1) % n) + edge_normal(i);
                let normal = bis / bis.norm();
                return Ok(HalfPlane {
                    unit_normal: normal,
                    offset: (normal.conj() * verts[i]).re,
                });
            }
            let (dist, _) = poly.nearest_boundary_point(p);
            if dist > tol {
                return Err(off_boundary(dist));
            }
            let i = (0..n)
                .min_by(|&a, &b| {
                    let da = (p - hull::closest_on_segment(verts[a], verts[(a + 1) % n], p)).norm();
                    let db = (p - hull::closest_on_segment(verts[b], verts[(b + 1) % n], p)).norm();
                    da.total_cmp(&db)
                })
                .expect("polygon has edges");
            let normal = edge_normal(i);
            Ok(HalfPlane {
                unit_normal: normal,
                offset: (normal.conj() * verts[i]).re,
            })
        }
        Domain::Crescent(_) | Domain::Sampled { .. } => unreachable!("hull is canonical"),
    }
}

/// Default inward search radii `scale·2^{-k}`, `k = 1..=20`.
pub fn default_search_radii(d: &Domain) -> Vec<f64> {
    let base = match d {
        Domain::HalfPlane(_) => 1.0,
        Domain::Sampled { .. } | Domain::Polygon(_) => 0.5 * d.scale(),
        _ => d.scale(),
    };
    (1..=20).map(|k| base * 0.5f64.powi(k)).collect()
}

/// Searches for a disc `D′ ⊂ d` with `p ∈ ∂D′`, centered on the inward
/// normal at `p`. `None` means the search failed, not that no disc exists.
pub fn regular_convexity_certificate(d: &Domain, p: Complex64, search_radii: &[f64]) -> Option<Disc> {
    let support = support_halfplane_at(d, p).ok()?;
    search_radii.iter().find_map(|&radius| {
        let disc = Disc::new(p - support.unit_normal * radius, radius).ok()?;
        d.contains_disc(&disc).then_some(disc)
    })
}
