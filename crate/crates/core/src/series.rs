//! Truncated complex power series and holomorphic functions on discs.
//!
//! A [`PowerSeries`] stores `c_0..c_N` around a center together with a
//! [`Tail`] describing what is known about the discarded coefficients.
//! An [`AnalyticFunction`] is a pointwise evaluator on `|z| < R` with
//! declared singular sets, optionally backed by closed-form Taylor
//! coefficients at the origin.
//!
//! Derivatives are available along two independent routes: term-wise
//! differentiation of a series ([`PowerSeries::derivative_value`]) and
//! trapezoidal quadrature of the Cauchy integral ([`cauchy_derivative`]).

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::summation::{self, ComplexNeumaier};

/// Default truncation order for series built by the crate.
pub const DEFAULT_ORDER: usize = 256;
/// Default node count for Cauchy-integral quadrature.
pub const DEFAULT_NODES: usize = 512;
/// Angular samples used when estimating a maximum modulus on a circle.
pub const MAJORANT_SAMPLES: usize = 2048;
/// Relative threshold on `|b_0|` for [`reciprocal`].
pub const RECIPROCAL_THRESHOLD: f64 = 1e-13;

const MAJORANT_CIRCLES: usize = 14;

pub type Evaluator = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;
pub type CoefficientProvider = Arc<dyn Fn(usize) -> Vec<Complex64> + Send + Sync>;

/// Half-line `origin + t·direction`, `t ≥ 0`, on which an evaluator is not analytic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ray {
    pub origin: Complex64,
    pub direction: Complex64,
}

impl Ray {
    pub fn new(origin: Complex64, direction: Complex64) -> Result<Self> {
        let norm = direction.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::param("ray direction must be nonzero"));
        }
        Ok(Self {
            origin,
            direction: direction / norm,
        })
    }

    pub fn distance(&self, z: Complex64) -> f64 {
        let rel = z - self.origin;
        let t = (rel * self.direction.conj()).re;
        if t <= 0.0 {
            rel.norm()
        } else {
            (rel - self.direction * t).norm()
        }
    }
}

/// What is known about the coefficients beyond the truncation order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tail {
    /// All discarded coefficients vanish.
    Exact,
    /// Cauchy estimates `|c_k| ≤ M(σ)/σ^k`, one `(σ, M(σ))` pair per circle.
    Cauchy(Vec<Majorant>),
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Majorant {
    pub radius: f64,
    pub modulus: f64,
}

impl Tail {
    /// Bound on `Σ_{k>N} |c_k| ρ^k`.
    pub fn eval_tail(&self, truncation: usize, rho: f64) -> Option<f64> {
        match self {
            Tail::Exact => Some(0.0),
            Tail::Unknown => None,
            Tail::Cauchy(circles) => best(circles, rho, |m| {
                let t = rho / m.radius;
                m.modulus * t.powi(truncation as i32 + 1) / (1.0 - t)
            }),
        }
    }

    /// Bound on `Σ_{k>N} k!/(k-n)! |c_k| ρ^{k-n}`.
    pub fn derivative_tail(&self, truncation: usize, n: usize, rho: f64) -> Option<f64> {
        match self {
            Tail::Exact => Some(0.0),
            Tail::Unknown => None,
            Tail::Cauchy(circles) => best(circles, rho, |m| {
                derivative_majorant_sum(truncation, n, rho, m.radius, m.modulus)
            }),
        }
    }

    /// Bound on `Σ_{k ≥ max(m, N+1)} (|c_k| r^k)^q`.
    pub fn q_tail(&self, truncation: usize, m: usize, r: f64, q: f64) -> Option<f64> {
        match self {
            Tail::Exact => Some(0.0),
            Tail::Unknown => None,
            Tail::Cauchy(circles) => {
                let start = m.max(truncation + 1) as f64;
                best(circles, r, |c| {
                    let t = (r / c.radius).powf(q);
                    c.modulus.powf(q) * t.powf(start) / (1.0 - t)
                })
            }
        }
    }
}

fn best(circles: &[Majorant], rho: f64, bound: impl Fn(&Majorant) -> f64) -> Option<f64> {
    circles
        .iter()
        .filter(|m| m.radius > rho && m.modulus.is_finite())
        .map(bound)
        .filter(|b| b.is_finite())
        .min_by(|a, b| a.total_cmp(b))
}

fn falling(k: usize, n: usize) -> f64 {
    (0..n).map(|j| (k - j) as f64).product()
}

fn derivative_majorant_sum(truncation: usize, n: usize, rho: f64, sigma: f64, modulus: f64) -> f64 {
    if rho == 0.0 {
        return 0.0;
    }
    let t = rho / sigma;
    let first = truncation + 1;
    let mut term = falling(first, n) * modulus * sigma.powi(-(n as i32)) * t.powi((first - n) as i32);
    let mut acc = summation::Neumaier::new();
    for k in (first..).take(1_000_000) {
        acc.add(term);
        let ratio = (k + 1) as f64 / (k + 1 - n) as f64 * t;
        if ratio < 1.0 && term <= 1e-17 * acc.value() {
            return acc.value() + term * ratio / (1.0 - ratio);
        }
        if !term.is_finite() {
            return f64::INFINITY;
        }
        term *= ratio;
    }
    f64::INFINITY
}

/// Truncated Taylor expansion `Σ c_k (z - center)^k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "SeriesJson", try_from = "SeriesJson")]
pub struct PowerSeries {
    center: Complex64,
    radius: f64,
    coeffs: Vec<Complex64>,
    tail: Tail,
    working_radius: Option<f64>,
}

impl PowerSeries {
    pub fn new(center: Complex64, radius: f64, coeffs: Vec<Complex64>) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::param(format!("validity radius must be positive, got {radius}")));
        }
        if coeffs.is_empty() {
            return Err(Error::param("series needs at least one coefficient"));
        }
        if coeffs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::param("series coefficients must be finite"));
        }
        Ok(Self {
            center,
            radius,
            coeffs,
            tail: Tail::Unknown,
            working_radius: None,
        })
    }

    /// Attaches tail information; `working_radius` is where [`Self::tail_bound`] is reported.
    pub fn with_tail(mut self, tail: Tail, working_radius: Option<f64>) -> Self {
        self.tail = tail;
        self.working_radius = working_radius;
        self
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    pub fn validity_radius(&self) -> f64 {
        self.radius
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Highest stored index `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    pub fn working_radius(&self) -> Option<f64> {
        self.working_radius
    }

    /// Bound on the evaluation error at the working radius, if certified.
    pub fn tail_bound(&self) -> Option<f64> {
        match (&self.tail, self.working_radius) {
            (Tail::Exact, _) => Some(0.0),
            (tail, Some(w)) => tail.eval_tail(self.order(), w),
            _ => None,
        }
    }

    fn check_inside(&self, z: Complex64) -> Result<Complex64> {
        let w = z - self.center;
        if w.norm() < self.radius {
            Ok(w)
        } else {
            Err(Error::OutsideDisc {
                z,
                center: self.center,
                radius: self.radius,
            })
        }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let w = self.check_inside(z)?;
        Ok(horner(&self.coeffs, w))
    }

    /// Certified bound on `|f(z) - eval(z)|`, when the tail is controlled at `|z - center|`.
    pub fn eval_error_bound(&self, z: Complex64) -> Option<f64> {
        self.tail.eval_tail(self.order(), (z - self.center).norm())
    }

    /// n-th derivative of the truncated series.
    pub fn derivative_value(&self, n: usize, z: Complex64) -> Result<Complex64> {
        if n > self.order() {
            return Err(Error::InsufficientTruncation {
                order: n,
                truncation: self.order(),
            });
        }
        let w = self.check_inside(z)?;
        let differentiated: Vec<Complex64> = (n..=self.order())
            .map(|k| self.coeffs[k] * falling(k, n))
            .collect();
        Ok(horner(&differentiated, w))
    }

    /// Bound on the error of [`Self::derivative_value`] at `z`.
    pub fn derivative_error_bound(&self, n: usize, z: Complex64) -> Option<f64> {
        self.tail.derivative_tail(self.order(), n, (z - self.center).norm())
    }

    /// Product truncated to the shorter order.
    pub fn mul_truncated(&self, other: &PowerSeries) -> PowerSeries {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|k| summation::sum_complex((0..=k).map(|j| self.coeffs[j] * other.coeffs[k - j])))
            .collect();
        PowerSeries {
            center: self.center,
            radius: self.radius.min(other.radius),
            coeffs,
            tail: Tail::Unknown,
            working_radius: None,
        }
    }
}

fn horner(coeffs: &[Complex64], w: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * w + c)
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    center: Complex64,
    radius: f64,
    coeffs: Vec<Complex64>,
    tail_bound: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    working_radius: Option<f64>,
    #[serde(default = "unknown_tail")]
    tail: Tail,
}

fn unknown_tail() -> Tail {
    Tail::Unknown
}

impl From<PowerSeries> for SeriesJson {
    fn from(s: PowerSeries) -> Self {
        SeriesJson {
            tail_bound: s.tail_bound(),
            center: s.center,
            radius: s.radius,
            coeffs: s.coeffs,
            working_radius: s.working_radius,
            tail: s.tail,
        }
    }
}

impl TryFrom<SeriesJson> for PowerSeries {
    type Error = Error;

    fn try_from(j: SeriesJson) -> Result<Self> {
        Ok(PowerSeries::new(j.center, j.radius, j.coeffs)?.with_tail(j.tail, j.working_radius))
    }
}

/// Holomorphic function on the disc `|z| < R`.
#[derive(Clone)]
pub struct AnalyticFunction {
    label: String,
    radius: f64,
    evaluator: Evaluator,
    coefficients: Option<CoefficientProvider>,
    polynomial_degree: Option<usize>,
    singularities: Vec<Complex64>,
    cuts: Vec<Ray>,
}

impl fmt::Debug for AnalyticFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticFunction")
            .field("label", &self.label)
            .field("radius", &self.radius)
            .field("singularities", &self.singularities)
            .field("cuts", &self.cuts)
            .field("closed_form_series", &self.coefficients.is_some())
            .finish()
    }
}

impl AnalyticFunction {
    pub fn new(
        label: impl Into<String>,
        radius: f64,
        evaluator: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::param(format!("domain radius must be positive and finite, got {radius}")));
        }
        Ok(Self {
            label: label.into(),
            radius,
            evaluator: Arc::new(evaluator),
            coefficients: None,
            polynomial_degree: None,
            singularities: Vec::new(),
            cuts: Vec::new(),
        })
    }

    /// Declares poles or branch points; each must lie outside the open disc.
    pub fn with_singularities(mut self, points: impl IntoIterator<Item = Complex64>) -> Result<Self> {
        for s in points {
            if s.norm() < self.radius {
                return Err(Error::param(format!(
                    "singularity {s} lies inside the disc of radius {}",
                    self.radius
                )));
            }
            self.singularities.push(s);
        }
        Ok(self)
    }

    /// Declares branch cuts; each must stay outside the open disc.
    pub fn with_cuts(mut self, cuts: impl IntoIterator<Item = Ray>) -> Result<Self> {
        for cut in cuts {
            if cut.distance(Complex64::new(0.0, 0.0)) < self.radius * (1.0 - 1e-12) {
                return Err(Error::param("branch cut enters the disc of holomorphy"));
            }
            self.cuts.push(cut);
        }
        Ok(self)
    }

    /// Closed-form Taylor coefficients at the origin: `provider(N)` returns `c_0..c_N`.
    pub fn with_coefficients(
        mut self,
        provider: impl Fn(usize) -> Vec<Complex64> + Send + Sync + 'static,
    ) -> Self {
        self.coefficients = Some(Arc::new(provider));
        self
    }

    pub fn with_polynomial_degree(mut self, degree: usize) -> Self {
        self.polynomial_degree = Some(degree);
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn singularities(&self) -> &[Complex64] {
        &self.singularities
    }

    pub fn cuts(&self) -> &[Ray] {
        &self.cuts
    }

    pub fn polynomial_degree(&self) -> Option<usize> {
        self.polynomial_degree
    }

    pub fn has_closed_form_series(&self) -> bool {
        self.coefficients.is_some()
    }

    pub(crate) fn evaluator(&self) -> &Evaluator {
        &self.evaluator
    }

    pub(crate) fn coefficient_provider(&self) -> Option<&CoefficientProvider> {
        self.coefficients.as_ref()
    }

    pub(crate) fn from_parts(
        label: String,
        radius: f64,
        evaluator: Evaluator,
        coefficients: Option<CoefficientProvider>,
        polynomial_degree: Option<usize>,
        singularities: Vec<Complex64>,
        cuts: Vec<Ray>,
    ) -> Self {
        Self {
            label,
            radius,
            evaluator,
            coefficients,
            polynomial_degree,
            singularities,
            cuts,
        }
    }

    /// Distance from `z` to the nearest declared singularity or cut.
    pub fn singular_distance(&self, z: Complex64) -> f64 {
        let points = self.singularities.iter().map(|s| (z - s).norm());
        let cuts = self.cuts.iter().map(|c| c.distance(z));
        points.chain(cuts).fold(f64::INFINITY, f64::min)
    }

    /// True when the evaluator extends continuously to the closed disc.
    pub fn boundary_regular(&self) -> bool {
        self.singular_distance(Complex64::new(0.0, 0.0)) > self.radius * (1.0 + 1e-12)
    }

    pub fn eval_unchecked(&self, z: Complex64) -> Complex64 {
        (self.evaluator)(z)
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let scale = 1.0 + z.norm();
        if self.singularities.iter().any(|s| (z - s).norm() <= 1e-14 * scale) {
            return Err(Error::Singularity(z));
        }
        let w = (self.evaluator)(z);
        if w.re.is_finite() && w.im.is_finite() {
            Ok(w)
        } else {
            Err(Error::Evaluation {
                z,
                reason: "non-finite value".into(),
            })
        }
    }

    /// Half the distance from `z` to the nearest singular set or to `|z| = R`.
    pub fn default_contour_radius(&self, z: Complex64) -> Result<f64> {
        let boundary = self.radius - z.norm();
        if !(boundary > 0.0) {
            return Err(Error::OutsideDisc {
                z,
                center: Complex64::new(0.0, 0.0),
                radius: self.radius,
            });
        }
        Ok(0.5 * boundary.min(self.singular_distance(z)))
    }

    /// Sampled maximum modulus on `|ζ - center| = radius`.
    pub fn circle_max_modulus(&self, center: Complex64, radius: f64, samples: usize) -> f64 {
        let twiddles = unit_roots(samples);
        twiddles
            .iter()
            .map(|w| self.eval_unchecked(center + w * radius).norm())
            .fold(0.0, |acc: f64, v| if v.is_nan() { f64::INFINITY } else { acc.max(v) })
    }

    /// Family of Cauchy majorants around `center`, on circles approaching the
    /// nearest singular set (or growing geometrically for entire functions).
    pub fn cauchy_majorants(&self, center: Complex64) -> Tail {
        if self.polynomial_degree.is_some() {
            return Tail::Exact;
        }
        let reach = self.singular_distance(center);
        let radii: Vec<f64> = if reach.is_finite() {
            (1..=MAJORANT_CIRCLES)
                .map(|j| reach * (1.0 - 0.5f64.powi(j as i32)))
                .collect()
        } else {
            let base = self.radius.max(center.norm());
            (0..MAJORANT_CIRCLES)
                .map(|j| base * 2f64.powf(j as f64 / 2.0 - 1.0))
                .collect()
        };
        let circles: Vec<Majorant> = radii
            .into_iter()
            .map(|radius| Majorant {
                radius,
                modulus: self.circle_max_modulus(center, radius, MAJORANT_SAMPLES),
            })
            .filter(|m| m.modulus.is_finite())
            .collect();
        if circles.is_empty() {
            Tail::Unknown
        } else {
            Tail::Cauchy(circles)
        }
    }

    /// Taylor series at the origin, from closed-form coefficients when
    /// available and Cauchy integrals otherwise.
    pub fn taylor(&self, order: usize) -> Result<PowerSeries> {
        let origin = Complex64::new(0.0, 0.0);
        let coeffs = match (&self.coefficients, self.polynomial_degree) {
            (Some(provider), _) => provider(order),
            (None, _) => recenter(self, origin, order)?.coeffs,
        };
        if coeffs.len() != order + 1 {
            return Err(Error::param(format!(
                "coefficient provider for `{}` returned {} coefficients, expected {}",
                self.label,
                coeffs.len(),
                order + 1
            )));
        }
        let tail = match self.polynomial_degree {
            Some(d) if d <= order => Tail::Exact,
            _ => self.cauchy_majorants(origin),
        };
        Ok(PowerSeries::new(origin, self.radius, coeffs)?.with_tail(tail, Some(0.5 * self.radius)))
    }
}

fn unit_roots(nodes: usize) -> Vec<Complex64> {
    (0..nodes)
        .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / nodes as f64))
        .collect()
}

/// n-th derivative at `z` by the trapezoidal rule on `|ζ - z| = contour_radius`.
pub fn cauchy_derivative(
    f: &AnalyticFunction,
    z: Complex64,
    n: usize,
    contour_radius: f64,
    nodes: usize,
) -> Result<Complex64> {
    if !(contour_radius > 0.0 && contour_radius.is_finite()) {
        return Err(Error::param("contour radius must be positive"));
    }
    if nodes < n + 2 || nodes < 8 {
        return Err(Error::param(format!("{nodes} nodes cannot resolve derivative order {n}")));
    }
    let distance = f.singular_distance(z);
    if distance <= contour_radius * (1.0 + 1e-9) {
        return Err(Error::Contour {
            z,
            radius: contour_radius,
            distance,
        });
    }
    let roots = unit_roots(nodes);
    let mut acc = ComplexNeumaier::new();
    for j in 0..nodes {
        let zeta = z + roots[j] * contour_radius;
        let value = f.eval_unchecked(zeta);
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::Evaluation {
                z: zeta,
                reason: "non-finite value on contour".into(),
            });
        }
        acc.add(value * roots[(n * j) % nodes].conj());
    }
    let scale = falling(n, n) / contour_radius.powi(n as i32) / nodes as f64;
    Ok(acc.value() * scale)
}

/// Cauchy derivative with the default contour and node count.
pub fn cauchy_derivative_default(f: &AnalyticFunction, z: Complex64, n: usize) -> Result<Complex64> {
    let radius = f.default_contour_radius(z)?;
    cauchy_derivative(f, z, n, radius, DEFAULT_NODES)
}

/// Series `c` with `b·c = 1` through the truncation order of `b`.
pub fn reciprocal(b: &PowerSeries) -> Result<PowerSeries> {
    let b0 = b.coeffs[0];
    let max = b.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let threshold = RECIPROCAL_THRESHOLD * max;
    if !(b0.norm() >= threshold) || b0.norm() == 0.0 {
        return Err(Error::NearZeroDivisor {
            magnitude: b0.norm(),
            threshold,
        });
    }
    let order = b.order();
    let mut c = Vec::with_capacity(order + 1);
    c.push(b0.inv());
    for n in 1..=order {
        let conv = summation::sum_complex((1..=n).map(|k| b.coeffs[k] * c[n - k]));
        c.push(-conv / b0);
    }
    let radius = zero_free_radius(b);
    PowerSeries::new(b.center, radius, c)
}

// Largest radius on a 64-step grid such that the truncated polynomial has
// winding number zero (no zeros) on every circle up to it. The zero count
// is monotone in the radius, so a zero-free outer circle settles it.
fn zero_free_radius(b: &PowerSeries) -> f64 {
    const STEPS: usize = 64;
    const SAMPLES: usize = 512;
    let roots = unit_roots(SAMPLES);
    let zero_free = |rho: f64| {
        let values: Vec<Complex64> = roots.iter().map(|w| horner(&b.coeffs, w * rho)).collect();
        let floor = values.iter().map(|v| v.norm()).fold(0.0, f64::max) * RECIPROCAL_THRESHOLD;
        if values.iter().any(|v| v.norm() <= floor) {
            return false;
        }
        let turn: f64 = (0..SAMPLES)
            .map(|k| (values[(k + 1) % SAMPLES] / values[k]).arg())
            .sum();
        (turn / (2.0 * PI)).round() == 0.0
    };
    if zero_free(b.radius) {
        return b.radius;
    }
    let mut accepted = 0.0;
    for j in 1..=STEPS {
        let rho = b.radius * j as f64 / STEPS as f64;
        if !zero_free(rho) {
            break;
        }
        accepted = rho;
    }
    if accepted > 0.0 {
        accepted
    } else {
        0.5 * b.radius / STEPS as f64
    }
}

/// Taylor coefficients `c_k(a)` of `f` around `a`, `k = 0..=order`.
///
/// The coefficients come from the discrete Fourier transform of samples on
/// `|ζ - a| = 0.9·d_a` with `d_a = R - |a|`.
pub fn recenter(f: &AnalyticFunction, a: Complex64, order: usize) -> Result<PowerSeries> {
    if a.norm() >= f.radius {
        return Err(Error::OutsideDisc {
            z: a,
            center: Complex64::new(0.0, 0.0),
            radius: f.radius,
        });
    }
    if order < 1 {
        return Err(Error::param("recentering order must be at least 1"));
    }
    let d_a = f.radius - a.norm();
    let contour = 0.9 * d_a.min(f.singular_distance(a));
    let nodes = (4 * (order + 1)).next_power_of_two().max(DEFAULT_NODES);
    let roots = unit_roots(nodes);
    let samples: Vec<Complex64> = roots.iter().map(|w| f.eval_unchecked(a + w * contour)).collect();
    if let Some(bad) = samples.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::Evaluation {
            z: a + roots[bad] * contour,
            reason: "non-finite value on recentering contour".into(),
        });
    }
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut scale = 1.0 / nodes as f64;
    for k in 0..=order {
        let mut acc = ComplexNeumaier::new();
        for (j, v) in samples.iter().enumerate() {
            acc.add(v * roots[(k * j) % nodes].conj());
        }
        coeffs.push(acc.value() * scale);
        scale /= contour;
    }
    let tail = match f.polynomial_degree {
        Some(d) if d <= order => Tail::Exact,
        _ => f.cauchy_majorants(a),
    };
    if let Some(d) = f.polynomial_degree {
        for c in coeffs.iter_mut().skip(d + 1) {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    Ok(PowerSeries::new(a, d_a, coeffs)?.with_tail(tail, Some(contour)))
}

/// Result of [`tail_q_sum`].
#[derive(Clone, Debug, PartialEq)]
pub struct QSum {
    /// `(Σ_{n=m}^{N} |c_n|^q r^{nq})^{1/q}`.
    pub value: f64,
    /// Same with the certified tail bound added inside the power, when known.
    pub upper: Option<f64>,
    /// Bound on the omitted `Σ_{n>N}` part of the q-power sum.
    pub tail: Option<f64>,
    pub warning: Option<String>,
}

impl QSum {
    /// Conservative value: `upper` when certified, otherwise `value`.
    pub fn conservative(&self) -> f64 {
        self.upper.unwrap_or(self.value)
    }
}

pub fn tail_q_sum(series: &PowerSeries, r: f64, m: usize, q: f64) -> Result<QSum> {
    if !(r >= 0.0 && r < series.radius) {
        return Err(Error::param(format!(
            "radius {r} must lie in [0, {}) for the q-sum",
            series.radius
        )));
    }
    if m < 1 {
        return Err(Error::param("q-sum starts at index m ≥ 1"));
    }
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::param(format!("exponent q must be positive, got {q}")));
    }
    let terms: Vec<f64> = if r == 0.0 {
        Vec::new()
    } else {
        let log_r = r.ln();
        series
            .coeffs
            .iter()
            .enumerate()
            .skip(m)
            .filter(|(_, c)| c.norm() > 0.0)
            .map(|(n, c)| (q * (c.norm().ln() + n as f64 * log_r)).exp())
            .collect()
    };
    let partial = summation::sum_nonnegative(terms);
    let tail = if r == 0.0 {
        Some(0.0)
    } else {
        series.tail.q_tail(series.order(), m, r, q)
    };
    let warning = match tail {
        None => Some(format!("tail of the q-sum at r = {r} is not controlled")),
        Some(t) if t > 1e-6 * partial && t > 0.0 => Some(format!(
            "tail bound {t:e} exceeds 1e-6 of the partial sum {partial:e}"
        )),
        _ => None,
    };
    Ok(QSum {
        value: partial.powf(1.0 / q),
        upper: tail.map(|t| (partial + t).powf(1.0 / q)),
        tail,
        warning,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeSource {
    Series,
    Cauchy,
}

/// A derivative value with its cross-check against the other route.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeEstimate {
    pub value: Complex64,
    pub source: DerivativeSource,
    pub series_value: Option<Complex64>,
    pub cauchy_value: Complex64,
    /// `|series - cauchy|` when both routes were available.
    pub discrepancy: Option<f64>,
    pub warnings: Vec<String>,
}

/// Derivative oracle pairing a function with its Taylor series at the origin.
#[derive(Clone, Debug)]
pub struct Differentiator {
    function: AnalyticFunction,
    series: PowerSeries,
}

/// Certified series tails below this (relative) level take precedence over quadrature.
const SERIES_PREFERENCE: f64 = 1e-10;
/// Cross-check tolerance between the two routes.
pub const ORACLE_TOLERANCE: f64 = 1e-8;

impl Differentiator {
    pub fn new(function: AnalyticFunction, order: usize) -> Result<Self> {
        let series = function.taylor(order)?;
        Ok(Self { function, series })
    }

    pub fn from_series(function: AnalyticFunction, series: PowerSeries) -> Self {
        Self { function, series }
    }

    pub fn function(&self) -> &AnalyticFunction {
        &self.function
    }

    pub fn series(&self) -> &PowerSeries {
        &self.series
    }

    pub fn derivative(&self, n: usize, z: Complex64) -> Result<DerivativeEstimate> {
        let cauchy_value = cauchy_derivative_default(&self.function, z, n)?;
        let mut warnings = Vec::new();
        let series_value = match self.series.derivative_value(n, z) {
            Ok(v) => Some(v),
            Err(e) => {
                warnings.push(format!("series route unavailable: {e}"));
                None
            }
        };
        let certified = series_value.and_then(|v| {
            self.series
                .derivative_error_bound(n, z)
                .filter(|b| *b <= SERIES_PREFERENCE * (1.0 + v.norm()))
                .map(|_| v)
        });
        let discrepancy = series_value.map(|v| (v - cauchy_value).norm());
        let (value, source) = match certified {
            Some(v) => {
                if discrepancy.unwrap_or(0.0) > ORACLE_TOLERANCE * (1.0 + v.norm()) {
                    warnings.push(format!(
                        "series and Cauchy routes disagree by {:e}",
                        discrepancy.unwrap_or(0.0)
                    ));
                }
                (v, DerivativeSource::Series)
            }
            None => (cauchy_value, DerivativeSource::Cauchy),
        };
        Ok(DerivativeEstimate {
            value,
            source,
            series_value,
            cauchy_value,
            discrepancy,
            warnings,
        })
    }

    /// `|f^{(n)}(z) - f^{(n)}(0)|`.
    pub fn increment(&self, n: usize, z: Complex64) -> Result<f64> {
        if z == Complex64::new(0.0, 0.0) {
            return Ok(0.0);
        }
        let at_z = self.derivative(n, z)?;
        let at_0 = self.derivative(n, Complex64::new(0.0, 0.0))?;
        Ok((at_z.value - at_0.value).norm())
    }
}

/// `|f^{(n)}(z) - f^{(n)}(0)|` for a single query.
pub fn increment_lhs(f: &AnalyticFunction, n: usize, z: Complex64) -> Result<f64> {
    if z.norm() >= f.radius() {
        return Err(Error::OutsideDisc {
            z,
            center: Complex64::new(0.0, 0.0),
            radius: f.radius(),
        });
    }
    Differentiator::new(f.clone(), DEFAULT_ORDER)?.increment(n, z)
}
