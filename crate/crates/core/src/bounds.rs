//! Right-hand sides of the real-part estimates.
//!
//! Each estimate is `lhs ≤ coefficient · scale`, where the coefficient
//! depends only on the geometry of the disc and the scale is either one of
//! the functionals in [`QVariant`] or the distance from an image point to
//! the boundary of the convex hull of the image domain.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::AnalyticFunction;

/// Default relative pass tolerance.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QVariant {
    /// `sup Re f - Re f(a)`
    SupRe,
    /// `sup |Re f| - |Re f(a)|`
    SupAbsRe,
    /// `sup |f| - |f(a)|`
    SupAbs,
    /// `Re f(a)`, requiring `Re f > 0` on the disc.
    PositiveRe,
}

impl QVariant {
    fn observe(self, w: Complex64) -> f64 {
        match self {
            QVariant::SupRe | QVariant::PositiveRe => w.re,
            QVariant::SupAbsRe => w.re.abs(),
            QVariant::SupAbs => w.norm(),
        }
    }
}

/// Radial exhaustion `r_k = R(1 - 2^{-k})` with angular sampling per circle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupSchedule {
    pub k_first: u32,
    pub k_last: u32,
    /// Exhaustion continues past `k_last` up to here while increments are large.
    pub k_limit: u32,
    pub samples: usize,
    pub tolerance: f64,
}

impl Default for SupSchedule {
    fn default() -> Self {
        Self {
            k_first: 3,
            k_last: 12,
            k_limit: 48,
            samples: 2048,
            tolerance: 1e-7,
        }
    }
}

impl SupSchedule {
    pub fn radius(&self, big_r: f64, k: u32) -> f64 {
        big_r * (1.0 - 0.5f64.powi(k as i32))
    }
}

/// Value of a scale functional with its accuracy diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QValue {
    pub variant: QVariant,
    pub value: f64,
    /// The supremum part (absent for `PositiveRe`).
    pub sup: Option<f64>,
    /// Last increment of the exhaustion or angular refinement.
    pub accuracy: f64,
    /// Set when the circle maxima appear to diverge; `value` is then `+∞`.
    pub infinite: bool,
    pub warnings: Vec<String>,
}

struct CircleMax {
    value: f64,
    refinement: f64,
}

fn circle_max(
    f: &AnalyticFunction,
    radius: f64,
    variant: QVariant,
    schedule: &SupSchedule,
) -> CircleMax {
    use std::f64::consts::PI;
    let n = schedule.samples;
    let step = 2.0 * PI / n as f64;
    let at = |t: f64| variant.observe(f.eval_unchecked(Complex64::from_polar(radius, t)));
    let mut best = (f64::NEG_INFINITY, 0.0);
    for j in 0..n {
        let t = j as f64 * step;
        let v = at(t);
        if v.is_nan() {
            return CircleMax {
                value: f64::INFINITY,
                refinement: f64::INFINITY,
            };
        }
        if v > best.0 {
            best = (v, t);
        }
    }
    let mut seeds = vec![best.1];
    seeds.extend(f.singularities().iter().map(|s| s.arg()));
    let mut value = best.0;
    let mut refinement: f64 = 0.0;
    for seed in seeds {
        let (mut center, mut top) = (seed, at(seed));
        let mut window = step;
        let mut last_gain = f64::INFINITY;
        for _ in 0..40 {
            let mut improved = (top, center);
            for i in 0..=16 {
                let t = center - window + window * i as f64 / 8.0;
                let v = at(t);
                if v > improved.0 {
                    improved = (v, t);
                }
            }
            last_gain = improved.0 - top;
            top = improved.0;
            center = improved.1;
            window *= 0.25;
            if last_gain < schedule.tolerance * (1.0 + top.abs()) && window < step * 1e-3 {
                break;
            }
        }
        if top > value {
            value = top;
        }
        refinement = refinement.max(last_gain);
    }
    CircleMax { value, refinement }
}

/// Scale functional `Q_a(f)` (with `a = 0` it is the Bohr-type functional).
///
/// Suprema over the open disc are limits of circle maxima along the radial
/// schedule. When `f` extends continuously to the closed disc the boundary
/// circle itself is used as the limit.
pub fn q_functional(
    f: &AnalyticFunction,
    a: Complex64,
    variant: QVariant,
    schedule: &SupSchedule,
) -> Result<QValue> {
    let big_r = f.radius();
    if a.norm() >= big_r {
        return Err(Error::OutsideDisc {
            z: a,
            center: Complex64::new(0.0, 0.0),
            radius: big_r,
        });
    }
    let fa = f.eval(a)?;
    let mut warnings = Vec::new();

    if variant == QVariant::PositiveRe {
        let mut radii: Vec<f64> = (schedule.k_first..=schedule.k_last)
            .map(|k| schedule.radius(big_r, k))
            .collect();
        if f.boundary_regular() {
            radii.push(big_r);
        }
        let roots: Vec<Complex64> = (0..schedule.samples)
            .map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / schedule.samples as f64))
            .collect();
        for rho in radii.iter().copied().filter(|&r| r < big_r) {
            let min = roots
                .iter()
                .map(|w| f.eval_unchecked(w * rho).re)
                .fold(f64::INFINITY, f64::min);
            if !(min > 0.0) {
                return Err(Error::HypothesisViolation(format!(
                    "Re f = {min:e} ≤ 0 on |z| = {rho}"
                )));
            }
        }
        if !(fa.re > 0.0) {
            return Err(Error::HypothesisViolation(format!("Re f(a) = {} ≤ 0", fa.re)));
        }
        return Ok(QValue {
            variant,
            value: fa.re,
            sup: None,
            accuracy: 0.0,
            infinite: false,
            warnings,
        });
    }

    let tol = schedule.tolerance;
    let mut maxima: Vec<f64> = Vec::new();
    let mut k = schedule.k_first;
    let converged = |m: &[f64]| {
        if m.len() < 3 {
            return false;
        }
        let last = m[m.len() - 1];
        let d1 = (last - m[m.len() - 2]).abs();
        let d2 = (m[m.len() - 2] - m[m.len() - 3]).abs();
        d1 < tol * (1.0 + last.abs()) && d2 < tol * (1.0 + last.abs())
    };
    loop {
        let cm = circle_max(f, schedule.radius(big_r, k), variant, schedule);
        maxima.push(cm.value);
        if !cm.value.is_finite() {
            break;
        }
        if k >= schedule.k_last && (f.boundary_regular() || converged(&maxima) || k >= schedule.k_limit) {
            break;
        }
        k += 1;
    }
    for w in maxima.windows(2) {
        if w[1] < w[0] - 1e-12 * (1.0 + w[0].abs()) {
            warnings.push(format!(
                "circle maxima decreased from {} to {}; sampling is too coarse",
                w[0], w[1]
            ));
            break;
        }
    }

    let last = *maxima.last().expect("at least one circle");
    let (sup, accuracy, infinite) = if !last.is_finite() {
        (f64::INFINITY, f64::INFINITY, true)
    } else if f.boundary_regular() {
        let cm = circle_max(f, big_r, variant, schedule);
        (cm.value.max(last), cm.refinement, !cm.value.is_finite())
    } else {
        let n = maxima.len();
        let d1 = maxima[n - 1] - maxima[n - 2];
        let d2 = maxima[n - 2] - maxima[n - 3];
        if converged(&maxima) {
            (last, d1.abs(), false)
        } else if d1 >= 0.75 * d2 && d1 > tol * (1.0 + last.abs()) {
            (f64::INFINITY, d1, true)
        } else {
            warnings.push(format!(
                "radial exhaustion did not converge: last increment {d1:e}"
            ));
            (last, d1.abs(), false)
        }
    };
    if infinite {
        warnings.push("supremum appears unbounded".into());
        return Ok(QValue {
            variant,
            value: f64::INFINITY,
            sup: Some(f64::INFINITY),
            accuracy,
            infinite,
            warnings,
        });
    }
    Ok(QValue {
        variant,
        value: sup - variant.observe(fa),
        sup: Some(sup),
        accuracy,
        infinite,
        warnings,
    })
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn check_radii(big_r: f64, r: f64) -> Result<()> {
    if !(big_r > 0.0 && big_r.is_finite()) {
        return Err(Error::param(format!("R must be positive, got {big_r}")));
    }
    if !(r >= 0.0 && r < big_r) {
        return Err(Error::param(format!("need 0 ≤ r < R, got r = {r}, R = {big_r}")));
    }
    Ok(())
}

/// `2·n!·R(R - r_a) / ((R - r)^{n+1}(R + r_a))`.
pub fn deriv_bound_coeff(n: u32, big_r: f64, r: f64, r_a: f64) -> Result<f64> {
    check_radii(big_r, r)?;
    if n < 1 {
        return Err(Error::param("derivative estimates need n ≥ 1"));
    }
    if !(r_a >= 0.0 && r_a <= r) {
        return Err(Error::param(format!("need 0 ≤ r_a ≤ r, got r_a = {r_a}, r = {r}")));
    }
    Ok(2.0 * factorial(n) * big_r * (big_r - r_a) / ((big_r - r).powi(n as i32 + 1) * (big_r + r_a)))
}

/// `2·n!·R / (R - r)^{n+1}`, the `r_a = 0` case.
pub fn centered_deriv_bound_coeff(n: u32, big_r: f64, r: f64) -> Result<f64> {
    check_radii(big_r, r)?;
    if n < 1 {
        return Err(Error::param("derivative estimates need n ≥ 1"));
    }
    Ok(2.0 * factorial(n) * big_r / (big_r - r).powi(n as i32 + 1))
}

/// `2r^m / (R^{m-1}(R^q - r^q)^{1/q})`.
pub fn bohr_coeff(m: u32, q: f64, big_r: f64, r: f64) -> Result<f64> {
    check_radii(big_r, r)?;
    if m < 1 {
        return Err(Error::param("Bohr-type sums start at m ≥ 1"));
    }
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::param(format!("q must be positive, got {q}")));
    }
    Ok(2.0 * r.powi(m as i32) / (big_r.powi(m as i32 - 1) * (big_r.powf(q) - r.powf(q)).powf(1.0 / q)))
}

/// `2Rr / ((2R - d_a)(d_a - r))`.
pub fn recentered_bohr_coeff(big_r: f64, d_a: f64, r: f64) -> Result<f64> {
    if !(big_r > 0.0 && d_a > 0.0 && d_a <= big_r) {
        return Err(Error::param(format!("need 0 < d_a ≤ R, got d_a = {d_a}, R = {big_r}")));
    }
    if !(r >= 0.0 && r < d_a) {
        return Err(Error::param(format!("need 0 ≤ r < d_a, got r = {r}, d_a = {d_a}")));
    }
    Ok(2.0 * big_r * r / ((2.0 * big_r - d_a) * (d_a - r)))
}

/// `2·n!·(R^{n+1} - (R - r)^{n+1}) / ((R - r)^{n+1} R^n)`.
///
/// The difference of powers is expanded as `r·Σ_k R^k (R-r)^{n-k}`, which
/// avoids cancellation for small `r`.
pub fn increment_coeff(n: u32, big_r: f64, r: f64) -> Result<f64> {
    check_radii(big_r, r)?;
    let rest = big_r - r;
    let diff = r * (0..=n as i32)
        .map(|k| big_r.powi(k) * rest.powi(n as i32 - k))
        .sum::<f64>();
    Ok(2.0 * factorial(n) * diff / (rest.powi(n as i32 + 1) * big_r.powi(n as i32)))
}

/// One inequality check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub inequality_id: String,
    /// Corpus entry or family the check was run on.
    pub subject: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub margin: f64,
    pub passed: bool,
    pub parameters: BTreeMap<String, f64>,
    pub warnings: Vec<String>,
}

impl BoundReport {
    pub fn with_subject(mut self, subject: impl Into<String>) -> Self {
        self.subject = subject.into();
        self
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.parameters.insert(key.to_string(), value);
        self
    }

    pub fn with_warnings(mut self, warnings: impl IntoIterator<Item = String>) -> Self {
        self.warnings.extend(warnings);
        self
    }

    pub fn param(&self, key: &str) -> Option<f64> {
        self.parameters.get(key).copied()
    }
}

/// `rhs = rhs_coeff · scale`; passes iff `lhs ≤ rhs·(1 + tolerance)`.
pub fn check_bound(
    inequality_id: &str,
    lhs: f64,
    rhs_coeff: f64,
    scale: f64,
    tolerance: f64,
) -> Result<BoundReport> {
    if !(rhs_coeff >= 0.0) {
        return Err(Error::param(format!("coefficient must be nonnegative, got {rhs_coeff}")));
    }
    if !(scale >= 0.0) {
        return Err(Error::param(format!("scale must be nonnegative, got {scale}")));
    }
    if !(lhs >= 0.0) {
        return Err(Error::param(format!("left-hand side must be nonnegative, got {lhs}")));
    }
    let rhs = rhs_coeff * scale;
    let mut warnings = Vec::new();
    let ratio = if rhs > 0.0 {
        lhs / rhs
    } else if lhs == 0.0 {
        0.0
    } else {
        warnings.push("right-hand side vanishes while the left-hand side does not".to_string());
        f64::INFINITY
    };
    Ok(BoundReport {
        inequality_id: inequality_id.to_string(),
        subject: String::new(),
        lhs,
        rhs,
        ratio,
        margin: rhs - lhs,
        passed: lhs <= rhs * (1.0 + tolerance),
        parameters: BTreeMap::new(),
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn deriv_coefficient_examples() {
        assert_eq!(deriv_bound_coeff(1, 1.0, 0.0, 0.0).unwrap(), 2.0);
        for n in 1..5 {
            let a = deriv_bound_coeff(n, 1.5, 0.7, 0.0).unwrap();
            let b = centered_deriv_bound_coeff(n, 1.5, 0.7).unwrap();
            assert!((a - b).abs() <= 4.0 * f64::EPSILON * b);
        }
        let at_half = deriv_bound_coeff(2, 1.0, 0.5, 0.5).unwrap();
        let at_zero = deriv_bound_coeff(2, 1.0, 0.5, 0.0).unwrap();
        assert!(at_half < at_zero);
        assert!((at_half - 32.0 / 3.0).abs() < 1e-12);
        assert!((at_zero - 32.0).abs() < 1e-12);
        assert!(deriv_bound_coeff(1, 1.0, 0.3, 0.5).is_err());
        assert!(deriv_bound_coeff(1, 1.0, 1.0, 0.0).is_err());
        assert!(deriv_bound_coeff(0, 1.0, 0.5, 0.0).is_err());
    }

    #[test]
    fn bohr_coefficient_examples() {
        for big_r in [0.5, 1.0, 2.0, 7.0] {
            assert!((bohr_coeff(1, 1.0, big_r, big_r / 3.0).unwrap() - 1.0).abs() <= 1e-15);
        }
        assert_eq!(bohr_coeff(1, 1.0, 1.0, 0.0).unwrap(), 0.0);
        let v = bohr_coeff(2, 2.0, 1.0, 0.5).unwrap();
        assert!((v - 0.5 / 0.75f64.sqrt()).abs() < 1e-15);
        assert!((v - 0.577_350_269_189_625_8).abs() < 1e-15);
        assert!(bohr_coeff(1, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn recentered_examples() {
        assert!((recentered_bohr_coeff(1.0, 0.5, 0.25).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(recentered_bohr_coeff(1.0, 0.5, 0.0).unwrap(), 0.0);
        let a = recentered_bohr_coeff(2.0, 2.0, 0.4).unwrap();
        let b = bohr_coeff(1, 1.0, 2.0, 0.4).unwrap();
        assert!((a - b).abs() <= 2.0 * f64::EPSILON * b);
        assert!(recentered_bohr_coeff(1.0, 0.5, 0.5).is_err());
        assert!(recentered_bohr_coeff(1.0, 1.5, 0.5).is_err());
    }

    #[test]
    fn increment_examples() {
        assert!((increment_coeff(1, 1.0, 0.5).unwrap() - 6.0).abs() < 1e-14);
        assert_eq!(increment_coeff(3, 1.0, 0.0).unwrap(), 0.0);
        assert_eq!(increment_coeff(0, 1.0, 0.1).unwrap(), 2.0 * 0.1 / 0.9);
        assert!(increment_coeff(1, 1.0, 1.0).is_err());
        // agrees with the direct formula away from cancellation
        let direct = 2.0 * 6.0 * (1.0 - 0.5f64.powi(4)) / (0.5f64.powi(4) * 1.0);
        assert!((increment_coeff(3, 1.0, 0.5).unwrap() - direct).abs() < 1e-12 * direct);
    }

    #[test]
    fn check_bound_examples() {
        let r = check_bound("deriv", 0.0, 3.0, 2.0, DEFAULT_TOLERANCE).unwrap();
        assert!(r.passed && r.ratio == 0.0 && r.margin == 6.0);
        let r = check_bound("deriv-centered", 1.0, 2.0, 1.0, DEFAULT_TOLERANCE).unwrap();
        assert!(r.passed && r.ratio == 0.5);
        let r = check_bound("deriv", 1.0, 0.0, 1.0, DEFAULT_TOLERANCE).unwrap();
        assert!(!r.passed && r.ratio.is_infinite() && !r.warnings.is_empty());
        let r = check_bound("deriv", 1.0 + 5e-7, 1.0, 1.0, DEFAULT_TOLERANCE).unwrap();
        assert!(r.passed);
        let r = check_bound("deriv", 1.0 + 2e-6, 1.0, 1.0, DEFAULT_TOLERANCE).unwrap();
        assert!(!r.passed);
        assert!(check_bound("deriv", 1.0, -1.0, 1.0, DEFAULT_TOLERANCE).is_err());
    }

    fn entire(label: &str, f: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static) -> AnalyticFunction {
        AnalyticFunction::new(label, 1.0, f).unwrap()
    }

    #[test]
    fn q_functional_examples() {
        let s = SupSchedule::default();
        let one_plus_z = entire("1+z", |z| z + 1.0);
        let q = q_functional(&one_plus_z, c(0.0, 0.0), QVariant::PositiveRe, &s).unwrap();
        assert_eq!(q.value, 1.0);

        let id = entire("z", |z| z);
        let q = q_functional(&id, c(0.0, 0.0), QVariant::SupAbs, &s).unwrap();
        assert!((q.value - 1.0).abs() < 1e-12, "{q:?}");

        let constant = entire("c", |_| c(0.3, -2.0));
        let q = q_functional(&constant, c(0.2, 0.1), QVariant::SupAbsRe, &s).unwrap();
        assert_eq!(q.value, 0.0);

        let q = q_functional(&id, c(0.5, 0.0), QVariant::SupRe, &s).unwrap();
        assert!((q.value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn positivity_violation_is_reported() {
        let id = entire("z", |z| z);
        assert!(matches!(
            q_functional(&id, c(0.1, 0.0), QVariant::PositiveRe, &SupSchedule::default()),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn unbounded_sup_is_flagged() {
        let pole = AnalyticFunction::new("1/(1-z)", 1.0, |z| (c(1.0, 0.0) - z).inv())
            .unwrap()
            .with_singularities([c(1.0, 0.0)])
            .unwrap();
        let q = q_functional(&pole, c(0.0, 0.0), QVariant::SupAbs, &SupSchedule::default()).unwrap();
        assert!(q.infinite && q.value.is_infinite());
    }

    #[test]
    fn bounded_function_with_boundary_singularity_converges() {
        // (1 - z) log-free example: sqrt-type bounded growth handled by exhaustion
        let f = AnalyticFunction::new("1-z", 1.0, |z| c(1.0, 0.0) - z)
            .unwrap()
            .with_singularities([c(1.0, 0.0)])
            .unwrap();
        let q = q_functional(&f, c(0.0, 0.0), QVariant::SupAbs, &SupSchedule::default()).unwrap();
        assert!(!q.infinite);
        assert!((q.value - 1.0).abs() < 1e-6, "{q:?}");
    }

    #[test]
    fn scale_invariance() {
        for lambda in [0.5, 2.0] {
            let (big_r, r, r_a, d_a) = (1.3, 0.6, 0.2, 0.9);
            for n in 1..4 {
                let base = deriv_bound_coeff(n, big_r, r, r_a).unwrap();
                let scaled = deriv_bound_coeff(n, lambda * big_r, lambda * r, lambda * r_a).unwrap();
                assert!((scaled - base * lambda.powi(-(n as i32))).abs() < 1e-13 * base);
                let base = increment_coeff(n, big_r, r).unwrap();
                let scaled = increment_coeff(n, lambda * big_r, lambda * r).unwrap();
                assert!((scaled - base * lambda.powi(-(n as i32))).abs() < 1e-13 * base);
            }
            let base = bohr_coeff(2, 0.5, big_r, r).unwrap();
            assert!((bohr_coeff(2, 0.5, lambda * big_r, lambda * r).unwrap() - base).abs() < 1e-13 * base);
            let base = recentered_bohr_coeff(big_r, d_a, r).unwrap();
            let scaled = recentered_bohr_coeff(lambda * big_r, lambda * d_a, lambda * r).unwrap();
            assert!((scaled - base).abs() < 1e-13 * base);
        }
    }
}
