//! Extremal families and the sharpness sweeps built on them.
//!
//! * `g_ξ(z) = ξ/(z - ξ) + |ξ|²/(|ξ|² - R²)` maps the disc `|z| < R` onto
//!   the disc `|w| < ρR/(ρ² - R²)`, `ρ = |ξ|`; as `ρ ↓ R` it approaches
//!   equality in the derivative and increment estimates.
//! * The crescent map `F(ψ) = 1 / (ln(ψ - p)/(4aπ) - i/(2a))` sends the
//!   half-plane `H + p` onto the crescent between `|z - ai| = a` and
//!   `|z - 2ai| = 2a`; its expansion on `|ψ| < |p|` feeds the Bohr-type
//!   sweep.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    bohr_coeff, deriv_bound_coeff, increment_coeff, q_functional, QVariant, SupSchedule,
};
use crate::complex::{format_complex, wrap_angle};
use crate::error::{Error, Result};
use crate::geometry::{dist_to_hull_boundary, CrescentDomain, Disc, Domain};
use crate::series::{reciprocal, tail_q_sum, AnalyticFunction, Differentiator, PowerSeries, Ray, DEFAULT_ORDER};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GxiParams {
    pub xi: Complex64,
    pub radius: f64,
}

impl GxiParams {
    pub fn new(xi: Complex64, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::param(format!("R must be positive, got {radius}")));
        }
        if !(xi.norm() > radius) {
            return Err(Error::param(format!("need |ξ| > R, got |ξ| = {}, R = {radius}", xi.norm())));
        }
        Ok(Self { xi, radius })
    }

    /// Radius of the image disc `g_ξ(𝒟_R)`.
    pub fn image_radius(&self) -> f64 {
        let rho = self.xi.norm();
        rho * self.radius / (rho * rho - self.radius * self.radius)
    }

    fn shift(&self) -> f64 {
        let rho2 = self.xi.norm_sqr();
        rho2 / (rho2 - self.radius * self.radius)
    }
}

pub fn g_xi(params: GxiParams) -> Result<AnalyticFunction> {
    let GxiParams { xi, radius } = GxiParams::new(params.xi, params.radius)?;
    let shift = params.shift();
    let f = AnalyticFunction::new(
        format!("g_xi(xi={}, R={radius})", format_complex(xi)),
        radius,
        move |z| xi / (z - xi) + shift,
    )?
    .with_singularities([xi])?
    .with_coefficients(move |n| {
        let inv = xi.inv();
        let mut out = Vec::with_capacity(n + 1);
        out.push(Complex64::new(shift - 1.0, 0.0));
        let mut power = Complex64::new(1.0, 0.0);
        for _ in 1..=n {
            power *= inv;
            out.push(-power);
        }
        out
    });
    Ok(f)
}

/// `w ↦ e^{iφ}·α·w + c` applied to function values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineTransform {
    pub scale: f64,
    pub shift: Complex64,
    pub phase: f64,
}

impl AffineTransform {
    pub fn new(scale: f64, shift: Complex64, phase: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::param(format!("homothety factor must be positive, got {scale}")));
        }
        Ok(Self { scale, shift, phase })
    }

    pub fn identity() -> Self {
        Self {
            scale: 1.0,
            shift: Complex64::new(0.0, 0.0),
            phase: 0.0,
        }
    }

    pub fn apply(&self, w: Complex64) -> Complex64 {
        Complex64::from_polar(self.scale, self.phase) * w + self.shift
    }
}

pub fn apply_transform(f: &AnalyticFunction, t: AffineTransform) -> AnalyticFunction {
    let factor = Complex64::from_polar(t.scale, t.phase);
    let shift = t.shift;
    let inner = f.evaluator().clone();
    let evaluator = std::sync::Arc::new(move |z: Complex64| factor * inner(z) + shift);
    let coefficients = f.coefficient_provider().cloned().map(|provider| {
        std::sync::Arc::new(move |n: usize| {
            let mut c = provider(n);
            for v in c.iter_mut() {
                *v *= factor;
            }
            c[0] += shift;
            c
        }) as crate::series::CoefficientProvider
    });
    AnalyticFunction::from_parts(
        format!("{}·{} + {}", format_complex(factor), f.label(), format_complex(shift)),
        f.radius(),
        evaluator,
        coefficients,
        f.polynomial_degree(),
        f.singularities().to_vec(),
        f.cuts().to_vec(),
    )
}

/// Phase `φ ∈ (-π, π]` with `e^{iφ}·w` a positive multiple of `direction`.
pub fn choose_phase(w: Complex64, direction: Complex64) -> Result<f64> {
    if w.norm() == 0.0 || direction.norm() == 0.0 {
        return Err(Error::UndefinedPhase);
    }
    Ok(wrap_angle(direction.arg() - w.arg()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrescentMapParams {
    pub a: f64,
    pub p: Complex64,
}

impl Default for CrescentMapParams {
    fn default() -> Self {
        Self {
            a: 1.0,
            p: Complex64::new(0.0, -1.0),
        }
    }
}

impl CrescentMapParams {
    /// Checks `a > 0`, `Im p < 0`, `|p + 1| > |p|`, and that the expansion
    /// disc `|ψ| < |p|` stays in `H + p` away from the logarithm's cut.
    pub fn new(a: f64, p: Complex64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::param(format!("crescent scale a must be positive, got {a}")));
        }
        if !(p.im < 0.0) {
            return Err(Error::param(format!("need Im p < 0, got p = {}", format_complex(p))));
        }
        if !((p + 1.0).norm() > p.norm()) {
            return Err(Error::param("need |p + 1| > |p|"));
        }
        let radius = p.norm() * (1.0 - 1e-9);
        for k in 0..4096 {
            let psi = Complex64::from_polar(radius, 2.0 * PI * k as f64 / 4096.0);
            if (psi - p).im <= 0.0 {
                return Err(Error::param(format!(
                    "expansion disc |ψ| < |p| leaves the half-plane H + p (crosses the logarithm's cut) for p = {}",
                    format_complex(p)
                )));
            }
        }
        Ok(Self { a, p })
    }

    pub fn expansion_radius(&self) -> f64 {
        self.p.norm()
    }

    /// The crescent `G = D₁ᶜ ∩ D₂` with `D₁ = disc(ai, a)`, `D₂ = disc(2ai, 2a)`.
    pub fn domain(&self) -> CrescentDomain {
        let a = self.a;
        CrescentDomain::new(
            Disc::new(Complex64::new(0.0, 2.0 * a), 2.0 * a).expect("positive radius"),
            Disc::new(Complex64::new(0.0, a), a).expect("positive radius"),
        )
        .expect("discs are tangent at the origin")
    }

    fn denominator(&self, psi: Complex64) -> Complex64 {
        (psi - self.p).ln() / (4.0 * self.a * PI) - Complex64::new(0.0, 0.5 / self.a)
    }
}

/// Taylor series of `ln(ψ - p)/(4aπ) - i/(2a)` at `ψ = 0`.
pub fn crescent_denominator_series(params: CrescentMapParams, order: usize) -> Result<PowerSeries> {
    let CrescentMapParams { a, p } = params;
    let scale = 1.0 / (4.0 * a * PI);
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push((-p).ln() * scale - Complex64::new(0.0, 0.5 / a));
    let inv = p.inv();
    let mut power = Complex64::new(1.0, 0.0);
    for n in 1..=order {
        power *= inv;
        coeffs.push(-power * (scale / n as f64));
    }
    PowerSeries::new(Complex64::new(0.0, 0.0), p.norm(), coeffs)
}

fn crescent_reciprocal(params: CrescentMapParams, order: usize) -> Result<Vec<Complex64>> {
    let b = crescent_denominator_series(params, order)?;
    Ok(reciprocal(&b)?.coeffs().to_vec())
}

/// The crescent map `F` on `|ψ| < |p|`, principal logarithm.
pub fn crescent_f(params: CrescentMapParams) -> Result<AnalyticFunction> {
    let params = CrescentMapParams::new(params.a, params.p)?;
    let label = format!("crescent_F(a={}, p={})", params.a, format_complex(params.p));
    let f = AnalyticFunction::new(label, params.expansion_radius(), move |psi| {
        let den = params.denominator(psi);
        if den.norm() < 1e-300 {
            Complex64::new(f64::NAN, f64::NAN)
        } else {
            den.inv()
        }
    })?
    .with_singularities([params.p])?
    .with_cuts([Ray::new(params.p, Complex64::new(-1.0, 0.0))?])?
    .with_coefficients(move |n| crescent_reciprocal(params, n).unwrap_or_else(|_| vec![Complex64::new(f64::NAN, 0.0); n + 1]));
    Ok(f)
}

/// Expansion of `F` on `|ψ| < |p|` from the reciprocal recurrence, with
/// Cauchy tail majorants sampled from `F` itself.
pub fn crescent_coefficients(params: CrescentMapParams, order: usize) -> Result<PowerSeries> {
    if order < 1 {
        return Err(Error::param("crescent expansion order must be at least 1"));
    }
    let f = crescent_f(params)?;
    let coeffs = crescent_reciprocal(params, order)?;
    let tail = f.cauchy_majorants(Complex64::new(0.0, 0.0));
    Ok(PowerSeries::new(Complex64::new(0.0, 0.0), params.expansion_radius(), coeffs)?
        .with_tail(tail, Some(0.5 * params.expansion_radius())))
}

/// `4aπ / (|p|^n·|ln(-p) - i/(2a)|)`, the closed form claimed for `|c_n|`.
pub fn claimed_coefficient_modulus(params: CrescentMapParams, n: usize) -> f64 {
    let CrescentMapParams { a, p } = params;
    let den = (-p).ln() - Complex64::new(0.0, 0.5 / a);
    4.0 * a * PI / (p.norm().powi(n as i32) * den.norm())
}

/// One row comparing the recurrence coefficient against the claimed closed form.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoefficientDiscrepancy {
    pub n: usize,
    pub recurrence_abs: f64,
    pub claimed_abs: f64,
    /// `claimed_abs / recurrence_abs`.
    pub ratio: f64,
}

pub fn coefficient_discrepancy(params: CrescentMapParams, order: usize) -> Result<Vec<CoefficientDiscrepancy>> {
    let series = crescent_coefficients(params, order)?;
    Ok((1..=order)
        .map(|n| {
            let recurrence_abs = series.coeffs()[n].norm();
            let claimed_abs = claimed_coefficient_modulus(params, n);
            CoefficientDiscrepancy {
                n,
                recurrence_abs,
                claimed_abs,
                ratio: claimed_abs / recurrence_abs,
            }
        })
        .collect())
}

/// Where the evaluation points sit relative to the pole `ξ = ρ > 0`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    /// `z = r`, `a = r_a`, on the ray through the pole.
    #[default]
    Aligned,
    /// `z = -r`, `a = -r_a`.
    Opposite,
}

impl Placement {
    fn sign(self) -> f64 {
        match self {
            Placement::Aligned => 1.0,
            Placement::Opposite => -1.0,
        }
    }
}

/// Target disc `D′` touching the hull boundary at `touch` (the regular point of convexity).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscTarget {
    pub disc: Disc,
    pub touch: Complex64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub family: String,
    /// `n` for derivative and increment sweeps, `m` for the Bohr sweep.
    pub order: u32,
    pub q: Option<f64>,
    pub radius: f64,
    pub r: f64,
    pub r_a: Option<f64>,
    pub rho_or_p: String,
    pub lhs: f64,
    pub scale: f64,
    pub rhs_coeff: f64,
    pub ratio: f64,
    pub flagged: bool,
    pub warnings: Vec<String>,
}

/// Derivative-estimate sweep along `ρ/R` for the `g_ξ` family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DerivSweep {
    pub n: u32,
    pub radius: f64,
    pub r: f64,
    pub r_a: f64,
    /// Values of `ρ/R`, each `> 1`.
    pub schedule: Vec<f64>,
    pub placement: Placement,
    pub target: Option<DiscTarget>,
}

impl Default for DerivSweep {
    fn default() -> Self {
        Self {
            n: 2,
            radius: 1.0,
            r: 0.5,
            r_a: 0.25,
            schedule: vec![1.1, 1.01, 1.001],
            placement: Placement::Aligned,
            target: None,
        }
    }
}

fn validate_schedule(schedule: &[f64]) -> Result<()> {
    if schedule.is_empty() {
        return Err(Error::param("sweep schedule is empty"));
    }
    if let Some(bad) = schedule.iter().find(|f| !(**f > 1.0 && f.is_finite())) {
        return Err(Error::param(format!("schedule values ρ/R must exceed 1, got {bad}")));
    }
    Ok(())
}

fn flagged_row(mut row: SweepRow, err: Error) -> SweepRow {
    row.flagged = true;
    row.lhs = f64::NAN;
    row.scale = f64::NAN;
    row.ratio = f64::NAN;
    row.warnings.push(err.to_string());
    row
}

fn sort_descending_rho(rows: &mut [SweepRow], rhos: &[f64]) -> Vec<SweepRow> {
    let mut idx: Vec<usize> = (0..rows.len()).collect();
    idx.sort_by(|&a, &b| rhos[b].total_cmp(&rhos[a]));
    idx.into_iter().map(|i| rows[i].clone()).collect()
}

pub fn sharpness_sweep_deriv(sweep: &DerivSweep) -> Result<Vec<SweepRow>> {
    validate_schedule(&sweep.schedule)?;
    let rhs_coeff = deriv_bound_coeff(sweep.n, sweep.radius, sweep.r, sweep.r_a)?;
    let sign = sweep.placement.sign();
    let z = Complex64::new(sign * sweep.r, 0.0);
    let a = Complex64::new(sign * sweep.r_a, 0.0);
    let rhos: Vec<f64> = sweep.schedule.iter().map(|f| f * sweep.radius).collect();
    let mut rows: Vec<SweepRow> = rhos
        .par_iter()
        .map(|&rho| {
            let family = match sweep.target {
                Some(_) => "g_xi_transformed",
                None => "g_xi",
            };
            let row = SweepRow {
                family: family.to_string(),
                order: sweep.n,
                q: None,
                radius: sweep.radius,
                r: sweep.r,
                r_a: Some(sweep.r_a),
                rho_or_p: rho.to_string(),
                lhs: 0.0,
                scale: 0.0,
                rhs_coeff,
                ratio: 0.0,
                flagged: false,
                warnings: Vec::new(),
            };
            match deriv_row(sweep, rho, z, a) {
                Ok((lhs, scale, warnings)) => SweepRow {
                    lhs,
                    scale,
                    ratio: lhs / (rhs_coeff * scale),
                    warnings,
                    ..row
                },
                Err(e) => flagged_row(row, e),
            }
        })
        .collect();
    Ok(sort_descending_rho(&mut rows, &rhos))
}

fn deriv_row(sweep: &DerivSweep, rho: f64, z: Complex64, a: Complex64) -> Result<(f64, f64, Vec<String>)> {
    let params = GxiParams::new(Complex64::new(rho, 0.0), sweep.radius)?;
    let g = g_xi(params)?;
    let q = q_functional(&g, a, QVariant::SupAbs, &SupSchedule::default())?;
    let mut warnings = q.warnings.clone();
    match sweep.target {
        None => {
            let d = Differentiator::new(g, DEFAULT_ORDER)?.derivative(sweep.n as usize, z)?;
            warnings.extend(d.warnings);
            Ok((d.value.norm(), q.value, warnings))
        }
        Some(target) => {
            let beta = q.sup.unwrap_or(params.image_radius());
            let scale = target.disc.radius() / beta;
            let preimage = (target.touch - target.disc.center()) / scale;
            let phase = choose_phase(g.eval(a)?, preimage)?;
            let t = AffineTransform::new(scale, target.disc.center(), phase)?;
            let gt = apply_transform(&g, t);
            let dist = dist_to_hull_boundary(gt.eval(a)?, &Domain::Disc(target.disc))?;
            if (dist.nearest - target.touch).norm() > 1e-9 * target.disc.radius() {
                warnings.push("distance is not realized at the touching point".into());
            }
            let d = Differentiator::new(gt, DEFAULT_ORDER)?.derivative(sweep.n as usize, z)?;
            warnings.extend(d.warnings);
            Ok((d.value.norm(), dist.distance, warnings))
        }
    }
}

/// Increment-estimate sweep for the `g_ξ` family with `z = r` on the pole's ray.
pub fn sharpness_sweep_increment(n: u32, radius: f64, r: f64, schedule: &[f64]) -> Result<Vec<SweepRow>> {
    validate_schedule(schedule)?;
    let rhs_coeff = increment_coeff(n, radius, r)?;
    let z = Complex64::new(r, 0.0);
    let rhos: Vec<f64> = schedule.iter().map(|f| f * radius).collect();
    let mut rows: Vec<SweepRow> = rhos
        .par_iter()
        .map(|&rho| {
            let row = SweepRow {
                family: "g_xi".to_string(),
                order: n,
                q: None,
                radius,
                r,
                r_a: None,
                rho_or_p: rho.to_string(),
                lhs: 0.0,
                scale: 0.0,
                rhs_coeff,
                ratio: 0.0,
                flagged: false,
                warnings: Vec::new(),
            };
            let computed = (|| -> Result<(f64, f64, Vec<String>)> {
                let g = g_xi(GxiParams::new(Complex64::new(rho, 0.0), radius)?)?;
                let q = q_functional(&g, Complex64::new(0.0, 0.0), QVariant::SupAbs, &SupSchedule::default())?;
                let lhs = Differentiator::new(g, DEFAULT_ORDER)?.increment(n as usize, z)?;
                Ok((lhs, q.value, q.warnings))
            })();
            match computed {
                Ok((lhs, scale, warnings)) => SweepRow {
                    lhs,
                    scale,
                    ratio: lhs / (rhs_coeff * scale),
                    warnings,
                    ..row
                },
                Err(e) => flagged_row(row, e),
            }
        })
        .collect();
    Ok(sort_descending_rho(&mut rows, &rhos))
}

/// Empirical lower bound for the best Bohr-type constant from the crescent map.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BohrSweep {
    /// `lhs / dist(c₀, ∂G̃)` from the truncated sum; never exceeds the true ratio.
    pub lower_bound: f64,
    /// The theoretical coefficient at the same `(m, q, R, r)`.
    pub coefficient: f64,
    /// `lower_bound / coefficient`.
    pub gap_ratio: f64,
    pub row: SweepRow,
}

pub fn sharpness_sweep_bohr(m: u32, q: f64, r_fraction: f64, params: CrescentMapParams) -> Result<BohrSweep> {
    sharpness_sweep_bohr_with_order(m, q, r_fraction, params, DEFAULT_ORDER)
}

pub fn sharpness_sweep_bohr_with_order(
    m: u32,
    q: f64,
    r_fraction: f64,
    params: CrescentMapParams,
    order: usize,
) -> Result<BohrSweep> {
    if !(r_fraction > 0.0 && r_fraction < 1.0) {
        return Err(Error::param(format!("r_fraction must lie in (0, 1), got {r_fraction}")));
    }
    let params = CrescentMapParams::new(params.a, params.p)?;
    let radius = params.expansion_radius();
    let r = r_fraction * radius;
    let series = crescent_coefficients(params, order)?;
    let sum = tail_q_sum(&series, r, m as usize, q)?;
    let c0 = series.coeffs()[0];
    let scale = dist_to_hull_boundary(c0, &Domain::Crescent(params.domain()))?.distance;
    let coefficient = bohr_coeff(m, q, radius, r)?;
    let lower_bound = sum.value / scale;
    let row = SweepRow {
        family: "crescent".to_string(),
        order: m,
        q: Some(q),
        radius,
        r,
        r_a: None,
        rho_or_p: format_complex(params.p),
        lhs: sum.value,
        scale,
        rhs_coeff: coefficient,
        ratio: lower_bound / coefficient,
        flagged: false,
        warnings: sum.warning.into_iter().collect(),
    };
    Ok(BohrSweep {
        lower_bound,
        coefficient,
        gap_ratio: lower_bound / coefficient,
        row,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{cauchy_derivative_default, DEFAULT_NODES};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn g_xi_examples() {
        let g = g_xi(GxiParams::new(c(2.0, 0.0), 1.0).unwrap()).unwrap();
        assert!((g.eval(c(0.0, 0.0)).unwrap() - c(1.0 / 3.0, 0.0)).norm() < 1e-15);
        assert!(matches!(g.eval(c(2.0, 0.0)), Err(Error::Singularity(_))));
        assert!(GxiParams::new(c(1.0, 0.0), 1.0).is_err());
    }

    #[test]
    fn g_xi_derivative_closed_form() {
        let g = g_xi(GxiParams::new(c(2.0, 0.0), 1.0).unwrap()).unwrap();
        let s = g.taylor(64).unwrap();
        let d = s.derivative_value(1, c(0.0, 0.0)).unwrap();
        // d/dz ξ/(z-ξ) = -ξ/(z-ξ)²
        assert!((d - c(-0.5, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn g_rho_blows_up_at_fixed_negative_point() {
        let x = c(-0.5, 0.0);
        let mut last = f64::NEG_INFINITY;
        for factor in [1.1, 1.01, 1.001, 1.0001] {
            let g = g_xi(GxiParams::new(c(factor, 0.0), 1.0).unwrap()).unwrap();
            let first = c(factor, 0.0) / (x - factor);
            assert!(first.re < 0.0 && first.norm() < 1.0);
            let v = g.eval(x).unwrap().re;
            assert!(v > last);
            last = v;
        }
        assert!(last > 1000.0);
        let g = g_xi(GxiParams::new(c(1.01, 0.0), 1.0).unwrap()).unwrap();
        assert!(g.eval(x).unwrap().re > 0.0 && g.eval(c(-0.25, 0.0)).unwrap().re > 0.0);
    }

    #[test]
    fn g_xi_image_is_centered_disc() {
        let params = GxiParams::new(c(1.3, 0.4), 1.0).unwrap();
        let g = g_xi(params).unwrap();
        let beta = params.image_radius();
        for k in 0..256 {
            let w = g.eval(Complex64::from_polar(1.0 - 1e-9, 2.0 * PI * k as f64 / 256.0)).unwrap();
            assert!((w.norm() - beta).abs() < 1e-6 * beta);
        }
    }

    #[test]
    fn transform_examples() {
        let g = g_xi(GxiParams::new(c(2.0, 0.0), 1.0).unwrap()).unwrap();
        let same = apply_transform(&g, AffineTransform::identity());
        let rotated = apply_transform(&g, AffineTransform::new(1.0, c(0.0, 0.0), 1.234).unwrap());
        for k in 0..64 {
            let z = Complex64::from_polar(0.9, k as f64 * 0.1);
            assert_eq!(same.eval(z).unwrap(), g.eval(z).unwrap());
            assert!((rotated.eval(z).unwrap().norm() - g.eval(z).unwrap().norm()).abs() <= 1e-15 * (1.0 + g.eval(z).unwrap().norm()));
        }
        let beta = 2.0 / 3.0;
        let t = AffineTransform::new(3.0, c(1.0, -2.0), 0.7).unwrap();
        let moved = apply_transform(&g, t);
        for k in 0..512 {
            let z = Complex64::from_polar(0.999, 2.0 * PI * k as f64 / 512.0);
            assert!((moved.eval(z).unwrap() - c(1.0, -2.0)).norm() < 3.0 * beta);
        }
        // transformed closed-form series stays consistent with the evaluator
        let s = moved.taylor(80).unwrap();
        let z = c(0.3, -0.2);
        assert!((s.eval(z).unwrap() - moved.eval(z).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn phase_examples() {
        assert!((choose_phase(c(1.0, 0.0), c(0.0, 1.0)).unwrap() - PI / 2.0).abs() < 1e-15);
        assert!((choose_phase(c(-3.0, 0.0), c(1.0, 0.0)).unwrap() - PI).abs() < 1e-15);
        assert!(matches!(choose_phase(c(0.0, 0.0), c(1.0, 0.0)), Err(Error::UndefinedPhase)));
        for (w, d) in [(c(0.3, -2.0), c(-1.0, 0.5)), (c(-1.0, -1.0), c(2.0, 3.0))] {
            let phi = choose_phase(w, d).unwrap();
            let rotated = Complex64::from_polar(1.0, phi) * w;
            assert!(wrap_angle(rotated.arg() - d.arg()).abs() < 1e-12);
        }
    }

    #[test]
    fn crescent_center_value_and_distance() {
        let params = CrescentMapParams::default();
        let f = crescent_f(params).unwrap();
        let c0 = f.eval(c(0.0, 0.0)).unwrap();
        assert!((c0 - c(0.0, 8.0 / 3.0)).norm() < 1e-12);
        let d = dist_to_hull_boundary(c0, &Domain::Crescent(params.domain())).unwrap();
        assert!((d.distance - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn crescent_scales_with_a() {
        for a in [0.5, 2.0] {
            let f = crescent_f(CrescentMapParams::new(a, c(0.0, -1.0)).unwrap()).unwrap();
            assert!((f.eval(c(0.0, 0.0)).unwrap() - c(0.0, 8.0 * a / 3.0)).norm() < 1e-12 * a);
        }
    }

    #[test]
    fn crescent_image_lies_in_crescent() {
        let params = CrescentMapParams::default();
        let f = crescent_f(params).unwrap();
        let g = Domain::Crescent(params.domain());
        for i in 0..25 {
            for k in 0..40 {
                let z = Complex64::from_polar(0.999 * i as f64 / 24.0, 2.0 * PI * k as f64 / 40.0);
                assert!(g.contains(f.eval(z).unwrap(), 1e-12), "{z}");
            }
        }
    }

    #[test]
    fn crescent_inverts_forward_chain() {
        let params = CrescentMapParams::default();
        let a = params.a;
        let f = crescent_f(params).unwrap();
        let g = params.domain();
        let mut worst: f64 = 0.0;
        let mut count = 0;
        for i in 1..60 {
            for k in 0..60 {
                let zeta = c(-4.0 + 8.0 * k as f64 / 59.0, 4.0 * i as f64 / 60.0);
                let clear = (zeta - g.outer().center()).norm() < g.outer().radius() - 0.05
                    && (zeta - g.inner().center()).norm() > g.inner().radius() + 0.05;
                if !clear {
                    continue;
                }
                // forward chain: 1/ζ, shift, exponential, translation
                let w = zeta.inv() + c(0.0, 0.5 / a);
                let omega = (w * (4.0 * a * PI)).exp();
                let psi = omega + params.p;
                worst = worst.max((f.eval_unchecked(psi) - zeta).norm());
                count += 1;
            }
        }
        assert!(count > 300);
        assert!(worst < 1e-10, "{worst}");
    }

    #[test]
    fn crescent_params_validation() {
        assert!(CrescentMapParams::new(0.0, c(0.0, -1.0)).is_err());
        assert!(CrescentMapParams::new(1.0, c(0.0, 1.0)).is_err());
        assert!(CrescentMapParams::new(1.0, c(1.0, -1.0)).is_err());
        assert!(CrescentMapParams::new(1.0, c(0.0, -3.0)).is_ok());
    }

    #[test]
    fn crescent_coefficients_match_cauchy() {
        let params = CrescentMapParams::default();
        let f = crescent_f(params).unwrap();
        let s = crescent_coefficients(params, 32).unwrap();
        assert_eq!(s.coeffs()[0], f.eval(c(0.0, 0.0)).unwrap());
        let mut fact = 1.0;
        for n in 1..=8 {
            fact *= n as f64;
            let oracle = crate::series::cauchy_derivative(&f, c(0.0, 0.0), n, 0.5, DEFAULT_NODES).unwrap() / fact;
            let err = (s.coeffs()[n] - oracle).norm();
            assert!(err <= 1e-8 * (1.0 + oracle.norm()), "n = {n}: {err:e}");
        }
        let d3 = cauchy_derivative_default(&f, c(0.0, 0.0), 3).unwrap();
        assert!((d3 - s.coeffs()[3] * 6.0).norm() < 1e-8);
    }

    #[test]
    fn claimed_closed_form_disagrees_with_recurrence() {
        let rows = coefficient_discrepancy(CrescentMapParams::default(), 8).unwrap();
        assert_eq!(rows.len(), 8);
        // |F| < 4 on the disc, so genuine coefficients stay below 4
        assert!(rows.iter().all(|r| r.recurrence_abs < 4.0));
        assert!(rows.iter().all(|r| r.claimed_abs > 10.0));
    }

    #[test]
    fn deriv_sweep_approaches_one() {
        let rows = sharpness_sweep_deriv(&DerivSweep::default()).unwrap();
        assert_eq!(rows.len(), 3);
        let ratios: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
        assert!(ratios.windows(2).all(|w| w[1] > w[0]), "{ratios:?}");
        assert!(ratios.iter().all(|r| *r <= 1.0 + 1e-6));
        assert!(ratios[2] > 0.99);
    }

    #[test]
    fn transformed_sweep_reproduces_untransformed_ratio() {
        let base = DerivSweep::default();
        let target = DiscTarget {
            disc: Disc::new(c(3.0, -1.0), 0.25).unwrap(),
            touch: c(3.0, -0.75),
        };
        let moved = DerivSweep {
            target: Some(target),
            ..base.clone()
        };
        let a = sharpness_sweep_deriv(&base).unwrap();
        let b = sharpness_sweep_deriv(&moved).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x.ratio - y.ratio).abs() < 1e-8 * x.ratio, "{} vs {}", x.ratio, y.ratio);
            assert!(!y.warnings.iter().any(|w| w.contains("touching")), "{:?}", y.warnings);
        }
    }

    #[test]
    fn opposite_placement_matches_its_limit() {
        // limit ((R+r_a)/(R-r_a))² ((R-r)/(R+r))^{n+1} as ρ ↓ R
        let sweep = DerivSweep {
            placement: Placement::Opposite,
            schedule: vec![1.000001],
            ..DerivSweep::default()
        };
        let rows = sharpness_sweep_deriv(&sweep).unwrap();
        let limit = (1.25f64 / 0.75).powi(2) * (0.5f64 / 1.5).powi(3);
        assert!((rows[0].ratio - limit).abs() < 1e-4, "{} vs {limit}", rows[0].ratio);
    }

    #[test]
    fn increment_sweep_stays_below_bound() {
        for n in 0..3 {
            let rows = sharpness_sweep_increment(n, 1.0, 0.5, &[1.1, 1.01, 1.001]).unwrap();
            assert!(rows.iter().all(|r| !r.flagged && r.ratio <= 1.0 + 1e-6), "{rows:?}");
        }
        let rows = sharpness_sweep_increment(0, 1.0, 0.5, &[1.001]).unwrap();
        assert_eq!(rows[0].rhs_coeff, bohr_coeff(1, 1.0, 1.0, 0.5).unwrap());
    }

    #[test]
    fn bohr_sweep_respects_coefficient() {
        let s = sharpness_sweep_bohr(1, 1.0, 1.0 / 3.0, CrescentMapParams::default()).unwrap();
        assert!(s.lower_bound <= s.coefficient * (1.0 + 1e-6));
        assert!((s.coefficient - 1.0).abs() < 1e-15);
        let s = sharpness_sweep_bohr_with_order(20, 1.0, 0.5, CrescentMapParams::default(), 10).unwrap();
        assert_eq!(s.lower_bound, 0.0);
    }
}
