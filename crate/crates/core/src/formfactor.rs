//! Planar Fourier integrals of the solenoid vector potential.
//!
//! For a transfer q in the plane perpendicular to the solenoid axis:
//!
//! ```text
//! interior:  ∫_{r<r0} e^{-iq·x} x_i d²x           = 2πi r0³ (q_i/q) [J0(x)/x − 2 J1(x)/x²]
//! exterior:  ∫_{r>r0} e^{-iq·x} x_i / r² d²x      = −2πi (q_i/q²) J0(x)
//! combined:  interior / r0² + exterior            = −4πi q_i J1(x) / (q³ r0)
//! ```
//!
//! with x = q r0. Each closed form has an independent quadrature counterpart.

use core::cell::Cell;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::quadrature::{integrate, Tolerance};
use crate::specfun::{j0, j1};
use crate::units::positive;
use crate::{Error, Result};

/// Default integrand-evaluation budget for the interior (2D) quadrature.
pub const INTERIOR_BUDGET: usize = 1_000_000;
/// Default integrand-evaluation budget for the exterior (radial) quadrature.
pub const EXTERIOR_BUDGET: usize = 100_000;

/// Momentum transfer in the plane perpendicular to the solenoid, inverse length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarTransferQ {
    pub q1: f64,
    pub q2: f64,
}

impl PlanarTransferQ {
    pub fn new(q1: f64, q2: f64) -> Result<Self> {
        if !(q1.is_finite() && q2.is_finite()) {
            return Err(Error::invalid(
                "q",
                "finite",
                if q1.is_finite() { q2 } else { q1 },
            ));
        }
        if q1 == 0.0 && q2 == 0.0 {
            return Err(Error::ZeroTransfer);
        }
        Ok(Self { q1, q2 })
    }

    /// Transfer of magnitude `q` at polar angle `angle`.
    pub fn from_polar(q: f64, angle: f64) -> Result<Self> {
        Self::new(q * libm::cos(angle), q * libm::sin(angle))
    }

    pub fn magnitude(&self) -> f64 {
        libm::hypot(self.q1, self.q2)
    }

    pub fn direction(&self) -> [f64; 2] {
        let q = self.magnitude();
        [self.q1 / q, self.q2 / q]
    }

    pub fn rotate(&self, angle: f64) -> Self {
        let (s, c) = (libm::sin(angle), libm::cos(angle));
        Self {
            q1: c * self.q1 - s * self.q2,
            q2: s * self.q1 + c * self.q2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Interior,
    Exterior,
    Combined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Analytic,
    Quadrature,
}

/// Vector coefficient (components i = 1, 2) of a planar integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormFactorValue {
    pub components: [Complex64; 2],
    pub region: Region,
    pub method: Method,
}

impl FormFactorValue {
    fn along(q: &PlanarTransferQ, coefficient: Complex64, region: Region, method: Method) -> Self {
        let [n1, n2] = q.direction();
        Self {
            components: [coefficient * n1, coefficient * n2],
            region,
            method,
        }
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.components[0].norm_sqr() + self.components[1].norm_sqr())
    }

    /// κ such that the value is approximately i·κ·q̂.
    pub fn imaginary_coefficient(&self, q: &PlanarTransferQ) -> f64 {
        let [n1, n2] = q.direction();
        self.components[0].im * n1 + self.components[1].im * n2
    }

    /// Norm of the part not of the form i·κ·q̂.
    pub fn off_axis_residual(&self, q: &PlanarTransferQ) -> f64 {
        let kappa = self.imaginary_coefficient(q);
        let [n1, n2] = q.direction();
        let d1 = self.components[0] - Complex64::new(0.0, kappa * n1);
        let d2 = self.components[1] - Complex64::new(0.0, kappa * n2);
        libm::sqrt(d1.norm_sqr() + d2.norm_sqr())
    }

    /// Relative distance ‖a − b‖ / max(‖a‖, ‖b‖).
    pub fn rel_diff(&self, other: &FormFactorValue) -> f64 {
        let d1 = self.components[0] - other.components[0];
        let d2 = self.components[1] - other.components[1];
        let scale = self.norm().max(other.norm());
        if scale == 0.0 {
            0.0
        } else {
            libm::sqrt(d1.norm_sqr() + d2.norm_sqr()) / scale
        }
    }
}

pub fn interior_analytic(q: &PlanarTransferQ, r0: f64) -> Result<FormFactorValue> {
    positive("r0", r0)?;
    let qm = q.magnitude();
    let x = qm * r0;
    let bracket = j0(x) / x - 2.0 * j1(x) / (x * x);
    Ok(FormFactorValue::along(
        q,
        Complex64::new(0.0, 2.0 * PI * r0 * r0 * r0 * bracket),
        Region::Interior,
        Method::Analytic,
    ))
}

pub fn exterior_analytic(q: &PlanarTransferQ, r0: f64) -> Result<FormFactorValue> {
    positive("r0", r0)?;
    let qm = q.magnitude();
    let x = qm * r0;
    // q_i/q² = q̂_i / q
    Ok(FormFactorValue::along(
        q,
        Complex64::new(0.0, -2.0 * PI * j0(x) / qm),
        Region::Exterior,
        Method::Analytic,
    ))
}

/// interior/r0² + exterior.
pub fn combined_coefficient(q: &PlanarTransferQ, r0: f64) -> Result<FormFactorValue> {
    let inner = interior_analytic(q, r0)?;
    let outer = exterior_analytic(q, r0)?;
    let inv_r0_sq = 1.0 / (r0 * r0);
    Ok(FormFactorValue {
        components: [
            inner.components[0] * inv_r0_sq + outer.components[0],
            inner.components[1] * inv_r0_sq + outer.components[1],
        ],
        region: Region::Combined,
        method: Method::Analytic,
    })
}

/// −4πi q_i J1(q r0) / (q³ r0), the single-Bessel form of [`combined_coefficient`].
pub fn combined_j1_form(q: &PlanarTransferQ, r0: f64) -> Result<FormFactorValue> {
    positive("r0", r0)?;
    let qm = q.magnitude();
    Ok(FormFactorValue::along(
        q,
        Complex64::new(0.0, -4.0 * PI * j1(qm * r0) / (qm * qm * r0)),
        Region::Combined,
        Method::Analytic,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    /// Relative accuracy target, 1e-12 ..= 1e-4.
    pub tol: f64,
    pub max_evals: usize,
    /// Radial cutoff R of the exterior integral; the rest is added analytically.
    /// Defaults to r0 plus ten wavelengths 2π/q.
    pub cutoff: Option<f64>,
}

impl QuadratureOptions {
    pub fn interior(tol: f64) -> Self {
        Self {
            tol,
            max_evals: INTERIOR_BUDGET,
            cutoff: None,
        }
    }

    pub fn exterior(tol: f64) -> Self {
        Self {
            tol,
            max_evals: EXTERIOR_BUDGET,
            cutoff: None,
        }
    }

    fn check(&self) -> Result<()> {
        if (1e-12..=1e-4).contains(&self.tol) {
            Ok(())
        } else {
            Err(Error::invalid("tol", "within [1e-12, 1e-4]", self.tol))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: FormFactorValue,
    pub est_error: f64,
    pub evaluations: usize,
}

/// Adaptive 2D quadrature of ∫_{r<r0} e^{-iq·x} x_i d²x in polar coordinates.
pub fn interior_quadrature(
    q: &PlanarTransferQ,
    r0: f64,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult> {
    positive("r0", r0)?;
    opts.check()?;
    let budget = opts.max_evals;
    // A coarse pass fixes the absolute scale for the inner integrals.
    let rough = disk_integral(q, r0, 1e-3, 0.0, budget)?;
    let scale = norm4(&rough.0).max(f64::MIN_POSITIVE);
    let remaining = budget.saturating_sub(rough.2);
    let (value, error, evaluations) = disk_integral(
        q,
        r0,
        0.5 * opts.tol,
        0.1 * opts.tol * scale / r0,
        remaining,
    )?;
    let evaluations = evaluations + rough.2;
    let result = FormFactorValue {
        components: [
            Complex64::new(value[0], value[1]),
            Complex64::new(value[2], value[3]),
        ],
        region: Region::Interior,
        method: Method::Quadrature,
    };
    let achieved = error / result.norm();
    if achieved > opts.tol {
        return Err(Error::QuadratureBudget {
            achieved,
            requested: opts.tol,
            evaluations,
        });
    }
    Ok(QuadratureResult {
        value: result,
        est_error: achieved,
        evaluations,
    })
}

/// Returns (value [Re x1, Im x1, Re x2, Im x2], error, evaluations).
fn disk_integral(
    q: &PlanarTransferQ,
    r0: f64,
    rel_tol: f64,
    inner_abs_tol: f64,
    budget: usize,
) -> Result<([f64; 4], f64, usize)> {
    let (q1, q2) = (q.q1, q.q2);
    let qm = q.magnitude();
    let used = Cell::new(0usize);
    let inner_error = Cell::new(0.0f64);
    let failure: Cell<Option<Error>> = Cell::new(None);

    let angular = |r: f64| -> [f64; 4] {
        if r == 0.0 {
            return [0.0; 4];
        }
        let panels = 2 + libm::ceil(qm * r / PI) as usize;
        let remaining = budget.saturating_sub(used.get());
        let tol = Tolerance {
            abs_tol: inner_abs_tol,
            rel_tol: if inner_abs_tol > 0.0 { 0.0 } else { rel_tol },
            max_evals: remaining,
        };
        let integrand = |phi: f64| {
            let (s, c) = (libm::sin(phi), libm::cos(phi));
            let phase = -(q1 * c + q2 * s) * r;
            let (ps, pc) = (libm::sin(phase), libm::cos(phase));
            // x_i times the polar Jacobian r
            let (w1, w2) = (r * r * c, r * r * s);
            [pc * w1, ps * w1, pc * w2, ps * w2]
        };
        match integrate(integrand, 0.0, 2.0 * PI, panels, tol) {
            Ok(est) => {
                used.set(used.get() + est.evaluations);
                inner_error.set(inner_error.get().max(est.error));
                est.value
            }
            Err(e) => {
                used.set(budget);
                failure.set(Some(e));
                [0.0; 4]
            }
        }
    };

    let outer_panels = 2 + libm::ceil(qm * r0 / PI) as usize;
    let outer_tol = Tolerance {
        abs_tol: 0.0,
        rel_tol,
        max_evals: usize::MAX,
    };
    let outer = integrate(angular, 0.0, r0, outer_panels, outer_tol);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let est = outer?;
    if used.get() > budget {
        return Err(Error::QuadratureBudget {
            achieved: est.error,
            requested: rel_tol,
            evaluations: used.get(),
        });
    }
    Ok((est.value, est.error + r0 * inner_error.get(), used.get()))
}

fn norm4(v: &[f64; 4]) -> f64 {
    libm::sqrt(v.iter().map(|x| x * x).sum::<f64>())
}

/// Exterior integral reduced by exact angular integration to
/// −2πi q̂_i ∫_{r0}^∞ J1(q r) dr; the radial part is integrated numerically to
/// the cutoff R and the remainder ∫_R^∞ J1(q r) dr = J0(q R)/q added in closed form.
pub fn exterior_quadrature(
    q: &PlanarTransferQ,
    r0: f64,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult> {
    positive("r0", r0)?;
    opts.check()?;
    let qm = q.magnitude();
    let wavelength = 2.0 * PI / qm;
    let cutoff = opts.cutoff.unwrap_or(r0 + 10.0 * wavelength);
    if !cutoff.is_finite() || cutoff < r0 {
        return Err(Error::invalid("cutoff", "finite and >= r0", cutoff));
    }
    let tail = j0(qm * cutoff) / qm;
    let (radial, error, evaluations) = if cutoff > r0 {
        let panels = 1 + libm::ceil((cutoff - r0) / (0.5 * wavelength)) as usize;
        let tol = Tolerance {
            abs_tol: 0.1 * opts.tol * libm::fabs(tail).max(1e-3 / qm),
            rel_tol: 0.5 * opts.tol,
            max_evals: opts.max_evals,
        };
        let est = integrate(|r| [j1(qm * r)], r0, cutoff, panels, tol)?;
        (est.value[0], est.error, est.evaluations)
    } else {
        (0.0, 0.0, 0)
    };
    let total = radial + tail;
    let value = FormFactorValue::along(
        q,
        Complex64::new(0.0, -2.0 * PI * total),
        Region::Exterior,
        Method::Quadrature,
    );
    let achieved = if total == 0.0 {
        error
    } else {
        error / libm::fabs(total)
    };
    if achieved > opts.tol {
        return Err(Error::QuadratureBudget {
            achieved,
            requested: opts.tol,
            evaluations,
        });
    }
    Ok(QuadratureResult {
        value,
        est_error: achieved,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_q(x: f64, r0: f64, angle: f64) -> PlanarTransferQ {
        PlanarTransferQ::from_polar(x / r0, angle).unwrap()
    }

    #[test]
    fn zero_transfer_rejected() {
        assert_eq!(PlanarTransferQ::new(0.0, 0.0), Err(Error::ZeroTransfer));
    }

    #[test]
    fn interior_small_x_limit() {
        // e^{-iq·x} ≈ 1 − i q·x with ∫ x_i x_j d²x = δ_ij π r0⁴/4
        let r0 = 2.0;
        let q = PlanarTransferQ::new(3e-4, -4e-4).unwrap();
        let v = interior_analytic(&q, r0).unwrap();
        let expect = [-PI * q.q1 * r0.powi(4) / 4.0, -PI * q.q2 * r0.powi(4) / 4.0];
        for (c, e) in v.components.iter().zip(expect) {
            assert!((c.im - e).abs() < 1e-6 * e.abs());
            assert_eq!(c.re, 0.0);
        }
    }

    #[test]
    fn interior_at_first_j1_zero() {
        let z = crate::specfun::bessel_j1_zero(1).unwrap();
        let q = unit_q(z, 1.0, 0.0);
        let v = interior_analytic(&q, 1.0).unwrap();
        let expect = 2.0 * PI * j0(z) / z;
        assert!((v.imaginary_coefficient(&q) - expect).abs() < 1e-14);
    }

    #[test]
    fn exterior_limits() {
        let q = unit_q(1e-9, 1.0, 0.3);
        let v = exterior_analytic(&q, 1.0).unwrap();
        let qm = q.magnitude();
        assert!((v.imaginary_coefficient(&q) + 2.0 * PI / qm).abs() < 1e-9 * 2.0 * PI / qm);
    }

    #[test]
    fn exterior_tail_only_equals_closed_form() {
        let r0 = 1.5;
        let q = unit_q(2.0, r0, 1.0);
        let opts = QuadratureOptions {
            cutoff: Some(r0),
            ..QuadratureOptions::exterior(1e-10)
        };
        let quad = exterior_quadrature(&q, r0, &opts).unwrap();
        let exact = exterior_analytic(&q, r0).unwrap();
        assert!(quad.value.rel_diff(&exact) < 1e-15);
        assert_eq!(quad.evaluations, 0);
    }

    #[test]
    fn quadrature_matches_closed_forms() {
        for &x in &[0.1, 1.0, 2.0, 7.3] {
            let r0 = 0.7;
            let q = unit_q(x, r0, 0.4);
            let qi = interior_quadrature(&q, r0, &QuadratureOptions::interior(1e-10)).unwrap();
            let ai = interior_analytic(&q, r0).unwrap();
            assert!(
                qi.value.rel_diff(&ai) < 1e-8,
                "interior x={x}: {}",
                qi.value.rel_diff(&ai)
            );
            let qe = exterior_quadrature(&q, r0, &QuadratureOptions::exterior(1e-10)).unwrap();
            let ae = exterior_analytic(&q, r0).unwrap();
            assert!(
                qe.value.rel_diff(&ae) < 1e-8,
                "exterior x={x}: {}",
                qe.value.rel_diff(&ae)
            );
        }
    }

    #[test]
    fn oscillatory_interior() {
        let q = unit_q(15.0, 1.0, 2.0);
        let opts = QuadratureOptions::interior(1e-9);
        let quad = interior_quadrature(&q, 1.0, &opts).unwrap();
        let exact = interior_analytic(&q, 1.0).unwrap();
        assert!(quad.value.rel_diff(&exact) < 1e-6);
        assert!(quad
            .value
            .components
            .iter()
            .all(|z| z.re.abs() < 1e-9 * quad.value.norm()));
    }

    #[test]
    fn quadrature_rotates_with_q() {
        let q = unit_q(3.0, 1.0, 0.2);
        let turned = q.rotate(PI / 2.0);
        let opts = QuadratureOptions::interior(1e-10);
        let a = interior_quadrature(&q, 1.0, &opts).unwrap().value;
        let b = interior_quadrature(&turned, 1.0, &opts).unwrap().value;
        // rotating by 90°: (v1, v2) -> (−v2, v1)
        assert!((b.components[0] + a.components[1]).norm() < 1e-9 * a.norm());
        assert!((b.components[1] - a.components[0]).norm() < 1e-9 * a.norm());
    }

    #[test]
    fn tolerance_range_enforced() {
        let q = unit_q(1.0, 1.0, 0.0);
        assert!(interior_quadrature(&q, 1.0, &QuadratureOptions::interior(1e-3)).is_err());
        assert!(exterior_quadrature(&q, 1.0, &QuadratureOptions::exterior(1e-13)).is_err());
    }

    #[test]
    fn tiny_budget_fails_explicitly() {
        let q = unit_q(5.0, 1.0, 0.0);
        let opts = QuadratureOptions {
            max_evals: 200,
            ..QuadratureOptions::interior(1e-10)
        };
        assert!(matches!(
            interior_quadrature(&q, 1.0, &opts),
            Err(Error::QuadratureBudget { .. })
        ));
    }

    #[test]
    fn combined_reduces_to_j1_form() {
        let z = crate::specfun::bessel_j1_zero(1).unwrap();
        let q = unit_q(z, 1.0, 0.0);
        let c = combined_coefficient(&q, 1.0).unwrap();
        // J1 vanishes: only rounding of the cancelling J0 terms remains.
        assert!(c.norm() < 1e-14);
        let small = unit_q(1e-6, 1.0, 0.0);
        let c = combined_coefficient(&small, 1.0).unwrap();
        let qm = small.magnitude();
        assert!((c.imaginary_coefficient(&small) + 2.0 * PI / qm).abs() < 1e-9 * 2.0 * PI / qm);
    }
}
