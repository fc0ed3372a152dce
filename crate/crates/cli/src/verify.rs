//! Oracle-backed verification runs. Each returns the per-point table plus
//! the aggregate checks that decide the exit status.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use solenoid_xsec_core::formfactor::{
    combined_coefficient, combined_j1_form, exterior_analytic, exterior_quadrature,
    interior_analytic, interior_quadrature, PlanarTransferQ, QuadratureOptions,
};
use solenoid_xsec_core::specfun::{bessel_j0, bessel_j1, bessel_j1_asymptotic, j0, j1};
use solenoid_xsec_core::spinor::{current_sq_avg, current_sq_uniform, FourVector};
use solenoid_xsec_core::Result;

use crate::emit::{record, Dataset};
use crate::oracle::bessel_integral;

pub const DEFAULT_SEED: u64 = 1729;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub threshold: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.value < self.threshold
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub dataset: Dataset,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// J0 and J1 against the integral oracle on an even grid over [0, x_max],
/// plus the derivative identity and the two-term asymptotic form.
pub fn verify_bessel(points: usize, x_max: f64) -> Result<VerifyReport> {
    let mut dataset = Dataset::new(["x", "j0", "j0_oracle", "j1", "j1_oracle", "abs_error"]);
    let mut worst: f64 = 0.0;
    let n = points.max(2);
    for i in 0..n {
        let x = x_max * i as f64 / (n - 1) as f64;
        let (a0, a1) = (bessel_j0(x)?.value, bessel_j1(x)?.value);
        let (o0, o1) = (bessel_integral(0, x), bessel_integral(1, x));
        let err = (a0 - o0).abs().max((a1 - o1).abs());
        worst = worst.max(err);
        dataset.push(record([
            ("x", x.into()),
            ("j0", a0.into()),
            ("j0_oracle", o0.into()),
            ("j1", a1.into()),
            ("j1_oracle", o1.into()),
            ("abs_error", err.into()),
        ]));
    }
    Ok(VerifyReport {
        dataset,
        checks: vec![
            Check {
                name: "oracle_abs_error",
                value: worst,
                threshold: 1e-9,
            },
            Check {
                name: "derivative_identity",
                value: derivative_identity_residual(0.1, 50.0, 0.01),
                threshold: 1e-6,
            },
            Check {
                name: "asymptotic_constant",
                value: asymptotic_constant(20.0, 200.0)?,
                threshold: ASYMPTOTIC_CONSTANT_BOUND,
            },
        ],
    })
}

/// Bound on |J1 + two-term asymptotic form|·x^{3/2}; the next-order term has
/// coefficient (3/8)·sqrt(2/π) ≈ 0.299.
pub const ASYMPTOTIC_CONSTANT_BOUND: f64 = 0.32;

/// Largest |J1'(x) − (J0 − J1/x)| with J1' from central differences of step 1e-5.
pub fn derivative_identity_residual(lo: f64, hi: f64, step: f64) -> f64 {
    let h = 1e-5;
    let n = ((hi - lo) / step).round() as usize;
    (0..=n)
        .map(|i| {
            let x = lo + step * i as f64;
            let d = (j1(x + h) - j1(x - h)) / (2.0 * h);
            (d - (j0(x) - j1(x) / x)).abs()
        })
        .fold(0.0, f64::max)
}

/// Smallest c with |J1(x) + asym(x)| ≤ c·x^{−3/2} on a fine grid over [lo, hi].
/// The two-term form carries an overall minus sign, so it is compared with −J1.
pub fn asymptotic_constant(lo: f64, hi: f64) -> Result<f64> {
    let n = 50_000;
    let mut c: f64 = 0.0;
    for i in 0..=n {
        let x = lo + (hi - lo) * i as f64 / n as f64;
        c = c.max((j1(x) + bessel_j1_asymptotic(x)?).abs() * x.powf(1.5));
    }
    Ok(c)
}

/// Elastic pair transverse to the solenoid with |p| = p and scattering angle θ.
fn planar_pair(mc: f64, p: f64, theta: f64, phase: f64) -> (FourVector, FourVector) {
    let pi = FourVector::on_shell(mc, [p * phase.cos(), p * phase.sin(), 0.0]);
    (pi, pi.rotate_x3(theta))
}

/// The three spin-sum evaluations on random kinematics with p ∈ [0.1, 100]·mc
/// and θ ∈ (0, π].
pub fn verify_spinsum(samples: usize, seed: u64) -> Result<VerifyReport> {
    let mc = 1.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dataset = Dataset::new([
        "seed",
        "p",
        "theta_rad",
        "explicit",
        "invariant",
        "kinematic",
        "max_rel",
    ]);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let p = rng.gen_range(0.1..=100.0) * mc;
        let theta = PI - rng.gen_range(0.0..PI);
        let (pi, pf) = planar_pair(mc, p, theta, rng.gen_range(0.0..2.0 * PI));
        let s = current_sq_avg(&pi, &pf, mc)?;
        let rel = s.max_rel_disagreement();
        worst = worst.max(rel);
        dataset.push(record([
            ("seed", (seed as i64).into()),
            ("p", p.into()),
            ("theta_rad", theta.into()),
            ("explicit", s.explicit.into()),
            ("invariant", s.invariant.into()),
            ("kinematic", s.kinematic.into()),
            ("max_rel", rel.into()),
        ]));
    }
    Ok(VerifyReport {
        dataset,
        checks: vec![Check {
            name: "max_rel_disagreement",
            value: worst,
            threshold: 1e-10,
        }],
    })
}

/// Explicit spinor sum against the trace for |ū_f γ¹ u_i|² on random
/// on-shell pairs with momentum components in [−10, 10]·mc.
pub fn verify_uniform_current(samples: usize, seed: u64) -> Result<VerifyReport> {
    let mc = 1.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dataset = Dataset::new(["seed", "explicit", "trace", "rel_error"]);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let mut draw = || [(); 3].map(|_| rng.gen_range(-10.0..10.0) * mc);
        let pi = FourVector::on_shell(mc, draw());
        let pf = FourVector::on_shell(mc, draw());
        let c = current_sq_uniform(&pi, &pf, mc)?;
        let rel = c.rel_disagreement();
        worst = worst.max(rel);
        dataset.push(record([
            ("seed", (seed as i64).into()),
            ("explicit", c.explicit.into()),
            ("trace", c.trace.into()),
            ("rel_error", rel.into()),
        ]));
    }
    Ok(VerifyReport {
        dataset,
        checks: vec![Check {
            name: "max_rel_error",
            value: worst,
            threshold: 1e-10,
        }],
    })
}

/// Closed-form interior and exterior integrals against adaptive quadrature at
/// log-spaced q r0 ∈ [lo, hi], r0 = 1, with q rotating through the plane.
pub fn verify_formfactor(points: usize, lo: f64, hi: f64, tol: f64) -> Result<VerifyReport> {
    let r0 = 1.0;
    let mut dataset = Dataset::new([
        "qr0",
        "interior_analytic",
        "interior_quadrature",
        "interior_rel_error",
        "exterior_analytic",
        "exterior_quadrature",
        "exterior_rel_error",
        "combined_residual",
    ]);
    let (mut worst, mut worst_combined): (f64, f64) = (0.0, 0.0);
    let n = points.max(2);
    for i in 0..n {
        let x = lo * (hi / lo).powf(i as f64 / (n - 1) as f64);
        let q = PlanarTransferQ::from_polar(x / r0, 0.37 * i as f64)?;
        let ia = interior_analytic(&q, r0)?;
        let iq = interior_quadrature(&q, r0, &QuadratureOptions::interior(tol))?.value;
        let ea = exterior_analytic(&q, r0)?;
        let eq = exterior_quadrature(&q, r0, &QuadratureOptions::exterior(tol))?.value;
        let combined = combined_coefficient(&q, r0)?.rel_diff(&combined_j1_form(&q, r0)?);
        let (ie, ee) = (ia.rel_diff(&iq), ea.rel_diff(&eq));
        worst = worst.max(ie).max(ee);
        worst_combined = worst_combined.max(combined);
        dataset.push(record([
            ("qr0", x.into()),
            ("interior_analytic", ia.imaginary_coefficient(&q).into()),
            ("interior_quadrature", iq.imaginary_coefficient(&q).into()),
            ("interior_rel_error", ie.into()),
            ("exterior_analytic", ea.imaginary_coefficient(&q).into()),
            ("exterior_quadrature", eq.imaginary_coefficient(&q).into()),
            ("exterior_rel_error", ee.into()),
            ("combined_residual", combined.into()),
        ]));
    }
    Ok(VerifyReport {
        dataset,
        checks: vec![
            Check {
                name: "max_rel_error",
                value: worst,
                threshold: 1e-6,
            },
            Check {
                name: "combined_residual",
                value: worst_combined,
                threshold: 1e-12,
            },
        ],
    })
}
