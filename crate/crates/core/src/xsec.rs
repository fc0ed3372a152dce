//! Differential cross sections per unit solenoid length, dσ/(dx3 dθ), and
//! their limiting forms.
//!
//! All solenoid formulas depend on θ through |sin(θ/2)| or θ², so they are
//! exactly even in θ. The zero-radius reference forms (`ab_exact`,
//! `ll_small_angle`) are read as cross sections per unit length as well and
//! carry [`Regime::SmallX`].

use core::f64::consts::PI;

use crate::limits::{Regime, RegimeThresholds};
use crate::specfun::j1;
use crate::spinor::{current_sq_uniform, FourVector, UniformCurrent};
use crate::units::{positive, BeamSpec, FFactor, Helicity, Polarization, SolenoidSpec, UnitSystem};
use crate::{Error, Result};

/// Scattering angle θ in (−π, π], θ ≠ 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterPoint {
    theta: f64,
}

impl ScatterPoint {
    pub fn new(theta: f64) -> Result<Self> {
        if !theta.is_finite() || theta <= -PI || theta > PI {
            return Err(Error::invalid("theta", "within (-pi, pi]", theta));
        }
        if theta == 0.0 {
            return Err(Error::ForwardSingularity);
        }
        Ok(Self { theta })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn mirrored(&self) -> Self {
        // −π is outside the domain; π maps to itself.
        if self.theta == PI {
            *self
        } else {
            Self { theta: -self.theta }
        }
    }

    /// |sin(θ/2)|, computed from |θ| so that ±θ give identical bits.
    pub fn sin_half(&self) -> f64 {
        libm::sin(0.5 * libm::fabs(self.theta))
    }

    /// q = 2p|sin(θ/2)|/ħ.
    pub fn transfer(&self, p: f64, u: &UnitSystem) -> f64 {
        2.0 * p * self.sin_half() / u.hbar
    }

    /// x = q r0.
    pub fn x(&self, p: f64, r0: f64, u: &UnitSystem) -> f64 {
        2.0 * p * r0 * self.sin_half() / u.hbar
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formula {
    Master,
    Helicity,
    HelicityConserving,
    AharonovBohm,
    LandauLifshitz,
    SmallX,
    SmallXSmallTheta,
    Quantized,
    QuantizedSmallTheta,
    ClassicalEnvelope,
}

impl Formula {
    pub const ALL: [Formula; 10] = [
        Formula::Master,
        Formula::Helicity,
        Formula::HelicityConserving,
        Formula::AharonovBohm,
        Formula::LandauLifshitz,
        Formula::SmallX,
        Formula::SmallXSmallTheta,
        Formula::Quantized,
        Formula::QuantizedSmallTheta,
        Formula::ClassicalEnvelope,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Formula::Master => "master",
            Formula::Helicity => "helicity",
            Formula::HelicityConserving => "helicity-conserving",
            Formula::AharonovBohm => "ab",
            Formula::LandauLifshitz => "ll",
            Formula::SmallX => "small-x",
            Formula::SmallXSmallTheta => "small-x-small-theta",
            Formula::Quantized => "quantized",
            Formula::QuantizedSmallTheta => "quantized-small-theta",
            Formula::ClassicalEnvelope => "envelope",
        }
    }

    pub fn from_name(name: &str) -> Option<Formula> {
        Formula::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Cross section per unit solenoid length per radian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XsecValue {
    pub value: f64,
    pub formula: Formula,
    pub regime: Regime,
}

fn momentum(beam: &BeamSpec) -> Result<f64> {
    positive("momentum", beam.momentum_p)?;
    Ok(beam.momentum_p)
}

fn spin_averaged(beam: &BeamSpec) -> Result<()> {
    match beam.polarization {
        Polarization::SpinAveraged => Ok(()),
        Polarization::Helicity { .. } => Err(Error::HelicityBeam),
    }
}

/// (ħ/c²)(eΦ/r0)² J1(x)² / (8π p³ sin⁴(θ/2)), the common core of the Born results.
fn born_core(
    beam: &BeamSpec,
    sol: &SolenoidSpec,
    pt: &ScatterPoint,
    u: &UnitSystem,
) -> Result<(f64, f64)> {
    let p = momentum(beam)?;
    let s = pt.sin_half();
    let x = pt.x(p, sol.r0, u);
    let j = j1(x);
    let coupling = beam.charge * sol.flux(u) / sol.r0;
    let s2 = s * s;
    let value =
        (u.hbar / (u.c * u.c)) * coupling * coupling * j * j / (8.0 * PI * p * p * p * s2 * s2);
    Ok((value, x))
}

fn classify(x: f64) -> Regime {
    RegimeThresholds::default().classify(x)
}

/// Spin-averaged first-order cross section,
/// (1/f)(ħ/c²)(eΦ/r0)² |J1(2 p r0 |sin(θ/2)|/ħ)|² / (8π p³ sin⁴(θ/2)).
pub fn master_xsec(
    beam: &BeamSpec,
    sol: &SolenoidSpec,
    pt: &ScatterPoint,
    u: &UnitSystem,
) -> Result<XsecValue> {
    spin_averaged(beam)?;
    let (core, x) = born_core(beam, sol, pt, u)?;
    Ok(XsecValue {
        value: core / beam.f_factor.get(),
        formula: Formula::Master,
        regime: classify(x),
    })
}

/// Helicity-resolved cross section,
/// (1/2π)(ħ/c²)(eΦ/r0)² |J1|² / (4³ p³ sin⁴(θ/2)) · (1 + λi λf)².
pub fn helicity_xsec(
    beam: &BeamSpec,
    sol: &SolenoidSpec,
    pt: &ScatterPoint,
    u: &UnitSystem,
    initial: Helicity,
    fin: Helicity,
) -> Result<XsecValue> {
    let p = momentum(beam)?;
    let s = pt.sin_half();
    let x = pt.x(p, sol.r0, u);
    let j = j1(x);
    let coupling = beam.charge * sol.flux(u) / sol.r0;
    let s2 = s * s;
    let flip = 1.0 + initial.sign() * fin.sign();
    let value = (1.0 / (2.0 * PI)) * (u.hbar / (u.c * u.c)) * coupling * coupling * j * j
        / (64.0 * p * p * p * s2 * s2)
        * flip
        * flip;
    Ok(XsecValue {
        value,
        formula: Formula::Helicity,
        regime: classify(x),
    })
}

/// Helicity-conserving case λi = λf written in the master form with the
/// prefactor 1/4 in place of 1/f.
pub fn helicity_conserving_xsec(
    beam: &BeamSpec,
    sol: &SolenoidSpec,
    pt: &ScatterPoint,
    u: &UnitSystem,
) -> Result<XsecValue> {
    let (core, x) = born_core(beam, sol, pt, u)?;
    Ok(XsecValue {
        value: 0.25 * core,
        formula: Formula::HelicityConserving,
        regime: classify(x),
    })
}

/// Zero-radius result ħ sin²(eΦ/2ħc) / (2π p sin²(θ/2)).
///
/// The flux phase is reduced modulo the flux quantum first, so integer
/// multiples of 2πħc/e give zero up to rounding of Φ/Φ0.
pub fn ab_exact(flux: f64, p: f64, pt: &ScatterPoint, u: &UnitSystem) -> Result<XsecValue> {
    positive("momentum", p)?;
    if !flux.is_finite() {
        return Err(Error::invalid("flux", "finite", flux));
    }
    // eΦ/2ħc = π Φ/Φ0
    let quanta = flux / u.flux_quantum();
    let reduced = quanta - libm::round(quanta);
    let sn = libm::sin(PI * reduced);
    let s = pt.sin_half();
    Ok(XsecValue {
        value: u.hbar * sn * sn / (2.0 * PI * p * s * s),
        formula: Formula::AharonovBohm,
        regime: Regime::SmallX,
    })
}

/// Small-angle, small-flux eikonal result e²Φ² / (2π ħ c² p θ²).
pub fn ll_small_angle(flux: f64, p: f64, pt: &ScatterPoint, u: &UnitSystem) -> Result<XsecValue> {
    positive("momentum", p)?;
    let theta = pt.theta();
    let e = u.e_charge;
    Ok(XsecValue {
        value: e * e * flux * flux / (2.0 * PI * u.hbar * u.c * u.c * p * theta * theta),
        formula: Formula::LandauLifshitz,
        regime: Regime::SmallX,
    })
}

/// x ≪ 1 reduction of [`master_xsec`]: (1/f) e²Φ² / (8π c² ħ p sin²(θ/2)).
pub fn small_x_reduction(
    beam: &BeamSpec,
    sol: &SolenoidSpec,
    pt: &ScatterPoint,
    u: &UnitSystem,
) -> Result<XsecValue> {
    spin_averaged(beam)?;
    let p = momentum(beam)?;
    let s = pt.sin_half();
    let e = beam.charge;
    let phi = sol.flux(u);
    let value = e * e * phi * phi / (8.0 * PI * u.c * u.c * u.hbar * p * s * s);
    Ok(XsecValue {
        value: value / beam.f_factor.get(),
        formula: Formula::SmallX,
        regime: classify(pt.x(p, sol.r0, u)),
    })
}

/// x ≪ 1 and θ ≪ 1: (1/f) e²Φ² / (2π c² ħ p θ²).
pub fn small_x_small_theta(
    beam: &BeamSpec,
    sol: &SolenoidSpec,
    pt: &ScatterPoint,
    u: &UnitSystem,
) -> Result<XsecValue> {
    spin_averaged(beam)?;
    let p = momentum(beam)?;
    let theta = pt.theta();
    let e = beam.charge;
    let phi = sol.flux(u);
    let value = e * e * phi * phi / (2.0 * PI * u.hbar * u.c * u.c * p * theta * theta);
    Ok(XsecValue {
        value: value / beam.f_factor.get(),
        formula: Formula::SmallXSmallTheta,
        regime: classify(pt.x(p, sol.r0, u)),
    })
}

/// Master cross section at Φ = nΦ0:
/// n² ħ³ (π/f) |J1|² / (2 r0² p³ sin⁴(θ/2)); no charge dependence.
pub fn quantized_xsec(
    n: i64,
    r0: f64,
    p: f64,
    pt: &ScatterPoint,
    f: FFactor,
    u: &UnitSystem,
) -> Result<XsecValue> {
    positive("r0", r0)?;
    positive("momentum", p)?;
    let nf = n as f64;
    let s = pt.sin_half();
    let x = pt.x(p, r0, u);
    let j = j1(x);
    let h3 = u.hbar * u.hbar * u.hbar;
    let s2 = s * s;
    let value = nf * nf * h3 * (PI / f.get()) * j * j / (2.0 * r0 * r0 * p * p * p * s2 * s2);
    Ok(XsecValue {
        value,
        formula: Formula::Quantized,
        regime: classify(x),
    })
}

/// Small-angle quantized form 8π² ħ n² / (f p θ²).
///
/// The small-x, small-θ limit of [`quantized_xsec`] is 2π ħ n²/(f p θ²); the
/// prefactor here is larger by 4π.
pub fn quantized_small_theta(
    n: i64,
    p: f64,
    pt: &ScatterPoint,
    f: FFactor,
    u: &UnitSystem,
) -> Result<XsecValue> {
    positive("momentum", p)?;
    let nf = n as f64;
    let theta = pt.theta();
    Ok(XsecValue {
        value: 8.0 * PI * PI * u.hbar * nf * nf / (f.get() * p * theta * theta),
        formula: Formula::QuantizedSmallTheta,
        regime: Regime::SmallX,
    })
}

/// Large-x envelope of [`master_xsec`] with cos² replaced by 1:
/// ħ² (1/f) (eΦ/2πc)² / (2 r0³ p⁴ |sin⁵(θ/2)|).
pub fn classical_envelope(
    beam: &BeamSpec,
    sol: &SolenoidSpec,
    pt: &ScatterPoint,
    u: &UnitSystem,
) -> Result<XsecValue> {
    let p = momentum(beam)?;
    let s = pt.sin_half();
    let r0 = sol.r0;
    let a = beam.charge * sol.flux(u) / (2.0 * PI * u.c);
    let s2 = s * s;
    let value = u.hbar * u.hbar * a * a / (2.0 * r0 * r0 * r0 * p * p * p * p * s2 * s2 * s);
    Ok(XsecValue {
        value: value / beam.f_factor.get(),
        formula: Formula::ClassicalEnvelope,
        regime: classify(pt.x(p, r0, u)),
    })
}

/// Whether a momentum-transfer component satisfies its delta-function constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaFlag {
    Satisfied,
    Violated,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformFieldCoefficient {
    /// Spin-averaged |ū_f γ¹ u_i|².
    pub current: UniformCurrent,
    /// 2π (e m B0)² |ū_f γ¹ u_i|² / (p³ sin²θ); `None` when sin θ = 0.
    pub coefficient: Option<f64>,
    pub delta_q1: DeltaFlag,
    pub delta_q2: DeltaFlag,
}

/// Finite coefficient of the uniform-field cross section per unit field volume.
/// The factor δ(q1)δ(q2) is reported through the two flags only.
pub fn uniform_field_coeff(
    beam: &BeamSpec,
    b0: f64,
    p_i: &FourVector,
    p_f: &FourVector,
    u: &UnitSystem,
) -> Result<UniformFieldCoefficient> {
    let mc = beam.mass * u.c;
    let current = current_sq_uniform(p_i, p_f, mc)?;
    let p = p_i.spatial_norm();
    let [a1, a2, a3] = p_i.spatial();
    let [b1, b2, b3] = p_f.spatial();
    let cross = [a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1];
    let cross_norm = libm::sqrt(cross.iter().map(|c| c * c).sum::<f64>());
    let sin_theta = cross_norm / (p * p_f.spatial_norm());
    let coefficient = if sin_theta > 0.0 && p > 0.0 {
        let g = beam.charge * beam.mass * b0;
        Some(2.0 * PI * g * g * current.explicit / (p * p * p * sin_theta * sin_theta))
    } else {
        None
    };
    let tol = crate::spinor::ELASTIC_TOL * p_i.t.max(p_f.t);
    let flag = |d: f64| {
        if libm::fabs(d) <= tol {
            DeltaFlag::Satisfied
        } else {
            DeltaFlag::Violated
        }
    };
    Ok(UniformFieldCoefficient {
        current,
        coefficient,
        delta_q1: flag(b1 - a1),
        delta_q2: flag(b2 - a2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel_j1_zero;

    fn natural_setup() -> (UnitSystem, BeamSpec, SolenoidSpec) {
        let u = UnitSystem::natural();
        let beam = BeamSpec::new(1.0, 2.0, 1.0).unwrap();
        let sol = SolenoidSpec::with_flux(0.5, 0.3).unwrap();
        (u, beam, sol)
    }

    #[test]
    fn scatter_point_domain() {
        assert_eq!(ScatterPoint::new(0.0), Err(Error::ForwardSingularity));
        assert!(ScatterPoint::new(-PI).is_err());
        assert!(ScatterPoint::new(PI).is_ok());
        assert!(ScatterPoint::new(f64::NAN).is_err());
        let pt = ScatterPoint::new(0.7).unwrap();
        assert_eq!(pt.sin_half(), pt.mirrored().sin_half());
    }

    #[test]
    fn master_is_even_in_theta() {
        let (u, beam, sol) = natural_setup();
        for &th in &[0.1, 1.0, 2.5, 3.1] {
            let pt = ScatterPoint::new(th).unwrap();
            let a = master_xsec(&beam, &sol, &pt, &u).unwrap().value;
            let b = master_xsec(&beam, &sol, &pt.mirrored(), &u).unwrap().value;
            assert_eq!(a, b);
            assert!(a >= 0.0);
        }
    }

    #[test]
    fn master_vanishes_at_j1_zero() {
        let (u, beam, sol) = natural_setup();
        let pt = ScatterPoint::new(PI / 3.0).unwrap();
        let z = bessel_j1_zero(1).unwrap();
        let p = z * u.hbar / (2.0 * sol.r0 * pt.sin_half());
        let beam = beam.with_momentum(p).unwrap();
        let env = classical_envelope(&beam, &sol, &pt, &u).unwrap().value;
        let v = master_xsec(&beam, &sol, &pt, &u).unwrap().value;
        assert!(v < 1e-28 * env.max(1.0), "{v}");
    }

    #[test]
    fn master_rejects_helicity_beam() {
        let (u, beam, sol) = natural_setup();
        let beam = beam.with_polarization(Polarization::Helicity {
            initial: Helicity::Plus,
            fin: Helicity::Plus,
        });
        let pt = ScatterPoint::new(1.0).unwrap();
        assert_eq!(master_xsec(&beam, &sol, &pt, &u), Err(Error::HelicityBeam));
    }

    #[test]
    fn helicity_selection_rule() {
        let (u, beam, sol) = natural_setup();
        let pt = ScatterPoint::new(1.2).unwrap();
        let flip = helicity_xsec(&beam, &sol, &pt, &u, Helicity::Plus, Helicity::Minus).unwrap();
        assert_eq!(flip.value, 0.0);
        let keep = helicity_xsec(&beam, &sol, &pt, &u, Helicity::Plus, Helicity::Plus).unwrap();
        let conserving = helicity_conserving_xsec(&beam, &sol, &pt, &u).unwrap();
        assert!((keep.value / conserving.value - 1.0).abs() < 1e-12);
        // (1/2π)/4³·4 = (1/4)/(8π)
        assert!(((1.0 / (2.0 * PI)) / 64.0 * 4.0 - 0.25 / (8.0 * PI)).abs() < 1e-18);
    }

    #[test]
    fn ab_zero_and_half_quantum() {
        let u = UnitSystem::cgs();
        let pt = ScatterPoint::new(0.9).unwrap();
        let p = 1e-17;
        let phi0 = u.flux_quantum();
        let half = ab_exact(0.5 * phi0, p, &pt, &u).unwrap().value;
        let s = pt.sin_half();
        let expect = u.hbar / (2.0 * PI * p * s * s);
        assert!((half / expect - 1.0).abs() < 1e-14);
        for n in 1..=10 {
            let v = ab_exact(n as f64 * phi0, p, &pt, &u).unwrap().value;
            assert!(v <= 1e-28 * expect);
        }
    }

    #[test]
    fn ab_is_periodic_in_flux_quantum() {
        let u = UnitSystem::natural();
        let pt = ScatterPoint::new(0.4).unwrap();
        let phi0 = u.flux_quantum();
        let phi = 0.23 * phi0;
        let a = ab_exact(phi, 1.0, &pt, &u).unwrap().value;
        let b = ab_exact(phi + phi0, 1.0, &pt, &u).unwrap().value;
        let c = ab_exact(phi0 - phi, 1.0, &pt, &u).unwrap().value;
        assert!((a / b - 1.0).abs() < 1e-12);
        assert!((a / c - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ll_scalings() {
        let u = UnitSystem::natural();
        let pt = ScatterPoint::new(0.05).unwrap();
        let a = ll_small_angle(0.1, 2.0, &pt, &u).unwrap().value;
        let b = ll_small_angle(0.1, 2.0, &pt, &u.scale_hbar(2.0).unwrap())
            .unwrap()
            .value;
        assert!((a / b - 2.0).abs() < 1e-14);
        let c = ll_small_angle(0.1, 2.0, &ScatterPoint::new(0.1).unwrap(), &u)
            .unwrap()
            .value;
        assert!((a / c - 4.0).abs() < 1e-13);
    }

    #[test]
    fn small_x_f_factor_halves() {
        let (u, beam, sol) = natural_setup();
        let pt = ScatterPoint::new(0.3).unwrap();
        let one = small_x_reduction(&beam, &sol, &pt, &u).unwrap().value;
        let two = small_x_reduction(&beam.with_f(FFactor::TWO), &sol, &pt, &u)
            .unwrap()
            .value;
        assert_eq!(one, 2.0 * two);
    }

    #[test]
    fn small_theta_deviation_at_one_hundredth() {
        let (u, beam, sol) = natural_setup();
        let pt = ScatterPoint::new(0.01).unwrap();
        let a = small_x_small_theta(&beam, &sol, &pt, &u).unwrap().value;
        let b = small_x_reduction(&beam, &sol, &pt, &u).unwrap().value;
        // (θ/2)²/sin²(θ/2) − 1 ≈ θ²/12
        let dev = (b / a - 1.0).abs();
        assert!(dev < 1e-4);
        assert!((dev - 1e-4 / 12.0).abs() < 1e-9);
    }

    #[test]
    fn quantized_small_theta_scalings() {
        let u = UnitSystem::natural();
        let pt = ScatterPoint::new(0.02).unwrap();
        let a = quantized_small_theta(1, 3.0, &pt, FFactor::ONE, &u)
            .unwrap()
            .value;
        let b = quantized_small_theta(2, 3.0, &pt, FFactor::ONE, &u)
            .unwrap()
            .value;
        assert!((b / a - 4.0).abs() < 1e-14);
        let c = quantized_small_theta(1, 3.0, &pt, FFactor::ONE, &u.scale_hbar(3.0).unwrap())
            .unwrap()
            .value;
        assert!((c / a - 3.0).abs() < 1e-14);
        assert_eq!(
            quantized_xsec(0, 1.0, 3.0, &pt, FFactor::ONE, &u)
                .unwrap()
                .value,
            0.0
        );
    }

    #[test]
    fn quantized_small_theta_is_4pi_above_the_joint_limit() {
        let u = UnitSystem::natural();
        let pt = ScatterPoint::new(1e-3).unwrap();
        let (p, r0) = (1.0, 1e-3);
        let exact = quantized_xsec(3, r0, p, &pt, FFactor::ONE, &u)
            .unwrap()
            .value;
        let small_theta = quantized_small_theta(3, p, &pt, FFactor::ONE, &u)
            .unwrap()
            .value;
        assert!((small_theta / exact / (4.0 * PI) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn envelope_scalings() {
        let (u, beam, sol) = natural_setup();
        let pt = ScatterPoint::new(1.0).unwrap();
        let a = classical_envelope(&beam, &sol, &pt, &u).unwrap().value;
        let b = classical_envelope(&beam, &sol, &pt, &u.scale_hbar(3.0).unwrap())
            .unwrap()
            .value;
        assert!((b / a - 9.0).abs() < 1e-13);
        let sol2 = sol.with_r0(2.0 * sol.r0).unwrap();
        let c = classical_envelope(&beam, &sol2, &pt, &u).unwrap().value;
        assert!((a / c - 8.0).abs() < 1e-13);
    }

    #[test]
    fn uniform_field_flags() {
        let u = UnitSystem::natural();
        let beam = BeamSpec::new(1.0, 1.0, 1.0).unwrap();
        let p_i = FourVector::on_shell(1.0, [1.0, 0.0, 0.0]);
        let p_f = FourVector::on_shell(1.0, [0.0, 1.0, 0.0]);
        let c = uniform_field_coeff(&beam, 2.0, &p_i, &p_f, &u).unwrap();
        assert_eq!(c.delta_q1, DeltaFlag::Violated);
        assert_eq!(c.delta_q2, DeltaFlag::Violated);
        assert!(c.coefficient.unwrap().is_finite());

        let fwd = uniform_field_coeff(&beam, 2.0, &p_i, &p_i, &u).unwrap();
        assert_eq!(fwd.delta_q1, DeltaFlag::Satisfied);
        assert_eq!(fwd.delta_q2, DeltaFlag::Satisfied);
        assert_eq!(fwd.coefficient, None);
    }

    #[test]
    fn formula_names_round_trip() {
        for f in Formula::ALL {
            assert_eq!(Formula::from_name(f.name()), Some(f));
        }
        assert_eq!(Formula::from_name("nope"), None);
    }
}
