//! The polar-plot dataset of dσ/(dx3 dθ)·10⁵² for electrons of kinetic
//! energy 1, 3, …, 49 MeV on a solenoid of radius 1 cm carrying one flux
//! quantum.

use std::f64::consts::PI;

use solenoid_xsec_core::specfun::{bessel_j1_zero, j1, j1_zero_count, j1_zero_mcmahon};
use solenoid_xsec_core::units::{BeamSpec, FFactor, FluxSpec, SolenoidSpec, UnitSystem};
use solenoid_xsec_core::xsec::{master_xsec, quantized_xsec, ScatterPoint};
use solenoid_xsec_core::{Error, Result};

use crate::emit::{record, Dataset};

pub const COLUMNS: [&str; 3] = ["energy_mev", "theta_rad", "sigma_scaled"];

#[derive(Debug, Clone, PartialEq)]
pub struct Figure1Spec {
    pub flux: FluxSpec,
    pub r0: f64,
    /// Kinetic energies of the electron beam.
    pub energies_mev: Vec<f64>,
    pub scale: f64,
    /// Half-width of the excluded band around θ = 0.
    pub theta_min: f64,
    /// Grid points on each side of θ = 0, both ends included.
    pub theta_points: usize,
}

impl Default for Figure1Spec {
    fn default() -> Self {
        Self {
            flux: FluxSpec::Quanta(1),
            r0: 1.0,
            energies_mev: (0..25).map(|i| 1.0 + 2.0 * f64::from(i)).collect(),
            scale: 1e52,
            theta_min: 1e-3,
            theta_points: 181,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Figure1Row {
    pub energy_mev: f64,
    pub theta: f64,
    pub sigma_scaled: f64,
}

/// Positive half of the grid: θmin, …, π evenly spaced.
pub fn positive_thetas(theta_min: f64, n: usize) -> Result<Vec<f64>> {
    if !(theta_min > 0.0 && theta_min < PI) {
        return Err(Error::InvalidInput {
            name: "theta_min",
            requirement: "within (0, pi)",
            value: theta_min,
        });
    }
    if n < 2 {
        return Err(Error::InvalidInput {
            name: "theta_points",
            requirement: "at least 2",
            value: n as f64,
        });
    }
    let step = (PI - theta_min) / (n - 1) as f64;
    Ok((0..n)
        .map(|j| {
            if j == n - 1 {
                PI
            } else {
                theta_min + step * j as f64
            }
        })
        .collect())
}

/// Symmetric grid −θ_{n−2}, …, −θmin, θmin, …, π. The point −π is the same
/// direction as π and is left out.
pub fn theta_grid(theta_min: f64, n: usize) -> Result<Vec<f64>> {
    let pos = positive_thetas(theta_min, n)?;
    let mut grid: Vec<f64> = pos[..n - 1].iter().rev().map(|t| -t).collect();
    grid.extend_from_slice(&pos);
    Ok(grid)
}

fn check_spec(spec: &Figure1Spec) -> Result<()> {
    if let Some(&e) = spec
        .energies_mev
        .iter()
        .find(|e| !(e.is_finite() && **e >= 0.0))
    {
        return Err(Error::InvalidInput {
            name: "energy_mev",
            requirement: "finite and non-negative",
            value: e,
        });
    }
    if !(spec.scale.is_finite() && spec.scale > 0.0) {
        return Err(Error::InvalidInput {
            name: "scale",
            requirement: "finite and positive",
            value: spec.scale,
        });
    }
    Ok(())
}

/// σ for one energy at one angle: the quantized form when the flux is given
/// in quanta, the master form otherwise.
fn sigma(
    spec: &Figure1Spec,
    beam: &BeamSpec,
    sol: &SolenoidSpec,
    pt: &ScatterPoint,
    u: &UnitSystem,
) -> Result<f64> {
    Ok(match spec.flux {
        FluxSpec::Quanta(n) => {
            quantized_xsec(n, spec.r0, beam.momentum_p, pt, FFactor::ONE, u)?.value
        }
        FluxSpec::Flux(_) => master_xsec(beam, sol, pt, u)?.value,
    })
}

pub fn figure1_dataset(spec: &Figure1Spec, u: &UnitSystem) -> Result<Vec<Figure1Row>> {
    check_spec(spec)?;
    let grid = theta_grid(spec.theta_min, spec.theta_points)?;
    let sol = SolenoidSpec::new(spec.r0, spec.flux)?;
    let mut rows = Vec::with_capacity(spec.energies_mev.len() * grid.len());
    for &energy in &spec.energies_mev {
        let beam = BeamSpec::electron(energy, u)?;
        for &theta in &grid {
            let pt = ScatterPoint::new(theta)?;
            rows.push(Figure1Row {
                energy_mev: energy,
                theta,
                sigma_scaled: sigma(spec, &beam, &sol, &pt, u)? * spec.scale,
            });
        }
    }
    Ok(rows)
}

pub fn to_dataset(rows: &[Figure1Row]) -> Dataset {
    let mut d = Dataset::new(COLUMNS);
    for r in rows {
        d.push(record([
            ("energy_mev", r.energy_mev.into()),
            ("theta_rad", r.theta.into()),
            ("sigma_scaled", r.sigma_scaled.into()),
        ]));
    }
    d
}

/// Angle θ ∈ (0, π] at which x = 2 p r0 sin(θ/2)/ħ equals the k-th zero of J1.
pub fn predicted_zero_angle(k: u64, p: f64, r0: f64, u: &UnitSystem) -> Option<f64> {
    let zero = u32::try_from(k)
        .ok()
        .and_then(|k| bessel_j1_zero(k).ok())
        .unwrap_or_else(|| j1_zero_mcmahon(k));
    let s = zero * u.hbar / (2.0 * p * r0);
    (s <= 1.0).then(|| 2.0 * s.asin())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ZeroParity {
    pub intervals: usize,
    /// Intervals with an endpoint too close to a zero to read the sign.
    pub ambiguous: usize,
    pub mismatched: usize,
}

/// Compares, for each interval of the positive θ grid, whether J1(x(θ))
/// changes sign with whether the predicted zero count in the interval is odd.
pub fn zero_parity(spec: &Figure1Spec, energy_mev: f64, u: &UnitSystem) -> Result<ZeroParity> {
    let beam = BeamSpec::electron(energy_mev, u)?;
    let xs: Vec<f64> = positive_thetas(spec.theta_min, spec.theta_points)?
        .into_iter()
        .map(|t| Ok(ScatterPoint::new(t)?.x(beam.momentum_p, spec.r0, u)))
        .collect::<Result<_>>()?;
    let mut out = ZeroParity::default();
    for w in xs.windows(2) {
        out.intervals += 1;
        let (a, b) = (j1(w[0]), j1(w[1]));
        let resolved = |x: f64, v: f64| v.abs() > 1e-3 * (2.0 / (PI * x)).sqrt();
        if !(resolved(w[0], a) && resolved(w[1], b)) {
            out.ambiguous += 1;
            continue;
        }
        let predicted = j1_zero_count(w[1]) - j1_zero_count(w[0]);
        if ((a > 0.0) != (b > 0.0)) != (predicted % 2 == 1) {
            out.mismatched += 1;
        }
    }
    Ok(out)
}
