//! Resolution of a [`RunConfig`] into physics inputs, and the records emitted
//! by the `xsec` and `limits` commands.

use anyhow::{anyhow, bail, Result};
use solenoid_xsec_core::limits::{Regime, RegimeThresholds, ScanResult};
use solenoid_xsec_core::units::{
    momentum_from_kinetic, BeamSpec, FFactor, FluxSpec, Helicity, SolenoidSpec, UnitSystem,
};
use solenoid_xsec_core::xsec::{
    ab_exact, classical_envelope, helicity_conserving_xsec, helicity_xsec, ll_small_angle,
    master_xsec, quantized_small_theta, quantized_xsec, small_x_reduction, small_x_small_theta,
    Formula, ScatterPoint, XsecValue,
};

use crate::config::{RunConfig, Units};
use crate::emit::{record, Dataset, Value};

pub const XSEC_COLUMNS: [&str; 10] = [
    "formula",
    "units",
    "energy_mev",
    "momentum",
    "theta_rad",
    "r0_cm",
    "flux",
    "f",
    "value_cm_per_rad",
    "regime",
];

pub const SCAN_COLUMNS: [&str; 2] = ["s", "sigma"];

/// Physics inputs resolved from a configuration with command defaults applied.
#[derive(Debug, Clone, Copy)]
pub struct Setup {
    pub units: Units,
    pub u: UnitSystem,
    pub beam: BeamSpec,
    pub sol: SolenoidSpec,
    pub kinetic_mev: f64,
    pub thresholds: RegimeThresholds,
}

impl Setup {
    /// Electron beam of 1 MeV kinetic energy on a 1 cm solenoid with one flux
    /// quantum unless the configuration says otherwise.
    pub fn from_config(cfg: &RunConfig) -> Result<Setup> {
        if cfg.energy_mev.is_some() && cfg.momentum.is_some() {
            bail!("energy_mev and momentum are alternatives; set only one");
        }
        if cfg.flux.is_some() && cfg.quanta.is_some() {
            bail!("flux and quanta are alternatives; set only one");
        }
        let units = cfg.units.unwrap_or_default();
        let u = units.system();
        let mass = u.electron_mass();
        let (momentum, kinetic_mev) = match cfg.momentum {
            Some(p) => {
                let mc2 = mass * u.c * u.c;
                let kinetic = ((p * u.c).hypot(mc2) - mc2) / u.mev;
                (p, kinetic)
            }
            None => {
                let t = cfg.energy_mev.unwrap_or(1.0);
                (momentum_from_kinetic(t * u.mev, mass, &u)?, t)
            }
        };
        let f = FFactor::new(cfg.f.unwrap_or(1))?;
        let beam = BeamSpec::new(mass, momentum, u.e_charge)?.with_f(f);
        let flux = match (cfg.flux, cfg.quanta) {
            (Some(phi), _) => FluxSpec::Flux(phi),
            (None, n) => FluxSpec::Quanta(n.unwrap_or(1)),
        };
        let sol = SolenoidSpec::new(cfg.r0_cm.unwrap_or(1.0), flux)?;
        Ok(Setup {
            units,
            u,
            beam,
            sol,
            kinetic_mev,
            thresholds: cfg.thresholds(),
        })
    }
}

pub fn parse_formula(name: &str) -> Result<Formula> {
    Formula::from_name(name).ok_or_else(|| {
        let known: Vec<&str> = Formula::ALL.iter().map(|f| f.name()).collect();
        anyhow!(
            "unknown formula `{name}` (expected one of {})",
            known.join(", ")
        )
    })
}

fn helicity(v: Option<i32>, key: &str) -> Result<Helicity> {
    Helicity::try_from(v.unwrap_or(1)).map_err(|e| anyhow!("{key}: {e}"))
}

pub fn evaluate(
    setup: &Setup,
    formula: Formula,
    pt: &ScatterPoint,
    cfg: &RunConfig,
) -> Result<XsecValue> {
    let Setup { u, beam, sol, .. } = setup;
    let p = beam.momentum_p;
    let quanta = || match sol.flux {
        FluxSpec::Quanta(n) => Ok(n),
        FluxSpec::Flux(_) => Err(anyhow!(
            "formula `{}` needs the flux as quanta",
            formula.name()
        )),
    };
    let v = match formula {
        Formula::Master => master_xsec(beam, sol, pt, u)?,
        Formula::Helicity => helicity_xsec(
            beam,
            sol,
            pt,
            u,
            helicity(cfg.lambda_i, "lambda_i")?,
            helicity(cfg.lambda_f, "lambda_f")?,
        )?,
        Formula::HelicityConserving => helicity_conserving_xsec(beam, sol, pt, u)?,
        Formula::AharonovBohm => ab_exact(sol.flux(u), p, pt, u)?,
        Formula::LandauLifshitz => ll_small_angle(sol.flux(u), p, pt, u)?,
        Formula::SmallX => small_x_reduction(beam, sol, pt, u)?,
        Formula::SmallXSmallTheta => small_x_small_theta(beam, sol, pt, u)?,
        Formula::Quantized => quantized_xsec(quanta()?, sol.r0, p, pt, beam.f_factor, u)?,
        Formula::QuantizedSmallTheta => quantized_small_theta(quanta()?, p, pt, beam.f_factor, u)?,
        Formula::ClassicalEnvelope => classical_envelope(beam, sol, pt, u)?,
    };
    Ok(v)
}

/// Regime tag under the configured thresholds; zero-radius forms keep their own.
pub fn regime(setup: &Setup, v: &XsecValue, pt: &ScatterPoint) -> Regime {
    match v.formula {
        Formula::AharonovBohm | Formula::LandauLifshitz | Formula::QuantizedSmallTheta => v.regime,
        _ => setup
            .thresholds
            .classify(pt.x(setup.beam.momentum_p, setup.sol.r0, &setup.u)),
    }
}

pub fn xsec_record(
    setup: &Setup,
    formula: Formula,
    theta: f64,
    cfg: &RunConfig,
) -> Result<Vec<(String, Value)>> {
    let pt = ScatterPoint::new(theta)?;
    let v = evaluate(setup, formula, &pt, cfg)?;
    let inputs = record([
        ("units", setup.units.to_string().as_str().into()),
        ("energy_mev", setup.kinetic_mev.into()),
        ("momentum", setup.beam.momentum_p.into()),
        ("theta_rad", theta.into()),
        ("r0_cm", setup.sol.r0.into()),
        ("flux", setup.sol.flux(&setup.u).into()),
        ("f", i64::from(cfg.f.unwrap_or(1)).into()),
    ]);
    Ok(record([
        ("formula", formula.name().into()),
        ("inputs", Value::Object(inputs)),
        ("value_cm_per_rad", v.value.into()),
        ("regime", regime(setup, &v, &pt).name().into()),
    ]))
}

pub fn xsec_dataset(
    setup: &Setup,
    formula: Formula,
    thetas: &[f64],
    cfg: &RunConfig,
) -> Result<Dataset> {
    let mut d = Dataset::new(XSEC_COLUMNS);
    for &t in thetas {
        d.push(xsec_record(setup, formula, t, cfg)?);
    }
    Ok(d)
}

pub fn scan_dataset(result: &ScanResult) -> Dataset {
    let mut d = Dataset::new(SCAN_COLUMNS);
    for &(s, sigma) in &result.samples {
        d.push(record([("s", s.into()), ("sigma", sigma.into())]));
    }
    d
}

/// `{"slope": …, "stderr": …, "n_maxima": …}` followed by a newline.
pub fn scan_summary(result: &ScanResult) -> String {
    format!(
        "{{\"slope\": {}, \"stderr\": {}, \"n_maxima\": {}}}\n",
        crate::emit::format_number(result.slope),
        crate::emit::format_number(result.slope_stderr),
        result.maxima.len()
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_one_mev_electron_and_one_quantum() {
        let s = Setup::from_config(&RunConfig::default()).unwrap();
        assert_eq!(s.sol.flux, FluxSpec::Quanta(1));
        assert_eq!(s.sol.r0, 1.0);
        assert_eq!(s.kinetic_mev, 1.0);
    }

    #[test]
    fn momentum_and_energy_describe_the_same_beam() {
        let a = Setup::from_config(&RunConfig {
            energy_mev: Some(5.0),
            ..Default::default()
        })
        .unwrap();
        let b = Setup::from_config(&RunConfig {
            momentum: Some(a.beam.momentum_p),
            ..Default::default()
        })
        .unwrap();
        assert!((b.kinetic_mev - 5.0).abs() < 1e-9);
    }

    #[test]
    fn quantized_needs_quanta() {
        let cfg = RunConfig {
            flux: Some(1e-7),
            ..Default::default()
        };
        let s = Setup::from_config(&cfg).unwrap();
        let pt = ScatterPoint::new(1.0).unwrap();
        assert!(evaluate(&s, Formula::Quantized, &pt, &cfg).is_err());
        assert!(evaluate(&s, Formula::Master, &pt, &cfg).is_ok());
    }

    #[test]
    fn forward_angle_is_rejected_with_message() {
        let cfg = RunConfig::default();
        let s = Setup::from_config(&cfg).unwrap();
        let err = xsec_record(&s, Formula::Master, 0.0, &cfg).unwrap_err();
        assert!(err.to_string().contains("forward singularity"));
    }

    #[test]
    fn unknown_formula_lists_choices() {
        let e = parse_formula("rutherford").unwrap_err().to_string();
        assert!(e.contains("master") && e.contains("envelope"));
    }
}
