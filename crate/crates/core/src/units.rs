//! Gaussian CGS units with ħ, c and the charge unit carried as explicit,
//! independently scalable numbers.

use core::f64::consts::PI;

use crate::{Error, Result};

/// Reduced Planck constant, erg·s.
pub const HBAR_CGS: f64 = 1.054_571_817e-27;
/// Speed of light, cm/s.
pub const C_CGS: f64 = 2.997_924_58e10;
/// Elementary charge (CODATA), esu.
pub const E_CHARGE_CODATA: f64 = 4.803_204_71e-10;
/// One MeV in erg.
pub const MEV_IN_ERG: f64 = 1.602_176_634e-6;
/// Electron rest energy in MeV.
pub const ELECTRON_REST_MEV: f64 = 0.510_998_95;
/// Flux quantum hc/e used as the calibration target of [`UnitSystem::cgs`], gauss·cm².
pub const FLUX_QUANTUM_REFERENCE: f64 = 4.318e-7;

/// ħ, c and the charge unit of a consistent unit system.
///
/// `mev` is the size of one MeV expressed in the system's energy unit; it is
/// only used to interpret energies given in MeV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    pub hbar: f64,
    pub c: f64,
    pub e_charge: f64,
    pub mev: f64,
    pub label: &'static str,
}

impl UnitSystem {
    pub fn new(hbar: f64, c: f64, e_charge: f64, mev: f64, label: &'static str) -> Result<Self> {
        positive("hbar", hbar)?;
        positive("c", c)?;
        positive("e_charge", e_charge)?;
        positive("mev", mev)?;
        Ok(Self {
            hbar,
            c,
            e_charge,
            mev,
            label,
        })
    }

    /// Gaussian CGS. The charge unit is chosen so that 2πħc/e equals
    /// [`FLUX_QUANTUM_REFERENCE`] exactly.
    pub fn cgs() -> Self {
        Self {
            hbar: HBAR_CGS,
            c: C_CGS,
            e_charge: 2.0 * PI * HBAR_CGS * C_CGS / FLUX_QUANTUM_REFERENCE,
            mev: MEV_IN_ERG,
            label: "cgs",
        }
    }

    /// Gaussian CGS with the CODATA elementary charge (Φ0 ≈ 4.136e-7 gauss·cm²).
    pub fn cgs_codata() -> Self {
        Self {
            e_charge: E_CHARGE_CODATA,
            label: "cgs-codata",
            ..Self::cgs()
        }
    }

    /// ħ = c = e = 1, energies in MeV, lengths in MeV⁻¹.
    pub fn natural() -> Self {
        Self {
            hbar: 1.0,
            c: 1.0,
            e_charge: 1.0,
            mev: 1.0,
            label: "natural",
        }
    }

    /// 2πħc/e.
    pub fn flux_quantum(&self) -> f64 {
        2.0 * PI * self.hbar * self.c / self.e_charge
    }

    /// Same system with ħ multiplied by `s`; nothing else changes.
    pub fn scale_hbar(&self, s: f64) -> Result<Self> {
        positive("hbar scale", s)?;
        Ok(Self {
            hbar: self.hbar * s,
            ..*self
        })
    }

    pub fn with_e_charge(&self, e_charge: f64) -> Result<Self> {
        positive("e_charge", e_charge)?;
        Ok(Self { e_charge, ..*self })
    }

    /// Electron mass in the system's mass unit.
    pub fn electron_mass(&self) -> f64 {
        ELECTRON_REST_MEV * self.mev / (self.c * self.c)
    }
}

/// Relativistic momentum of a particle of mass `mass` and kinetic energy `kinetic`.
///
/// p = sqrt((T + mc²)² − m²c⁴)/c, evaluated as sqrt(T(T + 2mc²))/c to avoid
/// cancellation at small T.
pub fn momentum_from_kinetic(kinetic: f64, mass: f64, u: &UnitSystem) -> Result<f64> {
    non_negative("kinetic energy", kinetic)?;
    non_negative("mass", mass)?;
    let rest = mass * u.c * u.c;
    Ok(libm::sqrt(kinetic * (kinetic + 2.0 * rest)) / u.c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Helicity {
    Plus,
    Minus,
}

impl Helicity {
    pub fn sign(self) -> f64 {
        match self {
            Helicity::Plus => 1.0,
            Helicity::Minus => -1.0,
        }
    }
}

impl TryFrom<i32> for Helicity {
    type Error = Error;

    fn try_from(value: i32) -> Result<Self> {
        match value {
            1 => Ok(Helicity::Plus),
            -1 => Ok(Helicity::Minus),
            other => Err(Error::InvalidHelicity(other)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarization {
    SpinAveraged,
    Helicity { initial: Helicity, fin: Helicity },
}

/// 1 or 2, according to whether the final polarization is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FFactor(u8);

impl FFactor {
    pub const ONE: FFactor = FFactor(1);
    pub const TWO: FFactor = FFactor(2);

    pub fn new(f: u8) -> Result<Self> {
        match f {
            1 | 2 => Ok(FFactor(f)),
            other => Err(Error::InvalidFFactor(other)),
        }
    }

    pub fn get(self) -> f64 {
        f64::from(self.0)
    }
}

impl Default for FFactor {
    fn default() -> Self {
        FFactor::ONE
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSpec {
    pub mass: f64,
    pub momentum_p: f64,
    pub charge: f64,
    pub polarization: Polarization,
    pub f_factor: FFactor,
}

impl BeamSpec {
    /// Spin-averaged beam with f = 1.
    pub fn new(mass: f64, momentum_p: f64, charge: f64) -> Result<Self> {
        non_negative("mass", mass)?;
        non_negative("momentum", momentum_p)?;
        if !charge.is_finite() {
            return Err(Error::invalid("charge", "finite", charge));
        }
        Ok(Self {
            mass,
            momentum_p,
            charge,
            polarization: Polarization::SpinAveraged,
            f_factor: FFactor::ONE,
        })
    }

    /// Electron of kinetic energy `kinetic_mev` in the given units.
    pub fn electron(kinetic_mev: f64, u: &UnitSystem) -> Result<Self> {
        let mass = u.electron_mass();
        let p = momentum_from_kinetic(kinetic_mev * u.mev, mass, u)?;
        Self::new(mass, p, u.e_charge)
    }

    pub fn with_f(self, f_factor: FFactor) -> Self {
        Self { f_factor, ..self }
    }

    pub fn with_polarization(self, polarization: Polarization) -> Self {
        Self {
            polarization,
            ..self
        }
    }

    pub fn with_momentum(self, momentum_p: f64) -> Result<Self> {
        non_negative("momentum", momentum_p)?;
        Ok(Self { momentum_p, ..self })
    }

    pub fn with_charge(self, charge: f64) -> Self {
        Self { charge, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FluxSpec {
    /// Flux in gauss·cm² (or the flux unit of the active system).
    Flux(f64),
    /// Integer number of flux quanta 2πħc/e.
    Quanta(i64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolenoidSpec {
    pub r0: f64,
    pub flux: FluxSpec,
}

impl SolenoidSpec {
    pub fn new(r0: f64, flux: FluxSpec) -> Result<Self> {
        match flux {
            FluxSpec::Flux(phi) => Self::with_flux(r0, phi),
            FluxSpec::Quanta(n) => Self::with_quanta(r0, n),
        }
    }

    pub fn with_flux(r0: f64, flux: f64) -> Result<Self> {
        positive("r0", r0)?;
        if !flux.is_finite() {
            return Err(Error::invalid("flux", "finite", flux));
        }
        Ok(Self {
            r0,
            flux: FluxSpec::Flux(flux),
        })
    }

    pub fn with_quanta(r0: f64, n: i64) -> Result<Self> {
        positive("r0", r0)?;
        Ok(Self {
            r0,
            flux: FluxSpec::Quanta(n),
        })
    }

    pub fn with_r0(self, r0: f64) -> Result<Self> {
        positive("r0", r0)?;
        Ok(Self { r0, ..self })
    }

    /// Flux resolved under `u`.
    pub fn flux(&self, u: &UnitSystem) -> f64 {
        match self.flux {
            FluxSpec::Flux(phi) => phi,
            FluxSpec::Quanta(n) => n as f64 * u.flux_quantum(),
        }
    }

    /// Field inside the solenoid, Φ/(π r0²).
    pub fn interior_field(&self, u: &UnitSystem) -> f64 {
        self.flux(u) / (PI * self.r0 * self.r0)
    }
}

pub(crate) fn positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, "finite and > 0", v))
    }
}

pub(crate) fn non_negative(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, "finite and >= 0", v))
    }
}
