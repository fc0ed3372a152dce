//! First-order (Born) scattering of Dirac particles by the field of a long
//! solenoid.
//!
//! The crate is `no_std` (it needs `alloc` only for scan buffers) and keeps
//! ħ, c and the charge unit as explicit numbers so that the classical limit
//! can be probed by rescaling ħ alone.
//!
//! Modules:
//! - [`units`]: unit systems, beam and solenoid descriptions.
//! - [`specfun`]: J0, J1, the leading large-argument form of J1 and zeros of J1.
//! - [`spinor`]: Dirac algebra in the Bjorken–Drell representation and spin sums.
//! - [`formfactor`]: the planar Fourier integrals of the solenoid vector
//!   potential, in closed form and by quadrature.
//! - [`xsec`]: the differential cross sections and their limiting forms.
//! - [`limits`]: regime classification, ħ and r0 scans, power-law fits.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;
pub mod formfactor;
pub mod limits;
pub mod quadrature;
pub mod specfun;
pub mod spinor;
pub mod units;
pub mod xsec;

pub use error::Error;

pub type Result<T> = core::result::Result<T, Error>;
