//! IO companion to `solenoid_xsec_core`: configuration files, CSV/JSON
//! emission, the Figure 1 polar-plot dataset and the oracle-backed
//! verification runs used by the `solenoid-xsec` binary.

pub mod config;
pub mod emit;
pub mod figure1;
pub mod oracle;
pub mod run;
pub mod verify;
