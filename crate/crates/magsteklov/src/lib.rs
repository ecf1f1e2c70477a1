//! Spectra of magnetic Hodge Laplacians (S¹, S³) and magnetic Steklov
//! operators on 1-forms (B², B⁴) for Killing-field magnetic potentials,
//! together with independent verification oracles (radial ODE power series,
//! Galerkin min-max, harmonic-extension audits) and the quadratic
//! diamagnetic-inequality bound whose violation the spectra exhibit.

pub mod diamagnetic;
pub mod error;
pub mod figures;
pub mod oracle;
pub mod quadrature;
pub mod specfun;
pub mod spectra;

pub use error::{Error, Result};
pub use spectra::{Domain, Family, MagneticParameter, ModeIndex, Spectrum};
