//! Hamilton-Jacobi spectral dynamics for large random matrix models.

pub mod error;
pub mod quaternion;
pub mod measure;
pub mod ensemble;
pub mod poly;
pub mod spectra;
pub mod unitary;
pub mod hciz;
pub mod characteristics;
pub mod linalg;
pub mod mc;
pub mod validate;
