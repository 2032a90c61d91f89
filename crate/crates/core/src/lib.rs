pub mod born;
pub mod distributions;
pub mod error;
pub mod kinematics;
pub mod potentials;
pub mod quadrature;
pub mod specfun;

pub use error::{BornError, Result};
