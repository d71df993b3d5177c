pub mod arith;
pub mod asymptotics;
pub mod complex;
pub mod dd;
pub mod error;
pub mod precision;
pub mod quadrature;
pub mod real;
pub mod report;
pub mod special;
pub mod summation;
pub mod zeros;
pub mod zerosums;

pub use complex::{Complex, ComplexScalar, C64};
pub use dd::Dd;
pub use error::{Error, Result};
pub use precision::Precision;
pub use real::Real;
