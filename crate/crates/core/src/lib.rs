pub mod error;
pub mod specfun;

pub use error::{Error, ErrorKind, OrderSide, Result};
pub mod divergence;
pub mod entropy;
pub mod montecarlo;
pub mod quadrature;
pub mod radial;
