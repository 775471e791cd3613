//! Exact intersection numbers, divisor classes and theorem certificates on
//! the moduli space of stable rational curves with `n` marked points.

pub mod coinv;
pub mod combinat;
pub mod divisors;
pub mod error;
pub mod exactlin;
pub mod par;
pub mod verify;

pub use error::{Error, Result};
