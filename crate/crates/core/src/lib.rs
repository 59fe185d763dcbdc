//! Spectral theory of half-line Jacobi operators: measures and their
//! transforms, Herglotz and Krein functions, density of states, Lyapunov
//! exponents and logarithmic potential theory on finite interval unions.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod dos;
pub mod error;
pub mod herglotz;
pub mod jacobi;
pub mod limit;
pub mod measures;
pub mod potential;
pub mod quad;

pub use error::{Error, Result};
pub use herglotz::{Herglotz, HerglotzEval, HerglotzRep, KreinFn};
pub use limit::{Limit, Schedule};
pub use measures::{Interval, Measure, SetUnion};
