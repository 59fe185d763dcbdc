//! Jacobi coefficient models, transfer solutions, m-functions and finite
//! truncations.

mod mfunction;
mod model;
mod recursion;
mod tridiag;

pub use mfunction::{
    green_avg, m_free, m_plus, right_m_sequence, GreenAverage, GreenValue, MValue,
};
pub use model::{CoeffModel, Frequency, ModelKind};
pub use recursion::{fminus, log_abs_end, prufer_minus, PruferTrace, Scalar, SolutionTrace};
pub use tridiag::{truncate, Tridiagonal};
