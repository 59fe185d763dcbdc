//! Finite measures on the line and the interval-union transforms.

mod measure;
mod set;
mod transforms;

pub use measure::{kolmogorov, Measure, Piece, ATOM_TOL, DEFAULT_DEGREE, MAX_MOMENT};
pub use set::{Interval, SetUnion};
pub use transforms::{
    inverse_distance_integral, lebesgue_density, tilde_hilbert, tilde_hilbert_at,
    truncated_hilbert, BoundedFn, TildeHilbert,
};
