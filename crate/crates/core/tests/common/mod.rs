#![allow(dead_code)]

use herglotz_core::jacobi::CoeffModel;
use herglotz_core::measures::{Interval, Measure, Piece};
use herglotz_core::SetUnion;
use proptest::prelude::*;

pub fn random_model(seed: u64) -> CoeffModel {
    CoeffModel::random(seed, (0.5, 1.5), (-1.0, 1.0)).unwrap()
}

/// Two or three disjoint intervals in `[-3, 3]` with lengths and gaps at least `0.1`.
pub fn interval_union() -> impl Strategy<Value = SetUnion> {
    (2usize..=3, prop::collection::vec(0.1f64..1.0, 6), -3.0f64..-2.0).prop_map(
        |(k, steps, start)| {
            let mut x = start;
            let mut pairs = Vec::new();
            for j in 0..k {
                let lo = x;
                let hi = lo + steps[2 * j];
                pairs.push((lo, hi));
                x = hi + steps[2 * j + 1];
            }
            SetUnion::from_pairs(&pairs).unwrap()
        },
    )
}

/// Atoms plus at most one positive linear-density piece; never empty.
pub fn measure() -> impl Strategy<Value = Measure> {
    (
        prop::collection::vec((-3.0f64..3.0, 0.1f64..1.0), 0..4),
        prop::option::of((-3.0f64..2.0, 0.2f64..2.0, 0.1f64..1.0, -0.05f64..0.05)),
    )
        .prop_map(|(mut atoms, piece)| {
            let mut pieces = Vec::new();
            if let Some((lo, len, c0, c1)) = piece {
                let iv = Interval::new(lo, lo + len).unwrap();
                pieces.push(Piece::from_fn(iv, 16, false, move |t| c0 + c1 * (t - lo)).unwrap());
            }
            if atoms.is_empty() && pieces.is_empty() {
                atoms.push((0.0, 1.0));
            }
            Measure::new(atoms, pieces).unwrap()
        })
}
