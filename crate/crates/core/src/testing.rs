//! Shared strategies and helpers for unit tests.

use proptest::prelude::*;

use crate::scalar::GaussianRational;

pub fn gaussian_rational() -> impl Strategy<Value = GaussianRational> {
    (-50i64..50, 1i64..20, -50i64..50, 1i64..20)
        .prop_map(|(a, b, c, d)| GaussianRational::from_parts(a, b, c, d))
}

/// All 24 orderings of `(0, 1, 2, 3)`.
pub fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|v| p.contains(&v)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}
