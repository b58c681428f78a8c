//! Fixed-point accumulation. Terms are rounded once into integers scaled by
//! `2^frac`; integer addition is associative, so serial summation and the
//! parallel chunk tree produce bit-identical sums.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use super::terms::Body;
use crate::numctx::fixed_ratio;

/// Index-range chunk size for the parallel reduction.
pub const CHUNK: u64 = 4096;

/// Σ_{i=lo..=hi} of indexed body terms in fixed point. Every term is rounded
/// to nearest, so the error is at most `(hi − lo + 1)/2` units.
pub(crate) fn sum_indexed(body: &Body, lo: u64, hi: u64, frac: u32, parallel: bool) -> BigInt {
    if lo > hi {
        return BigInt::zero();
    }
    let term = |i: u64| {
        let (n, d) = body.indexed_ratio(i);
        fixed_ratio(&n, &d, frac)
    };
    if !parallel {
        return (lo..=hi).map(term).sum();
    }
    let starts: Vec<u64> = (lo..=hi).step_by(CHUNK as usize).collect();
    let partials: Vec<BigInt> = starts
        .into_par_iter()
        .map(|s| (s..=hi.min(s + CHUNK - 1)).map(term).sum())
        .collect();
    tree_reduce(partials)
}

/// Pairwise reduction in a fixed binary tree shape.
pub(crate) fn tree_reduce(mut level: Vec<BigInt>) -> BigInt {
    if level.is_empty() {
        return BigInt::zero();
    }
    while level.len() > 1 {
        level = level
            .chunks(2)
            .map(|pair| pair.iter().sum::<BigInt>())
            .collect();
    }
    level.pop().expect("non-empty level")
}
