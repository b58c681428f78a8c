//! exp, sin and cos evaluated in fixed point at a working precision well above
//! the target, then rounded once.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::pi::pi_at;
use super::Real;

pub(crate) fn exp(x: &Real, prec: u32) -> Real {
    if x.is_zero() {
        return Real::one(prec);
    }
    let ax = x.abs();
    // |x| < 2^m; scale by 2^-s so the Taylor argument is below 2^-(s-m).
    let m = ax.top_exp().max(0);
    let s = m + ((prec as f64).sqrt() as i64) / 2 + 1;
    let w = prec as i64 + s + 40 + 2 * m;
    let wu = w as u32;
    let r = ax.to_fixed((w - s) as u32);
    let one = BigInt::from(1) << wu as usize;
    let mut sum = one.clone();
    let mut term = one;
    let mut k: u64 = 1;
    loop {
        term = (&term * &r >> wu as usize) / k;
        if term.is_zero() {
            break;
        }
        sum += &term;
        k += 1;
    }
    for _ in 0..s {
        sum = &sum * &sum >> wu as usize;
    }
    let y = Real::from_fixed(&sum, wu, prec + 8);
    let y = if x.is_negative() {
        &Real::one(prec + 8) / &y
    } else {
        y
    };
    y.with_prec(prec)
}

/// (sin x, cos x) rounded to `prec` bits.
pub(crate) fn sin_cos(x: &Real, prec: u32) -> (Real, Real) {
    if x.is_zero() {
        return (Real::zero(prec), Real::one(prec));
    }
    let top = x.top_exp().max(0) as u32;
    // tiny arguments need fraction bits below their leading bit
    let mut extra: u32 = 32 + (-x.top_exp()).max(0) as u32;
    loop {
        let w = prec + extra + top + 8;
        let pi = pi_at(w + top + 8).to_fixed(w);
        let half_pi = &pi >> 1usize;
        let xf = x.to_fixed(w);
        // nearest multiple of π/2
        let k = ((&xf << 1usize) + &half_pi).div_floor(&(&half_pi << 1usize));
        let t = &xf - &k * &half_pi;
        let sig = t.bits();
        if !t.is_zero() && sig < (prec + 24) as u64 && extra < 1 << 20 {
            // Cancellation in the reduction: retry with enough bits for the
            // residual to carry full precision.
            extra += (prec + 24 - sig as u32) + 16;
            continue;
        }
        let (s, c) = taylor_sin_cos(&t, w);
        let q = k.mod_floor(&BigInt::from(4)).to_u8().unwrap_or(0);
        let (s, c) = match q {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        };
        return (
            Real::from_fixed(&s, w, prec),
            Real::from_fixed(&c, w, prec),
        );
    }
}

fn taylor_sin_cos(t: &BigInt, w: u32) -> (BigInt, BigInt) {
    let one = BigInt::from(1) << w as usize;
    let t2 = t * t >> w as usize;
    let mut sin = t.clone();
    let mut term = t.clone();
    let mut i: u64 = 1;
    loop {
        term = -(&term * &t2 >> w as usize) / ((2 * i) * (2 * i + 1));
        if term.is_zero() {
            break;
        }
        sin += &term;
        i += 1;
    }
    let mut cos = one.clone();
    let mut term = one;
    let mut i: u64 = 1;
    loop {
        term = -(&term * &t2 >> w as usize) / ((2 * i - 1) * (2 * i));
        if term.is_zero() {
            break;
        }
        cos += &term;
        i += 1;
    }
    (sin, cos)
}
