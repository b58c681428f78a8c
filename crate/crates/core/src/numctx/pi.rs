//! Reference π from two independent fixed-point algorithms: Machin's
//! arctangent formula and the Gauss–Legendre AGM iteration. Every value handed
//! out has been produced by both and checked for agreement.

use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::Real;

const PI_GUARD: u32 = 40;

/// `atan(1/m) * 2^frac` by the alternating Taylor series.
fn atan_inv(m: u32, frac: u32) -> BigInt {
    let m2 = BigInt::from(m) * m;
    let mut power = (BigInt::from(1) << frac as usize) / m;
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !power.is_zero() {
        let term = &power / (2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &m2;
        k += 1;
    }
    sum
}

/// π·2^frac via 16·atan(1/5) − 4·atan(1/239).
pub(crate) fn machin_fixed(frac: u32) -> BigInt {
    (atan_inv(5, frac) << 4usize) - (atan_inv(239, frac) << 2usize)
}

/// π·2^frac via the Gauss–Legendre iteration.
pub(crate) fn agm_fixed(frac: u32) -> BigInt {
    let one = BigInt::from(1) << frac as usize;
    let sqrt_fixed = |v: &BigInt| (v << frac as usize).sqrt();
    let mut a = one.clone();
    let mut b = sqrt_fixed(&(&one >> 1usize));
    let mut t = &one >> 2usize;
    let mut p: u64 = 1;
    let eps = BigInt::from(16);
    loop {
        let a_next = (&a + &b) >> 1usize;
        b = sqrt_fixed(&(&a * &b >> frac as usize));
        let d = &a - &a_next;
        t -= (&d * &d >> frac as usize) * p;
        a = a_next;
        p *= 2;
        if (&a - &b).abs() <= eps {
            break;
        }
    }
    let s = &a + &b;
    (&s * &s) / (t << 2usize)
}

fn compute(bits: u32) -> Real {
    let frac = bits + PI_GUARD;
    let machin = machin_fixed(frac);
    let agm = agm_fixed(frac);
    let gap = (&machin - &agm).abs();
    // Each route is good to a few hundred units of 2^-frac; demand agreement
    // well inside the guard band.
    assert!(
        gap.bits() <= (PI_GUARD - 8) as u64,
        "reference pi: Machin and AGM disagree by {gap} units at {bits} bits"
    );
    Real::from_fixed(&machin, frac, bits)
}

/// π rounded to `bits` significant bits.
pub fn pi_at(bits: u32) -> Real {
    static CACHE: OnceLock<Mutex<BTreeMap<u32, Real>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(v) = cache.lock().expect("pi cache poisoned").get(&bits) {
        return v.clone();
    }
    let v = compute(bits);
    cache
        .lock()
        .expect("pi cache poisoned")
        .entry(bits)
        .or_insert(v)
        .clone()
}
