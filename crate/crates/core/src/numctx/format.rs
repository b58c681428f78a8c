//! Decimal formatting. Values are converted exactly from their binary form
//! and rounded to nearest (half away from zero) at the requested number of
//! significant digits.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::One;

use super::Real;

/// Significant decimal digits of `|x|`: returns `(digits, e10)` such that
/// `|x| ≈ 0.d1d2...dn * 10^(e10 + 1)`, i.e. the first digit has weight `10^e10`.
pub fn decimal_digits(x: &Real, n: usize) -> (String, i64) {
    assert!(n >= 1);
    if x.is_zero() {
        return ("0".repeat(n), 0);
    }
    let (mant, exp2) = x.to_parts();
    let mag = mant.magnitude().clone();
    let mut e10 = (x.log2_abs() * std::f64::consts::LOG10_2).floor() as i64;
    while cmp_pow10(&mag, exp2, e10) == Ordering::Less {
        e10 -= 1;
    }
    while cmp_pow10(&mag, exp2, e10 + 1) != Ordering::Less {
        e10 += 1;
    }
    let q = scaled_round(&mag, exp2, n as i64 - 1 - e10);
    if q == BigUint::from(10u32).pow(n as u32) {
        // rounded up across a decade: 9.99.. -> 10.0..
        return (format!("1{}", "0".repeat(n - 1)), e10 + 1);
    }
    (q.to_string(), e10)
}

/// Compare `mag * 2^exp2` with `10^e`.
fn cmp_pow10(mag: &BigUint, exp2: i64, e: i64) -> Ordering {
    let ten = BigUint::from(10u32);
    let mut lhs = mag.clone();
    let mut rhs = BigUint::one();
    if exp2 >= 0 {
        lhs <<= exp2 as u64;
    } else {
        rhs <<= (-exp2) as u64;
    }
    if e >= 0 {
        rhs *= ten.pow(e as u32);
    } else {
        lhs *= ten.pow((-e) as u32);
    }
    lhs.cmp(&rhs)
}

/// round(mag * 2^exp2 * 10^s)
fn scaled_round(mag: &BigUint, exp2: i64, s: i64) -> BigUint {
    let mut num = mag.clone();
    let mut den = BigUint::one();
    if s >= 0 {
        num *= BigUint::from(10u32).pow(s as u32);
    } else {
        den *= BigUint::from(10u32).pow((-s) as u32);
    }
    if exp2 >= 0 {
        num <<= exp2 as u64;
    } else {
        den <<= (-exp2) as u64;
    }
    let (q, r) = num.div_rem(&den);
    if r << 1u32 >= den {
        q + 1u32
    } else {
        q
    }
}

/// Fixed-notation string with `n` significant digits, falling back to
/// scientific notation for very large or very small magnitudes.
pub fn to_sig_digits(x: &Real, n: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let (digits, e10) = decimal_digits(x, n);
    let sign = if x.is_negative() { "-" } else { "" };
    if !(-6..30).contains(&e10) {
        return format!("{sign}{}", sci_from_digits(&digits, e10));
    }
    let body = if e10 >= n as i64 - 1 {
        let mut s = digits.clone();
        s.push_str(&"0".repeat((e10 - (n as i64 - 1)) as usize));
        s
    } else if e10 >= 0 {
        let (int, frac) = digits.split_at(e10 as usize + 1);
        format!("{int}.{frac}")
    } else {
        format!("0.{}{}", "0".repeat((-e10 - 1) as usize), digits)
    };
    format!("{sign}{body}")
}

/// Scientific notation with `n` significant digits, e.g. `1.07e-3`.
pub fn to_scientific(x: &Real, n: usize) -> String {
    if x.is_zero() {
        return format!("{}e0", if n > 1 { format!("0.{}", "0".repeat(n - 1)) } else { "0".into() });
    }
    let (digits, e10) = decimal_digits(x, n);
    let sign = if x.is_negative() { "-" } else { "" };
    format!("{sign}{}", sci_from_digits(&digits, e10))
}

fn sci_from_digits(digits: &str, e10: i64) -> String {
    let (lead, rest) = digits.split_at(1);
    if rest.is_empty() {
        format!("{lead}e{e10}")
    } else {
        format!("{lead}.{rest}e{e10}")
    }
}

/// `floor(-log10(err / |value|))`, clamped at zero. Used for every
/// achieved/certified digit count in the crate.
pub fn correct_digits(err: &Real, value: &Real) -> u32 {
    if value.is_zero() {
        return 0;
    }
    if err.is_zero() {
        return u32::MAX;
    }
    // The 1e-12 slack only absorbs f64 noise when err/|value| is an exact power of ten.
    let d = (value.log2_abs() - err.log2_abs()) * std::f64::consts::LOG10_2 + 1e-12;
    if d <= 0.0 {
        0
    } else {
        d.floor().min(u32::MAX as f64) as u32
    }
}

/// `10^(-digits)` as a value at `prec` bits.
pub fn pow10_neg(digits: u32, prec: u32) -> Real {
    let den = BigInt::from(10u32).pow(digits);
    Real::from_ratio(&BigInt::one(), &den, prec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(num: i64, den: i64) -> Real {
        Real::from_ratio(&BigInt::from(num), &BigInt::from(den), 200)
    }

    #[test]
    fn fixed_notation() {
        assert_eq!(to_sig_digits(&r(314159, 100000), 3), "3.14");
        assert_eq!(to_sig_digits(&r(-314159, 100000), 4), "-3.142");
        assert_eq!(to_sig_digits(&r(1, 8), 2), "0.13");
        assert_eq!(to_sig_digits(&r(9999, 1), 2), "10000");
        assert_eq!(to_sig_digits(&r(1, 2000), 2), "0.00050");
    }

    #[test]
    fn carry_across_decade() {
        assert_eq!(to_sig_digits(&r(99996, 10000), 4), "10.00");
        assert_eq!(to_sig_digits(&r(994, 100), 2), "9.9");
        assert_eq!(to_sig_digits(&r(1000, 1), 2), "1000");
    }

    #[test]
    fn scientific() {
        assert_eq!(to_scientific(&r(1, 937), 3), "1.07e-3");
        assert_eq!(to_scientific(&r(3, 1), 1), "3e0");
        assert_eq!(to_scientific(&r(-12345, 1), 2), "-1.2e4");
    }

    #[test]
    fn digit_counting() {
        assert_eq!(correct_digits(&r(1, 1000), &r(1, 1)), 3);
        assert_eq!(correct_digits(&r(2, 1), &r(1, 1)), 0);
        assert_eq!(correct_digits(&r(31, 1_000_000), &r(31, 1)), 6);
    }
}
