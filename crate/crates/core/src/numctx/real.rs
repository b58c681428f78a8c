//! Binary floating-point values with an arbitrary-length mantissa.
//!
//! A [`Real`] is `(-1)^neg * mag * 2^exp` where `mag` carries at most `prec`
//! significant bits. Every constructor and arithmetic operation rounds to
//! nearest (ties to even), so the representation of a value is unique once the
//! trailing zero bits of the mantissa are stripped.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone)]
pub struct Real {
    neg: bool,
    mag: BigUint,
    exp: i64,
    prec: u32,
}

impl Real {
    pub fn zero(prec: u32) -> Self {
        Real {
            neg: false,
            mag: BigUint::zero(),
            exp: 0,
            prec,
        }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_int(1, prec)
    }

    pub fn from_int(v: i64, prec: u32) -> Self {
        Self::from_bigint(&BigInt::from(v), 0, prec)
    }

    /// `v * 2^exp`, rounded to `prec` bits.
    pub fn from_bigint(v: &BigInt, exp: i64, prec: u32) -> Self {
        let neg = v.sign() == Sign::Minus;
        Self::round_parts(neg, v.magnitude().clone(), exp, prec)
    }

    /// Fixed-point value `v / 2^frac_bits`.
    pub fn from_fixed(v: &BigInt, frac_bits: u32, prec: u32) -> Self {
        Self::from_bigint(v, -(frac_bits as i64), prec)
    }

    /// Correctly rounded quotient of two integers.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        assert!(!den.is_zero(), "Real::from_ratio with zero denominator");
        let neg = (num.sign() == Sign::Minus) != (den.sign() == Sign::Minus);
        let (mag, exp) = div_mag(num.magnitude(), 0, den.magnitude(), 0, prec);
        Self::round_parts(neg && !mag.is_zero(), mag, exp, prec)
    }

    pub fn from_f64_exact(v: f64, prec: u32) -> Self {
        assert!(v.is_finite(), "Real::from_f64_exact on non-finite input");
        if v == 0.0 {
            return Self::zero(prec);
        }
        let bits = v.to_bits();
        let neg = bits >> 63 == 1;
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Self::round_parts(neg, BigUint::from(m), e, prec)
    }

    fn round_parts(neg: bool, mag: BigUint, exp: i64, prec: u32) -> Self {
        assert!(prec >= 2, "precision must be at least 2 bits");
        if mag.is_zero() {
            return Self::zero(prec);
        }
        let len = mag.bits();
        let (mut mag, mut exp) = if len > prec as u64 {
            let shift = len - prec as u64;
            let q = &mag >> shift;
            let rem = &mag - (&q << shift);
            let half = BigUint::one() << (shift - 1);
            let q = match rem.cmp(&half) {
                Ordering::Greater => q + 1u32,
                Ordering::Equal if q.is_odd() => q + 1u32,
                _ => q,
            };
            (q, exp + shift as i64)
        } else {
            (mag, exp)
        };
        if let Some(tz) = mag.trailing_zeros() {
            if tz > 0 {
                mag >>= tz;
                exp += tz as i64;
            }
        }
        Real {
            neg,
            mag,
            exp,
            prec,
        }
    }

    /// Working precision in bits.
    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self::round_parts(self.neg, self.mag.clone(), self.exp, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.mag.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.neg
    }

    pub fn abs(&self) -> Self {
        Real {
            neg: false,
            ..self.clone()
        }
    }

    /// Mantissa and exponent such that `self == mant * 2^exp` exactly.
    pub fn to_parts(&self) -> (BigInt, i64) {
        let sign = if self.neg { Sign::Minus } else { Sign::Plus };
        (BigInt::from_biguint(sign, self.mag.clone()), self.exp)
    }

    /// Smallest `e` with `|self| < 2^e`; `i64::MIN` for zero.
    pub fn top_exp(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exp + self.mag.bits() as i64
        }
    }

    /// Round to nearest fixed-point integer `round(self * 2^frac_bits)`.
    pub fn to_fixed(&self, frac_bits: u32) -> BigInt {
        let shift = self.exp + frac_bits as i64;
        let mag = if shift >= 0 {
            &self.mag << shift as u64
        } else {
            round_shift_right(&self.mag, (-shift) as u64)
        };
        BigInt::from_biguint(if self.neg { Sign::Minus } else { Sign::Plus }, mag)
    }

    /// Approximate `log2 |self|`; `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let len = self.mag.bits();
        let take = len.min(60);
        let top = (&self.mag >> (len - take)).to_u64().unwrap_or(u64::MAX) as f64;
        top.log2() + (len - take) as f64 + self.exp as f64
    }

    /// Nearest `f64`; saturates to infinity and flushes to zero outside its range.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let len = self.mag.bits();
        let take = len.min(63);
        let top = (&self.mag >> (len - take)).to_u64().unwrap_or(u64::MAX) as f64;
        let e = (len - take) as i64 + self.exp;
        let v = if e > 2000 {
            f64::INFINITY
        } else if e < -2200 {
            0.0
        } else {
            top * 2f64.powi(e as i32)
        };
        if self.neg {
            -v
        } else {
            v
        }
    }

    fn aligned(&self, e0: i64) -> BigInt {
        let mag = if self.exp >= e0 {
            &self.mag << (self.exp - e0) as u64
        } else {
            &self.mag >> (e0 - self.exp) as u64
        };
        BigInt::from_biguint(if self.neg { Sign::Minus } else { Sign::Plus }, mag)
    }

    fn add_impl(&self, other: &Real) -> Real {
        let prec = self.prec.max(other.prec);
        if other.is_zero() {
            return self.with_prec(prec);
        }
        if self.is_zero() {
            return other.with_prec(prec);
        }
        let top = self.top_exp().max(other.top_exp());
        let floor = top - prec as i64 - 64;
        let e0 = self.exp.min(other.exp).max(floor);
        let s = self.aligned(e0) + other.aligned(e0);
        Real::from_bigint(&s, e0, prec)
    }

    fn mul_impl(&self, other: &Real) -> Real {
        let prec = self.prec.max(other.prec);
        Real::round_parts(
            self.neg != other.neg,
            &self.mag * &other.mag,
            self.exp + other.exp,
            prec,
        )
    }

    fn div_impl(&self, other: &Real) -> Real {
        assert!(!other.is_zero(), "Real division by zero");
        let prec = self.prec.max(other.prec);
        let (mag, exp) = div_mag(&self.mag, self.exp, &other.mag, other.exp, prec);
        Real::round_parts(self.neg != other.neg, mag, exp, prec)
    }

    /// Square root rounded to `self.prec()` bits. Panics on negative input;
    /// the checked entry point is [`crate::numctx::elem`].
    pub fn sqrt(&self) -> Real {
        self.sqrt_prec(self.prec)
    }

    /// Square root rounded to `prec` bits.
    pub fn sqrt_prec(&self, prec: u32) -> Real {
        assert!(!self.neg, "Real::sqrt of a negative value");
        if self.is_zero() {
            return Real::zero(prec);
        }
        let want = 2 * (prec as i64 + 4);
        let mut t = (want - self.mag.bits() as i64).max(0);
        if (self.exp - t).rem_euclid(2) != 0 {
            t += 1;
        }
        let n = &self.mag << t as u64;
        let e = (self.exp - t) / 2;
        let root = n.sqrt();
        let (mag, exp) = if &root * &root == n {
            (root, e)
        } else {
            ((root << 1u32) + 1u32, e - 1)
        };
        Real::round_parts(false, mag, exp, prec)
    }

    pub fn powi(&self, n: u32) -> Real {
        let mut acc = Real::one(self.prec);
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiply by `2^k` exactly.
    pub fn mul_pow2(&self, k: i64) -> Real {
        Real {
            exp: if self.is_zero() { 0 } else { self.exp + k },
            ..self.clone()
        }
    }

    /// Inflate a non-negative bound so that it stays an upper bound after
    /// the round-to-nearest steps that produced it (`ulps` roundings).
    pub fn inflate_ulps(&self, ulps: u32) -> Real {
        let slack = Real::from_int(ulps as i64 + 1, self.prec).mul_pow2(1 - self.prec as i64);
        self * &(&Real::one(self.prec) + &slack)
    }

    pub fn max(self, other: Real) -> Real {
        if self >= other {
            self
        } else {
            other
        }
    }
}

/// Quotient `(a*2^ea) / (b*2^eb)` carrying at least `prec + 2` bits plus a
/// sticky bit, ready for [`Real::round_parts`].
fn div_mag(a: &BigUint, ea: i64, b: &BigUint, eb: i64, prec: u32) -> (BigUint, i64) {
    if a.is_zero() {
        return (BigUint::zero(), 0);
    }
    let s = (prec as i64 + 3 + b.bits() as i64 - a.bits() as i64).max(0) as u64;
    let (q, r) = (a << s).div_rem(b);
    if r.is_zero() {
        (q, ea - eb - s as i64)
    } else {
        ((q << 1u32) + 1u32, ea - eb - s as i64 - 1)
    }
}

fn round_shift_right(mag: &BigUint, shift: u64) -> BigUint {
    if shift == 0 {
        return mag.clone();
    }
    let q = mag >> shift;
    let half_bit = (mag >> (shift - 1)) & BigUint::one();
    if half_bit.is_one() {
        q + 1u32
    } else {
        q
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.neg == other.neg && self.mag == other.mag && (self.exp == other.exp || self.is_zero())
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.is_zero() && other.is_zero() {
            return Some(Ordering::Equal);
        }
        let d = self.add_impl(&other.neg_impl());
        Some(if d.is_zero() {
            Ordering::Equal
        } else if d.neg {
            Ordering::Less
        } else {
            Ordering::Greater
        })
    }
}

impl Real {
    fn neg_impl(&self) -> Real {
        Real {
            neg: !self.neg && !self.is_zero(),
            ..self.clone()
        }
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Real({}{} * 2^{}, prec={})",
            if self.neg { "-" } else { "" },
            self.mag,
            self.exp,
            self.prec
        )
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f
            .precision()
            .unwrap_or_else(|| ((self.prec as f64) * std::f64::consts::LOG10_2).floor().max(1.0) as usize);
        f.write_str(&super::format::to_sig_digits(self, digits))
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        self.neg_impl()
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        self.neg_impl()
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $impl:ident) => {
        impl $trait<&Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                self.$impl(rhs)
            }
        }
        impl $trait<Real> for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                self.$impl(&rhs)
            }
        }
        impl $trait<&Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                self.$impl(rhs)
            }
        }
        impl $trait<Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                self.$impl(&rhs)
            }
        }
    };
}

impl Real {
    fn sub_impl(&self, other: &Real) -> Real {
        self.add_impl(&other.neg_impl())
    }
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, sub_impl);
forward_binop!(Mul, mul, mul_impl);
forward_binop!(Div, div, div_impl);

/// Rounded integer `round(num * 2^frac_bits / den)` for `den > 0`; the
/// rounding error is at most half a unit of `2^-frac_bits`.
pub fn fixed_ratio(num: &BigInt, den: &BigInt, frac_bits: u32) -> BigInt {
    debug_assert!(den.is_positive());
    let scaled = num << frac_bits as usize;
    let twice = (scaled << 1usize) + den;
    let den2 = den << 1usize;
    twice.div_floor(&den2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_ties_to_even() {
        // 0b1011 with 3 bits -> 0b110 (tie, round to even) ; 0b1001 -> 0b100
        assert_eq!(Real::from_int(11, 3), Real::from_int(12, 3));
        assert_eq!(Real::from_int(9, 3), Real::from_int(8, 3));
        assert_eq!(Real::from_int(13, 3), Real::from_int(12, 3));
    }

    #[test]
    fn canonical_representation() {
        let a = Real::from_int(6, 64);
        let b = &Real::from_int(3, 64) * &Real::from_int(2, 64);
        assert_eq!(a, b);
        assert_eq!(format!("{:?}", a), format!("{:?}", b));
    }

    #[test]
    fn exact_small_ops() {
        let p = 80;
        let a = Real::from_int(7, p);
        let b = Real::from_int(-3, p);
        assert_eq!(&a + &b, Real::from_int(4, p));
        assert_eq!(&a - &b, Real::from_int(10, p));
        assert_eq!(&a * &b, Real::from_int(-21, p));
        assert_eq!(&Real::from_int(-21, p) / &b, a);
        assert!(b < a);
        assert_eq!(Real::from_int(49, p).sqrt(), a);
    }

    #[test]
    fn division_is_correctly_rounded() {
        let third = Real::from_ratio(&BigInt::from(1), &BigInt::from(3), 60);
        let (m, e) = third.to_parts();
        // 1/3 = 0.0101..., 60 significant bits starting at 2^-2.
        assert_eq!(e + m.bits() as i64, -1);
        let err = (Real::from_int(1, 200) - &third * &Real::from_int(3, 200)).abs();
        assert!(err.log2_abs() <= -61.0);
    }

    #[test]
    fn fixed_ratio_rounds_to_nearest() {
        let r = fixed_ratio(&BigInt::from(1), &BigInt::from(3), 4);
        assert_eq!(r, BigInt::from(5)); // 16/3 = 5.33
        let r = fixed_ratio(&BigInt::from(-1), &BigInt::from(3), 4);
        assert_eq!(r, BigInt::from(-5));
        let r = fixed_ratio(&BigInt::from(1), &BigInt::from(2), 0);
        assert_eq!(r, BigInt::from(1));
    }

    #[test]
    fn to_fixed_and_back() {
        let v = Real::from_ratio(&BigInt::from(22), &BigInt::from(7), 100);
        let f = v.to_fixed(120);
        assert_eq!(Real::from_fixed(&f, 120, 100), v);
    }

    #[test]
    fn far_apart_addition_keeps_larger() {
        let big = Real::one(64);
        let tiny = Real::one(64).mul_pow2(-500);
        assert_eq!(&big + &tiny, big);
        assert_eq!(&tiny - &tiny, Real::zero(64));
    }

    #[test]
    fn f64_conversions() {
        let v = Real::from_f64_exact(0.1, 53);
        assert_eq!(v.to_f64(), 0.1);
        assert!((Real::from_int(1 << 20, 64).log2_abs() - 20.0).abs() < 1e-12);
    }
}
