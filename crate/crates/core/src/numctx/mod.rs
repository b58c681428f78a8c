//! Working-precision contexts, the arbitrary-precision [`Real`], the handful of
//! elementary functions the series need, and a self-validated reference π.

mod elem;
pub mod format;
mod pi;
mod real;

use num_bigint::BigInt;
use num_traits::Pow;

use crate::error::{Error, Result};

pub use format::{correct_digits, pow10_neg, to_scientific, to_sig_digits};
pub use real::{fixed_ratio, Real};

pub const DEFAULT_GUARD_BITS: u32 = 32;
pub const DEFAULT_DIGIT_CAP: u64 = 100_000;

/// Precision carried by every numeric evaluation: the decimal digits asked
/// for, the binary working precision and the guard bits included in it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrecCtx {
    decimal_digits: u32,
    bits: u32,
    guard_bits: u32,
}

/// Context for `decimal_digits` digits with the default guard and cap.
pub fn mk_context(decimal_digits: u64) -> Result<PrecCtx> {
    mk_context_with(decimal_digits, DEFAULT_GUARD_BITS, DEFAULT_DIGIT_CAP)
}

pub fn mk_context_with(decimal_digits: u64, guard_bits: u32, cap: u64) -> Result<PrecCtx> {
    if decimal_digits == 0 || decimal_digits > cap || decimal_digits > u32::MAX as u64 / 4 {
        return Err(Error::PrecisionOutOfRange {
            digits: decimal_digits,
            cap,
        });
    }
    let guard_bits = guard_bits.max(DEFAULT_GUARD_BITS);
    let bits = digits_to_bits(decimal_digits as u32) + guard_bits;
    Ok(PrecCtx {
        decimal_digits: decimal_digits as u32,
        bits,
        guard_bits,
    })
}

/// `ceil(d * log2 10)`, computed exactly as the bit length of `10^d`
/// (10^d is never a power of two for d >= 1).
pub fn digits_to_bits(d: u32) -> u32 {
    BigInt::from(10u32).pow(d).bits() as u32
}

impl PrecCtx {
    pub fn decimal_digits(&self) -> u32 {
        self.decimal_digits
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn guard_bits(&self) -> u32 {
        self.guard_bits
    }

    /// Same digit target with `extra` more guard bits.
    pub fn with_extra_guard(&self, extra: u32) -> PrecCtx {
        PrecCtx {
            decimal_digits: self.decimal_digits,
            bits: self.bits + extra,
            guard_bits: self.guard_bits + extra,
        }
    }

    pub fn int(&self, v: i64) -> Real {
        Real::from_int(v, self.bits)
    }

    pub fn big(&self, v: &BigInt) -> Real {
        Real::from_bigint(v, 0, self.bits)
    }

    pub fn ratio(&self, num: i64, den: i64) -> Real {
        Real::from_ratio(&BigInt::from(num), &BigInt::from(den), self.bits)
    }

    /// One unit in the last place relative to 1, i.e. `2^(1-bits)`.
    pub fn ulp(&self) -> Real {
        Real::one(self.bits).mul_pow2(1 - self.bits as i64)
    }

    pub fn sqrt(&self, x: &Real) -> Result<Real> {
        elem(ElemFn::Sqrt, x, self)
    }

    pub fn exp(&self, x: &Real) -> Real {
        elem::exp(x, self.bits)
    }

    pub fn sin(&self, x: &Real) -> Real {
        elem::sin_cos(x, self.bits).0
    }

    pub fn cos(&self, x: &Real) -> Real {
        elem::sin_cos(x, self.bits).1
    }

    pub fn sin_cos(&self, x: &Real) -> (Real, Real) {
        elem::sin_cos(x, self.bits)
    }
}

/// π with relative error at most `2^-bits`. Two independent algorithms
/// (Machin's arctangent formula and the Gauss–Legendre AGM) are run and must
/// agree before the value is released.
pub fn ref_pi(ctx: &PrecCtx) -> Real {
    pi::pi_at(ctx.bits)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElemFn {
    Sqrt,
    Exp,
    Sin,
    Cos,
}

/// Evaluate one of the supported elementary functions at `ctx` precision.
pub fn elem(f: ElemFn, x: &Real, ctx: &PrecCtx) -> Result<Real> {
    match f {
        ElemFn::Sqrt => {
            if x.is_negative() {
                return Err(Error::DomainError(format!(
                    "sqrt of negative value {}",
                    to_scientific(x, 6)
                )));
            }
            Ok(x.sqrt_prec(ctx.bits))
        }
        ElemFn::Exp => Ok(elem::exp(x, ctx.bits)),
        ElemFn::Sin => Ok(elem::sin_cos(x, ctx.bits).0),
        ElemFn::Cos => Ok(elem::sin_cos(x, ctx.bits).1),
    }
}
