//! Exact arithmetic in Q(√5) and the golden-ratio closed forms of the
//! trigonometric values at π/5, π/10 and π/4.
//!
//! `cot(πx)·cosec²(πx)` itself needs a square root outside the field, so the
//! exact layer works with its square; the unsquared series coefficient is
//! produced numerically with one square root.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::numctx::{PrecCtx, Real};

/// Exact rational in canonical form (`gcd(num, den) = 1`, `den > 0`).
pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Rational as a `Real` at `prec` bits.
pub fn rat_to_real(r: &Rat, prec: u32) -> Real {
    Real::from_ratio(r.numer(), r.denom(), prec)
}

/// `a + b·√5` with rational components.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GoldNum {
    a: Rat,
    b: Rat,
}

impl GoldNum {
    pub fn new(a: Rat, b: Rat) -> Self {
        GoldNum { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        GoldNum::new(rat(a, 1), rat(b, 1))
    }

    pub fn rational(a: Rat) -> Self {
        GoldNum::new(a, Rat::zero())
    }

    pub fn zero() -> Self {
        GoldNum::from_ints(0, 0)
    }

    pub fn one() -> Self {
        GoldNum::from_ints(1, 0)
    }

    pub fn sqrt5() -> Self {
        GoldNum::from_ints(0, 1)
    }

    /// The golden ratio (1 + √5)/2.
    pub fn phi() -> Self {
        GoldNum::new(rat(1, 2), rat(1, 2))
    }

    pub fn a(&self) -> &Rat {
        &self.a
    }

    pub fn b(&self) -> &Rat {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        GoldNum::new(self.a.clone(), -self.b.clone())
    }

    /// Field norm `a² − 5b²`.
    pub fn norm(&self) -> Rat {
        &self.a * &self.a - rat(5, 1) * &self.b * &self.b
    }

    pub fn scale(&self, r: &Rat) -> Self {
        GoldNum::new(&self.a * r, &self.b * r)
    }

    pub fn checked_div(&self, rhs: &GoldNum) -> Result<GoldNum> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZeroField);
        }
        // norm of a non-zero element is non-zero because √5 is irrational
        let n = rhs.norm();
        let num = self * &rhs.conjugate();
        Ok(GoldNum::new(num.a / &n, num.b / n))
    }

    pub fn recip(&self) -> Result<GoldNum> {
        GoldNum::one().checked_div(self)
    }

    pub fn pow(&self, n: u32) -> GoldNum {
        let mut acc = GoldNum::one();
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

    pub fn is_positive(&self) -> bool {
        // sign of a + b√5 compared exactly: a > -b√5
        let lhs_sign = self.a.signum();
        let rhs = -&self.b;
        let rhs_sign = rhs.signum();
        match (lhs_sign.is_positive(), rhs_sign.is_positive()) {
            (true, false) => !(self.a.is_zero() && rhs.is_zero()),
            (false, true) => false,
            (true, true) => &self.a * &self.a > rat(5, 1) * &rhs * &rhs,
            (false, false) => {
                if self.a.is_zero() && rhs.is_zero() {
                    false
                } else {
                    &self.a * &self.a < rat(5, 1) * &rhs * &rhs
                }
            }
        }
    }
}

impl fmt::Display for GoldNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + ({})√5", self.a, self.b)
    }
}

impl Add for &GoldNum {
    type Output = GoldNum;
    fn add(self, rhs: &GoldNum) -> GoldNum {
        GoldNum::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl Sub for &GoldNum {
    type Output = GoldNum;
    fn sub(self, rhs: &GoldNum) -> GoldNum {
        GoldNum::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl Mul for &GoldNum {
    type Output = GoldNum;
    fn mul(self, rhs: &GoldNum) -> GoldNum {
        let five = rat(5, 1);
        GoldNum::new(
            &self.a * &rhs.a + five * &self.b * &rhs.b,
            &self.a * &rhs.b + &self.b * &rhs.a,
        )
    }
}

impl Neg for &GoldNum {
    type Output = GoldNum;
    fn neg(self) -> GoldNum {
        GoldNum::new(-self.a.clone(), -self.b.clone())
    }
}

macro_rules! owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for GoldNum {
            type Output = GoldNum;
            fn $method(self, rhs: GoldNum) -> GoldNum {
                (&self).$method(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GoldOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn gold_arith(op: GoldOp, u: &GoldNum, v: &GoldNum) -> Result<GoldNum> {
    Ok(match op {
        GoldOp::Add => u + v,
        GoldOp::Sub => u - v,
        GoldOp::Mul => u * v,
        GoldOp::Div => u.checked_div(v)?,
    })
}

/// `a + b·√5` at `ctx` precision. Extra working bits are added while the
/// two parts cancel.
pub fn gold_to_real(g: &GoldNum, ctx: &PrecCtx) -> Real {
    gold_to_real_bits(g, ctx.bits())
}

pub(crate) fn gold_to_real_bits(g: &GoldNum, bits: u32) -> Real {
    if g.b.is_zero() {
        return rat_to_real(&g.a, bits);
    }
    let mut w = bits + 16;
    loop {
        let root5 = Real::from_int(5, w).sqrt();
        let pa = rat_to_real(&g.a, w);
        let pb = &rat_to_real(&g.b, w) * &root5;
        let sum = &pa + &pb;
        // a + b√5 is never zero for b ≠ 0, so a zero sum means total cancellation
        let lost = if sum.is_zero() {
            w as i64
        } else {
            pa.top_exp().max(pb.top_exp()) - sum.top_exp()
        };
        let need = bits as i64 + lost.max(0) + 16;
        if need <= w as i64 {
            return sum.with_prec(bits);
        }
        w = need as u32;
    }
}

/// Exact squares of the trigonometric values at `πx`, written with φ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrigSquares {
    pub cos2: GoldNum,
    pub sin2: GoldNum,
    pub cot2: GoldNum,
    pub cosec2: GoldNum,
}

/// Closed forms at x = 1/5 (cos = φ/2, sin² = (5−√5)/8, cot = φ/√(3−φ),
/// cosec = 2/√(3−φ)), x = 1/10 (cos = √(2+φ)/2, sin = 1/(2φ),
/// cot = φ√(2+φ), cosec = 2φ) and x = 1/4.
pub fn trig_squares(x: &Rat) -> Result<TrigSquares> {
    let phi = GoldNum::phi();
    let phi2 = phi.pow(2);
    let three_minus_phi = &GoldNum::from_ints(3, 0) - &phi;
    let two_plus_phi = &GoldNum::from_ints(2, 0) + &phi;
    if *x == rat(1, 5) {
        Ok(TrigSquares {
            cos2: phi2.scale(&rat(1, 4)),
            sin2: GoldNum::new(rat(5, 8), rat(-1, 8)),
            cot2: phi2.checked_div(&three_minus_phi)?,
            cosec2: GoldNum::from_ints(4, 0).checked_div(&three_minus_phi)?,
        })
    } else if *x == rat(1, 10) {
        Ok(TrigSquares {
            cos2: two_plus_phi.scale(&rat(1, 4)),
            sin2: phi2.scale(&rat(4, 1)).recip()?,
            cot2: &phi2 * &two_plus_phi,
            cosec2: phi2.scale(&rat(4, 1)),
        })
    } else if *x == rat(1, 4) {
        Ok(TrigSquares {
            cos2: GoldNum::rational(rat(1, 2)),
            sin2: GoldNum::rational(rat(1, 2)),
            cot2: GoldNum::one(),
            cosec2: GoldNum::from_ints(2, 0),
        })
    } else {
        Err(Error::UnsupportedAbscissa(x.to_string()))
    }
}

/// Exact `[cot(πx)·cosec²(πx)]²` for x ∈ {1/5, 1/10, 1/4}.
pub fn cotcsc2_squared(x: &Rat) -> Result<GoldNum> {
    let t = trig_squares(x)?;
    Ok(&t.cot2 * &(&t.cosec2 * &t.cosec2))
}

/// Which golden-ratio series coefficient to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coefficient {
    Fifth,
    Tenth,
    Quarter,
}

/// Constant `C` with `π³ = C · Σ 1/(1 − m n)³` (m = 5, 10, 4):
/// fifth = (125/4)(3−φ)^{3/2}/φ, tenth = 250/(φ³√(2+φ)), quarter = 32.
pub fn golden_coefficient(which: Coefficient, ctx: &PrecCtx) -> Real {
    let bits = ctx.bits();
    let w = bits + 16;
    let phi = GoldNum::phi();
    let v = match which {
        Coefficient::Fifth => {
            let t = gold_to_real_bits(&(&GoldNum::from_ints(3, 0) - &phi), w);
            let num = &(&t * &t.sqrt()) * &Real::from_int(125, w);
            &num / &(&gold_to_real_bits(&phi, w) * &Real::from_int(4, w))
        }
        Coefficient::Tenth => {
            let phi3 = gold_to_real_bits(&phi.pow(3), w);
            let root = gold_to_real_bits(&(&GoldNum::from_ints(2, 0) + &phi), w).sqrt();
            &Real::from_int(250, w) / &(&phi3 * &root)
        }
        Coefficient::Quarter => Real::from_int(32, w),
    };
    v.with_prec(bits)
}
