//! Term generators. Every term is either an exact rational (used by the
//! oracle-style `exact_term`) or a fixed-point integer scaled by `2^frac`
//! together with a bound, in units of `2^-frac`, on its rounding error.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::goldfield::{rat, Rat};
use crate::numctx::{fixed_ratio, Real};

use super::catalog::SeriesId;

/// The summed body of a series, stripped of its scale coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Body {
    /// Σ 1/(x − n)³ with x = p/q.
    Bilateral { p: BigInt, q: BigInt },
    /// Σ 1/(1 − m n)³.
    Unit { m: u64 },
    /// Σ_{k ≥ start} (−1)^k/(2k+1)³.
    AltOddCubes { start: u64 },
    CentralBinomial,
    Pilehrood,
    SunHarmonic,
}

impl Body {
    pub(crate) fn of(id: &SeriesId) -> Body {
        match id {
            SeriesId::EulerBilateral(x) => Body::Bilateral {
                p: x.numer().clone(),
                q: x.denom().clone(),
            },
            SeriesId::GoldenFifth => Body::Unit { m: 5 },
            SeriesId::GoldenTenth => Body::Unit { m: 10 },
            SeriesId::Quarter => Body::Unit { m: 4 },
            SeriesId::AltOddCubesCorrected => Body::AltOddCubes { start: 0 },
            SeriesId::AltOddCubesAsPrinted => Body::AltOddCubes { start: 1 },
            SeriesId::CentralBinomial => Body::CentralBinomial,
            SeriesId::PilehroodApery => Body::Pilehrood,
            SeriesId::SunHarmonic => Body::SunHarmonic,
        }
    }

    /// Terms with a closed form in their index, summable in any chunking.
    pub(crate) fn is_indexed(&self) -> bool {
        matches!(
            self,
            Body::Bilateral { .. } | Body::Unit { .. } | Body::AltOddCubes { .. }
        )
    }

    /// Exact term `i` of an indexed body as `(num, den)` with `den > 0`.
    /// For bilateral bodies `i = 0` is the centre and `i ≥ 1` the pair (i, −i).
    pub(crate) fn indexed_ratio(&self, i: u64) -> (BigInt, BigInt) {
        match self {
            Body::Bilateral { p, q } => {
                if i == 0 {
                    // 1/x³ = q³/p³
                    (q.pow(3), p.pow(3))
                } else {
                    bilateral_pair(p, q, i)
                }
            }
            Body::Unit { m } => {
                if i == 0 {
                    (BigInt::one(), BigInt::one())
                } else {
                    // Σ 1/(1−mn)³ = x³ Σ 1/(x−n)³ at x = 1/m
                    let (n, d) = bilateral_pair(&BigInt::one(), &BigInt::from(*m), i);
                    (n, d * BigInt::from(*m).pow(3))
                }
            }
            Body::AltOddCubes { start } => {
                let k = start + i;
                let d = BigInt::from(2 * k + 1).pow(3);
                let n = if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                (n, d)
            }
            _ => unreachable!("indexed_ratio on a stateful body"),
        }
    }
}

/// 1/(x−n)³ + 1/(x+n)³ = (2x³ + 6xn²)/(x² − n²)³ with x = p/q, as
/// q³(2p³ + 6pn²q²)/(p² − n²q²)³, sign moved to the numerator.
fn bilateral_pair(p: &BigInt, q: &BigInt, n: u64) -> (BigInt, BigInt) {
    let n = BigInt::from(n);
    let n2q2 = &n * &n * q * q;
    let num = q.pow(3) * (BigInt::from(2) * p.pow(3) + BigInt::from(6) * p * &n2q2);
    let den = (p * p - &n2q2).pow(3);
    if den.is_negative() {
        (-num, -den)
    } else {
        (num, den)
    }
}

/// Central binomial coefficient C(2k, k).
pub fn central_binomial(k: u64) -> BigInt {
    let mut c = BigInt::one();
    for j in 0..k {
        c = next_central_binomial(&c, j);
    }
    c
}

/// C(2(j+1), j+1) from C(2j, j): multiply by 2(2j+1)/(j+1), exactly.
pub(crate) fn next_central_binomial(c: &BigInt, j: u64) -> BigInt {
    (c * BigInt::from(2 * (2 * j + 1))) / BigInt::from(j + 1)
}

/// Prefix sums H_n^{(2)} = Σ_{k=1..n} 1/k², kept in fixed point and
/// extended on demand. `H_0 = 0`.
#[derive(Debug, Clone)]
pub struct H2Cache {
    frac_bits: u32,
    sums: Vec<BigInt>,
}

impl H2Cache {
    pub fn new(frac_bits: u32) -> Self {
        H2Cache {
            frac_bits,
            sums: vec![BigInt::zero()],
        }
    }

    pub fn frac_bits(&self) -> u32 {
        self.frac_bits
    }

    pub fn len(&self) -> usize {
        self.sums.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn extend_to(&mut self, n: u64) {
        while (self.sums.len() as u64) <= n {
            let k = self.sums.len() as u64;
            let kk = BigInt::from(k) * k;
            let next = self.sums.last().expect("H_0 present")
                + fixed_ratio(&BigInt::one(), &kk, self.frac_bits);
            self.sums.push(next);
        }
    }

    /// H_n scaled by `2^frac_bits`; its error is at most `n/2` units.
    pub fn get_fixed(&mut self, n: u64) -> &BigInt {
        self.extend_to(n);
        &self.sums[n as usize]
    }

    pub fn get(&mut self, n: u64, prec: u32) -> Real {
        let f = self.frac_bits;
        Real::from_fixed(self.get_fixed(n), f, prec)
    }
}

/// Exact rational value of term `k` (bilateral ids: `k = 0` centre, `k ≥ 1`
/// the pair ±k).
pub fn exact_term(id: &SeriesId, k: u64) -> Result<Rat> {
    let start = id.start_index();
    if k < start {
        return Err(Error::IndexBelowStart { index: k, start });
    }
    let body = Body::of(id);
    if body.is_indexed() {
        let i = match body {
            Body::AltOddCubes { start } => k - start,
            _ => k,
        };
        let (n, d) = body.indexed_ratio(i);
        return Ok(Rat::new(n, d));
    }
    let c = central_binomial(k);
    let four_k = BigInt::one() << (4 * k) as usize;
    Ok(match body {
        Body::CentralBinomial => Rat::new(c, four_k * BigInt::from(2 * k + 1).pow(3)),
        Body::Pilehrood => {
            let inner: Rat = (0..k)
                .map(|m| Rat::new(BigInt::one(), BigInt::from(2 * m + 1).pow(2)))
                .fold(Rat::zero(), |a, b| a + b);
            let first = Rat::new(&c * 32, &four_k * BigInt::from(2 * k + 1).pow(3));
            let second = Rat::new(&c * 24, four_k * BigInt::from(2 * k + 1)) * inner;
            first - second
        }
        Body::SunHarmonic => {
            let h: Rat = (1..k)
                .map(|j| Rat::new(BigInt::one(), BigInt::from(j).pow(2)))
                .fold(Rat::zero(), |a, b| a + b);
            h * Rat::new(BigInt::one() << k as usize, BigInt::from(k) * c)
        }
        _ => unreachable!(),
    })
}

/// A stateful producer of fixed-point terms for the ratio-geometric series.
pub(crate) struct GeometricStream {
    body: Body,
    frac: u32,
    /// index of the next term
    k: u64,
    /// C(2k, k) for the next index
    c: BigInt,
    /// Σ_{m<k} 1/(2m+1)² in fixed point (Pilehrood)
    inner: BigInt,
    h2: H2Cache,
    /// last emitted term, fixed point
    last: BigInt,
    /// a computed consecutive-term ratio broke the certified bound
    ratio_violation: bool,
}

impl GeometricStream {
    pub(crate) fn new(body: Body, frac: u32) -> Self {
        let k = match body {
            Body::SunHarmonic => 1,
            _ => 0,
        };
        GeometricStream {
            c: central_binomial(k),
            body,
            frac,
            k,
            inner: BigInt::zero(),
            h2: H2Cache::new(frac),
            last: BigInt::zero(),
            ratio_violation: false,
        }
    }

    /// Number of terms emitted so far.
    pub(crate) fn emitted(&self) -> u64 {
        match self.body {
            Body::SunHarmonic => self.k - 1,
            _ => self.k,
        }
    }

    pub(crate) fn ratio_violation(&self) -> bool {
        self.ratio_violation
    }

    /// Next term and its rounding allowance in units of `2^-frac`.
    pub(crate) fn next_term(&mut self) -> (BigInt, u64) {
        let k = self.k;
        let f = self.frac;
        let four_k = BigInt::one() << (4 * k) as usize;
        let (term, units) = match self.body {
            Body::CentralBinomial => {
                let den = four_k * BigInt::from(2 * k + 1).pow(3);
                (fixed_ratio(&self.c, &den, f), 1)
            }
            Body::Pilehrood => {
                let a = fixed_ratio(
                    &(&self.c * 32),
                    &(&four_k * BigInt::from(2 * k + 1).pow(3)),
                    f,
                );
                let b = fixed_ratio(
                    &(&self.c * 24 * &self.inner),
                    &(&four_k * BigInt::from(2 * k + 1)),
                    0,
                );
                // B_k ≤ 1 and the inner sum carries at most k units of error
                (a - b, 2 + 24 * k)
            }
            Body::SunHarmonic => {
                let h = self.h2.get_fixed(k - 1).clone();
                let den = BigInt::from(k) * &self.c;
                let t = (h << k as usize).div_floor(&den);
                // 2^k/(k C(2k,k)) ≤ 3/2, H_{k-1} carries (k-1)/2 units
                (t, k + 2)
            }
            _ => unreachable!("geometric stream on an indexed body"),
        };
        // below 2^16 units the rounding noise swamps the ratio
        if matches!(self.body, Body::SunHarmonic) && k >= 5 && self.last.bits() > 16 {
            // certified ratio t_k / t_{k-1} ≤ 0.6 once k − 1 ≥ 4
            if BigInt::from(5) * &term > BigInt::from(3) * &self.last {
                self.ratio_violation = true;
            }
        }
        if matches!(self.body, Body::Pilehrood) {
            // B_{k+1}/B_k < 1/4 ⇔ (2(2k+1)/(k+1))·(2k+1)/(2k+3) < 4
            let lhs = BigInt::from(2 * (2 * k + 1)) * BigInt::from(2 * k + 1);
            let rhs = BigInt::from(4) * BigInt::from(k + 1) * BigInt::from(2 * k + 3);
            if lhs >= rhs {
                self.ratio_violation = true;
            }
            self.inner += fixed_ratio(&BigInt::one(), &BigInt::from(2 * k + 1).pow(2), f);
        }
        self.c = next_central_binomial(&self.c, k);
        self.k += 1;
        self.last = term.clone();
        (term, units)
    }

    /// Upper bound, in fixed point, on |Σ of all terms not yet emitted|.
    /// `None` when no certified bound is available yet.
    pub(crate) fn tail_fixed(&self) -> Option<BigInt> {
        let k = self.k;
        let f = self.frac;
        let four_k = BigInt::one() << (4 * k) as usize;
        match self.body {
            Body::CentralBinomial => {
                // a_k / (1 − r), r = (1 + 1/max(k,1))/4 ≥ every later ratio
                let kk = k.max(1);
                let one_minus_r = Rat::new(BigInt::from(3 * kk - 1), BigInt::from(4 * kk));
                let a = Rat::new(self.c.clone(), four_k * BigInt::from(2 * k + 1).pow(3));
                Some(ceil_fixed(&(a / one_minus_r), f))
            }
            Body::Pilehrood => {
                // |t_j| ≤ 30 B_j for j ≥ 1 and B ratio < 1/4 ⇒ tail ≤ 40 B_k
                let b = Rat::new(&self.c * 40, four_k * BigInt::from(2 * k + 1));
                let extra = if k == 0 { rat(32, 1) } else { Rat::zero() };
                Some(ceil_fixed(&(b + extra), f))
            }
            Body::SunHarmonic => {
                let last_k = k - 1;
                if last_k < 4 || self.ratio_violation {
                    return None;
                }
                // Σ_{j>K} t_j ≤ t_K (0.6 + 0.6² + …) = 1.5 t_K; +k+2 units for rounding in t_K
                let t = &self.last + BigInt::from(last_k + 2);
                Some((t * 3 + 1) / 2)
            }
            _ => unreachable!(),
        }
    }
}

fn ceil_fixed(r: &Rat, f: u32) -> BigInt {
    let num = r.numer() << f as usize;
    num.div_ceil(r.denom())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numctx::Real;

    #[test]
    fn first_terms() {
        assert_eq!(exact_term(&SeriesId::AltOddCubesCorrected, 0).unwrap(), rat(1, 1));
        assert_eq!(exact_term(&SeriesId::AltOddCubesCorrected, 1).unwrap(), rat(-1, 27));
        assert_eq!(exact_term(&SeriesId::CentralBinomial, 0).unwrap(), rat(1, 1));
        assert_eq!(exact_term(&SeriesId::CentralBinomial, 1).unwrap(), rat(2, 16 * 27));
        assert_eq!(exact_term(&SeriesId::SunHarmonic, 1).unwrap(), rat(0, 1));
        // k=2: 4 · 1 / (2 · 6)
        assert_eq!(exact_term(&SeriesId::SunHarmonic, 2).unwrap(), rat(1, 3));
        assert_eq!(exact_term(&SeriesId::PilehroodApery, 0).unwrap(), rat(32, 1));
        // k=1: 32·2/(16·27) − 24·2/(16·3)·1
        assert_eq!(
            exact_term(&SeriesId::PilehroodApery, 1).unwrap(),
            rat(64, 432) - rat(48, 48)
        );
        assert_eq!(exact_term(&SeriesId::GoldenFifth, 0).unwrap(), rat(1, 1));
        // 1/(1−5)³ + 1/(1+5)³ = −1/64 + 1/216
        assert_eq!(
            exact_term(&SeriesId::GoldenFifth, 1).unwrap(),
            rat(-1, 64) + rat(1, 216)
        );
    }

    #[test]
    fn index_below_start() {
        assert_eq!(
            exact_term(&SeriesId::AltOddCubesAsPrinted, 0),
            Err(Error::IndexBelowStart { index: 0, start: 1 })
        );
        assert!(exact_term(&SeriesId::SunHarmonic, 0).is_err());
    }

    #[test]
    fn pair_formula_matches_direct_terms() {
        let x = rat(2, 7);
        let body = Body::of(&SeriesId::EulerBilateral(x.clone()));
        for n in 1..20u64 {
            let (num, den) = body.indexed_ratio(n);
            let nn = Rat::from_integer(BigInt::from(n));
            let direct = Rat::one() / (&x - &nn).pow(3) + Rat::one() / (&x + &nn).pow(3);
            assert_eq!(Rat::new(num, den), direct);
        }
    }

    #[test]
    fn central_binomial_values() {
        let expect = [1u64, 2, 6, 20, 70, 252, 924, 3432];
        for (k, e) in expect.iter().enumerate() {
            assert_eq!(central_binomial(k as u64), BigInt::from(*e));
        }
    }

    #[test]
    fn h2_cache_prefix_sums() {
        let mut h = H2Cache::new(80);
        assert!(h.get_fixed(0).is_zero());
        let h3 = h.get(3, 60);
        let expect = Real::from_ratio(&BigInt::from(49), &BigInt::from(36), 60);
        assert_eq!(h3, expect);
        let mut prev = h.get_fixed(0).clone();
        for n in 1..50 {
            let cur = h.get_fixed(n).clone();
            assert!(cur > prev);
            prev = cur;
        }
    }

    #[test]
    fn streams_agree_with_exact_terms() {
        let frac = 200;
        for id in [
            SeriesId::CentralBinomial,
            SeriesId::PilehroodApery,
            SeriesId::SunHarmonic,
        ] {
            let mut s = GeometricStream::new(Body::of(&id), frac);
            for i in 0..40 {
                let k = id.start_index() + i;
                let (t, units) = s.next_term();
                let exact = exact_term(&id, k).unwrap();
                let exact_fixed = Rat::new(exact.numer() << frac as usize, exact.denom().clone());
                let diff = (Rat::from_integer(t) - exact_fixed).abs();
                assert!(diff <= Rat::from_integer(BigInt::from(units)), "{id} k={k}");
            }
            assert!(!s.ratio_violation());
        }
    }
}
