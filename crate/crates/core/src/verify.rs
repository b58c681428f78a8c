//! Identity checks for the relations that do not produce π³ on their own:
//! the two central-binomial and harmonic sums as equalities, the Gupta
//! family, the Plouffe combinations, the alternating odd cubes in both index
//! conventions and the golden coefficients against their trigonometric form.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::goldfield::{golden_coefficient, Coefficient};
use crate::numctx::{correct_digits, fixed_ratio, pow10_neg, ref_pi, PrecCtx, Real};
use crate::series::{eval_margin, EvalOptions, SeriesId};

/// Largest k accepted for the Gupta family.
pub const GUPTA_MAX_K: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IdentityId {
    /// Σ C(2k,k)/((2k+1)³16^k) = 7π³/216.
    Eq2CentralBinomial,
    /// Σ_{k≥1} 2^k H_{k−1}^{(2)}/(k C(2k,k)) = π³/48.
    Eq4SunHarmonic,
    /// The Gupta relation at a fixed k (0 ≤ k ≤ 8).
    GuptaFamily(u32),
    /// π = 72 S₁(1) − 96 S₁(2) + 24 S₁(4).
    PlouffePi,
    /// π³ = 720 S₃(1) − 900 S₃(2) + 180 S₃(4).
    PlouffePi3,
    /// 32 Σ_{k≥1} (−1)^k/(2k+1)³ = π³, which is false: the sum is π³ − 32.
    Eq1AsPrinted,
    /// 32 Σ_{k≥0} (−1)^k/(2k+1)³ = π³.
    Eq1Corrected,
    /// (125/4)(3−φ)^{3/2}/φ = 125 sin³(π/5)/cos(π/5).
    CoeffFifth,
    /// 250/(φ³√(2+φ)) = 1000 sin³(π/10)/cos(π/10).
    CoeffTenth,
}

impl IdentityId {
    /// One entry per variant, with the Gupta family shown at k = 0.
    pub fn variants() -> [IdentityId; 9] {
        use IdentityId::*;
        [
            Eq2CentralBinomial,
            Eq4SunHarmonic,
            GuptaFamily(0),
            PlouffePi,
            PlouffePi3,
            Eq1AsPrinted,
            Eq1Corrected,
            CoeffFifth,
            CoeffTenth,
        ]
    }

    /// The suite run by `verify --identity all`: every variant, with the
    /// Gupta family expanded to k = 0..=4.
    pub fn suite() -> Vec<IdentityId> {
        use IdentityId::*;
        let mut v = vec![Eq2CentralBinomial, Eq4SunHarmonic];
        v.extend((0..=4).map(GuptaFamily));
        v.extend([PlouffePi, PlouffePi3, Eq1AsPrinted, Eq1Corrected, CoeffFifth, CoeffTenth]);
        v
    }

    pub fn gupta(k: u32) -> Result<IdentityId> {
        if k > GUPTA_MAX_K {
            return Err(Error::Precondition(format!(
                "Gupta family index k={k} exceeds {GUPTA_MAX_K}"
            )));
        }
        Ok(IdentityId::GuptaFamily(k))
    }

    pub fn name(&self) -> String {
        use IdentityId::*;
        match self {
            Eq2CentralBinomial => "eq2-central-binomial".into(),
            Eq4SunHarmonic => "eq4-sun-harmonic".into(),
            GuptaFamily(k) => format!("gupta-{k}"),
            PlouffePi => "plouffe-pi".into(),
            PlouffePi3 => "plouffe-pi3".into(),
            Eq1AsPrinted => "eq1-as-printed".into(),
            Eq1Corrected => "eq1-corrected".into(),
            CoeffFifth => "coeff-fifth".into(),
            CoeffTenth => "coeff-tenth".into(),
        }
    }

    /// The computed side evaluates e^{πrk} or 1/π² from the reference π.
    pub fn uses_reference_pi(&self) -> bool {
        matches!(
            self,
            IdentityId::GuptaFamily(_) | IdentityId::PlouffePi | IdentityId::PlouffePi3
        )
    }

    /// The as-printed alternating sum is carried to show that it fails.
    pub fn expected_to_fail(&self) -> bool {
        *self == IdentityId::Eq1AsPrinted
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(k) = s.strip_prefix("gupta-") {
            let k: u32 = k
                .parse()
                .map_err(|_| Error::Precondition(format!("unknown identity '{s}'")))?;
            return IdentityId::gupta(k);
        }
        IdentityId::variants()
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown identity '{s}'")))
    }
}

/// Result of one identity check.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub id: IdentityId,
    /// The series (or closed-form) side.
    pub lhs: Real,
    /// The reference side.
    pub rhs: Real,
    pub abs_diff: Real,
    /// Combined certified bound on the evaluation error of both sides.
    pub error_bound: Real,
    pub certified_digits: u32,
    pub pass: bool,
    pub terms_used: u64,
    pub uses_reference_pi: bool,
}

/// S_n(r) = Σ_{k=1..K} 1/(kⁿ(e^{πrk} − 1)), for n ∈ {1, 3} and r ∈ {1, 2, 4}.
pub fn plouffe_s(n: u32, r: u32, ctx: &PrecCtx, k_max: u64) -> Result<Real> {
    check_plouffe_args(n, r)?;
    let bits = ctx.bits();
    let pi_r = &ref_pi(ctx) * &Real::from_int(r as i64, bits);
    let one = Real::one(bits);
    let mut acc = Real::zero(bits);
    for k in 1..=k_max {
        let kr = Real::from_int(k as i64, bits);
        let e = &ctx.exp(&(&pi_r * &kr)) - &one;
        let den = &kr.powi(n) * &e;
        acc = &acc + &(&one / &den);
    }
    Ok(acc)
}

/// Upper bound on Σ_{k>K} 1/(kⁿ(e^{πrk} − 1)):
/// each term is at most e^{−πrk}/(1 − e^{−πr}), so the tail is at most
/// e^{−πr(K+1)}/(1 − e^{−πr})².
pub fn plouffe_tail_bound(r: u32, k_max: u64, ctx: &PrecCtx) -> Result<Real> {
    check_plouffe_args(1, r)?;
    let bits = ctx.bits();
    let pi_r = &ref_pi(ctx) * &Real::from_int(r as i64, bits);
    let q = ctx.exp(&-&pi_r);
    let one = Real::one(bits);
    let qk = ctx.exp(&-&(&pi_r * &Real::from_int(k_max as i64 + 1, bits)));
    let gap = &one - &q;
    Ok((&qk / &(&gap * &gap)).inflate_ulps(16))
}

fn check_plouffe_args(n: u32, r: u32) -> Result<()> {
    if !matches!(n, 1 | 3) || !matches!(r, 1 | 2 | 4) {
        return Err(Error::Precondition(format!(
            "S_n(r) is defined here for n in {{1, 3}} and r in {{1, 2, 4}}, got n={n}, r={r}"
        )));
    }
    Ok(())
}

/// 2^{2k+4}(2k+3)!/(2^{2k+2} − 1), the overall Gupta coefficient, exactly.
pub fn gupta_coefficient(k: u32) -> num_rational::BigRational {
    let num = (BigInt::one() << (2 * k + 4) as usize) * factorial(2 * k + 3);
    let den = (BigInt::one() << (2 * k + 2) as usize) - BigInt::one();
    num_rational::BigRational::new(num, den)
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, i| a * BigInt::from(i))
}

/// Direct partial sum of the Gupta relation at fixed k over n = 1..=n_max.
pub fn gupta_partial(k: u32, n_max: u64, ctx: &PrecCtx) -> Result<Real> {
    IdentityId::gupta(k)?;
    let bits = ctx.bits();
    let g = crate::goldfield::rat_to_real(&gupta_coefficient(k), bits);
    let pi2 = ref_pi(ctx).powi(2);
    let facts: Vec<Real> = (0..=k)
        .map(|j| Real::from_bigint(&factorial(2 * k - 2 * j + 1), 0, bits))
        .collect();
    let mut acc = Real::zero(bits);
    for n in 1..=n_max {
        let odd = Real::from_int(2 * n as i64 - 1, bits);
        let odd2 = &odd * &odd;
        // −1/((2n−1)²π²)
        let base = -&(&Real::one(bits) / &(&odd2 * &pi2));
        let mut pw = Real::one(bits);
        let mut inner = Real::zero(bits);
        for fact in &facts {
            inner = &inner + &(&pw / fact);
            pw = &pw * &base;
        }
        let mut t = &(&g * &inner) / &(&odd2 * &odd);
        if n % 2 == 0 {
            t = -&t;
        }
        acc = &acc + &t;
    }
    Ok(acc)
}

/// Check `id` to `digits` significant digits with the default options.
pub fn verify_identity(id: IdentityId, digits: u32, ctx: &PrecCtx) -> Result<Report> {
    verify_identity_with(id, digits, ctx, &EvalOptions::default())
}

pub fn verify_identity_with(
    id: IdentityId,
    digits: u32,
    ctx: &PrecCtx,
    opts: &EvalOptions,
) -> Result<Report> {
    if digits == 0 {
        return Err(Error::Precondition("digits must be at least 1".into()));
    }
    let required = digits as u64 + 5;
    if (ctx.decimal_digits() as u64) < required {
        return Err(Error::PrecisionInsufficient {
            required,
            available: ctx.decimal_digits() as u64,
        });
    }
    if let IdentityId::GuptaFamily(k) = id {
        IdentityId::gupta(k)?;
    }
    let bits = ctx.bits();
    let pi3 = ref_pi(ctx).powi(3);
    // absolute target; tol = 10^-digits·max(|lhs|, 1) is never smaller
    let tol0 = pow10_neg(digits, bits);
    let side = match id {
        IdentityId::Eq2CentralBinomial => {
            let r = eval_margin(&SeriesId::CentralBinomial, digits, ctx, opts, false)?;
            let rhs = &(&pi3 * &Real::from_int(7, bits)) / &Real::from_int(216, bits);
            Side::from_eval(r, rhs)
        }
        IdentityId::Eq4SunHarmonic => {
            let r = eval_margin(&SeriesId::SunHarmonic, digits, ctx, opts, false)?;
            Side::from_eval(r, &pi3 / &Real::from_int(48, bits))
        }
        IdentityId::Eq1AsPrinted => {
            let r = eval_margin(&SeriesId::AltOddCubesAsPrinted, digits, ctx, opts, true)?;
            Side::from_eval(r, pi3.clone())
        }
        IdentityId::Eq1Corrected => {
            let r = eval_margin(&SeriesId::AltOddCubesCorrected, digits, ctx, opts, true)?;
            Side::from_eval(r, pi3.clone())
        }
        IdentityId::CoeffFifth => coefficient_side(Coefficient::Fifth, 5, 125, ctx),
        IdentityId::CoeffTenth => coefficient_side(Coefficient::Tenth, 10, 1000, ctx),
        IdentityId::PlouffePi => plouffe_side(1, [72, -96, 24], ref_pi(ctx), &tol0, ctx, opts, digits)?,
        IdentityId::PlouffePi3 => plouffe_side(3, [720, -900, 180], pi3.clone(), &tol0, ctx, opts, digits)?,
        IdentityId::GuptaFamily(k) => gupta_side(k, pi3.clone(), &tol0, ctx, opts, digits)?,
    };
    Ok(side.into_report(id, digits))
}

/// Both sides of one identity plus the evaluation error allowance.
struct Side {
    lhs: Real,
    rhs: Real,
    bound: Real,
    terms: u64,
}

impl Side {
    fn from_eval(r: crate::series::EvalResult, rhs: Real) -> Side {
        let bits = rhs.prec();
        // the reference side carries a few roundings of the reference π
        let rhs_err = (&rhs.abs() * &Real::from_int(16, bits)).mul_pow2(1 - bits as i64);
        Side {
            lhs: r.value,
            rhs,
            bound: &r.error_bound + &rhs_err,
            terms: r.terms_used,
        }
    }

    fn into_report(self, id: IdentityId, digits: u32) -> Report {
        let bits = self.lhs.prec();
        let abs_diff = (&self.lhs - &self.rhs).abs();
        let scale = self.lhs.abs().max(Real::one(bits));
        let tol = &pow10_neg(digits, bits) * &scale;
        let worst = &abs_diff + &self.bound;
        let pass = worst <= tol;
        Report {
            id,
            certified_digits: correct_digits(&worst, &scale),
            pass,
            terms_used: self.terms,
            uses_reference_pi: id.uses_reference_pi(),
            lhs: self.lhs,
            rhs: self.rhs,
            abs_diff,
            error_bound: self.bound,
        }
    }
}

/// Golden closed form (no π) against `m³ sin³(π/m)/cos(π/m)`.
fn coefficient_side(which: Coefficient, m: i64, m3: i64, ctx: &PrecCtx) -> Side {
    let bits = ctx.bits();
    let lhs = golden_coefficient(which, ctx);
    let wide = ctx.with_extra_guard(16);
    let arg = &ref_pi(&wide) / &Real::from_int(m, wide.bits());
    let (s, c) = wide.sin_cos(&arg);
    let rhs = (&(&s.powi(3) * &Real::from_int(m3, wide.bits())) / &c).with_prec(bits);
    let bound = (&lhs.abs() * &Real::from_int(32, bits)).mul_pow2(1 - bits as i64);
    Side {
        lhs,
        rhs,
        bound,
        terms: 0,
    }
}

/// Σ c_i S_n(r_i) with r = 1, 2, 4, each sum cut at the smallest K whose
/// weighted tail is at most a thirtieth of `tol0`.
#[allow(clippy::too_many_arguments)]
fn plouffe_side(
    n: u32,
    coefs: [i64; 3],
    rhs: Real,
    tol0: &Real,
    ctx: &PrecCtx,
    opts: &EvalOptions,
    digits: u32,
) -> Result<Side> {
    let bits = ctx.bits();
    let mut lhs = Real::zero(bits);
    let mut bound = Real::zero(bits);
    let mut terms = 0u64;
    for (c, r) in coefs.into_iter().zip([1u32, 2, 4]) {
        let (k, tail) = plouffe_cut(c, r, tol0, ctx, opts.term_budget, digits)?;
        let s = plouffe_s(n, r, ctx, k)?;
        let weighted = &Real::from_int(c, bits) * &s;
        // per-term exp, product and division roundings plus the additions
        let round = (&weighted.abs() * &Real::from_int(16 + 2 * k as i64, bits))
            .mul_pow2(1 - bits as i64);
        lhs = &lhs + &weighted;
        bound = &(&bound + &tail) + &round;
        terms += k;
    }
    let rhs_err = (&rhs.abs() * &Real::from_int(16, bits)).mul_pow2(1 - bits as i64);
    Ok(Side {
        lhs,
        rhs,
        bound: (&bound + &rhs_err).inflate_ulps(4),
        terms,
    })
}

/// Terms per S_n(r) sum used when a Plouffe combination with coefficient
/// `coef` on S_n(r) is checked to `digits` digits.
pub fn plouffe_terms(coef: i64, r: u32, digits: u32, ctx: &PrecCtx, budget: u64) -> Result<u64> {
    let tol0 = pow10_neg(digits, ctx.bits());
    Ok(plouffe_cut(coef, r, &tol0, ctx, budget, digits)?.0)
}

/// Smallest K whose weighted tail |coef|·bound(K) is at most `tol0`/30,
/// with that weighted tail.
fn plouffe_cut(
    coef: i64,
    r: u32,
    tol0: &Real,
    ctx: &PrecCtx,
    budget: u64,
    digits: u32,
) -> Result<(u64, Real)> {
    let bits = ctx.bits();
    let share = tol0 / &Real::from_int(30, bits);
    let cr = Real::from_int(coef.abs(), bits);
    let mut k = 1u64;
    loop {
        let t = &cr * &plouffe_tail_bound(r, k, ctx)?;
        if t <= share {
            return Ok((k, t));
        }
        if k >= budget {
            return Err(Error::BudgetExceeded {
                budget,
                digits,
                hint: None,
            });
        }
        k += 1;
    }
}

/// The Gupta relation at fixed k, rearranged as
/// G_k Σ_j (−1)^j/((2k−2j+1)! π^{2j}) · A_j with
/// A_j = Σ_{n≥1} (−1)^{n+1}/(2n−1)^{3+2j}, each A_j an alternating sum cut
/// by its first omitted term.
fn gupta_side(
    k: u32,
    rhs: Real,
    tol0: &Real,
    ctx: &PrecCtx,
    opts: &EvalOptions,
    digits: u32,
) -> Result<Side> {
    let bits = ctx.bits();
    let g = crate::goldfield::rat_to_real(&gupta_coefficient(k), bits);
    let pi2 = ref_pi(ctx).powi(2);
    let share = (tol0 / &Real::from_int(20 * (k as i64 + 1), bits)).with_prec(bits);
    let frac = bits + 64;
    let mut lhs = Real::zero(bits);
    let mut bound = Real::zero(bits);
    let mut terms = 0u64;
    let mut pi2j = Real::one(bits);
    for j in 0..=k {
        let p = 3 + 2 * j;
        let fact = Real::from_bigint(&factorial(2 * k - 2 * j + 1), 0, bits);
        let coef = &g / &(&fact * &pi2j);
        let n_terms = first_term_cut(&coef, p, &share, opts.term_budget).ok_or(
            Error::BudgetExceeded {
                budget: opts.term_budget,
                digits,
                hint: None,
            },
        )?;
        let a = alternating_odd_powers(p, n_terms, frac);
        let a_real = Real::from_fixed(&a, frac, bits);
        let mut comp = &coef * &a_real;
        if j % 2 == 1 {
            comp = -&comp;
        }
        let omitted = Real::from_ratio(&BigInt::one(), &BigInt::from(2 * n_terms + 1).pow(p), bits);
        let units = Real::from_int(n_terms as i64, bits).mul_pow2(-(frac as i64));
        let err = &(&coef * &(&omitted + &units))
            + &(&comp.abs() * &Real::from_int(16, bits)).mul_pow2(1 - bits as i64);
        lhs = &lhs + &comp;
        bound = &bound + &err;
        terms += n_terms;
        pi2j = &pi2j * &pi2;
    }
    // additions of the k+1 components
    let adds = (&lhs.abs() * &Real::from_int(k as i64 + 2, bits)).mul_pow2(1 - bits as i64);
    let rhs_err = (&rhs.abs() * &Real::from_int(16, bits)).mul_pow2(1 - bits as i64);
    Ok(Side {
        lhs,
        rhs,
        bound: (&(&bound + &adds) + &rhs_err).inflate_ulps(4),
        terms,
    })
}

/// Smallest N with coef/(2N+1)^p ≤ share, or `None` above `budget`.
fn first_term_cut(coef: &Real, p: u32, share: &Real, budget: u64) -> Option<u64> {
    let bits = share.prec();
    let ok = |n: u64| -> bool {
        let d = Real::from_bigint(&BigInt::from(2 * n + 1).pow(p), 0, bits);
        &(coef / &d).inflate_ulps(2) <= share
    };
    let mut hi = 1u64;
    while !ok(hi) {
        if hi >= budget {
            return None;
        }
        hi = (hi * 2).min(budget);
    }
    let mut lo = hi / 2;
    // invariant: ok(hi), and lo == 0 or !ok(lo)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// Σ_{n=1..N} (−1)^{n+1}/(2n−1)^p in fixed point with `frac` bits; each term
/// is rounded once, so the error is at most N/2 units.
fn alternating_odd_powers(p: u32, n_terms: u64, frac: u32) -> BigInt {
    let one = BigInt::one();
    let mut acc = BigInt::zero();
    for n in 1..=n_terms {
        let t = fixed_ratio(&one, &BigInt::from(2 * n - 1).pow(p), frac);
        if n % 2 == 1 {
            acc += t;
        } else {
            acc -= t;
        }
    }
    acc
}
