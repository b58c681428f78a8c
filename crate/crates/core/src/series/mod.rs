//! The π³ series catalog: term generators, deterministic fixed-point
//! summation, rigorous tail bounds and digit-targeted evaluation.

mod catalog;
mod sum;
mod terms;

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub use catalog::{parse_rat, SeriesDef, SeriesId, SummationOrder, TailKind, Target};
pub use sum::CHUNK;
pub use terms::{central_binomial, exact_term, H2Cache};

use crate::error::{Error, Result};
use crate::goldfield::{golden_coefficient, rat, rat_to_real, Coefficient, Rat};
use crate::numctx::{correct_digits, pow10_neg, ref_pi, PrecCtx, Real};
use catalog::validate_abscissa;
use sum::sum_indexed;
use terms::{Body, GeometricStream};

pub const DEFAULT_TERM_BUDGET: u64 = 10_000_000;

/// Hint attached to budget failures of the slowly converging series.
pub const FAST_SERIES_HINT: &str = "try --series central-binomial";

/// Outcome of a digit-targeted evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalResult {
    pub value: Real,
    pub terms_used: u64,
    /// Rigorous bound on |value − target| (truncation plus rounding).
    pub error_bound: Real,
    pub achieved_digits: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalOptions {
    pub term_budget: u64,
    /// Sum index ranges in 4096-term chunks on the rayon pool. Results are
    /// bit-identical to the serial mode.
    pub parallel: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            term_budget: DEFAULT_TERM_BUDGET,
            parallel: false,
        }
    }
}

/// Term `k` of a one-sided series, or the centre (`k = 0`) and the pair ±k
/// (`k ≥ 1`) of a bilateral one, at `ctx` precision.
pub fn series_term(id: &SeriesId, k: u64, ctx: &PrecCtx) -> Result<Real> {
    Ok(rat_to_real(&exact_term(id, k)?, ctx.bits()))
}

/// Σ_{n=−N..N} 1/(x − n)³ summed as the centre term followed by the pairs
/// (n, −n) in ascending n.
pub fn bilateral_partial(x: &Rat, n: u64, ctx: &PrecCtx) -> Result<Real> {
    if *x <= Rat::zero() || *x >= Rat::one() {
        return Err(Error::AbscissaOutOfRange(x.to_string()));
    }
    let body = Body::Bilateral {
        p: x.numer().clone(),
        q: x.denom().clone(),
    };
    let frac = sum_frac(ctx, n + 1);
    let acc = sum_indexed(&body, 0, n, frac, false);
    Ok(Real::from_fixed(&acc, frac, ctx.bits()))
}

/// `16x/(3N³)`, an upper bound on |Σ_{|n|>N} 1/(x − n)³| for 0 < x ≤ 1/2
/// and N ≥ 2. Returned at 64 bits, rounded upwards.
pub fn tail_bound_bilateral(x: &Rat, n: u64) -> Result<Real> {
    if *x <= Rat::zero() || *x > rat(1, 2) {
        return Err(Error::Precondition(format!(
            "bilateral tail bound needs 0 < x <= 1/2, got {x}"
        )));
    }
    if n < 2 {
        return Err(Error::Precondition(format!(
            "bilateral tail bound needs N >= 2, got {n}"
        )));
    }
    Ok(upper_real(&bilateral_tail_rat(x, n), 64))
}

/// Coefficient-scaled partial sum with `n` terms (bilateral ids: the pairs
/// up to ±n). Its limit is the series target.
pub fn partial_sum(id: &SeriesId, n: u64, ctx: &PrecCtx) -> Result<Real> {
    let plan = Plan::new(id, ctx)?;
    let frac = sum_frac(ctx, n.max(1)) + 24;
    let acc = match &plan.body {
        b if b.is_indexed() => {
            let hi = plan.index_hi(n);
            match hi {
                Some(hi) => sum_indexed(b, 0, hi, frac, false),
                None => BigInt::zero(),
            }
        }
        b => {
            let mut s = GeometricStream::new(b.clone(), frac);
            (0..n).map(|_| s.next_term().0).sum()
        }
    };
    Ok(&plan.coef * &Real::from_fixed(&acc, frac, ctx.bits()))
}

/// Coefficient-scaled upper bound on everything [`partial_sum`] omits at `n`.
pub fn tail_bound(id: &SeriesId, n: u64, ctx: &PrecCtx) -> Result<Real> {
    let plan = Plan::new(id, ctx)?;
    let bits = ctx.bits();
    let body_tail = match plan.tail_rat(n) {
        Some(r) => upper_real(&r?, bits),
        None => {
            let frac = sum_frac(ctx, n.max(1)) + 24;
            let mut s = GeometricStream::new(plan.body.clone(), frac);
            for _ in 0..n {
                s.next_term();
            }
            let t = s.tail_fixed().ok_or_else(|| {
                Error::Precondition(format!("no certified tail for {id} after {n} terms"))
            })?;
            Real::from_fixed(&t, frac, bits).inflate_ulps(1)
        }
    };
    Ok((&plan.coef.abs() * &body_tail).inflate_ulps(2))
}

/// Evaluate `id` until `target_digits` significant digits of its target are
/// certified, with the default term budget in serial mode.
pub fn eval_pi3(id: &SeriesId, target_digits: u32, ctx: &PrecCtx) -> Result<EvalResult> {
    eval_pi3_with(id, target_digits, ctx, &EvalOptions::default())
}

pub fn eval_pi3_with(
    id: &SeriesId,
    target_digits: u32,
    ctx: &PrecCtx,
    opts: &EvalOptions,
) -> Result<EvalResult> {
    eval_scaled(id, target_digits, ctx, opts, true, 5)
}

/// Like [`eval_pi3_with`] but for the bare body sum, without the scale
/// coefficient (e.g. Σ C(2k,k)/((2k+1)³16^k) itself, whose limit is 7π³/216).
pub fn eval_body_with(
    id: &SeriesId,
    target_digits: u32,
    ctx: &PrecCtx,
    opts: &EvalOptions,
) -> Result<EvalResult> {
    eval_scaled(id, target_digits, ctx, opts, false, 5)
}

/// One extra digit of target for identity checks, whose own precondition
/// already reserves five digits of headroom.
pub(crate) fn eval_margin(
    id: &SeriesId,
    target_digits: u32,
    ctx: &PrecCtx,
    opts: &EvalOptions,
    scaled: bool,
) -> Result<EvalResult> {
    eval_scaled(id, target_digits + 1, ctx, opts, scaled, 4)
}

fn eval_scaled(
    id: &SeriesId,
    target_digits: u32,
    ctx: &PrecCtx,
    opts: &EvalOptions,
    scaled: bool,
    headroom: u32,
) -> Result<EvalResult> {
    if target_digits == 0 {
        return Err(Error::Precondition("target digits must be at least 1".into()));
    }
    let required = target_digits as u64 + headroom as u64;
    if (ctx.decimal_digits() as u64) < required {
        return Err(Error::PrecisionInsufficient {
            required,
            available: ctx.decimal_digits() as u64,
        });
    }
    let mut plan = Plan::new(id, ctx)?;
    if !scaled {
        plan.coef = Real::one(ctx.bits());
    }
    if plan.body.is_indexed() {
        eval_indexed(&plan, target_digits, ctx, opts)
    } else {
        eval_geometric(&plan, target_digits, ctx, opts)
    }
}

/// π³ = [sin³(πx)/cos(πx)] · Σ_n 1/(x − n)³ for rational 0 < x < 1, x ≠ 1/2.
pub fn euler_general(x: &Rat, target_digits: u32, ctx: &PrecCtx) -> Result<EvalResult> {
    euler_general_with(x, target_digits, ctx, &EvalOptions::default())
}

pub fn euler_general_with(
    x: &Rat,
    target_digits: u32,
    ctx: &PrecCtx,
    opts: &EvalOptions,
) -> Result<EvalResult> {
    eval_pi3_with(&SeriesId::euler(x.clone())?, target_digits, ctx, opts)
}

/// Fractional bits for a fixed-point sum of `terms` terms.
fn sum_frac(ctx: &PrecCtx, terms: u64) -> u32 {
    ctx.bits() + (64 - terms.leading_zeros()) + 8
}

fn upper_real(r: &Rat, prec: u32) -> Real {
    rat_to_real(r, prec).inflate_ulps(1)
}

/// `16x/(3N³)` for the bilateral body at x ≤ 1/2.
fn bilateral_tail_rat(x: &Rat, n: u64) -> Rat {
    let n3 = BigInt::from(n).pow(3);
    x * Rat::new(BigInt::from(16), BigInt::from(3) * n3)
}

/// The body, its scale coefficient and the target of one evaluation.
struct Plan {
    id: SeriesId,
    body: Body,
    coef: Real,
}

impl Plan {
    fn new(id: &SeriesId, ctx: &PrecCtx) -> Result<Plan> {
        let bits = ctx.bits();
        let (body, coef) = match id {
            SeriesId::EulerBilateral(x) => {
                validate_abscissa(x)?;
                let one_minus = Rat::one() - x;
                let xr = if *x <= one_minus { x.clone() } else { one_minus };
                let coef = euler_coefficient(&xr, ctx);
                let body = Body::Bilateral {
                    p: xr.numer().clone(),
                    q: xr.denom().clone(),
                };
                (body, coef)
            }
            SeriesId::GoldenFifth => (Body::of(id), golden_coefficient(Coefficient::Fifth, ctx)),
            SeriesId::GoldenTenth => (Body::of(id), golden_coefficient(Coefficient::Tenth, ctx)),
            SeriesId::Quarter => (Body::of(id), golden_coefficient(Coefficient::Quarter, ctx)),
            SeriesId::AltOddCubesCorrected | SeriesId::AltOddCubesAsPrinted => {
                (Body::of(id), Real::from_int(32, bits))
            }
            SeriesId::CentralBinomial => (
                Body::of(id),
                Real::from_ratio(&BigInt::from(216), &BigInt::from(7), bits),
            ),
            SeriesId::PilehroodApery => (Body::of(id), Real::one(bits)),
            SeriesId::SunHarmonic => (Body::of(id), Real::from_int(48, bits)),
        };
        Ok(Plan {
            id: id.clone(),
            body,
            coef,
        })
    }

    /// Number of terms summed when the indexed body is cut at `n`.
    fn terms_for(&self, n: u64) -> u64 {
        match self.body {
            Body::AltOddCubes { .. } => n,
            _ => n + 1,
        }
    }

    /// Last summed index of an indexed body cut at `n`.
    fn index_hi(&self, n: u64) -> Option<u64> {
        match self.body {
            Body::AltOddCubes { .. } => n.checked_sub(1),
            _ => Some(n),
        }
    }

    /// Closed-form body tail at `n` for indexed bodies; `None` for the
    /// stream-certified ones.
    fn tail_rat(&self, n: u64) -> Option<Result<Rat>> {
        let need_two = || {
            Error::Precondition(format!("bilateral tail bound needs N >= 2, got {n}"))
        };
        match &self.body {
            Body::Bilateral { p, q } => Some(if n < 2 {
                Err(need_two())
            } else {
                Ok(bilateral_tail_rat(&Rat::new(p.clone(), q.clone()), n))
            }),
            Body::Unit { m } => Some(if n < 2 {
                Err(need_two())
            } else {
                // Σ 1/(1 − mn)³ = m⁻³ Σ 1/(1/m − n)³
                let m3 = BigInt::from(*m).pow(3);
                Ok(bilateral_tail_rat(&rat(1, *m as i64), n) / Rat::from_integer(m3))
            }),
            Body::AltOddCubes { start } => {
                let d = BigInt::from(2 * (start + n) + 1).pow(3);
                Some(Ok(Rat::new(BigInt::one(), d)))
            }
            _ => None,
        }
    }

    fn budget_error(&self, opts: &EvalOptions, digits: u32) -> Error {
        let hint = match self.id.def().tail_kind {
            TailKind::RatioGeometric => None,
            _ => Some(FAST_SERIES_HINT.to_string()),
        };
        Error::BudgetExceeded {
            budget: opts.term_budget,
            digits,
            hint,
        }
    }

    /// Value and rigorous error bound for a fixed-point body sum `acc` with
    /// `units` rounding units and a body tail bound `tail` (both scaled by
    /// `2^-frac`).
    fn finish(&self, acc: &BigInt, units: u64, tail: &Real, frac: u32, bits: u32) -> (Real, Real) {
        let s = Real::from_fixed(acc, frac, bits);
        let value = &self.coef * &s;
        let rounding = Real::from_int(units as i64, bits).mul_pow2(-(frac as i64));
        let trunc = (&self.coef.abs() * &(tail + &rounding)).inflate_ulps(4);
        // coefficient, conversion and product roundings relative to |value|
        let rel = (&value.abs() * &Real::from_int(16, bits)).mul_pow2(1 - bits as i64);
        let bound = (&trunc + &rel).inflate_ulps(2);
        (value, bound)
    }
}

/// sin³(πx)/cos(πx) at `ctx` precision, evaluated with 16 extra bits.
fn euler_coefficient(x: &Rat, ctx: &PrecCtx) -> Real {
    let w = ctx.bits() + 16;
    let wide = ctx.with_extra_guard(16);
    let arg = &ref_pi(&wide) * &rat_to_real(x, w);
    let (s, c) = wide.sin_cos(&arg);
    (&s.powi(3) / &c).with_prec(ctx.bits())
}

fn eval_indexed(plan: &Plan, digits: u32, ctx: &PrecCtx, opts: &EvalOptions) -> Result<EvalResult> {
    let bits = ctx.bits();
    let frac = sum_frac(ctx, opts.term_budget.max(1));
    let target = pow10_neg(digits, bits);
    let tail_at = |n: u64| -> Result<Real> {
        let r = plan.tail_rat(n).expect("indexed body")?;
        Ok(upper_real(&r, bits))
    };

    let mut acc = BigInt::zero();
    let mut summed: Option<u64> = None;
    let mut n: u64 = 16;
    loop {
        if plan.terms_for(n) > opts.term_budget {
            return Err(plan.budget_error(opts, digits));
        }
        if let Some(hi) = plan.index_hi(n) {
            let lo = summed.map_or(0, |s| s + 1);
            acc += sum_indexed(&plan.body, lo, hi, frac, opts.parallel);
            summed = Some(hi);
        }
        let terms = plan.terms_for(n);
        let tail = tail_at(n)?;
        let (value, bound) = plan.finish(&acc, terms, &tail, frac, bits);
        let achieved = correct_digits(&bound, &value);
        if achieved >= digits {
            return Ok(EvalResult {
                value,
                terms_used: terms,
                error_bound: bound,
                achieved_digits: achieved,
            });
        }
        // |value| ≥ |value| − bound; skip ahead to the first doubling whose
        // scaled tail is at most half of 10^-digits of that lower bound.
        let floor = &value.abs() - &bound;
        let mut next = n.saturating_mul(2);
        if !floor.is_negative() && !floor.is_zero() {
            let goal = (&floor * &target).mul_pow2(-1);
            let coef = plan.coef.abs();
            while plan.terms_for(next) <= opts.term_budget && &coef * &tail_at(next)? > goal {
                next = next.saturating_mul(2);
            }
        }
        n = next;
    }
}

fn eval_geometric(
    plan: &Plan,
    digits: u32,
    ctx: &PrecCtx,
    opts: &EvalOptions,
) -> Result<EvalResult> {
    let bits = ctx.bits();
    let frac = sum_frac(ctx, opts.term_budget.max(1)) + 24;
    let mut stream = GeometricStream::new(plan.body.clone(), frac);
    let mut acc = BigInt::zero();
    let mut units: u64 = 0;
    loop {
        if stream.emitted() >= opts.term_budget {
            return Err(plan.budget_error(opts, digits));
        }
        let (t, u) = stream.next_term();
        acc += t;
        units = units.saturating_add(u);
        if stream.ratio_violation() {
            return Err(plan.budget_error(opts, digits));
        }
        let Some(tail) = stream.tail_fixed() else {
            continue;
        };
        let tail = Real::from_fixed(&tail, frac, bits).inflate_ulps(1);
        let (value, bound) = plan.finish(&acc, units, &tail, frac, bits);
        let achieved = correct_digits(&bound, &value);
        if achieved >= digits {
            return Ok(EvalResult {
                value,
                terms_used: stream.emitted(),
                error_bound: bound,
                achieved_digits: achieved,
            });
        }
    }
}

/// Target constant of `id` at `ctx` precision, from the reference π.
pub fn target_value(id: &SeriesId, ctx: &PrecCtx) -> Real {
    let pi3 = ref_pi(ctx).powi(3);
    match id.def().target {
        Target::Pi3 => pi3,
        Target::Pi3Minus32 => &pi3 - &Real::from_int(32, ctx.bits()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numctx::{mk_context, to_sig_digits};
    use num_traits::Signed;

    #[test]
    fn term_examples() {
        let ctx = mk_context(20).unwrap();
        let one = Real::one(ctx.bits());
        assert_eq!(series_term(&SeriesId::AltOddCubesCorrected, 0, &ctx).unwrap(), one);
        assert_eq!(series_term(&SeriesId::CentralBinomial, 0, &ctx).unwrap(), one);
        assert!(series_term(&SeriesId::SunHarmonic, 1, &ctx).unwrap().is_zero());
        assert_eq!(
            series_term(&SeriesId::PilehroodApery, 0, &ctx).unwrap(),
            Real::from_int(32, ctx.bits())
        );
        assert_eq!(
            series_term(&SeriesId::AltOddCubesAsPrinted, 0, &ctx),
            Err(Error::IndexBelowStart { index: 0, start: 1 })
        );
    }

    #[test]
    fn bilateral_examples() {
        let ctx = mk_context(30).unwrap();
        assert_eq!(
            bilateral_partial(&rat(1, 5), 0, &ctx).unwrap(),
            Real::from_int(125, ctx.bits())
        );
        // 64 + (4/5)³ + (−4/3)³
        let v = bilateral_partial(&rat(1, 4), 1, &ctx).unwrap();
        let expect = rat(64, 1) + rat(64, 125) - rat(64, 27);
        assert_eq!(v, rat_to_real(&expect, ctx.bits()));
        assert_eq!(to_sig_digits(&v, 10), "62.14162963");
        assert!(matches!(
            bilateral_partial(&rat(5, 4), 3, &ctx),
            Err(Error::AbscissaOutOfRange(_))
        ));
    }

    #[test]
    fn tail_bound_examples() {
        let b = tail_bound_bilateral(&rat(1, 5), 10).unwrap();
        assert_eq!(crate::numctx::to_scientific(&b, 5), "1.0667e-3");
        let b = tail_bound_bilateral(&rat(1, 4), 100).unwrap();
        assert_eq!(crate::numctx::to_scientific(&b, 4), "1.333e-6");
        assert!(
            tail_bound_bilateral(&rat(1, 4), 200).unwrap()
                < tail_bound_bilateral(&rat(1, 4), 100).unwrap()
        );
        assert!(tail_bound_bilateral(&rat(1, 4), 1).is_err());
        assert!(tail_bound_bilateral(&rat(3, 4), 10).is_err());
    }

    #[test]
    fn bilateral_tail_dominates_far_partial() {
        // prefix sums once up to 2^16, checked against every cut N ≤ 2^14
        for m in [4u64, 5, 10] {
            let body = Body::Unit { m };
            let frac = 120;
            let mut prefix = Vec::with_capacity(1 << 14);
            let mut acc = BigInt::zero();
            for i in 0..=(1u64 << 14) {
                let (n, d) = body.indexed_ratio(i);
                acc += crate::numctx::fixed_ratio(&n, &d, frac);
                prefix.push(acc.clone());
            }
            let far = &acc + sum_indexed(&body, (1 << 14) + 1, 1 << 16, frac, false);
            let m3 = BigInt::from(m).pow(3);
            for n in 2..=(1u64 << 14) {
                let diff = (&far - &prefix[n as usize]).abs();
                let bound = bilateral_tail_rat(&rat(1, m as i64), n) / Rat::from_integer(m3.clone());
                // slack of one rounding unit per summed term
                let slack = BigInt::from(1u64 << 16);
                let bound_fixed = (bound.numer() << frac as usize) / bound.denom() + slack;
                assert!(diff <= bound_fixed, "m={m} N={n}");
            }
        }
    }

    #[test]
    fn golden_fifth_twelve_digits() {
        let ctx = mk_context(17).unwrap();
        let r = eval_pi3(&SeriesId::GoldenFifth, 12, &ctx).unwrap();
        assert_eq!(to_sig_digits(&r.value, 12), "31.0062766803");
        assert!(r.terms_used <= 20_000);
        assert!(r.error_bound < Real::from_ratio(&BigInt::from(5), &BigInt::from(10u64.pow(11)), 64));
        assert!(r.achieved_digits >= 12);
    }

    #[test]
    fn precision_insufficient() {
        let ctx = mk_context(14).unwrap();
        assert_eq!(
            eval_pi3(&SeriesId::Quarter, 10, &ctx),
            Err(Error::PrecisionInsufficient {
                required: 15,
                available: 14
            })
        );
    }

    #[test]
    fn budget_exceeded_carries_hint() {
        let ctx = mk_context(45).unwrap();
        match eval_pi3(&SeriesId::GoldenFifth, 40, &ctx) {
            Err(Error::BudgetExceeded { hint: Some(h), .. }) => assert!(h.contains("central-binomial")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn euler_general_symmetry_and_degenerate() {
        let ctx = mk_context(15).unwrap();
        let a = euler_general(&rat(1, 5), 8, &ctx).unwrap();
        let b = euler_general(&rat(4, 5), 8, &ctx).unwrap();
        assert_eq!(a, b);
        assert!(matches!(
            euler_general(&rat(1, 2), 8, &ctx),
            Err(Error::DegenerateAbscissa(_))
        ));
    }

    #[test]
    fn serial_and_parallel_eval_match() {
        let ctx = mk_context(15).unwrap();
        let par = EvalOptions {
            parallel: true,
            ..EvalOptions::default()
        };
        for id in [SeriesId::GoldenTenth, SeriesId::AltOddCubesCorrected] {
            let s = eval_pi3(&id, 10, &ctx).unwrap();
            let p = eval_pi3_with(&id, 10, &ctx, &par).unwrap();
            assert_eq!(s, p, "{id}");
        }
    }
}
