use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::goldfield::{rat, Rat};

/// One entry per π³ series the evaluator knows about.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SeriesId {
    /// Σₙ 1/(x − n)³ over all integers, scaled by sin³(πx)/cos(πx).
    EulerBilateral(Rat),
    /// Σₙ 1/(1 − 5n)³ with the golden-ratio coefficient (125/4)(3−φ)^{3/2}/φ.
    GoldenFifth,
    /// Σₙ 1/(1 − 10n)³ with the coefficient 250/(φ³√(2+φ)).
    GoldenTenth,
    /// 32 Σₙ 1/(1 − 4n)³.
    Quarter,
    /// 32 Σ_{k≥0} (−1)^k/(2k+1)³.
    AltOddCubesCorrected,
    /// The same sum started at k = 1; its limit is π³ − 32.
    AltOddCubesAsPrinted,
    /// (216/7) Σ C(2k,k)/((2k+1)³ 16^k).
    CentralBinomial,
    /// Σ 32·C(2k,k)/(16^k(2k+1)³) − 24·C(2k,k)/(16^k(2k+1))·Σ_{m<k} 1/(2m+1)².
    PilehroodApery,
    /// 48 Σ_{k≥1} 2^k H_{k−1}^{(2)}/(k C(2k,k)).
    SunHarmonic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    Pi3,
    /// π³ − 32, the limit of the k = 1 start of the alternating odd cubes.
    Pi3Minus32,
}

impl Target {
    pub fn label(&self) -> &'static str {
        match self {
            Target::Pi3 => "pi^3",
            Target::Pi3Minus32 => "pi^3-32",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SummationOrder {
    Ascending,
    BilateralPaired,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TailKind {
    AlternatingFirstTerm,
    BilateralCubic,
    RatioGeometric,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesDef {
    pub id: SeriesId,
    pub start_index: u64,
    pub target: Target,
    pub summation_order: SummationOrder,
    pub tail_kind: TailKind,
}

impl SeriesId {
    /// The fixed catalog (everything except the general bilateral family).
    pub fn fixed() -> [SeriesId; 8] {
        [
            SeriesId::GoldenFifth,
            SeriesId::GoldenTenth,
            SeriesId::Quarter,
            SeriesId::AltOddCubesCorrected,
            SeriesId::AltOddCubesAsPrinted,
            SeriesId::CentralBinomial,
            SeriesId::PilehroodApery,
            SeriesId::SunHarmonic,
        ]
    }

    /// Bilateral family at x, checking 0 < x < 1 and x ≠ 1/2.
    pub fn euler(x: Rat) -> Result<SeriesId> {
        validate_abscissa(&x)?;
        Ok(SeriesId::EulerBilateral(x))
    }

    pub fn def(&self) -> SeriesDef {
        use SeriesId::*;
        let (start_index, target, summation_order, tail_kind) = match self {
            EulerBilateral(_) | GoldenFifth | GoldenTenth | Quarter => (
                0,
                Target::Pi3,
                SummationOrder::BilateralPaired,
                TailKind::BilateralCubic,
            ),
            AltOddCubesCorrected => (
                0,
                Target::Pi3,
                SummationOrder::Ascending,
                TailKind::AlternatingFirstTerm,
            ),
            AltOddCubesAsPrinted => (
                1,
                Target::Pi3Minus32,
                SummationOrder::Ascending,
                TailKind::AlternatingFirstTerm,
            ),
            CentralBinomial | PilehroodApery => (
                0,
                Target::Pi3,
                SummationOrder::Ascending,
                TailKind::RatioGeometric,
            ),
            SunHarmonic => (
                1,
                Target::Pi3,
                SummationOrder::Ascending,
                TailKind::RatioGeometric,
            ),
        };
        SeriesDef {
            id: self.clone(),
            start_index,
            target,
            summation_order,
            tail_kind,
        }
    }

    pub fn start_index(&self) -> u64 {
        self.def().start_index
    }

    pub fn is_bilateral(&self) -> bool {
        self.def().summation_order == SummationOrder::BilateralPaired
    }

    /// Command-line name.
    pub fn name(&self) -> String {
        use SeriesId::*;
        match self {
            EulerBilateral(x) => format!("euler-{}/{}", x.numer(), x.denom()),
            GoldenFifth => "golden-fifth".into(),
            GoldenTenth => "golden-tenth".into(),
            Quarter => "quarter".into(),
            AltOddCubesCorrected => "alt-odd-cubes".into(),
            AltOddCubesAsPrinted => "alt-odd-cubes-as-printed".into(),
            CentralBinomial => "central-binomial".into(),
            PilehroodApery => "pilehrood-apery".into(),
            SunHarmonic => "sun-harmonic".into(),
        }
    }
}

impl fmt::Display for SeriesId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for SeriesId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(x) = s.strip_prefix("euler-") {
            return SeriesId::euler(parse_rat(x)?);
        }
        SeriesId::fixed()
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown series '{s}'")))
    }
}

/// Parse `p/q` (or a bare integer) into a canonical rational.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::Precondition(format!("cannot parse rational '{s}', expected p/q"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let p: i64 = p.parse().map_err(|_| bad())?;
    let q: i64 = q.parse().map_err(|_| bad())?;
    if q == 0 {
        return Err(bad());
    }
    Ok(rat(p, q))
}

pub(crate) fn validate_abscissa(x: &Rat) -> Result<()> {
    if *x <= Rat::zero() || *x >= Rat::one() {
        return Err(Error::AbscissaOutOfRange(x.to_string()));
    }
    if *x == rat(1, 2) {
        return Err(Error::DegenerateAbscissa(x.to_string()));
    }
    Ok(())
}
