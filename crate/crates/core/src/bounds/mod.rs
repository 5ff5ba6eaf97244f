//! Counting formulas and the factorial inequality
//! `m(g) / (4·9^(12g-7)) > g!`, decided exactly or with certified
//! logarithmic enclosures.

mod interval;

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;
use thiserror::Error;

pub use interval::{ln_factorial, robbins, to_sci, Interval};

/// Largest `6g - 4` for which exact factorials are computed by default.
pub const DEFAULT_FACTORIAL_BUDGET: u64 = 1_000_000;
/// Digits carried by certified-log computations unless raised.
pub const DEFAULT_DIGITS: u32 = 40;
/// Precision ceiling for automatic raising.
pub const MAX_DIGITS: u32 = 2560;
/// Upper end of the linear scan used when probes are non-monotone.
pub const LINEAR_SCAN_LIMIT: u64 = 100_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundsError {
    #[error("genus must be positive")]
    ZeroGenus,
    #[error("exact evaluation needs ({n})! which exceeds the factorial budget {budget}; use the certified-log mode")]
    BudgetExceeded { n: u64, budget: u64 },
    #[error("verdict for g={g} still undecided at {digits} digits")]
    PrecisionExhausted { g: u64, digits: u32 },
    #[error("genus {0} is too large for this formula")]
    GenusTooLarge(u64),
    #[error("probed verdicts are not monotone and the bracket [1, {hi}] exceeds the linear-scan limit")]
    NonMonotone { hi: u64 },
}

/// Reduced rational with positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(pub BigRational);

impl ExactRational {
    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

/// Which denominator is used for `m(g)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MFormula {
    /// `(1/12)^g (6g-4)! / (g! (3g-2))`.
    #[default]
    Printed,
    /// `(1/12)^g (6g-4)! / (g! (3g-2)!)`, the automorphism-weighted count
    /// of maximal forms.
    Factorial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formulas {
    pub g: u64,
    pub m: ExactRational,
    pub v: BigUint,
    pub z: BigUint,
}

/// Product `lo * (lo+1) * ... * hi` by binary splitting.
fn range_product(lo: u64, hi: u64) -> BigUint {
    if lo > hi {
        return BigUint::one();
    }
    if hi - lo < 16 {
        return (lo..=hi).fold(BigUint::one(), |acc, k| acc * k);
    }
    let mid = lo + (hi - lo) / 2;
    range_product(lo, mid) * range_product(mid + 1, hi)
}

pub fn factorial(n: u64) -> BigUint {
    range_product(2, n)
}

fn checked_linear(g: u64, a: u64, b: u64) -> Result<u64, BoundsError> {
    g.checked_mul(a).and_then(|x| x.checked_sub(b)).ok_or(BoundsError::GenusTooLarge(g))
}

fn exact_m(g: u64, formula: MFormula) -> BigRational {
    let num = factorial(6 * g - 4);
    let d = match formula {
        MFormula::Printed => BigUint::from(3 * g - 2),
        MFormula::Factorial => factorial(3 * g - 2),
    };
    let den = num_traits::pow(BigUint::from(12u8), g as usize) * factorial(g) * d;
    BigRational::new(num.into(), den.into())
}

fn check_budget(g: u64, budget: u64) -> Result<(), BoundsError> {
    if g == 0 {
        return Err(BoundsError::ZeroGenus);
    }
    let n = checked_linear(g, 6, 4)?;
    if n > budget {
        return Err(BoundsError::BudgetExceeded { n, budget });
    }
    Ok(())
}

/// `m(g)`, `|V(g)| = 4·9^(12g-7)` and `|Z(g)| = 4·27^(12g-7)`, exactly.
pub fn formulas(g: u64) -> Result<Formulas, BoundsError> {
    formulas_with(g, MFormula::Printed, DEFAULT_FACTORIAL_BUDGET)
}

pub fn formulas_with(g: u64, formula: MFormula, budget: u64) -> Result<Formulas, BoundsError> {
    check_budget(g, budget)?;
    let e = (12 * g - 7) as usize;
    Ok(Formulas {
        g,
        m: ExactRational(exact_m(g, formula)),
        v: BigUint::from(4u8) * num_traits::pow(BigUint::from(9u8), e),
        z: BigUint::from(4u8) * num_traits::pow(BigUint::from(27u8), e),
    })
}

/// Certified enclosure of a natural logarithm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogBound {
    pub lower: BigRational,
    pub upper: BigRational,
}

impl LogBound {
    fn from_interval(iv: Interval) -> LogBound {
        LogBound { lower: iv.lo, upper: iv.hi }
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lower <= x && x <= &self.upper
    }

    pub fn width(&self) -> BigRational {
        &self.upper - &self.lower
    }

    /// Lower bound rounded down and upper bound rounded up, in scientific
    /// notation with `sig` significant digits.
    pub fn to_sci(&self, sig: u32) -> (String, String) {
        (to_sci(&self.lower, sig, false), to_sci(&self.upper, sig, true))
    }
}

impl fmt::Display for LogBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.to_sci(12);
        write!(f, "[{lo}, {hi}]")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Undecided,
}

impl Verdict {
    fn of(margin: &LogBound) -> Verdict {
        if margin.lower.is_positive() {
            Verdict::Holds
        } else if margin.upper.is_negative() {
            Verdict::Fails
        } else {
            Verdict::Undecided
        }
    }

    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Undecided => "undecided",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact { budget: u64 },
    CertifiedLog { digits: u32 },
}

impl Mode {
    pub fn exact() -> Mode {
        Mode::Exact { budget: DEFAULT_FACTORIAL_BUDGET }
    }

    pub fn certified() -> Mode {
        Mode::CertifiedLog { digits: DEFAULT_DIGITS }
    }
}

/// Outcome of one inequality check. `margin` encloses
/// `ln(m(g) / (4·9^(12g-7))) - ln g!`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundCheck {
    pub g: u64,
    pub mode: Mode,
    pub formula: MFormula,
    pub verdict: Verdict,
    pub margin: LogBound,
}

impl BoundCheck {
    pub fn holds(&self) -> bool {
        self.verdict.holds()
    }
}

/// Certified margin from Robbins bounds and interval logarithms.
fn log_margin(g: u64, formula: MFormula, digits: u32) -> Result<LogBound, BoundsError> {
    if g == 0 {
        return Err(BoundsError::ZeroGenus);
    }
    let n = checked_linear(g, 6, 4)?;
    let k = checked_linear(g, 3, 2)?;
    let e = checked_linear(g, 12, 7)?;
    let p = digits;
    let scale = |iv: Interval, c: u64| iv.scale(&BigRational::from_integer(BigInt::from(c)), p);
    let denominator_term = match formula {
        MFormula::Printed => interval::ln_int(k, p),
        MFormula::Factorial => ln_factorial(k, p),
    };
    let subtract = [
        scale(interval::ln_int(12, p), g),
        scale(ln_factorial(g, p), 2),
        denominator_term,
        interval::ln_int(4, p),
        scale(interval::ln_int(9, p), e),
    ];
    let margin = subtract.iter().fold(ln_factorial(n, p), |acc, t| acc.sub(t));
    Ok(LogBound::from_interval(margin))
}

fn exact_check(g: u64, formula: MFormula, budget: u64) -> Result<BoundCheck, BoundsError> {
    check_budget(g, budget)?;
    let lhs = factorial(6 * g - 4);
    let d = match formula {
        MFormula::Printed => BigUint::from(3 * g - 2),
        MFormula::Factorial => factorial(3 * g - 2),
    };
    let gf = factorial(g);
    let rhs = num_traits::pow(BigUint::from(12u8), g as usize)
        * &gf
        * &gf
        * d
        * 4u8
        * num_traits::pow(BigUint::from(9u8), (12 * g - 7) as usize);
    let verdict = if lhs > rhs { Verdict::Holds } else { Verdict::Fails };
    let ratio = BigRational::new(lhs.into(), rhs.into());
    let margin = LogBound::from_interval(interval::ln(&ratio, DEFAULT_DIGITS));
    Ok(BoundCheck { g, mode: Mode::Exact { budget }, formula, verdict, margin })
}

/// Decides `m(g) / (4·9^(12g-7)) > g!`. In certified-log mode the verdict
/// is `Undecided` when the margin enclosure straddles zero.
pub fn check_bound(g: u64, mode: Mode) -> Result<BoundCheck, BoundsError> {
    check_bound_with(g, mode, MFormula::Printed)
}

pub fn check_bound_with(g: u64, mode: Mode, formula: MFormula) -> Result<BoundCheck, BoundsError> {
    match mode {
        Mode::Exact { budget } => exact_check(g, formula, budget),
        Mode::CertifiedLog { digits } => {
            let margin = log_margin(g, formula, digits)?;
            Ok(BoundCheck { g, mode, formula, verdict: Verdict::of(&margin), margin })
        }
    }
}

/// Certified-log check that doubles the precision until the verdict is
/// decided, failing with `PrecisionExhausted` past `max_digits`.
pub fn check_bound_auto(g: u64, digits: u32, max_digits: u32, formula: MFormula) -> Result<BoundCheck, BoundsError> {
    let mut d = digits.max(1);
    loop {
        let c = check_bound_with(g, Mode::CertifiedLog { digits: d }, formula)?;
        if c.verdict != Verdict::Undecided {
            return Ok(c);
        }
        if d >= max_digits {
            return Err(BoundsError::PrecisionExhausted { g, digits: d });
        }
        d = (d * 2).min(max_digits);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Threshold {
    /// Least `g` with a certified `Holds` verdict.
    pub g: u64,
    /// Every `(g, verdict)` evaluated, in probe order.
    pub probes: Vec<(u64, Verdict)>,
    /// Probed verdicts were consistent with a single sign change.
    pub monotone: bool,
}

/// Least `g` at which the certified check holds, by exponential probing
/// followed by binary search. Consistency of the probed verdicts is
/// checked afterwards; if it fails, a linear scan up to the bracket is used.
pub fn minimal_threshold(digits: u32, formula: MFormula) -> Result<Threshold, BoundsError> {
    let mut probes = Vec::new();
    let probe = |g: u64, probes: &mut Vec<(u64, Verdict)>| -> Result<bool, BoundsError> {
        let c = check_bound_auto(g, digits, MAX_DIGITS, formula)?;
        probes.push((g, c.verdict));
        Ok(c.holds())
    };
    let mut hi = 1u64;
    while !probe(hi, &mut probes)? {
        hi = hi.checked_mul(2).ok_or(BoundsError::GenusTooLarge(hi))?;
    }
    // Invariant: lo fails (or is 0), hi holds.
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if probe(mid, &mut probes)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let monotone = probes.iter().all(|&(g, v)| (g >= hi) == v.holds());
    if monotone {
        return Ok(Threshold { g: hi, probes, monotone });
    }
    if hi > LINEAR_SCAN_LIMIT {
        return Err(BoundsError::NonMonotone { hi });
    }
    for g in 1..=hi {
        if probe(g, &mut probes)? {
            return Ok(Threshold { g, probes, monotone });
        }
    }
    unreachable!("the bracket end was certified to hold")
}
