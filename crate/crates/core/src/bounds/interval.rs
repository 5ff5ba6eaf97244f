//! Rational intervals on a decimal grid with outward rounding, and certified
//! enclosures of `ln x`, `π` and `ln n!`.

use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Closed interval `[lo, hi]` of rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

fn pow10(p: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u8), p as usize)
}

pub(crate) fn floor_grid(x: &BigRational, p: u32) -> BigRational {
    let s = pow10(p);
    BigRational::new((x * BigRational::from_integer(s.clone())).floor().to_integer(), s)
}

pub(crate) fn ceil_grid(x: &BigRational, p: u32) -> BigRational {
    let s = pow10(p);
    BigRational::new((x * BigRational::from_integer(s.clone())).ceil().to_integer(), s)
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Interval {
    pub fn point(x: BigRational) -> Interval {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Interval {
        Interval::point(BigRational::zero())
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    /// Multiplies by an exact rational, rounding outward to the grid.
    pub fn scale(&self, k: &BigRational, p: u32) -> Interval {
        let (a, b) = (&self.lo * k, &self.hi * k);
        let (lo, hi) = if k.is_negative() { (b, a) } else { (a, b) };
        Interval { lo: floor_grid(&lo, p), hi: ceil_grid(&hi, p) }
    }

    pub fn round(&self, p: u32) -> Interval {
        Interval { lo: floor_grid(&self.lo, p), hi: ceil_grid(&self.hi, p) }
    }
}

/// Enclosure of `atanh t = Σ t^(2i+1)/(2i+1)` for rational `|t| < 1`.
/// Powers are carried as fixed-point integers at scale `10^p`, one sequence
/// rounded down and one rounded up; the tail after `N` terms is at most
/// `|t|^(2N+1) / ((2N+1)(1 - t²))`.
fn atanh(t: &BigRational, p: u32) -> Interval {
    if t.is_zero() {
        return Interval::zero();
    }
    if t.is_negative() {
        let a = atanh(&-t, p);
        return Interval { lo: -a.hi, hi: -a.lo };
    }
    let (a, b) = (t.numer().clone(), t.denom().clone());
    let (a2, b2) = (&a * &a, &b * &b);
    let s = pow10(p);
    let mut lo_pow = (&s * &a).div_floor(&b);
    let mut hi_pow = (&s * &a).div_ceil(&b);
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    let mut i: u64 = 0;
    loop {
        let k = BigInt::from(2 * i + 1);
        lo += lo_pow.div_floor(&k);
        hi += hi_pow.div_ceil(&k);
        lo_pow = (&lo_pow * &a2).div_floor(&b2);
        hi_pow = (&hi_pow * &a2).div_ceil(&b2);
        i += 1;
        let k = BigInt::from(2 * i + 1);
        if hi_pow < k {
            let tail = (&hi_pow * &b2).div_ceil(&(k * (&b2 - &a2)));
            hi += tail;
            return Interval { lo: BigRational::new(lo, s.clone()), hi: BigRational::new(hi, s) };
        }
    }
}

thread_local! {
    static LN2_CACHE: RefCell<HashMap<u32, Interval>> = RefCell::new(HashMap::new());
    static PI_CACHE: RefCell<HashMap<u32, Interval>> = RefCell::new(HashMap::new());
}

fn cached(cache: &'static std::thread::LocalKey<RefCell<HashMap<u32, Interval>>>, p: u32, f: fn(u32) -> Interval) -> Interval {
    if let Some(v) = cache.with(|c| c.borrow().get(&p).cloned()) {
        return v;
    }
    let v = f(p);
    cache.with(|c| c.borrow_mut().insert(p, v.clone()));
    v
}

/// Enclosure of `ln 2 = 2 atanh(1/3)`.
pub fn ln2(p: u32) -> Interval {
    cached(&LN2_CACHE, p, |p| {
        let a = atanh(&BigRational::new(BigInt::one(), BigInt::from(3)), p + 2);
        a.scale(&rat(2), p)
    })
}

/// Enclosure of `arctan(1/q)` from the alternating series; the first
/// omitted term bounds the error on the side of its sign.
fn arctan_inv(q: i64, p: u32) -> Interval {
    let eps = BigRational::new(BigInt::one(), pow10(p + 2));
    let q_rat = rat(q);
    let q2 = &q_rat * &q_rat;
    let mut sum = BigRational::zero();
    let mut power = BigRational::one() / q_rat; // q^-(2i+1)
    let mut i: i64 = 0;
    loop {
        let term = &power / rat(2 * i + 1);
        if term < eps {
            // Omitted term has sign (-1)^i.
            let (lo, hi) = if i % 2 == 0 { (sum.clone(), &sum + &term) } else { (&sum - &term, sum.clone()) };
            return Interval { lo, hi }.round(p);
        }
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &q2;
        i += 1;
    }
}

/// Enclosure of `π = 16 arctan(1/5) - 4 arctan(1/239)`.
pub fn pi(p: u32) -> Interval {
    cached(&PI_CACHE, p, |p| {
        let a = arctan_inv(5, p + 2).scale(&rat(16), p + 2);
        let b = arctan_inv(239, p + 2).scale(&rat(4), p + 2);
        a.sub(&b).round(p)
    })
}

/// Enclosure of `ln x` for rational `x > 0`, accurate to about `10^-p`.
pub fn ln(x: &BigRational, p: u32) -> Interval {
    assert!(x.is_positive(), "ln of a non-positive number");
    if x.is_one() {
        return Interval::zero();
    }
    let k = x.numer().bits() as i64 - x.denom().bits() as i64;
    let guard = (k.unsigned_abs().max(1) as f64).log10().ceil() as u32 + 4;
    let work = p + guard;
    let two_k = num_traits::pow(BigInt::from(2u8), k.unsigned_abs() as usize);
    // y = x / 2^k lies in (1/2, 2).
    let y = if k >= 0 { x / BigRational::from_integer(two_k) } else { x * BigRational::from_integer(two_k) };
    let t_of = |y: &BigRational| (y - BigRational::one()) / (y + BigRational::one());
    let (y_lo, y_hi) = (floor_grid(&y, work), ceil_grid(&y, work));
    let ln_y = Interval {
        lo: atanh(&t_of(&y_lo), work).lo * rat(2),
        hi: atanh(&t_of(&y_hi), work).hi * rat(2),
    };
    let scaled_ln2 = ln2(work).scale(&rat(k), work);
    scaled_ln2.add(&ln_y).round(p)
}

pub fn ln_int(n: u64, p: u32) -> Interval {
    ln(&BigRational::from_integer(BigInt::from(n)), p)
}

/// Robbins' enclosure of `ln n!` for `n >= 1`:
/// `S(n) + 1/(12n+1) < ln n! < S(n) + 1/(12n)` with
/// `S(n) = (n + 1/2) ln n - n + ln(2π)/2`.
pub fn robbins(n: u64, p: u32) -> Interval {
    assert!(n >= 1);
    let work = p + 4;
    let ln_n = ln_int(n, work);
    let pi_iv = pi(work);
    let two_pi = Interval { lo: &pi_iv.lo * rat(2), hi: &pi_iv.hi * rat(2) };
    let ln_two_pi = Interval { lo: ln(&two_pi.lo, work).lo, hi: ln(&two_pi.hi, work).hi };
    let nn = BigRational::from_integer(BigInt::from(n));
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let main = ln_n.scale(&(&nn + &half), work);
    let s = main.sub(&Interval::point(nn.clone())).add(&ln_two_pi.scale(&half, work));
    let twelve_n = BigInt::from(12u8) * BigInt::from(n);
    let lo_corr = BigRational::new(BigInt::one(), &twelve_n + BigInt::one());
    let hi_corr = BigRational::new(BigInt::one(), twelve_n);
    Interval { lo: floor_grid(&(&s.lo + lo_corr), p), hi: ceil_grid(&(&s.hi + hi_corr), p) }
}

/// `ln n!`, exactly zero for `n <= 1`.
pub fn ln_factorial(n: u64, p: u32) -> Interval {
    if n <= 1 {
        Interval::zero()
    } else {
        robbins(n, p)
    }
}

/// Scientific notation with `sig` significant digits, rounded toward
/// `+∞` when `up`, else toward `-∞`.
pub fn to_sci(x: &BigRational, sig: u32, up: bool) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    if x.is_negative() {
        return format!("-{}", sci_abs(&-x, sig, !up));
    }
    sci_abs(x, sig, up)
}

fn sci_abs(a: &BigRational, sig: u32, up: bool) -> String {
    // Rough decimal exponent from bit lengths, then corrected.
    let bits = a.numer().bits() as i64 - a.denom().bits() as i64;
    let mut e = ((bits as f64) * std::f64::consts::LOG10_2).floor() as i64 - 1;
    let ten = BigRational::from_integer(BigInt::from(10u8));
    let pow = |k: i64| -> BigRational {
        let base = num_traits::pow(ten.clone(), k.unsigned_abs() as usize);
        if k >= 0 {
            base
        } else {
            BigRational::one() / base
        }
    };
    while &pow(e + 1) <= a {
        e += 1;
    }
    while &pow(e) > a {
        e -= 1;
    }
    let scaled = a / pow(e - (sig as i64 - 1));
    let mut m = if up { scaled.ceil() } else { scaled.floor() }.to_integer();
    let limit = num_traits::pow(BigInt::from(10u8), sig as usize);
    if m >= limit {
        let (q, r) = m.div_rem(&BigInt::from(10u8));
        m = if up && !r.is_zero() { q + 1 } else { q };
        e += 1;
    }
    let digits = m.to_string();
    let (head, tail) = digits.split_at(1);
    let tail = tail.trim_end_matches('0');
    if tail.is_empty() {
        format!("{head}e{e}")
    } else {
        format!("{head}.{tail}e{e}")
    }
}
