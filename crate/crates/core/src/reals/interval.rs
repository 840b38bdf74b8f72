//! Closed intervals with dyadic endpoints and outward rounding.
//!
//! Every operation returns an interval containing the exact image of its
//! arguments. Endpoints are rounded to the interval's working precision
//! (significant bits), lower endpoints toward `-inf` and upper endpoints
//! toward `+inf`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::One;

use super::dyadic::{Dyadic, Rounding};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl Interval {
    /// Build from endpoints. Fails if `lo > hi`.
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidInput(format!("interval endpoints out of order: {lo:?} > {hi:?}")));
        }
        Ok(Interval { lo, hi, prec })
    }

    fn from_bounds(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        debug_assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo: lo.round(prec, Rounding::Down), hi: hi.round(prec, Rounding::Up), prec }
    }

    pub fn point(x: Dyadic, prec: u32) -> Self {
        Interval::from_bounds(x.clone(), x, prec)
    }

    pub fn from_int(n: impl Into<BigInt>, prec: u32) -> Self {
        Interval::point(Dyadic::from_int(n), prec)
    }

    /// Enclosure of the rational `num / den`.
    pub fn from_ratio(num: impl Into<BigInt>, den: impl Into<BigInt>, prec: u32) -> Result<Self> {
        let (num, den) = (Dyadic::from_int(num), Dyadic::from_int(den));
        if den.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        Ok(Interval {
            lo: num.div_rounded(&den, prec, Rounding::Down),
            hi: num.div_rounded(&den, prec, Rounding::Up),
            prec,
        })
    }

    /// Enclosure of a decimal literal such as `"0.38"`, `"1.4e12"` or `"-7"`.
    pub fn from_decimal(s: &str, prec: u32) -> Result<Self> {
        let (num, den) = parse_decimal(s)?;
        Interval::from_ratio(num, den, prec)
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Dyadic {
        (&self.lo + &self.hi).mul_pow2(-1)
    }

    /// Re-round the endpoints outward to `prec` bits.
    pub fn with_precision(&self, prec: u32) -> Self {
        Interval::from_bounds(self.lo.clone(), self.hi.clone(), prec)
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Certainly positive.
    pub fn is_positive(&self) -> bool {
        self.lo.signum() > 0
    }

    /// Certainly negative.
    pub fn is_negative(&self) -> bool {
        self.hi.signum() < 0
    }

    /// `Some(ordering)` when the comparison with `other` is decided for
    /// every pair of points, `None` when the intervals overlap.
    pub fn certain_cmp(&self, other: &Interval) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.lo == self.hi && other.lo == other.hi && self.lo == other.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Certainly `self < other`; `InsufficientPrecision` if undecided.
    pub fn certainly_lt(&self, other: &Interval) -> Result<bool> {
        match self.certain_cmp(other) {
            Some(Ordering::Less) => Ok(true),
            Some(_) => Ok(false),
            None => Err(Error::insufficient("interval comparison overlaps")),
        }
    }

    pub fn neg(&self) -> Self {
        Interval { lo: -&self.hi, hi: -&self.lo, prec: self.prec }
    }

    pub fn abs(&self) -> Self {
        if self.lo.signum() >= 0 {
            self.clone()
        } else if self.hi.signum() <= 0 {
            self.neg()
        } else {
            let m = std::cmp::max(self.lo.abs(), self.hi.abs());
            Interval { lo: Dyadic::zero(), hi: m, prec: self.prec }
        }
    }

    pub fn add(&self, rhs: &Interval) -> Self {
        let prec = self.prec.max(rhs.prec);
        Interval::from_bounds(&self.lo + &rhs.lo, &self.hi + &rhs.hi, prec)
    }

    pub fn sub(&self, rhs: &Interval) -> Self {
        let prec = self.prec.max(rhs.prec);
        Interval::from_bounds(&self.lo - &rhs.hi, &self.hi - &rhs.lo, prec)
    }

    pub fn mul(&self, rhs: &Interval) -> Self {
        let prec = self.prec.max(rhs.prec);
        let products = [&self.lo * &rhs.lo, &self.lo * &rhs.hi, &self.hi * &rhs.lo, &self.hi * &rhs.hi];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        Interval::from_bounds(lo, hi, prec)
    }

    pub fn square(&self) -> Self {
        let a = self.abs();
        Interval::from_bounds(&a.lo * &a.lo, &a.hi * &a.hi, self.prec)
    }

    /// Multiply by an exact power of two.
    pub fn mul_pow2(&self, k: i64) -> Self {
        Interval { lo: self.lo.mul_pow2(k), hi: self.hi.mul_pow2(k), prec: self.prec }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.contains_zero() {
            return Err(Error::Domain("reciprocal of an interval containing 0".into()));
        }
        let one = Dyadic::one();
        Ok(Interval {
            lo: one.div_rounded(&self.hi, self.prec, Rounding::Down),
            hi: one.div_rounded(&self.lo, self.prec, Rounding::Up),
            prec: self.prec,
        })
    }

    pub fn div(&self, rhs: &Interval) -> Result<Self> {
        if rhs.contains_zero() {
            return Err(Error::Domain("denominator interval contains 0".into()));
        }
        let prec = self.prec.max(rhs.prec);
        let num = [&self.lo, &self.hi];
        let den = [&rhs.lo, &rhs.hi];
        let mut lo: Option<Dyadic> = None;
        let mut hi: Option<Dyadic> = None;
        for n in num {
            for d in den {
                let l = n.div_rounded(d, prec, Rounding::Down);
                let h = n.div_rounded(d, prec, Rounding::Up);
                lo = Some(match lo {
                    Some(x) if x <= l => x,
                    _ => l,
                });
                hi = Some(match hi {
                    Some(x) if x >= h => x,
                    _ => h,
                });
            }
        }
        Ok(Interval { lo: lo.unwrap(), hi: hi.unwrap(), prec })
    }

    /// Integer power by repeated squaring; negative exponents go through
    /// the reciprocal.
    pub fn pow_int(&self, n: i64) -> Result<Self> {
        if n < 0 {
            return self.pow_int(-n)?.recip();
        }
        let mut result = Interval::from_int(1, self.prec);
        let mut base = self.clone();
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        Ok(result)
    }

    pub fn sqrt(&self) -> Result<Self> {
        if !self.is_positive() {
            return Err(Error::Domain("sqrt requires a positive interval".into()));
        }
        Ok(Interval {
            lo: self.lo.sqrt_rounded(self.prec, Rounding::Down),
            hi: self.hi.sqrt_rounded(self.prec, Rounding::Up),
            prec: self.prec,
        })
    }

    /// Natural logarithm. Monotone, so the image is `[ln lo, ln hi]` with
    /// each endpoint enclosed by a certified series.
    pub fn ln(&self) -> Result<Self> {
        if !self.is_positive() {
            return Err(Error::Domain("ln requires a positive interval".into()));
        }
        let lo = ln_point(&self.lo, self.prec)?.lo;
        let hi = ln_point(&self.hi, self.prec)?.hi;
        Ok(Interval::from_bounds(lo, hi, self.prec))
    }

    /// `ln 2` at `prec` bits.
    pub fn ln2(prec: u32) -> Self {
        ln2_enclosure(prec + 16).with_precision(prec)
    }

    /// Enclosure of `||x||`, the distance to the nearest integer.
    ///
    /// Fails with `InsufficientPrecision` when the width is not below 1/4
    /// or when the interval straddles a half-integer, since then the
    /// nearest integer is not determined.
    pub fn nearest_int_distance(&self) -> Result<Interval> {
        if self.width() >= Dyadic::pow2(-2) {
            return Err(Error::insufficient("interval too wide for nearest-integer distance"));
        }
        let half = Dyadic::pow2(-1);
        let n_lo = (&self.lo + &half).floor();
        let n_hi = (&self.hi + &half).floor();
        if n_lo != n_hi {
            return Err(Error::insufficient("nearest integer not determined"));
        }
        let shifted = self.sub(&Interval::from_int(n_lo, self.prec));
        Ok(shifted.abs())
    }

    /// `floor(x)` when the interval determines it.
    pub fn certified_floor(&self) -> Result<BigInt> {
        let a = self.lo.floor();
        let b = self.hi.floor();
        if a == b {
            Ok(a)
        } else {
            Err(Error::insufficient("floor not determined by interval"))
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.midpoint().to_f64()
    }

    /// `>= lo` rendering of the lower endpoint (rounded down).
    pub fn lower_decimal(&self, digits: u32) -> String {
        self.lo.to_decimal(digits, Rounding::Down)
    }

    /// `<= hi` rendering of the upper endpoint (rounded up).
    pub fn upper_decimal(&self, digits: u32) -> String {
        self.hi.to_decimal(digits, Rounding::Up)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]@{}", self.lower_decimal(20), self.upper_decimal(20), self.prec)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lower_decimal(12), self.upper_decimal(12))
    }
}

/// Parse a decimal literal into an exact fraction `num / den`.
pub(crate) fn parse_decimal(s: &str) -> Result<(BigInt, BigInt)> {
    let bad = || Error::InvalidInput(format!("not a decimal number: `{s}`"));
    let t = s.trim();
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int_part, frac_part) = match mant.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mant, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = digits.parse().map_err(|_| bad())?;
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    if scale >= 0 {
        Ok((num * num_traits::pow(ten, scale as usize), BigInt::one()))
    } else {
        Ok((num, num_traits::pow(ten, (-scale) as usize)))
    }
}

/// Extra bits carried inside series evaluations.
const SERIES_GUARD: u32 = 24;

/// `2 * atanh(z)` for a small interval `z` (|z| <= 1/3), summed until the
/// terms drop below `2^-(prec+4)` and closed with a rigorous tail bound.
fn two_atanh(z: &Interval, prec: u32) -> Interval {
    let w = prec + SERIES_GUARD;
    let z = z.with_precision(w);
    let z2 = z.square();
    let mut term = z.clone();
    let mut sum = z.clone();
    let threshold = Dyadic::pow2(-(w as i64) - 4);
    let mut k: i64 = 1;
    loop {
        term = term.mul(&z2);
        k += 2;
        let t = term.div(&Interval::from_int(k, w)).expect("odd divisor");
        sum = sum.add(&t);
        let mag = term.abs();
        if mag.hi <= threshold {
            // Remaining terms: |z|^(k+2)/(k+2) * 1/(1 - z^2) <= |z|^k * z^2 * 9/8.
            let bound = mag.mul(&z2).hi.clone();
            let tail = &bound * &Dyadic::new(BigInt::from(9), -3);
            let tail = Interval { lo: -&tail, hi: tail, prec: w };
            sum = sum.add(&tail);
            break;
        }
    }
    sum.mul_pow2(1)
}

fn ln2_cache() -> &'static Mutex<HashMap<u32, Interval>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Interval>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `ln 2 = 2 atanh(1/3)`.
fn ln2_enclosure(prec: u32) -> Interval {
    if let Some(v) = ln2_cache().lock().unwrap().get(&prec) {
        return v.clone();
    }
    let third = Interval::from_ratio(1, 3, prec + SERIES_GUARD).unwrap();
    let v = two_atanh(&third, prec);
    ln2_cache().lock().unwrap().insert(prec, v.clone());
    v
}

/// Enclosure of `ln x` for a positive dyadic point.
fn ln_point(x: &Dyadic, prec: u32) -> Result<Interval> {
    debug_assert!(x.signum() > 0);
    if *x == Dyadic::one() {
        return Ok(Interval::from_int(0, prec));
    }
    let w = prec + SERIES_GUARD;
    // x = y * 2^k with y in [3/4, 3/2).
    let mut k = x.ilog2().unwrap();
    let mut y = x.mul_pow2(-k);
    if y >= Dyadic::new(BigInt::from(3), -1) {
        y = y.mul_pow2(-1);
        k += 1;
    }
    // Magnitude of k inflates the ln 2 error; give it room.
    let kbits = 64 - (k.unsigned_abs()).leading_zeros();
    let y = Interval::point(y, w);
    let one = Interval::from_int(1, w);
    let z = y.sub(&one).div(&y.add(&one))?;
    let series = two_atanh(&z, w);
    let ln2 = ln2_enclosure(w + kbits);
    let result = ln2.mul(&Interval::from_int(k, w + kbits)).add(&series);
    Ok(result.with_precision(prec))
}
