//! Exact dyadic rationals `mantissa * 2^exponent` with directed rounding.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding direction for inexact dyadic operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    /// Toward negative infinity.
    Down,
    /// Toward positive infinity.
    Up,
}

impl Rounding {
    pub fn flip(self) -> Self {
        match self {
            Rounding::Down => Rounding::Up,
            Rounding::Up => Rounding::Down,
        }
    }
}

/// A dyadic rational. Kept normalized: the mantissa is odd, or the value is
/// zero with exponent 0, so structural equality is numeric equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

/// `floor(x / 2^k)` or `ceil(x / 2^k)` for `k >= 0`.
pub(crate) fn shift_right_rounded(x: &BigInt, k: u64, dir: Rounding) -> BigInt {
    if k == 0 {
        return x.clone();
    }
    let d = BigInt::one() << k;
    match dir {
        Rounding::Down => x.div_floor(&d),
        Rounding::Up => -((-x).div_floor(&d)),
    }
}

fn bit_len(x: &BigInt) -> u64 {
    x.magnitude().bits()
}

impl Dyadic {
    pub fn new(mantissa: BigInt, exponent: i64) -> Self {
        let mut d = Dyadic { mantissa, exponent };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.mantissa.is_zero() {
            self.exponent = 0;
            return;
        }
        let tz = self.mantissa.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mantissa >>= tz;
            self.exponent += tz as i64;
        }
    }

    pub fn zero() -> Self {
        Dyadic { mantissa: BigInt::zero(), exponent: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mantissa: BigInt::one(), exponent: 0 }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic::new(n.into(), 0)
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Self {
        Dyadic { mantissa: BigInt::one(), exponent: e }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mantissa.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic { mantissa: self.mantissa.abs(), exponent: self.exponent }
    }

    /// Number of significant bits in the mantissa.
    pub fn precision_bits(&self) -> u64 {
        bit_len(&self.mantissa)
    }

    /// `floor(log2 |x|)` for nonzero `x`.
    pub fn ilog2(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(bit_len(&self.mantissa) as i64 - 1 + self.exponent)
        }
    }

    /// Round to at most `prec` significant bits in direction `dir`.
    pub fn round(&self, prec: u32, dir: Rounding) -> Self {
        let bits = bit_len(&self.mantissa);
        if bits <= prec as u64 {
            return self.clone();
        }
        let k = bits - prec as u64;
        Dyadic::new(shift_right_rounded(&self.mantissa, k, dir), self.exponent + k as i64)
    }

    /// Round onto the grid `2^grid_exp * Z` in direction `dir`.
    pub fn round_to_grid(&self, grid_exp: i64, dir: Rounding) -> Self {
        if self.exponent >= grid_exp {
            return self.clone();
        }
        let k = (grid_exp - self.exponent) as u64;
        Dyadic::new(shift_right_rounded(&self.mantissa, k, dir), grid_exp)
    }

    /// Multiply by `2^k`.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic { mantissa: self.mantissa.clone(), exponent: self.exponent + k }
    }

    pub fn floor(&self) -> BigInt {
        self.to_integer(Rounding::Down)
    }

    pub fn ceil(&self) -> BigInt {
        self.to_integer(Rounding::Up)
    }

    fn to_integer(&self, dir: Rounding) -> BigInt {
        if self.exponent >= 0 {
            &self.mantissa << (self.exponent as u64)
        } else {
            shift_right_rounded(&self.mantissa, (-self.exponent) as u64, dir)
        }
    }

    /// Quotient `self / rhs` rounded to `prec` significant bits.
    ///
    /// Panics if `rhs` is zero; callers check the domain first.
    pub fn div_rounded(&self, rhs: &Dyadic, prec: u32, dir: Rounding) -> Self {
        assert!(!rhs.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let na = bit_len(&self.mantissa) as i64;
        let nb = bit_len(&rhs.mantissa) as i64;
        let shift = (prec as i64 + 2 + nb - na).max(0) as u64;
        let num = &self.mantissa << shift;
        let (q, r) = num.div_mod_floor(&rhs.mantissa);
        // div_mod_floor rounds toward -inf; correct for an upward request.
        let q = match dir {
            Rounding::Down => q,
            Rounding::Up if r.is_zero() => q,
            Rounding::Up => q + 1,
        };
        Dyadic::new(q, self.exponent - rhs.exponent - shift as i64).round(prec, dir)
    }

    /// Square root of a nonnegative value rounded to `prec` significant bits.
    pub fn sqrt_rounded(&self, prec: u32, dir: Rounding) -> Self {
        assert!(self.signum() >= 0, "square root of a negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let bits = bit_len(&self.mantissa) as i64;
        let mut shift = (2 * prec as i64 + 4 - bits).max(0);
        if (self.exponent - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let scaled = &self.mantissa << (shift as u64);
        let mut r = scaled.sqrt();
        if dir == Rounding::Up && &r * &r != scaled {
            r += 1;
        }
        Dyadic::new(r, (self.exponent - shift) / 2).round(prec, dir)
    }

    /// Approximate conversion, for display and heuristics only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = bit_len(&self.mantissa) as i64;
        let keep = 60.min(bits);
        let m = shift_right_rounded(&self.mantissa, (bits - keep) as u64, Rounding::Down);
        let e = self.exponent + bits - keep;
        m.to_f64().unwrap_or(f64::NAN) * 2f64.powi(e.clamp(-2000, 2000) as i32)
    }

    /// Decimal scientific rendering with `digits` significant digits, rounded
    /// in direction `dir`. Lower bounds use `Down`, upper bounds `Up`.
    pub fn to_decimal(&self, digits: u32, dir: Rounding) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let digits = digits.max(1) as i64;
        let lower = num_traits::pow(BigInt::from(10u32), digits as usize - 1);
        let upper = &lower * 10u32;
        // Estimate the decimal exponent from log2, then correct exactly.
        let log2 = self.ilog2().unwrap() as f64;
        let mut e10 = (log2 * std::f64::consts::LOG10_2).floor() as i64;
        let scaled = loop {
            let scaled = self.scaled_by_pow10(digits - 1 - e10, dir);
            if scaled.magnitude() >= upper.magnitude() {
                e10 += 1;
            } else if scaled.magnitude() < lower.magnitude() {
                e10 -= 1;
            } else {
                break scaled;
            }
        };
        let s = scaled.magnitude().to_string();
        let sign = if scaled.is_negative() { "-" } else { "" };
        let (head, tail) = s.split_at(1);
        if tail.is_empty() {
            format!("{sign}{head}e{e10}")
        } else {
            format!("{sign}{head}.{tail}e{e10}")
        }
    }

    /// `round_dir(self * 10^k)` as an integer.
    fn scaled_by_pow10(&self, k: i64, dir: Rounding) -> BigInt {
        let ten = BigInt::from(10u32);
        let (num, den) = if k >= 0 {
            (&self.mantissa * num_traits::pow(ten, k as usize), BigInt::one())
        } else {
            (self.mantissa.clone(), num_traits::pow(ten, (-k) as usize))
        };
        let (num, den) = if self.exponent >= 0 {
            (num << (self.exponent as u64), den)
        } else {
            (num, den << ((-self.exponent) as u64))
        };
        match dir {
            Rounding::Down => num.div_floor(&den),
            Rounding::Up => -((-num).div_floor(&den)),
        }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (s, o) = (self.signum(), other.signum());
        if s != o || s == 0 {
            return s.cmp(&o);
        }
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << ((self.exponent - e) as u64);
        let b = &other.mantissa << ((other.exponent - e) as u64);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exponent.min(rhs.exponent);
        let a = &self.mantissa << ((self.exponent - e) as u64);
        let b = &rhs.mantissa << ((rhs.exponent - e) as u64);
        Dyadic::new(a + b, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mantissa: -&self.mantissa, exponent: self.exponent }
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mantissa * &rhs.mantissa, self.exponent + rhs.exponent)
    }
}

impl From<i64> for Dyadic {
    fn from(v: i64) -> Self {
        Dyadic::from_int(v)
    }
}

impl From<&BigInt> for Dyadic {
    fn from(v: &BigInt) -> Self {
        Dyadic::from_int(v.clone())
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{} (~{:e})", self.mantissa, self.exponent, self.to_f64())
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(17, Rounding::Down))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(m: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(m), e)
    }

    #[test]
    fn normalization_makes_equality_numeric() {
        assert_eq!(d(4, 0), d(1, 2));
        assert_eq!(d(0, 7), Dyadic::zero());
        assert_eq!(d(-6, -1), d(-3, 0));
    }

    #[test]
    fn shifting_negative_values_rounds_in_requested_direction() {
        let x = BigInt::from(-5);
        assert_eq!(shift_right_rounded(&x, 1, Rounding::Down), BigInt::from(-3));
        assert_eq!(shift_right_rounded(&x, 1, Rounding::Up), BigInt::from(-2));
        let y = BigInt::from(5);
        assert_eq!(shift_right_rounded(&y, 1, Rounding::Down), BigInt::from(2));
        assert_eq!(shift_right_rounded(&y, 1, Rounding::Up), BigInt::from(3));
    }

    #[test]
    fn round_brackets_value() {
        let x = d(0b1011011, 0);
        let lo = x.round(3, Rounding::Down);
        let hi = x.round(3, Rounding::Up);
        assert!(lo <= x && x <= hi);
        assert_eq!(lo, d(0b101, 4));
        assert_eq!(hi, d(0b110, 4));
    }

    #[test]
    fn ordering_across_exponents() {
        assert!(d(3, -1) < d(2, 0));
        assert!(d(-3, -1) > d(-2, 0));
        assert!(d(-1, 10) < d(1, -10));
        assert_eq!(d(1, 1).cmp(&d(2, 0)), Ordering::Equal);
    }

    #[test]
    fn division_brackets_one_third() {
        let one = Dyadic::one();
        let three = d(3, 0);
        let lo = one.div_rounded(&three, 64, Rounding::Down);
        let hi = one.div_rounded(&three, 64, Rounding::Up);
        assert!(&lo * &three < one);
        assert!(&hi * &three > one);
        assert!((&hi - &lo) <= Dyadic::pow2(-64));
        // exact quotient stays exact
        assert_eq!(d(6, 0).div_rounded(&three, 8, Rounding::Up), d(2, 0));
    }

    #[test]
    fn division_with_negative_operands() {
        let a = d(-7, 0);
        let b = d(3, 0);
        let lo = a.div_rounded(&b, 40, Rounding::Down);
        let hi = a.div_rounded(&b, 40, Rounding::Up);
        assert!(&lo * &b <= a && a <= &hi * &b);
    }

    #[test]
    fn sqrt_of_two_brackets() {
        let two = d(2, 0);
        let lo = two.sqrt_rounded(80, Rounding::Down);
        let hi = two.sqrt_rounded(80, Rounding::Up);
        assert!(&lo * &lo < two && &hi * &hi > two);
        assert_eq!(d(9, 4).sqrt_rounded(10, Rounding::Down), d(3, 2));
    }

    #[test]
    fn floor_and_ceil() {
        assert_eq!(d(7, -1).floor(), BigInt::from(3));
        assert_eq!(d(7, -1).ceil(), BigInt::from(4));
        assert_eq!(d(-7, -1).floor(), BigInt::from(-4));
        assert_eq!(d(5, 3).floor(), BigInt::from(40));
    }

    #[test]
    fn decimal_rendering_is_directed() {
        let third_lo = Dyadic::one().div_rounded(&d(3, 0), 80, Rounding::Down);
        assert_eq!(third_lo.to_decimal(5, Rounding::Down), "3.3333e-1");
        assert_eq!(third_lo.to_decimal(5, Rounding::Up), "3.3334e-1");
        assert_eq!(d(158, 0).to_decimal(3, Rounding::Up), "1.58e2");
        assert_eq!(d(-1, -3).to_decimal(2, Rounding::Down), "-1.3e-1");
        assert_eq!(d(1, 0).to_decimal(1, Rounding::Down), "1e0");
    }
}
