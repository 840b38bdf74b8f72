//! Certified constants and the adaptive precision driver.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;

use super::dyadic::{Dyadic, Rounding};
use super::interval::Interval;
use crate::error::{Error, Result};

/// Bits of headroom used when evaluating a constant before snapping it to
/// the requested grid.
const EVAL_GUARD: u32 = 32;

/// The named constants every proof step draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constant {
    Sqrt5,
    /// The golden ratio `(1 + sqrt 5) / 2`.
    Alpha,
    Log2,
    LogAlpha,
    LogSqrt5,
    /// `log 2 / log alpha`.
    Gamma,
}

impl Constant {
    pub const ALL: [Constant; 6] = [
        Constant::Sqrt5,
        Constant::Alpha,
        Constant::Log2,
        Constant::LogAlpha,
        Constant::LogSqrt5,
        Constant::Gamma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Constant::Sqrt5 => "sqrt5",
            Constant::Alpha => "alpha",
            Constant::Log2 => "log2",
            Constant::LogAlpha => "log_alpha",
            Constant::LogSqrt5 => "log_sqrt5",
            Constant::Gamma => "gamma",
        }
    }

    /// Raw enclosure at `prec` significant bits (no grid snapping).
    fn evaluate(self, prec: u32) -> Result<Interval> {
        let five = Interval::from_int(5, prec);
        Ok(match self {
            Constant::Sqrt5 => five.sqrt()?,
            Constant::Alpha => five.sqrt()?.add(&Interval::from_int(1, prec)).mul_pow2(-1),
            Constant::Log2 => Interval::ln2(prec),
            Constant::LogAlpha => Constant::Alpha.evaluate(prec)?.ln()?,
            // log sqrt 5 = (log 5) / 2
            Constant::LogSqrt5 => five.ln()?.mul_pow2(-1),
            Constant::Gamma => Interval::ln2(prec).div(&Constant::LogAlpha.evaluate(prec)?)?,
        })
    }

    /// Enclosure of width at most `2^(2 - prec)` (snapped to a dyadic grid
    /// so that refinement is nested). Cached per precision.
    pub fn value_at(self, prec: u32) -> Result<Interval> {
        let key = (self, prec);
        if let Some(v) = constant_cache().lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let v = snap_to_grid(&self.evaluate(prec + EVAL_GUARD)?, prec);
        constant_cache().lock().unwrap().insert(key, v.clone());
        Ok(v)
    }
}

impl FromStr for Constant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Constant::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::UnknownConstant(s.to_string()))
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn constant_cache() -> &'static Mutex<HashMap<(Constant, u32), Interval>> {
    static CACHE: OnceLock<Mutex<HashMap<(Constant, u32), Interval>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Widen by `2^-(prec+2)` and round outward onto the grid `2^-(prec+2) Z`.
///
/// With a raw enclosure much tighter than the slack, the result at `2p`
/// always sits inside the result at `p`.
fn snap_to_grid(raw: &Interval, prec: u32) -> Interval {
    let g = -(prec as i64) - 2;
    let slack = Dyadic::pow2(g);
    let lo = (raw.lo() - &slack).round_to_grid(g, Rounding::Down);
    let hi = (raw.hi() + &slack).round_to_grid(g, Rounding::Up);
    // Grid endpoints of moderate magnitude need no more than prec + 8 bits
    // beyond the integer part; keep the exact grid values.
    let bits = lo.precision_bits().max(hi.precision_bits()) as u32;
    Interval::new(lo, hi, prec.max(bits)).expect("snapped interval ordered")
}

/// `const(name, prec)`: look up a constant by name.
pub fn constant(name: &str, prec: u32) -> Result<Interval> {
    name.parse::<Constant>()?.value_at(prec)
}

type Evaluator = dyn Fn(u32) -> Result<Interval> + Send + Sync;

/// A real number that can be enclosed at any requested precision.
///
/// `value_at(p)` contains the exact value, has width at most `2^(2-p)` for
/// values of moderate size, and `value_at(q) ⊆ value_at(p)` whenever
/// `q >= p + 2`.
#[derive(Clone)]
pub struct CertifiedConstant {
    name: String,
    eval: Arc<Evaluator>,
}

impl CertifiedConstant {
    /// Wrap an evaluator returning raw enclosures at the given precision.
    pub fn new(name: impl Into<String>, eval: impl Fn(u32) -> Result<Interval> + Send + Sync + 'static) -> Self {
        CertifiedConstant { name: name.into(), eval: Arc::new(eval) }
    }

    pub fn named(c: Constant) -> Self {
        CertifiedConstant::new(c.name(), move |p| c.evaluate(p))
    }

    /// An exact integer.
    pub fn integer(n: impl Into<BigInt>) -> Self {
        let n: BigInt = n.into();
        CertifiedConstant::new(n.to_string(), move |p| Ok(Interval::from_int(n.clone(), p)))
    }

    /// An exact decimal such as `"4.5e28"`.
    pub fn decimal(s: &str) -> Result<Self> {
        // Validate eagerly so later evaluation cannot fail.
        Interval::from_decimal(s, 16)?;
        let owned = s.to_string();
        Ok(CertifiedConstant::new(s, move |p| Interval::from_decimal(&owned, p)))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn value_at(&self, prec: u32) -> Result<Interval> {
        Ok(snap_to_grid(&(self.eval)(prec + EVAL_GUARD)?, prec))
    }

    /// Product of two constants.
    pub fn times(&self, other: &CertifiedConstant) -> Self {
        let (a, b) = (self.clone(), other.clone());
        CertifiedConstant::new(format!("{}*{}", a.name, b.name), move |p| Ok((a.eval)(p)?.mul(&(b.eval)(p)?)))
    }

    /// Quotient of two constants.
    pub fn over(&self, other: &CertifiedConstant) -> Self {
        let (a, b) = (self.clone(), other.clone());
        CertifiedConstant::new(format!("{}/{}", a.name, b.name), move |p| (a.eval)(p)?.div(&(b.eval)(p)?))
    }

    pub fn minus(&self, other: &CertifiedConstant) -> Self {
        let (a, b) = (self.clone(), other.clone());
        CertifiedConstant::new(format!("{}-{}", a.name, b.name), move |p| Ok((a.eval)(p)?.sub(&(b.eval)(p)?)))
    }

    pub fn sqrt(&self) -> Self {
        let a = self.clone();
        CertifiedConstant::new(format!("sqrt({})", a.name), move |p| (a.eval)(p)?.sqrt())
    }

    /// Parse a product/quotient of factors such as `3*sqrt5/log_alpha` or
    /// `4/log_alpha`. A factor is a named [`Constant`], a decimal literal,
    /// or `sqrt(<factor>)`.
    pub fn parse(expr: &str) -> Result<Self> {
        let expr = expr.trim();
        if expr.is_empty() {
            return Err(Error::InvalidInput("empty constant expression".into()));
        }
        let mut acc: Option<CertifiedConstant> = None;
        let mut op = '*';
        let mut start = 0;
        let mut depth = 0i32;
        let bytes: Vec<char> = expr.chars().collect();
        for i in 0..=bytes.len() {
            let c = bytes.get(i).copied();
            match c {
                Some('(') => depth += 1,
                Some(')') => depth -= 1,
                _ => {}
            }
            if c.is_none() || (depth == 0 && matches!(c, Some('*') | Some('/'))) {
                let token: String = bytes[start..i].iter().collect();
                let f = Self::parse_factor(token.trim())?;
                acc = Some(match (acc, op) {
                    (None, _) => f,
                    (Some(a), '*') => a.times(&f),
                    (Some(a), _) => a.over(&f),
                });
                if let Some(c) = c {
                    op = c;
                }
                start = i + 1;
            }
        }
        if depth != 0 {
            return Err(Error::InvalidInput(format!("unbalanced parentheses in {expr:?}")));
        }
        let mut out = acc.expect("at least one factor");
        out.name = expr.to_string();
        Ok(out)
    }

    fn parse_factor(tok: &str) -> Result<Self> {
        if let Some(inner) = tok.strip_prefix("sqrt(").and_then(|t| t.strip_suffix(')')) {
            return Ok(Self::parse(inner)?.sqrt());
        }
        if let Ok(c) = tok.parse::<Constant>() {
            return Ok(c.into());
        }
        if tok.starts_with(|c: char| c.is_ascii_digit() || c == '.' || c == '-') {
            return Self::decimal(tok);
        }
        Err(Error::UnknownConstant(tok.to_string()))
    }
}

impl fmt::Debug for CertifiedConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("CertifiedConstant").field(&self.name).finish()
    }
}

impl From<Constant> for CertifiedConstant {
    fn from(c: Constant) -> Self {
        CertifiedConstant::named(c)
    }
}

/// `phi(t) = sqrt5 / (1 + alpha^-t)`.
pub fn phi(t: u32, prec: u32) -> Result<Interval> {
    let alpha = Constant::Alpha.evaluate(prec)?;
    let denom = Interval::from_int(1, prec).add(&alpha.pow_int(-(t as i64))?);
    Constant::Sqrt5.evaluate(prec)?.div(&denom)
}

/// Working-precision schedule: start, double on insufficient precision,
/// give up past the cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub start: u32,
    pub cap: u32,
}

impl PrecisionPolicy {
    pub const DEFAULT_START: u32 = 192;
    pub const DEFAULT_CAP: u32 = 16384;

    pub fn new(start: u32) -> Self {
        PrecisionPolicy { start: start.max(16), cap: Self::DEFAULT_CAP.max(start) }
    }

    /// Run `f` at increasing precision until it stops reporting
    /// `InsufficientPrecision`. Returns the value and the precision used.
    pub fn run<T>(&self, what: &str, mut f: impl FnMut(u32) -> Result<T>) -> Result<(T, u32)> {
        let mut prec = self.start;
        loop {
            match f(prec) {
                Err(Error::InsufficientPrecision(_)) => {
                    if prec >= self.cap {
                        return Err(Error::PrecisionCapExceeded { cap: self.cap, what: what.to_string() });
                    }
                    prec = (prec * 2).min(self.cap);
                }
                other => return other.map(|v| (v, prec)),
            }
        }
    }
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy { start: Self::DEFAULT_START, cap: Self::DEFAULT_CAP }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(i: &Interval, v: f64) -> bool {
        (i.to_f64() - v).abs() < 1e-12
    }

    #[test]
    fn constants_have_expected_values() {
        assert!(approx(&constant("log2", 64).unwrap(), 0.6931471805599453));
        assert!(approx(&constant("alpha", 64).unwrap(), 1.618033988749895));
        assert!(approx(&constant("gamma", 64).unwrap(), 1.4404200904125564));
        assert!(approx(&constant("sqrt5", 64).unwrap(), 2.23606797749979));
        assert!(approx(&constant("log_alpha", 64).unwrap(), 0.48121182505960347));
        assert!(approx(&constant("log_sqrt5", 64).unwrap(), 0.8047189562170501));
    }

    #[test]
    fn gamma_is_reciprocal_of_published_ratio() {
        // log alpha / log 2 = 0.6942...
        let g = constant("gamma", 64).unwrap();
        let r = Interval::from_int(1, 64).div(&g).unwrap();
        assert!(r.lo().to_f64() > 0.6942 && r.hi().to_f64() < 0.6943);
    }

    #[test]
    fn unknown_name_is_rejected() {
        assert_eq!(constant("pi", 64), Err(Error::UnknownConstant("pi".into())));
    }

    #[test]
    fn width_bound_holds() {
        for c in Constant::ALL {
            for prec in [16, 64, 192, 500] {
                let v = c.value_at(prec).unwrap();
                assert!(v.width() <= Dyadic::pow2(2 - prec as i64), "{c} @ {prec}");
            }
        }
    }

    #[test]
    fn doubling_precision_nests() {
        for c in Constant::ALL {
            let mut prev = c.value_at(16).unwrap();
            for prec in [32, 64, 128, 256, 512] {
                let next = c.value_at(prec).unwrap();
                assert!(next.is_subset_of(&prev), "{c} @ {prec}");
                prev = next;
            }
        }
    }

    #[test]
    fn alpha_identity() {
        for prec in [64, 192, 400] {
            let a = Constant::Alpha.value_at(prec).unwrap();
            let e = a.square().sub(&a).sub(&Interval::from_int(1, prec));
            assert!(e.contains_zero());
            assert!(e.width() <= Dyadic::pow2(4 - prec as i64));
        }
    }

    #[test]
    fn gamma_consistency() {
        let p = 256;
        let g = Constant::Gamma.value_at(p).unwrap();
        let la = Constant::LogAlpha.value_at(p).unwrap();
        let l2 = Constant::Log2.value_at(p).unwrap();
        assert!(g.mul(&la).sub(&l2).contains_zero());
    }

    #[test]
    fn phi_of_two_is_alpha() {
        let p = 200;
        let d = phi(2, p).unwrap().sub(&Constant::Alpha.value_at(p).unwrap());
        assert!(d.contains_zero());
        assert!(d.width() <= Dyadic::pow2(-150));
    }

    #[test]
    fn policy_doubles_then_caps() {
        let policy = PrecisionPolicy { start: 32, cap: 256 };
        let mut seen = vec![];
        let r: Result<((), u32)> = policy.run("never", |p| {
            seen.push(p);
            Err(Error::insufficient("no"))
        });
        assert_eq!(seen, vec![32, 64, 128, 256]);
        assert!(matches!(r, Err(Error::PrecisionCapExceeded { cap: 256, .. })));
        let ok = policy.run("at 128", |p| if p >= 128 { Ok(p) } else { Err(Error::insufficient("x")) });
        assert_eq!(ok.unwrap(), (128, 128));
    }

    #[test]
    fn derived_constants_compose() {
        let mu = CertifiedConstant::named(Constant::LogSqrt5).over(&Constant::LogAlpha.into());
        assert!(approx(&mu.value_at(80).unwrap(), 0.8047189562170501 / 0.48121182505960347));
        assert!(CertifiedConstant::decimal("x").is_err());
        let m = CertifiedConstant::decimal("4.5e28").unwrap().value_at(128).unwrap();
        assert!(m.contains(&Dyadic::from_int("45000000000000000000000000000".parse::<BigInt>().unwrap())));
    }

    #[test]
    fn parse_expressions() {
        let a = CertifiedConstant::parse("3*sqrt5/log_alpha").unwrap();
        assert!((a.value_at(64).unwrap().to_f64() - 3.0 * 5f64.sqrt() / 0.4812118250596034).abs() < 1e-12);
        let b = CertifiedConstant::parse("sqrt(2)").unwrap();
        assert!((b.value_at(64).unwrap().to_f64() - 2f64.sqrt()).abs() < 1e-15);
        let m = CertifiedConstant::parse("1.3e16").unwrap();
        assert_eq!(m.value_at(64).unwrap().to_f64(), 1.3e16);
        assert_eq!(a.name(), "3*sqrt5/log_alpha");
        assert!(CertifiedConstant::parse("pi").is_err());
        assert!(CertifiedConstant::parse("sqrt(2").is_err());
        assert!(CertifiedConstant::parse("").is_err());
    }
}
