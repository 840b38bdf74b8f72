//! Certified continued-fraction expansions, convergents, and the Legendre
//! criterion.
//!
//! Every partial quotient is a floor that the current interval enclosure
//! determines uniquely. When it does not, the whole expansion restarts at
//! a higher working precision; a digit is never guessed.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::reals::{CertifiedConstant, Interval, PrecisionPolicy};

/// The first partial quotients of a certified constant.
#[derive(Debug, Clone)]
pub struct CFExpansion {
    quotients: Vec<BigInt>,
    source: CertifiedConstant,
    precision: u32,
}

/// The k-th convergent `p_k / q_k` together with the quotient `a_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub k: usize,
    pub p: BigInt,
    pub q: BigInt,
    pub a: BigInt,
}

impl CFExpansion {
    pub fn quotients(&self) -> &[BigInt] {
        &self.quotients
    }

    pub fn source(&self) -> &CertifiedConstant {
        &self.source
    }

    /// Working precision at which every quotient was certified.
    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }
}

fn expand_at(x: Interval, count: usize) -> Result<Vec<BigInt>> {
    let mut x = x;
    let mut out = Vec::with_capacity(count);
    loop {
        let a = x.certified_floor()?;
        let frac = x.sub(&Interval::from_int(a.clone(), x.precision()));
        out.push(a);
        if out.len() == count {
            return Ok(out);
        }
        x = match frac.recip() {
            Ok(r) => r,
            Err(Error::Domain(_)) => return Err(Error::insufficient("fractional part not separated from 0")),
            Err(e) => return Err(e),
        };
    }
}

/// First `count` partial quotients of `c`.
pub fn expand(c: &CertifiedConstant, count: usize, policy: PrecisionPolicy) -> Result<CFExpansion> {
    if count == 0 {
        return Err(Error::InvalidInput("expand needs count >= 1".into()));
    }
    let (quotients, precision) = policy.run(&format!("continued fraction of {}", c.name()), |prec| {
        expand_at(c.value_at(prec)?, count)
    })?;
    Ok(CFExpansion { quotients, source: c.clone(), precision })
}

/// Convergents from quotients by the standard recurrence, indexed from 0.
pub fn convergents_of(quotients: &[BigInt]) -> Vec<Convergent> {
    let (mut p_prev, mut p) = (BigInt::zero(), BigInt::one());
    let (mut q_prev, mut q) = (BigInt::one(), BigInt::zero());
    quotients
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let p_next = a * &p + &p_prev;
            let q_next = a * &q + &q_prev;
            p_prev = std::mem::replace(&mut p, p_next);
            q_prev = std::mem::replace(&mut q, q_next);
            Convergent { k, p: p.clone(), q: q.clone(), a: a.clone() }
        })
        .collect()
}

/// Convergents of an expansion, each checked against the source enclosure:
/// `|c - p_k/q_k| < 1/q_k^2`.
pub fn convergents(cf: &CFExpansion, policy: PrecisionPolicy) -> Result<Vec<Convergent>> {
    let convs = convergents_of(&cf.quotients);
    let start = PrecisionPolicy { start: policy.start.max(cf.precision), cap: policy.cap.max(cf.precision) };
    start.run("convergent approximation check", |prec| {
        let c = cf.source.value_at(prec)?;
        for conv in &convs {
            // |c q - p| * q < 1
            let q = Interval::from_int(conv.q.clone(), prec);
            let err = c.mul(&q).sub(&Interval::from_int(conv.p.clone(), prec)).abs().mul(&q);
            if !err.certainly_lt(&Interval::from_int(1, prec))? {
                return Err(Error::InvalidInput(format!("convergent {} fails |c - p/q| < 1/q^2", conv.k)));
            }
        }
        Ok(())
    })?;
    Ok(convs)
}

/// Convergents of `c` up to and including the first with `q_k > bound`.
pub fn convergents_until(c: &CertifiedConstant, bound: &BigInt, policy: PrecisionPolicy) -> Result<Vec<Convergent>> {
    if bound < &BigInt::zero() {
        return Err(Error::InvalidInput("bound must be nonnegative".into()));
    }
    let mut count = 16;
    loop {
        let cf = expand(c, count, policy)?;
        let convs = convergents(&cf, policy)?;
        if let Some(pos) = convs.iter().position(|cv| &cv.q > bound) {
            return Ok(convs[..=pos].to_vec());
        }
        if count >= 1 << 14 {
            return Err(Error::InvalidInput(format!("no convergent of {} exceeds {bound} within {count} terms", c.name())));
        }
        count *= 2;
    }
}

/// The convergent of minimal index with `q_k > bound`.
pub fn smallest_convergent_exceeding(c: &CertifiedConstant, bound: &BigInt, policy: PrecisionPolicy) -> Result<Convergent> {
    Ok(convergents_until(c, bound, policy)?.pop().expect("nonempty"))
}

/// Legendre-criterion data for `c` below `m`: the minimal `N` with
/// `q_N > m` and `a(M) = max(a_0, ..., a_N)`.
///
/// Consumers use it as `|c - r/s| > 1 / ((a(M) + 2) s^2)` for all
/// `0 < s < m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LegendreData {
    pub max_quotient: BigInt,
    pub index: usize,
    /// Index at which the maximum is attained (first occurrence).
    pub argmax: usize,
}

pub fn legendre_denominator(c: &CertifiedConstant, m: &BigInt, policy: PrecisionPolicy) -> Result<LegendreData> {
    if m < &BigInt::one() {
        return Err(Error::InvalidInput("legendre_denominator needs M >= 1".into()));
    }
    let convs = convergents_until(c, m, policy)?;
    let (argmax, best) = convs
        .iter()
        .enumerate()
        .fold((0, &convs[0].a), |(i, best), (j, cv)| if &cv.a > best { (j, &cv.a) } else { (i, best) });
    Ok(LegendreData { max_quotient: best.clone(), index: convs.len() - 1, argmax })
}
