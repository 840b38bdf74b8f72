//! Fibonacci and Lucas numbers, the "close to" predicate, and certified
//! checks of the Binet growth bounds.
//!
//! Indexing follows `F_0 = 0`, `F_1 = F_2 = 1`.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::reals::{Constant, Interval, PrecisionPolicy};

/// A nonnegative sequence index.
pub type SeqIndex = u32;

/// One solution `(n, m, a)` of `|F_n + F_m - 2^a| < 2^(a/2)`, with
/// `n >= m >= 1` and `a >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub struct SolutionTriple {
    pub n: SeqIndex,
    pub m: SeqIndex,
    pub a: u32,
}

impl SolutionTriple {
    pub fn new(n: SeqIndex, m: SeqIndex, a: u32) -> Result<Self> {
        if m < 1 || n < m || a < 1 {
            return Err(Error::InvalidInput(format!("need n >= m >= 1 and a >= 1, got ({n}, {m}, {a})")));
        }
        Ok(SolutionTriple { n, m, a })
    }
}

struct Table {
    fib: Vec<BigInt>,
    lucas: Vec<BigInt>,
}

fn table() -> &'static RwLock<Table> {
    static TABLE: OnceLock<RwLock<Table>> = OnceLock::new();
    TABLE.get_or_init(|| {
        RwLock::new(Table {
            fib: vec![BigInt::zero(), BigInt::one()],
            lucas: vec![BigInt::from(2), BigInt::one()],
        })
    })
}

fn extend_to(n: usize) {
    if table().read().unwrap().fib.len() > n {
        return;
    }
    let mut t = table().write().unwrap();
    while t.fib.len() <= n {
        let k = t.fib.len();
        let f = &t.fib[k - 1] + &t.fib[k - 2];
        let l = &t.lucas[k - 1] + &t.lucas[k - 2];
        t.fib.push(f);
        t.lucas.push(l);
    }
}

/// `F_n`, from a shared memoized prefix.
pub fn fib(n: SeqIndex) -> BigInt {
    extend_to(n as usize);
    table().read().unwrap().fib[n as usize].clone()
}

/// `L_n`, with `L_0 = 2`, `L_1 = 1`.
pub fn lucas(n: SeqIndex) -> BigInt {
    extend_to(n as usize);
    table().read().unwrap().lucas[n as usize].clone()
}

/// `F_0 ..= F_n` as a vector.
pub fn fib_table(n: SeqIndex) -> Vec<BigInt> {
    extend_to(n as usize);
    table().read().unwrap().fib[..=n as usize].to_vec()
}

/// `F_n` by fast doubling, independent of the memo table.
pub fn fib_fast_doubling(n: SeqIndex) -> BigInt {
    // (F_k, F_{k+1}) -> (F_2k, F_2k+1)
    let mut a = BigInt::zero();
    let mut b = BigInt::one();
    for bit in (0..32 - n.leading_zeros()).rev() {
        let c = &a * (&b * 2u32 - &a);
        let d = &a * &a + &b * &b;
        if (n >> bit) & 1 == 1 {
            b = &c + &d;
            a = d;
        } else {
            a = c;
            b = d;
        }
    }
    a
}

/// Whether `x` is close to `m`: `|x - m| < sqrt(m)`, decided exactly as
/// `(x - m)^2 < m`. Equality is not close.
pub fn is_close(x: &BigInt, m: &BigInt) -> Result<bool> {
    if m < &BigInt::one() {
        return Err(Error::InvalidInput("is_close needs m >= 1".into()));
    }
    let d = x - m;
    Ok(&d * &d < *m)
}

/// Outcome of [`check_binet_bounds`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BinetCheck {
    Holds { n_max: SeqIndex, precision: u32 },
    /// First index at which one of the bounds fails.
    Violated { n: SeqIndex, which: &'static str },
}

impl BinetCheck {
    pub fn holds(&self) -> bool {
        matches!(self, BinetCheck::Holds { .. })
    }
}

/// Verify `alpha^(n-2) <= F_n <= alpha^(n-1)` and
/// `0.38 alpha^n < F_n < 0.48 alpha^n` for every `2 <= n <= n_max`.
///
/// Powers of alpha are certified intervals; an undecided comparison
/// triggers a precision refinement, never a verdict.
pub fn check_binet_bounds(n_max: SeqIndex, policy: PrecisionPolicy) -> Result<BinetCheck> {
    if n_max < 2 {
        return Err(Error::InvalidInput("check_binet_bounds needs n_max >= 2".into()));
    }
    let fibs = fib_table(n_max);
    let (check, _) = policy.run("Binet bounds", |prec| {
        let alpha = Constant::Alpha.value_at(prec)?;
        let c38 = Interval::from_decimal("0.38", prec)?;
        let c48 = Interval::from_decimal("0.48", prec)?;
        // alpha^(n-2), built incrementally
        let mut pow = Interval::from_int(1, prec);
        for n in 2..=n_max {
            let f = Interval::from_int(fibs[n as usize].clone(), prec);
            let p_n2 = &pow;
            let p_n1 = pow.mul(&alpha);
            let p_n = p_n1.mul(&alpha);
            // alpha^(n-2) <= F_n: at n = 2 both are exactly 1.
            if !(p_n2.hi() <= f.lo()) {
                if p_n2.lo() > f.hi() {
                    return Ok(BinetCheck::Violated { n, which: "alpha^(n-2) <= F_n" });
                }
                return Err(Error::insufficient("alpha^(n-2) vs F_n"));
            }
            if !(f.hi() <= p_n1.lo()) {
                if f.lo() > p_n1.hi() {
                    return Ok(BinetCheck::Violated { n, which: "F_n <= alpha^(n-1)" });
                }
                return Err(Error::insufficient("F_n vs alpha^(n-1)"));
            }
            if !c38.mul(&p_n).certainly_lt(&f)? {
                return Ok(BinetCheck::Violated { n, which: "0.38 alpha^n < F_n" });
            }
            if !f.certainly_lt(&c48.mul(&p_n))? {
                return Ok(BinetCheck::Violated { n, which: "F_n < 0.48 alpha^n" });
            }
            pow = p_n1;
        }
        Ok(BinetCheck::Holds { n_max, precision: prec })
    })?;
    Ok(check)
}
