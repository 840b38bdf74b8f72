//! Logarithmic heights, Matveev's lower bound, and the chain of estimates
//! that bounds `a` and `n` globally.
//!
//! Two linear forms appear:
//!
//! * `Lambda_1 = alpha^n (1 + alpha^(m-n)) / (2^a sqrt5) - 1`, with heights
//!   `A = (1.4, 0.5, 3 + (n - m) log alpha)`;
//! * `Lambda_2 = 1 - 2^a alpha^(-n) sqrt5`, with heights `A = (1.4, 0.5, 1.7)`.
//!
//! Both live in `Q(sqrt5)`, so `t = 3` and `D = 2`. Their non-vanishing is
//! an analytic fact recorded as an assumption by the certificate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::reals::{CertifiedConstant, Constant, Interval, PrecisionPolicy};

/// Published rounding of the first Matveev coefficient (per `log n` per
/// `3 + (n - m) log alpha`).
pub const LAMBDA1_COEFFICIENT: &str = "1.4e12";
/// Published rounding of the second Matveev coefficient (per `log n`).
pub const LAMBDA2_COEFFICIENT: &str = "2.31e12";
/// Coefficient after folding `log(3 sqrt5 / 2)` into the second bound.
pub const MIN_FORM_COEFFICIENT: &str = "2.4e12";
/// Coefficient of `log^2 n` in the Case 1 chain.
pub const CASE1_COEFFICIENT: &str = "3.5e24";
/// Published global bounds.
pub const PUBLISHED_A_BOUND: &str = "4.5e28";
pub const PUBLISHED_N_BOUND: &str = "6.6e28";

/// `h(p/q) = log max(|p|, q)` for a reduced fraction with `q > 0`.
pub fn height_rational(p: &BigInt, q: &BigInt, prec: u32) -> Result<Interval> {
    if !q.is_positive() {
        return Err(Error::InvalidInput("height_rational needs q > 0".into()));
    }
    if !p.gcd(q).is_one() {
        return Err(Error::InvalidInput(format!("{p}/{q} is not reduced")));
    }
    let m = std::cmp::max(p.abs(), q.clone());
    Interval::from_int(m, prec).ln()
}

/// Parameters of one application of Matveev's theorem.
#[derive(Debug, Clone)]
pub struct MatveevSpec {
    t: u32,
    degree: u32,
    heights: Vec<CertifiedConstant>,
    b: BigInt,
}

impl MatveevSpec {
    /// Validates `t >= 1`, `D >= 1`, one height per logarithm with each
    /// `A_i >= 0.16` (rejecting only heights certainly below), and `B >= 1`.
    pub fn new(t: u32, degree: u32, heights: Vec<CertifiedConstant>, b: BigInt) -> Result<Self> {
        if t < 1 || degree < 1 {
            return Err(Error::InvalidInput("Matveev bound needs t >= 1 and D >= 1".into()));
        }
        if heights.len() != t as usize {
            return Err(Error::InvalidInput(format!("expected {t} heights, got {}", heights.len())));
        }
        if b < BigInt::one() {
            return Err(Error::InvalidInput("Matveev bound needs B >= 1".into()));
        }
        let floor = Interval::from_decimal("0.16", 64)?;
        for h in &heights {
            let v = h.value_at(64)?;
            if v.hi() < floor.lo() {
                return Err(Error::InvalidInput(format!("height {} is below 0.16", h.name())));
            }
        }
        Ok(MatveevSpec { t, degree, heights, b })
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    /// `1.4 * 30^(t+3) * t^4.5 * D^2 (1 + log D) * prod A_i`, omitting the
    /// height with index `free` if given.
    pub fn base_constant(&self, prec: u32, free: Option<usize>) -> Result<Interval> {
        let t = Interval::from_int(self.t, prec);
        let d = Interval::from_int(self.degree, prec);
        let mut c = Interval::from_decimal("1.4", prec)?
            .mul(&Interval::from_int(30, prec).pow_int(self.t as i64 + 3)?)
            .mul(&t.pow_int(4)?.mul(&t.sqrt()?))
            .mul(&d.square())
            .mul(&Interval::from_int(1, prec).add(&d.ln()?));
        for (i, h) in self.heights.iter().enumerate() {
            if Some(i) != free {
                c = c.mul(&h.value_at(prec)?);
            }
        }
        Ok(c)
    }

    /// The full exponent `base_constant * (1 + log B)`.
    pub fn exponent(&self, prec: u32) -> Result<Interval> {
        let one_plus_log_b = Interval::from_int(1, prec).add(&Interval::from_int(self.b.clone(), prec).ln()?);
        Ok(self.base_constant(prec, None)?.mul(&one_plus_log_b))
    }

    /// Coefficient of `log B` after `1 + log B < 2 log B` (valid for `B >= 3`).
    pub fn log_b_coefficient(&self, prec: u32, free: Option<usize>) -> Result<Interval> {
        Ok(self.base_constant(prec, free)?.mul_pow2(1))
    }
}

/// Enclosure of the Matveev exponent with `B` instantiated as `n`.
pub fn matveev_exponent(spec: &MatveevSpec, n: &BigInt, prec: u32) -> Result<Interval> {
    MatveevSpec::new(spec.t, spec.degree, spec.heights.clone(), n.clone())?.exponent(prec)
}

fn dec(s: &str) -> CertifiedConstant {
    CertifiedConstant::decimal(s).expect("literal decimal")
}

/// `3 + gap * log alpha`, the height bound for `gamma_3` in the first form.
pub fn gamma3_height(gap: u32) -> CertifiedConstant {
    CertifiedConstant::new(format!("3+{gap}*log_alpha"), move |p| {
        Ok(Interval::from_int(3, p).add(&Interval::from_int(gap, p).mul(&Constant::LogAlpha.value_at(p)?)))
    })
}

/// Parameters for `Lambda_1` at a given gap `n - m`.
pub fn lambda1_spec(gap: u32, n: BigInt) -> Result<MatveevSpec> {
    MatveevSpec::new(3, 2, vec![dec("1.4"), dec("0.5"), gamma3_height(gap)], n)
}

/// Parameters for `Lambda_2`.
pub fn lambda2_spec(n: BigInt) -> Result<MatveevSpec> {
    MatveevSpec::new(3, 2, vec![dec("1.4"), dec("0.5"), dec("1.7")], n)
}

/// Certified values of the two Matveev coefficients per `log n`.
#[derive(Debug, Clone)]
pub struct MatveevCoefficients {
    /// Per `log n` per `(3 + (n - m) log alpha)`.
    pub lambda1: Interval,
    pub lambda2: Interval,
    pub precision: u32,
}

impl MatveevCoefficients {
    /// Both coefficients at most their published roundings.
    pub fn within_published(&self) -> Result<bool> {
        let p = self.precision;
        Ok(self.lambda1.hi() <= Interval::from_decimal(LAMBDA1_COEFFICIENT, p)?.lo()
            && self.lambda2.hi() <= Interval::from_decimal(LAMBDA2_COEFFICIENT, p)?.lo())
    }
}

pub fn matveev_coefficients(policy: PrecisionPolicy) -> Result<MatveevCoefficients> {
    let n = BigInt::from(251);
    let (v, precision) = policy.run("Matveev coefficients", |prec| {
        Ok((
            lambda1_spec(1, n.clone())?.log_b_coefficient(prec, Some(2))?,
            lambda2_spec(n.clone())?.log_b_coefficient(prec, None)?,
        ))
    })?;
    Ok(MatveevCoefficients { lambda1: v.0, lambda2: v.1, precision })
}

/// `log alpha / log 2`, the slope of `a` against `n`.
fn a_per_n(prec: u32) -> Result<Interval> {
    Interval::from_int(1, prec).div(&Constant::Gamma.value_at(prec)?)
}

/// `log 0.38 / log 2`.
fn log2_of_038(prec: u32) -> Result<Interval> {
    Interval::from_decimal("0.38", prec)?.ln()?.div(&Constant::Log2.value_at(prec)?)
}

/// Lower edge `n log alpha/log 2 + log 0.38/log 2 - 1` of the admissible
/// range of `a` (exclusive).
pub fn a_lower_edge(n: &BigInt, prec: u32) -> Result<Interval> {
    Ok(Interval::from_int(n.clone(), prec)
        .mul(&a_per_n(prec)?)
        .add(&log2_of_038(prec)?)
        .sub(&Interval::from_int(1, prec)))
}

/// Upper edge `n log alpha/log 2 + 1` of the admissible range of `a`
/// (exclusive).
pub fn a_upper_edge(n: &BigInt, prec: u32) -> Result<Interval> {
    Ok(Interval::from_int(n.clone(), prec).mul(&a_per_n(prec)?).add(&Interval::from_int(1, prec)))
}

/// Certified integer bracket `[a_lo, a_hi]` of exponents compatible with
/// `n` through the two-sided estimate relating `a` and `n`.
pub fn a_range_for_n(n: u32, policy: PrecisionPolicy) -> Result<(BigInt, BigInt)> {
    if n < 2 {
        return Err(Error::InvalidInput("a_range_for_n needs n >= 2".into()));
    }
    let n = BigInt::from(n);
    let (r, _) = policy.run("a range", |prec| {
        let lo = a_lower_edge(&n, prec)?.certified_floor()? + 1;
        // a < U with U irrational: a_hi = ceil(U) - 1 = floor(U)
        let hi = a_upper_edge(&n, prec)?.certified_floor()?;
        Ok((lo, hi))
    })?;
    Ok(r)
}

/// Largest `n` (and the corresponding largest `a`) not excluded by one of
/// the two cases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalBounds {
    pub a_max: BigInt,
    pub n_max: BigInt,
}

impl GlobalBounds {
    pub fn max(&self, other: &GlobalBounds) -> GlobalBounds {
        GlobalBounds {
            a_max: (&self.a_max).max(&other.a_max).clone(),
            n_max: (&self.n_max).max(&other.n_max).clone(),
        }
    }

    /// Both maxima at most the given decimal bounds.
    pub fn within(&self, a_bound: &str, n_bound: &str) -> Result<bool> {
        let a = Interval::from_decimal(a_bound, 256)?;
        let n = Interval::from_decimal(n_bound, 256)?;
        Ok(Interval::from_int(self.a_max.clone(), 256).hi() <= a.lo()
            && Interval::from_int(self.n_max.clone(), 256).hi() <= n.lo())
    }
}

/// Tunable coefficients of the bound chain (for monotonicity checks).
#[derive(Debug, Clone)]
pub struct ChainCoefficients {
    /// Coefficient of `log^2 n` in Case 1.
    pub case1: CertifiedConstant,
    /// Coefficient of `log n` in the minimum bound used by Case 2.
    pub case2: CertifiedConstant,
}

impl Default for ChainCoefficients {
    fn default() -> Self {
        ChainCoefficients { case1: dec(CASE1_COEFFICIENT), case2: dec(MIN_FORM_COEFFICIENT) }
    }
}

/// Find the least `N` such that `excess(n) > 0` for every `n >= N`.
///
/// `next` is the fixed-point map, iterated from `start` until the integer
/// ceiling stabilizes. The result is then certified: `excess(N) > 0`,
/// `excess(N - 1) < 0`, and `slope_ok(N)` guarantees that `excess` keeps
/// increasing past `N`.
pub(crate) fn solve_threshold(
    what: &str,
    policy: PrecisionPolicy,
    start: BigInt,
    next: impl Fn(&BigInt, u32) -> Result<Interval>,
    excess: impl Fn(&BigInt, u32) -> Result<Interval>,
    slope_ok: impl Fn(&BigInt, u32) -> Result<bool>,
) -> Result<BigInt> {
    let (n, _) = policy.run(what, |prec| {
        let mut n = start.clone();
        let mut converged = false;
        for _ in 0..1000 {
            let g = next(&n, prec)?.hi().ceil();
            if g == n {
                converged = true;
                break;
            }
            n = g;
        }
        if !converged {
            return Err(Error::NoConvergence(what.to_string()));
        }
        loop {
            let e = excess(&n, prec)?;
            if e.is_positive() {
                break;
            }
            if !e.is_negative() {
                return Err(Error::insufficient(format!("{what}: sign at threshold")));
            }
            n += 1;
        }
        loop {
            let prev = &n - 1;
            let e = excess(&prev, prec)?;
            if e.is_positive() {
                n = prev;
                continue;
            }
            if !e.is_negative() {
                return Err(Error::insufficient(format!("{what}: sign below threshold")));
            }
            break;
        }
        if !slope_ok(&n, prec)? {
            return Err(Error::NoConvergence(format!("{what}: excess not increasing at threshold")));
        }
        Ok(n)
    })?;
    Ok(n)
}

/// Largest `a` with `a < n log alpha/log 2 + 1`.
fn a_max_for(n_max: &BigInt, policy: PrecisionPolicy) -> Result<BigInt> {
    Ok(policy.run("a from n", |prec| a_upper_edge(n_max, prec)?.certified_floor())?.0)
}

/// Case 1 (`n - m` realizes the minimum): `(a/2 - 1) log 2 < K log^2 n`
/// together with the lower edge of the `a` range.
pub fn case1_bounds_with(coeffs: &ChainCoefficients, policy: PrecisionPolicy) -> Result<GlobalBounds> {
    let k = coeffs.case1.clone();
    // excess(n) = ((L(n))/2 - 1) log 2 - K log^2 n, with a > L(n).
    let excess = |n: &BigInt, p: u32| -> Result<Interval> {
        let l = a_lower_edge(n, p)?;
        let lhs = l.mul_pow2(-1).sub(&Interval::from_int(1, p)).mul(&Constant::Log2.value_at(p)?);
        let ln = Interval::from_int(n.clone(), p).ln()?;
        Ok(lhs.sub(&k.value_at(p)?.mul(&ln.square())))
    };
    let next = |n: &BigInt, p: u32| -> Result<Interval> {
        // Solve L(n) = 2 (K log^2 n / log 2 + 1) for the linear n.
        let ln = Interval::from_int(n.clone(), p).ln()?;
        let target = k.value_at(p)?.mul(&ln.square()).div(&Constant::Log2.value_at(p)?)?.add(&Interval::from_int(1, p)).mul_pow2(1);
        target.add(&Interval::from_int(1, p)).sub(&log2_of_038(p)?).div(&a_per_n(p)?)
    };
    // d/dn = (log alpha)/2 - 2 K log n / n; log n / n decreases for n >= 3.
    let slope_ok = |n: &BigInt, p: u32| -> Result<bool> {
        let ln = Interval::from_int(n.clone(), p).ln()?;
        let falling = k.value_at(p)?.mul(&ln).mul_pow2(1).div(&Interval::from_int(n.clone(), p))?;
        let rising = Constant::LogAlpha.value_at(p)?.mul_pow2(-1);
        falling.certainly_lt(&rising)
    };
    let threshold = solve_threshold("case 1 threshold", policy, BigInt::from(1000), next, excess, slope_ok)?;
    let n_max = threshold - 1;
    Ok(GlobalBounds { a_max: a_max_for(&n_max, policy)?, n_max })
}

pub fn case1_bounds(policy: PrecisionPolicy) -> Result<GlobalBounds> {
    case1_bounds_with(&ChainCoefficients::default(), policy)
}

/// Case 2 (`n - a` realizes the minimum): `(n - a) log alpha < K log n`
/// with `n - a > n (1 - log alpha/log 2) - 1`.
pub fn case2_bounds_with(coeffs: &ChainCoefficients, policy: PrecisionPolicy) -> Result<GlobalBounds> {
    let k = coeffs.case2.clone();
    let gap_rate = |p: u32| -> Result<Interval> { Ok(Interval::from_int(1, p).sub(&a_per_n(p)?)) };
    let excess = |n: &BigInt, p: u32| -> Result<Interval> {
        let nn = Interval::from_int(n.clone(), p);
        let lhs = nn.mul(&gap_rate(p)?).sub(&Interval::from_int(1, p)).mul(&Constant::LogAlpha.value_at(p)?);
        Ok(lhs.sub(&k.value_at(p)?.mul(&nn.ln()?)))
    };
    let next = |n: &BigInt, p: u32| -> Result<Interval> {
        let ln = Interval::from_int(n.clone(), p).ln()?;
        k.value_at(p)?.mul(&ln).div(&Constant::LogAlpha.value_at(p)?)?.add(&Interval::from_int(1, p)).div(&gap_rate(p)?)
    };
    // d/dn = (1 - log alpha/log 2) log alpha - K / n, increasing in n.
    let slope_ok = |n: &BigInt, p: u32| -> Result<bool> {
        let falling = k.value_at(p)?.div(&Interval::from_int(n.clone(), p))?;
        falling.certainly_lt(&gap_rate(p)?.mul(&Constant::LogAlpha.value_at(p)?))
    };
    let threshold = solve_threshold("case 2 threshold", policy, BigInt::from(1000), next, excess, slope_ok)?;
    let n_max = threshold - 1;
    Ok(GlobalBounds { a_max: a_max_for(&n_max, policy)?, n_max })
}

pub fn case2_bounds(policy: PrecisionPolicy) -> Result<GlobalBounds> {
    case2_bounds_with(&ChainCoefficients::default(), policy)
}

/// Whether `(a/2 - 1) log 2 < 1.4e12 log n (3 + gap log alpha)` holds.
pub fn first_form_rhs_bound(a: &BigInt, n: &BigInt, gap: u32, policy: PrecisionPolicy) -> Result<bool> {
    if gap < 2 || n < &BigInt::from(3) {
        return Err(Error::InvalidInput("first_form_rhs_bound needs gap >= 2 and n >= 3".into()));
    }
    let (holds, _) = policy.run("first form bound", |p| {
        let lhs = Interval::from_int(a.clone(), p)
            .mul_pow2(-1)
            .sub(&Interval::from_int(1, p))
            .mul(&Constant::Log2.value_at(p)?);
        let rhs = Interval::from_decimal(LAMBDA1_COEFFICIENT, p)?
            .mul(&Interval::from_int(n.clone(), p).ln()?)
            .mul(&gamma3_height(gap).value_at(p)?);
        lhs.certainly_lt(&rhs)
    })?;
    Ok(holds)
}

/// Largest `a` compatible with the first-form bound when `n - m < gap_bound`,
/// using `n < (a + 1 - log 0.38/log 2) / (log alpha/log 2)`.
pub fn a_bound_from_gap(gap_bound: u32, policy: PrecisionPolicy) -> Result<BigInt> {
    let gap = gap_bound.saturating_sub(1);
    let height = gamma3_height(gap);
    let n_of_a = |a: &BigInt, p: u32| -> Result<Interval> {
        Interval::from_int(a.clone(), p).add(&Interval::from_int(1, p)).sub(&log2_of_038(p)?).div(&a_per_n(p)?)
    };
    let coeff = |p: u32| -> Result<Interval> {
        Ok(Interval::from_decimal(LAMBDA1_COEFFICIENT, p)?.mul(&height.value_at(p)?))
    };
    let excess = |a: &BigInt, p: u32| -> Result<Interval> {
        let lhs = Interval::from_int(a.clone(), p)
            .mul_pow2(-1)
            .sub(&Interval::from_int(1, p))
            .mul(&Constant::Log2.value_at(p)?);
        Ok(lhs.sub(&coeff(p)?.mul(&n_of_a(a, p)?.ln()?)))
    };
    let next = |a: &BigInt, p: u32| -> Result<Interval> {
        // a = 2 (C log n(a) / log 2 + 1)
        Ok(coeff(p)?.mul(&n_of_a(a, p)?.ln()?).div(&Constant::Log2.value_at(p)?)?.add(&Interval::from_int(1, p)).mul_pow2(1))
    };
    // d/da = log 2 / 2 - C / (a + 1 - log 0.38/log 2), increasing in a.
    let slope_ok = |a: &BigInt, p: u32| -> Result<bool> {
        let denom = Interval::from_int(a.clone(), p).add(&Interval::from_int(1, p)).sub(&log2_of_038(p)?);
        coeff(p)?.div(&denom)?.certainly_lt(&Constant::Log2.value_at(p)?.mul_pow2(-1))
    };
    let threshold = solve_threshold("a bound from gap", policy, BigInt::from(1000), next, excess, slope_ok)?;
    Ok(threshold - 1)
}

/// Largest `n` with `n - a < gap_bound` and `a < n log alpha/log 2 + 1`.
pub fn n_bound_from_exponent_gap(gap_bound: u32, policy: PrecisionPolicy) -> Result<BigInt> {
    // n (1 - log alpha/log 2) < gap_bound + 1
    let (n, _) = policy.run("n from n - a", |p| {
        let rate = Interval::from_int(1, p).sub(&a_per_n(p)?);
        let limit = Interval::from_int(gap_bound + 1, p).div(&rate)?;
        let f = limit.certified_floor()?;
        // limit is irrational, so n <= floor(limit)
        Ok(f)
    })?;
    Ok(n)
}

/// Largest `n` compatible with some `a <= a_max`: `a > L(n)` forces
/// `n < (a_max + 1 - log 0.38/log 2) / (log alpha/log 2)`.
pub fn n_max_for_a(a_max: &BigInt, policy: PrecisionPolicy) -> Result<BigInt> {
    Ok(policy
        .run("n from a", |p| {
            Interval::from_int(a_max.clone(), p)
                .add(&Interval::from_int(1, p))
                .sub(&log2_of_038(p)?)
                .div(&a_per_n(p)?)?
                .certified_floor()
        })?
        .0)
}

/// `1 + log n < 2 log n` for every `n >= 3`, i.e. `log 3 > 1`.
pub fn one_plus_log_below_two_log(policy: PrecisionPolicy) -> Result<bool> {
    Ok(policy
        .run("log 3 > 1", |p| Interval::from_int(1, p).certainly_lt(&Interval::from_int(3, p).ln()?))?
        .0)
}

/// `2.31e12 log n + log(3 sqrt5 / 2) < 2.4e12 log n` for every `n >= 3`.
///
/// Both sides are affine in `log n` with the right side growing faster, so
/// checking at `n = 3` suffices.
pub fn min_form_rounding_holds(policy: PrecisionPolicy) -> Result<bool> {
    Ok(policy
        .run("min form rounding", |p| {
            let x = Interval::from_int(3, p).ln()?;
            let c = Interval::from_int(3, p).mul(&Constant::Sqrt5.value_at(p)?).mul_pow2(-1).ln()?;
            let lhs = Interval::from_decimal(LAMBDA2_COEFFICIENT, p)?.mul(&x).add(&c);
            lhs.certainly_lt(&Interval::from_decimal(MIN_FORM_COEFFICIENT, p)?.mul(&x))
        })?
        .0)
}

/// `1.4e12 x (3 + 2.4e12 x) < 3.5e24 x^2` for `x = log n >= log 3`, i.e.
/// `4.2e12 < (3.5e24 - 1.4e12 * 2.4e12) x`.
pub fn case1_rounding_holds(policy: PrecisionPolicy) -> Result<bool> {
    Ok(policy
        .run("case 1 rounding", |p| {
            let x = Interval::from_int(3, p).ln()?;
            let c1 = Interval::from_decimal(LAMBDA1_COEFFICIENT, p)?;
            let c2 = Interval::from_decimal(MIN_FORM_COEFFICIENT, p)?;
            let k = Interval::from_decimal(CASE1_COEFFICIENT, p)?;
            let slack = k.sub(&c1.mul(&c2));
            if !slack.is_positive() {
                return Ok(false);
            }
            c1.mul(&Interval::from_int(3, p)).certainly_lt(&slack.mul(&x))
        })?
        .0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn policy() -> PrecisionPolicy {
        PrecisionPolicy::default()
    }

    #[test]
    fn rational_heights() {
        let h = height_rational(&BigInt::from(2), &BigInt::one(), 64).unwrap();
        assert!((h.to_f64() - 0.6931).abs() < 1e-4);
        assert!(height_rational(&BigInt::one(), &BigInt::one(), 64).unwrap().hi().is_zero());
        let h7 = height_rational(&BigInt::from(-7), &BigInt::from(3), 64).unwrap();
        assert!((h7.to_f64() - 7f64.ln()).abs() < 1e-15);
        assert!(height_rational(&BigInt::from(2), &BigInt::from(4), 64).is_err());
        assert!(height_rational(&BigInt::from(1), &BigInt::from(-3), 64).is_err());
    }

    #[test]
    fn matveev_spec_validation() {
        assert!(MatveevSpec::new(3, 2, vec![dec("1.4"), dec("0.5"), dec("0")], BigInt::from(10)).is_err());
        assert!(MatveevSpec::new(1, 2, vec![dec("0.15")], BigInt::from(10)).is_err());
        assert!(MatveevSpec::new(3, 2, vec![dec("1.4"), dec("0.5")], BigInt::from(10)).is_err());
        assert!(MatveevSpec::new(0, 2, vec![], BigInt::from(10)).is_err());
        assert!(MatveevSpec::new(1, 2, vec![dec("0.16")], BigInt::zero()).is_err());
        assert!(MatveevSpec::new(1, 2, vec![dec("0.16")], BigInt::one()).is_ok());
    }

    #[test]
    fn published_coefficients_dominate() {
        let c = matveev_coefficients(policy()).unwrap();
        assert!(c.within_published().unwrap(), "{c:?}");
        // recomputed values: 1.3576e12 and 2.3079e12
        assert!((c.lambda1.to_f64() / 1.3576e12 - 1.0).abs() < 1e-3);
        assert!((c.lambda2.to_f64() / 2.3079e12 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn exponent_uses_one_plus_log_b() {
        let spec = lambda2_spec(BigInt::from(1000)).unwrap();
        let e = spec.exponent(128).unwrap();
        let per_log = spec.log_b_coefficient(128, None).unwrap().mul_pow2(-1);
        let expected = per_log.mul(&Interval::from_int(1, 128).add(&Interval::from_int(1000, 128).ln().unwrap()));
        assert!(e.certain_cmp(&expected).is_none());
        let via_fn = matveev_exponent(&spec, &BigInt::from(1000), 128).unwrap();
        assert_eq!(via_fn, e);
    }

    #[test]
    fn a_ranges_contain_appendix_exponents() {
        let (lo, hi) = a_range_for_n(42, policy()).unwrap();
        assert!(lo <= BigInt::from(28) && BigInt::from(28) <= hi);
        let (lo, hi) = a_range_for_n(23, policy()).unwrap();
        assert!(lo <= BigInt::from(15) && BigInt::from(15) <= hi);
        let (_, hi) = a_range_for_n(2, policy()).unwrap();
        assert!(hi <= BigInt::from(2));
        assert!(a_range_for_n(1, policy()).is_err());
    }

    #[test]
    fn a_stays_below_n() {
        for n in 4..300 {
            let (_, hi) = a_range_for_n(n, policy()).unwrap();
            assert!(hi < BigInt::from(n), "n = {n}");
        }
    }

    #[test]
    fn chain_roundings() {
        assert!(one_plus_log_below_two_log(policy()).unwrap());
        assert!(min_form_rounding_holds(policy()).unwrap());
        assert!(case1_rounding_holds(policy()).unwrap());
    }

    #[test]
    fn first_form_bound_small_and_violated() {
        assert!(first_form_rhs_bound(&BigInt::from(6), &BigInt::from(10), 2, policy()).unwrap());
        let huge: BigInt = "1000000000000000000000".parse().unwrap();
        assert!(!first_form_rhs_bound(&huge, &BigInt::from(10), 2, policy()).unwrap());
        assert!(first_form_rhs_bound(&BigInt::from(6), &BigInt::from(10), 1, policy()).is_err());
    }

    #[test]
    fn n_from_a() {
        assert_eq!(n_max_for_a(&BigInt::from(134), policy()).unwrap(), BigInt::from(196));
        assert_eq!(n_max_for_a(&BigInt::from(28), policy()).unwrap(), BigInt::from(43));
    }

    #[test]
    fn exponent_gap_branch() {
        // n - a < 158 only allows n < 520
        assert_eq!(n_bound_from_exponent_gap(158, policy()).unwrap(), BigInt::from(520));
    }

    #[test]
    fn global_bounds_values() {
        let c1 = case1_bounds(policy()).unwrap();
        let c2 = case2_bounds(policy()).unwrap();
        let g = a_bound_from_gap(158, policy()).unwrap();
        eprintln!("case1 {c1:?}\ncase2 {c2:?}\ngap {g}");
        assert!(c1.within(PUBLISHED_A_BOUND, PUBLISHED_N_BOUND).unwrap());
        assert!(c1.n_max > c2.n_max);
        assert!(g < "13000000000000000".parse::<BigInt>().unwrap());
    }

    #[test]
    fn larger_coefficients_give_larger_bounds() {
        let small = case2_bounds(policy()).unwrap();
        let big = case2_bounds_with(
            &ChainCoefficients { case1: dec(CASE1_COEFFICIENT), case2: dec("2.5e12") },
            policy(),
        )
        .unwrap();
        assert!(big.n_max >= small.n_max);
    }
}
