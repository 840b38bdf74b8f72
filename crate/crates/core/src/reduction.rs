//! Baker–Davenport reduction in the Dujella–Pethö form, the two reduction
//! rounds, and the Legendre fallback for the degenerate gaps `n - m = 2, 6`.
//!
//! For an instance `(gamma, mu, A, B, M)`, let `q > 6M` be a convergent
//! denominator of `gamma` and `eps = ||mu q|| - M ||gamma q||`. If `eps > 0`
//! then `0 < |u gamma - v + mu| < A B^(-w)` has no solution with `u <= M`
//! and `w >= log(A q / eps) / log B`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;

use crate::cfrac::{convergents_of, expand, legendre_denominator, smallest_convergent_exceeding, Convergent};
use crate::error::{Error, Result};
use crate::linear_forms::a_lower_edge;
use crate::reals::{phi, CertifiedConstant, Constant, Interval, PrecisionPolicy};

/// Convergents tried past the first one with `q > 6M`.
pub const RETRIES: usize = 10;

/// The published bound on `a` feeding the first reduction.
pub const FIRST_REDUCTION_M: &str = "45000000000000000000000000000";
/// The bound on `a` feeding the second reduction.
pub const SECOND_REDUCTION_M: &str = "13000000000000000";
/// Largest gap `n - m` covered by the second reduction.
pub const MAX_GAP: u32 = 158;
/// Gaps where `log phi(t) / log alpha` is an integer combination of 1 and gamma.
pub const DEGENERATE_GAPS: [u32; 2] = [2, 6];

#[derive(Debug, Clone)]
pub struct ReductionInstance {
    pub gamma: CertifiedConstant,
    pub mu: CertifiedConstant,
    pub a_coeff: CertifiedConstant,
    pub base: CertifiedConstant,
    pub m: BigInt,
}

impl ReductionInstance {
    /// Checks `A > 0`, `B > 1` and `M >= 1`.
    pub fn new(
        gamma: CertifiedConstant,
        mu: CertifiedConstant,
        a_coeff: CertifiedConstant,
        base: CertifiedConstant,
        m: BigInt,
    ) -> Result<Self> {
        let p = 128;
        if !a_coeff.value_at(p)?.is_positive() {
            return Err(Error::InvalidInput(format!("A = {} must be positive", a_coeff.name())));
        }
        if !base.value_at(p)?.sub(&Interval::from_int(1, p)).is_positive() {
            return Err(Error::InvalidInput(format!("B = {} must exceed 1", base.name())));
        }
        if m < BigInt::one() {
            return Err(Error::InvalidInput("M must be at least 1".into()));
        }
        Ok(ReductionInstance { gamma, mu, a_coeff, base, m })
    }
}

#[derive(Debug, Clone)]
pub struct ReductionOutcome {
    pub convergent_index: usize,
    pub q_used: BigInt,
    pub epsilon: Interval,
    /// Enclosure of `log(A q / eps_lo) / log B`.
    pub w_value: Interval,
    /// No solution has `w >= w_bound`.
    pub w_bound: BigInt,
    pub precision: u32,
}

fn try_convergent(inst: &ReductionInstance, conv: &Convergent, policy: PrecisionPolicy) -> Result<Option<ReductionOutcome>> {
    let attempt = policy.run("reduction epsilon", |p| {
        let q = Interval::from_int(conv.q.clone(), p);
        let mu_q = inst.mu.value_at(p)?.mul(&q).nearest_int_distance()?;
        let gamma_q = inst.gamma.value_at(p)?.mul(&q).nearest_int_distance()?;
        let eps = mu_q.sub(&Interval::from_int(inst.m.clone(), p).mul(&gamma_q));
        if eps.is_negative() {
            return Ok(None);
        }
        if !eps.is_positive() {
            return Err(Error::insufficient("sign of epsilon"));
        }
        let eps_lo = Interval::point(eps.lo().clone(), p);
        let w = inst
            .a_coeff
            .value_at(p)?
            .mul(&q)
            .div(&eps_lo)?
            .ln()?
            .div(&inst.base.value_at(p)?.ln()?)?;
        let w_bound = w.hi().ceil();
        if w.lo().ceil() != w_bound {
            return Err(Error::insufficient("ceiling of the reduced bound"));
        }
        Ok(Some((eps, w, w_bound, p)))
    });
    match attempt {
        Ok((Some((epsilon, w_value, w_bound, precision)), _)) => Ok(Some(ReductionOutcome {
            convergent_index: conv.k,
            q_used: conv.q.clone(),
            epsilon,
            w_value,
            w_bound,
            precision,
        })),
        Ok((None, _)) => Ok(None),
        // undecidable at the cap counts as a failed convergent
        Err(Error::PrecisionCapExceeded { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Convergents of `gamma` from the first with `q > 6M` onwards, `RETRIES + 1`
/// of them.
pub fn candidate_convergents(gamma: &CertifiedConstant, m: &BigInt, policy: PrecisionPolicy) -> Result<Vec<Convergent>> {
    let first = smallest_convergent_exceeding(gamma, &(m * 6), policy)?;
    let cf = expand(gamma, first.k + RETRIES + 1, policy)?;
    Ok(convergents_of(cf.quotients()).split_off(first.k))
}

/// Reduce using precomputed candidates (see [`candidate_convergents`]).
pub fn dp_reduce_with(inst: &ReductionInstance, candidates: &[Convergent], policy: PrecisionPolicy) -> Result<ReductionOutcome> {
    let six_m = &inst.m * 6;
    let mut tried = Vec::new();
    for conv in candidates.iter().filter(|c| c.q > six_m).take(RETRIES + 1) {
        if let Some(out) = try_convergent(inst, conv, policy)? {
            return Ok(out);
        }
        tried.push(conv.k);
    }
    Err(Error::Degenerate { tried })
}

pub fn dp_reduce(inst: &ReductionInstance, policy: PrecisionPolicy) -> Result<ReductionOutcome> {
    let candidates = candidate_convergents(&inst.gamma, &inst.m, policy)?;
    dp_reduce_with(inst, &candidates, policy)
}

fn gamma() -> CertifiedConstant {
    Constant::Gamma.into()
}

fn log_alpha() -> CertifiedConstant {
    Constant::LogAlpha.into()
}

/// `(gamma, log sqrt5 / log alpha, 3 sqrt5 / log alpha, alpha, M)`.
pub fn first_reduction_instance(m: BigInt) -> Result<ReductionInstance> {
    ReductionInstance::new(
        gamma(),
        CertifiedConstant::from(Constant::LogSqrt5).over(&log_alpha()),
        CertifiedConstant::integer(3).times(&Constant::Sqrt5.into()).over(&log_alpha()),
        Constant::Alpha.into(),
        m,
    )
}

/// Bound on `kappa = min(n - m, n - a)`: every solution has `kappa < w_bound`.
pub fn first_reduction(m: &BigInt, policy: PrecisionPolicy) -> Result<ReductionOutcome> {
    dp_reduce(&first_reduction_instance(m.clone())?, policy)
}

/// Enclosure of `log phi(t) / log alpha`.
pub fn phi_log_ratio(t: u32, prec: u32) -> Result<Interval> {
    if t < 1 {
        return Err(Error::InvalidInput("phi_log_ratio needs t >= 1".into()));
    }
    phi(t, prec)?.ln()?.div(&Constant::LogAlpha.value_at(prec)?)
}

pub fn phi_log_ratio_constant(t: u32) -> CertifiedConstant {
    CertifiedConstant::new(format!("log_phi({t})/log_alpha"), move |p| phi_log_ratio(t, p))
}

/// `(gamma, log phi(t) / log alpha, 4 / log alpha, sqrt 2, M)`.
pub fn second_reduction_instance(t: u32, m: BigInt) -> Result<ReductionInstance> {
    ReductionInstance::new(
        gamma(),
        phi_log_ratio_constant(t),
        CertifiedConstant::integer(4).over(&log_alpha()),
        CertifiedConstant::integer(2).sqrt(),
        m,
    )
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    /// Per gap, the outcome; `a <= w_bound - 1`.
    pub per_gap: BTreeMap<u32, ReductionOutcome>,
    /// Gaps where every tried convergent gave a nonpositive epsilon.
    pub degenerate: Vec<u32>,
}

impl SweepResult {
    pub fn a_bound(&self, t: u32) -> Option<BigInt> {
        self.per_gap.get(&t).map(|o| &o.w_bound - 1)
    }

    /// Maximum of the per-gap bounds on `a`, and the gap attaining it.
    pub fn overall_a_bound(&self) -> Option<(u32, BigInt)> {
        self.per_gap
            .iter()
            .map(|(t, o)| (*t, &o.w_bound - 1))
            .fold(None, |best: Option<(u32, BigInt)>, (t, b)| match best {
                Some((_, ref bb)) if *bb >= b => best,
                _ => Some((t, b)),
            })
    }

    /// Error out if any gap degenerated.
    pub fn require_nondegenerate(&self) -> Result<()> {
        if self.degenerate.is_empty() {
            Ok(())
        } else {
            Err(Error::DegenerateGaps(self.degenerate.clone()))
        }
    }
}

/// Run the second reduction for every gap in `gaps`, in parallel; results
/// are keyed by gap so the order of evaluation does not matter.
pub fn second_reduction_sweep(m: &BigInt, gaps: impl IntoIterator<Item = u32>, policy: PrecisionPolicy) -> Result<SweepResult> {
    let candidates = candidate_convergents(&gamma(), m, policy)?;
    let gaps: Vec<u32> = gaps.into_iter().collect();
    let results: Vec<(u32, Result<ReductionOutcome>)> = gaps
        .par_iter()
        .map(|&t| {
            let r = second_reduction_instance(t, m.clone()).and_then(|inst| dp_reduce_with(&inst, &candidates, policy));
            (t, r)
        })
        .collect();
    let mut per_gap = BTreeMap::new();
    let mut degenerate = Vec::new();
    for (t, r) in results {
        match r {
            Ok(o) => {
                per_gap.insert(t, o);
            }
            Err(Error::Degenerate { .. }) => degenerate.push(t),
            Err(e) => return Err(e),
        }
    }
    degenerate.sort_unstable();
    Ok(SweepResult { per_gap, degenerate })
}

/// Outcome of the Legendre path for one degenerate gap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegenerateBound {
    pub t: u32,
    /// `a(M)`, the largest partial quotient up to the first `q > M`.
    pub max_quotient: BigInt,
    /// Every `a >= a_threshold` contradicts `2^(a/2) < 4 (a(M) + 2) a / log alpha`.
    pub a_threshold: BigInt,
    /// Every solution has `n < n_bound`.
    pub n_bound: BigInt,
}

/// Bound `n` for a degenerate gap by playing
/// `|a gamma - (n - 1)| < (4 / log alpha) 2^(-a/2)` against the Legendre
/// lower bound `|a gamma - (n - 1)| > 1 / ((a(M) + 2) a)`, valid for `a < M`.
///
/// For `t = 6` the form is `|(a - 1) gamma - (n - 3)|`, whose Legendre bound
/// `1 / ((a(M) + 2)(a - 1))` only improves on the one used here.
pub fn degenerate_gap_bound(t: u32, a_max: &BigInt, policy: PrecisionPolicy) -> Result<DegenerateBound> {
    if !DEGENERATE_GAPS.contains(&t) {
        return Err(Error::InvalidInput(format!("gap {t} is not degenerate")));
    }
    let legendre = legendre_denominator(&gamma(), a_max, policy)?;
    let am2 = &legendre.max_quotient + 2;
    // contradiction(a): 4 (a(M) + 2) a < log alpha * 2^(a/2)
    let contradiction = |a: u32, p: u32| -> Result<bool> {
        let lhs = Interval::from_int(&am2 * 4u32 * a, p);
        let rhs = Constant::LogAlpha.value_at(p)?.mul(&Interval::from_int(2, p).sqrt()?.pow_int(a as i64)?);
        lhs.certainly_lt(&rhs)
    };
    // d/da of the right side minus the left is increasing; once positive
    // at a0 it stays positive, so contradiction at a0 propagates upwards.
    let slope = |a: u32, p: u32| -> Result<bool> {
        let rise = Constant::LogAlpha
            .value_at(p)?
            .mul(&Interval::ln2(p).mul_pow2(-1))
            .mul(&Interval::from_int(2, p).sqrt()?.pow_int(a as i64)?);
        Interval::from_int(&am2 * 4u32, p).certainly_lt(&rise)
    };
    let (a0, _) = policy.run("degenerate a threshold", |p| {
        let mut a = 1u32;
        while !(contradiction(a, p)? && slope(a, p)?) {
            a += 1;
            if a > 10_000 {
                return Err(Error::NoConvergence("degenerate a threshold".into()));
            }
        }
        Ok(a)
    })?;
    // a > L(n) >= a0 - 1 excludes n; L is increasing, so bisect for the
    // smallest excluded n.
    let excluded = |n: u64| -> Result<bool> {
        Ok(policy
            .run("degenerate n bisection", |p| {
                let l = a_lower_edge(&BigInt::from(n), p)?;
                let target = Interval::from_int(a0 as i64 - 1, p);
                match l.certain_cmp(&target) {
                    Some(std::cmp::Ordering::Less) => Ok(false),
                    Some(_) => Ok(true),
                    None => Err(Error::insufficient("degenerate n bisection")),
                }
            })?
            .0)
    };
    let (mut lo, mut hi) = (1u64, 2u64);
    while !excluded(hi)? {
        lo = hi;
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if excluded(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(DegenerateBound { t, max_quotient: legendre.max_quotient, a_threshold: BigInt::from(a0), n_bound: BigInt::from(hi) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn policy() -> PrecisionPolicy {
        PrecisionPolicy::default()
    }

    fn big(s: &str) -> BigInt {
        s.parse().unwrap()
    }

    #[test]
    fn first_reduction_anchor() {
        let out = first_reduction(&big(FIRST_REDUCTION_M), policy()).unwrap();
        assert_eq!(out.convergent_index, 67);
        assert_eq!(out.q_used, big("506642617699397667695263997821"));
        assert!(out.epsilon.lo() >= Interval::from_decimal("0.01038", 64).unwrap().hi());
        assert_eq!(out.w_bound, BigInt::from(158));
        assert!((out.w_value.to_f64() - 157.10).abs() < 0.01);
    }

    #[test]
    fn first_reduction_small_m() {
        let out = first_reduction(&BigInt::from(1000), policy()).unwrap();
        assert!(out.w_bound <= BigInt::from(158));
        assert!(out.q_used > BigInt::from(6000));
    }

    #[test]
    fn threshold_property() {
        let out = first_reduction(&big(FIRST_REDUCTION_M), policy()).unwrap();
        let p = 256;
        let inst = first_reduction_instance(big(FIRST_REDUCTION_M)).unwrap();
        let lhs = inst.base.value_at(p).unwrap().pow_int(out.w_bound.clone().try_into().unwrap()).unwrap();
        let rhs = inst
            .a_coeff
            .value_at(p)
            .unwrap()
            .mul(&Interval::from_int(out.q_used.clone(), p))
            .div(&Interval::point(out.epsilon.hi().clone(), p))
            .unwrap();
        assert!(rhs.certainly_lt(&lhs).unwrap());
    }

    #[test]
    fn phi_ratio_special_gaps() {
        let p = 256;
        let r2 = phi_log_ratio(2, p).unwrap();
        assert!(r2.contains(&crate::reals::Dyadic::one()));
        let r6 = phi_log_ratio(6, p).unwrap();
        let three_minus_gamma = Interval::from_int(3, p).sub(&Constant::Gamma.value_at(p).unwrap());
        assert!(r6.sub(&three_minus_gamma).contains_zero());
        let r4 = phi_log_ratio(4, p).unwrap();
        let limit = Constant::LogSqrt5.value_at(p).unwrap().div(&Constant::LogAlpha.value_at(p).unwrap()).unwrap();
        assert!(r2.certainly_lt(&r4).unwrap() && r4.certainly_lt(&limit).unwrap());
        assert!(phi_log_ratio(0, p).is_err());
    }

    #[test]
    fn gap_two_is_degenerate() {
        let inst = second_reduction_instance(2, big(SECOND_REDUCTION_M)).unwrap();
        match dp_reduce(&inst, policy()) {
            Err(Error::Degenerate { tried }) => assert_eq!(tried.len(), RETRIES + 1),
            other => panic!("expected degeneracy, got {other:?}"),
        }
    }

    #[test]
    fn instance_validation() {
        let one = CertifiedConstant::integer(1);
        assert!(ReductionInstance::new(gamma(), one.clone(), CertifiedConstant::integer(0), Constant::Alpha.into(), BigInt::one()).is_err());
        assert!(ReductionInstance::new(gamma(), one.clone(), one.clone(), one.clone(), BigInt::one()).is_err());
        assert!(ReductionInstance::new(gamma(), one.clone(), one.clone(), Constant::Alpha.into(), BigInt::from(0)).is_err());
    }

    #[test]
    fn small_sweep_is_order_independent() {
        let m = big(SECOND_REDUCTION_M);
        let fwd = second_reduction_sweep(&m, 1..=8, policy()).unwrap();
        let rev = second_reduction_sweep(&m, (1..=8).rev(), policy()).unwrap();
        assert_eq!(fwd.degenerate, vec![2, 6]);
        assert_eq!(rev.degenerate, vec![2, 6]);
        for t in [1, 3, 4, 5, 7, 8] {
            assert_eq!(fwd.a_bound(t), rev.a_bound(t));
        }
        assert!(fwd.require_nondegenerate().is_err());
    }

    #[test]
    fn degenerate_gaps_bounded() {
        for t in DEGENERATE_GAPS {
            let b = degenerate_gap_bound(t, &big(SECOND_REDUCTION_M), policy()).unwrap();
            assert_eq!(b.max_quotient, BigInt::from(134));
            assert!(b.n_bound < BigInt::from(187), "{b:?}");
        }
        assert!(degenerate_gap_bound(3, &big(SECOND_REDUCTION_M), policy()).is_err());
    }
}
