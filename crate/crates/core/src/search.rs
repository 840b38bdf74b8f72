//! Exact enumeration of small solutions, and the bundled appendix list.
//!
//! Every predicate here is an integer comparison `(x - 2^a)^2 < 2^a`.

use std::collections::BTreeSet;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linear_forms::a_range_for_n;
use crate::reals::PrecisionPolicy;
use crate::recurrences::{fib, fib_table, is_close, lucas, SeqIndex, SolutionTriple};

/// Search limit used throughout the proof replay.
pub const PROOF_N_MAX: SeqIndex = 250;
/// Default widening of the certified `a` bracket.
pub const A_MARGIN: u32 = 2;

const APPENDIX: &str = include_str!("../data/appendix.txt");

/// Sorted, duplicate-free list of solution triples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionSet {
    pub triples: Vec<SolutionTriple>,
    pub n_max_seen: SeqIndex,
    pub a_max_seen: u32,
}

impl SolutionSet {
    pub fn from_triples(triples: impl IntoIterator<Item = SolutionTriple>) -> Self {
        let triples: Vec<_> = triples.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let n_max_seen = triples.iter().map(|t| t.n).max().unwrap_or(0);
        let a_max_seen = triples.iter().map(|t| t.a).max().unwrap_or(0);
        SolutionSet { triples, n_max_seen, a_max_seen }
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn contains(&self, t: &SolutionTriple) -> bool {
        self.triples.binary_search(t).is_ok()
    }
}

fn pow2(a: u32) -> BigInt {
    BigInt::one() << a as usize
}

/// `|F_n + F_m - 2^a| < 2^(a/2)`, exactly.
pub fn is_pair_solution(n: SeqIndex, m: SeqIndex, a: u32) -> bool {
    is_close(&(fib(n) + fib(m)), &pow2(a)).expect("2^a >= 1")
}

fn a_bracket(n: SeqIndex, margin: u32) -> Result<(u32, u32)> {
    let (lo, hi) = a_range_for_n(n.max(2), PrecisionPolicy::default())?;
    let lo: i64 = lo.try_into().map_err(|_| Error::InvalidInput("a bracket out of range".into()))?;
    let hi: i64 = hi.try_into().map_err(|_| Error::InvalidInput("a bracket out of range".into()))?;
    let lo = (lo - margin as i64).max(1) as u32;
    let hi = (hi + margin as i64).max(1) as u32;
    Ok((lo, hi))
}

/// All solutions with `1 <= m <= n <= n_max`, scanning `a` over the
/// certified bracket widened by `margin` on each side.
pub fn enumerate_pair_solutions_with_margin(n_max: SeqIndex, margin: u32) -> Result<SolutionSet> {
    if n_max < 2 {
        return Err(Error::InvalidInput("enumerate_pair_solutions needs n_max >= 2".into()));
    }
    let fibs = fib_table(n_max);
    let found: Vec<Vec<SolutionTriple>> = (1..=n_max)
        .into_par_iter()
        .map(|n| -> Result<Vec<SolutionTriple>> {
            let (lo, hi) = a_bracket(n, margin)?;
            let mut out = Vec::new();
            for a in lo..=hi {
                let p = pow2(a);
                for m in 1..=n {
                    let s = &fibs[n as usize] + &fibs[m as usize];
                    if is_close(&s, &p)? {
                        out.push(SolutionTriple { n, m, a });
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(SolutionSet::from_triples(found.into_iter().flatten()))
}

pub fn enumerate_pair_solutions(n_max: SeqIndex) -> Result<SolutionSet> {
    enumerate_pair_solutions_with_margin(n_max, A_MARGIN)
}

/// Exponents worth testing against a value `x >= 1`: `2^a` within a factor
/// of 8 of `x`.
fn a_candidates(x: &BigInt) -> std::ops::RangeInclusive<u32> {
    let bits = x.bits() as u32;
    bits.saturating_sub(3).max(1)..=bits + 2
}

/// Pairs `(n, a)`, `n, a >= 1`, with `|L_n - 2^a| < 2^(a/2)`.
pub fn enumerate_lucas_solutions(n_max: SeqIndex) -> Result<Vec<(SeqIndex, u32)>> {
    if n_max < 1 {
        return Err(Error::InvalidInput("enumerate_lucas_solutions needs n_max >= 1".into()));
    }
    let mut out = Vec::new();
    for n in 1..=n_max {
        let l = lucas(n);
        for a in a_candidates(&l) {
            if is_close(&l, &pow2(a))? {
                out.push((n, a));
            }
        }
    }
    Ok(out)
}

/// Value pairs `(F_n, 2^m)`, `n, m >= 1`, with `|F_n - 2^m| < 2^(m/2)`,
/// deduplicated by value.
pub fn enumerate_single_fib_solutions(n_max: SeqIndex) -> Result<Vec<(BigInt, BigInt)>> {
    if n_max < 1 {
        return Err(Error::InvalidInput("enumerate_single_fib_solutions needs n_max >= 1".into()));
    }
    let mut out = BTreeSet::new();
    for n in 1..=n_max {
        let f = fib(n);
        for m in a_candidates(&f) {
            let p = pow2(m);
            if is_close(&f, &p)? {
                out.insert((f.clone(), p));
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Parse rows `n m a`; `m = i` expands to `m = 1` and `m = 2`. Blank lines
/// and lines starting with `#` are skipped.
pub fn parse_appendix(text: &str) -> Result<SolutionSet> {
    let mut triples = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: &str| Error::Parse { line: i + 1, msg: msg.to_string() };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(err("expected three fields"));
        }
        let n: SeqIndex = fields[0].parse().map_err(|_| err("bad n"))?;
        let a: u32 = fields[2].parse().map_err(|_| err("bad a"))?;
        let ms: Vec<SeqIndex> = if fields[1] == "i" {
            vec![1, 2]
        } else {
            vec![fields[1].parse().map_err(|_| err("bad m"))?]
        };
        for m in ms {
            triples.push(SolutionTriple::new(n, m, a).map_err(|e| err(&e.to_string()))?);
        }
    }
    Ok(SolutionSet::from_triples(triples))
}

/// The bundled appendix list.
pub fn golden_appendix() -> SolutionSet {
    parse_appendix(APPENDIX).expect("bundled appendix parses")
}

pub fn load_appendix(path: &Path) -> Result<SolutionSet> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    parse_appendix(&text)
}

/// Differences between a golden list and the enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AppendixReport {
    pub expected: usize,
    pub computed: usize,
    /// Golden rows the enumeration did not find.
    pub missing: Vec<SolutionTriple>,
    /// Enumerated solutions absent from the golden list.
    pub unexpected: Vec<SolutionTriple>,
    /// Golden rows failing the exact predicate.
    pub not_solutions: Vec<SolutionTriple>,
}

impl AppendixReport {
    pub fn is_equal(&self) -> bool {
        self.missing.is_empty() && self.unexpected.is_empty() && self.not_solutions.is_empty()
    }
}

pub fn compare_solutions(expected: &SolutionSet, computed: &SolutionSet) -> AppendixReport {
    AppendixReport {
        expected: expected.len(),
        computed: computed.len(),
        missing: expected.triples.iter().filter(|t| !computed.contains(t)).copied().collect(),
        unexpected: computed.triples.iter().filter(|t| !expected.contains(t)).copied().collect(),
        not_solutions: expected.triples.iter().filter(|t| !is_pair_solution(t.n, t.m, t.a)).copied().collect(),
    }
}

/// Compare `expected` against the enumeration up to `n_max`.
pub fn verify_appendix(expected: &SolutionSet, n_max: SeqIndex) -> Result<AppendixReport> {
    Ok(compare_solutions(expected, &enumerate_pair_solutions(n_max)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(n: u32, m: u32, a: u32) -> SolutionTriple {
        SolutionTriple { n, m, a }
    }

    #[test]
    fn tiny_cases() {
        let s = enumerate_pair_solutions(5).unwrap();
        for x in [t(3, 1, 1), t(3, 2, 1), t(3, 1, 2), t(3, 2, 2), t(3, 3, 2)] {
            assert!(s.contains(&x), "{x:?}");
        }
        assert!(enumerate_pair_solutions(1).is_err());
    }

    #[test]
    fn appendix_has_52_rows() {
        let g = golden_appendix();
        assert_eq!(g.len(), 52);
        assert_eq!((g.n_max_seen, g.a_max_seen), (42, 28));
        assert!(g.contains(&t(42, 29, 28)) && g.contains(&t(23, 19, 15)));
    }

    #[test]
    fn parse_rejects_malformed_rows() {
        assert!(matches!(parse_appendix("1 1"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_appendix("# c\n3 x 1"), Err(Error::Parse { line: 2, .. })));
        assert!(parse_appendix("2 3 1").is_err());
        assert_eq!(parse_appendix("5 i 3\n").unwrap().len(), 2);
    }

    #[test]
    fn report_detects_deletion_and_fabrication() {
        let computed = enumerate_pair_solutions(60).unwrap();
        let mut golden = golden_appendix();
        golden.triples.remove(10);
        let r = compare_solutions(&golden, &computed);
        assert_eq!((r.missing.len(), r.unexpected.len()), (0, 1));
        let mut forged = golden_appendix().triples;
        forged.push(t(50, 1, 30));
        let r = compare_solutions(&SolutionSet::from_triples(forged), &computed);
        assert_eq!(r.not_solutions, vec![t(50, 1, 30)]);
        assert!(!r.is_equal());
    }

    #[test]
    fn lucas_small() {
        assert_eq!(enumerate_lucas_solutions(1).unwrap(), vec![(1, 1)]);
    }

    #[test]
    fn single_fib_contains_listed_values() {
        let s = enumerate_single_fib_solutions(50).unwrap();
        assert!(s.contains(&(BigInt::from(8), BigInt::from(8))));
        assert!(s.contains(&(BigInt::from(34), BigInt::from(32))));
    }
}
