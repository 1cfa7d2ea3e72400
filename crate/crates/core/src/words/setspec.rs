//! Decidable subsets of ℕ used by selector streams.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// A decidable subset of ℕ.
///
/// `PrefixCode` denotes `{ code(branch↾k) : k ≥ 0 }` where `code(s)` is the
/// value of the bit string `"1" + s` minus one. Distinct branches give
/// almost disjoint sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SetSpec {
    Finite(Vec<u64>),
    EvPeriodic { prefix: Vec<bool>, period: Vec<bool> },
    PrefixCode { prefix: Vec<bool>, period: Vec<bool> },
}

impl SetSpec {
    pub fn finite(mut elems: Vec<u64>) -> SetSpec {
        elems.sort_unstable();
        elems.dedup();
        SetSpec::Finite(elems)
    }

    pub fn ev_periodic(prefix: Vec<bool>, period: Vec<bool>) -> Result<SetSpec> {
        if period.is_empty() {
            return Err(Error::InvalidSet("empty period".into()));
        }
        Ok(SetSpec::EvPeriodic { prefix, period })
    }

    pub fn prefix_code(prefix: Vec<bool>, period: Vec<bool>) -> Result<SetSpec> {
        if period.is_empty() {
            return Err(Error::InvalidSet("empty branch period".into()));
        }
        Ok(SetSpec::PrefixCode { prefix, period })
    }

    /// The even numbers.
    pub fn evens() -> SetSpec {
        SetSpec::EvPeriodic {
            prefix: vec![],
            period: vec![true, false],
        }
    }

    pub fn contains(&self, n: u64) -> bool {
        match self {
            SetSpec::Finite(v) => v.binary_search(&n).is_ok(),
            SetSpec::EvPeriodic { prefix, period } => ev_bit(prefix, period, n),
            SetSpec::PrefixCode { prefix, period } => {
                let m = n as u128 + 1;
                let depth = 127 - m.leading_zeros() as u64;
                (0..depth).all(|i| {
                    let bit = (m >> (depth - 1 - i)) & 1 == 1;
                    bit == ev_bit(prefix, period, i)
                })
            }
        }
    }

    pub fn is_infinite(&self) -> bool {
        match self {
            SetSpec::Finite(_) => false,
            SetSpec::EvPeriodic { period, .. } => period.contains(&true),
            SetSpec::PrefixCode { .. } => true,
        }
    }

    /// The branch bit at depth `i` of a prefix-coded set.
    pub fn branch_bit(&self, i: u64) -> Option<bool> {
        match self {
            SetSpec::PrefixCode { prefix, period } => Some(ev_bit(prefix, period, i)),
            _ => None,
        }
    }

    /// `{ q : alpha*q + beta ∈ self }`, classified so that exact and
    /// eventual equality are decidable.
    pub fn restrict(&self, alpha: u64, beta: u64) -> Restricted {
        assert!(alpha >= 1);
        match self {
            SetSpec::Finite(v) => Restricted::from_finite(
                v.iter()
                    .filter(|&&n| n >= beta && (n - beta).is_multiple_of(alpha))
                    .map(|&n| (n - beta) / alpha),
            ),
            SetSpec::EvPeriodic { prefix, period } => {
                let pre = prefix.len() as u64;
                let q0 = if beta >= pre { 0 } else { (pre - beta).div_ceil(alpha) };
                let bit = |q: u64| ev_bit(prefix, period, alpha * q + beta);
                let p = (0..q0).map(bit).collect();
                let per = (q0..q0 + period.len() as u64).map(bit).collect();
                Restricted::periodic(p, per)
            }
            SetSpec::PrefixCode { prefix, period } => {
                restrict_prefix_code(prefix, period, alpha, beta)
            }
        }
    }
}

fn ev_bit(prefix: &[bool], period: &[bool], n: u64) -> bool {
    let pre = prefix.len() as u64;
    if n < pre {
        prefix[n as usize]
    } else {
        period[((n - pre) % period.len() as u64) as usize]
    }
}

fn restrict_prefix_code(prefix: &[bool], period: &[bool], alpha: u64, beta: u64) -> Restricted {
    let pre = prefix.len();
    let bstate = |k: usize| if k < pre { k } else { pre + (k - pre) % period.len() };
    let a = alpha as u128;
    let target = beta as u128 % a;
    // state: (code mod alpha, branch position); code(s·b) = 2 code(s) + 1 + b
    let mut seen: HashMap<(u128, usize), usize> = HashMap::new();
    let mut codes: Vec<Option<u128>> = Vec::new();
    let mut residues: Vec<u128> = Vec::new();
    let mut code: Option<u128> = Some(0);
    let mut residue: u128 = 0;
    let mut k = 0usize;
    let cycle_start = loop {
        let st = (residue, bstate(k));
        if let Some(&first) = seen.get(&st) {
            break first;
        }
        seen.insert(st, k);
        codes.push(code);
        residues.push(residue);
        let b = ev_bit(prefix, period, k as u64) as u128;
        code = code.and_then(|c| c.checked_mul(2)).and_then(|c| c.checked_add(1 + b));
        residue = (2 * residue + 1 + b) % a;
        k += 1;
    };
    if residues[cycle_start..].contains(&target) {
        return Restricted::Sparse {
            branch: canonical_bits(prefix.to_vec(), period.to_vec()),
        };
    }
    Restricted::from_finite(codes.iter().zip(&residues).filter_map(|(c, &r)| {
        let c = (*c)?;
        (r == target && c >= beta as u128)
            .then(|| u64::try_from((c - beta as u128) / a).ok())
            .flatten()
    }))
}

/// Minimal period, then shortest prefix.
fn canonical_bits(mut prefix: Vec<bool>, mut period: Vec<bool>) -> (Vec<bool>, Vec<bool>) {
    let n = period.len();
    for d in 1..=n {
        if n.is_multiple_of(d) && (0..n).all(|i| period[i] == period[i % d]) {
            period.truncate(d);
            break;
        }
    }
    while let Some(&last) = prefix.last() {
        if last != *period.last().unwrap() {
            break;
        }
        prefix.pop();
        period.rotate_right(1);
    }
    (prefix, period)
}

/// A subset of ℕ restricted to an arithmetic progression and reindexed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Restricted {
    /// Eventually periodic, canonical (minimal period, shortest prefix).
    Periodic { prefix: Vec<bool>, period: Vec<bool> },
    /// Infinite with density zero: the set of codes of a branch, thinned by
    /// the progression. Two of these over the same progression coincide iff
    /// their branches do.
    Sparse { branch: (Vec<bool>, Vec<bool>) },
}

impl Restricted {
    pub fn all() -> Restricted {
        Restricted::Periodic {
            prefix: vec![],
            period: vec![true],
        }
    }

    pub fn none() -> Restricted {
        Restricted::Periodic {
            prefix: vec![],
            period: vec![false],
        }
    }

    fn periodic(prefix: Vec<bool>, period: Vec<bool>) -> Restricted {
        let (prefix, period) = canonical_bits(prefix, period);
        Restricted::Periodic { prefix, period }
    }

    fn from_finite(qs: impl Iterator<Item = u64>) -> Restricted {
        let qs: Vec<u64> = qs.collect();
        let len = qs.iter().max().map_or(0, |&m| m as usize + 1);
        let mut prefix = vec![false; len];
        for q in qs {
            prefix[q as usize] = true;
        }
        Restricted::periodic(prefix, vec![false])
    }

    pub fn contains(&self, q: u64) -> Option<bool> {
        match self {
            Restricted::Periodic { prefix, period } => Some(ev_bit(prefix, period, q)),
            Restricted::Sparse { .. } => None,
        }
    }

    pub fn exact_eq(&self, other: &Restricted) -> bool {
        self == other
    }

    pub fn eventually_eq(&self, other: &Restricted) -> bool {
        match (self, other) {
            (
                Restricted::Periodic {
                    prefix: p1,
                    period: q1,
                },
                Restricted::Periodic {
                    prefix: p2,
                    period: q2,
                },
            ) => {
                let start = p1.len().max(p2.len()) as u64;
                let span = lcm(q1.len() as u64, q2.len() as u64);
                (start..start + span).all(|q| ev_bit(p1, q1, q) == ev_bit(p2, q2, q))
            }
            (Restricted::Sparse { branch: b1 }, Restricted::Sparse { branch: b2 }) => b1 == b2,
            _ => false,
        }
    }

    /// Index after which the set is constant (all or nothing), if any.
    pub fn eventually_constant(&self) -> Option<(u64, bool)> {
        match self {
            Restricted::Periodic { prefix, period } if period.len() == 1 => {
                Some((prefix.len() as u64, period[0]))
            }
            _ => None,
        }
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// `int("1" + bits) - 1`.
pub fn code(bits: &[bool]) -> u128 {
    bits.iter().fold(0u128, |c, &b| 2 * c + 1 + b as u128)
}

fn bits_str(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

impl fmt::Display for SetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetSpec::Finite(v) => {
                f.write_str("fin{")?;
                for (i, n) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{n}")?;
                }
                f.write_str("}")
            }
            SetSpec::EvPeriodic { prefix, period } => {
                write!(f, "eper(\"{}\",\"{}\")", bits_str(prefix), bits_str(period))
            }
            SetSpec::PrefixCode { prefix, period } => {
                write!(f, "pcode(\"{}\",\"{}\")", bits_str(prefix), bits_str(period))
            }
        }
    }
}
