//! Finite-support integer sequences, their reductions mod `p`, and the
//! coordinate-sum functionals that separate subsets.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::ops::Add;

use crate::error::{Error, Result};

/// An element of `∏_ω Z` with finitely many nonzero coordinates.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct IntSeq {
    entries: BTreeMap<u64, i64>,
}

impl IntSeq {
    pub fn zero() -> IntSeq {
        IntSeq::default()
    }

    /// The basis vector `e_i`.
    pub fn basis(i: u64) -> IntSeq {
        IntSeq::from_pairs([(i, 1)])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u64, i64)>) -> IntSeq {
        let mut v = IntSeq::zero();
        for (i, x) in pairs {
            *v.entries.entry(i).or_insert(0) += x;
        }
        v.entries.retain(|_, x| *x != 0);
        v
    }

    pub fn get(&self, i: u64) -> i64 {
        self.entries.get(&i).copied().unwrap_or(0)
    }

    pub fn scale(&self, c: i64) -> IntSeq {
        IntSeq::from_pairs(self.entries.iter().map(|(&i, &x)| (i, c * x)))
    }

    /// The coordinates below `n`.
    pub fn truncate(&self, n: u64) -> IntSeq {
        IntSeq {
            entries: self.entries.range(..n).map(|(&i, &x)| (i, x)).collect(),
        }
    }

    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.keys().copied()
    }
}

impl Add for &IntSeq {
    type Output = IntSeq;

    fn add(self, other: &IntSeq) -> IntSeq {
        IntSeq::from_pairs(self.entries.iter().chain(&other.entries).map(|(&i, &x)| (i, x)))
    }
}

/// An element of `∏_ω Z/p` with finite support.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModSeq {
    p: u64,
    entries: BTreeMap<u64, u64>,
}

impl ModSeq {
    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn get(&self, i: u64) -> u64 {
        self.entries.get(&i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

impl Add for &ModSeq {
    type Output = ModSeq;

    fn add(self, other: &ModSeq) -> ModSeq {
        assert_eq!(self.p, other.p, "moduli differ");
        let mut entries = self.entries.clone();
        for (&i, &x) in &other.entries {
            *entries.entry(i).or_insert(0) += x;
        }
        entries.values_mut().for_each(|x| *x %= self.p);
        entries.retain(|_, x| *x != 0);
        ModSeq { p: self.p, entries }
    }
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Entrywise reduction mod a prime.
pub fn mod_p(v: &IntSeq, p: u64) -> Result<ModSeq> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let entries = v
        .entries
        .iter()
        .map(|(&i, &x)| (i, x.rem_euclid(p as i64) as u64))
        .filter(|&(_, x)| x != 0)
        .collect();
    Ok(ModSeq { p, entries })
}

/// The sum of the coordinates indexed by `scal`, mod `p`.
pub fn sum_functional(scal: &BTreeSet<u64>, v: &ModSeq) -> u64 {
    scal.iter().map(|&i| v.get(i)).sum::<u64>() % v.p
}

/// Row `s` holds the values of the `s`-th subset's functional (bit `i` of
/// `s` selects index `i`) on `e_0, ..., e_{k-1}`.
pub fn evaluation_matrix(k: u32, p: u64) -> Result<Vec<Vec<u64>>> {
    let basis: Vec<ModSeq> = (0..k as u64).map(|i| mod_p(&IntSeq::basis(i), p)).collect::<Result<_>>()?;
    Ok((0u64..1 << k)
        .map(|s| {
            let scal: BTreeSet<u64> = (0..k as u64).filter(|i| s >> i & 1 == 1).collect();
            basis.iter().map(|e| sum_functional(&scal, e)).collect()
        })
        .collect())
}

/// The number of distinct rows of the evaluation matrix.
pub fn distinct_homs_demo(k: u32, p: u64) -> Result<usize> {
    let rows = evaluation_matrix(k, p)?;
    Ok(rows.into_iter().collect::<HashSet<_>>().len())
}

impl fmt::Display for IntSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|(i, x)| format!("{x}·e{i}")).collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl fmt::Display for ModSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|(i, x)| format!("{x}·e{i}")).collect();
        if parts.is_empty() {
            write!(f, "0 (mod {})", self.p)
        } else {
            write!(f, "{} (mod {})", parts.join(" + "), self.p)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reductions() {
        let v = IntSeq::from_pairs([(0, 3), (1, 2)]);
        assert_eq!(mod_p(&v, 2).unwrap(), mod_p(&IntSeq::basis(0), 2).unwrap());
        assert!(mod_p(&IntSeq::zero(), 5).unwrap().is_zero());
        for p in [2, 3, 5, 7] {
            assert!(mod_p(&IntSeq::from_pairs([(5, p as i64)]), p).unwrap().is_zero());
        }
        assert_eq!(mod_p(&IntSeq::from_pairs([(1, -1)]), 3).unwrap().get(1), 2);
        assert!(matches!(mod_p(&v, 4), Err(Error::NotPrime(4))));
        assert!(mod_p(&v, 1).is_err());
    }

    #[test]
    fn sums() {
        let v = mod_p(&IntSeq::from_pairs([(0, 1), (1, 1)]), 2).unwrap();
        assert_eq!(sum_functional(&BTreeSet::from([0, 2]), &v), 1);
        assert_eq!(sum_functional(&BTreeSet::new(), &v), 0);
        let e1 = mod_p(&IntSeq::basis(1), 3).unwrap();
        assert_eq!(sum_functional(&BTreeSet::from([1]), &e1), 1);
    }

    #[test]
    fn demo_counts() {
        assert_eq!(distinct_homs_demo(3, 2).unwrap(), 8);
        assert_eq!(distinct_homs_demo(0, 2).unwrap(), 1);
        assert_eq!(distinct_homs_demo(10, 2).unwrap(), 1024);
        assert!(distinct_homs_demo(3, 6).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(IntSeq::from_pairs([(0, 3), (2, -1)]).to_string(), "3·e0 + -1·e2");
        assert_eq!(mod_p(&IntSeq::zero(), 3).unwrap().to_string(), "0 (mod 3)");
    }
}
