//! Letter streams of order type ω (or ω* when traversed backwards).

use std::fmt;

use super::index::IndexFn;
use super::setspec::{lcm, Restricted, SetSpec};
use crate::error::{Error, Result};
use crate::freegroup::{Family, Generator, Letter, Sign};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FamSpec {
    A,
    B,
    C,
    /// `b` if the letter's index lies in the set, `c` otherwise.
    Sel(SetSpec),
}

impl FamSpec {
    pub fn of(family: Family) -> FamSpec {
        match family {
            Family::A => FamSpec::A,
            Family::B => FamSpec::B,
            Family::C => FamSpec::C,
        }
    }

    pub fn family_at(&self, index: u64) -> Family {
        match self {
            FamSpec::A => Family::A,
            FamSpec::B => Family::B,
            FamSpec::C => Family::C,
            FamSpec::Sel(s) => {
                if s.contains(index) {
                    Family::B
                } else {
                    Family::C
                }
            }
        }
    }

    pub fn can_emit(&self, family: Family) -> bool {
        match self {
            FamSpec::Sel(_) => family != Family::A,
            f => f.family_at(0) == family,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Entry {
    pub fam: FamSpec,
    pub index: IndexFn,
    pub sign: Sign,
}

impl Entry {
    pub fn new(fam: FamSpec, index: IndexFn, sign: Sign) -> Entry {
        Entry { fam, index, sign }
    }

    pub fn affine(family: Family, alpha: u64, beta: u64, sign: Sign) -> Entry {
        Entry::new(FamSpec::of(family), IndexFn::affine(alpha, beta), sign)
    }

    pub fn sel(set: SetSpec, sign: Sign) -> Entry {
        Entry::new(FamSpec::Sel(set), IndexFn::affine(1, 0), sign)
    }

    pub fn letter_at(&self, k: u64) -> Letter {
        let index = self.index.at(k);
        Letter::new(self.fam.family_at(index), index, self.sign)
    }

    fn validate(&self) -> Result<()> {
        let (q2, q1, q0) = self.index.raw();
        IndexFn::from_raw(q2, q1, q0)?;
        if !self.index.is_increasing() {
            return Err(Error::InvalidSchema(format!(
                "index {} must be strictly increasing",
                self.index
            )));
        }
        if matches!(self.fam, FamSpec::Sel(_)) && self.index.as_affine().is_none() {
            return Err(Error::InvalidSchema("selector entries need an affine index".into()));
        }
        Ok(())
    }

    /// Membership class of the emitted family along `k ↦ index(k)`.
    fn class(&self) -> FamClass {
        match &self.fam {
            FamSpec::A => FamClass::A,
            FamSpec::B => FamClass::Bc(Restricted::all()),
            FamSpec::C => FamClass::Bc(Restricted::none()),
            FamSpec::Sel(s) => {
                let (alpha, beta) = self.index.as_affine().expect("selector index is affine");
                FamClass::Bc(s.restrict(alpha, beta))
            }
        }
    }
}

enum FamClass {
    A,
    /// the set of parameters at which the family is `b`
    Bc(Restricted),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

/// A stream: the letters `entries[j]` at step `k`, for `k = k0, k0+1, ...`,
/// starting at entry `offset` of step `k0`.
///
/// A backward schema denotes the formal inverse of the forward one: same
/// letters in reverse order with signs flipped.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Schema {
    pub direction: Direction,
    pub k0: u64,
    pub offset: usize,
    pub entries: Vec<Entry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Agreement {
    Exact,
    Eventual,
}

impl Schema {
    pub fn new(direction: Direction, k0: u64, offset: usize, entries: Vec<Entry>) -> Result<Schema> {
        let s = Schema {
            direction,
            k0,
            offset,
            entries,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn forward(k0: u64, entries: Vec<Entry>) -> Result<Schema> {
        Schema::new(Direction::Forward, k0, 0, entries)
    }

    pub fn validate(&self) -> Result<()> {
        if self.entries.is_empty() {
            return Err(Error::InvalidSchema("no entries".into()));
        }
        if self.offset >= self.entries.len() {
            return Err(Error::InvalidSchema("entry offset out of range".into()));
        }
        self.entries.iter().try_for_each(Entry::validate)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn with_direction(&self, direction: Direction) -> Schema {
        Schema {
            direction,
            ..self.clone()
        }
    }

    pub fn inverse(&self) -> Schema {
        self.with_direction(self.direction.flip())
    }

    fn abs_pos(&self) -> u64 {
        self.k0 * self.len() as u64 + self.offset as u64
    }

    /// `(k, entry)` of forward position `t`.
    pub fn locate(&self, t: u64) -> (u64, usize) {
        let l = self.len() as u64;
        let abs = self.abs_pos() + t;
        (abs / l, (abs % l) as usize)
    }

    fn at_abs(&self, abs: u64) -> Letter {
        let l = self.len() as u64;
        self.entries[(abs % l) as usize].letter_at(abs / l)
    }

    /// Letter at position `t` of the forward traversal (ignores direction).
    pub fn letter_at(&self, t: u64) -> Letter {
        self.at_abs(self.abs_pos() + t)
    }

    /// First `n` letters of the forward traversal.
    pub fn prefix(&self, n: u64) -> Vec<Letter> {
        (0..n).map(|t| self.letter_at(t)).collect()
    }

    pub fn advanced(&self, n: u64) -> Schema {
        let l = self.len() as u64;
        let abs = self.abs_pos() + n;
        Schema {
            k0: abs / l,
            offset: (abs % l) as usize,
            ..self.clone()
        }
    }

    /// The schema with one more letter in front, if the pattern extends
    /// backwards with a natural index.
    pub fn stepped_back(&self) -> Option<Schema> {
        if self.offset > 0 {
            return Some(Schema {
                offset: self.offset - 1,
                ..self.clone()
            });
        }
        if self.k0 > 0 {
            return Some(Schema {
                k0: self.k0 - 1,
                offset: self.len() - 1,
                ..self.clone()
            });
        }
        let last = self.entries.last().unwrap();
        let shifted = last.index.shift(-1);
        let (q2, q1, q0) = shifted.raw();
        IndexFn::from_raw(q2, q1, q0).ok()?;
        if !shifted.is_increasing() {
            return None;
        }
        let mut entries = Vec::with_capacity(self.len());
        entries.push(Entry {
            index: shifted,
            ..last.clone()
        });
        entries.extend_from_slice(&self.entries[..self.len() - 1]);
        Some(Schema {
            direction: self.direction,
            k0: 0,
            offset: 0,
            entries,
        })
    }

    /// The same sequence with `factor` steps fused into one.
    pub fn unrolled(&self, factor: u64) -> Schema {
        let mut entries = Vec::with_capacity(self.len() * factor as usize);
        for r in 0..factor {
            for e in &self.entries {
                entries.push(Entry {
                    index: e.index.substitute(factor, r as i128),
                    ..e.clone()
                });
            }
        }
        let l = entries.len() as u64;
        let abs = self.abs_pos();
        Schema {
            direction: self.direction,
            k0: abs / l,
            offset: (abs % l) as usize,
            entries,
        }
    }

    /// Forward positions `t` (relative to the cursor) carrying `g^{±1}`,
    /// ascending.
    pub fn positions_of(&self, g: Generator) -> Vec<u64> {
        let l = self.len() as u64;
        let start = self.abs_pos();
        let mut out: Vec<u64> = self
            .entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.fam.can_emit(g.family))
            .filter_map(|(j, e)| {
                let k = e.index.solve(g.index)?;
                let abs = k * l + j as u64;
                (abs >= start && e.fam.family_at(g.index) == g.family).then(|| abs - start)
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Entry `start mod L` viewed along `q ↦ start + q·period`; returns
    /// the sign, index function in `q`, and family class.
    fn residue(&self, start: u64, period: u64) -> (Sign, IndexFn, FamClass) {
        let l = self.len() as u64;
        let e = &self.entries[(start % l) as usize];
        let idx = e.index.substitute(period / l, (start / l) as i128);
        let unrolled = Entry {
            index: idx,
            ..e.clone()
        };
        (e.sign, idx, unrolled.class())
    }

    /// Whether the forward traversals agree from `p1` and `p2` on.
    pub fn agrees_with(&self, p1: u64, other: &Schema, p2: u64, mode: Agreement) -> bool {
        let period = lcm(self.len() as u64, other.len() as u64);
        let (a1, a2) = (self.abs_pos() + p1, other.abs_pos() + p2);
        (0..period).all(|r| {
            let (s1, i1, c1) = self.residue(a1 + r, period);
            let (s2, i2, c2) = other.residue(a2 + r, period);
            s1 == s2
                && i1 == i2
                && match (c1, c2) {
                    (FamClass::A, FamClass::A) => true,
                    (FamClass::Bc(x), FamClass::Bc(y)) => match mode {
                        Agreement::Exact => x.exact_eq(&y),
                        Agreement::Eventual => x.eventually_eq(&y),
                    },
                    _ => false,
                }
        })
    }

    /// Same letter sequence from the cursor on.
    pub fn same_sequence(&self, other: &Schema) -> bool {
        self.agrees_with(0, other, 0, Agreement::Exact)
    }

    /// Earliest positions `(p1, p2)` from which the forward traversals agree
    /// exactly, if the two streams have the same tail.
    pub fn tail_alignment(&self, other: &Schema) -> Option<(u64, u64)> {
        let mut shifts: Vec<i128> = Vec::new();
        let probe = self.letter_at(0);
        for t in other.positions_of_loose(probe) {
            shifts.push(t as i128);
        }
        let probe = other.letter_at(0);
        for t in self.positions_of_loose(probe) {
            shifts.push(-(t as i128));
        }
        shifts.sort_unstable();
        shifts.dedup();
        for d in shifts {
            let base = if d < 0 { (-d) as u64 } else { 0 };
            let at = |p: u64| (p, (p as i128 + d) as u64);
            let (b1, b2) = at(base);
            if !self.agrees_with(b1, other, b2, Agreement::Eventual) {
                continue;
            }
            let exact = |p: u64| {
                let (x, y) = at(p);
                self.agrees_with(x, other, y, Agreement::Exact)
            };
            // exact agreement is monotone in p
            let mut step = 1u64;
            let mut lo = base;
            let mut hi = base;
            while !exact(hi) {
                lo = hi + 1;
                hi = base + step;
                step *= 2;
            }
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                if exact(mid) {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            return Some(at(lo));
        }
        None
    }

    /// Positions whose letter matches `l` in sign and index, with the family
    /// only required to be compatible (`a` vs `b`/`c`).
    fn positions_of_loose(&self, l: Letter) -> Vec<u64> {
        let lcount = self.len() as u64;
        let start = self.abs_pos();
        let mut out: Vec<u64> = self
            .entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.sign == l.sign && (e.fam == FamSpec::A) == (l.family == Family::A))
            .filter_map(|(j, e)| {
                let k = e.index.solve(l.index)?;
                let abs = k * lcount + j as u64;
                (abs >= start).then(|| abs - start)
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn is_tail_equivalent(&self, other: &Schema) -> bool {
        self.tail_alignment(other).is_some()
    }

    /// Smallest index carried by any letter from the cursor on.
    pub fn min_index(&self) -> u64 {
        (0..self.len() as u64).map(|t| self.letter_at(t).index).min().unwrap()
    }

    pub fn min_rank(&self) -> u64 {
        // b/c choice of a selector entry shifts the rank by at most one
        (0..self.len() as u64).map(|t| self.letter_at(t).rank()).min().unwrap()
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.fam {
            FamSpec::Sel(s) => write!(f, "sel({s})({})", self.index)?,
            fam => write!(f, "{}({})", fam.family_at(0).symbol(), self.index)?,
        }
        if self.sign == Sign::Neg {
            f.write_str("^-1")?;
        }
        Ok(())
    }
}

pub(crate) fn fmt_entries(entries: &[Entry], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    f.write_str("{")?;
    for (i, e) in entries.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{e}")?;
    }
    f.write_str("}")
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = match self.direction {
            Direction::Forward => '+',
            Direction::Backward => '-',
        };
        write!(f, "st({d},{}", self.k0)?;
        if self.offset > 0 {
            write!(f, ":{}", self.offset)?;
        }
        f.write_str(",")?;
        fmt_entries(&self.entries, f)?;
        f.write_str(")")
    }
}
