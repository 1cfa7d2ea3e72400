//! Finite words in the free group over the indexed alphabet
//! `{a_n, b_n, c_n}`.
//!
//! Everything here is ordinary free-group combinatorics: stack-based free
//! reduction, cyclic reduction, and the prefix/conjugator/suffix split used
//! to show that adjoining a word outside a subgroup generated by letters
//! gives a free factor.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    A,
    B,
    C,
}

impl Family {
    pub fn symbol(self) -> char {
        match self {
            Family::A => 'a',
            Family::B => 'b',
            Family::C => 'c',
        }
    }

    pub fn from_symbol(c: char) -> Option<Family> {
        match c {
            'a' => Some(Family::A),
            'b' => Some(Family::B),
            'c' => Some(Family::C),
            _ => None,
        }
    }

    fn rank_offset(self) -> u64 {
        match self {
            Family::A => 0,
            Family::B => 1,
            Family::C => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }
}

/// A letter without its exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub family: Family,
    pub index: u64,
}

impl Generator {
    pub fn new(family: Family, index: u64) -> Self {
        Generator { family, index }
    }

    pub fn a(index: u64) -> Self {
        Generator::new(Family::A, index)
    }

    /// Position in the interleaved order `a_0, b_0, c_0, a_1, ...`.
    pub fn rank(self) -> u64 {
        3 * self.index + self.family.rank_offset()
    }

    pub fn from_rank(rank: u64) -> Self {
        let family = match rank % 3 {
            0 => Family::A,
            1 => Family::B,
            _ => Family::C,
        };
        Generator::new(family, rank / 3)
    }

    pub fn letter(self, sign: Sign) -> Letter {
        Letter {
            family: self.family,
            index: self.index,
            sign,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.symbol(), self.index)
    }
}

/// All generators of rank `< n`.
pub fn generators_below_rank(n: u64) -> BTreeSet<Generator> {
    (0..n).map(Generator::from_rank).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub family: Family,
    pub index: u64,
    pub sign: Sign,
}

impl Letter {
    pub fn new(family: Family, index: u64, sign: Sign) -> Self {
        Letter {
            family,
            index,
            sign,
        }
    }

    pub fn pos(family: Family, index: u64) -> Self {
        Letter::new(family, index, Sign::Pos)
    }

    pub fn neg(family: Family, index: u64) -> Self {
        Letter::new(family, index, Sign::Neg)
    }

    pub fn generator(self) -> Generator {
        Generator::new(self.family, self.index)
    }

    pub fn inverse(self) -> Letter {
        Letter {
            sign: self.sign.flip(),
            ..self
        }
    }

    pub fn is_inverse_of(self, other: Letter) -> bool {
        self.family == other.family && self.index == other.index && self.sign != other.sign
    }

    pub fn rank(self) -> u64 {
        self.generator().rank()
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.symbol(), self.index)?;
        if self.sign == Sign::Neg {
            f.write_str("^-1")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FreeWord {
    letters: Vec<Letter>,
}

impl FreeWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        FreeWord { letters }
    }

    pub fn empty() -> Self {
        FreeWord::default()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord::new(self.letters.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        FreeWord::new(letters)
    }

    /// Free reduction in one left-to-right pass over a stack.
    pub fn reduced(&self) -> FreeWord {
        let mut stack: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            match stack.last() {
                Some(&top) if top.is_inverse_of(l) => {
                    stack.pop();
                }
                _ => stack.push(l),
            }
        }
        FreeWord::new(stack)
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| !w[0].is_inverse_of(w[1]))
    }

    /// Splits a reduced word as `conjugator · core · conjugator⁻¹` with a
    /// cyclically reduced core.
    pub fn cyclic_reduce(&self) -> (FreeWord, FreeWord) {
        let n = self.letters.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.letters[k].is_inverse_of(self.letters[n - 1 - k]) {
            k += 1;
        }
        (
            FreeWord::new(self.letters[..k].to_vec()),
            FreeWord::new(self.letters[k..n - k].to_vec()),
        )
    }

    pub fn generators(&self) -> BTreeSet<Generator> {
        self.letters.iter().map(|l| l.generator()).collect()
    }

    /// Keeps the letters whose generator lies in `keep`, then reduces.
    pub fn project(&self, keep: &BTreeSet<Generator>) -> FreeWord {
        FreeWord::new(
            self.letters
                .iter()
                .copied()
                .filter(|l| keep.contains(&l.generator()))
                .collect(),
        )
        .reduced()
    }

    pub fn split_for_adjunction(&self, subset: &BTreeSet<Generator>) -> Result<AdjunctionSplit> {
        if !self.is_reduced() {
            return Err(Error::NotReduced);
        }
        let inside = |l: &Letter| subset.contains(&l.generator());
        if self.letters.iter().all(inside) {
            return Err(Error::InsideSubset);
        }
        let start = self.letters.iter().take_while(|l| inside(l)).count();
        let end = self.letters.len() - self.letters.iter().rev().take_while(|l| inside(l)).count();
        let middle = FreeWord::new(self.letters[start..end].to_vec());
        let (w1, w2) = middle.cyclic_reduce();
        Ok(AdjunctionSplit {
            w0: FreeWord::new(self.letters[..start].to_vec()),
            w1,
            w2,
            w3: FreeWord::new(self.letters[end..].to_vec()),
        })
    }

    /// Brute-force check that `t ↦ self, y ↦ y` is injective on all
    /// reduced words of `F({t} ∪ subset)` of length at most `max_len`.
    pub fn adjunction_free_oracle(&self, subset: &BTreeSet<Generator>, max_len: usize) -> Result<bool> {
        if !self.is_reduced() {
            return Err(Error::NotReduced);
        }
        if self.letters.iter().all(|l| subset.contains(&l.generator())) {
            return Err(Error::InsideSubset);
        }
        // generator 0 is t, the rest are the subset in order
        let ys: Vec<Generator> = subset.iter().copied().collect();
        let images: Vec<FreeWord> = std::iter::once(self.clone())
            .chain(ys.iter().map(|&y| FreeWord::new(vec![y.letter(Sign::Pos)])))
            .collect();
        let mut seen: HashMap<FreeWord, Vec<(usize, Sign)>> = HashMap::new();
        for word in reduced_words(images.len(), max_len) {
            let mut image = Vec::new();
            for &(g, s) in &word {
                match s {
                    Sign::Pos => image.extend_from_slice(images[g].letters()),
                    Sign::Neg => image.extend(images[g].inverse().into_letters()),
                }
            }
            let image = FreeWord::new(image).reduced();
            if let Some(other) = seen.insert(image, word.clone()) {
                if other != word {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("]")
    }
}

impl FromIterator<Letter> for FreeWord {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        FreeWord::new(iter.into_iter().collect())
    }
}

/// `w = w0 · w1 · w2 · w1⁻¹ · w3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjunctionSplit {
    pub w0: FreeWord,
    pub w1: FreeWord,
    pub w2: FreeWord,
    pub w3: FreeWord,
}

impl AdjunctionSplit {
    pub fn recompose(&self) -> FreeWord {
        self.w0
            .concat(&self.w1)
            .concat(&self.w2)
            .concat(&self.w1.inverse())
            .concat(&self.w3)
    }
}

/// Every reduced word of length `<= max_len` over `n_gens` abstract
/// generators, in shortlex order with `(generator, sign)` compared
/// lexicographically.
pub fn reduced_words(n_gens: usize, max_len: usize) -> Vec<Vec<(usize, Sign)>> {
    let symbols: Vec<(usize, Sign)> = (0..n_gens)
        .flat_map(|g| [(g, Sign::Pos), (g, Sign::Neg)])
        .collect();
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<(usize, Sign)>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &(g, s) in &symbols {
                if let Some(&(lg, ls)) = w.last() {
                    if lg == g && ls != s {
                        continue;
                    }
                }
                let mut v = w.clone();
                v.push((g, s));
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(i: u64) -> Letter {
        Letter::pos(Family::A, i)
    }

    fn ai(i: u64) -> Letter {
        Letter::neg(Family::A, i)
    }

    fn w(ls: &[Letter]) -> FreeWord {
        FreeWord::new(ls.to_vec())
    }

    // repeated-scan: delete the first adjacent inverse pair until none is left
    fn naive_reduce(word: &FreeWord) -> FreeWord {
        let mut v = word.letters().to_vec();
        'outer: loop {
            for i in 0..v.len().saturating_sub(1) {
                if v[i].is_inverse_of(v[i + 1]) {
                    v.drain(i..i + 2);
                    continue 'outer;
                }
            }
            return FreeWord::new(v);
        }
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(w(&[a(0), a(1), ai(1)]).reduced(), w(&[a(0)]));
        assert_eq!(FreeWord::empty().reduced(), FreeWord::empty());
        let x = w(&[a(0), a(1), ai(0), a(0), ai(1), ai(0)]);
        assert_eq!(naive_reduce(&x), FreeWord::empty());
        assert_eq!(x.reduced(), FreeWord::empty());
    }

    #[test]
    fn cyclic_reduce_examples() {
        let (c, core) = w(&[a(0), a(1), ai(0)]).cyclic_reduce();
        assert_eq!((c, core), (w(&[a(0)]), w(&[a(1)])));
        let (c, core) = w(&[a(1)]).cyclic_reduce();
        assert_eq!((c, core), (FreeWord::empty(), w(&[a(1)])));
        let (c, core) = w(&[a(0), a(0), a(1), ai(0), ai(0)]).cyclic_reduce();
        assert_eq!((c, core), (w(&[a(0), a(0)]), w(&[a(1)])));
    }

    #[test]
    fn split_examples() {
        let y: BTreeSet<Generator> = [Generator::a(0)].into();
        // t = a5
        let s = w(&[a(0), a(5), ai(0)]).split_for_adjunction(&y).unwrap();
        assert_eq!(s.w0, w(&[a(0)]));
        assert!(s.w1.is_empty());
        assert_eq!(s.w2, w(&[a(5)]));
        assert_eq!(s.w3, w(&[ai(0)]));

        let s = w(&[a(5)]).split_for_adjunction(&y).unwrap();
        assert_eq!(s.w2, w(&[a(5)]));
        assert!(s.w0.is_empty() && s.w1.is_empty() && s.w3.is_empty());

        let y2: BTreeSet<Generator> = [Generator::a(0), Generator::a(1)].into();
        let s = w(&[a(0), a(1), a(5), a(1), ai(5)]).split_for_adjunction(&y2).unwrap();
        assert_eq!(s.w0, w(&[a(0), a(1)]));
        assert_eq!(s.w1, w(&[a(5)]));
        assert_eq!(s.w2, w(&[a(1)]));
        assert!(s.w3.is_empty());

        assert_eq!(w(&[a(0)]).split_for_adjunction(&y), Err(Error::InsideSubset));
        assert_eq!(w(&[a(5), ai(5)]).split_for_adjunction(&y), Err(Error::NotReduced));
    }

    #[test]
    fn adjunction_oracle_examples() {
        let y: BTreeSet<Generator> = [Generator::a(0)].into();
        assert_eq!(w(&[a(5)]).adjunction_free_oracle(&y, 4), Ok(true));
        assert_eq!(w(&[a(0), a(5), ai(0)]).adjunction_free_oracle(&y, 4), Ok(true));
        assert_eq!(w(&[a(0)]).adjunction_free_oracle(&y, 1), Err(Error::InsideSubset));
        // a word inside a proper power subgroup is not free with Y adjoined
        // only when it lies in <Y>; t ↦ t^2 is still injective
        assert_eq!(w(&[a(5), a(5)]).adjunction_free_oracle(&y, 4), Ok(true));
    }

    #[test]
    fn reduced_word_counts() {
        // 2n(2n-1)^(k-1) words of length k
        let words = reduced_words(2, 3);
        assert_eq!(words.len(), 1 + 4 + 12 + 36);
    }

    #[test]
    fn exhaustive_inverse_cancellation() {
        let gens = [
            Generator::a(0),
            Generator::a(1),
            Generator::new(Family::B, 0),
            Generator::new(Family::B, 1),
        ];
        for word in reduced_words(4, 5) {
            let fw: FreeWord = word.iter().map(|&(g, s)| gens[g].letter(s)).collect();
            assert!(fw.concat(&fw.inverse()).reduced().is_empty());
        }
    }

    #[test]
    fn rank_roundtrip() {
        for r in 0..30 {
            assert_eq!(Generator::from_rank(r).rank(), r);
        }
        assert_eq!(Generator::new(Family::C, 2).rank(), 8);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn letter() -> impl Strategy<Value = Letter> {
            (0..3u8, 0..3u64, any::<bool>()).prop_map(|(f, i, s)| {
                let fam = [Family::A, Family::B, Family::C][f as usize];
                Letter::new(fam, i, if s { Sign::Pos } else { Sign::Neg })
            })
        }

        proptest! {
            #[test]
            fn stack_matches_naive(ls in proptest::collection::vec(letter(), 0..14)) {
                let x = FreeWord::new(ls);
                let r = x.reduced();
                prop_assert_eq!(&r, &naive_reduce(&x));
                prop_assert!(r.len() <= x.len());
                prop_assert_eq!(r.reduced(), r);
            }

            #[test]
            fn split_recomposes(ls in proptest::collection::vec(letter(), 1..12)) {
                let x = FreeWord::new(ls).reduced();
                let y: BTreeSet<Generator> = [Generator::a(0), Generator::a(1)].into();
                if let Ok(s) = x.split_for_adjunction(&y) {
                    prop_assert_eq!(s.recompose(), x);
                    prop_assert!(!s.w2.is_empty());
                    let (c, _) = s.w2.cyclic_reduce();
                    prop_assert!(c.is_empty());
                }
            }
        }
    }
}
