//! Infinitary words built from finitely many finite blocks and letter
//! streams of order type ω or ω*.

use std::collections::BTreeSet;
use std::fmt;

pub mod index;
pub(crate) mod parse;
pub mod random;
mod reduce;
pub mod schema;
pub mod setspec;

pub use index::{pair, unpair, IndexFn};
pub use parse::{parse_set, parse_word, parse_word_with, Resolver};
pub use reduce::{FourWaySplit, Strategy};
pub use schema::{Agreement, Direction, Entry, FamSpec, Schema};
pub use setspec::{Restricted, SetSpec};

use crate::error::{Error, Result};
use crate::freegroup::{generators_below_rank, Family, FreeWord, Generator, Letter};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Segment {
    Block(FreeWord),
    Stream(Schema),
}

/// Where a letter sits inside a word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Position {
    pub segment: usize,
    pub locator: Locator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Locator {
    Block(usize),
    Stream { k: u64, entry: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recode {
    Encode,
    Decode,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SchematicWord {
    segments: Vec<Segment>,
}

impl SchematicWord {
    pub fn empty() -> SchematicWord {
        SchematicWord::default()
    }

    /// The word with exactly these segments (no normalization).
    pub fn from_segments(segments: Vec<Segment>) -> SchematicWord {
        SchematicWord { segments }
    }

    pub fn block(w: FreeWord) -> SchematicWord {
        SchematicWord::from_segments(vec![Segment::Block(w)]).canonicalize()
    }

    pub fn letters(letters: Vec<Letter>) -> SchematicWord {
        SchematicWord::block(FreeWord::new(letters))
    }

    pub fn stream(s: Schema) -> SchematicWord {
        SchematicWord::from_segments(vec![Segment::Stream(s)])
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn into_segments(self) -> Vec<Segment> {
        self.segments
    }

    pub fn is_empty(&self) -> bool {
        self.segments
            .iter()
            .all(|s| matches!(s, Segment::Block(b) if b.is_empty()))
    }

    pub fn is_finite(&self) -> bool {
        self.segments.iter().all(|s| matches!(s, Segment::Block(_)))
    }

    pub fn streams(&self) -> impl Iterator<Item = &Schema> {
        self.segments.iter().filter_map(|s| match s {
            Segment::Stream(x) => Some(x),
            Segment::Block(_) => None,
        })
    }

    /// The letters of a finite word.
    pub fn as_finite(&self) -> Option<FreeWord> {
        let mut out = Vec::new();
        for s in &self.segments {
            match s {
                Segment::Block(b) => out.extend_from_slice(b.letters()),
                Segment::Stream(_) => return None,
            }
        }
        Some(FreeWord::new(out))
    }

    /// Merges adjacent blocks and drops empty ones.
    pub(crate) fn merge_blocks(self) -> SchematicWord {
        let mut out: Vec<Segment> = Vec::with_capacity(self.segments.len());
        for seg in self.segments {
            match seg {
                Segment::Block(b) if b.is_empty() => {}
                Segment::Block(b) => match out.last_mut() {
                    Some(Segment::Block(prev)) => *prev = prev.concat(&b),
                    _ => out.push(Segment::Block(b)),
                },
                s => out.push(s),
            }
        }
        SchematicWord { segments: out }
    }

    /// The canonical ≡-representative: blocks merged, and block letters
    /// absorbed into neighbouring streams wherever the stream pattern
    /// continues with them.
    pub fn canonicalize(&self) -> SchematicWord {
        let mut segs = self.clone().merge_blocks().segments;
        for i in 0..segs.len() {
            // tail of a block into the head of the next forward stream
            if i + 1 < segs.len() {
                if let (Segment::Block(b), Segment::Stream(s)) = (&segs[i], &segs[i + 1]) {
                    if s.direction == Direction::Forward {
                        let mut letters = b.letters().to_vec();
                        let mut s = s.clone();
                        while let Some(&last) = letters.last() {
                            match s.stepped_back() {
                                Some(prev) if prev.letter_at(0) == last => {
                                    letters.pop();
                                    s = prev;
                                }
                                _ => break,
                            }
                        }
                        segs[i] = Segment::Block(FreeWord::new(letters));
                        segs[i + 1] = Segment::Stream(s);
                    }
                }
            }
        }
        for i in 1..segs.len() {
            if let (Segment::Stream(s), Segment::Block(b)) = (&segs[i - 1], &segs[i]) {
                if s.direction == Direction::Backward {
                    let letters = b.letters();
                    let mut s = s.clone();
                    let mut used = 0;
                    while used < letters.len() {
                        match s.stepped_back() {
                            Some(prev) if prev.letter_at(0).inverse() == letters[used] => {
                                used += 1;
                                s = prev;
                            }
                            _ => break,
                        }
                    }
                    segs[i] = Segment::Block(FreeWord::new(letters[used..].to_vec()));
                    segs[i - 1] = Segment::Stream(s);
                }
            }
        }
        SchematicWord { segments: segs }.merge_blocks()
    }

    pub fn concat(&self, other: &SchematicWord) -> SchematicWord {
        let mut segs = self.segments.clone();
        segs.extend(other.segments.iter().cloned());
        SchematicWord { segments: segs }.canonicalize()
    }

    pub fn concat_all<'a>(words: impl IntoIterator<Item = &'a SchematicWord>) -> SchematicWord {
        let segs = words.into_iter().flat_map(|w| w.segments.iter().cloned()).collect();
        SchematicWord { segments: segs }.canonicalize()
    }

    pub fn invert(&self) -> SchematicWord {
        let segs = self
            .segments
            .iter()
            .rev()
            .map(|s| match s {
                Segment::Block(b) => Segment::Block(b.inverse()),
                Segment::Stream(x) => Segment::Stream(x.inverse()),
            })
            .collect();
        SchematicWord { segments: segs }
    }

    /// Positions carrying `g^{±1}`, in the order of the word's domain.
    pub fn occurrences(&self, g: Generator) -> Vec<Position> {
        let mut out = Vec::new();
        for (i, seg) in self.segments.iter().enumerate() {
            match seg {
                Segment::Block(b) => out.extend(
                    b.letters()
                        .iter()
                        .enumerate()
                        .filter(|(_, l)| l.generator() == g)
                        .map(|(j, _)| Position {
                            segment: i,
                            locator: Locator::Block(j),
                        }),
                ),
                Segment::Stream(s) => {
                    let mut ps: Vec<Position> = s
                        .positions_of(g)
                        .into_iter()
                        .map(|t| {
                            let (k, entry) = s.locate(t);
                            Position {
                                segment: i,
                                locator: Locator::Stream { k, entry },
                            }
                        })
                        .collect();
                    if s.direction == Direction::Backward {
                        ps.reverse();
                    }
                    out.extend(ps);
                }
            }
        }
        out
    }

    /// The letters of a stream that belong to `keep`, in word order.
    fn stream_letters_in(s: &Schema, keep: &BTreeSet<Generator>) -> Vec<Letter> {
        let mut found: Vec<(u64, Letter)> = keep
            .iter()
            .flat_map(|&g| s.positions_of(g).into_iter().map(|t| (t, s.letter_at(t))))
            .collect();
        found.sort_unstable_by_key(|&(t, _)| t);
        match s.direction {
            Direction::Forward => found.into_iter().map(|(_, l)| l).collect(),
            Direction::Backward => found.into_iter().rev().map(|(_, l)| l.inverse()).collect(),
        }
    }

    /// All letters from `keep`, in order, without free reduction.
    pub fn restrict_to(&self, keep: &BTreeSet<Generator>) -> FreeWord {
        let mut out = Vec::new();
        for seg in &self.segments {
            match seg {
                Segment::Block(b) => out.extend(b.letters().iter().filter(|l| keep.contains(&l.generator()))),
                Segment::Stream(s) => out.extend(Self::stream_letters_in(s, keep)),
            }
        }
        FreeWord::new(out)
    }

    /// Projection to the free group on `keep`.
    pub fn project(&self, keep: &BTreeSet<Generator>) -> FreeWord {
        self.restrict_to(keep).reduced()
    }

    /// `p_n`: projection to the letters of rank `< n`.
    pub fn p(&self, n: u64) -> FreeWord {
        self.project(&generators_below_rank(n))
    }

    /// Whether the projections to rank `< n` agree.
    pub fn equal_up_to(&self, other: &SchematicWord, n: u64) -> bool {
        let keep = generators_below_rank(n);
        self.project(&keep) == other.project(&keep)
    }

    /// ≡: the two words are the same letter sequence up to order
    /// isomorphism of their domains.
    pub fn equiv(&self, other: &SchematicWord) -> bool {
        let a = components(&self.canonicalize());
        let b = components(&other.canonicalize());
        a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| x.equiv(y))
    }

    /// Deletes every `b`/`c` letter.
    pub fn ra_retract(&self) -> SchematicWord {
        let segs = self
            .segments
            .iter()
            .filter_map(|seg| match seg {
                Segment::Block(b) => Some(Segment::Block(
                    b.letters().iter().copied().filter(|l| l.family == Family::A).collect(),
                )),
                Segment::Stream(s) => filter_entries(s, |e| e.fam == FamSpec::A).map(Segment::Stream),
            })
            .collect();
        SchematicWord { segments: segs }.canonicalize()
    }

    /// Recoding between the `a`-alphabet and the tripled alphabet:
    /// `a_{3m} ↔ a_m`, `a_{3m+1} ↔ b_m`, `a_{3m+2} ↔ c_m`.
    pub fn gamma_recode(&self, dir: Recode) -> Result<SchematicWord> {
        let segs = self
            .segments
            .iter()
            .map(|seg| match seg {
                Segment::Block(b) => b
                    .letters()
                    .iter()
                    .map(|&l| recode_letter(l, dir))
                    .collect::<Result<FreeWord>>()
                    .map(Segment::Block),
                Segment::Stream(s) => recode_stream(s, dir).map(Segment::Stream),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SchematicWord { segments: segs }.canonicalize())
    }

    /// Cuts the word inside segment `seg`. A block or forward stream is cut
    /// after its first `t` letters; a backward stream before its last `t`.
    pub fn split_at(&self, seg: usize, t: u64) -> (SchematicWord, SchematicWord) {
        let mut left = self.segments[..seg].to_vec();
        let mut right = Vec::new();
        match &self.segments[seg] {
            Segment::Block(b) => {
                let t = (t as usize).min(b.len());
                left.push(Segment::Block(FreeWord::new(b.letters()[..t].to_vec())));
                right.push(Segment::Block(FreeWord::new(b.letters()[t..].to_vec())));
            }
            Segment::Stream(s) if s.direction == Direction::Forward => {
                left.push(Segment::Block(FreeWord::new(s.prefix(t))));
                right.push(Segment::Stream(s.advanced(t)));
            }
            Segment::Stream(s) => {
                left.push(Segment::Stream(s.advanced(t)));
                right.push(Segment::Block(FreeWord::new(inverse_letters(&s.prefix(t)))));
            }
        }
        right.extend(self.segments[seg + 1..].iter().cloned());
        (SchematicWord { segments: left }, SchematicWord { segments: right })
    }

    /// Least rank carried by any letter (`None` for the empty word).
    pub fn min_rank(&self) -> Option<u64> {
        self.segments
            .iter()
            .filter_map(|seg| match seg {
                Segment::Block(b) => b.letters().iter().map(|l| l.rank()).min(),
                Segment::Stream(s) => Some(s.min_rank()),
            })
            .min()
    }
}

/// Keeps the entries satisfying `keep`, preserving the cursor.
pub(crate) fn filter_entries(s: &Schema, keep: impl Fn(&Entry) -> bool) -> Option<Schema> {
    let kept: Vec<usize> = (0..s.len()).filter(|&j| keep(&s.entries[j])).collect();
    if kept.is_empty() {
        return None;
    }
    let offset = kept.iter().filter(|&&j| j < s.offset).count();
    let (k0, offset) = if offset == kept.len() {
        (s.k0 + 1, 0)
    } else {
        (s.k0, offset)
    };
    Some(Schema {
        direction: s.direction,
        k0,
        offset,
        entries: kept.into_iter().map(|j| s.entries[j].clone()).collect(),
    })
}

fn recode_letter(l: Letter, dir: Recode) -> Result<Letter> {
    match dir {
        Recode::Encode => {
            if l.family != Family::A {
                return Err(Error::OutsideFragment(format!("encode expects a-letters, got {l}")));
            }
            let g = Generator::from_rank(l.index);
            Ok(Letter::new(g.family, g.index, l.sign))
        }
        Recode::Decode => Ok(Letter::new(Family::A, l.rank(), l.sign)),
    }
}

fn recode_stream(s: &Schema, dir: Recode) -> Result<Schema> {
    match dir {
        Recode::Encode => {
            let uniform = s
                .entries
                .iter()
                .all(|e| (0..3).all(|k| e.index.at(k) % 3 == e.index.at(0) % 3));
            let s = if uniform { s.clone() } else { s.unrolled(3) };
            let entries = s
                .entries
                .iter()
                .map(|e| {
                    if e.fam != FamSpec::A {
                        return Err(Error::OutsideFragment("encode expects a pure a-stream".into()));
                    }
                    let rho = e.index.at(0) % 3;
                    let index = e.index.div3(rho).ok_or_else(|| {
                        Error::OutsideFragment(format!("index {} does not split mod 3", e.index))
                    })?;
                    Ok(Entry::new(FamSpec::of(Generator::from_rank(rho).family), index, e.sign))
                })
                .collect::<Result<Vec<_>>>()?;
            Schema::new(s.direction, s.k0, s.offset, entries)
        }
        Recode::Decode => {
            let entries = s
                .entries
                .iter()
                .map(|e| {
                    let rho = match e.fam {
                        FamSpec::A => 0,
                        FamSpec::B => 1,
                        FamSpec::C => 2,
                        FamSpec::Sel(_) => {
                            return Err(Error::OutsideFragment(
                                "selector streams have no a-alphabet preimage in this fragment".into(),
                            ))
                        }
                    };
                    Ok(Entry::new(FamSpec::A, e.index.outer(3, rho), e.sign))
                })
                .collect::<Result<Vec<_>>>()?;
            Schema::new(s.direction, s.k0, s.offset, entries)
        }
    }
}

/// Pieces of a word that any order isomorphism must respect.
enum Component {
    Fixed(Vec<Letter>),
    /// finite prefix, then a forward stream
    Omega(Vec<Letter>, Schema),
    /// backward stream, then a finite suffix
    OmegaStar(Schema, Vec<Letter>),
    /// backward stream, finite middle, forward stream
    Zee(Schema, Vec<Letter>, Schema),
}

fn components(w: &SchematicWord) -> Vec<Component> {
    let segs = w.segments();
    let fwd = |i: usize| matches!(segs.get(i), Some(Segment::Stream(s)) if s.direction == Direction::Forward);
    let block = |i: usize| match segs.get(i) {
        Some(Segment::Block(b)) => Some(b.letters().to_vec()),
        _ => None,
    };
    let stream = |i: usize| match &segs[i] {
        Segment::Stream(s) => s.clone(),
        Segment::Block(_) => unreachable!(),
    };
    let mut out = Vec::new();
    let mut i = 0;
    while i < segs.len() {
        match &segs[i] {
            Segment::Block(b) => {
                if fwd(i + 1) {
                    out.push(Component::Omega(b.letters().to_vec(), stream(i + 1)));
                    i += 2;
                } else {
                    out.push(Component::Fixed(b.letters().to_vec()));
                    i += 1;
                }
            }
            Segment::Stream(s) if s.direction == Direction::Forward => {
                out.push(Component::Omega(vec![], s.clone()));
                i += 1;
            }
            Segment::Stream(g) => {
                if let Some(x) = block(i + 1) {
                    if fwd(i + 2) {
                        out.push(Component::Zee(g.clone(), x, stream(i + 2)));
                        i += 3;
                    } else {
                        out.push(Component::OmegaStar(g.clone(), x));
                        i += 2;
                    }
                } else if fwd(i + 1) {
                    out.push(Component::Zee(g.clone(), vec![], stream(i + 1)));
                    i += 2;
                } else {
                    out.push(Component::OmegaStar(g.clone(), vec![]));
                    i += 1;
                }
            }
        }
    }
    out
}

pub(crate) fn inverse_letters(ls: &[Letter]) -> Vec<Letter> {
    ls.iter().rev().map(|l| l.inverse()).collect()
}

/// Whether `p1·f1` and `p2·f2` are the same ω-sequence (forward traversal).
fn omega_eq(p1: &[Letter], f1: &Schema, p2: &[Letter], f2: &Schema) -> bool {
    if p1.len() > p2.len() {
        return omega_eq(p2, f2, p1, f1);
    }
    let gap = (p2.len() - p1.len()) as u64;
    p1 == &p2[..p1.len()] && f1.prefix(gap) == p2[p1.len()..] && f1.advanced(gap).same_sequence(f2)
}

impl Component {
    fn equiv(&self, other: &Component) -> bool {
        use Component::*;
        match (self, other) {
            (Fixed(a), Fixed(b)) => a == b,
            (Omega(p1, f1), Omega(p2, f2)) => omega_eq(p1, f1, p2, f2),
            (OmegaStar(g1, q1), OmegaStar(g2, q2)) => {
                omega_eq(&inverse_letters(q1), g1, &inverse_letters(q2), g2)
            }
            (Zee(g1, x1, f1), Zee(g2, x2, f2)) => zee_equiv(g1, x1, f1, g2, x2, f2),
            _ => false,
        }
    }
}

/// `G1⁻¹ X1 F1 ≡ G2⁻¹ X2 F2` as ℤ-indexed sequences. Coordinates put the
/// first letter of `F` at 0; the only candidate shift comes from aligning
/// the forward tails.
fn zee_equiv(g1: &Schema, x1: &[Letter], f1: &Schema, g2: &Schema, x2: &[Letter], f2: &Schema) -> bool {
    let Some((p1, p2)) = f1.tail_alignment(f2) else {
        return false;
    };
    let d = p2 as i64 - p1 as i64;
    // Z1(i) = Z2(i + d); compare from s1 = start of X1
    let s1 = -(x1.len() as i64);
    let s2 = s1 + d;
    let n2 = x2.len() as i64;
    // forward half of Z2 from s2
    let (fwd_prefix, back_ok) = if s2 >= -n2 {
        let cut = (s2 + n2) as usize;
        if cut > x2.len() {
            // s2 lies inside F2
            let skip = (s2) as u64;
            let f2s = f2.advanced(skip);
            let back: Vec<Letter> = x2.iter().copied().chain(f2.prefix(skip)).collect();
            return omega_eq(x1, f1, &[], &f2s)
                && omega_eq(&[], g1, &inverse_letters(&back), g2);
        }
        let back = x2[..cut].to_vec();
        (x2[cut..].to_vec(), omega_eq(&[], g1, &inverse_letters(&back), g2))
    } else {
        let m = (-n2 - s2) as u64;
        let mut pre: Vec<Letter> = inverse_letters(&g2.prefix(m));
        pre.extend_from_slice(x2);
        (pre, g1.same_sequence(&g2.advanced(m)))
    };
    back_ok && omega_eq(x1, f1, &fwd_prefix, f2)
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Segment::Block(b) => write!(f, "{b}"),
            Segment::Stream(s) => write!(f, "{s}"),
        }
    }
}

impl fmt::Display for SchematicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.segments.is_empty() {
            return f.write_str("[]");
        }
        for (i, s) in self.segments.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl From<FreeWord> for SchematicWord {
    fn from(w: FreeWord) -> SchematicWord {
        SchematicWord::block(w)
    }
}

impl From<Schema> for SchematicWord {
    fn from(s: Schema) -> SchematicWord {
        SchematicWord::stream(s)
    }
}

#[cfg(test)]
mod tests;
