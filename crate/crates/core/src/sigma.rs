//! A finite almost disjoint family, the words `U_S`, the decomposition of a
//! reduced word into maximal `U_S`-intervals, and the maps built from it.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, InputError, ParseError, Result};
use crate::freegroup::{Letter, Sign};
use crate::hag::{hag_normal, Germ, HagClass};
use crate::words::parse::Parser;
use crate::words::setspec::code;
use crate::words::{inverse_letters, Direction, Entry, FamSpec, IndexFn, SchematicWord, Schema, Segment, SetSpec};

/// A family member or the extra symbol `T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Member(usize),
    T,
}

/// Pairwise almost disjoint prefix-coded sets `S1, ..., Sk`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaFamily {
    members: Vec<SetSpec>,
}

impl SigmaFamily {
    /// Branches `0^ω`, `1^ω`, then `0^(i-1) 1 0^ω` for `i ≥ 2`.
    pub fn make(k: usize) -> Result<SigmaFamily> {
        if k == 0 {
            return Err(Error::EmptyFamily);
        }
        let members = (0..k)
            .map(|i| {
                let (prefix, period) = match i {
                    0 => (vec![], vec![false]),
                    1 => (vec![], vec![true]),
                    _ => {
                        let mut p = vec![false; i - 1];
                        p.push(true);
                        (p, vec![false])
                    }
                };
                SetSpec::prefix_code(prefix, period).expect("nonempty period")
            })
            .collect();
        Ok(SigmaFamily { members })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn set(&self, i: usize) -> &SetSpec {
        &self.members[i]
    }

    pub fn members(&self) -> &[SetSpec] {
        &self.members
    }

    pub fn name(&self, s: Symbol) -> String {
        match s {
            Symbol::Member(i) => format!("S{}", i + 1),
            Symbol::T => "T".into(),
        }
    }

    pub fn lookup(&self, name: &str) -> Option<Symbol> {
        if name == "T" {
            return Some(Symbol::T);
        }
        let i: usize = name.strip_prefix('S')?.parse().ok()?;
        (1..=self.len()).contains(&i).then_some(Symbol::Member(i - 1))
    }

    /// Resolves `S1`..`Sk` to their sets, for the word parser.
    pub fn resolve(&self, name: &str) -> Option<SetSpec> {
        match self.lookup(name)? {
            Symbol::Member(i) => Some(self.members[i].clone()),
            Symbol::T => None,
        }
    }

    /// `B` with `S_i ∩ S_j ⊆ [0, B)`: one past the code of the longest
    /// common branch prefix.
    pub fn bound(&self, i: usize, j: usize) -> u64 {
        if i == j {
            return u64::MAX;
        }
        let (x, y) = (&self.members[i], &self.members[j]);
        let d = (0u64..).find(|&t| x.branch_bit(t) != y.branch_bit(t)).unwrap();
        let common: Vec<bool> = (0..d).map(|t| x.branch_bit(t).unwrap()).collect();
        code(&common) as u64 + 1
    }

    fn u_schema(&self, s: Symbol, n: u64) -> Schema {
        let entry = match s {
            Symbol::Member(i) => Entry::sel(self.members[i].clone(), Sign::Pos),
            Symbol::T => Entry::new(FamSpec::A, IndexFn::affine(1, 0), Sign::Pos),
        };
        Schema::forward(n, vec![entry]).expect("valid")
    }

    /// `U_S` with its first `n` letters removed (`U_T = a_0 a_1 ...`).
    pub fn u_word(&self, s: Symbol, n: u64) -> SchematicWord {
        SchematicWord::stream(self.u_schema(s, n))
    }

    /// Letter `n` of `U_S`.
    pub fn u_letter(&self, s: Symbol, n: u64) -> Letter {
        self.u_schema(s, 0).letter_at(n)
    }

    /// The member whose `U_S` has the same tail as the forward traversal
    /// of `s`, with the alignment `(position in s, n)`.
    fn match_stream(&self, s: &Schema) -> Option<(usize, u64, u64)> {
        let f = s.with_direction(Direction::Forward);
        (0..self.len()).find_map(|i| {
            let (p, n) = f.tail_alignment(&self.u_schema(Symbol::Member(i), 0))?;
            Some((i, p, n))
        })
    }

    pub fn germ(&self, s: Symbol) -> Germ {
        Germ::of(&self.u_schema(s, 0))
    }

    fn member_of_germ(&self, g: &Germ) -> Option<usize> {
        (0..self.len()).find(|&i| g.same_tail(&self.germ(Symbol::Member(i))))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tag {
    Maximal { member: usize, n: u64, sign: Sign },
    Plain,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub word: SchematicWord,
    pub tag: Tag,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub pieces: Vec<Piece>,
}

impl Decomposition {
    pub fn tags(&self) -> Vec<Tag> {
        self.pieces.iter().map(|p| p.tag).collect()
    }

    /// The concatenation of all pieces.
    pub fn recompose(&self) -> SchematicWord {
        SchematicWord::concat_all(self.pieces.iter().map(|p| &p.word))
    }

    pub fn render(&self, fam: &SigmaFamily) -> String {
        let parts: Vec<String> = self
            .pieces
            .iter()
            .map(|p| match p.tag {
                Tag::Maximal { member, n, sign } => {
                    let e = if sign == Sign::Neg { "^-1" } else { "" };
                    format!("U({},{n}){e}: {}", fam.name(Symbol::Member(member)), p.word)
                }
                Tag::Plain => format!("plain: {}", p.word),
            })
            .collect();
        parts.join(" | ")
    }
}

enum Item {
    Plain(Segment),
    Max(usize, u64, Sign),
}

/// Splits a reduced word into maximal `U_{S,n}^{±1}` intervals (for `S` in
/// the family) and maximal intervals meeting none of them.
pub fn decompose(w: &SchematicWord, fam: &SigmaFamily) -> Result<Decomposition> {
    if !w.is_reduced() {
        return Err(Error::NotReduced);
    }
    let segs = w.canonicalize().into_segments();
    let mut items: Vec<Item> = Vec::new();
    let mut skip = 0usize;
    for i in 0..segs.len() {
        match &segs[i] {
            Segment::Block(b) => {
                let rest = b.letters()[skip.min(b.len())..].to_vec();
                items.push(Item::Plain(Segment::Block(rest.into_iter().collect())));
                skip = 0;
            }
            Segment::Stream(s) => {
                skip = 0;
                let Some((m, p, mut n)) = fam.match_stream(s) else {
                    items.push(Item::Plain(Segment::Stream(s.clone())));
                    continue;
                };
                let u = |j: u64| fam.u_letter(Symbol::Member(m), j);
                if s.direction == Direction::Forward {
                    if p > 0 {
                        items.push(Item::Plain(Segment::Block(s.prefix(p).into_iter().collect())));
                    } else if let Some(Item::Plain(Segment::Block(b))) = items.last_mut() {
                        let mut ls = b.letters().to_vec();
                        while n > 0 && ls.last() == Some(&u(n - 1)) {
                            ls.pop();
                            n -= 1;
                        }
                        *b = ls.into_iter().collect();
                    }
                    items.push(Item::Max(m, n, Sign::Pos));
                } else {
                    if p == 0 {
                        if let Some(Segment::Block(b)) = segs.get(i + 1) {
                            while n > 0 && skip < b.len() && b.letters()[skip] == u(n - 1).inverse() {
                                skip += 1;
                                n -= 1;
                            }
                        }
                    }
                    items.push(Item::Max(m, n, Sign::Neg));
                    if p > 0 {
                        items.push(Item::Plain(Segment::Block(inverse_letters(&s.prefix(p)).into_iter().collect())));
                    }
                }
            }
        }
    }
    let mut pieces = Vec::new();
    let mut plain: Vec<Segment> = Vec::new();
    let flush = |plain: &mut Vec<Segment>, pieces: &mut Vec<Piece>| {
        let word = SchematicWord::from_segments(std::mem::take(plain)).canonicalize();
        if !word.is_empty() {
            pieces.push(Piece { word, tag: Tag::Plain });
        }
    };
    for it in items {
        match it {
            Item::Plain(s) => plain.push(s),
            Item::Max(member, n, sign) => {
                flush(&mut plain, &mut pieces);
                let u = fam.u_word(Symbol::Member(member), n);
                let word = if sign == Sign::Neg { u.invert() } else { u };
                pieces.push(Piece {
                    word,
                    tag: Tag::Maximal { member, n, sign },
                });
            }
        }
    }
    flush(&mut plain, &mut pieces);
    Ok(Decomposition { pieces })
}

/// A total map from the family members to members or `T`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SigmaMap {
    table: Vec<Symbol>,
}

impl SigmaMap {
    pub fn new(fam: &SigmaFamily, table: Vec<Symbol>) -> Result<SigmaMap> {
        if table.len() != fam.len() {
            return Err(Error::PartialMap(format!("{} entries for {} members", table.len(), fam.len())));
        }
        if table.iter().any(|s| matches!(s, Symbol::Member(i) if *i >= fam.len())) {
            return Err(Error::PartialMap("target outside the family".into()));
        }
        Ok(SigmaMap { table })
    }

    pub fn identity(fam: &SigmaFamily) -> SigmaMap {
        SigmaMap {
            table: (0..fam.len()).map(Symbol::Member).collect(),
        }
    }

    /// `S ↦ T` for `S` in `scal`, `S ↦ S` otherwise.
    pub fn collapsing(fam: &SigmaFamily, scal: &BTreeSet<usize>) -> SigmaMap {
        SigmaMap {
            table: (0..fam.len())
                .map(|i| if scal.contains(&i) { Symbol::T } else { Symbol::Member(i) })
                .collect(),
        }
    }

    pub fn permutation(fam: &SigmaFamily, perm: &[usize]) -> Result<SigmaMap> {
        let mut seen = vec![false; fam.len()];
        if perm.len() != fam.len() {
            return Err(Error::NotPermutation);
        }
        for &p in perm {
            if p >= fam.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::NotPermutation);
            }
        }
        Ok(SigmaMap {
            table: perm.iter().map(|&p| Symbol::Member(p)).collect(),
        })
    }

    pub fn apply(&self, s: Symbol) -> Symbol {
        match s {
            Symbol::Member(i) => self.table[i],
            Symbol::T => Symbol::T,
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SigmaMap) -> SigmaMap {
        SigmaMap {
            table: other.table.iter().map(|&s| self.apply(s)).collect(),
        }
    }

    pub fn inverse(&self) -> Result<SigmaMap> {
        let mut inv = vec![Symbol::T; self.table.len()];
        for (i, s) in self.table.iter().enumerate() {
            match s {
                Symbol::Member(j) if inv[*j] == Symbol::T => inv[*j] = Symbol::Member(i),
                _ => return Err(Error::NotPermutation),
            }
        }
        Ok(SigmaMap { table: inv })
    }

    /// Parses `f{S1->T, S2->S2}`.
    pub fn parse(input: &str, fam: &SigmaFamily) -> std::result::Result<SigmaMap, InputError> {
        let mut p = Parser::new(input);
        p.expect("f")?;
        p.expect("{")?;
        let mut table: Vec<Option<Symbol>> = vec![None; fam.len()];
        while !p.eat("}") {
            p.skip_ws();
            let at = p.error("");
            let from = p.ident()?;
            let Some(Symbol::Member(i)) = fam.lookup(&from) else {
                return Err(ParseError { message: format!("unknown member `{from}`"), ..at }.into());
            };
            p.expect("->")?;
            p.skip_ws();
            let at = p.error("");
            let to = p.ident()?;
            let target = fam
                .lookup(&to)
                .ok_or_else(|| ParseError { message: format!("unknown member `{to}`"), ..at })?;
            table[i] = Some(target);
            if !p.eat(",") {
                p.expect("}")?;
                break;
            }
        }
        p.finish()?;
        let missing: Vec<String> = (0..fam.len())
            .filter(|&i| table[i].is_none())
            .map(|i| fam.name(Symbol::Member(i)))
            .collect();
        if !missing.is_empty() {
            return Err(Error::PartialMap(format!("no image for {}", missing.join(", "))).into());
        }
        Ok(SigmaMap {
            table: table.into_iter().map(Option::unwrap).collect(),
        })
    }

    pub fn render(&self, fam: &SigmaFamily) -> String {
        let parts: Vec<String> = self
            .table
            .iter()
            .enumerate()
            .map(|(i, &s)| format!("{}->{}", fam.name(Symbol::Member(i)), fam.name(s)))
            .collect();
        format!("f{{{}}}", parts.join(", "))
    }
}

/// Replaces every maximal `U_{S,n}^{±1}` piece by `U_{f(S),n}^{±1}`.
pub fn apply_ff(w: &SchematicWord, fam: &SigmaFamily, f: &SigmaMap) -> Result<SchematicWord> {
    let d = decompose(w, fam)?;
    let words: Vec<SchematicWord> = d
        .pieces
        .into_iter()
        .map(|p| match p.tag {
            Tag::Plain => p.word,
            Tag::Maximal { member, n, sign } => {
                let u = fam.u_word(f.apply(Symbol::Member(member)), n);
                if sign == Sign::Neg {
                    u.invert()
                } else {
                    u
                }
            }
        })
        .collect();
    Ok(SchematicWord::concat_all(&words))
}

/// `[[F_f(reduce(w))]]`.
pub fn psi_f(w: &SchematicWord, fam: &SigmaFamily, f: &SigmaMap) -> HagClass {
    let r = w.reduce();
    hag_normal(&apply_ff(&r, fam, f).expect("reduced input"))
}

/// The induced map on classes: member germs move along `f`.
pub fn phi(h: &HagClass, fam: &SigmaFamily, f: &SigmaMap) -> HagClass {
    HagClass::from_germs(h.germs().iter().map(|g| match fam.member_of_germ(g) {
        Some(i) => {
            let image = fam.germ(f.apply(Symbol::Member(i)));
            if g.sign == Sign::Neg {
                image.inverse()
            } else {
                image
            }
        }
        None => g.clone(),
    }))
}

/// For each member `S`: whether `[[U_S]]` survives `r_a ∘ φ_f` with
/// `f` collapsing exactly the members of `scal` to `T`.
pub fn separation_pattern(fam: &SigmaFamily, scal: &BTreeSet<usize>) -> Vec<bool> {
    let f = SigmaMap::collapsing(fam, scal);
    (0..fam.len())
        .map(|i| !psi_f(&fam.u_word(Symbol::Member(i), 0), fam, &f).retract_a().is_identity())
        .collect()
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Member(i) => write!(f, "S{}", i + 1),
            Symbol::T => f.write_str("T"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::Family;
    use crate::words::parse_word_with;

    fn fam(k: usize) -> SigmaFamily {
        SigmaFamily::make(k).unwrap()
    }

    fn w(f: &SigmaFamily, s: &str) -> SchematicWord {
        parse_word_with(s, &|n| f.resolve(n)).unwrap()
    }

    #[test]
    fn family_of_two() {
        let f = fam(2);
        let s1: Vec<u64> = (0..40).filter(|&n| f.set(0).contains(n)).collect();
        let s2: Vec<u64> = (0..40).filter(|&n| f.set(1).contains(n)).collect();
        assert_eq!(s1, [0, 1, 3, 7, 15, 31]);
        assert_eq!(s2, [0, 2, 6, 14, 30]);
        assert_eq!(f.bound(0, 1), 1);
        assert!(SigmaFamily::make(0).is_err());
        assert_eq!(fam(1).len(), 1);
    }

    #[test]
    fn bounds_cover_intersections() {
        let f = fam(8);
        for i in 0..8 {
            assert!(f.set(i).contains(0));
            for j in 0..8 {
                if i != j {
                    let b = f.bound(i, j);
                    for n in b..5000 {
                        assert!(!(f.set(i).contains(n) && f.set(j).contains(n)), "{i} {j} {n}");
                    }
                }
            }
        }
    }

    #[test]
    fn u_words() {
        let f = fam(2);
        let ut = f.u_word(Symbol::T, 3);
        assert_eq!(ut.to_string(), "st(+,3,{a(k)})");
        let u = f.u_word(Symbol::Member(1), 0);
        let letters = u.streams().next().unwrap().prefix(4);
        let names: Vec<String> = letters.iter().map(|l| l.to_string()).collect();
        assert_eq!(names, ["b0", "c1", "b2", "c3"]);
        for n in 0..10 {
            assert!(f.u_word(Symbol::Member(0), n).equiv(&u_tail(&f, 0, n)));
        }
    }

    fn u_tail(f: &SigmaFamily, i: usize, n: u64) -> SchematicWord {
        let s = f.u_schema(Symbol::Member(i), 0);
        SchematicWord::stream(s.advanced(n))
    }

    #[test]
    fn decompose_examples() {
        let f = fam(2);
        let d = decompose(&f.u_word(Symbol::Member(0), 0), &f).unwrap();
        assert_eq!(d.tags(), [Tag::Maximal { member: 0, n: 0, sign: Sign::Pos }]);
        // b0 followed by U_{S1,1}: presented so that canonicalization cannot
        // absorb the b0
        let x = SchematicWord::from_segments(vec![
            Segment::Block([Letter::pos(Family::B, 0)].into_iter().collect()),
            Segment::Stream(f.u_schema(Symbol::Member(0), 1)),
        ]);
        let d = decompose(&x, &f).unwrap();
        assert_eq!(d.tags(), [Tag::Maximal { member: 0, n: 0, sign: Sign::Pos }]);
        let d = decompose(&f.u_word(Symbol::T, 0), &f).unwrap();
        assert_eq!(d.tags(), [Tag::Plain]);
        assert!(decompose(&w(&f, "[a0 a0^-1]"), &f).is_err());
    }

    #[test]
    fn decompose_absorbs_matching_letters() {
        let f = fam(2);
        let x = w(&f, "[a9 b0 b1] st(+,2,{sel(S1)(k)}) [a9]");
        let d = decompose(&x, &f).unwrap();
        assert!(d.recompose().equiv(&x));
        assert_eq!(d.tags()[1], Tag::Maximal { member: 0, n: 0, sign: Sign::Pos });
        assert_eq!(d.pieces[0].word.to_string(), "[a9]");
        let back = decompose(&x.invert(), &f).unwrap();
        assert!(back.recompose().equiv(&x.invert()));
        assert_eq!(back.tags()[1], Tag::Maximal { member: 0, n: 0, sign: Sign::Neg });
        // a T-tail is not a member interval
        let y = w(&f, "st(+,0,{a(k)}) [b0] st(-,1,{sel(S2)(k)})");
        let d = decompose(&y.reduce(), &f).unwrap();
        assert_eq!(d.tags(), [Tag::Plain, Tag::Maximal { member: 1, n: 1, sign: Sign::Neg }]);
    }

    #[test]
    fn ff_examples() {
        let f = fam(2);
        let to_t = SigmaMap::parse("f{S1->T, S2->S2}", &f).unwrap();
        let u1 = f.u_word(Symbol::Member(0), 0);
        assert_eq!(apply_ff(&u1, &f, &to_t).unwrap(), f.u_word(Symbol::T, 0));
        let x = w(&f, "[a0 b3] st(-,2,{sel(S2)(k)}) [c1]").reduce();
        assert!(apply_ff(&x, &f, &SigmaMap::identity(&f)).unwrap().equiv(&x));
        let swap = SigmaMap::permutation(&f, &[1, 0]).unwrap();
        let img = apply_ff(&u1.invert(), &f, &swap).unwrap();
        assert_eq!(img, f.u_word(Symbol::Member(1), 0).invert());
    }

    #[test]
    fn psi_examples() {
        let f = fam(2);
        let both_t = SigmaMap::parse("f{S1->T,S2->T}", &f).unwrap();
        assert!(psi_f(&w(&f, "[a0 b1 c2]"), &f, &both_t).is_identity());
        let x = w(&f, "st(+,0,{sel(S1)(k)}) st(-,0,{sel(S2)(k)})");
        assert!(psi_f(&x, &f, &both_t).is_identity());
        let id = SigmaMap::identity(&f);
        assert_eq!(psi_f(&f.u_word(Symbol::Member(0), 0), &f, &id).germs().len(), 1);
    }

    #[test]
    fn permutations() {
        let f = fam(3);
        let swap = SigmaMap::permutation(&f, &[1, 0, 2]).unwrap();
        let h = HagClass::from_germs([f.germ(Symbol::Member(0))]);
        assert_eq!(phi(&h, &f, &swap), HagClass::from_germs([f.germ(Symbol::Member(1))]));
        assert_eq!(phi(&h, &f, &SigmaMap::identity(&f)), h);
        let inv = swap.inverse().unwrap();
        assert_eq!(phi(&phi(&h, &f, &swap), &f, &inv), h);
        assert!(SigmaMap::permutation(&f, &[0, 0, 1]).is_err());
    }

    #[test]
    fn map_parsing() {
        let f = fam(2);
        assert!(matches!(SigmaMap::parse("f{S1->T}", &f), Err(InputError::Domain(Error::PartialMap(_)))));
        assert!(matches!(SigmaMap::parse("f{S3->T, S1->S1}", &f), Err(InputError::Parse(_))));
        let m = SigmaMap::parse("f{S2->S1, S1->T}", &f).unwrap();
        assert_eq!(m.render(&f), "f{S1->T, S2->S1}");
    }

    #[test]
    fn separation_small() {
        let f = fam(2);
        assert_eq!(separation_pattern(&f, &BTreeSet::from([0])), [true, false]);
        assert_eq!(separation_pattern(&f, &BTreeSet::new()), [false, false]);
        assert_eq!(separation_pattern(&f, &BTreeSet::from([0, 1])), [true, true]);
    }
}
