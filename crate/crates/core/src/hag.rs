//! The harmonic archipelago quotient: words modulo finite subwords.
//!
//! After reduction only the streams of a word matter, and a stream only up
//! to a finite prefix. A class is a sequence of such germs with no adjacent
//! inverse pair.

use std::fmt;

use crate::freegroup::Sign;
use crate::words::{Direction, SchematicWord, Schema, Segment};

/// A stream up to finite prefixes, with its orientation.
#[derive(Debug, Clone)]
pub struct Germ {
    pub schema: Schema,
    pub sign: Sign,
}

impl Germ {
    pub fn of(s: &Schema) -> Germ {
        let sign = match s.direction {
            Direction::Forward => Sign::Pos,
            Direction::Backward => Sign::Neg,
        };
        Germ {
            schema: s.with_direction(Direction::Forward),
            sign,
        }
    }

    pub fn inverse(&self) -> Germ {
        Germ {
            schema: self.schema.clone(),
            sign: self.sign.flip(),
        }
    }

    /// A stream with this germ.
    pub fn to_schema(&self) -> Schema {
        let d = match self.sign {
            Sign::Pos => Direction::Forward,
            Sign::Neg => Direction::Backward,
        };
        self.schema.with_direction(d)
    }

    pub fn same_tail(&self, other: &Germ) -> bool {
        self.schema.is_tail_equivalent(&other.schema)
    }

    fn cancels(&self, other: &Germ) -> bool {
        self.sign != other.sign && self.same_tail(other)
    }
}

impl PartialEq for Germ {
    fn eq(&self, other: &Germ) -> bool {
        self.sign == other.sign && self.same_tail(other)
    }
}

impl fmt::Display for Germ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_schema())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct HagClass {
    germs: Vec<Germ>,
}

impl HagClass {
    pub fn identity() -> HagClass {
        HagClass::default()
    }

    /// Cancels adjacent inverse germs.
    pub fn from_germs(germs: impl IntoIterator<Item = Germ>) -> HagClass {
        let mut stack: Vec<Germ> = Vec::new();
        for g in germs {
            match stack.last() {
                Some(top) if top.cancels(&g) => {
                    stack.pop();
                }
                _ => stack.push(g),
            }
        }
        HagClass { germs: stack }
    }

    pub fn germs(&self) -> &[Germ] {
        &self.germs
    }

    pub fn is_identity(&self) -> bool {
        self.germs.is_empty()
    }

    pub fn product(&self, other: &HagClass) -> HagClass {
        HagClass::from_germs(self.germs.iter().chain(&other.germs).cloned())
    }

    pub fn inverse(&self) -> HagClass {
        HagClass {
            germs: self.germs.iter().rev().map(Germ::inverse).collect(),
        }
    }

    /// A word representing this class.
    pub fn to_word(&self) -> SchematicWord {
        SchematicWord::from_segments(self.germs.iter().map(|g| Segment::Stream(g.to_schema())).collect())
    }

    /// The image under the retraction deleting `b`/`c` letters.
    pub fn retract_a(&self) -> HagClass {
        hag_normal(&self.to_word().ra_retract())
    }

    /// A representative all of whose letters have rank `≥ n`.
    pub fn preimage_above(&self, n: u64) -> SchematicWord {
        let segs = self
            .germs
            .iter()
            .map(|g| {
                let mut s = g.schema.clone();
                while s.min_rank() < n {
                    s = s.advanced(s.len() as u64);
                }
                Segment::Stream(Germ { schema: s, sign: g.sign }.to_schema())
            })
            .collect();
        SchematicWord::from_segments(segs)
    }
}

impl fmt::Display for HagClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("germ-seq: [")?;
        for (i, g) in self.germs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str("]")
    }
}

/// Reduce, forget finite blocks and stream cursors, cancel inverse germs.
pub fn hag_normal(w: &SchematicWord) -> HagClass {
    HagClass::from_germs(w.reduce().streams().map(Germ::of))
}

/// The quotient map.
pub fn pi(w: &SchematicWord) -> HagClass {
    hag_normal(w)
}

pub fn hag_equal(w1: &SchematicWord, w2: &SchematicWord) -> bool {
    hag_normal(w1) == hag_normal(w2)
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::words::parse_word;
    use crate::words::random::{WordGen, DEFAULT_SEED};

    fn w(s: &str) -> SchematicWord {
        parse_word(s).unwrap()
    }

    const U_S: &str = "st(+,0,{sel(pcode(\"\",\"0\"))(k)})";

    #[test]
    fn finite_words_die() {
        assert!(hag_normal(&w("[a0 a1 b2]")).is_identity());
        assert!(pi(&w("[a0]")).is_identity());
        assert!(hag_equal(&w("[c5 a2^-1]"), &SchematicWord::empty()));
    }

    #[test]
    fn germs_forget_prefixes() {
        let h = hag_normal(&w("st(+,3,{sel(pcode(\"\",\"0\"))(k)})"));
        assert_eq!(h.germs().len(), 1);
        assert_eq!(h.germs()[0].sign, Sign::Pos);
        assert!(hag_equal(&w(U_S), &w("st(+,5,{sel(pcode(\"\",\"0\"))(k)})")));
        assert!(!hag_equal(&w(U_S), &w("st(+,0,{sel(pcode(\"\",\"1\"))(k)})")));
    }

    #[test]
    fn inverse_germs_cancel() {
        let u = w(U_S);
        let x = SchematicWord::concat_all([&u, &w("[a7]"), &u.invert()]);
        assert!(hag_normal(&x).is_identity());
        // not cancelled in HEG, but in the quotient
        let y = SchematicWord::concat_all([&w("st(+,2,{a(k)})"), &w("[b0]"), &w("st(-,0,{a(k)})")]);
        assert!(!y.reduce().is_empty());
        assert!(hag_normal(&y).is_identity());
    }

    #[test]
    fn preimages_in_tail_subgroups() {
        let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
        let g = WordGen::default();
        for _ in 0..100 {
            let h = pi(&g.word(&mut rng));
            for n in 0..=8 {
                let pre = h.preimage_above(n);
                assert!(pre.min_rank().is_none_or(|r| r >= n));
                assert_eq!(pi(&pre), h);
            }
        }
    }

    #[test]
    fn quotient_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED ^ 7);
        let g = WordGen::default();
        for _ in 0..200 {
            let x = g.word(&mut rng);
            let y = g.word(&mut rng);
            assert!(pi(&x.concat(&x.invert())).is_identity());
            assert_eq!(pi(&x.concat(&y)), pi(&x).product(&pi(&y)));
            let extra = g.free_word(&mut rng, 3);
            let mut segs = x.segments().to_vec();
            let at = segs.len() / 2;
            segs.insert(at, Segment::Block(extra));
            assert_eq!(pi(&SchematicWord::from_segments(segs)), pi(&x));
        }
    }

    #[test]
    fn retraction_keeps_a_germs() {
        let x = w(&format!("st(+,0,{{a(k)}}) {U_S}"));
        let r = pi(&x).retract_a();
        assert_eq!(r, pi(&w("st(+,0,{a(k)})")));
        assert!(pi(&w(U_S)).retract_a().is_identity());
    }

    #[test]
    fn display() {
        let h = pi(&w("st(-,4,{a(k)})"));
        assert_eq!(h.to_string(), "germ-seq: [st(-,4,{a(k)})]");
    }
}
