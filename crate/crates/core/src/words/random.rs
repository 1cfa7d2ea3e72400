//! Random words for property tests and demos.
//!
//! Streams are drawn from a fixed menu of shapes; no single pattern mixes a
//! selector entry with plain `b`/`c` entries.

use rand::seq::SliceRandom;
use rand::Rng;

use super::schema::{Direction, Entry, FamSpec, Schema};
use super::setspec::SetSpec;
use super::{IndexFn, SchematicWord, Segment};
use crate::freegroup::{Family, FreeWord, Letter, Sign};

/// Default seed of the property tests and CLI demos.
pub const DEFAULT_SEED: u64 = 0x5eed_2024;

#[derive(Debug, Clone)]
pub struct WordGen {
    pub max_segments: usize,
    pub max_index: u64,
    pub sets: Vec<SetSpec>,
}

impl Default for WordGen {
    fn default() -> Self {
        WordGen {
            max_segments: 6,
            max_index: 8,
            sets: vec![
                SetSpec::evens(),
                SetSpec::prefix_code(vec![], vec![false]).unwrap(),
                SetSpec::prefix_code(vec![], vec![true]).unwrap(),
                SetSpec::finite(vec![1, 4]),
            ],
        }
    }
}

fn sign<R: Rng>(rng: &mut R) -> Sign {
    if rng.gen_bool(0.5) {
        Sign::Pos
    } else {
        Sign::Neg
    }
}

fn family<R: Rng>(rng: &mut R) -> Family {
    *[Family::A, Family::B, Family::C].choose(rng).unwrap()
}

impl WordGen {
    pub fn letter<R: Rng>(&self, rng: &mut R) -> Letter {
        Letter::new(family(rng), rng.gen_range(0..=self.max_index), sign(rng))
    }

    pub fn free_word<R: Rng>(&self, rng: &mut R, max_len: usize) -> FreeWord {
        let n = rng.gen_range(0..=max_len);
        (0..n).map(|_| self.letter(rng)).collect()
    }

    pub fn schema<R: Rng>(&self, rng: &mut R) -> Schema {
        let aff = |f: Family, a: u64, b: u64, s: Sign| Entry::new(FamSpec::of(f), IndexFn::affine(a, b), s);
        let entries = match rng.gen_range(0..6) {
            0 => vec![aff(Family::A, 1, 0, sign(rng))],
            1 => vec![aff(family(rng), rng.gen_range(1..=3), rng.gen_range(0..=3), sign(rng))],
            2 => vec![aff(Family::A, 1, 0, Sign::Pos), aff(Family::A, 1, 1, Sign::Neg)],
            3 => vec![Entry::sel(self.sets.choose(rng).unwrap().clone(), sign(rng))],
            4 => vec![aff(Family::A, 2, 0, sign(rng)), aff(Family::B, 2, 1, sign(rng))],
            _ => vec![aff(Family::A, 1, 0, sign(rng)), aff(Family::C, 1, 0, sign(rng))],
        };
        let offset = rng.gen_range(0..entries.len());
        let direction = if rng.gen_bool(0.5) {
            Direction::Forward
        } else {
            Direction::Backward
        };
        Schema::new(direction, rng.gen_range(0..=self.max_index), offset, entries).expect("menu schemas are valid")
    }

    pub fn segment<R: Rng>(&self, rng: &mut R) -> Segment {
        if rng.gen_bool(0.45) {
            Segment::Block(self.free_word(rng, 4))
        } else {
            Segment::Stream(self.schema(rng))
        }
    }

    /// A word of at most `max_segments` segments; about a third of the
    /// draws splice in a piece next to its own inverse.
    pub fn word<R: Rng>(&self, rng: &mut R) -> SchematicWord {
        let base = rng.gen_range(0..=self.max_segments.div_ceil(2));
        let mut segs: Vec<Segment> = (0..base).map(|_| self.segment(rng)).collect();
        let room = self.max_segments.saturating_sub(segs.len()) / 2;
        if room > 0 && rng.gen_bool(0.35) {
            let len = rng.gen_range(1..=room);
            let piece: Vec<Segment> = (0..len).map(|_| self.segment(rng)).collect();
            let inv = SchematicWord::from_segments(piece.clone()).invert().into_segments();
            let at = rng.gen_range(0..=segs.len());
            let spliced: Vec<Segment> = piece.into_iter().chain(inv).collect();
            segs.splice(at..at, spliced);
        }
        SchematicWord::from_segments(segs)
    }
}
