//! Reduction to the unique reduced representative.
//!
//! A word is rewritten by local rules until none applies: free reduction
//! inside blocks, normalization inside a single stream, and cancellation at
//! the junction of two neighbouring segments. The rules are applied in an
//! order chosen by a [`Strategy`]; every order ends in the same word up to ≡.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::schema::{Direction, Entry, Schema};
use super::{inverse_letters, SchematicWord, Segment};
use crate::freegroup::{FreeWord, Letter};

/// Which redex is rewritten first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    LeftFirst,
    RightFirst,
    Seeded(u64),
    /// reduce segments one at a time and fold them together with
    /// [`SchematicWord::four_way_split`]
    Fold,
}

/// `w1 = w00·w01`, `w2 = w10·w11` with `w01·w10 ∼ E`, and `w00·w11` the
/// reduced form of `w1·w2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourWaySplit {
    pub w00: SchematicWord,
    pub w01: SchematicWord,
    pub w10: SchematicWord,
    pub w11: SchematicWord,
}

#[derive(Debug, Clone, Copy)]
enum Redex {
    Segment(usize),
    Junction(usize),
}

impl SchematicWord {
    pub fn reduce(&self) -> SchematicWord {
        self.reduce_with(Strategy::LeftFirst)
    }

    pub fn reduce_with(&self, strategy: Strategy) -> SchematicWord {
        if strategy == Strategy::Fold {
            return self.reduce_by_fold();
        }
        let mut rng = match strategy {
            Strategy::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            _ => None,
        };
        let mut segs = self.clone().merge_blocks().into_segments();
        loop {
            let redexes = find_redexes(&segs);
            if redexes.is_empty() {
                break;
            }
            let pick = match (strategy, rng.as_mut()) {
                (Strategy::RightFirst, _) => redexes[redexes.len() - 1],
                (Strategy::Seeded(_), Some(r)) => redexes[r.gen_range(0..redexes.len())],
                _ => redexes[0],
            };
            segs = SchematicWord::from_segments(rewrite(segs, pick)).merge_blocks().into_segments();
        }
        SchematicWord::from_segments(segs).canonicalize()
    }

    fn reduce_by_fold(&self) -> SchematicWord {
        let mut acc = SchematicWord::empty();
        for seg in self.clone().merge_blocks().into_segments() {
            let piece = SchematicWord::from_segments(vec![seg]).reduce_with(Strategy::LeftFirst);
            for s in piece.into_segments() {
                let single = SchematicWord::from_segments(vec![s]);
                let split = acc.four_way_split(&single);
                acc = SchematicWord::from_segments(
                    split
                        .w00
                        .into_segments()
                        .into_iter()
                        .chain(split.w11.into_segments())
                        .collect(),
                )
                .merge_blocks();
            }
        }
        acc.canonicalize()
    }

    pub fn is_reduced(&self) -> bool {
        find_redexes(self.clone().merge_blocks().segments()).is_empty()
    }

    /// Equality in the Hawaiian earring group.
    pub fn heg_equal(&self, other: &SchematicWord) -> bool {
        self.reduce().equiv(&other.reduce())
    }

    /// Cancels `self · other` at the junction only. Both words are assumed
    /// reduced.
    pub fn four_way_split(&self, other: &SchematicWord) -> FourWaySplit {
        let mut a = self.clone().merge_blocks().into_segments();
        let mut b: Vec<Segment> = other.clone().merge_blocks().into_segments();
        b.reverse(); // front of `other` is now at the end
        let mut gone_a: Vec<Segment> = Vec::new(); // reversed
        let mut gone_b: Vec<Segment> = Vec::new();
        loop {
            drop_empty(&mut a);
            drop_empty(&mut b);
            if a.is_empty() || b.is_empty() {
                break;
            }
            let (x, y) = (a.pop().unwrap(), b.pop().unwrap());
            match junction(&x, &y) {
                Some(j) => {
                    gone_a.push(j.gone_left);
                    gone_b.push(j.gone_right);
                    a.extend(j.left);
                    b.extend(j.right);
                }
                None => {
                    a.push(x);
                    b.push(y);
                    break;
                }
            }
        }
        gone_a.reverse();
        b.reverse();
        let w = |v: Vec<Segment>| SchematicWord::from_segments(v).canonicalize();
        FourWaySplit {
            w00: w(a),
            w01: w(gone_a),
            w10: w(gone_b),
            w11: w(b),
        }
    }
}

fn drop_empty(v: &mut Vec<Segment>) {
    while matches!(v.last(), Some(Segment::Block(w)) if w.is_empty()) {
        v.pop();
    }
}

/// One cancellation step at a junction `x · y`.
struct Junction {
    left: Option<Segment>,
    gone_left: Segment,
    gone_right: Segment,
    right: Option<Segment>,
}

fn block(ls: Vec<Letter>) -> Segment {
    Segment::Block(FreeWord::new(ls))
}

fn junction(x: &Segment, y: &Segment) -> Option<Junction> {
    use Direction::*;
    match (x, y) {
        (Segment::Block(u), Segment::Block(v)) => {
            let (u, v) = (u.letters(), v.letters());
            let n = (0..u.len().min(v.len()))
                .take_while(|&i| u[u.len() - 1 - i].is_inverse_of(v[i]))
                .count();
            (n > 0).then(|| Junction {
                left: Some(block(u[..u.len() - n].to_vec())),
                gone_left: block(u[u.len() - n..].to_vec()),
                gone_right: block(v[..n].to_vec()),
                right: Some(block(v[n..].to_vec())),
            })
        }
        (Segment::Block(u), Segment::Stream(f)) if f.direction == Forward => {
            let u = u.letters();
            let n = (0..u.len()).take_while(|&i| u[u.len() - 1 - i].is_inverse_of(f.letter_at(i as u64))).count();
            (n > 0).then(|| Junction {
                left: Some(block(u[..u.len() - n].to_vec())),
                gone_left: block(u[u.len() - n..].to_vec()),
                gone_right: block(f.prefix(n as u64)),
                right: Some(Segment::Stream(f.advanced(n as u64))),
            })
        }
        (Segment::Stream(g), Segment::Block(v)) if g.direction == Backward => {
            let v = v.letters();
            let n = (0..v.len()).take_while(|&i| v[i] == g.letter_at(i as u64)).count();
            (n > 0).then(|| Junction {
                left: Some(Segment::Stream(g.advanced(n as u64))),
                gone_left: block(inverse_letters(&g.prefix(n as u64))),
                gone_right: block(v[..n].to_vec()),
                right: Some(block(v[n..].to_vec())),
            })
        }
        (Segment::Stream(f), Segment::Stream(g)) if f.direction == Forward && g.direction == Backward => {
            let (p1, p2) = f.tail_alignment(g)?;
            Some(Junction {
                left: Some(block(f.prefix(p1))),
                gone_left: Segment::Stream(f.advanced(p1)),
                gone_right: Segment::Stream(g.advanced(p2)),
                right: Some(block(inverse_letters(&g.prefix(p2)))),
            })
        }
        (Segment::Stream(g), Segment::Stream(f)) if g.direction == Backward && f.direction == Forward => {
            if g.same_sequence(f) {
                return Some(Junction {
                    left: None,
                    gone_left: Segment::Stream(g.clone()),
                    gone_right: Segment::Stream(f.clone()),
                    right: None,
                });
            }
            let n = (0u64..).take_while(|&i| g.letter_at(i) == f.letter_at(i)).count() as u64;
            (n > 0).then(|| Junction {
                left: Some(Segment::Stream(g.advanced(n))),
                gone_left: block(inverse_letters(&g.prefix(n))),
                gone_right: block(f.prefix(n)),
                right: Some(Segment::Stream(f.advanced(n))),
            })
        }
        _ => None,
    }
}

fn find_redexes(segs: &[Segment]) -> Vec<Redex> {
    let mut out = Vec::new();
    for (i, seg) in segs.iter().enumerate() {
        let dirty = match seg {
            Segment::Block(b) => !b.is_reduced(),
            Segment::Stream(s) => normalize_stream(s).is_some(),
        };
        if dirty {
            out.push(Redex::Segment(i));
        }
        if i + 1 < segs.len() && junction(seg, &segs[i + 1]).is_some() {
            out.push(Redex::Junction(i));
        }
    }
    out
}

fn rewrite(mut segs: Vec<Segment>, r: Redex) -> Vec<Segment> {
    match r {
        Redex::Segment(i) => {
            let replacement = match &segs[i] {
                Segment::Block(b) => vec![Segment::Block(b.reduced())],
                Segment::Stream(s) => normalize_stream(s).expect("stream redex"),
            };
            segs.splice(i..=i, replacement);
        }
        Redex::Junction(i) => {
            let j = junction(&segs[i], &segs[i + 1]).expect("junction redex");
            let replacement: Vec<Segment> = j.left.into_iter().chain(j.right).collect();
            segs.splice(i..=i + 1, replacement);
        }
    }
    segs
}

/// Step from which all coincidences between entry letters at steps `k` and
/// `k+1` are the same as for every later step.
fn uniform_from(s: &Schema) -> u64 {
    let mut bound = 0u64;
    for (i, e) in s.entries.iter().enumerate() {
        for (j, h) in s.entries.iter().enumerate() {
            for (d1, d2) in [(0, 0), (0, 1), (1, 0)] {
                if i == j && d1 == d2 {
                    continue;
                }
                let (a1, b1, c1) = e.index.shift(d1).raw();
                let (a2, b2, c2) = h.index.shift(d2).raw();
                let (a, b, c) = ((a1 - a2).abs(), (b1 - b2).abs(), (c1 - c2).abs());
                let r = if a != 0 {
                    1 + b.max(c) / a
                } else if b != 0 {
                    c / b + 1
                } else {
                    0
                };
                bound = bound.max(r as u64);
            }
        }
    }
    bound
}

fn cancels_symbolically(x: &Entry, y: &Entry) -> bool {
    x.fam == y.fam && x.index == y.index && x.sign != y.sign
}

fn reduce_pattern(entries: &[Entry]) -> Vec<Entry> {
    let mut stack: Vec<Entry> = Vec::with_capacity(entries.len());
    for e in entries {
        match stack.last() {
            Some(top) if cancels_symbolically(top, e) => {
                stack.pop();
            }
            _ => stack.push(e.clone()),
        }
    }
    stack
}

/// Number of letters cancelled at the seam `X(k)·X(k+1)`.
fn seam_overlap(x: &[Entry]) -> usize {
    let l = x.len();
    (0..l)
        .take_while(|&c| {
            let (left, right) = (&x[l - 1 - c], &x[c]);
            left.fam == right.fam && left.index == right.index.shift(1) && left.sign != right.sign
        })
        .count()
}

/// `None` if the stream has no internal cancellation; otherwise a reduced
/// replacement (a block, possibly followed by a stream).
fn normalize_stream(s: &Schema) -> Option<Vec<Segment>> {
    let f = s.with_direction(Direction::Forward);
    let l = f.len() as u64;
    let upto = (uniform_from(&f).max(f.k0) + 2) * l - (f.k0 * l + f.offset as u64);
    let head = f.prefix(upto);
    if head.windows(2).all(|w| !w[0].is_inverse_of(w[1])) {
        return None;
    }
    let mut prefix: Vec<Letter> = Vec::new();
    let mut cur = f;
    let mut out = None;
    for _ in 0..16 {
        let l = cur.len() as u64;
        let pos = cur.k0 * l + cur.offset as u64;
        let k = uniform_from(&cur).max(cur.k0 + u64::from(cur.offset > 0));
        prefix.extend(cur.prefix(k * l - pos));
        let x = reduce_pattern(&cur.entries);
        if x.is_empty() {
            out = Some(vec![block(prefix.clone())]);
            break;
        }
        let c = seam_overlap(&x);
        if 2 * c <= x.len() {
            prefix.extend(x[..c].iter().map(|e| e.letter_at(k)));
            let mut segs = vec![block(prefix.clone())];
            if 2 * c < x.len() {
                segs.push(Segment::Stream(Schema {
                    direction: Direction::Forward,
                    k0: k,
                    offset: 0,
                    entries: x[c..x.len() - c].to_vec(),
                }));
            }
            out = Some(segs);
            break;
        }
        cur = Schema {
            direction: Direction::Forward,
            k0: k,
            offset: 0,
            entries: x,
        }
        .unrolled(2);
    }
    let mut segs = out?;
    if s.direction == Direction::Backward {
        segs.reverse();
        for seg in &mut segs {
            *seg = match seg {
                Segment::Block(b) => Segment::Block(b.inverse()),
                Segment::Stream(x) => Segment::Stream(x.inverse()),
            };
        }
    }
    Some(segs)
}
