use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::random::{WordGen, DEFAULT_SEED};
use super::*;
use crate::freegroup::Sign;

fn w(s: &str) -> SchematicWord {
    parse_word(s).unwrap()
}

fn evens_stream(k0: u64) -> SchematicWord {
    w(&format!("st(+,{k0},{{sel(eper(\"\",\"10\"))(k)}})"))
}

fn gens(list: &[(Family, u64)]) -> BTreeSet<Generator> {
    list.iter().map(|&(f, i)| Generator::new(f, i)).collect()
}

#[test]
fn head_absorption() {
    let c = w("[a5] st(+,6,{a(k)})").canonicalize();
    assert_eq!(c, w("st(+,5,{a(k)})"));
    for n in 0..=16 {
        assert_eq!(c.p(n), w("[a5] st(+,6,{a(k)})").p(n));
    }
    assert_eq!(w("a0 a1").canonicalize(), w("[a0 a1]"));
    assert!(SchematicWord::empty().canonicalize().is_empty());
}

#[test]
fn absorption_rotates_at_step_zero() {
    // a0 then the stream b1 a1 b2 a2 ... which starts mid-pattern
    let c = w("[c0 b0] st(+,0,{a(k) b(k+1)})").canonicalize();
    assert_eq!(c.segments().len(), 2);
    assert!(c.equiv(&w("[c0 b0] st(+,0,{a(k) b(k+1)})")));
    let c = w("[b0] st(+,0,{a(k+1) b(k+1)})").canonicalize();
    assert_eq!(c.segments().len(), 1);
}

#[test]
fn concat_and_invert() {
    let u = evens_stream(0);
    let both = u.concat(&u.invert());
    assert_eq!(both.segments().len(), 2);
    assert_eq!(SchematicWord::empty().concat(&u), u);
    assert_eq!(w("[a0]").concat(&w("[a0^-1]")), w("[a0 a0^-1]"));
    assert_eq!(w("[a0 a1]").invert(), w("[a1^-1 a0^-1]"));
    let inv = u.invert();
    let s = inv.streams().next().unwrap();
    assert_eq!((s.direction, s.k0), (Direction::Backward, 0));
    assert_eq!(inv.invert(), u);
}

#[test]
fn occurrences_in_domain_order() {
    let t = w("st(+,0,{a(k) a(k+1)^-1})");
    let occ = t.occurrences(Generator::a(1));
    let locs: Vec<Locator> = occ.iter().map(|p| p.locator).collect();
    assert_eq!(
        locs,
        [Locator::Stream { k: 0, entry: 1 }, Locator::Stream { k: 1, entry: 0 }]
    );
    let occ = evens_stream(0).occurrences(Generator::new(Family::C, 1));
    assert_eq!(occ.len(), 1);
    assert_eq!(occ[0].locator, Locator::Stream { k: 1, entry: 0 });
    assert!(t.occurrences(Generator::new(Family::B, 3)).is_empty());
    let back = t.invert().occurrences(Generator::a(1));
    assert_eq!(back[0].locator, Locator::Stream { k: 1, entry: 0 });
}

#[test]
fn projections() {
    let t = w("st(+,0,{a(k) a(k+1)^-1})");
    assert_eq!(t.project(&gens(&[(Family::A, 0), (Family::A, 1)])).to_string(), "[a0]");
    let keep = gens(&[(Family::B, 0), (Family::B, 1), (Family::C, 0), (Family::C, 1)]);
    assert_eq!(evens_stream(0).project(&keep).to_string(), "[b0 c1]");
    assert!(SchematicWord::empty().project(&keep).is_empty());
}

#[test]
fn projection_coherence() {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let g = WordGen::default();
    for _ in 0..200 {
        let x = g.word(&mut rng);
        for m in 0..=12 {
            for n in 0..=12 {
                let pn = SchematicWord::block(x.p(n));
                assert_eq!(pn.p(m), x.p(m.min(n)));
            }
        }
    }
}

#[test]
fn reduce_examples() {
    let u = evens_stream(0);
    assert!(u.invert().concat(&u).reduce().is_empty());
    assert!(w("[a0 a0^-1]").reduce().is_empty());
    let r = evens_stream(1).concat(&evens_stream(3).invert()).reduce();
    assert_eq!(r, w("[c1 b2]"));
    assert_eq!(w("st(+,0,{a(k) a(k+1)^-1})").reduce(), w("[a0]"));
}

#[test]
fn telescope_vs_ut() {
    let ut = w("st(+,0,{a(k)})");
    let tel = w("st(+,0,{a(k) a(k+1)^-1})");
    // rank(a0)=0, rank(b0)=1, rank(c0)=2, rank(a1)=3
    assert!(ut.equal_up_to(&tel, 1));
    assert!(ut.equal_up_to(&tel, 3));
    assert!(!ut.equal_up_to(&tel, 4));
    assert!(!ut.heg_equal(&tel));
    let s1 = w("st(+,0,{sel(pcode(\"\",\"0\"))(k)})");
    let s2 = w("st(+,0,{sel(pcode(\"\",\"1\"))(k)})");
    assert!(!s1.heg_equal(&s2));
}

#[test]
fn gamma() {
    let e = w("[a0 a1 a2]").gamma_recode(Recode::Encode).unwrap();
    assert_eq!(e, w("[a0 b0 c0]"));
    let e = w("st(+,0,{a(3k+1)})").gamma_recode(Recode::Encode).unwrap();
    assert_eq!(e, w("st(+,0,{b(k)})"));
    let e = w("st(+,0,{a(k)})").gamma_recode(Recode::Encode).unwrap();
    assert!(e.equiv(&w("st(+,0,{a(k) b(k) c(k)})")));
    assert!(w("[b0]").gamma_recode(Recode::Encode).is_err());
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let g = WordGen::default();
    for _ in 0..300 {
        let x = g.word(&mut rng).ra_retract();
        let there = x.gamma_recode(Recode::Encode).unwrap();
        assert!(there.gamma_recode(Recode::Decode).unwrap().equiv(&x));
    }
}

#[test]
fn retraction() {
    assert!(evens_stream(0).ra_retract().is_empty());
    let ut = w("st(+,0,{a(k)})");
    assert_eq!(ut.concat(&evens_stream(0)).ra_retract(), ut);
    assert_eq!(w("[a0 b3 a1]").ra_retract(), w("[a0 a1]"));
    let mixed = w("st(+,2:1,{a(2k) b(2k+1)})").ra_retract();
    assert_eq!(mixed, w("st(+,3,{a(2k)})"));
}

#[test]
fn equiv_across_presentations() {
    let a = w("st(+,0,{a(k)})");
    assert!(a.equiv(&w("st(+,0,{a(2k) a(2k+1)})")));
    assert!(a.equiv(&w("[a0 a1] st(+,1,{a(2k) a(2k+1)})")));
    assert!(!a.equiv(&w("st(+,1,{a(k)})")));
    // ω* then ω with the middle letter drawn from either side
    let g = "st(-,1,{a(k)})";
    let f = "st(+,1,{b(k)})";
    let x = w(&format!("{g} [a0^-1 b0] {f}"));
    let y = w("st(-,0,{a(k)}) st(+,0,{b(k)})");
    assert!(x.equiv(&y));
    assert!(!x.equiv(&w(&format!("{g} [a0^-1] {f}"))));
    assert!(w("[a0] st(-,0,{a(k)})").equiv(&w("[a0] st(-,0,{a(k)})")));
    assert!(!w("[a0] st(-,0,{a(k)})").equiv(&w("st(-,0,{a(k)})")));
}

#[test]
fn reduction_is_sound_and_order_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let g = WordGen::default();
    for i in 0..300 {
        let x = g.word(&mut rng);
        let r = x.reduce();
        assert!(r.is_reduced(), "{x} -> {r}");
        for n in 0..=16 {
            assert!(x.equal_up_to(&r, n), "{x} -> {r} at {n}");
        }
        for st in [Strategy::RightFirst, Strategy::Seeded(i), Strategy::Fold] {
            let r2 = x.reduce_with(st);
            assert!(r.equiv(&r2), "{x}: {r} vs {r2} ({st:?})");
        }
        assert!(x.concat(&x.invert()).reduce().is_empty(), "{x}");
    }
}

#[test]
fn four_way_split_shape() {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED ^ 1);
    let g = WordGen::default();
    for _ in 0..300 {
        let x = g.word(&mut rng).reduce();
        let y = g.word(&mut rng).reduce();
        let s = x.four_way_split(&y);
        let whole = x.concat(&y).reduce();
        let outer = s.w00.concat(&s.w11);
        assert!(whole.equiv(&outer.canonicalize()), "{x} | {y}");
        assert!(s.w01.concat(&s.w10).reduce().is_empty());
        for n in 0..=16 {
            assert!(s.w00.concat(&s.w01).equal_up_to(&x, n));
            assert!(s.w10.concat(&s.w11).equal_up_to(&y, n));
        }
    }
}

#[test]
fn telescope_sign_reversed() {
    let t = w("st(+,0,{a(k)^-1 a(k+1)})");
    assert_eq!(t.reduce(), w("[a0^-1]"));
    let t = w("st(-,2,{a(k) a(k+1)^-1})");
    assert_eq!(t.reduce(), w("[a2^-1]"));
    let e = Entry::affine(Family::A, 1, 0, Sign::Pos);
    assert!(Schema::forward(0, vec![e.clone(), Entry { sign: Sign::Neg, ..e }])
        .map(SchematicWord::stream)
        .unwrap()
        .reduce()
        .is_empty());
}
