use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use transword::endo::{PatternLetter, SubstitutionMap};
use transword::freegroup::{generators_below_rank, Family, Generator, Sign};
use transword::hag::pi;
use transword::words::random::WordGen;
use transword::words::{parse_word, SchematicWord};

fn random_map(rng: &mut ChaCha8Rng) -> SubstitutionMap {
    let n = rng.gen_range(1..=3);
    let letters = (0..n)
        .map(|_| {
            let family = [Family::A, Family::A, Family::B, Family::C][rng.gen_range(0..4)];
            let sign = if rng.gen_bool(0.5) { Sign::Pos } else { Sign::Neg };
            PatternLetter::new(family, rng.gen_range(1..=3), rng.gen_range(0..=2), sign)
        })
        .collect();
    let mut s = SubstitutionMap::pattern(rng.gen_range(0..3), letters);
    if rng.gen_bool(0.3) {
        let w = WordGen::default().free_word(rng, 3);
        s = s.with_exception(rng.gen_range(0..4), SchematicWord::block(w));
    }
    s
}

fn random_keep(rng: &mut ChaCha8Rng) -> BTreeSet<Generator> {
    let all: Vec<Generator> = generators_below_rank(24).into_iter().collect();
    (0..rng.gen_range(1..8)).map(|_| all[rng.gen_range(0..all.len())]).collect()
}

#[test]
fn projected_application_matches_direct() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let gen = WordGen::default();
    let mut checked = 0;
    while checked < 500 {
        let s = random_map(&mut rng);
        let w = gen.word(&mut rng);
        let keep = random_keep(&mut rng);
        let Ok(img) = s.apply_endo(&w) else { continue };
        assert_eq!(img.project(&keep), s.apply_projected(&w, &keep).unwrap(), "{s} on {w}");
        checked += 1;
    }
}

#[test]
fn endomorphism_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let gen = WordGen::default();
    for _ in 0..200 {
        let s = random_map(&mut rng);
        let (x, y) = (gen.word(&mut rng), gen.word(&mut rng));
        let whole = s.apply_endo(&x.concat(&y)).unwrap();
        let parts = s.apply_endo(&x).unwrap().concat(&s.apply_endo(&y).unwrap());
        assert!(whole.heg_equal(&parts), "{s}: {x} · {y}");
    }
}

#[test]
fn telescope_kills_letters() {
    let t = SubstitutionMap::telescope();
    for n in 0..=12 {
        let img = t.apply_endo(&parse_word(&format!("[a{n}]")).unwrap()).unwrap();
        assert!(pi(&img).is_identity());
    }
    // a0 a1 a2 ... survives the quotient, and its image is the class of a0
    let ut = parse_word("st(+,0,{a(k)})").unwrap();
    assert!(!pi(&ut).is_identity());
    let img = t.apply_endo(&ut).unwrap();
    assert!(img.heg_equal(&parse_word("[a0]").unwrap()));
    assert!(pi(&img).is_identity());
}
