//! Substitution endomorphisms `a_n ↦ W_n`, telescopes, the map `τ`, and the
//! finite checks behind the free-group embedding.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, InputError, Result};
use crate::freegroup::{generators_below_rank, reduced_words, Family, FreeWord, Generator, Letter, Sign};
use crate::words::parse::Parser;
use crate::words::random::{WordGen, DEFAULT_SEED};
use crate::words::{pair, unpair, Direction, Entry, FamSpec, IndexFn, Resolver, SchematicWord, Schema, Segment};

/// One letter `x_{αn+β}^{±1}` of a tail pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatternLetter {
    pub family: Family,
    pub alpha: u64,
    pub beta: u64,
    pub sign: Sign,
}

impl PatternLetter {
    pub fn new(family: Family, alpha: u64, beta: u64, sign: Sign) -> PatternLetter {
        PatternLetter { family, alpha, beta, sign }
    }

    fn at(&self, n: u64) -> Letter {
        Letter::new(self.family, self.alpha * n + self.beta, self.sign)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    /// `a_n ↦ P(n)` for `n ≥ n0`; smaller `a_n` are fixed.
    Pattern { n0: u64, letters: Vec<PatternLetter> },
    /// `a_p ↦ a_{⟨m,i⟩} a_{⟨m,i+1⟩}^-1` where `(m, i)` unpairs `p`.
    Tau,
}

/// Where a letter can come from under a substitution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Support {
    Finite(BTreeSet<Generator>),
    Infinite,
}

/// A letter substitution. `b`/`c` letters are always fixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstitutionMap {
    pub exceptional: BTreeMap<u64, SchematicWord>,
    pub rule: Rule,
}

impl SubstitutionMap {
    pub fn pattern(n0: u64, letters: Vec<PatternLetter>) -> SubstitutionMap {
        SubstitutionMap {
            exceptional: BTreeMap::new(),
            rule: Rule::Pattern { n0, letters },
        }
    }

    pub fn identity() -> SubstitutionMap {
        Self::pattern(0, vec![PatternLetter::new(Family::A, 1, 0, Sign::Pos)])
    }

    /// `a_n ↦ a_n a_{n+1}^-1`.
    pub fn telescope() -> SubstitutionMap {
        Self::pattern(
            0,
            vec![
                PatternLetter::new(Family::A, 1, 0, Sign::Pos),
                PatternLetter::new(Family::A, 1, 1, Sign::Neg),
            ],
        )
    }

    /// `a_n ↦ a_{2n} a_{2n+1}`.
    pub fn doubling() -> SubstitutionMap {
        Self::pattern(
            0,
            vec![
                PatternLetter::new(Family::A, 2, 0, Sign::Pos),
                PatternLetter::new(Family::A, 2, 1, Sign::Pos),
            ],
        )
    }

    pub fn with_exception(mut self, n: u64, w: SchematicWord) -> SubstitutionMap {
        self.exceptional.insert(n, w);
        self
    }

    fn threshold(&self) -> u64 {
        let exc = self.exceptional.keys().next_back().map_or(0, |&n| n + 1);
        match &self.rule {
            Rule::Pattern { n0, .. } => exc.max(*n0),
            Rule::Tau => exc,
        }
    }

    /// The image of a generator.
    pub fn image(&self, g: Generator) -> SchematicWord {
        if g.family != Family::A {
            return SchematicWord::letters(vec![g.letter(Sign::Pos)]);
        }
        let n = g.index;
        if let Some(w) = self.exceptional.get(&n) {
            return w.clone();
        }
        let letters = match &self.rule {
            Rule::Pattern { n0, .. } if n < *n0 => vec![g.letter(Sign::Pos)],
            Rule::Pattern { letters, .. } => letters.iter().map(|p| p.at(n)).collect(),
            Rule::Tau => {
                let (m, i) = unpair(n);
                vec![Letter::pos(Family::A, n), Letter::neg(Family::A, pair(m, i + 1))]
            }
        };
        SchematicWord::letters(letters)
    }

    pub fn image_of_letter(&self, l: Letter) -> SchematicWord {
        let w = self.image(l.generator());
        match l.sign {
            Sign::Pos => w,
            Sign::Neg => w.invert(),
        }
    }

    /// The source generators whose image contains `g`.
    pub fn support_query(&self, g: Generator) -> Support {
        let mut out = BTreeSet::new();
        if g.family != Family::A {
            out.insert(g);
        }
        for (&n, w) in &self.exceptional {
            if !w.occurrences(g).is_empty() {
                out.insert(Generator::a(n));
            }
        }
        let free = |n: u64| !self.exceptional.contains_key(&n);
        match &self.rule {
            Rule::Pattern { n0, letters } => {
                if g.family == Family::A && g.index < *n0 && free(g.index) {
                    out.insert(g);
                }
                for p in letters.iter().filter(|p| p.family == g.family) {
                    if p.alpha == 0 {
                        if p.beta == g.index {
                            return Support::Infinite;
                        }
                        continue;
                    }
                    if g.index >= p.beta && (g.index - p.beta).is_multiple_of(p.alpha) {
                        let n = (g.index - p.beta) / p.alpha;
                        if n >= *n0 && free(n) {
                            out.insert(Generator::a(n));
                        }
                    }
                }
            }
            Rule::Tau if g.family == Family::A => {
                let (m, i) = unpair(g.index);
                if free(g.index) {
                    out.insert(g);
                }
                if i > 0 && free(pair(m, i - 1)) {
                    out.insert(Generator::a(pair(m, i - 1)));
                }
            }
            Rule::Tau => {}
        }
        Support::Finite(out)
    }

    /// A generator of rank `< bound` whose support is infinite or disagrees
    /// with direct enumeration.
    pub fn admissibility_witness(&self, bound: u64) -> Option<Generator> {
        let limit = bound + self.threshold() + 2;
        generators_below_rank(bound).into_iter().find(|&g| {
            let Support::Finite(claimed) = self.support_query(g) else {
                return true;
            };
            let mut sources: Vec<Generator> = (0..limit).map(Generator::a).collect();
            if g.family != Family::A {
                sources.push(g);
            }
            let direct: BTreeSet<Generator> = sources
                .into_iter()
                .filter(|&src| !self.image(src).occurrences(g).is_empty())
                .collect();
            direct != claimed
        })
    }

    pub fn check_admissible(&self, bound: u64) -> bool {
        self.admissibility_witness(bound).is_none()
    }

    /// The entries replacing an `a`-entry with index `f` in a stream.
    fn stream_entries(&self, f: IndexFn, sign: Sign) -> Result<Vec<Entry>> {
        let mut out = match &self.rule {
            Rule::Pattern { letters, .. } => letters
                .iter()
                .map(|p| {
                    if p.alpha == 0 {
                        return Err(Error::NotAdmissible(format!("{p} has a constant index")));
                    }
                    Ok(Entry::new(FamSpec::of(p.family), f.outer(p.alpha, p.beta), p.sign))
                })
                .collect::<Result<Vec<_>>>()?,
            Rule::Tau => {
                let (m, d) = unpair(f.at(0));
                if f != IndexFn::pairing(m).shift(d as i128) {
                    return Err(Error::OutsideFragment(format!("τ on an entry with index {f}")));
                }
                let next = IndexFn::pairing(m).shift(d as i128 + 1);
                vec![Entry::new(FamSpec::A, f, Sign::Pos), Entry::new(FamSpec::A, next, Sign::Neg)]
            }
        };
        if sign == Sign::Neg {
            out.reverse();
            for e in &mut out {
                e.sign = e.sign.flip();
            }
        }
        Ok(out)
    }

    fn apply_stream(&self, s: &Schema) -> Result<SchematicWord> {
        let f = s.with_direction(Direction::Forward);
        let len = f.len() as u64;
        let threshold = self.threshold();
        let mut k = f.k0 + u64::from(f.offset > 0);
        while f
            .entries
            .iter()
            .any(|e| e.fam == FamSpec::A && e.index.at(k) < threshold)
        {
            k += 1;
        }
        let t = k * len - (f.k0 * len + f.offset as u64);
        let head = SchematicWord::concat_all(&f.prefix(t).into_iter().map(|l| self.image_of_letter(l)).collect::<Vec<_>>());
        let tail = f.advanced(t);
        let mut entries = Vec::new();
        for e in &tail.entries {
            if e.fam == FamSpec::A {
                entries.extend(self.stream_entries(e.index, e.sign)?);
            } else {
                entries.push(e.clone());
            }
        }
        let out = if entries.is_empty() {
            head
        } else {
            head.concat(&SchematicWord::stream(Schema::forward(k, entries)?))
        };
        Ok(match s.direction {
            Direction::Forward => out,
            Direction::Backward => out.invert(),
        })
    }

    /// The image of a word, as long as it stays in the fragment.
    pub fn apply_endo(&self, w: &SchematicWord) -> Result<SchematicWord> {
        let mut parts = Vec::new();
        for seg in w.segments() {
            match seg {
                Segment::Block(b) => parts.extend(b.letters().iter().map(|&l| self.image_of_letter(l))),
                Segment::Stream(s) => parts.push(self.apply_stream(s)?),
            }
        }
        Ok(SchematicWord::concat_all(&parts))
    }

    /// The projection of the image to `keep`, computed from the finitely
    /// many source letters that can contribute.
    pub fn apply_projected(&self, w: &SchematicWord, keep: &BTreeSet<Generator>) -> Result<FreeWord> {
        let mut sources = BTreeSet::new();
        for &g in keep {
            match self.support_query(g) {
                Support::Finite(s) => sources.extend(s),
                Support::Infinite => {
                    return Err(Error::NotAdmissible(format!("{} has infinite support", g.letter(Sign::Pos))))
                }
            }
        }
        let mut out = Vec::new();
        for l in w.restrict_to(&sources).letters() {
            out.extend_from_slice(self.image_of_letter(*l).restrict_to(keep).letters());
        }
        Ok(FreeWord::new(out).reduced())
    }

    /// Parses `sub{tail: a(n) -> [a(2n) a(2n+1)], from: 2, except: 0 -> <word>}`
    /// or `sub{tau}`.
    pub fn parse(input: &str) -> std::result::Result<SubstitutionMap, InputError> {
        Self::parse_with(input, &|_| None)
    }

    pub fn parse_with(input: &str, resolve: Resolver<'_>) -> std::result::Result<SubstitutionMap, InputError> {
        let mut p = Parser::new(input);
        p.expect("sub")?;
        p.expect("{")?;
        let mut rule = None;
        let mut n0 = 0;
        let mut exceptional = BTreeMap::new();
        let mut in_except = false;
        loop {
            if p.eat("}") {
                break;
            }
            if p.eat("tau") {
                rule = Some(None);
                in_except = false;
            } else if p.eat("tail") {
                p.expect(":")?;
                p.expect("a")?;
                p.expect("(")?;
                p.ident()?;
                p.expect(")")?;
                p.expect("->")?;
                rule = Some(Some(pattern_letters(&mut p)?));
                in_except = false;
            } else if p.eat("from") {
                p.expect(":")?;
                n0 = p.number()?;
                in_except = false;
            } else {
                if p.eat("except") {
                    p.expect(":")?;
                    in_except = true;
                }
                if !in_except {
                    return Err(p.error("expected `tail`, `tau`, `from` or `except`").into());
                }
                let n = p.number()?;
                p.expect("->")?;
                exceptional.insert(n, p.word(resolve)?);
            }
            if !p.eat(",") {
                p.expect("}")?;
                break;
            }
        }
        p.finish()?;
        let rule = match rule {
            None => Rule::Pattern {
                n0: 0,
                letters: vec![PatternLetter::new(Family::A, 1, 0, Sign::Pos)],
            },
            Some(None) => Rule::Tau,
            Some(Some(letters)) => Rule::Pattern { n0, letters },
        };
        Ok(SubstitutionMap { exceptional, rule })
    }
}

fn pattern_letters(p: &mut Parser<'_>) -> std::result::Result<Vec<PatternLetter>, InputError> {
    p.expect("[")?;
    let mut out = Vec::new();
    while !p.eat("]") {
        if p.at_end() {
            return Err(p.error("unterminated pattern").into());
        }
        p.skip_ws();
        let at = p.error("");
        let family = p
            .peek()
            .and_then(Family::from_symbol)
            .ok_or_else(|| p.error("expected a pattern letter"))?;
        p.expect(&family.symbol().to_string())?;
        p.expect("(")?;
        let f = p.index_fn()?;
        p.expect(")")?;
        let sign = p.sign_suffix()?;
        let (alpha, beta) = f.as_affine().ok_or(crate::error::ParseError {
            message: "pattern indices must be affine".into(),
            ..at
        })?;
        out.push(PatternLetter::new(family, alpha, beta, sign));
    }
    Ok(out)
}

impl fmt::Display for PatternLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx = match (self.alpha, self.beta) {
            (0, b) => b.to_string(),
            (1, 0) => "n".into(),
            (1, b) => format!("n+{b}"),
            (a, 0) => format!("{a}n"),
            (a, b) => format!("{a}n+{b}"),
        };
        write!(f, "{}({idx})", self.family.symbol())?;
        if self.sign == Sign::Neg {
            f.write_str("^-1")?;
        }
        Ok(())
    }
}

impl fmt::Display for SubstitutionMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("sub{")?;
        match &self.rule {
            Rule::Tau => f.write_str("tau")?,
            Rule::Pattern { n0, letters } => {
                let ls: Vec<String> = letters.iter().map(|l| l.to_string()).collect();
                write!(f, "tail: a(n) -> [{}]", ls.join(" "))?;
                if *n0 > 0 {
                    write!(f, ", from: {n0}")?;
                }
            }
        }
        for (i, (n, w)) in self.exceptional.iter().enumerate() {
            let kw = if i == 0 { ", except: " } else { ", " };
            write!(f, "{kw}{n} -> {w}")?;
        }
        f.write_str("}")
    }
}

/// `∏_i a_{k(i)} a_{k(i+1)}^-1` as a single stream.
pub fn telescope_product(k: IndexFn) -> Result<SchematicWord> {
    let s = Schema::forward(
        0,
        vec![
            Entry::new(FamSpec::A, k, Sign::Pos),
            Entry::new(FamSpec::A, k.shift(1), Sign::Neg),
        ],
    )?;
    Ok(SchematicWord::stream(s))
}

/// `τ`, with `γ` the inverse Cantor pairing and `k(m, i) = ⟨m, i⟩`.
pub fn tau_map() -> SubstitutionMap {
    SubstitutionMap {
        exceptional: BTreeMap::new(),
        rule: Rule::Tau,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingReport {
    /// Least `m` with `p_m(s(a_n)) ≠ 1`.
    pub m: Vec<u64>,
    /// Least rank used by `s(a_n)`.
    pub j: Vec<u64>,
    /// Number of words checked for injectivity at each level.
    pub words_checked: Vec<usize>,
    pub failures: Vec<String>,
}

impl EmbeddingReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for EmbeddingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "m = {:?}", self.m)?;
        writeln!(f, "j = {:?}", self.j)?;
        writeln!(f, "injectivity words = {:?}", self.words_checked)?;
        if self.passed() {
            write!(f, "all checks passed")
        } else {
            for (i, x) in self.failures.iter().enumerate() {
                if i > 0 {
                    writeln!(f)?;
                }
                write!(f, "FAIL {x}")?;
            }
            Ok(())
        }
    }
}

const RETRACTION_SAMPLES: usize = 40;

fn source_letter(i: usize, sign: Sign) -> Letter {
    Letter::new(Family::A, i as u64, sign)
}

/// Finite checks of the embedding conditions for levels `n ≤ n_max`.
pub fn embedding_check(s: &SubstitutionMap, n_max: u64, len_max: usize) -> EmbeddingReport {
    let mut rep = EmbeddingReport {
        m: vec![],
        j: vec![],
        words_checked: vec![],
        failures: vec![],
    };
    let bound = 3 * (2 * n_max + 2) + 3 * s.threshold();
    if let Some(g) = s.admissibility_witness(bound) {
        rep.failures.push(format!("not admissible: support of {} is wrong or infinite", g.letter(Sign::Pos)));
        return rep;
    }
    for n in 0..=n_max {
        let img = s.image(Generator::a(n)).reduce();
        let Some(j) = img.min_rank() else {
            rep.failures.push(format!("image of a{n} is trivial"));
            return rep;
        };
        let m = (j + 1..).find(|&m| !img.p(m).is_empty()).expect("nontrivial reduced word");
        rep.m.push(m);
        rep.j.push(j);
    }
    for n in 1..=n_max as usize {
        if rep.j[n] <= rep.j[n - 1] {
            rep.failures.push(format!("j not increasing at {n}: {} after {}", rep.j[n], rep.j[n - 1]));
        }
        if rep.j[n] < rep.m[n - 1] {
            rep.failures.push(format!("image of a{n} uses rank {} below m{} = {}", rep.j[n], n - 1, rep.m[n - 1]));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let gen = WordGen::default();
    for n in 1..=n_max as usize {
        let keep = generators_below_rank(rep.m[n - 1]);
        let source: BTreeSet<Generator> = (0..n as u64).map(Generator::a).collect();
        for _ in 0..RETRACTION_SAMPLES {
            let w = gen.word(&mut rng).ra_retract();
            let lhs = s.apply_projected(&w, &keep);
            let rhs = s.apply_projected(&SchematicWord::block(w.project(&source)), &keep);
            if lhs != rhs {
                rep.failures.push(format!("retraction identity fails at n={n} for {w}"));
                break;
            }
        }
        let mut seen: HashMap<FreeWord, Vec<(usize, Sign)>> = HashMap::new();
        let words = reduced_words(n, len_max);
        rep.words_checked.push(words.len());
        for w in words {
            let letters: Vec<Letter> = w.iter().map(|&(i, sg)| source_letter(i, sg)).collect();
            let img = s
                .apply_projected(&SchematicWord::letters(letters), &keep)
                .expect("admissible");
            if let Some(prev) = seen.insert(img, w.clone()) {
                let show = |v: &[(usize, Sign)]| FreeWord::new(v.iter().map(|&(i, sg)| source_letter(i, sg)).collect()).to_string();
                rep.failures.push(format!("p_{} ∘ s not injective on level {n}: {} and {}", rep.m[n - 1], show(&prev), show(&w)));
                break;
            }
        }
    }
    rep
}
