use std::collections::BTreeSet;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use transword::abelian::{distinct_homs_demo, evaluation_matrix, mod_p, sum_functional, IntSeq};
use transword::endo::{embedding_check, SubstitutionMap};
use transword::freegroup::generators_below_rank;
use transword::hag::hag_normal;
use transword::sigma::{decompose, psi_f, separation_pattern, SigmaFamily, SigmaMap, Symbol};
use transword::words::random::{WordGen, DEFAULT_SEED};
use transword::words::{parse_word_with, SchematicWord};
use transword::{Error, InputError, ParseError};

#[derive(Parser, Debug)]
#[command(name = "transword", version, about = "Infinitary word calculus for the Hawaiian earring group")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduce a word to its normal form.
    Reduce {
        #[arg(short = 'e', long = "expr")]
        expr: String,
        #[arg(long, value_parser = parse_family)]
        family: Option<usize>,
    },
    /// Project a word to the free group on the letters of rank below N.
    Project {
        #[arg(short = 'e', long = "expr")]
        expr: String,
        #[arg(short = 'N', long = "level")]
        level: u64,
        #[arg(long, value_parser = parse_family)]
        family: Option<usize>,
    },
    /// Split a word into maximal U_S intervals.
    Decompose {
        #[arg(short = 'e', long = "expr")]
        expr: String,
        #[arg(long, value_parser = parse_family)]
        family: usize,
    },
    /// Apply the family substitution F_f and report its class.
    ApplyFf {
        #[arg(short = 'e', long = "expr")]
        expr: String,
        #[arg(long, value_parser = parse_family)]
        family: usize,
        /// A map such as `f{S1->T, S2->S2}`.
        #[arg(short = 'f', long = "map")]
        map: String,
    },
    /// Apply a letter substitution; with -N only its projection is computed.
    ApplyEndo {
        #[arg(short = 'e', long = "expr")]
        expr: String,
        /// A substitution such as `sub{tail: a(n) -> [a(2n) a(2n+1)]}`.
        #[arg(short = 's', long = "sub")]
        sub: String,
        #[arg(short = 'N', long = "level")]
        level: Option<u64>,
        #[arg(long, value_parser = parse_family)]
        family: Option<usize>,
    },
    /// The class of a word in the harmonic archipelago quotient.
    Hag {
        #[arg(short = 'e', long = "expr")]
        expr: String,
        #[arg(long, value_parser = parse_family)]
        family: Option<usize>,
    },
    /// Sweep all subsets of a family and compare separation patterns.
    DemoSeparation {
        #[arg(short = 'k', long = "size", default_value_t = 8)]
        k: usize,
    },
    /// Count the distinct coordinate-sum functionals mod p.
    DemoAbelian {
        #[arg(short = 'k', long = "size", default_value_t = 10)]
        k: u32,
        #[arg(short = 'p', long = "prime", default_value_t = 2)]
        p: u64,
    },
    /// Check the embedding conditions of a substitution.
    EmbeddingCheck {
        #[arg(short = 's', long = "sub", default_value = "sub{tail: a(n) -> [a(2n) a(2n+1)]}")]
        sub: String,
        #[arg(short = 'N', long = "level", default_value_t = 3)]
        level: u64,
        #[arg(long = "len", default_value_t = 6)]
        len: usize,
    },
}

fn parse_family(s: &str) -> Result<usize, String> {
    let k = s.strip_prefix("k=").ok_or("expected k=K")?;
    k.parse().map_err(|_| format!("bad family size `{k}`"))
}

enum Failure {
    Parse(ParseError),
    Domain(Error),
    /// A demo ran but its property did not hold.
    Verdict(Report),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Failure {
        Failure::Parse(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Domain(e)
    }
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Failure {
        match e {
            InputError::Parse(p) => Failure::Parse(p),
            InputError::Domain(d) => Failure::Domain(d),
        }
    }
}

/// Ordered key/value output.
struct Report(Vec<(&'static str, Value)>);

impl Report {
    fn new(command: &str) -> Report {
        Report(vec![("command", json!(command))])
    }

    fn add(mut self, key: &'static str, v: impl Into<Value>) -> Report {
        self.0.push((key, v.into()));
        self
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let map: serde_json::Map<String, Value> = self.0.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
                serde_json::to_string_pretty(&Value::Object(map)).expect("serializable")
            }
            Format::Text => {
                let mut out = String::new();
                for (k, v) in &self.0 {
                    render_text(&mut out, k, v, 0);
                }
                out.pop();
                out
            }
        }
    }
}

fn render_text(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Array(items) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for item in items {
                match item {
                    Value::Object(m) => {
                        let line: Vec<String> = m.iter().map(|(k, v)| format!("{k}={}", scalar(v))).collect();
                        out.push_str(&format!("{pad}  - {}\n", line.join(" ")));
                    }
                    other => out.push_str(&format!("{pad}  - {}\n", scalar(other))),
                }
            }
        }
        other => out.push_str(&format!("{pad}{key}: {}\n", scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(xs) => xs.iter().map(scalar).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

fn seed() -> Result<u64, Failure> {
    let Ok(s) = std::env::var("TRANSWORD_SEED") else {
        return Ok(DEFAULT_SEED);
    };
    let parsed = match s.strip_prefix("0x") {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|_| {
        Failure::Parse(ParseError {
            line: 1,
            column: 1,
            message: format!("TRANSWORD_SEED `{s}` is not an integer"),
        })
    })
}

fn family(k: Option<usize>) -> Result<Option<SigmaFamily>, Failure> {
    Ok(k.map(SigmaFamily::make).transpose()?)
}

fn word(expr: &str, fam: Option<&SigmaFamily>) -> Result<SchematicWord, Failure> {
    Ok(parse_word_with(expr, &|n| fam.and_then(|f| f.resolve(n)))?)
}

fn run(cmd: Command) -> Result<Report, Failure> {
    Ok(match cmd {
        Command::Reduce { expr, family: k } => {
            let fam = family(k)?;
            let w = word(&expr, fam.as_ref())?;
            Report::new("reduce").add("input", expr).add("result", w.reduce().to_string())
        }
        Command::Project { expr, level, family: k } => {
            let fam = family(k)?;
            let w = word(&expr, fam.as_ref())?;
            Report::new("project")
                .add("input", expr)
                .add("level", level)
                .add("result", w.p(level).to_string())
        }
        Command::Decompose { expr, family: k } => {
            let fam = SigmaFamily::make(k)?;
            let w = word(&expr, Some(&fam))?.reduce();
            let d = decompose(&w, &fam)?;
            let pieces: Vec<Value> = d
                .pieces
                .iter()
                .map(|p| {
                    let tag = match p.tag {
                        transword::sigma::Tag::Plain => "plain".to_string(),
                        transword::sigma::Tag::Maximal { member, n, sign } => {
                            let e = if sign == transword::Sign::Neg { "^-1" } else { "" };
                            format!("U({},{n}){e}", fam.name(Symbol::Member(member)))
                        }
                    };
                    json!({ "tag": tag, "word": p.word.to_string() })
                })
                .collect();
            Report::new("decompose")
                .add("input", expr)
                .add("reduced", w.to_string())
                .add("pieces", pieces)
        }
        Command::ApplyFf { expr, family: k, map } => {
            let fam = SigmaFamily::make(k)?;
            let f = SigmaMap::parse(&map, &fam)?;
            let w = word(&expr, Some(&fam))?.reduce();
            let image = transword::sigma::apply_ff(&w, &fam, &f)?;
            let class = psi_f(&w, &fam, &f);
            Report::new("apply-ff")
                .add("input", expr)
                .add("map", f.render(&fam))
                .add("result", image.to_string())
                .add("class", class.to_string())
        }
        Command::ApplyEndo { expr, sub, level, family: k } => {
            let fam = family(k)?;
            let resolve = |n: &str| fam.as_ref().and_then(|f| f.resolve(n));
            let s = SubstitutionMap::parse_with(&sub, &resolve)?;
            let w = word(&expr, fam.as_ref())?;
            let r = Report::new("apply-endo").add("input", expr).add("substitution", s.to_string());
            match level {
                Some(n) => r
                    .add("level", n)
                    .add("result", s.apply_projected(&w, &generators_below_rank(n))?.to_string()),
                None => r.add("result", s.apply_endo(&w)?.to_string()),
            }
        }
        Command::Hag { expr, family: k } => {
            let fam = family(k)?;
            let w = word(&expr, fam.as_ref())?;
            let h = hag_normal(&w);
            Report::new("hag")
                .add("input", expr)
                .add("class", h.to_string())
                .add("representative", h.to_word().to_string())
                .add("trivial", h.is_identity())
        }
        Command::DemoSeparation { k } => demo_separation(k)?,
        Command::DemoAbelian { k, p } => demo_abelian(k, p)?,
        Command::EmbeddingCheck { sub, level, len } => {
            let s = SubstitutionMap::parse(&sub)?;
            let rep = embedding_check(&s, level, len);
            let r = Report::new("embedding-check")
                .add("substitution", s.to_string())
                .add("m", rep.m.clone())
                .add("j", rep.j.clone())
                .add("injectivity_words", rep.words_checked.clone())
                .add("failures", rep.failures.clone())
                .add("verdict", if rep.passed() { "all checks passed" } else { "checks failed" });
            if !rep.passed() {
                return Err(Failure::Verdict(r));
            }
            r
        }
    })
}

const MAX_SWEEP: usize = 12;
const HOMOMORPHISM_SAMPLES: usize = 20;

fn demo_separation(k: usize) -> Result<Report, Failure> {
    if k > MAX_SWEEP {
        return Err(Error::OutsideFragment(format!("family size {k} exceeds the sweep limit {MAX_SWEEP}")).into());
    }
    let fam = SigmaFamily::make(k)?;
    let seed = seed()?;
    let mut patterns = BTreeSet::new();
    let mut mismatched = 0usize;
    for bits in 0u64..1 << k {
        let scal: BTreeSet<usize> = (0..k).filter(|i| bits >> i & 1 == 1).collect();
        let pat = separation_pattern(&fam, &scal);
        if pat != (0..k).map(|i| scal.contains(&i)).collect::<Vec<_>>() {
            mismatched += 1;
        }
        patterns.insert(pat);
    }
    let total = 1usize << k;
    // psi_f(w0 w1) = psi_f(w0) psi_f(w1) on seeded samples
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gen = WordGen {
        sets: fam.members().to_vec(),
        ..WordGen::default()
    };
    let mut hom_ok = 0;
    for i in 0..HOMOMORPHISM_SAMPLES {
        let w = gen.word(&mut rng);
        let scal: BTreeSet<usize> = (0..k).filter(|j| (i + j) % 3 == 0).collect();
        let f = SigmaMap::collapsing(&fam, &scal);
        let segs = w.segments().len();
        let (w0, w1) = if segs == 0 { (w.clone(), SchematicWord::empty()) } else { w.split_at(i % segs, i as u64 % 4) };
        if psi_f(&w, &fam, &f) == psi_f(&w0, &fam, &f).product(&psi_f(&w1, &fam, &f)) {
            hom_ok += 1;
        }
    }
    let ok = patterns.len() == total && mismatched == 0 && hom_ok == HOMOMORPHISM_SAMPLES;
    let r = Report::new("demo-separation")
        .add("k", k)
        .add("seed", seed)
        .add("distinct_patterns", patterns.len())
        .add("homomorphism_samples", format!("{hom_ok}/{HOMOMORPHISM_SAMPLES}"))
        .add("verdict", format!("{}/{total} patterns distinct", patterns.len()));
    if ok {
        Ok(r)
    } else {
        Err(Failure::Verdict(r))
    }
}

fn demo_abelian(k: u32, p: u64) -> Result<Report, Failure> {
    if k as usize > MAX_SWEEP {
        return Err(Error::OutsideFragment(format!("k = {k} exceeds the sweep limit {MAX_SWEEP}")).into());
    }
    let seed = seed()?;
    let count = distinct_homs_demo(k, p)?;
    let matrix = evaluation_matrix(k, p)?;
    // every functional factors through the projection to the first k coordinates
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut factors = true;
    for bits in 0u64..1 << k {
        let scal: BTreeSet<u64> = (0..k as u64).filter(|i| bits >> i & 1 == 1).collect();
        let v = IntSeq::from_pairs((0..6).map(|_| (rng.gen_range(0..2 * k as u64 + 2), rng.gen_range(-5..6))));
        factors &= sum_functional(&scal, &mod_p(&v, p)?) == sum_functional(&scal, &mod_p(&v.truncate(k as u64), p)?);
    }
    let rows: Vec<Value> = matrix.iter().map(|r| json!(r)).collect();
    let ok = count == 1 << k && factors;
    let r = Report::new("demo-abelian")
        .add("k", k)
        .add("p", p)
        .add("seed", seed)
        .add("distinct", count)
        .add("factor_through_projection", factors)
        .add("matrix", rows)
        .add("verdict", format!("{count}/{} functionals distinct", 1u64 << k));
    if ok {
        Ok(r)
    } else {
        Err(Failure::Verdict(r))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(r) => {
            println!("{}", r.render(cli.format));
            ExitCode::SUCCESS
        }
        Err(Failure::Verdict(r)) => {
            println!("{}", r.render(cli.format));
            ExitCode::from(1)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Parse(e)) => {
            eprintln!("parse error at {e}");
            ExitCode::from(2)
        }
    }
}
