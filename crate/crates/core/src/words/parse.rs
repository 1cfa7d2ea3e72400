//! Parser for the textual word syntax.
//!
//! ```text
//! word    := segment*
//! segment := letter | '[' letter* ']' | 'st' '(' ('+'|'-') ',' N [':' N] ',' '{' entry* '}' ')'
//! letter  := ('a'|'b'|'c') N ['^-1' | '^1']
//! entry   := ('a'|'b'|'c') '(' index ')' sign | 'sel' '(' set ')' '(' index ')' sign
//! index   := [N] var ['+' N] | [N] 'pair' '(' N ',' var ')' ['+' N] | N | 'poly' '(' Z ',' Z ',' Z ')'
//! set     := 'fin' '{' N,* '}' | 'eper' '(' bits ',' bits ')' | 'pcode' '(' bits ',' bits ')' | name
//! ```
//!
//! Whitespace is ignored between tokens; commas between entries are optional.

use super::index::IndexFn;
use super::schema::{Direction, Entry, FamSpec, Schema};
use super::setspec::SetSpec;
use super::{SchematicWord, Segment};
use crate::error::ParseError;
use crate::freegroup::{Family, FreeWord, Letter, Sign};

pub type PResult<T> = std::result::Result<T, ParseError>;

/// Resolves set names such as `S1`.
pub type Resolver<'r> = &'r dyn Fn(&str) -> Option<SetSpec>;

pub fn parse_word(input: &str) -> PResult<SchematicWord> {
    parse_word_with(input, &|_| None)
}

pub fn parse_word_with(input: &str, resolve: Resolver<'_>) -> PResult<SchematicWord> {
    let mut p = Parser::new(input);
    let w = p.word(resolve)?;
    p.finish()?;
    Ok(w)
}

pub fn parse_set(input: &str) -> PResult<SetSpec> {
    let mut p = Parser::new(input);
    let s = p.set(&|_| None)?;
    p.finish()?;
    Ok(s)
}

pub(crate) struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    pub(crate) fn error_at(&self, pos: usize, msg: impl Into<String>) -> ParseError {
        let before = &self.src[..pos.min(self.src.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        ParseError {
            line,
            column,
            message: msg.into(),
        }
    }

    pub(crate) fn error(&self, msg: impl Into<String>) -> ParseError {
        self.error_at(self.pos, msg)
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub(crate) fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    pub(crate) fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    pub(crate) fn finish(&mut self) -> PResult<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing input"))
        }
    }

    pub(crate) fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, token: &str) -> PResult<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{token}`")))
        }
    }

    pub(crate) fn number(&mut self) -> PResult<u64> {
        self.skip_ws();
        let digits: String = self.rest().chars().take_while(|c| c.is_ascii_digit()).collect();
        if digits.is_empty() {
            return Err(self.error("expected a number"));
        }
        let v = digits.parse().map_err(|_| self.error("number too large"))?;
        self.pos += digits.len();
        Ok(v)
    }

    fn integer(&mut self) -> PResult<i128> {
        let neg = self.eat("-");
        let v = self.number()? as i128;
        Ok(if neg { -v } else { v })
    }

    pub(crate) fn at_digit(&mut self) -> bool {
        self.peek().is_some_and(|c| c.is_ascii_digit())
    }

    pub(crate) fn ident(&mut self) -> PResult<String> {
        self.skip_ws();
        let id: String = self
            .rest()
            .chars()
            .take_while(|c| c.is_ascii_alphanumeric() || *c == '_')
            .collect();
        if id.is_empty() || id.starts_with(|c: char| c.is_ascii_digit()) {
            return Err(self.error("expected a name"));
        }
        self.pos += id.len();
        Ok(id)
    }

    /// `a3`-style letter start: a family symbol directly followed by a digit.
    fn at_letter(&mut self) -> bool {
        self.skip_ws();
        let mut cs = self.rest().chars();
        matches!(
            (cs.next(), cs.next()),
            (Some('a' | 'b' | 'c'), Some(d)) if d.is_ascii_digit()
        )
    }

    pub(crate) fn sign_suffix(&mut self) -> PResult<Sign> {
        if self.eat("^") {
            if self.eat("-1") {
                return Ok(Sign::Neg);
            }
            self.eat("+");
            self.expect("1")?;
        }
        Ok(Sign::Pos)
    }

    pub(crate) fn letter(&mut self) -> PResult<Letter> {
        self.skip_ws();
        let fam = self
            .rest()
            .chars()
            .next()
            .and_then(Family::from_symbol)
            .ok_or_else(|| self.error("expected a letter"))?;
        self.pos += 1;
        let index = self.number()?;
        let sign = self.sign_suffix()?;
        Ok(Letter::new(fam, index, sign))
    }

    pub(crate) fn block(&mut self) -> PResult<FreeWord> {
        self.expect("[")?;
        let mut letters = Vec::new();
        while !self.eat("]") {
            if self.at_end() {
                return Err(self.error("unterminated block"));
            }
            letters.push(self.letter()?);
        }
        Ok(FreeWord::new(letters))
    }

    pub(crate) fn word(&mut self, resolve: Resolver<'_>) -> PResult<SchematicWord> {
        let mut segs = Vec::new();
        loop {
            match self.peek() {
                None | Some(']' | ',' | '}' | ')') => break,
                Some('[') => segs.push(Segment::Block(self.block()?)),
                Some('s') if self.rest().starts_with("st") => segs.push(Segment::Stream(self.stream(resolve)?)),
                _ if self.at_letter() => segs.push(Segment::Block(FreeWord::new(vec![self.letter()?]))),
                _ => return Err(self.error("expected a letter, block or stream")),
            }
        }
        Ok(SchematicWord::from_segments(segs))
    }

    fn stream(&mut self, resolve: Resolver<'_>) -> PResult<Schema> {
        let start = self.pos;
        self.expect("st")?;
        self.expect("(")?;
        let direction = if self.eat("+") {
            Direction::Forward
        } else if self.eat("-") {
            Direction::Backward
        } else {
            return Err(self.error("expected `+` or `-`"));
        };
        self.expect(",")?;
        let k0 = self.number()?;
        let offset = if self.eat(":") { self.number()? as usize } else { 0 };
        self.expect(",")?;
        self.expect("{")?;
        let mut entries = Vec::new();
        while !self.eat("}") {
            if self.at_end() {
                return Err(self.error("unterminated entry list"));
            }
            entries.push(self.entry(resolve)?);
            self.eat(",");
        }
        self.expect(")")?;
        Schema::new(direction, k0, offset, entries).map_err(|e| self.error_at(start, e.to_string()))
    }

    fn entry(&mut self, resolve: Resolver<'_>) -> PResult<Entry> {
        let fam = if self.eat("sel") {
            self.expect("(")?;
            let s = self.set(resolve)?;
            self.expect(")")?;
            FamSpec::Sel(s)
        } else {
            self.skip_ws();
            let fam = self
                .rest()
                .chars()
                .next()
                .and_then(Family::from_symbol)
                .ok_or_else(|| self.error("expected an entry"))?;
            self.pos += 1;
            FamSpec::of(fam)
        };
        self.expect("(")?;
        let index = self.index_fn()?;
        self.expect(")")?;
        let sign = self.sign_suffix()?;
        Ok(Entry::new(fam, index, sign))
    }

    /// An index expression in one variable (its name is not checked).
    pub(crate) fn index_fn(&mut self) -> PResult<IndexFn> {
        let start = self.pos;
        if self.eat("poly") {
            self.expect("(")?;
            let q2 = self.integer()?;
            self.expect(",")?;
            let q1 = self.integer()?;
            self.expect(",")?;
            let q0 = self.integer()?;
            self.expect(")")?;
            return IndexFn::from_raw(q2, q1, q0).map_err(|e| self.error_at(start, e.to_string()));
        }
        let coef = if self.at_digit() { Some(self.number()?) } else { None };
        self.eat("*");
        let base = if self.eat("pair") {
            self.expect("(")?;
            let m = self.number()?;
            self.expect(",")?;
            self.ident()?;
            self.expect(")")?;
            Some(IndexFn::pairing(m).outer(coef.unwrap_or(1), 0))
        } else if self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
            self.ident()?;
            Some(IndexFn::affine(coef.unwrap_or(1), 0))
        } else {
            None
        };
        match base {
            None => coef.map(IndexFn::constant).ok_or_else(|| self.error("expected an index")),
            Some(f) => {
                let beta = if self.eat("+") { self.number()? } else { 0 };
                Ok(f.outer(1, beta))
            }
        }
    }

    fn bits(&mut self) -> PResult<Vec<bool>> {
        self.expect("\"")?;
        let mut out = Vec::new();
        loop {
            match self.rest().chars().next() {
                Some('0') => out.push(false),
                Some('1') => out.push(true),
                Some('"') => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(self.error("expected a bit string of 0s and 1s")),
            }
            self.pos += 1;
        }
    }

    pub(crate) fn set(&mut self, resolve: Resolver<'_>) -> PResult<SetSpec> {
        let start = self.pos;
        if self.eat("fin") {
            self.expect("{")?;
            let mut elems = Vec::new();
            while !self.eat("}") {
                elems.push(self.number()?);
                if !self.eat(",") {
                    self.expect("}")?;
                    break;
                }
            }
            return Ok(SetSpec::finite(elems));
        }
        for (kw, code) in [("eper", false), ("pcode", true)] {
            if self.eat(kw) {
                self.expect("(")?;
                let prefix = self.bits()?;
                self.expect(",")?;
                let period = self.bits()?;
                self.expect(")")?;
                let s = if code {
                    SetSpec::prefix_code(prefix, period)
                } else {
                    SetSpec::ev_periodic(prefix, period)
                };
                return s.map_err(|e| self.error_at(start, e.to_string()));
            }
        }
        let name = self.ident()?;
        resolve(&name).ok_or_else(|| self.error_at(start, format!("unknown set `{name}`")))
    }
}
