//! Symbolic calculus for infinitary words over `{a_n, b_n, c_n}`: the
//! Hawaiian earring group, its harmonic archipelago quotient, and the
//! substitution maps between them.
//!
//! ```
//! use transword::words::parse_word;
//!
//! let telescope = parse_word("st(+,0,{a(k) a(k+1)^-1})").unwrap();
//! assert_eq!(telescope.reduce().to_string(), "[a0]");
//! ```

pub mod abelian;
pub mod endo;
pub mod error;
pub mod freegroup;
pub mod hag;
pub mod sigma;
pub mod words;

pub use error::{Error, InputError, ParseError, Result};
pub use freegroup::{Family, FreeWord, Generator, Letter, Sign};
pub use words::{SchematicWord, Schema, Segment, SetSpec};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/words.md")]
    mod words {}
    #[doc = include_str!("../../../book/src/reduction.md")]
    mod reduction {}
    #[doc = include_str!("../../../book/src/quotient.md")]
    mod quotient {}
    #[doc = include_str!("../../../book/src/families.md")]
    mod families {}
    #[doc = include_str!("../../../book/src/substitutions.md")]
    mod substitutions {}
    #[doc = include_str!("../../../book/src/abelian.md")]
    mod abelian {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
