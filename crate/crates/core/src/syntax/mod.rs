//! Line-oriented ASCII surface syntax for concepts and knowledge bases.
//!
//! ```text
//! # comment
//! dialect ALC
//! signature            # optional
//!   concepts: Bob, Rich, John
//!   roles: hasChild
//!   individuals: bob
//! end
//! Bob [= only hasChild.Rich.
//! bob : Bob & some hasChild.John.
//! (bob, john) : hasChild.
//! ```
//!
//! Concept precedence is `not` > `&` > `|`; the argument of `some r.` and
//! `only r.` is an atom, `Top`, `Bot` or a parenthesised concept.

mod lexer;
mod parser;
mod render;

pub use parser::{parse_concept, parse_kb, parse_kb_spanned, parse_sentence};
pub use render::{render_concept, render_kb, render_sentence};

pub(crate) const RESERVED: &[&str] = &[
    "not", "some", "only", "Top", "Bot", "TopRole", "dialect", "signature", "end",
];
