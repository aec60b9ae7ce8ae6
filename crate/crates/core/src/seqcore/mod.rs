//! Symbols, words, eventually periodic points and the shift metric.

mod periodic;
pub mod text;
mod word;

pub use periodic::{first_disagreement, lex_compare, rho, EventuallyPeriodic};
pub use text::{parse_sequence, parse_symbols, render_sequence, render_symbols};
pub use word::{lex_compare_words, primitive_root, Symbol, Word};
