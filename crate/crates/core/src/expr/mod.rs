//! Exact symbolic scalars.

mod atom;
mod canon;
mod gcd;
mod parse;
mod poly;
mod print;
mod ratfunc;
mod symbol;

pub use atom::{Atom, AtomKind};
pub use canon::{EvalError, Expr, SinSet};
pub use gcd::{gcd, lcm};
pub use parse::{parse, parse_free, parse_with};
pub use poly::{lex_cmp, q_int, q_to_f64, Mono, Poly, Q};
pub use ratfunc::RatFunc;
pub use symbol::{fresh_name, Chart, Symbol};

#[cfg(test)]
mod tests;
