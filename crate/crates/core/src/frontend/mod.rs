//! Text front end: integrand grammar, canonical printing and the JSON
//! result document.

pub mod json;
pub mod parse;
pub mod print;

pub use json::{deserialize_result, serialize_result};
pub use parse::{parse_expr, parse_integrand};
pub use print::{print_expr, print_expr_var};
