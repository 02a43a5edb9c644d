//! Polynomials over `F_q`, their factorization, truncated series and the
//! expression parser shared by the function-field layer.

mod factor;
mod jet;
mod parse;
mod poly;
mod series;

pub use factor::{
    distinct_degree, equal_degree, irreducibles_up_to, necklace_count, poly_factor,
    poly_factor_seeded, squarefree, Factorization, DEFAULT_SPLIT_SEED,
};
pub use jet::{jet_div, jet_inv, jet_mul, LaurentJet};
pub use parse::{parse_expr, parse_poly, ExprAlgebra};
pub use poly::{least_irreducible, Poly};
pub use series::Series;
