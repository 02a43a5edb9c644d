//! Exact arithmetic for ideles of function fields of curves over finite fields.
//!
//! Layers, bottom up: [`gf`] finite fields, [`polyser`] polynomials and
//! truncated Laurent jets, [`curve`] places and local expansions,
//! [`funcfield`] rational functions and divisors, [`idele`] the finite-window
//! idele model, [`symbol`] tame symbols and the global pairing, then the
//! orthogonality ([`ortho`]), Picard ([`picard`]) and strong approximation
//! ([`approx`]) checks built on top.

pub mod approx;
pub mod curve;
pub mod error;
pub mod funcfield;
pub mod gf;
pub mod idele;
pub mod ortho;
pub mod picard;
pub mod polyser;
pub mod rng;
pub mod sample;
pub mod symbol;
pub mod verdict;

pub use error::{Error, Result};
pub use gf::{Fe, Field, GFElem};
pub use polyser::{Poly, Series};
