//! Roots of polynomials with Puiseux-series coefficients, constructed from
//! a point of the tropical hypersurface and a root of the initial form.
//!
//! The pipeline is [`parse`] → [`tropical`] → [`lifting`], over either
//! exact rationals or approximate complex numbers (see [`field`]). The
//! [`cli`] module drives the same pipeline from the command line.

pub mod cli;
pub mod error;
pub mod exponent;
pub mod field;
pub mod lifting;
pub mod parse;
pub mod poly;
pub mod series;
pub mod tropical;

pub use error::{Error, Result};
pub use exponent::Exponent;
pub use field::{ComplexApprox, Field, ToleranceConfig};
pub use poly::{FieldPoly, Monomial, SeriesPoly};
pub use series::{Order, PuiseuxSeries};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/series.md")]
    mod series {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    mod polynomials {}
    #[doc = include_str!("../../../book/src/tropical.md")]
    mod tropical {}
    #[doc = include_str!("../../../book/src/lifting.md")]
    mod lifting {}
    #[doc = include_str!("../../../book/src/backends.md")]
    mod backends {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
