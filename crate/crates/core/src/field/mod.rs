//! Coefficient fields for principal coefficients and series terms.
//!
//! Two backends implement [`Field`]: exact rationals ([`BigRational`]) and
//! double-precision complex numbers ([`ComplexApprox`]) compared against a
//! zero tolerance. Backends are distinct types, so mixing them is a type error.

mod complex;
mod rational;

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;

use crate::error::Result;

pub use complex::{set_zero_tolerance, zero_tolerance, ComplexApprox};
pub use rational::rational_roots;

/// Tolerances for the complex backend. The rational backend ignores them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    pub zero_tolerance: f64,
    pub root_residual_tolerance: f64,
    pub max_iterations: usize,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig { zero_tolerance: 1e-10, root_residual_tolerance: 1e-8, max_iterations: 1000 }
    }
}

/// Arithmetic contract shared by both coefficient backends.
pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// Backend name as used on the command line.
    const NAME: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(q: &BigRational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(n.into()))
    }

    /// Exact test for rationals, tolerance test for complex values.
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self>;

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    fn approx_eq(&self, rhs: &Self) -> bool {
        self.sub(rhs).is_zero()
    }

    fn is_one(&self) -> bool {
        self.approx_eq(&Self::one())
    }

    /// True when the value is a negative real; used only for rendering signs.
    fn is_negative(&self) -> bool {
        false
    }

    fn magnitude(&self) -> f64;

    /// Total order used to make root selection deterministic.
    fn canonical_cmp(&self, rhs: &Self) -> Ordering;

    /// Roots of `Σ coeffs[i] y^i`, with multiplicity, in canonical order.
    ///
    /// The rational backend only returns rational roots, so the result may
    /// have fewer than `deg` entries.
    fn roots(coeffs: &[Self], cfg: &ToleranceConfig) -> Result<Vec<Self>>;
}

/// Horner evaluation of a dense univariate polynomial.
pub fn horner<F: Field>(coeffs: &[F], y: &F) -> F {
    coeffs.iter().rev().fold(F::zero(), |acc, c| acc.mul(y).add(c))
}
