//! Truncated Puiseux series in `t` with rational exponents.
//!
//! A [`PuiseuxSeries`] is a finite list of terms `c·t^e` with strictly
//! increasing exponents, plus an optional truncation `T` meaning the series
//! is only known modulo `O(t^T)`. Series without a truncation are exact.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::field::Field;

/// Order of a series: a rational exponent or `+∞` for the exact zero.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Order {
    Finite(Exponent),
    Infinity,
}

impl Order {
    pub fn finite(&self) -> Option<&Exponent> {
        match self {
            Order::Finite(e) => Some(e),
            Order::Infinity => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(e) => write!(f, "{e}"),
            Order::Infinity => f.write_str("infinity"),
        }
    }
}

#[derive(Clone, PartialEq)]
pub struct PuiseuxSeries<F> {
    terms: Vec<(Exponent, F)>,
    truncation: Option<Exponent>,
}

impl<F: Field> PuiseuxSeries<F> {
    /// The exact zero series.
    pub fn zero() -> Self {
        PuiseuxSeries { terms: Vec::new(), truncation: None }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::monomial(c, Exponent::zero())
    }

    /// The exact series `c·t^e`.
    pub fn monomial(c: F, e: Exponent) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            PuiseuxSeries { terms: vec![(e, c)], truncation: None }
        }
    }

    /// `O(t^T)`: a series known only to vanish below `T`.
    pub fn big_o(truncation: Exponent) -> Self {
        PuiseuxSeries { terms: Vec::new(), truncation: Some(truncation) }
    }

    /// Builds an exact series, combining equal exponents and dropping zeros.
    pub fn from_terms(terms: impl IntoIterator<Item = (Exponent, F)>) -> Self {
        Self::collect(terms, None)
    }

    /// Builds a series truncated at `truncation` (`None` for exact).
    pub fn with_truncation(terms: impl IntoIterator<Item = (Exponent, F)>, truncation: Option<Exponent>) -> Self {
        Self::collect(terms, truncation)
    }

    fn collect(terms: impl IntoIterator<Item = (Exponent, F)>, truncation: Option<Exponent>) -> Self {
        let mut acc: BTreeMap<Exponent, F> = BTreeMap::new();
        for (e, c) in terms {
            match acc.get_mut(&e) {
                Some(existing) => *existing = existing.add(&c),
                None => {
                    acc.insert(e, c);
                }
            }
        }
        let terms = acc
            .into_iter()
            .filter(|(e, c)| !c.is_zero() && truncation.as_ref().is_none_or(|t| e < t))
            .collect();
        PuiseuxSeries { terms, truncation }
    }

    pub fn terms(&self) -> &[(Exponent, F)] {
        &self.terms
    }

    /// `None` when the series is exact.
    pub fn truncation(&self) -> Option<&Exponent> {
        self.truncation.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.truncation.is_none()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.truncation.is_none()
    }

    /// Smallest exponent with a nonzero coefficient.
    ///
    /// Fails with [`Error::IndeterminateOrder`] for `O(t^T)`, which must not
    /// be mistaken for zero.
    pub fn order(&self) -> Result<Order> {
        match (self.terms.first(), &self.truncation) {
            (Some((e, _)), _) => Ok(Order::Finite(e.clone())),
            (None, None) => Ok(Order::Infinity),
            (None, Some(t)) => Err(Error::IndeterminateOrder(t.to_string())),
        }
    }

    pub fn principal_coefficient(&self) -> Result<&F> {
        match (self.terms.first(), &self.truncation) {
            (Some((_, c)), _) => Ok(c),
            (None, None) => Err(Error::ZeroSeries),
            (None, Some(t)) => Err(Error::IndeterminateOrder(t.to_string())),
        }
    }

    /// Lower bound on the true order: the first term's exponent, or the
    /// truncation when no term is known. `None` means `+∞`.
    pub fn order_lower_bound(&self) -> Option<Exponent> {
        match self.terms.first() {
            Some((e, _)) => Some(e.clone()),
            None => self.truncation.clone(),
        }
    }

    /// Coefficient of `t^e`, zero when absent.
    pub fn coefficient(&self, e: &Exponent) -> F {
        self.terms
            .binary_search_by(|(x, _)| x.cmp(e))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| F::zero())
    }

    pub fn neg(&self) -> Self {
        PuiseuxSeries {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
            truncation: self.truncation.clone(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let truncation = min_bound(self.truncation.clone(), rhs.truncation.clone());
        let mut terms = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < rhs.terms.len() {
            let take = match (self.terms.get(i), rhs.terms.get(j)) {
                (Some((a, _)), Some((b, _))) => a.cmp(b),
                (Some(_), None) => std::cmp::Ordering::Less,
                (None, _) => std::cmp::Ordering::Greater,
            };
            let (e, c) = match take {
                std::cmp::Ordering::Less => {
                    i += 1;
                    self.terms[i - 1].clone()
                }
                std::cmp::Ordering::Greater => {
                    j += 1;
                    rhs.terms[j - 1].clone()
                }
                std::cmp::Ordering::Equal => {
                    let e = self.terms[i].0.clone();
                    let c = self.terms[i].1.add(&rhs.terms[j].1);
                    i += 1;
                    j += 1;
                    (e, c)
                }
            };
            if truncation.as_ref().is_some_and(|t| &e >= t) {
                continue;
            }
            if !c.is_zero() {
                terms.push((e, c));
            }
        }
        PuiseuxSeries { terms, truncation }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    /// Product with truncation `min(lo(a) + T(b), lo(b) + T(a))`, where `lo`
    /// is [`Self::order_lower_bound`].
    pub fn mul(&self, rhs: &Self) -> Self {
        let bound = |lo: Option<Exponent>, t: &Option<Exponent>| match (lo, t) {
            (Some(lo), Some(t)) => Some(lo + t),
            _ => None,
        };
        let truncation = min_bound(
            bound(self.order_lower_bound(), &rhs.truncation),
            bound(rhs.order_lower_bound(), &self.truncation),
        );
        if self.terms.is_empty() || rhs.terms.is_empty() {
            return PuiseuxSeries { terms: Vec::new(), truncation };
        }
        let mut acc: BTreeMap<Exponent, F> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea + eb;
                if truncation.as_ref().is_some_and(|t| &e >= t) {
                    break;
                }
                let c = ca.mul(cb);
                match acc.get_mut(&e) {
                    Some(existing) => *existing = existing.add(&c),
                    None => {
                        acc.insert(e, c);
                    }
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        PuiseuxSeries { terms, truncation }
    }

    /// Multiplies every term by `c`.
    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() && self.is_exact() {
            return Self::zero();
        }
        let terms = self.terms.iter().map(|(e, x)| (e.clone(), x.mul(c))).filter(|(_, x)| !x.is_zero()).collect();
        PuiseuxSeries { terms, truncation: self.truncation.clone() }
    }

    /// Multiplies by `t^e`.
    pub fn shift(&self, e: &Exponent) -> Self {
        PuiseuxSeries {
            terms: self.terms.iter().map(|(x, c)| (x + e, c.clone())).collect(),
            truncation: self.truncation.as_ref().map(|t| t + e),
        }
    }

    /// `s^m` by repeated squaring; `s^0` is the exact one.
    pub fn pow(&self, mut m: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        while m > 0 {
            if m & 1 == 1 {
                result = result.mul(&base);
            }
            m >>= 1;
            if m > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Drops terms at or above `bound` and lowers the truncation to it.
    pub fn truncate(&self, bound: &Exponent) -> Self {
        let truncation = min_bound(self.truncation.clone(), Some(bound.clone()));
        let limit = truncation.as_ref().unwrap();
        PuiseuxSeries {
            terms: self.terms.iter().filter(|(e, _)| e < limit).cloned().collect(),
            truncation,
        }
    }

    /// Same terms with the truncation removed.
    pub fn exact_part(&self) -> Self {
        PuiseuxSeries { terms: self.terms.clone(), truncation: None }
    }
}

fn min_bound(a: Option<Exponent>, b: Option<Exponent>) -> Option<Exponent> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, None) => a,
        (None, b) => b,
    }
}

/// Renders `t^e` as `t`, `t^k`, or `t^(p/q)`.
pub(crate) fn render_t_power(e: &Exponent) -> String {
    if e.is_one() {
        "t".to_string()
    } else if e.is_integer() && !e.is_negative() {
        format!("t^{e}")
    } else {
        format!("t^({e})")
    }
}

impl<F: Field> fmt::Display for PuiseuxSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.terms {
            let negative = c.is_negative();
            let magnitude = if negative { c.neg() } else { c.clone() };
            let sign = match (first, negative) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let body = if e.is_zero() {
                magnitude.to_string()
            } else if magnitude.is_one() {
                render_t_power(e)
            } else {
                format!("{magnitude}*{}", render_t_power(e))
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        match (&self.truncation, first) {
            (Some(t), true) => write!(f, "O(t^({t}))"),
            (Some(t), false) => write!(f, " + O(t^({t}))"),
            (None, true) => f.write_str("0"),
            (None, false) => Ok(()),
        }
    }
}

impl<F: Field> fmt::Debug for PuiseuxSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type S = PuiseuxSeries<BigRational>;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn s(terms: &[(i64, i64, i64)]) -> S {
        S::from_terms(terms.iter().map(|&(c, n, d)| (Exponent::new(n, d), q(c))))
    }

    fn e(n: i64) -> Exponent {
        Exponent::integer(n)
    }

    #[test]
    fn order_examples() {
        assert_eq!(s(&[(3, 3, 1), (1, 5, 1)]).order().unwrap(), Order::Finite(e(3)));
        assert_eq!(S::zero().order().unwrap(), Order::Infinity);
        assert_eq!(s(&[(1, -1, 1), (1, 0, 1)]).order().unwrap(), Order::Finite(e(-1)));
        assert!(matches!(S::big_o(e(4)).order(), Err(Error::IndeterminateOrder(_))));
    }

    #[test]
    fn principal_coefficient_examples() {
        assert_eq!(*s(&[(1, 1, 1), (1, 2, 1)]).principal_coefficient().unwrap(), q(1));
        assert_eq!(*s(&[(-3, 0, 1), (-1, 2, 1), (-5, 3, 1)]).principal_coefficient().unwrap(), q(-3));
        assert_eq!(*s(&[(5, 1, 2)]).principal_coefficient().unwrap(), q(5));
        assert_eq!(S::zero().principal_coefficient(), Err(Error::ZeroSeries));
    }

    #[test]
    fn arithmetic_examples() {
        let t = s(&[(1, 1, 1)]);
        assert_eq!(t.mul(&s(&[(1, 1, 1), (1, 2, 1)])), s(&[(1, 2, 1), (1, 3, 1)]));

        let a = S::one().add(&S::big_o(e(2)));
        let b = s(&[(-1, 0, 1), (1, 1, 1)]);
        let sum = a.add(&b);
        assert_eq!(sum, S::with_truncation([(e(1), q(1))], Some(e(2))));
        assert_eq!(sum.to_string(), "t + O(t^(2))");

        let z = s(&[(-3, 2, 1)]).add(&s(&[(3, 2, 1)]));
        assert!(z.is_exact_zero());
    }

    #[test]
    fn mul_truncation_bound() {
        // (t + O(t^3)) * (t^2 + O(t^5)) = t^3 + O(t^5)
        let a = S::with_truncation([(e(1), q(1))], Some(e(3)));
        let b = S::with_truncation([(e(2), q(1))], Some(e(5)));
        let p = a.mul(&b);
        assert_eq!(p.truncation(), Some(&e(5)));
        assert_eq!(p.terms(), &[(e(3), q(1))]);
        // exact zero annihilates truncation
        assert!(S::zero().mul(&a).is_exact_zero());
    }

    #[test]
    fn pow_examples() {
        let p = s(&[(1, 1, 1), (1, 2, 1)]).pow(5);
        assert_eq!(p, s(&[(1, 5, 1), (5, 6, 1), (10, 7, 1), (10, 8, 1), (5, 9, 1), (1, 10, 1)]));
        assert_eq!(s(&[(7, 3, 1)]).pow(0), S::one());
        assert_eq!(s(&[(1, 1, 2)]).pow(2), s(&[(1, 1, 1)]));
    }

    #[test]
    fn truncate_examples() {
        let a = s(&[(3, 0, 1), (1, 1, 1), (1, 9, 1)]).truncate(&e(5));
        assert_eq!(a.to_string(), "3 + t + O(t^(5))");
        assert_eq!(S::zero().truncate(&e(5)).to_string(), "O(t^(5))");
        assert_eq!(s(&[(1, 7, 1)]).truncate(&e(5)), S::big_o(e(5)));
    }

    #[test]
    fn rendering() {
        assert_eq!(s(&[(-3, 0, 1), (-1, 2, 1), (-5, 3, 1)]).to_string(), "-3 - t^2 - 5*t^3");
        assert_eq!(s(&[(2, 1, 2), (1, -1, 1)]).to_string(), "t^(-1) + 2*t^(1/2)");
        assert_eq!(S::zero().to_string(), "0");
    }
}
