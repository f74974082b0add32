//! The min-plus layer: tropicalization, evaluation with argmin tracking,
//! hypersurface membership, initial forms, the valuation gap below the
//! initial layer, and univariate Newton polygons.

use std::fmt;

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::field::Field;
use crate::poly::{FieldPoly, Monomial, SeriesPoly};
use crate::series::Order;

/// `f(x) = min_i (a_i + i·x)` with `a_i` the order of the `i`-th coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalPoly {
    nvars: usize,
    terms: Vec<(Monomial, Exponent)>,
}

/// Value of a tropical polynomial at a point and the monomials attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropEvalResult {
    pub value: Exponent,
    pub argmin: Vec<Monomial>,
}

impl TropicalPoly {
    pub fn new(nvars: usize, terms: Vec<(Monomial, Exponent)>) -> Self {
        debug_assert!(terms.iter().all(|(m, _)| m.len() == nvars));
        TropicalPoly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, Exponent)] {
        &self.terms
    }

    /// Exact minimum of `a_i + i·b` and the full set of minimizers.
    pub fn eval(&self, b: &[Exponent]) -> TropEvalResult {
        assert_eq!(b.len(), self.nvars, "point length mismatch");
        assert!(!self.terms.is_empty(), "empty tropical polynomial");
        let mut value: Option<Exponent> = None;
        let mut argmin = Vec::new();
        for (m, a) in &self.terms {
            let v = a + &Exponent::dot(m, b);
            match value.as_ref().map(|cur| v.cmp(cur)) {
                Some(std::cmp::Ordering::Greater) => {}
                Some(std::cmp::Ordering::Equal) => argmin.push(m.clone()),
                _ => {
                    value = Some(v);
                    argmin = vec![m.clone()];
                }
            }
        }
        TropEvalResult { value: value.unwrap(), argmin }
    }

    /// `b` lies on the tropical hypersurface when the minimum is attained at
    /// least twice.
    pub fn is_member(&self, b: &[Exponent]) -> bool {
        self.eval(b).argmin.len() >= 2
    }

    /// Renders as `min{2, 1+x, 0+5x}`.
    pub fn render(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, a)| {
                let linear: Vec<String> = m
                    .iter()
                    .zip(names)
                    .filter(|(k, _)| **k > 0)
                    .map(|(k, n)| if *k == 1 { n.clone() } else { format!("{k}{n}") })
                    .collect();
                if linear.is_empty() {
                    a.to_string()
                } else {
                    format!("{a}+{}", linear.join("+"))
                }
            })
            .collect();
        format!("min{{{}}}", parts.join(", "))
    }
}

impl fmt::Display for TropicalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&crate::poly::default_names(self.nvars)))
    }
}

/// One tropical term `(i, o(a_i))` per monomial.
pub fn tropicalize<F: Field>(f: &SeriesPoly<F>) -> Result<TropicalPoly> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let terms = f
        .terms()
        .map(|(m, c)| match c.order()? {
            Order::Finite(e) => Ok((m.clone(), e)),
            Order::Infinity => unreachable!("zero coefficients are never stored"),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TropicalPoly::new(f.nvars(), terms))
}

/// Principal coefficients of the monomials attaining `f(b)`: the lowest
/// `t`-layer of `f(x·t^b)`.
pub fn initial_form<F: Field>(f: &SeriesPoly<F>, b: &[Exponent]) -> Result<FieldPoly<F>> {
    let trop = tropicalize(f)?;
    let eval = trop.eval(b);
    let mut out = FieldPoly::zero(f.nvars());
    for m in eval.argmin {
        let c = f.coefficient(&m).expect("argmin monomial is in the support");
        out.add_term(m, c.principal_coefficient()?.clone());
    }
    Ok(out)
}

/// Distance from `f(b)` to the next `t`-exponent present in `f(x·t^b)`;
/// `None` when that expansion has a single layer.
///
/// Requires exact coefficients: a truncated tail cannot certify the gap.
pub fn epsilon_gap<F: Field>(f: &SeriesPoly<F>, b: &[Exponent]) -> Result<Option<Exponent>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.is_exact() {
        return Err(Error::IndeterminatePrecision("gap needs exact coefficients".into()));
    }
    let mut lowest: Option<Exponent> = None;
    let mut second: Option<Exponent> = None;
    for (m, c) in f.terms() {
        let shift = Exponent::dot(m, b);
        for (e, _) in c.terms() {
            let v = e + &shift;
            match &lowest {
                None => lowest = Some(v),
                Some(lo) if &v < lo => {
                    second = lowest.take();
                    lowest = Some(v);
                }
                Some(lo) if &v > lo && second.as_ref().is_none_or(|s| &v < s) => second = Some(v),
                _ => {}
            }
        }
    }
    Ok(second.map(|s| s - lowest.unwrap()))
}

/// Orders `r` at which the univariate tropical polynomial attains its
/// minimum at least twice, ascending: the negated slopes of the lower convex
/// hull of the points `(i, a_i)`.
pub fn newton_polygon_candidates<F: Field>(f: &SeriesPoly<F>) -> Result<Vec<Exponent>> {
    if f.nvars() != 1 {
        return Err(Error::InvalidInput(format!("Newton polygon needs a univariate polynomial, got {} variables", f.nvars())));
    }
    let trop = tropicalize(f)?;
    Ok(lower_hull_slopes(trop.terms().iter().map(|(m, a)| (m[0], a.clone())).collect()))
}

fn lower_hull_slopes(mut points: Vec<(u32, Exponent)>) -> Vec<Exponent> {
    points.sort_by_key(|(i, _)| *i);
    let mut hull: Vec<(Exponent, Exponent)> = Vec::new();
    for (i, a) in points {
        let p = (Exponent::integer(i as i64), a);
        while hull.len() >= 2 {
            let (o, q) = (&hull[hull.len() - 2], &hull[hull.len() - 1]);
            let cross = (&q.0 - &o.0) * (&p.1 - &o.1) - (&q.1 - &o.1) * (&p.0 - &o.0);
            if cross.is_positive() {
                break;
            }
            hull.pop();
        }
        hull.push(p);
    }
    let mut slopes: Vec<Exponent> = hull
        .windows(2)
        .map(|w| {
            let dx = &w[1].0 - &w[0].0;
            let dy = &w[1].1 - &w[0].1;
            -Exponent::from_rational(dy.into_rational() / dx.into_rational())
        })
        .collect();
    slopes.sort();
    slopes
}
