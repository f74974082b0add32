//! Sparse multivariate polynomials over Puiseux series and over the
//! coefficient field, with the substitutions used by the lifting recursion.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::field::Field;
use crate::series::PuiseuxSeries;

/// Exponent vector of a monomial `x_1^{i_1} ⋯ x_n^{i_n}`.
pub type Monomial = Vec<u32>;

fn remove_var(m: &[u32], j: usize) -> Monomial {
    m.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, e)| *e).collect()
}

fn mono_mul(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Renders `x^2*y` style monomials; empty string for the constant monomial.
pub(crate) fn render_monomial(m: &[u32], names: &[String]) -> String {
    m.iter()
        .zip(names)
        .filter(|(e, _)| **e > 0)
        .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

/// Default variable names `x1, x2, …`.
pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

/// A polynomial in `n` variables with Puiseux-series coefficients.
#[derive(Clone, PartialEq)]
pub struct SeriesPoly<F> {
    nvars: usize,
    terms: BTreeMap<Monomial, PuiseuxSeries<F>>,
}

impl<F: Field> SeriesPoly<F> {
    pub fn zero(nvars: usize) -> Self {
        SeriesPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: PuiseuxSeries<F>) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The polynomial `x_j`.
    pub fn variable(nvars: usize, j: usize) -> Self {
        let mut m = vec![0; nvars];
        m[j] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(m, PuiseuxSeries::one());
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, PuiseuxSeries<F>)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Adds `c·x^m`, dropping the monomial if the coefficient cancels exactly.
    pub fn add_term(&mut self, m: Monomial, c: PuiseuxSeries<F>) {
        assert_eq!(m.len(), self.nvars, "monomial length mismatch");
        let sum = match self.terms.remove(&m) {
            Some(existing) => existing.add(&c),
            None => c,
        };
        if !sum.is_exact_zero() {
            self.terms.insert(m, sum);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &PuiseuxSeries<F>)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &[u32]) -> Option<&PuiseuxSeries<F>> {
        self.terms.get(m)
    }

    pub fn degree_in(&self, j: usize) -> u32 {
        self.terms.keys().map(|m| m[j]).max().unwrap_or(0)
    }

    pub fn is_exact(&self) -> bool {
        self.terms.values().all(PuiseuxSeries::is_exact)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        SeriesPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(mono_mul(ma, mb), ca.mul(cb));
            }
        }
        out
    }

    pub fn pow(&self, mut m: u32) -> Self {
        let mut result = Self::constant(self.nvars, PuiseuxSeries::one());
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

    /// Multiplies every coefficient by a series.
    pub fn scale(&self, s: &PuiseuxSeries<F>) -> Self {
        Self::from_terms(self.nvars, self.terms.iter().map(|(m, c)| (m.clone(), c.mul(s))))
    }

    /// `f(x_1 t^{b_1}, …, x_n t^{b_n})`: each coefficient `a_i` becomes
    /// `a_i·t^{i·b}`; the monomial support is unchanged.
    pub fn substitute_scaled(&self, b: &[Exponent]) -> Self {
        assert_eq!(b.len(), self.nvars, "order vector length mismatch");
        SeriesPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.shift(&Exponent::dot(m, b)))).collect(),
        }
    }

    /// Replaces `x_j` by the series `s`, giving a polynomial in the other
    /// `n - 1` variables.
    pub fn substitute_coordinate(&self, j: usize, s: &PuiseuxSeries<F>) -> Self {
        assert!(j < self.nvars, "variable index out of range");
        let powers = power_table(s, self.degree_in(j));
        let mut out = Self::zero(self.nvars - 1);
        for (m, c) in &self.terms {
            out.add_term(remove_var(m, j), c.mul(&powers[m[j] as usize]));
        }
        out
    }

    /// Substitutes every variable, returning the resulting series.
    pub fn evaluate(&self, point: &[PuiseuxSeries<F>]) -> PuiseuxSeries<F> {
        assert_eq!(point.len(), self.nvars, "point length mismatch");
        let tables: Vec<Vec<PuiseuxSeries<F>>> =
            point.iter().enumerate().map(|(j, s)| power_table(s, self.degree_in(j))).collect();
        let mut acc = PuiseuxSeries::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (j, &k) in m.iter().enumerate() {
                if k > 0 {
                    term = term.mul(&tables[j][k as usize]);
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// `f(s + x)` for a univariate polynomial (Taylor shift).
    pub fn shift_univariate(&self, s: &PuiseuxSeries<F>) -> Self {
        assert_eq!(self.nvars, 1, "shift_univariate needs one variable");
        let degree = self.degree_in(0);
        let powers = power_table(s, degree);
        let mut out = Self::zero(1);
        for (m, c) in &self.terms {
            let d = m[0];
            let mut binom = num_bigint::BigInt::from(1);
            for k in 0..=d {
                // coefficient of x^k in c·(s + x)^d is c·C(d,k)·s^{d-k}
                let factor = F::from_rational(&num_rational::BigRational::from_integer(binom.clone()));
                out.add_term(vec![k], c.mul(&powers[(d - k) as usize]).scale(&factor));
                binom = binom * (d - k) / (k + 1);
            }
        }
        out
    }

    /// Renders with the given variable names, e.g. `(-3*t^2) + (3*t)*x`.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(m, c)| {
                let mono = render_monomial(m, names);
                match (mono.is_empty(), c.terms().len() == 1 && c.is_exact() && c.terms()[0].1.is_one()) {
                    (true, _) => format!("({c})"),
                    (false, true) if c.terms()[0].0.is_zero() => mono,
                    (false, _) => format!("({c})*{mono}"),
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl<F: Field> fmt::Debug for SeriesPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&default_names(self.nvars)))
    }
}

fn power_table<F: Field>(s: &PuiseuxSeries<F>, degree: u32) -> Vec<PuiseuxSeries<F>> {
    let mut powers = Vec::with_capacity(degree as usize + 1);
    powers.push(PuiseuxSeries::one());
    for k in 1..=degree as usize {
        let next = powers[k - 1].mul(s);
        powers.push(next);
    }
    powers
}

/// A polynomial in `n` variables over the coefficient field.
#[derive(Clone, PartialEq)]
pub struct FieldPoly<F> {
    nvars: usize,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Field> FieldPoly<F> {
    pub fn zero(nvars: usize) -> Self {
        FieldPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, F)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// `x_j - c`.
    pub fn linear(nvars: usize, j: usize, c: &F) -> Self {
        let mut m = vec![0; nvars];
        m[j] = 1;
        Self::from_terms(nvars, [(m, F::one()), (vec![0; nvars], c.neg())])
    }

    pub fn add_term(&mut self, m: Monomial, c: F) {
        assert_eq!(m.len(), self.nvars, "monomial length mismatch");
        let sum = match self.terms.remove(&m) {
            Some(existing) => existing.add(&c),
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(m, sum);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn support(&self) -> Vec<Monomial> {
        self.terms.keys().cloned().collect()
    }

    pub fn coefficient(&self, m: &[u32]) -> Option<&F> {
        self.terms.get(m)
    }

    /// True when some monomial has a positive exponent in `x_j`.
    pub fn uses_variable(&self, j: usize) -> bool {
        self.terms.keys().any(|m| m[j] > 0)
    }

    pub fn degree_in(&self, j: usize) -> u32 {
        self.terms.keys().map(|m| m[j]).max().unwrap_or(0)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(mono_mul(ma, mb), ca.mul(cb));
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.neg());
        }
        out
    }

    /// Evaluates at a point, Horner-style in each variable via cached powers.
    pub fn evaluate(&self, point: &[F]) -> F {
        assert_eq!(point.len(), self.nvars, "point length mismatch");
        let tables: Vec<Vec<F>> = point
            .iter()
            .enumerate()
            .map(|(j, x)| {
                let mut pw = vec![F::one()];
                for k in 1..=self.degree_in(j) as usize {
                    let next = pw[k - 1].mul(x);
                    pw.push(next);
                }
                pw
            })
            .collect();
        self.terms.iter().fold(F::zero(), |acc, (m, c)| {
            let term = m.iter().enumerate().fold(c.clone(), |t, (j, &k)| t.mul(&tables[j][k as usize]));
            acc.add(&term)
        })
    }

    /// Sets `x_j = c`, giving a polynomial in the other `n - 1` variables.
    pub fn partial_substitute(&self, j: usize, c: &F) -> Self {
        assert!(j < self.nvars, "variable index out of range");
        let mut out = Self::zero(self.nvars - 1);
        for (m, coeff) in &self.terms {
            let mut v = coeff.clone();
            for _ in 0..m[j] {
                v = v.mul(c);
            }
            out.add_term(remove_var(m, j), v);
        }
        out
    }

    /// Largest `k` with `(x_j - c)^k` dividing the polynomial, together with
    /// the quotient.
    ///
    /// The polynomial is split by the monomial in the other variables; each
    /// slice is univariate in `x_j` and is divided by synthetic division.
    pub fn factor_multiplicity(&self, j: usize, c: &F) -> Result<(u32, Self)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut slices: BTreeMap<Monomial, Vec<F>> = BTreeMap::new();
        for (m, coeff) in &self.terms {
            let mut rest = m.clone();
            rest[j] = 0;
            let dense = slices.entry(rest).or_default();
            let d = m[j] as usize;
            if dense.len() <= d {
                dense.resize(d + 1, F::zero());
            }
            dense[d] = coeff.clone();
        }
        let mut k = 0;
        loop {
            let divided: Option<Vec<Vec<F>>> = slices.values().map(|dense| divide_linear(dense, c)).collect();
            match divided {
                Some(quotients) => {
                    for (slot, q) in slices.values_mut().zip(quotients) {
                        *slot = q;
                    }
                    k += 1;
                }
                None => break,
            }
        }
        let mut quotient = Self::zero(self.nvars);
        for (rest, dense) in slices {
            for (d, coeff) in dense.into_iter().enumerate() {
                let mut m = rest.clone();
                m[j] = d as u32;
                quotient.add_term(m, coeff);
            }
        }
        Ok((k, quotient))
    }

    /// Renders with the given variable names, e.g. `-3 + 3*x - y + x*y`.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut ordered: Vec<(&Monomial, &F)> = self.terms.iter().collect();
        ordered.sort_by(|(a, _), (b, _)| {
            let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
            da.cmp(&db).then_with(|| b.cmp(a))
        });
        let mut out = String::new();
        for (i, (m, c)) in ordered.into_iter().enumerate() {
            let negative = c.is_negative();
            let magnitude = if negative { c.neg() } else { c.clone() };
            let mono = render_monomial(m, names);
            let body = match (mono.is_empty(), magnitude.is_one()) {
                (true, _) => magnitude.to_string(),
                (false, true) => mono,
                (false, false) => format!("{magnitude}*{mono}"),
            };
            let sign = match (i == 0, negative) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            out.push_str(sign);
            out.push_str(&body);
        }
        out
    }
}

impl<F: Field> fmt::Debug for FieldPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&default_names(self.nvars)))
    }
}

/// Exact division of a dense univariate polynomial by `(x - c)`; `None` if
/// the remainder is nonzero. The zero slice divides trivially.
fn divide_linear<F: Field>(dense: &[F], c: &F) -> Option<Vec<F>> {
    if dense.iter().all(F::is_zero) {
        return Some(Vec::new());
    }
    let n = dense.len() - 1;
    let mut quotient = vec![F::zero(); n];
    let mut carry = F::zero();
    for i in (0..n).rev() {
        carry = dense[i + 1].add(&carry.mul(c));
        quotient[i] = carry.clone();
    }
    let remainder = dense[0].add(&carry.mul(c));
    remainder.is_zero().then_some(quotient)
}
