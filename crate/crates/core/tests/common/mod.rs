#![allow(dead_code)]

use num_rational::BigRational;
use rand::Rng;

use puiseux_lift::{Exponent, PuiseuxSeries, SeriesPoly};

pub type Q = BigRational;
pub type Series = PuiseuxSeries<Q>;
pub type Poly = SeriesPoly<Q>;

pub const EXAMPLE: &str = "-3*t^2 + 3*t*x - t^2*y + t*x*y - t^3*x*y^4 + (t^4+t^5)*y^4 + x^5";

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

pub fn int(n: i64) -> Q {
    q(n, 1)
}

pub fn exp(n: i64, d: i64) -> Exponent {
    Exponent::new(n, d)
}

/// Nonzero rational with small numerator and denominator.
pub fn nonzero_q(rng: &mut impl Rng) -> Q {
    let n = rng.gen_range(1..=4) * if rng.gen_bool(0.5) { 1 } else { -1 };
    q(n, rng.gen_range(1..=3))
}

/// Rational in `[lo, hi)` with denominator at most `max_den`.
pub fn exponent_in(rng: &mut impl Rng, lo: i64, hi: i64, max_den: i64) -> Exponent {
    let d = rng.gen_range(1..=max_den);
    exp(rng.gen_range(lo * d..hi * d), d)
}

/// Exact nonzero series with `1..=max_terms` terms, order in `[lo, hi)` and
/// later exponents below `tail_hi`.
pub fn exact_series(rng: &mut impl Rng, max_terms: usize, lo: i64, hi: i64, tail_hi: i64) -> Series {
    let first = exponent_in(rng, lo, hi, 3);
    let mut terms = vec![(first.clone(), nonzero_q(rng))];
    for _ in 1..rng.gen_range(1..=max_terms) {
        let e = exponent_in(rng, lo, tail_hi, 3);
        if e > first {
            terms.push((e, nonzero_q(rng)));
        }
    }
    Series::from_terms(terms)
}

/// Sparse polynomial with exact coefficients: `1..=max_terms` monomials of
/// per-variable degree at most `max_deg`, each coefficient a sum of up to
/// two terms `c t^e` with integer `e` in `[0, 3)`.
pub fn sparse_poly(rng: &mut impl Rng, nvars: usize, max_terms: usize, max_deg: u32) -> Poly {
    loop {
        let mut p = Poly::zero(nvars);
        for _ in 0..rng.gen_range(1..=max_terms) {
            let m: Vec<u32> = (0..nvars).map(|_| rng.gen_range(0..=max_deg)).collect();
            let c = Series::from_terms((0..rng.gen_range(1..=2)).map(|_| (Exponent::integer(rng.gen_range(0..3)), nonzero_q(rng))));
            if c.is_exact_zero() {
                continue;
            }
            p = p.add(&Poly::from_terms(nvars, [(m, c)]));
        }
        if !p.is_zero() {
            return p;
        }
    }
}

/// A polynomial `Σ_j c_j(x) (x_j - s_j)` vanishing at the planted point `s`.
pub struct Planted {
    pub f: Poly,
    pub root: Vec<Series>,
}

pub fn planted(rng: &mut impl Rng, nvars: usize) -> Planted {
    loop {
        let root: Vec<Series> = (0..nvars).map(|_| exact_series(rng, 4, -1, 4, 5)).collect();
        let mut f = Poly::zero(nvars);
        for (j, s) in root.iter().enumerate() {
            let linear = Poly::variable(nvars, j).sub(&Poly::constant(nvars, s.clone()));
            f = f.add(&sparse_poly(rng, nvars, 2, 2).mul(&linear));
        }
        if !f.is_zero() {
            return Planted { f, root };
        }
    }
}
